//! Color tables `m × m → colors` and the partitions they induce.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SpaceError;
use crate::tree::{Alphabet, Incidence, Letter};

/// An arbitrary coloring of ordered letter pairs. Colors need not be
/// contiguous; reductions treat a table as a surjection onto its range.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct ColorTable {
    m: usize,
    values: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    m: usize,
    values: Vec<Vec<usize>>,
}

impl TryFrom<TableRepr> for ColorTable {
    type Error = SpaceError;
    fn try_from(r: TableRepr) -> Result<Self, Self::Error> {
        ColorTable::from_rows(r.m, &r.values)
    }
}

impl From<ColorTable> for TableRepr {
    fn from(t: ColorTable) -> Self {
        TableRepr {
            m: t.m,
            values: t.rows(),
        }
    }
}

impl ColorTable {
    pub fn from_fn(m: usize, f: impl Fn(Letter, Letter) -> usize) -> Result<Self, SpaceError> {
        Alphabet::new(m)?;
        let mut values = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                values.push(f(i as Letter, j as Letter));
            }
        }
        Ok(ColorTable { m, values })
    }

    pub fn from_rows(m: usize, rows: &[Vec<usize>]) -> Result<Self, SpaceError> {
        Alphabet::new(m)?;
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(SpaceError::InvalidTable(format!("expected a {m}x{m} table")));
        }
        Ok(ColorTable {
            m,
            values: rows.concat(),
        })
    }

    pub fn constant(m: usize, color: usize) -> Result<Self, SpaceError> {
        ColorTable::from_fn(m, |_, _| color)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.m).expect("validated at construction")
    }

    pub fn get(&self, i: Letter, j: Letter) -> usize {
        self.values[i as usize * self.m + j as usize]
    }

    pub fn color_of(&self, inc: Incidence) -> usize {
        self.get(inc.0, inc.1)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.values.chunks(self.m).map(<[usize]>::to_vec).collect()
    }

    pub fn range(&self) -> BTreeSet<usize> {
        self.values.iter().copied().collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Letter, Letter)> + '_ {
        let m = self.m as Letter;
        (0..m).flat_map(move |i| (0..m).map(move |j| (i, j)))
    }

    /// The induced partition of `m × m`, as a set of pieces.
    pub fn partition(&self) -> BTreeSet<BTreeSet<(Letter, Letter)>> {
        self.range()
            .into_iter()
            .map(|c| self.pairs().filter(|&(i, j)| self.get(i, j) == c).collect())
            .collect()
    }

    /// Relabels the range onto `0..|range|`, preserving color order.
    pub fn normalized(&self) -> PartitionTable {
        let range: Vec<usize> = self.range().into_iter().collect();
        let values = self
            .values
            .iter()
            .map(|c| range.binary_search(c).expect("color in range"))
            .collect();
        PartitionTable {
            n: range.len(),
            table: ColorTable { m: self.m, values },
        }
    }
}

impl fmt::Debug for ColorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColorTable{:?}", self.rows())
    }
}

/// A surjective coloring `m × m → {0, .., n-1}`; color `c` is the piece
/// `f⁻¹(c)` of the partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct PartitionTable {
    n: usize,
    table: ColorTable,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    m: usize,
    n: usize,
    values: Vec<Vec<usize>>,
}

impl TryFrom<PartitionRepr> for PartitionTable {
    type Error = SpaceError;
    fn try_from(r: PartitionRepr) -> Result<Self, Self::Error> {
        PartitionTable::new(ColorTable::from_rows(r.m, &r.values)?, r.n)
    }
}

impl From<PartitionTable> for PartitionRepr {
    fn from(p: PartitionTable) -> Self {
        PartitionRepr {
            m: p.table.m,
            n: p.n,
            values: p.table.rows(),
        }
    }
}

impl PartitionTable {
    pub fn new(table: ColorTable, n: usize) -> Result<Self, SpaceError> {
        if n == 0 {
            return Err(SpaceError::InvalidTable("n must be at least 1".into()));
        }
        if let Some(c) = table.values.iter().find(|&&c| c >= n) {
            return Err(SpaceError::InvalidTable(format!("color {c} is not below n = {n}")));
        }
        let range = table.range();
        if let Some(missing) = (0..n).find(|c| !range.contains(c)) {
            return Err(SpaceError::InvalidTable(format!("color {missing} never occurs")));
        }
        Ok(PartitionTable { n, table })
    }

    pub fn from_rows(m: usize, n: usize, rows: &[Vec<usize>]) -> Result<Self, SpaceError> {
        PartitionTable::new(ColorTable::from_rows(m, rows)?, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.table.m
    }

    pub fn table(&self) -> &ColorTable {
        &self.table
    }

    pub fn get(&self, i: Letter, j: Letter) -> usize {
        self.table.get(i, j)
    }

    pub fn color_of(&self, inc: Incidence) -> usize {
        self.table.color_of(inc)
    }
}

impl AsRef<ColorTable> for PartitionTable {
    fn as_ref(&self) -> &ColorTable {
        &self.table
    }
}

impl AsRef<ColorTable> for ColorTable {
    fn as_ref(&self) -> &ColorTable {
        self
    }
}
