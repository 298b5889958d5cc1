//! Cantor set and split interval criteria, and the embedding of the binary
//! `K1` spaces into the split interval `2^ω × {0,1}`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::SymbolicPoint;
use crate::error::SpaceError;
use crate::table::PartitionTable;
use crate::tree::{Branch, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub contains_cantor: bool,
    pub contains_split: bool,
}

pub fn classify_subspaces(p: &PartitionTable) -> Classification {
    let m = p.m() as Letter;
    let off_diagonal = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)));
    let mut c = Classification {
        contains_cantor: false,
        contains_split: false,
    };
    for (i, j) in off_diagonal {
        if p.get(i, j) == p.get(j, i) {
            c.contains_cantor = true;
        } else {
            c.contains_split = true;
        }
    }
    c
}

/// A point of `2^ω × {0,1}` under the lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitPoint {
    pub branch: Branch,
    pub side: u8,
}

impl Ord for SplitPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.branch
            .lex_cmp(&other.branch)
            .then(self.side.cmp(&other.side))
    }
}

impl PartialOrd for SplitPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy)]
enum NodeTail {
    Ones,
    Zeros,
    Alternating,
}

impl NodeTail {
    fn period(self) -> &'static [Letter] {
        match self {
            NodeTail::Ones => &[1],
            NodeTail::Zeros => &[0],
            NodeTail::Alternating => &[0, 1],
        }
    }

    fn side(self) -> u8 {
        match self {
            NodeTail::Ones => 1,
            NodeTail::Zeros | NodeTail::Alternating => 0,
        }
    }
}

fn node_tail(g: &PartitionTable) -> Result<NodeTail, SpaceError> {
    if g.m() != 2 || g.n() != 2 {
        return Err(SpaceError::SplitHypothesis(format!(
            "needs a 2x2 table with two colors, got m = {}, n = {}",
            g.m(),
            g.n()
        )));
    }
    let (g00, g01, g10, g11) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    if g01 == g10 {
        return Err(SpaceError::SplitHypothesis("g(0,1) = g(1,0)".into()));
    }
    Ok(if g00 == g11 && g00 == g01 {
        NodeTail::Ones
    } else if g00 == g11 && g00 == g10 {
        NodeTail::Zeros
    } else if g00 == g01 && g11 == g10 {
        NodeTail::Alternating
    } else {
        return Err(SpaceError::SplitHypothesis(
            "partition is {{(0,0),(1,0)},{(1,1),(0,1)}}".into(),
        ));
    })
}

fn interleave(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().flat_map(|&l| [l, 0, 1]).collect()
}

/// The embedding `K1(P_g) → 2^ω × {0,1}`.
///
/// Limit points land on the side from which their combs approach; node
/// points get a fixed tail after their interleaved letters, and the root
/// (which has no letters) takes the bare tail on the opposite side.
pub fn split_embedding(g: &PartitionTable, point: &SymbolicPoint) -> Result<SplitPoint, SpaceError> {
    let tail = node_tail(g)?;
    crate::spaces::Space::k1(g.clone()).check_point(point)?;
    Ok(match point {
        SymbolicPoint::Limit { branch, class } => {
            let side = if g.get(0, 1) == 1 { *class } else { 1 - *class };
            let b = Branch::new(interleave(branch.stem()), interleave(branch.period()))
                .expect("nonempty period");
            SplitPoint {
                branch: b,
                side: side as u8,
            }
        }
        SymbolicPoint::Node(s) if s.is_empty() => SplitPoint {
            branch: Branch::new([], tail.period().to_vec()).expect("nonempty period"),
            side: 1 - tail.side(),
        },
        SymbolicPoint::Node(s) => {
            let mut stem = interleave(s.letters());
            stem.truncate(stem.len() - 2);
            SplitPoint {
                branch: Branch::new(stem, tail.period().to_vec()).expect("nonempty period"),
                side: tail.side(),
            }
        }
        SymbolicPoint::Infinity => unreachable!("rejected by check_point"),
    })
}
