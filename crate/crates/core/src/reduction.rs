//! Reduction maps `ε : m0² → m1²` generated by a block code `e` and an
//! anchor word `x`, the order `f ≺ g`, and the tree maps they induce.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::ReductionError;
use crate::table::ColorTable;
use crate::tree::{incidence, Alphabet, Branch, Incidence, Letter, Seq, Word};

/// `e : m0 → m1^k` (injective) and `x ∈ m1^{<k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ReductionRepr", into = "ReductionRepr")]
pub struct ReductionData {
    k: usize,
    x: Word,
    e: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct ReductionRepr {
    k: usize,
    x: Vec<Letter>,
    e: Vec<Vec<Letter>>,
}

impl TryFrom<ReductionRepr> for ReductionData {
    type Error = ReductionError;
    fn try_from(r: ReductionRepr) -> Result<Self, Self::Error> {
        ReductionData::new(r.k, Word::new(r.x), r.e.into_iter().map(Word::new).collect())
    }
}

impl From<ReductionData> for ReductionRepr {
    fn from(r: ReductionData) -> Self {
        ReductionRepr {
            k: r.k,
            x: r.x.into_letters(),
            e: r.e.into_iter().map(Word::into_letters).collect(),
        }
    }
}

impl ReductionData {
    pub fn new(k: usize, x: Word, e: Vec<Word>) -> Result<Self, ReductionError> {
        if k == 0 {
            return Err(ReductionError::InvalidData("k must be positive".into()));
        }
        if x.len() >= k {
            return Err(ReductionError::InvalidData(format!(
                "anchor {x} has length {} >= k = {k}",
                x.len()
            )));
        }
        if e.is_empty() {
            return Err(ReductionError::InvalidData("e has empty domain".into()));
        }
        if let Some(w) = e.iter().find(|w| w.len() != k) {
            return Err(ReductionError::InvalidData(format!("e-value {w} does not have length {k}")));
        }
        let distinct: BTreeSet<&Word> = e.iter().collect();
        if distinct.len() != e.len() {
            return Err(ReductionError::InvalidData("e is not injective".into()));
        }
        Ok(ReductionData { k, x, e })
    }

    /// `k = 1`, `e(u) = (u)`, `x = ()`.
    pub fn identity(m: usize) -> Result<Self, ReductionError> {
        let alphabet = Alphabet::new(m)?;
        ReductionData::new(1, Word::root(), alphabet.letters().map(|u| Word::new([u])).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x(&self) -> &Word {
        &self.x
    }

    pub fn e(&self) -> &[Word] {
        &self.e
    }

    /// Size of the source alphabet.
    pub fn m0(&self) -> usize {
        self.e.len()
    }

    /// Least target alphabet the data is written in.
    pub fn min_m1(&self) -> usize {
        self.e
            .iter()
            .chain(std::iter::once(&self.x))
            .flat_map(|w| w.letters())
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(1)
    }

    fn code(&self, u: Letter) -> &Word {
        &self.e[u as usize]
    }

    pub fn epsilon(&self, u: Letter, v: Letter) -> Incidence {
        let (eu, ev) = (self.code(u), self.code(v));
        let other = if u == v { &self.x } else { ev };
        incidence(&Seq::Word(eu.clone()), &Seq::Word(other.clone()))
            .expect("codes are distinct, equal-length and longer than the anchor")
    }
}

/// The full table `ε(u, v)`, row-major over `u`.
pub fn apply_reduction(r: &ReductionData) -> Vec<Vec<Incidence>> {
    let m0 = r.m0() as Letter;
    (0..m0).map(|u| (0..m0).map(|v| r.epsilon(u, v)).collect()).collect()
}

fn check_shape(f: &ColorTable, g: &ColorTable, r: &ReductionData) -> Result<(), ReductionError> {
    if f.m() != r.m0() {
        return Err(ReductionError::ShapeMismatch(format!(
            "f is on {} letters but e has {} values",
            f.m(),
            r.m0()
        )));
    }
    if r.min_m1() > g.m() {
        return Err(ReductionError::ShapeMismatch(format!(
            "reduction uses letters beyond the {} of g",
            g.m()
        )));
    }
    Ok(())
}

/// `f = g ∘ ε`.
pub fn check_reduces(f: &ColorTable, g: &ColorTable, r: &ReductionData) -> Result<bool, ReductionError> {
    check_shape(f, g, r)?;
    Ok(f.pairs().all(|(u, v)| f.get(u, v) == g.color_of(r.epsilon(u, v))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { reduction: ReductionData },
    /// No witness with `k ≤ max_k`; not a proof that none exists.
    NotFoundUpTo { max_k: usize },
}

/// Exhaustive backtracking over `k ≤ max_k`, anchors `x` with `|x| < k`,
/// and injective codes `e`, assigning `e(0), e(1), ..` in turn and checking
/// every constraint as soon as both its letters are coded.
pub fn search_reduction(f: &ColorTable, g: &ColorTable, max_k: usize) -> SearchOutcome {
    let not_found = SearchOutcome::NotFoundUpTo { max_k };
    if !f.range().is_subset(&g.range()) {
        return not_found;
    }
    let target = g.alphabet();
    for k in 1..=max_k {
        let codes = target.words_of_len(k);
        for x in target.words_up_to(k - 1) {
            let mut chosen: Vec<Word> = Vec::new();
            if extend(f, g, &x, &codes, &mut chosen) {
                let r = ReductionData::new(k, x, chosen).expect("search builds valid data");
                debug_assert_eq!(check_reduces(f, g, &r), Ok(true));
                return SearchOutcome::Found { reduction: r };
            }
        }
    }
    not_found
}

fn inc_words(a: &Word, b: &Word) -> Incidence {
    incidence(&Seq::Word(a.clone()), &Seq::Word(b.clone())).expect("distinct or anchored words")
}

fn extend(f: &ColorTable, g: &ColorTable, x: &Word, codes: &[Word], chosen: &mut Vec<Word>) -> bool {
    let u = chosen.len();
    if u == f.m() {
        return true;
    }
    let ul = u as Letter;
    for c in codes {
        if chosen.contains(c) || f.get(ul, ul) != g.color_of(inc_words(c, x)) {
            continue;
        }
        let fits = chosen.iter().enumerate().all(|(v, ev)| {
            let vl = v as Letter;
            f.get(ul, vl) == g.color_of(inc_words(c, ev)) && f.get(vl, ul) == g.color_of(inc_words(ev, c))
        });
        if fits {
            chosen.push(c.clone());
            if extend(f, g, x, codes, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsubsetResult {
    /// `g ∘ ε`, valued in the colors of `g`.
    pub f: ColorTable,
    pub reduction: ReductionData,
    pub colors: BTreeSet<usize>,
}

/// Builds `f = g ∘ ε` whose range is a set of exactly `n0` colors of `g`.
pub fn nsubset_construct(g: &ColorTable, n0: usize) -> Result<NsubsetResult, ReductionError> {
    let n1 = g.range().len();
    if n0 == 0 || n0 >= n1 {
        return Err(ReductionError::TargetOutOfRange { n0, n1 });
    }
    let off: Vec<(Letter, Letter)> = g.pairs().filter(|(i, j)| i != j).collect();
    let m_colors: BTreeSet<usize> = off.iter().map(|&(i, j)| g.get(i, j)).collect();

    let reduction = if m_colors.len() <= n0 {
        few_off_diagonal_colors(g, n0, &off, &m_colors)?
    } else {
        many_off_diagonal_colors(g, n0, &off)?
    };
    let m0 = reduction.m0();
    let f = ColorTable::from_fn(m0, |u, v| g.color_of(reduction.epsilon(u, v)))
        .map_err(|e| ReductionError::Internal(e.to_string()))?;
    let colors = f.range();
    if colors.len() != n0 || !check_reduces(&f, g, &reduction)? {
        return Err(ReductionError::Internal(format!(
            "construction produced {} colors instead of {n0}",
            colors.len()
        )));
    }
    Ok(NsubsetResult {
        f,
        reduction,
        colors,
    })
}

/// `|M| ≤ n0`: one letter per off-diagonal color, padded with diagonal-only
/// colors.
fn few_off_diagonal_colors(
    g: &ColorTable,
    n0: usize,
    off: &[(Letter, Letter)],
    m_colors: &BTreeSet<usize>,
) -> Result<ReductionData, ReductionError> {
    let witnesses: Vec<(Letter, Letter)> = m_colors
        .iter()
        .map(|&p| *off.iter().find(|&&(i, j)| g.get(i, j) == p).expect("color is attained"))
        .collect();
    let extra: Vec<Letter> = g
        .range()
        .difference(m_colors)
        .take(n0 - m_colors.len())
        .map(|&c| {
            (0..g.m() as Letter)
                .find(|&w| g.get(w, w) == c)
                .expect("colors outside M sit on the diagonal")
        })
        .collect();
    let xi = witnesses.len();
    let k = xi + 1;
    let x: Vec<Letter> = witnesses.iter().map(|&(_, v)| v).collect();
    let mut e = Vec::with_capacity(n0);
    for (r, &(u, _)) in witnesses.iter().enumerate() {
        let mut code = x[..r].to_vec();
        code.push(u);
        code.resize(k, 0);
        e.push(Word::new(code));
    }
    for w in extra {
        let mut code = x.clone();
        code.push(w);
        e.push(Word::new(code));
    }
    ReductionData::new(k, Word::new(x), e)
}

/// `|M| > n0`: chain pairs `(i_r, j_r)` until the collected values number
/// `n0` or `n0 - 1`, then close with a final pair.
fn many_off_diagonal_colors(
    g: &ColorTable,
    n0: usize,
    off: &[(Letter, Letter)],
) -> Result<ReductionData, ReductionError> {
    let mut values = BTreeSet::new();
    let mut chain: Vec<(Letter, Letter)> = Vec::new();
    while values.len() + 1 < n0 {
        let &(i, j) = off
            .iter()
            .find(|&&(i, j)| !values.contains(&g.get(i, j)) || !values.contains(&g.get(j, i)))
            .ok_or_else(|| ReductionError::Internal("ran out of pairs".into()))?;
        values.insert(g.get(i, j));
        values.insert(g.get(j, i));
        chain.push((i, j));
    }
    let last = if values.len() == n0 {
        chain[0]
    } else {
        *off.iter()
            .find(|&&(i, j)| !values.contains(&g.get(i, j)))
            .ok_or_else(|| ReductionError::Internal("no pair with a new value".into()))?
    };
    chain.push(last);
    let x: Vec<Letter> = chain.iter().map(|&(_, j)| j).collect();
    let k = chain.len() + 1;
    let e = chain
        .iter()
        .enumerate()
        .map(|(r, &(i, _))| {
            let mut code = x[..r].to_vec();
            code.push(i);
            code.resize(k, 0);
            Word::new(code)
        })
        .collect();
    ReductionData::new(k, Word::new(x), e)
}

/// `φ(u_0..u_k) = e(u_0)⌢..⌢e(u_k)⌢x` on words and
/// `ψ(u_0 u_1 ..) = e(u_0)⌢e(u_1)⌢..` on branches.
pub fn induced_tree_map(r: &ReductionData, a: &Seq) -> Result<Seq, ReductionError> {
    let m0 = r.m0();
    let expand = |letters: &[Letter]| -> Result<Vec<Letter>, ReductionError> {
        let mut out = Vec::with_capacity(letters.len() * r.k);
        for &u in letters {
            if u as usize >= m0 {
                return Err(ReductionError::ShapeMismatch(format!(
                    "letter {u} is outside the source alphabet of size {m0}"
                )));
            }
            out.extend_from_slice(r.code(u).letters());
        }
        Ok(out)
    };
    Ok(match a {
        Seq::Word(w) => {
            let mut out = expand(w.letters())?;
            out.extend_from_slice(r.x.letters());
            Seq::Word(Word::new(out))
        }
        Seq::Branch(b) => Seq::Branch(
            Branch::new(expand(b.stem())?, expand(b.period())?).expect("nonempty period"),
        ),
    })
}
