//! First-move combinatorics: equivalence checking, comb prototypes, bounded
//! pattern search and comb generators along branches.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::PatternError;
use crate::tree::{incidence, Alphabet, Branch, Incidence, Letter, Seq, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PatternKind {
    Comb {
        i: Letter,
        j: Letter,
    },
    DoubleComb {
        i: Letter,
        j: Letter,
        k: Letter,
        l: Letter,
    },
    SplitDoubleComb {
        u: Letter,
        v: Letter,
        i: Letter,
        j: Letter,
        k: Letter,
        l: Letter,
    },
}

impl PatternKind {
    fn letters(&self) -> Vec<Letter> {
        match *self {
            PatternKind::Comb { i, j } => vec![i, j],
            PatternKind::DoubleComb { i, j, k, l } => vec![i, j, k, l],
            PatternKind::SplitDoubleComb { u, v, i, j, k, l } => vec![u, v, i, j, k, l],
        }
    }
}

/// A finite bijection between two node sets, given by its pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct FirstMoveMap {
    pairs: Vec<(Word, Word)>,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    pairs: Vec<(Vec<Letter>, Vec<Letter>)>,
}

impl TryFrom<MapRepr> for FirstMoveMap {
    type Error = PatternError;
    fn try_from(r: MapRepr) -> Result<Self, Self::Error> {
        FirstMoveMap::new(
            r.pairs
                .into_iter()
                .map(|(a, b)| (Word::new(a), Word::new(b)))
                .collect(),
        )
    }
}

impl From<FirstMoveMap> for MapRepr {
    fn from(m: FirstMoveMap) -> Self {
        MapRepr {
            pairs: m
                .pairs
                .into_iter()
                .map(|(a, b)| (a.into_letters(), b.into_letters()))
                .collect(),
        }
    }
}

impl FirstMoveMap {
    pub fn new(pairs: Vec<(Word, Word)>) -> Result<Self, PatternError> {
        let dom: BTreeSet<&Word> = pairs.iter().map(|(a, _)| a).collect();
        let ran: BTreeSet<&Word> = pairs.iter().map(|(_, b)| b).collect();
        if dom.len() != pairs.len() {
            return Err(PatternError::NotBijective("repeated domain element".into()));
        }
        if ran.len() != pairs.len() {
            return Err(PatternError::NotBijective("repeated image".into()));
        }
        Ok(FirstMoveMap { pairs })
    }

    pub fn from_fn<'a>(
        domain: impl IntoIterator<Item = &'a Word>,
        f: impl Fn(&Word) -> Word,
    ) -> Result<Self, PatternError> {
        FirstMoveMap::new(domain.into_iter().map(|w| (w.clone(), f(w))).collect())
    }

    pub fn identity<'a>(domain: impl IntoIterator<Item = &'a Word>) -> Self {
        FirstMoveMap::from_fn(domain, Word::clone).expect("identity is bijective")
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn domain(&self) -> impl Iterator<Item = &Word> {
        self.pairs.iter().map(|(a, _)| a)
    }

    pub fn range(&self) -> impl Iterator<Item = &Word> {
        self.pairs.iter().map(|(_, b)| b)
    }

    pub fn get(&self, w: &Word) -> Option<&Word> {
        self.pairs.iter().find(|(a, _)| a == w).map(|(_, b)| b)
    }

    pub fn inverse(&self) -> FirstMoveMap {
        FirstMoveMap {
            pairs: self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    /// `next ∘ self`, defined where the image of `self` lies in the domain of `next`.
    pub fn then(&self, next: &FirstMoveMap) -> Option<FirstMoveMap> {
        let pairs = self
            .pairs
            .iter()
            .map(|(a, b)| next.get(b).map(|c| (a.clone(), c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(FirstMoveMap { pairs })
    }
}

/// The three defining conditions of a first-move equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `f(t ∧ s) = f(t) ∧ f(s)`
    MeetPreservation,
    /// `f(t) ≺ f(s) ⟺ t ≺ s`
    OrderPreservation,
    /// `inc(s, t) = inc(f(s), f(t))`
    IncidencePreservation,
}

impl Condition {
    pub fn number(&self) -> u8 {
        match self {
            Condition::MeetPreservation => 1,
            Condition::OrderPreservation => 2,
            Condition::IncidencePreservation => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MapCheck {
    Valid,
    Invalid {
        condition: Condition,
        witness: (Word, Word),
    },
}

impl MapCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, MapCheck::Valid)
    }
}

/// Extends the map over the meet-closure of its domain and checks the three
/// conditions on every pair of the closure.
///
/// The extension is forced by meet preservation; conflicting forced images
/// are reported under that condition. Incidence preservation is checked
/// before order preservation, and pairs of the original domain are examined
/// before the rest of the closure, so witnesses point at user-supplied
/// elements whenever possible.
pub fn check_first_move_map(map: &FirstMoveMap) -> MapCheck {
    let invalid = |condition, a: &Word, b: &Word| MapCheck::Invalid {
        condition,
        witness: (a.clone(), b.clone()),
    };

    let mut ext: BTreeMap<Word, Word> = BTreeMap::new();
    let pairs = map.pairs();
    for (x, (s, fs)) in pairs.iter().enumerate() {
        for (t, ft) in &pairs[x..] {
            let r = s.meet(t);
            let fr = fs.meet(ft);
            match ext.get(&r) {
                Some(prev) if *prev != fr => {
                    return invalid(Condition::MeetPreservation, s, t);
                }
                Some(_) => {}
                None => {
                    ext.insert(r, fr);
                }
            }
        }
    }

    let mut seen: BTreeMap<&Word, &Word> = BTreeMap::new();
    for (a, fa) in &ext {
        if let Some(prev) = seen.insert(fa, a) {
            return invalid(Condition::OrderPreservation, prev, a);
        }
    }

    let closure: Vec<&Word> = ext.keys().collect();
    for (x, a) in closure.iter().enumerate() {
        for b in &closure[x + 1..] {
            let r = a.meet(b);
            let fr = ext.get(&r).expect("closure is meet-closed");
            if *fr != ext[*a].meet(&ext[*b]) {
                return invalid(Condition::MeetPreservation, a, b);
            }
        }
    }

    let domain: Vec<&Word> = map.domain().collect();
    let domain_set: BTreeSet<&Word> = domain.iter().copied().collect();
    let rest: Vec<&Word> = closure
        .iter()
        .copied()
        .filter(|w| !domain_set.contains(w))
        .collect();
    let ordered: Vec<&Word> = {
        let mut d = domain.clone();
        d.sort();
        d.into_iter().chain(rest).collect()
    };
    for (x, a) in ordered.iter().enumerate() {
        for b in &ordered[x + 1..] {
            for (p, q) in [(a, b), (b, a)] {
                let (sp, sq) = (Seq::Word((*p).clone()), Seq::Word((*q).clone()));
                if let Ok(inc) = incidence(&sp, &sq) {
                    let img = incidence(
                        &Seq::Word(ext[*p].clone()),
                        &Seq::Word(ext[*q].clone()),
                    );
                    if img != Ok(inc) {
                        return invalid(Condition::IncidencePreservation, p, q);
                    }
                }
            }
        }
    }

    // `closure` is sorted by ≺, so images must be strictly increasing.
    for pair in closure.windows(2) {
        if ext[pair[0]] >= ext[pair[1]] {
            return invalid(Condition::OrderPreservation, pair[0], pair[1]);
        }
    }
    MapCheck::Valid
}

fn repeat(block: &[Letter], times: usize) -> Vec<Letter> {
    block.iter().copied().cycle().take(block.len() * times).collect()
}

/// The first `size` teeth of the prototype set for `kind` (per comb for the
/// two-comb kinds), checked against the alphabet.
pub fn canonical_pattern(
    alphabet: Alphabet,
    kind: PatternKind,
    size: usize,
) -> Result<BTreeSet<Word>, PatternError> {
    if size == 0 {
        return Err(PatternError::EmptyPattern);
    }
    alphabet.check_letters(&kind.letters())?;
    let mut out = BTreeSet::new();
    match kind {
        PatternKind::Comb { i, j } => {
            for r in 0..size {
                let mut t = vec![i; 2 * r];
                t.push(j);
                out.insert(Word::new(t));
            }
        }
        PatternKind::DoubleComb { i, j, k, l } => {
            let block = [i, i, k, k];
            for r in 0..size {
                let mut first = repeat(&block, r);
                first.push(j);
                out.insert(Word::new(first));
                let mut second = repeat(&block, r);
                second.extend_from_slice(&[i, i, l]);
                out.insert(Word::new(second));
            }
        }
        PatternKind::SplitDoubleComb { u, v, i, j, k, l } => {
            if u == v {
                return Err(PatternError::SameSplitLetters(u));
            }
            for r in 0..size {
                let mut first = vec![u];
                first.extend(std::iter::repeat_n(i, 2 * r));
                first.push(j);
                out.insert(Word::new(first));
                let mut second = vec![v];
                second.extend(std::iter::repeat_n(k, 2 * r));
                second.push(l);
                out.insert(Word::new(second));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMatch {
    /// The matched subset, in `≺` order.
    pub subset: Vec<Word>,
    /// Equivalence from `subset` onto the canonical pattern.
    pub map: FirstMoveMap,
}

/// Searches `set` for a subset first-move-equivalent to the canonical pattern.
///
/// Order preservation forces the bijection to match elements in `≺` order,
/// so the search ranges over increasing tuples only, pruning any prefix whose
/// partial map already fails. The first match in lexicographic order of
/// `≺`-sorted tuples is returned.
pub fn find_pattern<'a>(
    alphabet: Alphabet,
    set: impl IntoIterator<Item = &'a Word>,
    kind: PatternKind,
    size: usize,
) -> Result<Option<PatternMatch>, PatternError> {
    let target: Vec<Word> = canonical_pattern(alphabet, kind, size)?.into_iter().collect();
    let candidates: Vec<Word> = set
        .into_iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut chosen = Vec::with_capacity(target.len());
    if search(&candidates, &target, 0, &mut chosen) {
        let subset: Vec<Word> = chosen.iter().map(|&k| candidates[k].clone()).collect();
        let map = FirstMoveMap::new(subset.iter().cloned().zip(target).collect())?;
        debug_assert!(check_first_move_map(&map).is_valid());
        return Ok(Some(PatternMatch { subset, map }));
    }
    Ok(None)
}

fn search(candidates: &[Word], target: &[Word], start: usize, chosen: &mut Vec<usize>) -> bool {
    let depth = chosen.len();
    if depth == target.len() {
        return true;
    }
    let remaining = target.len() - depth;
    for k in start..candidates.len() {
        if candidates.len() - k < remaining {
            break;
        }
        chosen.push(k);
        let partial = FirstMoveMap {
            pairs: chosen
                .iter()
                .zip(target)
                .map(|(&c, t)| (candidates[c].clone(), t.clone()))
                .collect(),
        };
        if check_first_move_map(&partial).is_valid() && search(candidates, target, k + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Nodes along a branch with constant incidence against it: tooth `q` is
/// `x|d_q ⌢ j` when `i ≠ j` and `x|d_q` when `i = j`, where `x(d_q) = i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GeneratorRepr")]
pub struct CombGenerator {
    branch: Branch,
    incidence: Incidence,
    depths: Vec<usize>,
}

/// Wire form: explicit `depths`, or `count` to take the first occurrences.
#[derive(Deserialize)]
struct GeneratorRepr {
    branch: Branch,
    incidence: Incidence,
    #[serde(default)]
    depths: Option<Vec<usize>>,
    #[serde(default)]
    count: Option<usize>,
}

impl TryFrom<GeneratorRepr> for CombGenerator {
    type Error = PatternError;
    fn try_from(r: GeneratorRepr) -> Result<Self, Self::Error> {
        match (r.depths, r.count) {
            (Some(depths), None) => CombGenerator::new(r.branch, r.incidence, depths),
            (None, Some(count)) => CombGenerator::along(r.branch, r.incidence, count),
            _ => Err(PatternError::InvalidGenerator(
                "give exactly one of depths and count".into(),
            )),
        }
    }
}

impl CombGenerator {
    pub fn new(
        branch: Branch,
        incidence: Incidence,
        depths: Vec<usize>,
    ) -> Result<Self, PatternError> {
        if depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PatternError::InvalidGenerator(
                "depths must be strictly increasing".into(),
            ));
        }
        if let Some(&d) = depths.iter().find(|&&d| branch.letter(d) != incidence.0) {
            return Err(PatternError::InvalidGenerator(format!(
                "branch letter at depth {d} is {}, not {}",
                branch.letter(d),
                incidence.0
            )));
        }
        Ok(CombGenerator {
            branch,
            incidence,
            depths,
        })
    }

    /// Uses the first `count` depths at which the branch reads `incidence.0`.
    pub fn along(branch: Branch, incidence: Incidence, count: usize) -> Result<Self, PatternError> {
        let i = incidence.0;
        let depths: Vec<usize> = branch.occurrences(i).take(count).collect();
        if depths.is_empty() && count > 0 {
            return Err(PatternError::InvalidGenerator(format!(
                "letter {i} never occurs on {branch}"
            )));
        }
        if depths.len() < count {
            return Err(PatternError::Exhausted {
                letter: i,
                available: depths.len(),
                requested: count,
            });
        }
        CombGenerator::new(branch, incidence, depths)
    }

    pub fn branch(&self) -> &Branch {
        &self.branch
    }

    pub fn incidence(&self) -> Incidence {
        self.incidence
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    pub fn tooth(&self, q: usize) -> Word {
        let base = self.branch.prefix(self.depths[q]);
        if self.incidence.is_diagonal() {
            base
        } else {
            base.child(self.incidence.1)
        }
    }
}

impl fmt::Display for CombGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-sequence over {} at depths {:?}", self.incidence, self.branch, self.depths)
    }
}

pub fn comb_nodes(g: &CombGenerator) -> Vec<Word> {
    (0..g.len()).map(|q| g.tooth(q)).collect()
}

/// `t ↦ u ⌢ t`, the standard first-move embedding onto the cone above `u`.
pub fn subtree_embedding(u: &Word, t: &Word) -> Word {
    u.concat(t)
}
