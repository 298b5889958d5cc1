//! Symbolic points of the compacta `K1(P)` and `K∞(Q)` and their 0/1
//! evaluation on the index space `m^{<ω} ∪ m^ω × classes`.
//!
//! A point of `K1(P)` is either a node function `f_s` or a limit function
//! `f_(x,P)`; `K∞(Q)` adds the constant-zero point `g_∞`. Points are handled
//! symbolically and evaluated exactly.

mod classical;
mod converge;
mod falsifier;
mod separation;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SpaceError;
use crate::patterns::CombGenerator;
use crate::table::PartitionTable;
use crate::tree::{self, incidence, Alphabet, Branch, Letter, Seq, Word};

pub use classical::{classify_subspaces, split_embedding, Classification, SplitPoint};
pub use converge::{teeth_needed, verify_convergence, ConvergenceReport, Stabilization};
pub use falsifier::{not_separated_search, open_family_traces, FalsifierOutcome};
pub use separation::{
    contains, empty_intersection_witness, separate_points, verify_separation, OpenSetDescriptor,
};

/// Pairwise disjoint nonempty subsets of the alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct DisjointFamily {
    m: usize,
    classes: Vec<BTreeSet<Letter>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    m: usize,
    classes: Vec<BTreeSet<Letter>>,
}

impl TryFrom<FamilyRepr> for DisjointFamily {
    type Error = SpaceError;
    fn try_from(r: FamilyRepr) -> Result<Self, Self::Error> {
        DisjointFamily::new(r.m, r.classes)
    }
}

impl From<DisjointFamily> for FamilyRepr {
    fn from(f: DisjointFamily) -> Self {
        FamilyRepr {
            m: f.m,
            classes: f.classes,
        }
    }
}

impl DisjointFamily {
    pub fn new(m: usize, classes: Vec<BTreeSet<Letter>>) -> Result<Self, SpaceError> {
        let alphabet = Alphabet::new(m)?;
        let mut seen = BTreeSet::new();
        for class in &classes {
            if class.is_empty() {
                return Err(SpaceError::InvalidFamily("empty class".into()));
            }
            for &l in class {
                alphabet.check_letters(&[l])?;
                if !seen.insert(l) {
                    return Err(SpaceError::InvalidFamily(format!("letter {l} in two classes")));
                }
            }
        }
        Ok(DisjointFamily { m, classes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.m).expect("validated at construction")
    }

    pub fn classes(&self) -> &[BTreeSet<Letter>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, letter: Letter) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&letter))
    }
}

/// A point of `K1(P)` or `K∞(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub enum SymbolicPoint {
    Node(Word),
    Limit { branch: Branch, class: usize },
    Infinity,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum PointRepr {
    Node { word: Vec<Letter> },
    Limit { branch: Branch, class: usize },
    Infinity,
}

impl TryFrom<PointRepr> for SymbolicPoint {
    type Error = SpaceError;
    fn try_from(r: PointRepr) -> Result<Self, Self::Error> {
        Ok(match r {
            PointRepr::Node { word } => SymbolicPoint::Node(Word::new(word)),
            PointRepr::Limit { branch, class } => SymbolicPoint::Limit { branch, class },
            PointRepr::Infinity => SymbolicPoint::Infinity,
        })
    }
}

impl From<SymbolicPoint> for PointRepr {
    fn from(p: SymbolicPoint) -> Self {
        match p {
            SymbolicPoint::Node(w) => PointRepr::Node { word: w.into_letters() },
            SymbolicPoint::Limit { branch, class } => PointRepr::Limit { branch, class },
            SymbolicPoint::Infinity => PointRepr::Infinity,
        }
    }
}

impl SymbolicPoint {
    pub fn limit(branch: Branch, class: usize) -> Self {
        SymbolicPoint::Limit { branch, class }
    }
}

impl fmt::Display for SymbolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicPoint::Node(s) => write!(f, "node {s}"),
            SymbolicPoint::Limit { branch, class } => write!(f, "limit ({branch}, {class})"),
            SymbolicPoint::Infinity => write!(f, "infinity"),
        }
    }
}

/// An argument of the point functions: a node `t` or a class point `(y, Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TestRepr", into = "TestRepr")]
pub enum TestPoint {
    Node(Word),
    Class { branch: Branch, class: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TestRepr {
    Node { word: Vec<Letter> },
    Class { branch: Branch, class: usize },
}

impl TryFrom<TestRepr> for TestPoint {
    type Error = SpaceError;
    fn try_from(r: TestRepr) -> Result<Self, Self::Error> {
        Ok(match r {
            TestRepr::Node { word } => TestPoint::Node(Word::new(word)),
            TestRepr::Class { branch, class } => TestPoint::Class { branch, class },
        })
    }
}

impl From<TestPoint> for TestRepr {
    fn from(p: TestPoint) -> Self {
        match p {
            TestPoint::Node(w) => TestRepr::Node { word: w.into_letters() },
            TestPoint::Class { branch, class } => TestRepr::Class { branch, class },
        }
    }
}

/// `K1(P)` or `K∞(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum Space {
    K1 { partition: PartitionTable },
    KInf { family: DisjointFamily },
}

impl Space {
    pub fn k1(partition: PartitionTable) -> Self {
        Space::K1 { partition }
    }

    pub fn kinf(family: DisjointFamily) -> Self {
        Space::KInf { family }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Space::K1 { partition } => partition.table().alphabet(),
            Space::KInf { family } => family.alphabet(),
        }
    }

    /// Number of classes a limit point or class test may carry.
    pub fn class_count(&self) -> usize {
        match self {
            Space::K1 { partition } => partition.n(),
            Space::KInf { family } => family.len(),
        }
    }

    /// Number of points the canonical open family separates; one more than
    /// the open degree.
    pub fn separation_arity(&self) -> usize {
        match self {
            Space::K1 { partition } => partition.n() + 1,
            Space::KInf { family } => family.len() + 2,
        }
    }

    pub fn check_point(&self, p: &SymbolicPoint) -> Result<(), SpaceError> {
        check_point_in(self.alphabet(), self.class_count(), matches!(self, Space::KInf { .. }), p)
    }

    pub fn check_test(&self, t: &TestPoint) -> Result<(), SpaceError> {
        check_test_in(self.alphabet(), self.class_count(), t)
    }

    pub fn eval(&self, point: &SymbolicPoint, test: &TestPoint) -> Result<bool, SpaceError> {
        match self {
            Space::K1 { partition } => eval_k1(point, test, partition),
            Space::KInf { family } => eval_kinf(point, test, family),
        }
    }

    /// Limit of the node sequence produced by a comb generator.
    pub fn limit(&self, g: &CombGenerator) -> Result<SymbolicPoint, SpaceError> {
        match self {
            Space::K1 { partition } => limit_k1(g, partition),
            Space::KInf { family } => limit_kinf(g, family),
        }
    }
}

fn inc_branch_node(y: &Branch, s: &Word) -> tree::Incidence {
    incidence(&Seq::Branch(y.clone()), &Seq::Word(s.clone()))
        .expect("a branch strictly extends or splits from every word")
}

fn check_class_in(classes: usize, class: usize) -> Result<(), SpaceError> {
    if class >= classes {
        return Err(SpaceError::ClassOutOfRange { class, classes });
    }
    Ok(())
}

fn check_point_in(
    alphabet: Alphabet,
    classes: usize,
    allow_infinity: bool,
    p: &SymbolicPoint,
) -> Result<(), SpaceError> {
    match p {
        SymbolicPoint::Node(s) => Ok(alphabet.check_word(s)?),
        SymbolicPoint::Limit { branch, class } => {
            alphabet.check_branch(branch)?;
            check_class_in(classes, *class)
        }
        SymbolicPoint::Infinity if allow_infinity => Ok(()),
        SymbolicPoint::Infinity => Err(SpaceError::InfinityInK1),
    }
}

fn check_test_in(alphabet: Alphabet, classes: usize, t: &TestPoint) -> Result<(), SpaceError> {
    match t {
        TestPoint::Node(s) => Ok(alphabet.check_word(s)?),
        TestPoint::Class { branch, class } => {
            alphabet.check_branch(branch)?;
            check_class_in(classes, *class)
        }
    }
}

/// Evaluates `f_ξ(τ)` in `K1(P)`.
pub fn eval_k1(
    point: &SymbolicPoint,
    test: &TestPoint,
    partition: &PartitionTable,
) -> Result<bool, SpaceError> {
    let alphabet = partition.table().alphabet();
    check_point_in(alphabet, partition.n(), false, point)?;
    check_test_in(alphabet, partition.n(), test)?;
    Ok(match (point, test) {
        (SymbolicPoint::Node(s), TestPoint::Node(t)) => t.is_prefix_of(s),
        (SymbolicPoint::Node(s), TestPoint::Class { branch: y, class: q }) => {
            partition.color_of(inc_branch_node(y, s)) == *q
        }
        (SymbolicPoint::Limit { branch: x, .. }, TestPoint::Node(t)) => x.has_prefix(t),
        (SymbolicPoint::Limit { branch: x, class: p }, TestPoint::Class { branch: y, class: q }) => {
            if x == y {
                p == q
            } else {
                let inc = incidence(&Seq::Branch(y.clone()), &Seq::Branch(x.clone()))
                    .expect("distinct branches split");
                partition.color_of(inc) == *q
            }
        }
        (SymbolicPoint::Infinity, _) => unreachable!("rejected by check_point"),
    })
}

/// Evaluates `g_ξ(τ)` in `K∞(Q)`.
pub fn eval_kinf(
    point: &SymbolicPoint,
    test: &TestPoint,
    family: &DisjointFamily,
) -> Result<bool, SpaceError> {
    check_point_in(family.alphabet(), family.len(), true, point)?;
    check_test_in(family.alphabet(), family.len(), test)?;
    Ok(match (point, test) {
        (SymbolicPoint::Node(s), TestPoint::Node(t)) => s == t,
        (SymbolicPoint::Node(s), TestPoint::Class { branch: y, class: q }) => {
            let inc = inc_branch_node(y, s);
            inc.is_diagonal() && family.classes()[*q].contains(&inc.0)
        }
        (SymbolicPoint::Limit { .. }, TestPoint::Node(_)) => false,
        (SymbolicPoint::Limit { branch: x, class: p }, TestPoint::Class { branch: y, class: q }) => {
            x == y && p == q
        }
        (SymbolicPoint::Infinity, _) => false,
    })
}

fn check_generator(g: &CombGenerator, alphabet: Alphabet) -> Result<(), SpaceError> {
    alphabet.check_branch(g.branch())?;
    let inc = g.incidence();
    alphabet.check_letters(&[inc.0, inc.1])?;
    Ok(())
}

/// `lim f_{s_k} = f_(x, P)` where `P` is the piece containing the incidence.
pub fn limit_k1(g: &CombGenerator, partition: &PartitionTable) -> Result<SymbolicPoint, SpaceError> {
    check_generator(g, partition.table().alphabet())?;
    Ok(SymbolicPoint::limit(
        g.branch().clone(),
        partition.color_of(g.incidence()),
    ))
}

/// `(i, i)`-sequences with `i` in a class converge to that class's limit
/// point; every other sequence converges to `g_∞`.
pub fn limit_kinf(g: &CombGenerator, family: &DisjointFamily) -> Result<SymbolicPoint, SpaceError> {
    check_generator(g, family.alphabet())?;
    let inc = g.incidence();
    Ok(match family.class_of(inc.0) {
        Some(class) if inc.is_diagonal() => SymbolicPoint::limit(g.branch().clone(), class),
        _ => SymbolicPoint::Infinity,
    })
}

/// A test point at which two distinct points of the space take different values.
pub fn distinguishing_test(
    space: &Space,
    a: &SymbolicPoint,
    b: &SymbolicPoint,
) -> Result<Option<TestPoint>, SpaceError> {
    space.check_point(a)?;
    space.check_point(b)?;
    if a == b {
        return Ok(None);
    }
    let candidates = match space {
        Space::K1 { .. } => k1_candidates(a, b),
        Space::KInf { .. } => kinf_candidates(a, b),
    };
    for t in candidates {
        if space.eval(a, &t)? != space.eval(b, &t)? {
            return Ok(Some(t));
        }
    }
    Err(SpaceError::Internal(format!("no test separates {a} from {b}")))
}

fn k1_candidates(a: &SymbolicPoint, b: &SymbolicPoint) -> Vec<TestPoint> {
    use SymbolicPoint::*;
    match (a, b) {
        (Node(s), Node(t)) => vec![TestPoint::Node(s.clone()), TestPoint::Node(t.clone())],
        (Node(s), Limit { branch, .. }) | (Limit { branch, .. }, Node(s)) => vec![
            TestPoint::Node(s.clone()),
            TestPoint::Node(branch.prefix(s.len() + 1)),
        ],
        (Limit { branch: x, class: p }, Limit { branch: y, class: q }) => {
            if x == y {
                vec![
                    TestPoint::Class { branch: x.clone(), class: *p },
                    TestPoint::Class { branch: y.clone(), class: *q },
                ]
            } else {
                let k = tree::meet_len(&Seq::Branch(x.clone()), &Seq::Branch(y.clone()))
                    .expect("distinct branches have finite meet");
                vec![TestPoint::Node(x.prefix(k + 1)), TestPoint::Node(y.prefix(k + 1))]
            }
        }
        _ => Vec::new(),
    }
}

fn kinf_candidates(a: &SymbolicPoint, b: &SymbolicPoint) -> Vec<TestPoint> {
    use SymbolicPoint::*;
    let own = |p: &SymbolicPoint| match p {
        Node(s) => Some(TestPoint::Node(s.clone())),
        Limit { branch, class } => Some(TestPoint::Class {
            branch: branch.clone(),
            class: *class,
        }),
        Infinity => None,
    };
    own(a).into_iter().chain(own(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Incidence;

    /// {(0,0),(1,1),(1,0)} ↦ 0, {(0,1)} ↦ 1
    pub(crate) fn p20() -> PartitionTable {
        PartitionTable::from_rows(2, 2, &[vec![0, 1], vec![0, 0]]).unwrap()
    }

    /// {(0,0)} ↦ 0, {(0,1),(1,0),(1,1)} ↦ 1
    pub(crate) fn p21() -> PartitionTable {
        PartitionTable::from_rows(2, 2, &[vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn zero() -> Branch {
        Branch::constant(0)
    }

    #[test]
    fn eval_k1_examples() {
        let p = p20();
        let node = SymbolicPoint::Node(Word::from([0, 1]));
        assert!(eval_k1(&node, &TestPoint::Node(Word::from([0])), &p).unwrap());
        let x = zero();
        let lim = SymbolicPoint::limit(x.clone(), 0);
        let other = TestPoint::Class { branch: x.clone(), class: 1 };
        assert!(!eval_k1(&lim, &other, &p).unwrap());
        // inc(0^ω, (1)) = (0,1), which is the piece of color 1.
        let one = SymbolicPoint::Node(Word::from([1]));
        assert!(eval_k1(&one, &other, &p).unwrap());
        assert_eq!(
            eval_k1(&SymbolicPoint::Infinity, &other, &p),
            Err(SpaceError::InfinityInK1)
        );
        assert_eq!(
            eval_k1(&lim, &TestPoint::Class { branch: x, class: 2 }, &p),
            Err(SpaceError::ClassOutOfRange { class: 2, classes: 2 })
        );
    }

    #[test]
    fn eval_kinf_examples() {
        let q = DisjointFamily::new(2, vec![BTreeSet::from([0])]).unwrap();
        let s = Word::from([1, 0]);
        assert!(eval_kinf(&SymbolicPoint::Node(s.clone()), &TestPoint::Node(s), &q).unwrap());
        let class = TestPoint::Class { branch: zero(), class: 0 };
        assert!(!eval_kinf(&SymbolicPoint::Infinity, &class, &q).unwrap());
        assert!(!eval_kinf(&SymbolicPoint::Infinity, &TestPoint::Node(Word::root()), &q).unwrap());
        // inc(0^ω, (0)) = (0,0) and 0 belongs to the class.
        assert!(eval_kinf(&SymbolicPoint::Node(Word::from([0])), &class, &q).unwrap());
        assert!(eval_kinf(&SymbolicPoint::limit(zero(), 0), &class, &q).unwrap());
        assert!(!eval_kinf(&SymbolicPoint::limit(Branch::constant(1), 0), &class, &q).unwrap());
    }

    #[test]
    fn limit_examples() {
        let comb = CombGenerator::along(zero(), Incidence(0, 1), 4).unwrap();
        assert_eq!(limit_k1(&comb, &p20()).unwrap(), SymbolicPoint::limit(zero(), 1));
        let single = PartitionTable::from_rows(2, 1, &[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(limit_k1(&comb, &single).unwrap(), SymbolicPoint::limit(zero(), 0));
        let diag = CombGenerator::along(zero(), Incidence(0, 0), 4).unwrap();
        assert_eq!(limit_k1(&diag, &p21()).unwrap(), SymbolicPoint::limit(zero(), 0));

        let q = DisjointFamily::new(2, vec![BTreeSet::from([0])]).unwrap();
        assert_eq!(limit_kinf(&comb, &q).unwrap(), SymbolicPoint::Infinity);
        assert_eq!(limit_kinf(&diag, &q).unwrap(), SymbolicPoint::limit(zero(), 0));
        let ones = CombGenerator::along(Branch::constant(1), Incidence(1, 1), 3).unwrap();
        assert_eq!(limit_kinf(&ones, &q).unwrap(), SymbolicPoint::Infinity);
    }

    #[test]
    fn distinct_points_are_told_apart() {
        let space = Space::k1(p20());
        let pts = [
            SymbolicPoint::Node(Word::root()),
            SymbolicPoint::Node(Word::from([0])),
            SymbolicPoint::Node(Word::from([0, 0])),
            SymbolicPoint::limit(zero(), 0),
            SymbolicPoint::limit(zero(), 1),
            SymbolicPoint::limit(Branch::new([0], [1]).unwrap(), 0),
        ];
        for a in &pts {
            for b in &pts {
                let t = distinguishing_test(&space, a, b).unwrap();
                assert_eq!(t.is_none(), a == b);
                if let Some(t) = t {
                    assert_ne!(space.eval(a, &t).unwrap(), space.eval(b, &t).unwrap());
                }
            }
        }
    }

    #[test]
    fn point_json_shapes() {
        let p: SymbolicPoint = serde_json::from_str(r#"{"kind":"node","word":[0,1]}"#).unwrap();
        assert_eq!(p, SymbolicPoint::Node(Word::from([0, 1])));
        let l: SymbolicPoint =
            serde_json::from_str(r#"{"kind":"limit","branch":{"stem":[],"period":[0]},"class":1}"#)
                .unwrap();
        assert_eq!(l, SymbolicPoint::limit(zero(), 1));
        let inf: SymbolicPoint = serde_json::from_str(r#"{"kind":"infinity"}"#).unwrap();
        assert_eq!(inf, SymbolicPoint::Infinity);
        assert_eq!(serde_json::to_string(&inf).unwrap(), r#"{"kind":"infinity"}"#);
    }

    #[test]
    fn family_validation() {
        assert!(DisjointFamily::new(3, vec![BTreeSet::from([0, 1]), BTreeSet::from([1])]).is_err());
        assert!(DisjointFamily::new(2, vec![BTreeSet::new()]).is_err());
        assert!(DisjointFamily::new(2, vec![BTreeSet::from([2])]).is_err());
        assert!(DisjointFamily::new(2, vec![]).unwrap().is_empty());
    }
}
