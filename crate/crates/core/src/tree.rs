//! Finite words and eventually periodic branches of the m-adic tree.
//!
//! Words are ordered by the well order `≺` (length first, then numeral
//! value), which for a fixed length coincides with lexicographic order. That
//! ordering is the [`Ord`] instance of [`Word`], so a `BTreeSet<Word>`
//! iterates in `≺` order.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;

pub type Letter = u8;

/// The letter set `{0, .., m-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    m: usize,
}

impl Alphabet {
    pub fn new(m: usize) -> Result<Self, TreeError> {
        if m == 0 || m > Letter::MAX as usize + 1 {
            return Err(TreeError::InvalidAlphabet(m));
        }
        Ok(Alphabet { m })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.m).map(|l| l as Letter)
    }

    pub fn check_letters(&self, letters: &[Letter]) -> Result<(), TreeError> {
        match letters.iter().find(|&&l| l as usize >= self.m) {
            Some(&letter) => Err(TreeError::LetterOutOfRange { letter, m: self.m }),
            None => Ok(()),
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<(), TreeError> {
        self.check_letters(w.letters())
    }

    pub fn check_branch(&self, b: &Branch) -> Result<(), TreeError> {
        self.check_letters(b.stem())?;
        self.check_letters(b.period())
    }

    pub fn check_seq(&self, s: &Seq) -> Result<(), TreeError> {
        match s {
            Seq::Word(w) => self.check_word(w),
            Seq::Branch(b) => self.check_branch(b),
        }
    }

    /// Concatenation with both operands checked against this alphabet.
    pub fn concat(&self, s: &Word, t: &Seq) -> Result<Seq, TreeError> {
        self.check_word(s)?;
        self.check_seq(t)?;
        Ok(concat(s, t))
    }

    /// All words of length exactly `len`, in `≺` order.
    pub fn words_of_len(&self, len: usize) -> Vec<Word> {
        let mut out = vec![Word::root()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| self.letters().map(move |l| w.child(l)))
                .collect();
        }
        out
    }

    /// All words of length at most `len`, in `≺` order.
    pub fn words_up_to(&self, len: usize) -> Vec<Word> {
        (0..=len).flat_map(|l| self.words_of_len(l)).collect()
    }
}

/// A finite word, i.e. a node of the tree. The empty word is the root.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "WordRepr", into = "WordRepr")]
pub struct Word(Vec<Letter>);

#[derive(Serialize, Deserialize)]
struct WordRepr {
    word: Vec<Letter>,
}

impl From<WordRepr> for Word {
    fn from(r: WordRepr) -> Self {
        Word(r.word)
    }
}

impl From<Word> for WordRepr {
    fn from(w: Word) -> Self {
        WordRepr { word: w.0 }
    }
}

impl Word {
    pub fn new(letters: impl Into<Vec<Letter>>) -> Self {
        Word(letters.into())
    }

    pub fn root() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// `self ⌢ i`
    pub fn child(&self, letter: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The restriction `self|n`. Panics if `n > |self|`.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn meet(&self, other: &Word) -> Word {
        self.prefix(common_len(&self.0, &other.0))
    }
}

fn common_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl<const N: usize> From<[Letter; N]> for Word {
    fn from(v: [Letter; N]) -> Self {
        Word(v.to_vec())
    }
}

/// An eventually periodic infinite word `stem ⌢ period ⌢ period ⌢ ...`.
///
/// Always stored in canonical form: the period is primitive and the stem is
/// as short as possible. Equality is structural on that form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BranchRepr", into = "BranchRepr")]
pub struct Branch {
    stem: Vec<Letter>,
    period: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct BranchRepr {
    stem: Vec<Letter>,
    period: Vec<Letter>,
}

impl TryFrom<BranchRepr> for Branch {
    type Error = TreeError;
    fn try_from(r: BranchRepr) -> Result<Self, Self::Error> {
        Branch::new(r.stem, r.period)
    }
}

impl From<Branch> for BranchRepr {
    fn from(b: Branch) -> Self {
        BranchRepr {
            stem: b.stem,
            period: b.period,
        }
    }
}

impl Branch {
    pub fn new(
        stem: impl Into<Vec<Letter>>,
        period: impl Into<Vec<Letter>>,
    ) -> Result<Self, TreeError> {
        let mut stem = stem.into();
        let mut period = period.into();
        if period.is_empty() {
            return Err(TreeError::EmptyPeriod);
        }
        let p = primitive_root_len(&period);
        period.truncate(p);
        while let (Some(&s), Some(&q)) = (stem.last(), period.last()) {
            if s != q {
                break;
            }
            stem.pop();
            period.rotate_right(1);
        }
        Ok(Branch { stem, period })
    }

    /// The constant branch `letter^ω`.
    pub fn constant(letter: Letter) -> Self {
        Branch {
            stem: Vec::new(),
            period: vec![letter],
        }
    }

    pub fn stem(&self) -> &[Letter] {
        &self.stem
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn letter(&self, idx: usize) -> Letter {
        if idx < self.stem.len() {
            self.stem[idx]
        } else {
            self.period[(idx - self.stem.len()) % self.period.len()]
        }
    }

    /// The restriction `self|n` as a finite word.
    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|k| self.letter(k)).collect())
    }

    /// `prefix ⌢ self`.
    pub fn prefixed(&self, prefix: &Word) -> Branch {
        let mut stem = prefix.0.clone();
        stem.extend_from_slice(&self.stem);
        Branch::new(stem, self.period.clone()).expect("period is nonempty")
    }

    pub fn has_prefix(&self, w: &Word) -> bool {
        w.0.iter().enumerate().all(|(k, &l)| self.letter(k) == l)
    }

    /// Bound on the position of the first disagreement with another branch.
    pub fn horizon(&self, other: &Branch) -> usize {
        self.stem.len() + other.stem.len() + lcm(self.period.len(), other.period.len())
    }

    /// Lexicographic order on infinite sequences.
    pub fn lex_cmp(&self, other: &Branch) -> Ordering {
        match divergence(&Seq::Branch(self.clone()), &Seq::Branch(other.clone())) {
            Divergence::Equal => Ordering::Equal,
            Divergence::Split(k) => self.letter(k).cmp(&other.letter(k)),
            _ => unreachable!("branches never end"),
        }
    }

    /// Positions `d` with `self(d) == letter`, in increasing order, lazily.
    pub fn occurrences(&self, letter: Letter) -> impl Iterator<Item = usize> + '_ {
        let in_period = self.period.contains(&letter);
        let limit = if in_period { usize::MAX } else { self.stem.len() };
        (0..limit).filter(move |&d| self.letter(d) == letter)
    }
}

fn primitive_root_len(p: &[Letter]) -> usize {
    let n = p.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|k| p[k] == p[k - d]))
        .unwrap_or(n)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^ω", Word(self.stem.clone()), Word(self.period.clone()))
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An element of `m^{≤ω}`: a finite word or an eventually periodic branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seq {
    Word(Word),
    Branch(Branch),
}

impl Seq {
    /// `None` for infinite sequences.
    pub fn len(&self) -> Option<usize> {
        match self {
            Seq::Word(w) => Some(w.len()),
            Seq::Branch(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Seq::Word(_))
    }

    pub fn letter(&self, idx: usize) -> Option<Letter> {
        match self {
            Seq::Word(w) => w.0.get(idx).copied(),
            Seq::Branch(b) => Some(b.letter(idx)),
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        match self {
            Seq::Word(w) => w.prefix(n),
            Seq::Branch(b) => b.prefix(n),
        }
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Seq::Word(w) => Some(w),
            Seq::Branch(_) => None,
        }
    }
}

impl From<Word> for Seq {
    fn from(w: Word) -> Self {
        Seq::Word(w)
    }
}

impl From<Branch> for Seq {
    fn from(b: Branch) -> Self {
        Seq::Branch(b)
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Word(w) => write!(f, "{w}"),
            Seq::Branch(b) => write!(f, "{b}"),
        }
    }
}

/// Where two sequences first stop agreeing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Divergence {
    Equal,
    /// Both continue past this index with different letters.
    Split(usize),
    /// The left sequence ends at this index, the right one continues.
    LeftEnds(usize),
    RightEnds(usize),
}

fn divergence(a: &Seq, b: &Seq) -> Divergence {
    if let (Seq::Branch(x), Seq::Branch(y)) = (a, b) {
        if x == y {
            return Divergence::Equal;
        }
        let h = x.horizon(y);
        let k = (0..=h)
            .find(|&k| x.letter(k) != y.letter(k))
            .expect("distinct eventually periodic branches differ within the horizon");
        return Divergence::Split(k);
    }
    let mut k = 0;
    loop {
        match (a.letter(k), b.letter(k)) {
            (None, None) => return Divergence::Equal,
            (None, Some(_)) => return Divergence::LeftEnds(k),
            (Some(_), None) => return Divergence::RightEnds(k),
            (Some(x), Some(y)) if x != y => return Divergence::Split(k),
            _ => k += 1,
        }
    }
}

/// `s ⌢ t`.
pub fn concat(s: &Word, t: &Seq) -> Seq {
    match t {
        Seq::Word(w) => Seq::Word(s.concat(w)),
        Seq::Branch(b) => Seq::Branch(b.prefixed(s)),
    }
}

/// Relation between two sequences under the prefix order `≤`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrefixOrder {
    Equal,
    /// `a ≤ b`, `a ≠ b`.
    IsPrefix,
    /// `b ≤ a`, `a ≠ b`.
    HasPrefix,
    Incomparable,
}

pub fn prefix_cmp(a: &Seq, b: &Seq) -> PrefixOrder {
    match divergence(a, b) {
        Divergence::Equal => PrefixOrder::Equal,
        Divergence::LeftEnds(_) => PrefixOrder::IsPrefix,
        Divergence::RightEnds(_) => PrefixOrder::HasPrefix,
        Divergence::Split(_) => PrefixOrder::Incomparable,
    }
}

/// `a ≤ b` in the prefix order.
pub fn is_prefix(a: &Seq, b: &Seq) -> bool {
    matches!(prefix_cmp(a, b), PrefixOrder::Equal | PrefixOrder::IsPrefix)
}

/// The longest common prefix `a ∧ b`.
pub fn meet(a: &Seq, b: &Seq) -> Seq {
    match divergence(a, b) {
        Divergence::Equal => a.clone(),
        Divergence::LeftEnds(_) => a.clone(),
        Divergence::RightEnds(_) => b.clone(),
        Divergence::Split(k) => Seq::Word(a.prefix(k)),
    }
}

/// Length of `a ∧ b`, `None` when both are the same branch.
pub fn meet_len(a: &Seq, b: &Seq) -> Option<usize> {
    match divergence(a, b) {
        Divergence::Equal => a.len(),
        Divergence::LeftEnds(k) | Divergence::RightEnds(k) | Divergence::Split(k) => Some(k),
    }
}

/// The pair of letters at which two tree elements part ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Incidence(pub Letter, pub Letter);

impl Incidence {
    pub fn is_diagonal(&self) -> bool {
        self.0 == self.1
    }

    pub fn flipped(&self) -> Incidence {
        Incidence(self.1, self.0)
    }
}

impl fmt::Display for Incidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// `inc(a, b)`: `(i, j)` with `r⌢i ≤ a`, `r⌢j ≤ b` where `r = a ∧ b` splits
/// them, or `(i, i)` when `b ⌢ i ≤ a`. The extending element must come first.
pub fn incidence(a: &Seq, b: &Seq) -> Result<Incidence, TreeError> {
    match divergence(a, b) {
        Divergence::Equal => Err(TreeError::UndefinedIncidence),
        Divergence::LeftEnds(_) => Err(TreeError::IncidenceOrientation),
        Divergence::RightEnds(k) => {
            let i = a.letter(k).expect("a extends past b");
            Ok(Incidence(i, i))
        }
        Divergence::Split(k) => Ok(Incidence(
            a.letter(k).expect("split inside a"),
            b.letter(k).expect("split inside b"),
        )),
    }
}

/// The well order `≺` on words.
pub fn well_order_cmp(s: &Word, t: &Word) -> Ordering {
    s.cmp(t)
}

/// `⟨⟨A⟩⟩ = {s ∧ t : s, t ∈ A}`.
pub fn meet_closure<'a>(words: impl IntoIterator<Item = &'a Word>) -> BTreeSet<Word> {
    let base: Vec<&Word> = words.into_iter().collect();
    let mut out = BTreeSet::new();
    for (k, s) in base.iter().enumerate() {
        for t in &base[k..] {
            out.insert(s.meet(t));
        }
    }
    out
}
