//! Independent reference implementations and random instance generators
//! shared by the integration suites. Nothing here calls into the library's
//! algorithms; sequences are plain `Vec<u8>` or letter functions.
#![allow(dead_code)]

use std::collections::BTreeSet;

use madic::table::{ColorTable, PartitionTable};
use madic::tree::{Branch, Word};
use rand::seq::SliceRandom;
use rand::Rng;

/// An eventually periodic sequence as raw, possibly non-canonical data.
#[derive(Clone, Debug)]
pub struct RawBranch {
    pub stem: Vec<u8>,
    pub period: Vec<u8>,
}

impl RawBranch {
    pub fn at(&self, k: usize) -> u8 {
        if k < self.stem.len() {
            self.stem[k]
        } else {
            self.period[(k - self.stem.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map(|k| self.at(k)).collect()
    }

    pub fn to_branch(&self) -> Branch {
        Branch::new(self.stem.clone(), self.period.clone()).unwrap()
    }

    /// Agreement is decided letter by letter far past any possible split.
    pub fn same_as(&self, other: &RawBranch) -> bool {
        let n = self.stem.len() + other.stem.len() + self.period.len() * other.period.len() + 1;
        (0..n).all(|k| self.at(k) == other.at(k))
    }

    pub fn meet_len(&self, other: &RawBranch) -> Option<usize> {
        let n = self.stem.len() + other.stem.len() + self.period.len() * other.period.len() + 1;
        (0..n).find(|&k| self.at(k) != other.at(k))
    }
}

pub fn lcp(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn is_prefix(a: &[u8], b: &[u8]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

/// Incidence of two finite sequences, extending element first.
pub fn inc_words(a: &[u8], b: &[u8]) -> Option<(u8, u8)> {
    let r = lcp(a, b);
    match (a.get(r), b.get(r)) {
        (Some(&i), Some(&j)) => Some((i, j)),
        (Some(&i), None) => Some((i, i)),
        _ => None,
    }
}

/// Incidence of a branch against a finite sequence (branch first).
pub fn inc_branch_word(y: &RawBranch, s: &[u8]) -> (u8, u8) {
    let r = (0..s.len()).find(|&k| y.at(k) != s[k]).unwrap_or(s.len());
    if r < s.len() {
        (y.at(r), s[r])
    } else {
        (y.at(r), y.at(r))
    }
}

pub fn inc_branches(y: &RawBranch, x: &RawBranch) -> Option<(u8, u8)> {
    y.meet_len(x).map(|k| (y.at(k), x.at(k)))
}

pub fn rand_word(rng: &mut impl Rng, m: usize, max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..m) as u8).collect()
}

pub fn rand_branch(rng: &mut impl Rng, m: usize, max_stem: usize, max_period: usize) -> RawBranch {
    let stem = rand_word(rng, m, max_stem);
    let plen = rng.gen_range(1..=max_period);
    let period = (0..plen).map(|_| rng.gen_range(0..m) as u8).collect();
    RawBranch { stem, period }
}

/// A uniformly placed surjective `m × m → n` table.
pub fn rand_surjective_rows(rng: &mut impl Rng, m: usize, n: usize) -> Vec<Vec<usize>> {
    assert!(n <= m * m);
    let mut cells: Vec<usize> = (0..m * m).collect();
    cells.shuffle(rng);
    let mut flat = vec![0; m * m];
    for (c, &cell) in cells.iter().enumerate() {
        flat[cell] = if c < n { c } else { rng.gen_range(0..n) };
    }
    flat.chunks(m).map(<[usize]>::to_vec).collect()
}

pub fn rand_partition(rng: &mut impl Rng, m: usize, n: usize) -> PartitionTable {
    PartitionTable::from_rows(m, n, &rand_surjective_rows(rng, m, n)).unwrap()
}

pub fn rand_color_table(rng: &mut impl Rng, m: usize, n: usize) -> ColorTable {
    // spread the colors out so they are not contiguous
    let rows: Vec<Vec<usize>> = rand_surjective_rows(rng, m, n)
        .into_iter()
        .map(|r| r.into_iter().map(|c| 3 * c + 1).collect())
        .collect();
    ColorTable::from_rows(m, &rows).unwrap()
}

pub fn rand_word_set(rng: &mut impl Rng, m: usize, max_len: usize, max_size: usize) -> BTreeSet<Word> {
    let size = rng.gen_range(1..=max_size);
    (0..size).map(|_| Word::new(rand_word(rng, m, max_len))).collect()
}

/// Direct evaluation `f^α(i, j)` from the raw type data.
///
/// Letters are listed in the documented order (core letters ascending,
/// blocks by least element, dropped letters ascending); each letter carries
/// (is_core, core_color, sigma, tau).
pub fn reference_f_alpha(t: &madic::types::StrongDenseType) -> Vec<Vec<usize>> {
    struct L {
        core: Option<usize>,
        sigma: usize,
        tau: usize,
    }
    let mut letters = Vec::new();
    if t.a.is_empty() {
        letters.push(L { core: Some(0), sigma: 0, tau: usize::MAX });
    }
    for &k in &t.a {
        letters.push(L { core: Some(k), sigma: k, tau: usize::MAX });
    }
    let mut blocks: Vec<Vec<usize>> = t
        .blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort();
            b
        })
        .collect();
    blocks.sort_by_key(|b| b[0]);
    for b in blocks {
        letters.push(L { core: None, sigma: b[0], tau: *b.last().unwrap() });
    }
    for &k in &t.d {
        let g = t.gamma.iter().find(|p| p.0 == k).unwrap().1;
        letters.push(L { core: None, sigma: k, tau: g });
    }
    let m = letters.len();
    let mut out = vec![vec![usize::MAX; m]; m];
    for (i, li) in letters.iter().enumerate() {
        for (j, lj) in letters.iter().enumerate() {
            out[i][j] = if i == j {
                li.sigma
            } else if let (Some(x), Some(y)) = (li.core, lj.core) {
                t.psi.iter().find(|p| p.0 == x && p.1 == y).unwrap().2
            } else if li.core.is_none() && (lj.core.is_some() || li.sigma < lj.sigma) {
                li.sigma
            } else {
                assert!(lj.core.is_none() && (li.core.is_some() || li.sigma > lj.sigma));
                lj.tau
            };
        }
    }
    out
}

/// All permutations of `0..n` (Heap-free, recursive; n ≤ 6 here).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Type data as comparable sets after relabelling every color by `perm`.
pub fn relabelled_fingerprint(
    t: &madic::types::StrongDenseType,
    perm: &[usize],
) -> (
    [BTreeSet<usize>; 5],
    BTreeSet<(usize, usize, usize)>,
    BTreeSet<BTreeSet<usize>>,
    BTreeSet<(usize, usize)>,
) {
    let s = |x: &BTreeSet<usize>| x.iter().map(|&k| perm[k]).collect();
    (
        [s(&t.a), s(&t.b), s(&t.c), s(&t.d), s(&t.e)],
        t.psi.iter().map(|&(i, j, b)| (perm[i], perm[j], perm[b])).collect(),
        t.blocks.iter().map(|b| b.iter().map(|&k| perm[k]).collect()).collect(),
        t.gamma.iter().map(|&(k, g)| (perm[k], perm[g])).collect(),
    )
}

pub fn equivalent_by_search(a: &madic::types::StrongDenseType, b: &madic::types::StrongDenseType) -> bool {
    let id: Vec<usize> = (0..b.n).collect();
    a.n == b.n
        && all_permutations(a.n)
            .iter()
            .any(|p| relabelled_fingerprint(a, p) == relabelled_fingerprint(b, &id))
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

pub fn sdt(
    n: usize,
    parts: [&[usize]; 5],
    psi: &[(usize, usize, usize)],
    blocks: &[&[usize]],
    gamma: &[(usize, usize)],
) -> madic::types::StrongDenseType {
    madic::types::StrongDenseType {
        n,
        a: set(parts[0]),
        b: set(parts[1]),
        c: set(parts[2]),
        d: set(parts[3]),
        e: set(parts[4]),
        psi: psi.to_vec(),
        blocks: blocks.iter().map(|b| b.to_vec()).collect(),
        gamma: gamma.to_vec(),
    }
}

/// The low-degree tables, transcribed row by row.
pub fn golden_types(n: usize) -> Vec<madic::types::StrongDenseType> {
    match n {
        2 => vec![
            sdt(2, [&[], &[], &[0, 1], &[], &[]], &[], &[&[0, 1]], &[]),
            sdt(2, [&[0], &[], &[1], &[], &[]], &[], &[&[1]], &[]),
        ],
        3 => vec![
            sdt(3, [&[0], &[], &[1, 2], &[], &[]], &[], &[&[1, 2]], &[]),
            sdt(3, [&[0], &[], &[1, 2], &[], &[]], &[], &[&[1], &[2]], &[]),
            sdt(3, [&[0, 1], &[2], &[], &[], &[]], &[(0, 1, 2), (1, 0, 2)], &[], &[]),
        ],
        4 => vec![
            sdt(4, [&[], &[], &[0, 1, 2, 3], &[], &[]], &[], &[&[0, 1], &[2, 3]], &[]),
            sdt(4, [&[0], &[], &[1, 2, 3], &[], &[]], &[], &[&[1], &[2], &[3]], &[]),
            sdt(4, [&[0], &[], &[1, 2, 3], &[], &[]], &[], &[&[1], &[2, 3]], &[]),
            sdt(4, [&[0], &[], &[], &[1, 2], &[3]], &[], &[], &[(1, 3), (2, 3)]),
            sdt(4, [&[0, 1], &[2, 3], &[], &[], &[]], &[(0, 1, 2), (1, 0, 3)], &[], &[]),
            sdt(4, [&[0, 1], &[2], &[3], &[], &[]], &[(0, 1, 2), (1, 0, 2)], &[&[3]], &[]),
            sdt(4, [&[0, 1], &[2], &[], &[3], &[]], &[(0, 1, 2), (1, 0, 2)], &[], &[(3, 2)]),
            sdt(
                4,
                [&[0, 1, 2], &[3], &[], &[], &[]],
                &[(0, 1, 3), (0, 2, 3), (1, 0, 3), (1, 2, 3), (2, 0, 3), (2, 1, 3)],
                &[],
                &[],
            ),
        ],
        _ => Vec::new(),
    }
}

/// Expected `m` column of the same tables.
pub fn golden_m(n: usize) -> Vec<usize> {
    match n {
        2 => vec![2, 2],
        3 => vec![2, 3, 2],
        4 => vec![3, 4, 3, 3, 2, 3, 3, 3],
        _ => Vec::new(),
    }
}
