//! Strong-dense-types, their enumeration up to relabelling, and the color
//! tables `f^α` they define.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::TypeError;
use crate::spaces::DisjointFamily;
use crate::table::{ColorTable, PartitionTable};
use crate::tree::Letter;

/// `α = (A, B, C, D, E, ψ, 𝒫, γ)` on the color set `{0, .., n-1}`.
///
/// `psi` lists `(i, j, ψ(i,j))` and `gamma` lists `(k, γ(k))`. The struct
/// holds possibly-invalid data; see [`validate_type`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrongDenseType {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: BTreeSet<usize>,
    #[serde(rename = "B")]
    pub b: BTreeSet<usize>,
    #[serde(rename = "C")]
    pub c: BTreeSet<usize>,
    #[serde(rename = "D")]
    pub d: BTreeSet<usize>,
    #[serde(rename = "E")]
    pub e: BTreeSet<usize>,
    pub psi: Vec<(usize, usize, usize)>,
    pub blocks: Vec<Vec<usize>>,
    pub gamma: Vec<(usize, usize)>,
}

/// Returns every violated axiom, or an empty list for a valid type.
pub fn validate_type(t: &StrongDenseType) -> Vec<String> {
    let mut v = Vec::new();
    let parts = [("A", &t.a), ("B", &t.b), ("C", &t.c), ("D", &t.d), ("E", &t.e)];
    let mut owner: BTreeMap<usize, &str> = BTreeMap::new();
    for (name, part) in parts {
        for &k in part {
            if k >= t.n {
                v.push(format!("{k} in {name} is not below n = {}", t.n));
            } else if let Some(prev) = owner.insert(k, name) {
                v.push(format!("{k} lies in both {prev} and {name}"));
            }
        }
    }
    for k in (0..t.n).filter(|k| !owner.contains_key(k)) {
        v.push(format!("{k} lies in none of A, B, C, D, E"));
    }

    let mut psi: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(i, j, b) in &t.psi {
        if i == j || !t.a.contains(&i) || !t.a.contains(&j) {
            v.push(format!("psi is defined at ({i},{j}), which is not in <A>^2"));
        }
        if !t.b.contains(&b) {
            v.push(format!("psi({i},{j}) = {b} is not in B"));
        }
        if psi.insert((i, j), b).is_some() {
            v.push(format!("psi is defined twice at ({i},{j})"));
        }
    }
    for (&i, &j) in t.a.iter().cartesian_product(&t.a).filter(|(i, j)| i != j) {
        if !psi.contains_key(&(i, j)) {
            v.push(format!("psi is undefined at ({i},{j})"));
        }
    }
    let psi_range: BTreeSet<usize> = psi.values().copied().collect();
    for b in t.b.difference(&psi_range) {
        v.push(format!("psi is not onto B: {b} is never attained"));
    }

    let mut covered = BTreeSet::new();
    for block in &t.blocks {
        if block.is_empty() || block.len() > 2 {
            v.push(format!("block {block:?} has cardinality {}, not 1 or 2", block.len()));
        }
        for &k in block {
            if !t.c.contains(&k) {
                v.push(format!("block element {k} is not in C"));
            }
            if !covered.insert(k) {
                v.push(format!("{k} lies in two blocks"));
            }
        }
    }
    for k in t.c.difference(&covered) {
        v.push(format!("{k} in C lies in no block"));
    }

    let mut gamma: BTreeMap<usize, usize> = BTreeMap::new();
    for &(k, g) in &t.gamma {
        if !t.d.contains(&k) {
            v.push(format!("gamma is defined at {k}, which is not in D"));
        }
        if !t.b.contains(&g) && !t.e.contains(&g) {
            v.push(format!("gamma({k}) = {g} is not in B or E"));
        }
        if gamma.insert(k, g).is_some() {
            v.push(format!("gamma is defined twice at {k}"));
        }
    }
    for k in t.d.iter().filter(|k| !gamma.contains_key(k)) {
        v.push(format!("gamma is undefined at {k}"));
    }
    for &k in &t.e {
        let fibre = gamma.values().filter(|&&g| g == k).count();
        if fibre < 2 {
            v.push(format!("|gamma^-1({k})| = {fibre} < 2"));
        }
    }

    if t.a.is_empty() {
        if !(t.b.is_empty() && t.d.is_empty() && t.e.is_empty()) {
            v.push("A is empty but B, D, E are not all empty".into());
        }
        for block in t.blocks.iter().filter(|b| b.len() != 2) {
            v.push(format!(
                "A is empty, so all elements of the block partition need cardinality 2; {block:?} does not"
            ));
        }
    }
    v
}

/// An element of the letter set `M = A* ∪ 𝒫 ∪ D`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum MElement {
    Core(usize),
    Block(Vec<usize>),
    Drop(usize),
}

/// `M` enumerated as letters `0..m`: `A*` ascending, then blocks by least
/// element, then `D` ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcreteAlphabet {
    pub elements: Vec<MElement>,
    pub sigma: Vec<usize>,
    /// `None` on `A*` letters.
    pub tau: Vec<Option<usize>>,
}

impl ConcreteAlphabet {
    pub fn m(&self) -> usize {
        self.elements.len()
    }

    fn in_core(&self, letter: usize) -> bool {
        matches!(self.elements[letter], MElement::Core(_))
    }
}

impl StrongDenseType {
    fn psi_value(&self, i: usize, j: usize) -> Option<usize> {
        self.psi.iter().find(|p| p.0 == i && p.1 == j).map(|p| p.2)
    }

    fn gamma_value(&self, k: usize) -> Option<usize> {
        self.gamma.iter().find(|p| p.0 == k).map(|p| p.1)
    }

    pub fn is_valid(&self) -> bool {
        validate_type(self).is_empty()
    }

    pub fn concrete_alphabet(&self) -> ConcreteAlphabet {
        let mut elements = Vec::new();
        let mut sigma = Vec::new();
        let mut tau = Vec::new();
        let core: Vec<usize> = if self.a.is_empty() {
            vec![0]
        } else {
            self.a.iter().copied().collect()
        };
        for k in core {
            elements.push(MElement::Core(k));
            sigma.push(k);
            tau.push(None);
        }
        let blocks: BTreeSet<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().sorted().collect())
            .collect();
        for b in blocks.into_iter().sorted_by_key(|b| b[0]) {
            sigma.push(b[0]);
            tau.push(Some(*b.last().expect("nonempty block")));
            elements.push(MElement::Block(b));
        }
        for &k in &self.d {
            elements.push(MElement::Drop(k));
            sigma.push(k);
            tau.push(self.gamma_value(k));
        }
        ConcreteAlphabet {
            elements,
            sigma,
            tau,
        }
    }

    /// Number of letters `|M|`.
    pub fn m(&self) -> usize {
        let core = self.a.len().max(1);
        core + self.blocks.len() + self.d.len()
    }

    /// Applies a relabelling `k ↦ perm[k]` of the color set.
    pub fn relabel(&self, perm: &[usize]) -> StrongDenseType {
        let set = |s: &BTreeSet<usize>| s.iter().map(|&k| perm[k]).collect();
        let mut psi: Vec<_> = self
            .psi
            .iter()
            .map(|&(i, j, b)| (perm[i], perm[j], perm[b]))
            .collect();
        psi.sort_unstable();
        let mut blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&k| perm[k]).sorted().collect())
            .collect();
        blocks.sort();
        let mut gamma: Vec<_> = self.gamma.iter().map(|&(k, g)| (perm[k], perm[g])).collect();
        gamma.sort_unstable();
        StrongDenseType {
            n: self.n,
            a: set(&self.a),
            b: set(&self.b),
            c: set(&self.c),
            d: set(&self.d),
            e: set(&self.e),
            psi,
            blocks,
            gamma,
        }
    }

    fn key(&self) -> TypeKey {
        let mut labels = vec![5u8; self.n];
        for (tag, part) in [&self.a, &self.b, &self.c, &self.d, &self.e].into_iter().enumerate() {
            for &k in part {
                labels[k] = tag as u8;
            }
        }
        TypeKey {
            core: self.a.len(),
            labels,
            psi: self.psi.iter().copied().sorted().collect(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().copied().sorted().collect::<Vec<_>>())
                .sorted()
                .collect(),
            gamma: self.gamma.iter().copied().sorted().collect(),
        }
    }

    /// The relabelling of `self` with the least key over all `n!`
    /// permutations; equivalent types have equal canonical forms.
    pub fn canonical(&self) -> StrongDenseType {
        (0..self.n)
            .permutations(self.n)
            .map(|p| self.relabel(&p))
            .min_by_key(StrongDenseType::key)
            .unwrap_or_else(|| self.clone())
    }

    pub fn equivalent(&self, other: &StrongDenseType) -> bool {
        self.n == other.n && self.canonical().key() == other.canonical().key()
    }
}

/// Ordering key: `|A|`, then the part of each color (A < B < C < D < E),
/// then the sorted ψ, block and γ data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct TypeKey {
    core: usize,
    labels: Vec<u8>,
    psi: Vec<(usize, usize, usize)>,
    blocks: Vec<Vec<usize>>,
    gamma: Vec<(usize, usize)>,
}

/// Partitions of `items` into blocks of size 1 or 2 (only 2 if `pairs_only`).
fn small_block_partitions(items: &[usize], pairs_only: bool) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    if !pairs_only {
        for mut p in small_block_partitions(rest, pairs_only) {
            p.insert(0, vec![first]);
            out.push(p);
        }
    }
    for (pos, &partner) in rest.iter().enumerate() {
        let remaining: Vec<usize> = rest
            .iter()
            .enumerate()
            .filter(|&(q, _)| q != pos)
            .map(|(_, &k)| k)
            .collect();
        for mut p in small_block_partitions(&remaining, pairs_only) {
            p.insert(0, vec![first, partner]);
            out.push(p);
        }
    }
    out
}

/// All functions `domain → codomain` as association lists.
fn functions(domain: &[usize], codomain: &[usize]) -> Vec<Vec<usize>> {
    if domain.is_empty() {
        return vec![Vec::new()];
    }
    (0..domain.len())
        .map(|_| codomain.iter().copied())
        .multi_cartesian_product()
        .collect()
}

/// One canonical representative of every equivalence class of valid
/// strong-dense-types on `n` colors, sorted by canonical key.
pub fn enumerate_types(n: usize) -> Result<Vec<StrongDenseType>, TypeError> {
    if n < 2 {
        return Err(TypeError::TooSmall(n));
    }
    let mut found: BTreeMap<TypeKey, StrongDenseType> = BTreeMap::new();
    for labels in (0..n).map(|_| 0u8..5).multi_cartesian_product() {
        let part = |tag: u8| -> Vec<usize> { (0..n).filter(|&k| labels[k] == tag).collect() };
        let (a, b, c, d, e) = (part(0), part(1), part(2), part(3), part(4));
        if a.is_empty() && !(b.is_empty() && d.is_empty() && e.is_empty()) {
            continue;
        }
        let pairs: Vec<(usize, usize)> = a
            .iter()
            .cartesian_product(&a)
            .filter(|(i, j)| i != j)
            .map(|(&i, &j)| (i, j))
            .collect();
        if pairs.is_empty() != b.is_empty() {
            continue;
        }
        let psis: Vec<Vec<(usize, usize, usize)>> = functions(&vec![0; pairs.len()], &b)
            .into_iter()
            .filter(|vals| b.iter().all(|x| vals.contains(x)))
            .map(|vals| pairs.iter().zip(vals).map(|(&(i, j), v)| (i, j, v)).collect())
            .collect();
        let block_sets = small_block_partitions(&c, a.is_empty());
        let targets: Vec<usize> = b.iter().chain(&e).copied().sorted().collect();
        let gammas: Vec<Vec<(usize, usize)>> = functions(&d, &targets)
            .into_iter()
            .filter(|vals| e.iter().all(|x| vals.iter().filter(|&v| v == x).count() >= 2))
            .map(|vals| d.iter().copied().zip(vals).collect())
            .collect();
        for ((psi, blocks), gamma) in psis
            .iter()
            .cartesian_product(&block_sets)
            .cartesian_product(&gammas)
        {
            let t = StrongDenseType {
                n,
                a: a.iter().copied().collect(),
                b: b.iter().copied().collect(),
                c: c.iter().copied().collect(),
                d: d.iter().copied().collect(),
                e: e.iter().copied().collect(),
                psi: psi.clone(),
                blocks: blocks.clone(),
                gamma: gamma.clone(),
            };
            debug_assert!(t.is_valid(), "{:?}", validate_type(&t));
            let canon = t.canonical();
            found.entry(canon.key()).or_insert(canon);
        }
    }
    Ok(found.into_values().collect())
}

/// Builds `f^α : M × M → n` by the four-case formula and checks it is total,
/// single-valued and onto.
pub fn partition_from_type(
    t: &StrongDenseType,
) -> Result<(ConcreteAlphabet, PartitionTable), TypeError> {
    let violations = validate_type(t);
    if !violations.is_empty() {
        return Err(TypeError::Invalid(violations));
    }
    let alpha = t.concrete_alphabet();
    let m = alpha.m();
    let outside: Vec<usize> = (0..m).filter(|&l| !alpha.in_core(l)).collect();
    let sig_out: BTreeSet<usize> = outside.iter().map(|&l| alpha.sigma[l]).collect();
    if sig_out.len() != outside.len() {
        return Err(TypeError::NotTotal("sigma is not injective off A*".into()));
    }

    let mut values = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut cands = Vec::new();
            let (si, sj) = (alpha.sigma[i], alpha.sigma[j]);
            let (ci, cj) = (alpha.in_core(i), alpha.in_core(j));
            if i == j {
                cands.push(si);
            } else {
                if ci && cj {
                    if let (MElement::Core(x), MElement::Core(y)) = (&alpha.elements[i], &alpha.elements[j]) {
                        if let Some(p) = t.psi_value(*x, *y) {
                            cands.push(p);
                        }
                    }
                }
                if !ci && (cj || si < sj) {
                    cands.push(si);
                }
                if !cj && (ci || si > sj) {
                    cands.push(alpha.tau[j].expect("tau is defined off A*"));
                }
            }
            cands.dedup();
            match cands.as_slice() {
                [c] => values[i][j] = *c,
                [] => return Err(TypeError::NotTotal(format!("no case covers ({i},{j})"))),
                _ => {
                    return Err(TypeError::NotTotal(format!(
                        "cases disagree at ({i},{j}): {cands:?}"
                    )))
                }
            }
        }
    }
    let table = ColorTable::from_rows(m, &values).map_err(TypeError::Space)?;
    let partition = PartitionTable::new(table, t.n).map_err(TypeError::Space)?;
    Ok((alpha, partition))
}

/// `𝔔_2 = {{0,1}}` over two letters; otherwise the singletons
/// `{0}, .., {n-2}` over `n-1` letters.
pub fn qn_family(n: usize) -> Result<DisjointFamily, TypeError> {
    if n < 2 {
        return Err(TypeError::TooSmall(n));
    }
    let family = if n == 2 {
        DisjointFamily::new(2, vec![BTreeSet::from([0, 1])])
    } else {
        DisjointFamily::new(n - 1, (0..n - 1).map(|k| BTreeSet::from([k as Letter])).collect())
    };
    Ok(family?)
}

fn braces(s: impl IntoIterator<Item = usize>) -> String {
    format!("{{{}}}", s.into_iter().join(","))
}

struct Row {
    t: StrongDenseType,
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.t;
        let set = |s: &BTreeSet<usize>| if s.is_empty() { String::new() } else { braces(s.iter().copied()) };
        let constant = |vals: Vec<usize>| -> Option<usize> { vals.iter().all_equal_value().ok().copied() };
        let psi = match constant(t.psi.iter().map(|p| p.2).collect()) {
            _ if t.psi.is_empty() => String::new(),
            Some(v) if t.psi.len() > 1 => format!("≡ {v}"),
            _ => t.psi.iter().map(|(i, j, v)| format!("({i},{j})↦{v}")).join(" "),
        };
        let gamma = match constant(t.gamma.iter().map(|p| p.1).collect()) {
            _ if t.gamma.is_empty() => String::new(),
            Some(v) if t.gamma.len() > 1 => format!("≡ {v}"),
            _ => t.gamma.iter().map(|(k, v)| format!("{k}↦{v}")).join(" "),
        };
        let blocks = t.blocks.iter().map(|b| braces(b.iter().copied())).join(",");
        let blocks = if blocks.is_empty() { blocks } else { format!("{{{blocks}}}") };
        write!(
            f,
            "{} | {} | {} | {} | {} | {} | {} | {} | {}",
            t.m(),
            set(&t.a),
            set(&t.b),
            set(&t.c),
            set(&t.d),
            set(&t.e),
            psi,
            blocks,
            gamma
        )
    }
}

/// Renders types as rows `α_n^k | m | A | B | C | D | E | ψ | 𝒫 | γ`.
pub fn render_table(types: &[StrongDenseType]) -> String {
    let mut out = String::from("type | m | A | B | C | D | E | psi | P | gamma\n");
    for (k, t) in types.iter().enumerate() {
        let _ = writeln!(out, "alpha_{}^{} | {}", t.n, k, Row { t: t.clone() });
    }
    out
}
