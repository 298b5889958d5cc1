//! Bounded search for comb configurations that a finite family of node sets
//! fails to separate.
//!
//! Heuristic only: "`A∖B` finite" is read as "every tooth after the first
//! lies in `B`" on truncated combs, so a counterexample here says nothing
//! about the infinite family.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{contains, OpenSetDescriptor, Space, SymbolicPoint};
use crate::error::SpaceError;
use crate::table::PartitionTable;
use crate::tree::{Alphabet, Incidence, Word};

const COMB_SIZE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FalsifierOutcome {
    /// One comb per piece, in piece order, that no choice of sets separates.
    Counterexample { combs: Vec<Vec<Word>> },
    Inconclusive { examined: usize },
}

/// Tooth sets of `(i, j)`-comb prefixes with all teeth of length `≤ depth`.
fn comb_prefixes(alphabet: Alphabet, inc: Incidence, depth: usize) -> BTreeSet<Vec<Word>> {
    let mut out = BTreeSet::new();
    for spine in alphabet.words_of_len(depth + 1) {
        let depths: Vec<usize> = (0..=depth)
            .filter(|&d| spine.letters()[d] == inc.0)
            .filter(|&d| inc.is_diagonal() || d < depth)
            .collect();
        let tooth = |d: usize| {
            let base = spine.prefix(d);
            if inc.is_diagonal() {
                base
            } else {
                base.child(inc.1)
            }
        };
        for chosen in subsets(&depths, COMB_SIZE) {
            out.insert(chosen.into_iter().map(tooth).collect());
        }
    }
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (pos, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[pos + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn separable(family: &[BTreeSet<Word>], combs: &[&Vec<Word>]) -> bool {
    let candidates: Vec<Vec<&BTreeSet<Word>>> = combs
        .iter()
        .map(|teeth| {
            family
                .iter()
                .filter(|b| teeth[1..].iter().all(|t| b.contains(t)))
                .collect()
        })
        .collect();
    fn go(
        candidates: &[Vec<&BTreeSet<Word>>],
        acc: Option<BTreeSet<Word>>,
    ) -> bool {
        let Some((first, rest)) = candidates.split_first() else {
            return acc.is_some_and(|s| s.is_empty());
        };
        first.iter().any(|b| {
            let next = match &acc {
                None => (*b).clone(),
                Some(s) => s.intersection(b).cloned().collect(),
            };
            go(rest, Some(next))
        })
    }
    go(&candidates, None)
}

/// Looks for one comb prefix per piece of `pieces` such that no choice of
/// sets from `family` (each containing its comb's tail) has empty
/// intersection. `budget` bounds the number of comb tuples examined.
pub fn not_separated_search(
    family: &[BTreeSet<Word>],
    pieces: &PartitionTable,
    depth: usize,
    budget: usize,
) -> FalsifierOutcome {
    let alphabet = pieces.table().alphabet();
    let per_piece: Vec<Vec<Vec<Word>>> = (0..pieces.n())
        .map(|color| {
            let mut all = BTreeSet::new();
            for (i, j) in pieces.table().pairs().filter(|&(i, j)| pieces.get(i, j) == color) {
                all.extend(comb_prefixes(alphabet, Incidence(i, j), depth));
            }
            all.into_iter().collect()
        })
        .collect();
    if per_piece.iter().any(Vec::is_empty) {
        return FalsifierOutcome::Inconclusive { examined: 0 };
    }

    let mut idx = vec![0usize; per_piece.len()];
    let mut examined = 0;
    while examined < budget {
        let tuple: Vec<&Vec<Word>> = idx.iter().zip(&per_piece).map(|(&k, v)| &v[k]).collect();
        examined += 1;
        if !separable(family, &tuple) {
            return FalsifierOutcome::Counterexample {
                combs: tuple.into_iter().cloned().collect(),
            };
        }
        // odometer over the per-piece candidate lists
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return FalsifierOutcome::Inconclusive { examined };
            }
            idx[pos] += 1;
            if idx[pos] < per_piece[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
    FalsifierOutcome::Inconclusive { examined }
}

/// Node traces (words of length `≤ depth`) of the canonical open sets
/// `V_t`, `W_t`, `K∖W_t` for `|t| ≤ depth`, deduplicated.
pub fn open_family_traces(space: &Space, depth: usize) -> Result<Vec<BTreeSet<Word>>, SpaceError> {
    let words = space.alphabet().words_up_to(depth);
    let mut out = BTreeSet::new();
    for t in &words {
        for set in [
            OpenSetDescriptor::Vt(t.clone()),
            OpenSetDescriptor::Wt(t.clone()),
            OpenSetDescriptor::NotWt(t.clone()),
        ] {
            let mut trace = BTreeSet::new();
            for s in &words {
                if contains(space, &set, &SymbolicPoint::Node(s.clone()))? {
                    trace.insert(s.clone());
                }
            }
            out.insert(trace);
        }
    }
    Ok(out.into_iter().collect())
}
