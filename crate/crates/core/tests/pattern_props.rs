mod common;

use std::collections::BTreeSet;

use common::{inc_branch_word, RawBranch};
use madic::patterns::{
    canonical_pattern, check_first_move_map, comb_nodes, find_pattern, subtree_embedding, CombGenerator,
    FirstMoveMap, PatternKind,
};
use madic::tree::{Alphabet, Incidence, Word};
use proptest::prelude::*;

fn word_set(m: u8) -> impl Strategy<Value = BTreeSet<Word>> {
    prop::collection::btree_set(prop::collection::vec(0..m, 0..=4), 1..7)
        .prop_map(|s| s.into_iter().map(Word::new).collect())
}

fn prefix(m: u8) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..m, 0..=3).prop_map(Word::new)
}

/// A branch with `i` in its period, so `(i, j)`-combs along it never run out.
fn comb_input(m: u8) -> impl Strategy<Value = (RawBranch, u8, u8)> {
    (
        prop::collection::vec(0..m, 0..=3),
        prop::collection::vec(0..m, 1..=3),
        0..m,
        any::<prop::sample::Index>(),
    )
        .prop_map(|(stem, period, j, pick)| {
            let i = period[pick.index(period.len())];
            (RawBranch { stem, period }, i, j)
        })
}

proptest! {
    #[test]
    fn identity_is_valid(a in (2u8..=4).prop_flat_map(word_set)) {
        prop_assert!(check_first_move_map(&FirstMoveMap::identity(&a)).is_valid());
    }

    #[test]
    fn shifts_compose_and_invert((a, u, v) in (2u8..=3).prop_flat_map(|m| (word_set(m), prefix(m), prefix(m)))) {
        let f = FirstMoveMap::from_fn(&a, |t| subtree_embedding(&u, t)).unwrap();
        let image: BTreeSet<Word> = f.range().cloned().collect();
        let g = FirstMoveMap::from_fn(&image, |t| subtree_embedding(&v, t)).unwrap();
        prop_assert!(check_first_move_map(&f).is_valid());
        prop_assert!(check_first_move_map(&f.inverse()).is_valid());
        let h = f.then(&g).unwrap();
        prop_assert!(check_first_move_map(&h).is_valid());
        for t in &a {
            prop_assert_eq!(h.get(t), Some(&v.concat(&u.concat(t))));
        }
    }

    #[test]
    fn comb_teeth_form_an_incidence_sequence((x, i, j) in (2u8..=4).prop_flat_map(comb_input), count in 1usize..8) {
        let g = CombGenerator::along(x.to_branch(), Incidence(i, j), count).unwrap();
        let teeth = comb_nodes(&g);
        prop_assert_eq!(teeth.len(), count);
        let mut last = None;
        for t in &teeth {
            prop_assert_eq!(inc_branch_word(&x, t.letters()), (i, j));
            let meet = (0..t.len()).find(|&d| x.at(d) != t.letters()[d]).unwrap_or(t.len());
            prop_assert!(last.is_none_or(|l| meet > l));
            last = Some(meet);
        }
    }

    #[test]
    fn found_patterns_verify(
        (a, i, j) in (2u8..=3).prop_flat_map(|m| (
            prop::collection::btree_set(prop::collection::vec(0..m, 0..=5), 1..10),
            0..m,
            0..m,
        )),
        size in 1usize..3,
    ) {
        let alphabet = Alphabet::new(3).unwrap();
        let a: BTreeSet<Word> = a.into_iter().map(Word::new).collect();
        let kind = PatternKind::Comb { i, j };
        if let Some(found) = find_pattern(alphabet, &a, kind, size).unwrap() {
            prop_assert!(check_first_move_map(&found.map).is_valid());
            let target = canonical_pattern(alphabet, kind, size).unwrap();
            let range: BTreeSet<Word> = found.map.range().cloned().collect();
            prop_assert_eq!(range, target);
            prop_assert!(found.subset.iter().all(|s| a.contains(s)));
        }
    }

    #[test]
    fn transported_patterns_stay_patterns(u in prefix(3), i in 0u8..3, j in 0u8..3, size in 1usize..4) {
        let alphabet = Alphabet::new(3).unwrap();
        let kind = PatternKind::Comb { i, j };
        let pattern = canonical_pattern(alphabet, kind, size).unwrap();
        let moved: BTreeSet<Word> = pattern.iter().map(|t| subtree_embedding(&u, t)).collect();
        let found = find_pattern(alphabet, &moved, kind, size).unwrap();
        prop_assert!(found.is_some());
    }
}

#[test]
fn swapping_a_split_breaks_incidence() {
    let a: BTreeSet<Word> = [Word::from([0]), Word::from([1])].into_iter().collect();
    let swap = FirstMoveMap::new(vec![(Word::from([0]), Word::from([1])), (Word::from([1]), Word::from([0]))]).unwrap();
    assert!(check_first_move_map(&FirstMoveMap::identity(&a)).is_valid());
    assert!(!check_first_move_map(&swap).is_valid());
}
