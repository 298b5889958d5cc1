mod common;

use common::{inc_words, rand_color_table, rand_word};
use madic::reduction::{check_reduces, nsubset_construct, search_reduction, ReductionData, SearchOutcome};
use madic::table::ColorTable;
use madic::tree::Word;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random block code `m0 → m1^k` with anchor of length `< k`, if one exists.
fn rand_reduction(rng: &mut ChaCha8Rng, m0: usize, m1: usize, k: usize) -> Option<ReductionData> {
    let mut codes: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..k {
        codes = codes
            .into_iter()
            .flat_map(|w| (0..m1 as u8).map(move |l| [w.clone(), vec![l]].concat()))
            .collect();
    }
    if codes.len() < m0 {
        return None;
    }
    codes.shuffle(rng);
    codes.truncate(m0);
    let x = rand_word(rng, m1, k - 1);
    Some(ReductionData::new(k, Word::new(x), codes.into_iter().map(Word::new).collect()).unwrap())
}

/// `g ∘ ε` straight from the raw codes.
fn pull_back(g: &ColorTable, r: &ReductionData) -> ColorTable {
    ColorTable::from_fn(r.m0(), |u, v| {
        let (eu, ev) = (r.e()[u as usize].letters(), r.e()[v as usize].letters());
        let other = if u == v { r.x().letters() } else { ev };
        let (i, j) = inc_words(eu, other).unwrap();
        g.get(i, j)
    })
    .unwrap()
}

fn rand_table(rng: &mut ChaCha8Rng, m: usize) -> ColorTable {
    let n = rng.gen_range(1..=(m * m).min(5));
    rand_color_table(rng, m, n)
}

proptest! {
    #[test]
    fn reductions_do_not_add_colors(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m0, m1, k) = (rng.gen_range(1..=3), rng.gen_range(2..=3), rng.gen_range(1..=3));
        let Some(r) = rand_reduction(&mut rng, m0, m1, k) else { return Ok(()) };
        let g = rand_table(&mut rng, m1);
        let f = pull_back(&g, &r);
        prop_assert!(check_reduces(&f, &g, &r).unwrap());
        prop_assert!(f.range().len() <= g.range().len());
        prop_assert!(f.range().is_subset(&g.range()));
    }

    #[test]
    fn every_table_reduces_to_itself(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(2..=3);
        let g = rand_table(&mut rng, m);
        let id = ReductionData::identity(m).unwrap();
        prop_assert!(check_reduces(&g, &g, &id).unwrap());
        prop_assert_eq!(search_reduction(&g, &g, 1), SearchOutcome::Found { reduction: id });
    }

    #[test]
    fn search_finds_composed_reductions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m0, m1, m2) = (2, rng.gen_range(2..=3), rng.gen_range(2..=3));
        let (k1, k2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let (Some(r1), Some(r2)) = (rand_reduction(&mut rng, m0, m1, k1), rand_reduction(&mut rng, m1, m2, k2))
        else { return Ok(()) };
        let h = rand_table(&mut rng, m2);
        let g = pull_back(&h, &r2);
        let f = pull_back(&g, &r1);
        prop_assert!(check_reduces(&g, &h, &r2).unwrap());
        prop_assert!(check_reduces(&f, &g, &r1).unwrap());
        match search_reduction(&f, &h, k1 * k2) {
            SearchOutcome::Found { reduction } => prop_assert!(check_reduces(&f, &h, &reduction).unwrap()),
            other => prop_assert!(false, "{:?} ≺ {:?} ≺ {:?} but {:?}", f, g, h, other),
        }
    }

    #[test]
    fn nsubset_hits_every_smaller_size(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(2..=4);
        let g = rand_table(&mut rng, m);
        let n1 = g.range().len();
        for n0 in 1..n1 {
            let out = nsubset_construct(&g, n0).unwrap();
            prop_assert!(check_reduces(&out.f, &g, &out.reduction).unwrap());
            prop_assert_eq!(pull_back(&g, &out.reduction), out.f.clone());
            prop_assert_eq!(out.f.range().len(), n0);
        }
        prop_assert!(nsubset_construct(&g, n1).is_err());
        prop_assert!(nsubset_construct(&g, 0).is_err());
    }
}

#[test]
fn reduction_data_is_validated() {
    let w = |l: &[u8]| Word::new(l);
    assert!(ReductionData::new(0, w(&[]), vec![w(&[])]).is_err());
    assert!(ReductionData::new(1, w(&[0]), vec![w(&[0]), w(&[1])]).is_err());
    assert!(ReductionData::new(1, w(&[]), vec![w(&[0]), w(&[0])]).is_err());
    assert!(ReductionData::new(2, w(&[]), vec![w(&[0]), w(&[1, 0])]).is_err());
    let r: Result<ReductionData, _> = serde_json::from_str(r#"{"k":2,"x":[1],"e":[[0,0],[0,1]]}"#);
    assert!(r.is_ok());
}
