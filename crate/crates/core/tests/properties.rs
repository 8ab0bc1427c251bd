use std::path::Path;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use simplex_geom::combinatorics::Permutation;
use simplex_geom::constructions::{canonical_center, canonical_planes};
use simplex_geom::constructions::{construct, decompose, product_from_bijection, CliqueKind};
use simplex_geom::designs::{
    automorphism_group, design_from_clique, find_isomorphism, to_hadamard, Design, HadamardMatrix,
};
use simplex_geom::fano::{all_bijection_maps, FanoBijection};

fn fixture_designs() -> Vec<Design> {
    ["c1", "c2", "c3", "c4", "non_centered"]
        .iter()
        .map(|n| {
            let p = Path::new(env!("CARGO_MANIFEST_DIR"))
                .join("fixtures")
                .join(format!("{n}.incidence"));
            Design::parse_incidence(&std::fs::read_to_string(p).unwrap()).unwrap()
        })
        .collect()
}

fn bordered(rows: &[Vec<u8>]) -> Vec<Vec<i8>> {
    let n = rows.len() + 1;
    let mut h = vec![vec![1i8; n]; n];
    for (i, r) in rows.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            h[i + 1][j + 1] = if x == 1 { -1 } else { 1 };
        }
    }
    h
}

#[test]
fn near_misses_fail_as_designs_and_as_hadamard_matrices() {
    let mut rng = StdRng::seed_from_u64(100);
    let designs = fixture_designs();
    for d in &designs {
        assert!(HadamardMatrix::new(bordered(&d.incidence())).is_ok());
        assert!(to_hadamard(d).is_ok());
    }
    for trial in 0..100 {
        let mut rows = designs[trial % 5].incidence();
        let flips = 1 + trial % 3;
        for _ in 0..flips {
            let (i, j) = (rng.gen_range(0..15), rng.gen_range(0..15));
            rows[i][j] ^= 1;
        }
        let as_design = Design::from_incidence(&rows);
        let as_matrix = HadamardMatrix::new(bordered(&rows));
        assert_eq!(as_design.is_ok(), as_matrix.is_ok(), "trial {trial}");
    }
}

#[test]
fn isomorphism_is_symmetric_and_transitive_on_fixtures() {
    let ds = fixture_designs();
    let mut rng = StdRng::seed_from_u64(3);
    for a in &ds {
        for b in &ds {
            assert_eq!(
                find_isomorphism(a, b).is_some(),
                find_isomorphism(b, a).is_some()
            );
        }
        let p = Permutation::random(15, &mut rng).unwrap();
        let q = Permutation::random(15, &mut rng).unwrap();
        let b = a.relabel(&p).unwrap();
        let c = b.relabel(&q).unwrap();
        let ab = find_isomorphism(a, &b).unwrap();
        let bc = find_isomorphism(&b, &c).unwrap();
        assert!(a.relabel(&ab.then(&bc)).unwrap().same_blocks(&c));
        assert!(find_isomorphism(a, &c).is_some());
    }
}

#[test]
fn group_orders_survive_relabeling() {
    let mut rng = StdRng::seed_from_u64(4);
    for d in fixture_designs() {
        let order = automorphism_group(&d).unwrap().order();
        for _ in 0..3 {
            let e = d
                .relabel(&Permutation::random(15, &mut rng).unwrap())
                .unwrap();
            assert_eq!(automorphism_group(&e).unwrap().order(), order);
        }
    }
}

#[test]
fn constructions_match_fixtures_up_to_isomorphism() {
    let kinds = [
        CliqueKind::C1,
        CliqueKind::C2,
        CliqueKind::C3,
        CliqueKind::C4,
        CliqueKind::NonCentered,
    ];
    for (k, f) in kinds.iter().zip(fixture_designs()) {
        let d = design_from_clique(&construct(*k).unwrap()).unwrap();
        assert!(find_isomorphism(&d, &f).is_some(), "{k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_bijection_round_trips(slot in 0usize..5040) {
        let (x, y) = canonical_planes().unwrap();
        let map = all_bijection_maps()[slot];
        let d = FanoBijection::new(x, y, map).unwrap();
        let c = product_from_bijection(canonical_center(), &d).unwrap();
        let z = canonical_center().without(8);
        let dec = decompose(&c, canonical_center(), Some(z)).unwrap();
        prop_assert_eq!(dec.delta_pairs(), d.pairs());
        prop_assert_eq!(dec.fano_bijection().unwrap().index(), d.index());
    }

    #[test]
    fn relabeled_designs_are_isomorphic(seed in any::<u64>(), which in 0usize..5) {
        let d = &fixture_designs()[which];
        let mut rng = StdRng::seed_from_u64(seed);
        let e = d.relabel(&Permutation::random(15, &mut rng).unwrap()).unwrap();
        let w = find_isomorphism(d, &e);
        prop_assert!(w.is_some());
        prop_assert!(d.relabel(&w.unwrap()).unwrap().same_blocks(&e));
    }
}
