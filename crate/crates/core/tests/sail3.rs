use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sailkit_core::classify2::{brute_force_conjugator, verify_witness};
use sailkit_core::sail3::{
    decide_conjugacy3, dirichlet_generators, invariant3, kv_factor_sail, kv_fundamental_domain, klein_sail_patch,
    EigenCone3, KleinSailPatch, LatticePoint3, Reason3, SpectrumClass, VerdictKind, DEFAULT_MAX_RADIUS,
};
use sailkit_core::{samples, Error, IntMatrix};

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows).unwrap()
}

fn orthants() -> impl Iterator<Item = [i8; 3]> {
    (0..8).map(|m| [0, 1, 2].map(|b| if m >> b & 1 == 1 { -1 } else { 1 }))
}

fn small(p: &LatticePoint3) -> [i64; 3] {
    [&p.x, &p.y, &p.z].map(|t| i64::try_from(t).unwrap())
}

fn row_sum(u: &IntMatrix) -> u64 {
    (0..3).map(|i| (0..3).map(|j| u64::try_from(u[(i, j)].magnitude()).unwrap()).sum::<u64>()).max().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn points_lie_in_exactly_one_orthant(v in prop::array::uniform3(-60i64..=60), which in 0usize..2) {
        prop_assume!(v != [0, 0, 0]);
        let a = [samples::companion3(-1, -3, 0), samples::companion3(-1, -4, -1)][which].clone();
        let hits = orthants().filter(|&o| EigenCone3::new(&a, o).unwrap().contains(&v)).count();
        prop_assert_eq!(hits, 1);
    }
}

#[test]
fn sail_is_carried_by_conjugation() {
    let a = samples::companion3(-1, -3, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let u = samples::unimodular(&mut rng, 3, 2, true);
        let b = samples::conjugate(&a, &u);
        let radius = 20 * row_sum(&u);
        let mut patches: BTreeMap<[i8; 3], KleinSailPatch> = BTreeMap::new();
        for o in orthants() {
            let p = klein_sail_patch(&a, o, 20).unwrap();
            for v in p.certified_vertices() {
                let w = u.mul_vec(&p.vertices[v].to_vec());
                let w = LatticePoint3::new(w[0].clone(), w[1].clone(), w[2].clone());
                let target = orthants().find(|&t| EigenCone3::new(&b, t).unwrap().contains(&small(&w))).unwrap();
                let q = patches.entry(target).or_insert_with(|| klein_sail_patch(&b, target, radius).unwrap());
                assert!(q.vertices.contains(&w), "U = {u}: image {w:?} of a vertex is not a vertex of the conjugate sail");
            }
        }
    }
}

#[test]
fn klein_invariant_survives_conjugation() {
    let a = samples::companion3(-1, -3, 0);
    let base = invariant3(&a, DEFAULT_MAX_RADIUS).unwrap();
    assert_eq!(base.invariant.class, SpectrumClass::Klein);
    assert!(base.stable, "domains reproduced at twice the radius");
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..4 {
        let b = samples::conjugate(&a, &samples::unimodular(&mut rng, 3, 3, true));
        assert_eq!(invariant3(&b, DEFAULT_MAX_RADIUS).unwrap().invariant, base.invariant, "conjugate {b}");
    }
}

#[test]
fn factor_sail_of_the_plastic_number() {
    let a = samples::companion3(-1, -1, 0);
    let gens = dirichlet_generators(&a).unwrap();
    assert_eq!(gens.rank(), 1);
    for component in [1, -1] {
        let sail = kv_factor_sail(&a, component, 20).unwrap();
        assert!(sail.points.iter().filter(|p| p.certified).count() >= 3);
        let domain = kv_fundamental_domain(&sail, &gens).unwrap();
        assert_eq!(domain.class, SpectrumClass::KleinVoronoi);
        assert!(!domain.faces.is_empty());
    }
    let base = invariant3(&a, DEFAULT_MAX_RADIUS).unwrap().invariant;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..4 {
        let b = samples::conjugate(&a, &samples::unimodular(&mut rng, 3, 3, true));
        assert_eq!(invariant3(&b, DEFAULT_MAX_RADIUS).unwrap().invariant, base, "conjugate {b}");
    }
}

#[test]
fn invariant_mismatch_is_confirmed_by_the_oracle() {
    // same characteristic polynomial, found by a random scan of small
    // matrices; the invariants differ
    for (a, b) in [
        (m(&[&[0, -3, 1], &[2, -3, 0], &[-3, 2, 1]]), m(&[&[-1, 3, 1], &[0, -1, -1], &[-2, 3, 0]])),
        (m(&[&[-2, 1, 3], &[-1, 1, 2], &[-2, -2, -1]]), m(&[&[-2, -2, -3], &[1, -1, 0], &[3, -2, 1]])),
    ] {
        assert_eq!(a.charpoly(), b.charpoly());
        let v = decide_conjugacy3(&a, &b, 20).unwrap();
        assert_eq!((v.verdict, v.reason), (VerdictKind::NotConjugate, Reason3::InvariantMismatch));
        assert!(brute_force_conjugator(&a, &b, 10, false).unwrap().witness.is_none());
    }
}

#[test]
fn decision_stages() {
    let klein = samples::companion3(-1, -3, 0);
    let kv = samples::companion3(-1, -1, 0);
    let v = decide_conjugacy3(&klein, &kv, 10).unwrap();
    assert_eq!(v.reason, Reason3::ClassMismatch);
    let other = samples::companion3(-1, -4, -1);
    let v = decide_conjugacy3(&klein, &other, 10).unwrap();
    assert_eq!((v.verdict, v.reason), (VerdictKind::NotConjugate, Reason3::NotSimilarOverQ));
    assert!(matches!(decide_conjugacy3(&klein, &klein, 0), Err(Error::Domain(_))));

    let u = m(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
    let b = samples::conjugate(&klein, &u);
    let v = decide_conjugacy3(&klein, &b, 50).unwrap();
    let c = v.witness.unwrap();
    assert!(verify_witness(&klein, &b, &c));
    assert_eq!(c.det(), BigInt::from(1));
}

#[test]
fn equal_invariants_without_a_witness_stay_inconclusive() {
    let a = m(&[&[2, 3, 3], &[-2, 1, -2], &[-3, 1, -3]]);
    let b = m(&[&[2, 1, 2], &[-3, -1, -3], &[-2, 2, -1]]);
    let v = decide_conjugacy3(&a, &b, 20).unwrap();
    assert_eq!((v.verdict, v.reason), (VerdictKind::Inconclusive, Reason3::SearchExhausted));
    assert_eq!(v.invariant_a, v.invariant_b);
}
