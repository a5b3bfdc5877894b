use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sailkit_core::arith::sturm::{count_real_roots, sturm_isolate};
use sailkit_core::intmat::{similar_over_q, solve_sylvester_rational};
use sailkit_core::{samples, IntMatrix, IntPoly, QuadraticSurd};

fn int_matrix(n: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-range..=range, n * n).prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| BigInt::from(v[i * n + j])))
}

fn surd() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-50i64..=50, -20i64..=20, (1i64..=30).prop_flat_map(|r| prop_oneof![Just(r), Just(-r)]), 2i64..=500)
}

proptest! {
    #[test]
    fn canonical_form_is_unique((p, q, r, d) in surd(), k in 1i64..=6, m in 1i64..=4) {
        let x = QuadraticSurd::from_i64(p, q, r, d).unwrap();
        // the same number written with scaled numbers and a square factor moved under the root
        let y = QuadraticSurd::from_i64(k * p * m, k * q, k * r * m, d * m * m).unwrap();
        prop_assert_eq!((x.p(), x.q(), x.r(), x.d()), (y.p(), y.q(), y.r(), y.d()));
        let again = QuadraticSurd::new(x.p().clone(), x.q().clone(), x.r().clone(), x.d().clone()).unwrap();
        prop_assert_eq!(&again, &x);
    }

    #[test]
    fn floor_brackets_the_value((p, q, r, d) in surd()) {
        let x = QuadraticSurd::from_i64(p, q, r, d).unwrap();
        let f = QuadraticSurd::from_integer(x.floor());
        let one = QuadraticSurd::from_integer(1.into());
        prop_assert_ne!(x.sub(&f).unwrap().signum(), Ordering::Less);
        prop_assert_eq!(x.sub(&f.add(&one).unwrap()).unwrap().signum(), Ordering::Less);
    }

    #[test]
    fn root_count_matches_a_sign_scan(c in prop::collection::vec(-20i64..=20, 3)) {
        let f = IntPoly::from_i64s(&[c[0], c[1], c[2], 1]);
        prop_assume!(f.is_squarefree());
        let boxes = sturm_isolate(&f).unwrap();
        prop_assert_eq!(boxes.len(), count_real_roots(&f.to_rat()));
        // all roots lie in (-22, 22); scan a grid refined until the count of
        // sign changes stabilises
        let fr = f.to_rat();
        let mut prev = usize::MAX;
        for steps in [1000i64, 4000, 16000, 64000] {
            let mut changes = 0;
            let mut last = Ordering::Equal;
            for k in 0..=steps {
                let x = BigRational::new(BigInt::from(-22 * steps + 44 * k), BigInt::from(steps));
                let s = fr.eval(&x).cmp(&BigRational::from_integer(0.into()));
                if s == Ordering::Equal {
                    changes += 1;
                    last = Ordering::Equal;
                    continue;
                }
                if last != Ordering::Equal && s != last {
                    changes += 1;
                }
                last = s;
            }
            if changes == prev {
                break;
            }
            prev = changes;
        }
        prop_assert_eq!(boxes.len(), prev);
    }

    #[test]
    fn det_is_multiplicative(m in int_matrix(3, 9), n in int_matrix(3, 9)) {
        prop_assert_eq!((&m * &n).det(), m.det() * n.det());
    }

    #[test]
    fn charpoly_is_a_conjugacy_invariant(m in int_matrix(3, 6), seed: u64) {
        let u = samples::unimodular(&mut ChaCha8Rng::seed_from_u64(seed), 3, 5, true);
        prop_assert_eq!(samples::conjugate(&m, &u).charpoly(), m.charpoly());
        prop_assert!(similar_over_q(&m, &samples::conjugate(&m, &u)).unwrap());
    }

    #[test]
    fn cayley_hamilton(m in int_matrix(3, 12)) {
        let f = m.charpoly();
        let mut acc = IntMatrix::zeros(3, 3);
        for c in f.coeffs().iter().rev() {
            acc = &(&acc * &m) + &IntMatrix::identity(3).scale(c);
        }
        prop_assert_eq!(acc, IntMatrix::zeros(3, 3));
    }

    #[test]
    fn similarity_is_an_equivalence(a in int_matrix(2, 5), b in int_matrix(2, 5), seed: u64) {
        let u = samples::unimodular(&mut ChaCha8Rng::seed_from_u64(seed), 2, 4, true);
        let c = samples::conjugate(&b, &u);
        prop_assert!(similar_over_q(&a, &a).unwrap());
        prop_assert_eq!(similar_over_q(&a, &b).unwrap(), similar_over_q(&b, &a).unwrap());
        if similar_over_q(&a, &b).unwrap() {
            prop_assert!(similar_over_q(&a, &c).unwrap());
        }
    }

    #[test]
    fn sylvester_basis_intertwines(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = samples::hyperbolic2(&mut rng, 8);
        let b = samples::conjugate(&a, &samples::unimodular(&mut rng, 2, 4, true));
        let basis = solve_sylvester_rational(&a, &b).unwrap();
        prop_assert_eq!(basis.dim(), 2);
        let (ar, br) = (a.to_rat(), b.to_rat());
        for x in &basis.basis {
            prop_assert_eq!(&ar * x, x * &br);
        }
    }
}
