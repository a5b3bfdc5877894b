use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sailkit_core::cf::{
    cf_expand, convergent_matrices, period_cyclic_equal, period_of, slope_of_expanding_eigenvector, CFExpansion,
};
use sailkit_core::sail2d::{
    cross, integer_length, integer_sine, lls_matches_cf, lls_period_detail, positive_generator, sail_vertices,
    LatticePoint2,
};
use sailkit_core::{samples, IntMatrix, QuadraticSurd};

fn irrational_surd() -> impl Strategy<Value = QuadraticSurd> {
    (-60i64..=60, 1i64..=12, (1i64..=20).prop_flat_map(|r| prop_oneof![Just(r), Just(-r)]), 2i64..=500)
        .prop_filter("square D", |&(_, _, _, d)| {
            let s = (d as f64).sqrt() as i64;
            (s - 1..=s + 1).all(|t| t * t != d)
        })
        .prop_map(|(p, q, r, d)| QuadraticSurd::from_i64(p, q, r, d).unwrap())
}

fn point() -> impl Strategy<Value = LatticePoint2> {
    (-30i64..=30, -30i64..=30).prop_map(|(x, y)| LatticePoint2::new(x, y))
}

fn apply_affine(u: &IntMatrix, t: &LatticePoint2, p: &LatticePoint2) -> LatticePoint2 {
    let q = p.apply(u);
    LatticePoint2::new(&q.x + &t.x, &q.y + &t.y)
}

/// Lattice points of the closed triangle `O V W` other than `O` and those on
/// `VW`, by scanning the bounding box; `None` if the box is too large.
fn triangle_points(v: &LatticePoint2, w: &LatticePoint2) -> Option<Vec<LatticePoint2>> {
    let o = LatticePoint2::new(0, 0);
    let small = |t: &BigInt| i64::try_from(t).ok().filter(|t| t.abs() < 1 << 20);
    let xs = [&o.x, &v.x, &w.x].map(small);
    let ys = [&o.y, &v.y, &w.y].map(small);
    let xs: Vec<i64> = xs.into_iter().collect::<Option<_>>()?;
    let ys: Vec<i64> = ys.into_iter().collect::<Option<_>>()?;
    let (lo_x, hi_x) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (lo_y, hi_y) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    if (hi_x - lo_x + 1) * (hi_y - lo_y + 1) > 200_000 {
        return None;
    }
    let orient = cross(v, w).signum();
    let mut out = vec![];
    for x in lo_x..=hi_x {
        for y in lo_y..=hi_y {
            let p = LatticePoint2::new(x, y);
            if p == o {
                continue;
            }
            let s1 = cross(v, &p).signum() * &orient;
            let s2 = cross(&p, w).signum() * &orient;
            let s3 = cross(&w.sub(v), &p.sub(v)).signum() * &orient;
            if !s1.is_negative() && !s2.is_negative() && !s3.is_negative() && !s3.is_zero() {
                out.push(p);
            }
        }
    }
    Some(out)
}

proptest! {
    #[test]
    fn expansion_reproduces_the_surd(x in irrational_surd()) {
        let e = cf_expand(&x).unwrap();
        prop_assert_eq!(e.value_in(x.d()).unwrap(), x.clone());
        // written as (P + √Δ)/Q with Q | Δ - P², the number of states is
        // bounded in terms of Δ = q²r²D
        let delta = x.q() * x.q() * x.r() * x.r() * x.d();
        prop_assert!(BigInt::from(e.preperiod.len() + e.period.len()) <= 4 * delta + 4);
    }

    #[test]
    fn doubled_period_minimises_back(x in irrational_surd()) {
        let e = cf_expand(&x).unwrap();
        let doubled = [e.period.clone(), e.period.clone()].concat();
        let n = CFExpansion::normalize(e.preperiod.clone(), doubled).unwrap();
        prop_assert_eq!(n, e);
    }

    #[test]
    fn convergent_determinants_alternate(x in irrational_surd()) {
        let e = cf_expand(&x).unwrap();
        for (i, m) in convergent_matrices(&e, 12).iter().enumerate() {
            let expected = if i % 2 == 0 { -1 } else { 1 };
            prop_assert_eq!(m.det(), BigInt::from(expected));
        }
    }

    #[test]
    fn period_survives_conjugation(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = samples::hyperbolic2(&mut rng, 10);
        let u = samples::unimodular(&mut rng, 2, 5, true);
        let b = samples::conjugate(&a, &u);
        let p = |m: &IntMatrix| period_of(&cf_expand(&slope_of_expanding_eigenvector(m).unwrap()).unwrap());
        prop_assert!(period_cyclic_equal(&p(&a), &p(&b)));
    }

    #[test]
    fn lengths_and_sines_are_affine_invariants(p in point(), q in point(), r in point(), t in point(), seed: u64) {
        let u = samples::unimodular(&mut ChaCha8Rng::seed_from_u64(seed), 2, 6, true);
        let f = |v: &LatticePoint2| apply_affine(&u, &t, v);
        prop_assume!(p != q && q != r);
        prop_assert_eq!(integer_length(&p, &q).unwrap(), integer_length(&f(&p), &f(&q)).unwrap());
        if cross(&p.sub(&q), &r.sub(&q)).is_zero() {
            prop_assert!(integer_sine(&p, &q, &r).is_err());
        } else {
            let s = integer_sine(&p, &q, &r).unwrap();
            prop_assert!(s.is_positive());
            prop_assert_eq!(s, integer_sine(&f(&p), &f(&q), &f(&r)).unwrap());
        }
    }

    #[test]
    fn sail_edges_bound_empty_triangles(seed: u64) {
        let a = samples::hyperbolic2(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let chain = sail_vertices(&a, 6).unwrap();
        for w in chain.vertices.windows(2) {
            let (v, w) = (&w[0], &w[1]);
            match triangle_points(v, w) {
                Some(stray) => prop_assert!(stray.is_empty(), "{:?} inside triangle O {} {}", stray, v, w),
                // Pick: no interior points, and the sides OV, OW are primitive
                None => {
                    let g = |p: &LatticePoint2| p.x.gcd(&p.y);
                    let boundary = g(v) + g(w) + g(&w.sub(v));
                    let interior: BigInt = (cross(v, w).abs() - &boundary + 2) / 2;
                    prop_assert!(interior.is_zero() && g(v).is_one() && g(w).is_one());
                }
            }
        }
    }

    #[test]
    fn positive_generator_shifts_the_sail(seed: u64) {
        let a = samples::hyperbolic2(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let g = positive_generator(&a);
        let step = lls_period_detail(&a).unwrap().vertices_per_generator;
        let chain = sail_vertices(&a, 3 * step + 3).unwrap();
        let head = &chain.vertices[step..2 * step + 1];
        let g_inv = g.unimodular_inverse().unwrap();
        let forward = head.iter().all(|v| chain.vertices.contains(&v.apply(&g)));
        let backward = head.iter().all(|v| chain.vertices.contains(&v.apply(&g_inv)));
        prop_assert!(forward || backward);
    }

    #[test]
    fn lls_period_is_the_cf_period(seed: u64) {
        let a = samples::hyperbolic2(&mut ChaCha8Rng::seed_from_u64(seed), 15);
        prop_assert!(lls_matches_cf(&a).unwrap().is_some());
    }
}
