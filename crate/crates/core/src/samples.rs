//! Seeded random inputs for property runs.

use num_bigint::BigInt;
use rand::Rng;

use crate::intmat::{is_hyperbolic, is_irreducible_over_q, IntMatrix};

/// Unimodular 2×2 matrix with entries in `[-range, range]`, hyperbolic with
/// irreducible characteristic polynomial.
pub fn hyperbolic2<R: Rng>(rng: &mut R, range: i64) -> IntMatrix {
    loop {
        let a = IntMatrix::from_fn(2, 2, |_, _| BigInt::from(rng.gen_range(-range..=range)));
        if a.is_unimodular()
            && is_hyperbolic(&a).unwrap_or(false)
            && is_irreducible_over_q(&a.charpoly()).unwrap_or(false)
        {
            return a;
        }
    }
}

/// A 2×2 matrix with the same trace and determinant as `a` and entries in
/// `[-range, range]`, if one is hit within a fixed number of draws.
pub fn same_charpoly2<R: Rng>(rng: &mut R, a: &IntMatrix, range: i64) -> Option<IntMatrix> {
    let t = a.trace();
    let d = a.det();
    for _ in 0..4000 {
        let x: i64 = rng.gen_range(-range..=range);
        let y: i64 = rng.gen_range(-range..=range);
        if y == 0 {
            continue;
        }
        let w = &t - x;
        let num = BigInt::from(x) * &w - &d;
        if &num % y != BigInt::from(0) {
            continue;
        }
        let z = num / y;
        let ok = |v: &BigInt| v.magnitude() <= &num_bigint::BigUint::from(range.unsigned_abs());
        if ok(&z) && ok(&w) {
            return Some(IntMatrix::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) => BigInt::from(x),
                (0, 1) => BigInt::from(y),
                (1, 0) => z.clone(),
                _ => w.clone(),
            }));
        }
    }
    None
}

/// Product of `steps` random elementary matrices `I ± E_ij` (and an
/// occasional sign flip when `allow_negative`), rejected until every entry
/// lies in `[-range, range]`.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize, range: i64, allow_negative: bool) -> IntMatrix {
    loop {
        let mut u = IntMatrix::identity(n);
        let steps = rng.gen_range(1..=2 * n + 2);
        for _ in 0..steps {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = BigInt::from(s);
            u = &u * &e;
        }
        if allow_negative && rng.gen_bool(0.25) {
            let mut f = IntMatrix::identity(n);
            let k = rng.gen_range(0..n);
            f[(k, k)] = BigInt::from(-1);
            u = &u * &f;
        }
        if u.max_abs() <= BigInt::from(range) && u != IntMatrix::identity(n) {
            return u;
        }
    }
}

/// `U A U⁻¹`.
pub fn conjugate(a: &IntMatrix, u: &IntMatrix) -> IntMatrix {
    let ui = u.unimodular_inverse().expect("unimodular");
    &(u * a) * &ui
}

/// Companion matrix of `x³ + c₂x² + c₁x + c₀`.
pub fn companion3(c0: i64, c1: i64, c2: i64) -> IntMatrix {
    IntMatrix::from_fn(3, 3, |i, j| {
        BigInt::from(match (i, j) {
            (1, 0) | (2, 1) => 1,
            (0, 2) => -c0,
            (1, 2) => -c1,
            (2, 2) => -c2,
            _ => 0,
        })
    })
}
