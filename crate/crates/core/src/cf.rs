//! Periodic continued fractions of quadratic irrationals.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::QuadraticSurd;
use crate::error::{Error, Result};
use crate::intmat::{is_hyperbolic, is_irreducible_over_q, IntMatrix};

/// An eventually periodic continued fraction
/// `[a_0; a_1, …, a_k, (a_{k+1}, …, a_{k+q})]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CFExpansion {
    #[serde(serialize_with = "crate::ser::ints")]
    pub preperiod: Vec<BigInt>,
    #[serde(serialize_with = "crate::ser::ints")]
    pub period: Vec<BigInt>,
}

impl CFExpansion {
    /// Canonical form of an arbitrary eventually periodic word: the period is
    /// reduced to its primitive root and the preperiod is shortened from the
    /// right while its last term equals the last term of the period.
    pub fn normalize(mut preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Domain("empty period".into()));
        }
        let mut period = primitive_root(&period).to_vec();
        while preperiod.last().is_some_and(|a| Some(a) == period.last()) {
            preperiod.pop();
            period.rotate_right(1);
        }
        Ok(CFExpansion { preperiod, period })
    }

    pub fn q(&self) -> usize {
        self.period.len()
    }

    pub fn k(&self) -> usize {
        self.preperiod.len()
    }

    /// The `i`-th partial quotient.
    pub fn term(&self, i: usize) -> &BigInt {
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn terms(&self, n: usize) -> Vec<BigInt> {
        (0..n).map(|i| self.term(i).clone()).collect()
    }

    /// The exact value, as the fixed point of the periodic tail pulled back
    /// through the preperiod.
    pub fn value(&self) -> Result<QuadraticSurd> {
        self.value_from(|disc| Ok((BigInt::one(), disc)))
    }

    /// Same as [`value`](Self::value) for a surd known to lie in `Q(√d)`,
    /// `d` squarefree; avoids factoring the (possibly huge) discriminant of
    /// the period matrix.
    pub fn value_in(&self, d: &BigInt) -> Result<QuadraticSurd> {
        self.value_from(|disc| {
            let (f2, rem) = disc.div_rem(d);
            let f = f2.sqrt();
            if !rem.is_zero() || &f * &f != f2 {
                return Err(Error::FieldMismatch(d.to_string(), disc.to_string()));
            }
            Ok((f, d.clone()))
        })
    }

    fn value_from(&self, split: impl Fn(BigInt) -> Result<(BigInt, BigInt)>) -> Result<QuadraticSurd> {
        let m = word_matrix(&self.period);
        let (a, b, c, d) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
        // y = (a y + b)/(c y + d), c y² + (d - a) y - b = 0, y > 0
        let (f, rad) = split((d - a) * (d - a) + BigInt::from(4) * c * b)?;
        let y = QuadraticSurd::new(a - d, f, BigInt::from(2) * c, rad)?;
        let p = word_matrix(&self.preperiod);
        y.mobius(&p[(0, 0)], &p[(0, 1)], &p[(1, 0)], &p[(1, 1)])
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "[{}; ({})]", join(&self.preperiod), join(&self.period))
    }
}

/// `[[a, 1], [1, 0]]`.
pub fn cf_step_matrix(a: &BigInt) -> IntMatrix {
    IntMatrix::from_rows(vec![vec![a.clone(), BigInt::one()], vec![BigInt::one(), BigInt::zero()]])
        .expect("2x2")
}

/// Product of the step matrices of a word (identity for the empty word).
pub fn word_matrix(word: &[BigInt]) -> IntMatrix {
    word.iter().fold(IntMatrix::identity(2), |acc, a| &acc * &cf_step_matrix(a))
}

fn primitive_root(w: &[BigInt]) -> &[BigInt] {
    let n = w.len();
    for d in 1..n {
        if n % d == 0 && (d..n).all(|i| w[i] == w[i - d]) {
            return &w[..d];
        }
    }
    w
}

/// A period up to cyclic permutation, stored as its lexicographically
/// least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PeriodWord {
    #[serde(serialize_with = "crate::ser::ints")]
    word: Vec<BigInt>,
}

impl PeriodWord {
    /// Canonical rotation of `word`. The word is taken as given; callers
    /// wanting the primitive period reduce it first.
    pub fn new(word: Vec<BigInt>) -> Self {
        PeriodWord { word: least_rotation(&word) }
    }

    pub fn from_i64s(w: &[i64]) -> Self {
        Self::new(w.iter().map(|&a| a.into()).collect())
    }

    pub fn word(&self) -> &[BigInt] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.word.iter().rev().cloned().collect())
    }
}

impl fmt::Display for PeriodWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.word.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", s.join(", "))
    }
}

pub fn least_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    let n = w.len();
    (0..n)
        .map(|s| w[s..].iter().chain(&w[..s]).cloned().collect::<Vec<T>>())
        .min()
        .unwrap_or_default()
}

/// Continued fraction of an irrational quadratic surd.
///
/// The surd is brought to the form `(P + √N)/Q` with `Q | N - P²`; the
/// complete quotients then stay in this form and are determined by the
/// state `(P, Q)`, so the first repeated state marks the start of the
/// period. Distinct complete quotients have distinct states, which makes
/// both the preperiod and the period minimal.
pub fn cf_expand(x: &QuadraticSurd) -> Result<CFExpansion> {
    if x.is_rational() {
        return Err(Error::RationalInput);
    }
    let q = x.q();
    let n = q * q * x.d();
    let (mut p, mut den) = if q.is_positive() {
        (x.p().clone(), x.r().clone())
    } else {
        (-x.p(), -x.r())
    };
    if !((&n - &p * &p) % &den).is_zero() {
        let a = den.abs();
        p *= &a;
        den *= &a;
        return expand_state(p, den, n * &a * &a);
    }
    expand_state(p, den, n)
}

fn expand_state(mut p: BigInt, mut q: BigInt, n: BigInt) -> Result<CFExpansion> {
    let s = n.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms = Vec::new();
    // there are O(N) reduced states; running past that is a bug
    let cap = n.to_usize().map_or(usize::MAX, |v| v.saturating_mul(4).saturating_add(64));
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = terms.split_off(start);
            return Ok(CFExpansion { preperiod: terms, period });
        }
        if terms.len() > cap {
            return Err(Error::Internal("continued fraction failed to become periodic".into()));
        }
        seen.insert((p.clone(), q.clone()), terms.len());
        let a = if q.is_positive() { (&p + &s).div_floor(&q) } else { (&p + &s + BigInt::one()).div_floor(&q) };
        p = &a * &q - &p;
        q = (&n - &p * &p) / &q;
        terms.push(a);
    }
}

pub fn period_of(e: &CFExpansion) -> PeriodWord {
    PeriodWord::new(primitive_root(&e.period).to_vec())
}

pub fn period_cyclic_equal(a: &PeriodWord, b: &PeriodWord) -> bool {
    a == b
}

fn check_2x2(a: &IntMatrix) -> Result<()> {
    if a.nrows() != 2 || a.ncols() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a 2x2 matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    if !is_hyperbolic(a)? {
        return Err(Error::Domain("matrix is not hyperbolic".into()));
    }
    if !is_irreducible_over_q(&a.charpoly())? {
        return Err(Error::Domain("characteristic polynomial is reducible over Q".into()));
    }
    Ok(())
}

/// The eigenvalue of modulus greater than one, `(t ± √(t² - 4 det))/2`
/// with the sign of the trace.
pub fn expanding_eigenvalue(a: &IntMatrix) -> Result<QuadraticSurd> {
    check_2x2(a)?;
    let t = a.trace();
    let disc = &t * &t - BigInt::from(4) * a.det();
    let sign = if t.is_negative() { -1 } else { 1 };
    QuadraticSurd::new(t, BigInt::from(sign), BigInt::from(2), disc)
}

/// `ω_A = x/y` for the expanding eigenvector `(x, y)`. From the first row
/// of `(A - λ)v = 0`, `ω_A = b/(λ - a)`; `b ≠ 0` for an irreducible
/// characteristic polynomial.
pub fn slope_of_expanding_eigenvector(a: &IntMatrix) -> Result<QuadraticSurd> {
    let lambda = expanding_eigenvalue(a)?;
    let b = QuadraticSurd::from_integer(a[(0, 1)].clone());
    lambda.sub(&QuadraticSurd::from_integer(a[(0, 0)].clone()))?.recip()?.mul(&b)
}

/// Products `[[a_0,1],[1,0]] ⋯ [[a_i,1],[1,0]]` for `i < m`.
pub fn convergent_matrices(e: &CFExpansion, m: usize) -> Vec<IntMatrix> {
    let mut acc = IntMatrix::identity(2);
    (0..m)
        .map(|i| {
            acc = &acc * &cf_step_matrix(e.term(i));
            acc.clone()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64, r: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::from_i64(p, q, r, d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| a.into()).collect()
    }

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    /// Oracle: iterate x ↦ 1/(x - ⌊x⌋) with surd arithmetic and collect the
    /// partial quotients directly.
    fn naive_terms(x: &QuadraticSurd, n: usize) -> Vec<BigInt> {
        let mut x = x.clone();
        let mut out = Vec::new();
        for _ in 0..n {
            let a = x.floor();
            x = x.reciprocal_minus(&a).unwrap();
            out.push(a);
        }
        out
    }

    #[test]
    fn expansion_examples() {
        let phi = cf_expand(&s(1, 1, 2, 5)).unwrap();
        assert_eq!(phi, CFExpansion { preperiod: vec![], period: ints(&[1]) });
        let r2 = cf_expand(&s(0, 1, 1, 2)).unwrap();
        assert_eq!(r2, CFExpansion { preperiod: ints(&[1]), period: ints(&[2]) });
        let r3 = cf_expand(&s(0, 1, 1, 3)).unwrap();
        assert_eq!(r3, CFExpansion { preperiod: ints(&[1]), period: ints(&[1, 2]) });
        assert_eq!(naive_terms(&s(0, 1, 1, 3), 5), ints(&[1, 1, 2, 1, 2]));
        assert_eq!(cf_expand(&s(7, 0, 3, 1)), Err(Error::RationalInput));
    }

    #[test]
    fn expansion_matches_naive_iteration_and_value() {
        for d in [2i64, 3, 5, 6, 7, 13, 19, 46, 94, 199] {
            for (p, r) in [(0i64, 1i64), (3, 7), (-5, 4), (11, -6), (-1, -3)] {
                for q in [1i64, -2, 3] {
                    let x = s(p, q, r, d);
                    let e = cf_expand(&x).unwrap();
                    let n = e.k() + 3 * e.q() + 2;
                    assert_eq!(e.terms(n), naive_terms(&x, n), "{x}");
                    assert_eq!(e.value().unwrap(), x);
                    assert!(e.preperiod.iter().skip(1).all(|a| a.is_positive()));
                    assert!(e.period.iter().all(|a| a.is_positive()));
                }
            }
        }
    }

    #[test]
    fn normalize_shrinks_preperiod_and_period() {
        let e = CFExpansion::normalize(ints(&[1, 2, 1]), ints(&[2, 1, 2, 1])).unwrap();
        assert_eq!(e, CFExpansion { preperiod: vec![], period: ints(&[1, 2]) });
        let e = CFExpansion::normalize(ints(&[3, 5]), ints(&[1, 2])).unwrap();
        assert_eq!(e, CFExpansion { preperiod: ints(&[3, 5]), period: ints(&[1, 2]) });
    }

    #[test]
    fn period_words() {
        assert_eq!(PeriodWord::from_i64s(&[2, 1]).word(), &ints(&[1, 2])[..]);
        assert!(period_cyclic_equal(&PeriodWord::from_i64s(&[1, 2, 3]), &PeriodWord::from_i64s(&[3, 1, 2])));
        assert!(!period_cyclic_equal(&PeriodWord::from_i64s(&[1, 2]), &PeriodWord::from_i64s(&[1, 2, 1, 2])));
        assert!(!period_cyclic_equal(&PeriodWord::from_i64s(&[1]), &PeriodWord::from_i64s(&[2])));
        let e = cf_expand(&s(0, 1, 1, 2)).unwrap();
        assert_eq!(period_of(&e), PeriodWord::from_i64s(&[2]));
    }

    #[test]
    fn slopes() {
        assert_eq!(slope_of_expanding_eigenvector(&m(&[&[2, 1], &[1, 1]])).unwrap(), s(1, 1, 2, 5));
        assert_eq!(slope_of_expanding_eigenvector(&m(&[&[1, 1], &[1, 0]])).unwrap(), s(1, 1, 2, 5));
        // (3 - λ)x + y = 0 at λ = 2 + √3 gives x/y = 1/(√3 - 1) = (1 + √3)/2
        assert_eq!(slope_of_expanding_eigenvector(&m(&[&[3, 1], &[2, 1]])).unwrap(), s(1, 1, 2, 3));
        assert!(slope_of_expanding_eigenvector(&IntMatrix::identity(2)).is_err());
        assert!(slope_of_expanding_eigenvector(&m(&[&[2, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn slope_is_an_eigen_direction() {
        for rows in [[[5i64, 2], [2, 1]], [[-4, 1], [-7, 2]], [[0, 1], [1, 3]], [[4, 7], [1, 2]], [[-2, 3], [1, -1]]] {
            let a = m(&[&rows[0], &rows[1]]);
            let w = slope_of_expanding_eigenvector(&a).unwrap();
            let lam = expanding_eigenvalue(&a).unwrap();
            // A (ω, 1)ᵀ = λ (ω, 1)ᵀ
            let int = |i: usize, j: usize| QuadraticSurd::from_integer(a[(i, j)].clone());
            let top = int(0, 0).mul(&w).unwrap().add(&int(0, 1)).unwrap();
            let bot = int(1, 0).mul(&w).unwrap().add(&int(1, 1)).unwrap();
            assert_eq!(top, lam.mul(&w).unwrap());
            assert_eq!(bot, lam);
            assert!(lam.to_f64().abs() > 1.0);
        }
    }

    #[test]
    fn convergents() {
        let phi = cf_expand(&s(1, 1, 2, 5)).unwrap();
        assert_eq!(convergent_matrices(&phi, 2), vec![m(&[&[1, 1], &[1, 0]]), m(&[&[2, 1], &[1, 1]])]);
        let r2 = cf_expand(&s(0, 1, 1, 2)).unwrap();
        assert_eq!(convergent_matrices(&r2, 2), vec![m(&[&[1, 1], &[1, 0]]), m(&[&[3, 1], &[2, 1]])]);
        for (i, c) in convergent_matrices(&r2, 8).iter().enumerate() {
            let expect = if i % 2 == 0 { -1 } else { 1 };
            assert_eq!(c.det(), expect.into());
        }
    }
}
