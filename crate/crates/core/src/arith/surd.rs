//! Exact quadratic surds `(p + q√d)/r`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// The real number `(p + q√d)/r` in canonical form: `d` squarefree (or 1
/// for rationals, in which case `q = 0`), `r > 0`, `gcd(p, q, r) = 1`.
///
/// Canonical form is unique, so derived equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct QuadraticSurd {
    #[serde(serialize_with = "crate::ser::int")]
    p: BigInt,
    #[serde(serialize_with = "crate::ser::int")]
    q: BigInt,
    #[serde(serialize_with = "crate::ser::int")]
    r: BigInt,
    #[serde(serialize_with = "crate::ser::int")]
    d: BigInt,
}

/// Split `n > 0` as `s² · m` with `m` squarefree; returns `(s, m)`.
///
/// Trial division runs only while `k³` is at most the remaining cofactor;
/// what is left then has at most two prime factors, so it is either
/// squarefree or the square of a prime.
pub fn square_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut free = BigInt::one();
    let mut m = n.clone();
    let mut k = BigInt::from(2);
    while &k * &k * &k <= m {
        let mut odd = false;
        while (&m % &k).is_zero() {
            m /= &k;
            if odd {
                s *= &k;
            }
            odd = !odd;
        }
        if odd {
            free *= &k;
        }
        k += 1;
    }
    let r = m.sqrt();
    if &r * &r == m && !r.is_one() {
        s *= r;
    } else {
        free *= m;
    }
    (s, free)
}

/// Floor of `a/b` for `b != 0`.
pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Exact sign of `a + b√d` for `d >= 1`.
pub fn sign_linear_sqrt(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = b.sign();
    use num_bigint::Sign::*;
    match (sa, sb) {
        (NoSign, NoSign) => Ordering::Equal,
        (NoSign, Plus) | (Plus, NoSign) | (Plus, Plus) => Ordering::Greater,
        (NoSign, Minus) | (Minus, NoSign) | (Minus, Minus) => Ordering::Less,
        (Plus, Minus) => (a * a).cmp(&(b * b * d)),
        (Minus, Plus) => (b * b * d).cmp(&(a * a)),
    }
}

impl QuadraticSurd {
    /// Build the canonical surd `(p + q√d)/r`.
    pub fn new(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::InvalidDenominator);
        }
        if d < BigInt::one() {
            return Err(Error::Domain(format!("surd radicand must be >= 1, got {d}")));
        }
        let (mut p, mut q, mut r) = (p, q, r);
        let mut d = d;
        if !q.is_zero() {
            let (s, m) = square_decompose(&d);
            q *= s;
            d = m;
            if d.is_one() {
                p += &q;
                q = BigInt::zero();
            }
        }
        if q.is_zero() {
            d = BigInt::one();
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Ok(QuadraticSurd { p, q, r, d })
    }

    pub fn from_i64(p: i64, q: i64, r: i64, d: i64) -> Result<Self> {
        Self::new(p.into(), q.into(), r.into(), d.into())
    }

    pub fn from_integer(n: BigInt) -> Self {
        QuadraticSurd { p: n, q: BigInt::zero(), r: BigInt::one(), d: BigInt::one() }
    }

    pub fn from_rational(x: &BigRational) -> Self {
        QuadraticSurd {
            p: x.numer().clone(),
            q: BigInt::zero(),
            r: x.denom().clone(),
            d: BigInt::one(),
        }
    }

    /// `√n` for `n >= 0`.
    pub fn sqrt_of(n: BigInt) -> Result<Self> {
        if n.is_zero() {
            return Ok(Self::from_integer(BigInt::zero()));
        }
        Self::new(BigInt::zero(), BigInt::one(), BigInt::one(), n)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.p.clone(), self.r.clone()))
    }

    fn common_d(&self, other: &Self) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(BigInt::one()),
            (true, false) => Ok(other.d.clone()),
            (false, true) => Ok(self.d.clone()),
            (false, false) if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::FieldMismatch(self.d.to_string(), other.d.to_string())),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let d = self.common_d(o)?;
        Self::new(
            &self.p * &o.r + &o.p * &self.r,
            &self.q * &o.r + &o.q * &self.r,
            &self.r * &o.r,
            d,
        )
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        QuadraticSurd { p: -&self.p, q: -&self.q, r: self.r.clone(), d: self.d.clone() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let d = self.common_d(o)?;
        Self::new(
            &self.p * &o.p + &self.q * &o.q * &d,
            &self.p * &o.q + &o.p * &self.q,
            &self.r * &o.r,
            d,
        )
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        Self::new(&self.r * &self.p, -(&self.r * &self.q), norm, self.d.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.recip()?)
    }

    /// Galois conjugate `(p - q√d)/r`.
    pub fn conj(&self) -> Self {
        QuadraticSurd { p: self.p.clone(), q: -&self.q, r: self.r.clone(), d: self.d.clone() }
    }

    pub fn signum(&self) -> Ordering {
        sign_linear_sqrt(&self.p, &self.q, &self.d)
    }

    /// Exact `⌊x⌋`, using only the integer square root of `q²d`.
    pub fn floor(&self) -> BigInt {
        if self.q.is_zero() {
            return floor_div(&self.p, &self.r);
        }
        let s = (&self.q * &self.q * &self.d).sqrt();
        if self.q.is_positive() {
            floor_div(&(&self.p + &s), &self.r)
        } else {
            floor_div(&(&self.p - &s - 1), &self.r)
        }
    }

    /// `1/(x - a)`: one step of the continued fraction map.
    pub fn reciprocal_minus(&self, a: &BigInt) -> Result<Self> {
        let shifted = Self::new(&self.p - a * &self.r, self.q.clone(), self.r.clone(), self.d.clone())?;
        if shifted.is_zero() {
            return Err(Error::DivisionByZero);
        }
        shifted.recip()
    }

    /// Apply the integer Möbius map `x ↦ (a x + b)/(c x + d)`.
    pub fn mobius(&self, a: &BigInt, b: &BigInt, c: &BigInt, dd: &BigInt) -> Result<Self> {
        let one = |n: &BigInt| Self::from_integer(n.clone());
        let num = self.mul(&one(a))?.add(&one(b))?;
        let den = self.mul(&one(c))?.add(&one(dd))?;
        num.div(&den)
    }

    /// Lossy conversion, for display and logging only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (p + q * d.sqrt()) / r
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.sub(other).ok().map(|x| x.signum())
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            };
        }
        let sqrt = if self.q.is_one() {
            format!("√{}", self.d)
        } else if (-&self.q).is_one() {
            format!("-√{}", self.d)
        } else {
            format!("{}√{}", self.q, self.d)
        };
        let num = if self.p.is_zero() {
            sqrt
        } else if self.q.is_negative() {
            format!("{} - {}", self.p, sqrt.trim_start_matches('-'))
        } else {
            format!("{} + {}", self.p, sqrt)
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64, r: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::from_i64(p, q, r, d).unwrap()
    }

    #[test]
    fn square_decompose_matches_naive_division() {
        for n in 1i64..4000 {
            let (mut s, mut m) = (1, n);
            let mut k = 2;
            while k * k <= m {
                while m % (k * k) == 0 {
                    m /= k * k;
                    s *= k;
                }
                k += 1;
            }
            assert_eq!(square_decompose(&n.into()), (s.into(), m.into()), "n = {n}");
        }
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(998_244_353u64);
        assert_eq!(square_decompose(&(&p * &p * 12)), (&p * 2, BigInt::from(3)));
        assert_eq!(square_decompose(&(&p * &q * 8)), (BigInt::from(2), &p * &q * 2));
    }

    #[test]
    fn canonicalize_examples() {
        let phi = s(1, 1, 2, 5);
        assert_eq!((phi.p(), phi.q(), phi.r(), phi.d()), (&1.into(), &1.into(), &2.into(), &5.into()));
        assert_eq!(s(2, 2, 4, 5), phi);
        let three = s(1, 1, 1, 4);
        assert_eq!((three.p(), three.q(), three.r(), three.d()), (&3.into(), &0.into(), &1.into(), &1.into()));
        assert_eq!(s(0, 1, 1, 8), s(0, 2, 1, 2));
        assert_eq!(s(1, 1, -2, 5), s(-1, -1, 2, 5));
        assert_eq!(QuadraticSurd::from_i64(1, 1, 0, 5), Err(Error::InvalidDenominator));
    }

    #[test]
    fn floor_examples() {
        assert_eq!(s(1, 1, 2, 5).floor(), 1.into());
        assert_eq!(s(0, 1, 1, 2).floor(), 1.into());
        assert_eq!(s(1, -1, 2, 5).floor(), (-1).into());
        assert_eq!(s(-7, 0, 2, 1).floor(), (-4).into());
        assert_eq!(s(0, -1, 1, 2).floor(), (-2).into());
    }

    #[test]
    fn reciprocal_minus_examples() {
        let phi = s(1, 1, 2, 5);
        assert_eq!(phi.reciprocal_minus(&1.into()).unwrap(), phi);
        assert_eq!(s(0, 1, 1, 2).reciprocal_minus(&1.into()).unwrap(), s(1, 1, 1, 2));
        assert_eq!(s(7, 0, 3, 1).reciprocal_minus(&2.into()).unwrap(), s(3, 0, 1, 1));
        assert_eq!(s(2, 0, 1, 1).reciprocal_minus(&2.into()), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_ops() {
        let phi = s(1, 1, 2, 5);
        // φ² = φ + 1
        assert_eq!(phi.mul(&phi).unwrap(), phi.add(&s(1, 0, 1, 1)).unwrap());
        assert!(phi.add(&s(0, 1, 1, 2)).is_err());
        assert_eq!(phi.mul(&phi.conj()).unwrap(), s(-1, 0, 1, 1));
        assert_eq!(phi.signum(), Ordering::Greater);
        assert_eq!(phi.conj().signum(), Ordering::Less);
        assert!(s(0, 1, 1, 2) < s(3, 0, 2, 1));
    }

    #[test]
    fn display() {
        assert_eq!(s(1, 1, 2, 5).to_string(), "(1 + √5)/2");
        assert_eq!(s(1, -1, 2, 5).to_string(), "(1 - √5)/2");
        assert_eq!(s(0, 3, 1, 2).to_string(), "3√2");
    }
}
