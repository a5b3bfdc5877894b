//! Elements of `Q(α)` for a real algebraic `α`, with a floating-point fast
//! path for signs that falls back to exact evaluation when inconclusive.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::poly::{IntPoly, RatPoly};
use super::sturm::{alg_sign, RootBox};

/// A real number field `Q[x]/(f)` embedded via an isolated root of `f`.
#[derive(Clone, Debug)]
pub struct NumberField {
    modulus: RatPoly,
    root: RootBox,
    alpha: f64,
}

impl NumberField {
    pub fn new(poly: &IntPoly, root: &RootBox) -> Self {
        let mut root = root.clone();
        root.refine_bits(96);
        NumberField { modulus: poly.to_rat().monic(), alpha: root.approx(), root }
    }

    pub fn root(&self) -> &RootBox {
        &self.root
    }

    /// `α` as `f64`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn reduce(&self, a: &RatPoly) -> RatPoly {
        if a.degree().is_some_and(|d| d >= self.degree()) {
            a.rem(&self.modulus)
        } else {
            a.clone()
        }
    }

    pub fn mul(&self, a: &RatPoly, b: &RatPoly) -> RatPoly {
        self.reduce(&(a.clone() * b.clone()))
    }

    /// Value of `a(α)` in floating point with a rigorous bound on the
    /// absolute error (Horner rounding error plus the error from using
    /// the `f64` nearest to `α`). The bound is infinite when a coefficient
    /// does not fit in `f64`.
    pub fn approx(&self, a: &RatPoly) -> (f64, f64) {
        horner_with_error(a.coeffs().iter().map(|c| c.to_f64()), a.coeffs().len(), self.alpha)
    }

    pub fn to_f64(&self, a: &RatPoly) -> f64 {
        self.approx(a).0
    }

    /// Exact sign of `a(α)`.
    pub fn sign(&self, a: &RatPoly) -> Ordering {
        if a.is_zero() {
            return Ordering::Equal;
        }
        let (v, err) = self.approx(a);
        if v.abs() > err {
            return if v > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        alg_sign(a, &self.root)
    }

    pub fn cmp(&self, a: &RatPoly, b: &RatPoly) -> Ordering {
        self.sign(&(a.clone() - b.clone()))
    }

    pub fn abs(&self, a: &RatPoly) -> RatPoly {
        if self.sign(a) == Ordering::Less {
            -a.clone()
        } else {
            a.clone()
        }
    }
}

/// Horner evaluation at `x` with an error bound covering coefficient
/// rounding, arithmetic rounding and `|x - ξ| <= |x|·ε` for the true point
/// `ξ`. Shared by every float fast path in the crate.
pub fn horner_with_error(coeffs: impl DoubleEndedIterator<Item = Option<f64>>, len: usize, x: f64) -> (f64, f64) {
    let ax = x.abs();
    let dx = ax * f64::EPSILON + f64::MIN_POSITIVE;
    let mut val = 0.0f64;
    let mut mag = 0.0f64;
    let mut dmag = 0.0f64;
    for c in coeffs.rev() {
        let cf = match c {
            Some(v) if v.is_finite() => v,
            _ => return (0.0, f64::INFINITY),
        };
        dmag = dmag * (ax + dx) + mag;
        val = val * x + cf;
        mag = mag * ax + cf.abs();
    }
    let n = len as f64;
    let err = 2.0 * ((2.0 * n + 4.0) * f64::EPSILON * mag + dx * dmag) + f64::MIN_POSITIVE;
    if !err.is_finite() || !val.is_finite() {
        return (0.0, f64::INFINITY);
    }
    (val, err)
}

/// Sign of `α√x + β√y` for field elements with `x, y >= 0`.
pub fn sign_sum_sqrt2(
    k: &NumberField,
    alpha: &RatPoly,
    x: &RatPoly,
    beta: &RatPoly,
    y: &RatPoly,
) -> Ordering {
    let sa = if k.sign(x).is_eq() { Ordering::Equal } else { k.sign(alpha) };
    let sb = if k.sign(y).is_eq() { Ordering::Equal } else { k.sign(beta) };
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (a, b) if a == b => a,
        (a, _) => {
            // opposite signs: compare squares
            let lhs = k.mul(&k.mul(alpha, alpha), x);
            let rhs = k.mul(&k.mul(beta, beta), y);
            let c = k.cmp(&lhs, &rhs);
            if a == Ordering::Greater {
                c
            } else {
                c.reverse()
            }
        }
    }
}

/// Sign of `m + n√w` with `w >= 0`.
pub fn sign_lin_sqrt(k: &NumberField, m: &RatPoly, n: &RatPoly, w: &RatPoly) -> Ordering {
    let one = RatPoly::constant(BigRational::from_integer(1.into()));
    sign_sum_sqrt2(k, m, &one, n, w)
}

/// Sign of `a√x + b√y + c√z` for nonnegative field elements `x, y, z`,
/// decided exactly by repeated squaring.
pub fn sign_sum_sqrt3(
    k: &NumberField,
    terms: [(&RatPoly, &RatPoly); 3],
) -> Ordering {
    let [(a, x), (b, y), (c, z)] = terms;
    let su = sign_sum_sqrt2(k, a, x, b, y);
    let sv = if k.sign(z).is_eq() { Ordering::Equal } else { k.sign(c) };
    match (su, sv) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (p, q) if p == q => p,
        (p, _) => {
            // sign(|u| - |v|) from u² - v² = a²x + b²y - c²z + 2ab√(xy)
            let m = k.mul(a, a);
            let m = k.mul(&m, x);
            let m = m + k.mul(&k.mul(b, b), y) - k.mul(&k.mul(c, c), z);
            let two = BigRational::from_integer(2.into());
            let n = k.mul(a, b).scale(&two);
            let w = k.mul(x, y);
            let s = sign_lin_sqrt(k, &m, &n, &w);
            if p == Ordering::Greater {
                s
            } else {
                s.reverse()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sturm::sturm_isolate;

    fn field(c: &[i64], idx: usize) -> NumberField {
        let p = IntPoly::from_i64s(c);
        let r = sturm_isolate(&p).unwrap()[idx].clone();
        NumberField::new(&p, &r)
    }

    fn rp(c: &[i64]) -> RatPoly {
        IntPoly::from_i64s(c).to_rat()
    }

    #[test]
    fn signs_in_cubic_field() {
        let k = field(&[-1, -3, 0, 1], 2);
        assert_eq!(k.sign(&rp(&[-2, 1])), Ordering::Less);
        assert_eq!(k.sign(&rp(&[-1, -3, 0, 1])), Ordering::Equal);
        assert_eq!(k.sign(&rp(&[0, 0, 0, 1])), Ordering::Greater);
        // α³ reduces to 3α + 1
        assert_eq!(k.reduce(&rp(&[0, 0, 0, 1])), rp(&[1, 3]));
    }

    #[test]
    fn sqrt_sums() {
        let k = field(&[-2, 0, 1], 1); // α = √2
        let one = rp(&[1]);
        // √2 - √α = 1.414... - 1.189... > 0
        assert_eq!(sign_sum_sqrt2(&k, &one, &rp(&[2]), &rp(&[-1]), &rp(&[0, 1])), Ordering::Greater);
        // √2 - √2 = 0
        assert_eq!(sign_sum_sqrt2(&k, &one, &rp(&[2]), &rp(&[-1]), &rp(&[2])), Ordering::Equal);
        // √3 + √5 - √16 : 1.732 + 2.236 - 4 < 0
        assert_eq!(sign_sum_sqrt3(&k, [(&one, &rp(&[3])), (&one, &rp(&[5])), (&rp(&[-1]), &rp(&[16]))]), Ordering::Less);
        // √2 + √8 - √18 = 0
        assert_eq!(sign_sum_sqrt3(&k, [(&one, &rp(&[2])), (&one, &rp(&[8])), (&rp(&[-1]), &rp(&[18]))]), Ordering::Equal);
        // 2√α... with α = √2 : 2·√(√2) vs √(4√2) equal
        assert_eq!(sign_sum_sqrt2(&k, &rp(&[2]), &rp(&[0, 1]), &rp(&[-1]), &rp(&[0, 4])), Ordering::Equal);
    }
}
