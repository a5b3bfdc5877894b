//! Sturm-sequence real-root isolation, bisection refinement and certified
//! sign evaluation at algebraic points.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{rat_gcd, IntPoly, RatPoly};
use crate::error::{Error, Result};

/// Closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn add(&self, o: &Self) -> Self {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// `Some(sign)` when the interval excludes zero or is the point zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

pub fn eval_interval(p: &RatPoly, x: &Interval) -> Interval {
    p.coeffs().iter().rev().fold(Interval::point(BigRational::zero()), |acc, c| {
        acc.mul(x).add(&Interval::point(c.clone()))
    })
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// The Sturm chain `p, p', -rem(p, p'), ...`.
pub fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = -chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(chain: &[RatPoly], x: &BigRational) -> usize {
    variations(chain.iter().map(|q| sign_of(&q.eval(x))))
}

fn variations_at_inf(chain: &[RatPoly], positive: bool) -> usize {
    variations(chain.iter().map(|q| {
        let l = sign_of(q.leading().unwrap());
        let odd = q.degree().unwrap() % 2 == 1;
        if !positive && odd {
            -l
        } else {
            l
        }
    }))
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &RatPoly, lo: &BigRational, hi: &BigRational) -> usize {
    let chain = sturm_chain(p);
    variations_at(&chain, lo) - variations_at(&chain, hi)
}

/// Number of distinct real roots of `p`.
pub fn count_real_roots(p: &RatPoly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    variations_at_inf(&chain, false) - variations_at_inf(&chain, true)
}

/// Strict bound on the modulus of every root (Cauchy).
pub fn cauchy_bound(p: &RatPoly) -> BigRational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let m = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    BigRational::one() + m
}

/// A rational interval isolating exactly one real root of a squarefree
/// integer polynomial. Either `lo == hi` is the root itself, or the root is
/// interior and the polynomial takes opposite signs at the endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootBox {
    #[serde(serialize_with = "ser_poly")]
    pub poly: IntPoly,
    #[serde(serialize_with = "ser_rat")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub hi: BigRational,
}

fn ser_poly<S: serde::Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|c| c.to_string()))
}

fn ser_rat<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl RootBox {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn interval(&self) -> Interval {
        Interval { lo: self.lo.clone(), hi: self.hi.clone() }
    }

    /// Halve the box once.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let two = BigRational::from_integer(2.into());
        let mid = (&self.lo + &self.hi) / two;
        let fm = self.poly.eval_rat(&mid);
        if fm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let flo = self.poly.eval_rat(&self.lo);
        if sign_of(&flo) == sign_of(&fm) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Midpoint as `f64`, for fast filters and logging.
    pub fn approx(&self) -> f64 {
        let two = BigRational::from_integer(2.into());
        ((&self.lo + &self.hi) / two).to_f64().unwrap_or(f64::NAN)
    }

    /// Refine until the width is at most `2^-bits · max(1, |root|)`.
    pub fn refine_bits(&mut self, bits: u32) {
        let scale = self.lo.abs().max(self.hi.abs()).max(BigRational::one());
        let eps = scale / BigRational::from_integer(BigInt::one() << bits);
        while self.width() > eps {
            self.bisect();
        }
    }
}

/// Isolate every real root of a squarefree polynomial, in increasing order.
pub fn sturm_isolate(poly: &IntPoly) -> Result<Vec<RootBox>> {
    if poly.is_zero() {
        return Err(Error::Domain("cannot isolate roots of the zero polynomial".into()));
    }
    if !poly.is_squarefree() {
        return Err(Error::SquarefreeViolation);
    }
    if poly.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let rp = poly.to_rat();
    let chain = sturm_chain(&rp);
    let b = cauchy_bound(&rp);
    let mut out = Vec::new();
    isolate_rec(poly, &rp, &chain, -b.clone(), b, &mut out);
    Ok(out)
}

fn isolate_rec(
    poly: &IntPoly,
    rp: &RatPoly,
    chain: &[RatPoly],
    lo: BigRational,
    hi: BigRational,
    out: &mut Vec<RootBox>,
) {
    let count = variations_at(chain, &lo) - variations_at(chain, &hi);
    if count == 0 {
        return;
    }
    if count == 1 && &hi - &lo <= BigRational::one() {
        out.push(RootBox { poly: poly.clone(), lo, hi });
        return;
    }
    // split point avoiding exact roots
    let width = &hi - &lo;
    let mut t = rat_half();
    let mut k = 1i64;
    let mid = loop {
        let m = &lo + &width * &t;
        if !rp.eval(&m).is_zero() {
            break m;
        }
        t = BigRational::new(k.into(), (2 * k + 1).into());
        k += 1;
    };
    isolate_rec(poly, rp, chain, lo, mid.clone(), out);
    isolate_rec(poly, rp, chain, mid, hi, out);
}

fn rat_half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Bisect until the box width is at most `eps`.
pub fn root_refine(b: &RootBox, eps: &BigRational) -> RootBox {
    let mut b = b.clone();
    while &b.width() > eps {
        b.bisect();
    }
    b
}

/// Exact sign of `g(α)` where `α` is the root isolated by `root`.
///
/// Zero is decided exactly: `g(α) = 0` iff `α` is a root of
/// `gcd(g, poly)`, which is checked with a Sturm count on the box. Otherwise
/// the box is bisected until interval evaluation excludes zero.
pub fn alg_sign(g: &RatPoly, root: &RootBox) -> Ordering {
    if g.is_zero() {
        return Ordering::Equal;
    }
    let f = root.poly.to_rat();
    let h = rat_gcd(&f, g);
    if h.degree().unwrap_or(0) > 0 {
        let vanishes = if root.is_exact() {
            h.eval(&root.lo).is_zero()
        } else {
            sturm_count(&h, &root.lo, &root.hi) > 0
        };
        if vanishes {
            return Ordering::Equal;
        }
    }
    let mut b = root.clone();
    loop {
        if let Some(s) = eval_interval(g, &b.interval()).sign() {
            return s;
        }
        b.bisect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Independent oracle: sign changes on a uniform grid of step 1/64 over
    /// [-25, 25]; for these cubics the roots are far enough apart.
    fn grid_sign_changes(f: &IntPoly) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for k in -1600..=1600 {
            let v = sign_of(&f.eval_rat(&rat(k, 64)));
            if v == 0 {
                count += 1;
                last = 0;
                continue;
            }
            if last != 0 && v != last {
                count += 1;
            }
            last = v;
        }
        count
    }

    #[test]
    fn isolate_examples() {
        let b = sturm_isolate(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b[0].hi <= rat(-1, 1) || b[0].lo < rat(-1, 1));
        let r = root_refine(&b[1], &rat(1, 100));
        assert!(r.width() <= rat(1, 100));
        assert!(r.lo >= rat(1, 1) && r.hi <= rat(2, 1));
        assert!(&r.lo * &r.lo <= rat(2, 1) && &r.hi * &r.hi >= rat(2, 1));
        let r = root_refine(&b[0], &rat(1, 100));
        assert!(r.lo >= rat(-2, 1) && r.hi <= rat(-1, 1));

        let cubic = p(&[-1, -3, 0, 1]);
        let b = sturm_isolate(&cubic).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.len(), grid_sign_changes(&cubic));
        let approx: Vec<f64> = b.iter().map(|x| root_refine(x, &rat(1, 1_000_000)).approx()).collect();
        for (a, e) in approx.iter().zip([-1.532_088_886, -0.347_296_355, 1.879_385_241]) {
            assert!((a - e).abs() < 1e-5, "{a} vs {e}");
        }
        assert!(sturm_isolate(&p(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(sturm_isolate(&p(&[1, -2, 1])), Err(Error::SquarefreeViolation));
    }

    #[test]
    fn refine_is_idempotent_when_wide_enough() {
        let b = sturm_isolate(&p(&[-2, 0, 1])).unwrap()[1].clone();
        let r = root_refine(&b, &rat(10, 1));
        assert_eq!(r, b);
        let big = root_refine(&sturm_isolate(&p(&[-1, -3, 0, 1])).unwrap()[2], &rat(1, 1_000_000));
        assert!(big.width() <= rat(1, 1_000_000));
        assert!(big.lo < rat(188, 100) && big.hi > rat(187, 100));
    }

    #[test]
    fn alg_sign_examples() {
        let sqrt2 = sturm_isolate(&p(&[-2, 0, 1])).unwrap()[1].clone();
        assert_eq!(alg_sign(&p(&[-1, 1]).to_rat(), &sqrt2), Ordering::Greater);
        let phi = sturm_isolate(&p(&[-1, -1, 1])).unwrap()[1].clone();
        assert_eq!(alg_sign(&p(&[-1, -1, 1]).to_rat(), &phi), Ordering::Equal);
        let lmax = sturm_isolate(&p(&[-1, -3, 0, 1])).unwrap()[2].clone();
        assert_eq!(alg_sign(&p(&[-2, 1]).to_rat(), &lmax), Ordering::Less);
        // vanishing on a reducible squarefree modulus: root 1 of (x-1)(x+2)
        let boxes = sturm_isolate(&p(&[-2, 1, 1])).unwrap();
        assert_eq!(alg_sign(&p(&[-1, 1]).to_rat(), &boxes[1]), Ordering::Equal);
        assert_eq!(alg_sign(&p(&[-1, 1]).to_rat(), &boxes[0]), Ordering::Less);
    }

    #[test]
    fn sturm_soundness_on_cubic_grid() {
        // deterministic sweep over cubics with small coefficients
        let mut checked = 0;
        for a in -6..=6 {
            for b in [-7, -3, 0, 4] {
                for c in [-5, -1, 2, 5] {
                    let f = p(&[c, b, a, 1]);
                    if !f.is_squarefree() {
                        continue;
                    }
                    let boxes = sturm_isolate(&f).unwrap();
                    assert_eq!(boxes.len(), count_real_roots(&f.to_rat()));
                    for w in boxes.windows(2) {
                        assert!(w[0].hi <= w[1].lo);
                    }
                    checked += 1;
                }
            }
        }
        assert!(checked > 100);
    }
}
