//! Eigen-functionals with certified signs, and the orthant cones they cut
//! out.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{classify_spectrum, SpectrumClass, V3};
use crate::arith::{IntPoly, NumberField, RatPoly};
use crate::error::{Error, Result};
use crate::intmat::{eigen_data, IntMatrix};

/// The linear form `v ↦ Σ c_k(α) v_k` with coefficients in `Q(α)`.
#[derive(Clone, Debug)]
pub(crate) struct AlgForm {
    pub field: NumberField,
    pub coeffs: [RatPoly; 3],
    pub approx: [f64; 3],
    pub err: [f64; 3],
}

impl AlgForm {
    pub fn new(field: NumberField, coeffs: [RatPoly; 3]) -> Self {
        let coeffs = coeffs.map(|c| field.reduce(&c));
        let ae: Vec<(f64, f64)> = coeffs.iter().map(|c| field.approx(c)).collect();
        AlgForm {
            approx: [ae[0].0, ae[1].0, ae[2].0],
            err: [ae[0].1, ae[1].1, ae[2].1],
            field,
            coeffs,
        }
    }

    pub fn from_int_polys(field: NumberField, polys: &[IntPoly]) -> Self {
        AlgForm::new(field, [polys[0].to_rat(), polys[1].to_rat(), polys[2].to_rat()])
    }

    /// Floating-point value and a rigorous error bound.
    pub fn eval(&self, v: &V3) -> (f64, f64) {
        let mut s = 0.0;
        let mut mag = 0.0;
        let mut e = 0.0;
        for k in 0..3 {
            let x = v[k] as f64;
            let t = self.approx[k] * x;
            s += t;
            mag += t.abs();
            e += self.err[k] * x.abs();
        }
        (s, 2.0 * (e + 4.0 * f64::EPSILON * mag) + f64::MIN_POSITIVE)
    }

    pub fn exact(&self, v: &V3) -> RatPoly {
        let mut acc = RatPoly::zero();
        for k in 0..3 {
            if v[k] != 0 {
                acc = acc + self.coeffs[k].scale(&BigRational::from_integer(BigInt::from(v[k])));
            }
        }
        acc
    }

    pub fn sign(&self, v: &V3) -> Ordering {
        let (s, e) = self.eval(v);
        if s.abs() > e {
            return if s > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        self.field.sign(&self.exact(v))
    }

    /// Value of the form on another algebraic vector of the same field.
    pub fn pair(&self, other: &[RatPoly; 3]) -> RatPoly {
        let mut acc = RatPoly::zero();
        for k in 0..3 {
            acc = acc + self.field.mul(&self.coeffs[k], &other[k]);
        }
        self.field.reduce(&acc)
    }
}

/// One of the eight open orthants cut out by the eigenplanes of a
/// totally real 3×3 operator.
///
/// Functional `i` is a left eigenvector for the `i`-th eigenvalue in
/// increasing order; it vanishes on the plane spanned by the other two
/// eigenvectors. The orthant is `{v : orthant[i] · w_i(v) > 0}`.
#[derive(Clone, Debug, Serialize)]
pub struct EigenCone3 {
    pub orthant: [i8; 3],
    /// Eigenvalues, increasing (approximate, for reporting).
    pub eigenvalues: [f64; 3],
    #[serde(skip)]
    pub(crate) forms: Vec<AlgForm>,
    /// Right eigenvectors, each signed to point into the closed orthant.
    #[serde(skip)]
    pub(crate) rays: Vec<AlgForm>,
    #[serde(skip)]
    pub(crate) ray_sign: [i8; 3],
}

impl EigenCone3 {
    pub fn new(a: &IntMatrix, orthant: [i8; 3]) -> Result<Self> {
        if classify_spectrum(a)? != SpectrumClass::Klein {
            return Err(Error::SpectrumMismatch("Klein sails need three real eigenvalues".into()));
        }
        if orthant.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::Domain("orthant signs must be +1 or -1".into()));
        }
        let ed = eigen_data(a)?;
        let mut forms = Vec::new();
        let mut rays = Vec::new();
        let mut ray_sign = [1i8; 3];
        let mut eigenvalues = [0.0; 3];
        for i in 0..3 {
            let field = NumberField::new(&ed.charpoly, &ed.real_roots[i]);
            eigenvalues[i] = field.alpha();
            let w = AlgForm::from_int_polys(field.clone(), &ed.left_eigenvectors[i]);
            let g = AlgForm::from_int_polys(field.clone(), &ed.eigenvectors[i]);
            let wg = w.pair(&g.coeffs);
            let s = match field.sign(&wg) {
                Ordering::Greater => 1,
                Ordering::Less => -1,
                Ordering::Equal => return Err(Error::Internal("eigenvector lies on its own eigenplane".into())),
            };
            ray_sign[i] = s * orthant[i];
            forms.push(w);
            rays.push(g);
        }
        Ok(EigenCone3 { orthant, eigenvalues, forms, rays, ray_sign })
    }

    /// Certified membership in the open orthant. Lattice points other than
    /// the origin never lie on an eigenplane of an irreducible operator.
    pub fn contains(&self, v: &V3) -> bool {
        (0..3).all(|i| self.forms[i].sign(v) == if self.orthant[i] > 0 { Ordering::Greater } else { Ordering::Less })
    }

    /// Approximate cone coordinates `orthant[i] · w_i(v)` with error bounds.
    pub(crate) fn coords(&self, v: &V3) -> [(f64, f64); 3] {
        [0, 1, 2].map(|i| {
            let (s, e) = self.forms[i].eval(v);
            (s * self.orthant[i] as f64, e)
        })
    }

    /// Exact sign of `n · e_i` for the ray `e_i` of the closed orthant.
    pub(crate) fn ray_pairing_sign(&self, n: &V3, i: usize) -> Ordering {
        let s = self.rays[i].sign(n);
        if self.ray_sign[i] > 0 {
            s
        } else {
            s.reverse()
        }
    }

    /// Approximate ray direction scaled to max-norm 1, with an error bound
    /// per coordinate.
    pub(crate) fn ray_approx(&self, i: usize) -> ([f64; 3], f64) {
        let r = &self.rays[i];
        let s = self.ray_sign[i] as f64;
        let m = r.approx.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let e = r.err.iter().fold(0.0f64, |acc, x| acc.max(*x));
        ([r.approx[0] * s / m, r.approx[1] * s / m, r.approx[2] * s / m], (e / m) * 4.0 + 8.0 * f64::EPSILON)
    }

    /// All lattice points of the open orthant with max-norm at most `radius`.
    pub fn enumerate(&self, radius: i64) -> Vec<V3> {
        let mut out = Vec::new();
        for x in -radius..=radius {
            for y in -radius..=radius {
                let (mut lo, mut hi) = (-radius as f64, radius as f64);
                for i in 0..3 {
                    let f = &self.forms[i];
                    let s = self.orthant[i] as f64;
                    let a = s * (f.approx[0] * x as f64 + f.approx[1] * y as f64);
                    let b = s * f.approx[2];
                    if b.abs() <= 1e-9 * (f.approx[0].abs() + f.approx[1].abs() + 1.0) {
                        continue;
                    }
                    let z0 = -a / b;
                    let slack = 1.0 + 1e-9 * z0.abs();
                    if b > 0.0 {
                        lo = lo.max(z0 - slack);
                    } else {
                        hi = hi.min(z0 + slack);
                    }
                }
                if lo > hi {
                    continue;
                }
                let zlo = (lo.floor() as i64).max(-radius);
                let zhi = (hi.ceil() as i64).min(radius);
                for z in zlo..=zhi {
                    let v = [x, y, z];
                    if v != [0, 0, 0] && self.contains(&v) {
                        out.push(v);
                    }
                }
            }
        }
        out
    }
}
