//! Generators of the Dirichlet group: unimodular operators commuting with
//! `A`, of determinant +1, with positive real eigenvalues.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{classify_spectrum, SpectrumClass};
use crate::arith::{NumberField, RatPoly};
use crate::error::{Error, Result};
use crate::intmat::{eigen_data, IntMatrix};

/// Default number of coefficient shells searched.
pub const DEFAULT_SHELLS: u64 = 40;

/// Certified data for one generator.
#[derive(Clone, Debug, Serialize)]
pub struct GenCertificate {
    /// `(a, b, c)` with `g = aI + bA + cA²`.
    pub coefficients: [i64; 3],
    /// Sign of `g` on each real eigenline (always +1).
    pub eigenvalue_signs: Vec<i8>,
    /// Enclosures `[lo, hi]` of `ln μ` for each real eigenvalue `μ` of `g`.
    pub log_eigenvalues: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirichletGens {
    pub class: SpectrumClass,
    pub gens: Vec<IntMatrix>,
    pub certificates: Vec<GenCertificate>,
    /// Enclosure of the 2×2 determinant of eigenvalue logarithms that
    /// certifies independence (Klein case only).
    pub independence: Option<(f64, f64)>,
    pub shells_searched: u64,
}

impl DirichletGens {
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Midpoint log-vectors of the generators on the real eigenlines.
    pub fn log_vectors(&self) -> Vec<Vec<f64>> {
        self.certificates
            .iter()
            .map(|c| c.log_eigenvalues.iter().map(|(lo, hi)| (lo + hi) / 2.0).collect())
            .collect()
    }

    /// `g₀^e₀ · g₁^e₁ · …`.
    pub fn power(&self, exps: &[i64]) -> Result<IntMatrix> {
        let mut out = IntMatrix::identity(3);
        for (g, &e) in self.gens.iter().zip(exps) {
            let base = if e < 0 { g.unimodular_inverse()? } else { g.clone() };
            out = &out * &base.pow(e.unsigned_abs() as u32);
        }
        Ok(out)
    }
}

fn rank_of(x: i64) -> i64 {
    if x > 0 {
        2 * x - 1
    } else {
        -2 * x
    }
}

/// Coefficient vectors with `max |·| = s`, ordered by `L1` norm and then
/// by the ranking `0, 1, -1, 2, -2, …` per coordinate, last coordinate
/// most significant (lower-degree polynomials in `A` first).
pub(crate) fn shell(s: i64, dim: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let side = (2 * s + 1) as usize;
    let total = side.pow(dim as u32);
    for mut code in 0..total {
        let mut v = Vec::with_capacity(dim);
        for _ in 0..dim {
            v.push((code % side) as i64 - s);
            code /= side;
        }
        if v.iter().map(|x| x.abs()).max() == Some(s) {
            out.push(v);
        }
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.iter().rev().map(|&x| rank_of(x)).collect::<Vec<_>>()));
    out
}

fn det3(m: &[[i128; 3]; 3]) -> Option<i128> {
    let t = |a: i128, b: i128| a.checked_mul(b);
    let c0 = t(m[1][1], m[2][2])?.checked_sub(t(m[1][2], m[2][1])?)?;
    let c1 = t(m[1][0], m[2][2])?.checked_sub(t(m[1][2], m[2][0])?)?;
    let c2 = t(m[1][0], m[2][1])?.checked_sub(t(m[1][1], m[2][0])?)?;
    t(m[0][0], c0)?.checked_sub(t(m[0][1], c1)?)?.checked_add(t(m[0][2], c2)?)
}

fn log_enclosure(field: &NumberField, p: &RatPoly) -> Option<(f64, f64)> {
    let (v, e) = field.approx(p);
    if v - e <= 0.0 {
        return None;
    }
    let (lo, hi) = ((v - e).ln(), (v + e).ln());
    let pad = 8.0 * f64::EPSILON * (lo.abs().max(hi.abs())) + 1e-300;
    Some((lo - pad, hi + pad))
}

fn interval_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let c = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pad = 4.0 * f64::EPSILON * lo.abs().max(hi.abs());
    (lo - pad, hi + pad)
}

/// Search `{aI + bA + cA²}` shell by shell for Dirichlet generators.
pub fn dirichlet_generators(a: &IntMatrix) -> Result<DirichletGens> {
    dirichlet_generators_with(a, DEFAULT_SHELLS)
}

pub fn dirichlet_generators_with(a: &IntMatrix, max_shell: u64) -> Result<DirichletGens> {
    let class = classify_spectrum(a)?;
    let ed = eigen_data(a)?;
    let fields: Vec<NumberField> = ed.real_roots.iter().map(|r| NumberField::new(&ed.charpoly, r)).collect();
    let rank = match class {
        SpectrumClass::Klein => 2,
        SpectrumClass::KleinVoronoi => 1,
    };
    let am = super::small_matrix(a)?;
    let a1: [[i128; 3]; 3] = am.map(|r| r.map(i128::from));
    let mut a2 = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a2[i][j] = (0..3).map(|k| a1[i][k] * a1[k][j]).sum();
        }
    }
    let mut gens: Vec<IntMatrix> = Vec::new();
    let mut certs: Vec<GenCertificate> = Vec::new();
    let mut independence = None;
    for s in 1..=max_shell as i64 {
        for coef in shell(s, 3) {
            let (ca, cb, cc) = (coef[0] as i128, coef[1] as i128, coef[2] as i128);
            let mut g = [[0i128; 3]; 3];
            let mut overflow = false;
            for i in 0..3 {
                for j in 0..3 {
                    let id = if i == j { ca } else { 0 };
                    match cb.checked_mul(a1[i][j]).zip(cc.checked_mul(a2[i][j])) {
                        Some((x, y)) => g[i][j] = id + x + y,
                        None => overflow = true,
                    }
                }
            }
            if overflow {
                continue;
            }
            let det_ok = match det3(&g) {
                Some(d) => d == 1,
                None => {
                    let gm = IntMatrix::from_fn(3, 3, |i, j| BigInt::from(g[i][j]));
                    gm.det() == BigInt::from(1)
                }
            };
            if !det_ok || coef == [1, 0, 0] {
                continue;
            }
            let p = RatPoly::new(coef.iter().map(|&x| BigRational::from_integer(x.into())).collect());
            if fields.iter().any(|f| f.sign(&p) != Ordering::Greater) {
                continue;
            }
            let logs: Option<Vec<(f64, f64)>> = fields.iter().map(|f| log_enclosure(f, &p)).collect();
            let Some(logs) = logs else { continue };
            let cert = GenCertificate {
                coefficients: [coef[0], coef[1], coef[2]],
                eigenvalue_signs: vec![1; fields.len()],
                log_eigenvalues: logs.clone(),
            };
            if rank == 2 {
                if let Some(first) = certs.first() {
                    let l = &first.log_eigenvalues;
                    let x = interval_mul(l[0], logs[1]);
                    let y = interval_mul(l[1], logs[0]);
                    let d = (x.0 - y.1, x.1 - y.0);
                    if d.0 <= 0.0 && d.1 >= 0.0 {
                        continue;
                    }
                    independence = Some(d);
                }
            }
            gens.push(IntMatrix::from_fn(3, 3, |i, j| BigInt::from(g[i][j])));
            certs.push(cert);
            if gens.len() == rank {
                return Ok(DirichletGens { class, gens, certificates: certs, independence, shells_searched: s as u64 });
            }
        }
    }
    Err(Error::BoundExhausted { bound: max_shell })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totally_real_generators() {
        let a = IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 3], &[0, 1, 0]]).unwrap();
        let d = dirichlet_generators(&a).unwrap();
        assert_eq!(d.rank(), 2);
        assert!(d.independence.is_some());
        for g in &d.gens {
            assert_eq!(&(g * &a), &(&a * g));
            assert_eq!(g.det(), BigInt::from(1));
            assert_ne!(g, &IntMatrix::identity(3));
        }
        // A² has positive spectrum and qualifies
        let a2 = &a * &a;
        let ed = eigen_data(&a).unwrap();
        assert!(ed.real_roots.iter().all(|r| {
            let f = NumberField::new(&ed.charpoly, r);
            f.sign(&RatPoly::new(vec![BigRational::from_integer(0.into()), BigRational::from_integer(0.into()), BigRational::from_integer(1.into())])) == Ordering::Greater
        }));
        assert_eq!(a2.det(), BigInt::from(1));
    }

    #[test]
    fn plastic_generator_is_the_matrix() {
        let a = IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]).unwrap();
        let d = dirichlet_generators(&a).unwrap();
        assert_eq!(d.rank(), 1);
        assert_eq!(d.gens[0], a);
    }

    #[test]
    fn shells_are_ordered() {
        let s1 = shell(1, 3);
        assert_eq!(s1.len(), 26);
        assert_eq!(s1[0], vec![1, 0, 0]);
        assert_eq!(s1[1], vec![-1, 0, 0]);
    }
}
