//! Klein–Voronoi factor-sails of operators with one real eigenvalue `ρ`
//! and a complex pair `c, c̄`.
//!
//! Write `v = x' g₁ + Re(α g_c)`. The torus group acts on `α` by unit
//! complex numbers, so an orbit is recorded by the pair `(x, r)` with
//! `x = u(ρ)·v` and `r = |u(c)·v|`, where `u(t)` is a row of `adj(tI - A)`.
//! Both `x` and `r² = P(c) P(c̄)`, `P(t) = u(t)·v`, lie in `Q(ρ)`: with
//! `s = c + c̄ = tr A - ρ` and `p = c c̄ = det A / ρ`,
//!
//! ```text
//! r² = α₀² + α₀α₁ s + α₀α₂ (s² - 2p) + α₁² p + α₁α₂ p s + α₂² p²
//! ```
//!
//! for `P(t) = α₀ + α₁ t + α₂ t²`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::dirichlet::DirichletGens;
use super::domain::{canonical_cycle, FaceRecord, FundamentalDomain3};
use super::{apply, classify_spectrum, integer_length, integer_sine, small_matrix, LatticePoint3, SpectrumClass, V3};
use crate::arith::field::sign_sum_sqrt3;
use crate::arith::{IntPoly, NumberField, RatPoly};
use crate::error::{Error, Result};
use crate::intmat::{eigen_data, IntMatrix};

type C64 = (f64, f64);

fn cmul(a: C64, b: C64) -> C64 {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cabs(a: C64) -> f64 {
    a.0.hypot(a.1)
}

fn ceval(p: &IntPoly, z: C64) -> C64 {
    p.coeffs().iter().rev().fold((0.0, 0.0), |acc, c| {
        let m = cmul(acc, z);
        (m.0 + c.to_f64().unwrap_or(f64::NAN), m.1)
    })
}

/// Exact projection of a lattice point into the `(x, r²)` half-plane.
#[derive(Clone, Debug)]
pub struct KvCoords {
    /// Polynomial in `ρ`, reduced modulo the characteristic polynomial.
    pub x: RatPoly,
    pub r2: RatPoly,
    pub x_approx: f64,
    pub r2_approx: f64,
}

/// The cubic field of the real eigenvalue with the data needed to
/// project lattice points.
#[derive(Clone, Debug)]
pub(crate) struct KvContext {
    field: NumberField,
    row: [Vec<BigInt>; 3],
    // basis elements 1, ρ, ρ² for x and the six coefficients of r²
    xs: [RatPoly; 3],
    rs: [RatPoly; 6],
    xs_f: [(f64, f64); 3],
    rs_f: [(f64, f64); 6],
    /// `|v|∞ <= k1 |x| + k2 r` for every real `v`.
    k1: f64,
    k2: f64,
    /// Approximate complex eigenvalue with positive imaginary part.
    pub c: C64,
    /// Rows of the real frame `(u(ρ), Re u(c), Im u(c))` for reporting and
    /// basis reduction.
    pub frame: [[f64; 3]; 3],
}

impl KvContext {
    pub(crate) fn new(a: &IntMatrix) -> Result<Self> {
        if classify_spectrum(a)? != SpectrumClass::KleinVoronoi {
            return Err(Error::SpectrumMismatch("factor-sails need exactly one real eigenvalue".into()));
        }
        let ed = eigen_data(a)?;
        let field = NumberField::new(&ed.charpoly, &ed.real_roots[0]);
        let u = ed.left_eigenvectors[0].clone();
        let row = [0, 1, 2].map(|k| (0..3).map(|j| u[k].coeff(j)).collect::<Vec<BigInt>>());
        let rho = RatPoly::x();
        let int = |n: BigInt| RatPoly::constant(BigRational::from_integer(n));
        let f = &ed.charpoly;
        // 1/ρ from ρ³ + f₂ρ² + f₁ρ + f₀ = 0
        let inv_rho = (RatPoly::new(vec![
            BigRational::from_integer(f.coeff(1)),
            BigRational::from_integer(f.coeff(2)),
            BigRational::from_integer(f.coeff(3)),
        ]))
        .scale(&(-BigRational::from_integer(f.coeff(0))).recip());
        let s = field.reduce(&(int(a.trace()) - rho.clone()));
        let p = field.reduce(&inv_rho.scale(&BigRational::from_integer(a.det())));
        let two = BigRational::from_integer(2.into());
        let one = int(BigInt::from(1));
        let rs = [
            one.clone(),
            s.clone(),
            field.reduce(&(field.mul(&s, &s) - p.scale(&two))),
            p.clone(),
            field.mul(&p, &s),
            field.mul(&p, &p),
        ];
        let xs = [one, rho.clone(), field.reduce(&(rho.clone() * rho))];
        let xs_f = [0, 1, 2].map(|k| field.approx(&xs[k]));
        let rs_f = [0, 1, 2, 3, 4, 5].map(|k| field.approx(&rs[k]));
        // complex eigenvalue and eigenvectors in floating point
        let rf = field.alpha();
        let sf = xs_f[0].0 * a.trace().to_f64().unwrap_or(f64::NAN) - rf;
        let pf = rs_f[3].0;
        let c = (sf / 2.0, (pf - sf * sf / 4.0).max(0.0).sqrt());
        let uc: Vec<C64> = u.iter().map(|q| ceval(q, c)).collect();
        let ur: Vec<f64> = u.iter().map(|q| ceval(q, (rf, 0.0)).0).collect();
        let adj = &ed.adjugate;
        let pick_col = |z: C64| -> Vec<C64> {
            (0..3)
                .map(|j| (0..3).map(|i| ceval(&adj[(i, j)], z)).collect::<Vec<C64>>())
                .max_by(|x, y| {
                    let nx: f64 = x.iter().map(|t| cabs(*t)).sum();
                    let ny: f64 = y.iter().map(|t| cabs(*t)).sum();
                    nx.total_cmp(&ny)
                })
                .unwrap_or_default()
        };
        let g1 = pick_col((rf, 0.0));
        let gc = pick_col(c);
        let w1g1: f64 = (0..3).map(|k| ur[k] * g1[k].0).sum();
        let ucgc = (0..3).fold((0.0, 0.0), |acc, k| {
            let t = cmul(uc[k], gc[k]);
            (acc.0 + t.0, acc.1 + t.1)
        });
        let safety = 1.0 + 1e-6;
        let k1 = safety * g1.iter().map(|t| t.0.abs()).fold(0.0, f64::max) / w1g1.abs();
        let k2 = safety * 2.0 * gc.iter().map(|t| cabs(*t)).fold(0.0, f64::max) / cabs(ucgc);
        if !(k1.is_finite() && k2.is_finite()) {
            return Err(Error::Internal("degenerate eigenframe".into()));
        }
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let re: Vec<f64> = uc.iter().map(|t| t.0).collect();
        let im: Vec<f64> = uc.iter().map(|t| t.1).collect();
        let cn = (norm(&re).powi(2) + norm(&im).powi(2)).sqrt();
        let frame = [
            [ur[0] / norm(&ur), ur[1] / norm(&ur), ur[2] / norm(&ur)],
            [re[0] / cn, re[1] / cn, re[2] / cn],
            [im[0] / cn, im[1] / cn, im[2] / cn],
        ];
        Ok(KvContext { field, row, xs, rs, xs_f, rs_f, k1, k2, c, frame })
    }

    fn alphas(&self, v: &V3) -> [i128; 3] {
        [0, 1, 2].map(|j| {
            (0..3).map(|k| v[k] as i128 * self.row[k].get(j).and_then(|x| x.to_i128()).unwrap_or(0)).sum()
        })
    }

    fn r_terms(al: &[i128; 3]) -> [i128; 6] {
        let [a0, a1, a2] = *al;
        [a0 * a0, a0 * a1, a0 * a2, a1 * a1, a1 * a2, a2 * a2]
    }

    /// `(x, err, r², err)` in floating point with rigorous bounds.
    fn approx(&self, v: &V3) -> (f64, f64, f64, f64) {
        let al = self.alphas(v);
        let comb = |coef: &[i128], vals: &[(f64, f64)]| {
            let mut s = 0.0;
            let mut e = 0.0;
            let mut mag = 0.0;
            for (c, (x, ex)) in coef.iter().zip(vals) {
                let cf = *c as f64;
                s += cf * x;
                mag += (cf * x).abs();
                e += cf.abs() * ex;
            }
            (s, 2.0 * (e + 8.0 * f64::EPSILON * mag) + f64::MIN_POSITIVE)
        };
        let (x, ex) = comb(&al, &self.xs_f);
        let (r, er) = comb(&Self::r_terms(&al), &self.rs_f);
        (x, ex, r, er)
    }

    fn exact(&self, v: &V3) -> (RatPoly, RatPoly) {
        let al = self.alphas(v);
        let lin = |coef: &[i128], basis: &[RatPoly]| {
            let mut acc = RatPoly::zero();
            for (c, b) in coef.iter().zip(basis) {
                if *c != 0 {
                    acc = acc + b.scale(&BigRational::from_integer(BigInt::from(*c)));
                }
            }
            self.field.reduce(&acc)
        };
        (lin(&al, &self.xs), lin(&Self::r_terms(&al), &self.rs))
    }

    fn x_sign(&self, v: &V3) -> Ordering {
        let (x, ex, _, _) = self.approx(v);
        if x.abs() > ex {
            return x.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
        }
        self.field.sign(&self.exact(v).0)
    }

    pub(crate) fn coords(&self, v: &V3) -> KvCoords {
        let (x, r2) = self.exact(v);
        let (xa, _, ra, _) = self.approx(v);
        KvCoords { x, r2, x_approx: xa, r2_approx: ra }
    }
}

/// `(x, r²)` of a lattice point, exactly in `Q(ρ)`.
pub fn kv_project(a: &IntMatrix, v: &LatticePoint3) -> Result<KvCoords> {
    let ctx = KvContext::new(a)?;
    let v = v.to_v3().ok_or_else(|| Error::Domain("lattice point too large".into()))?;
    Ok(ctx.coords(&v))
}

/// One vertex of the factor-sail chain.
#[derive(Clone, Debug, Serialize)]
pub struct KvPoint {
    pub x: f64,
    pub r2: f64,
    /// Every lattice point of the box on this orbit; the first is the
    /// stored representative.
    pub representatives: Vec<LatticePoint3>,
    pub certified: bool,
    #[serde(skip)]
    pub(crate) exact: (RatPoly, RatPoly),
    #[serde(skip)]
    pub(crate) reps: Vec<V3>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KVFactorSail {
    pub component: i8,
    pub bound: u64,
    /// Chain vertices by increasing `x` (decreasing `r`).
    pub points: Vec<KvPoint>,
    /// Whether the edge from `points[k]` to `points[k + 1]` is certified.
    pub edge_certified: Vec<bool>,
    pub enumerated: usize,
    /// Approximate complex eigenvalue `c`, `Im c > 0`.
    pub complex_eigenvalue: (f64, f64),
    #[serde(skip)]
    pub(crate) ctx: KvContext,
}

struct Cand {
    v: V3,
    x: f64,
    ex: f64,
    r: f64,
    er: f64,
}

/// Factor-sail chain of the component `x > 0` (`component = 1`) or
/// `x < 0` (`component = -1`) from the lattice points of max-norm at most
/// `bound`.
pub fn kv_factor_sail(a: &IntMatrix, component: i8, bound: u64) -> Result<KVFactorSail> {
    if component != 1 && component != -1 {
        return Err(Error::Domain("component must be +1 or -1".into()));
    }
    if bound < 2 {
        return Err(Error::RadiusTooSmall(bound));
    }
    let ctx = KvContext::new(a)?;
    let b = bound as i64;
    let want = if component > 0 { Ordering::Greater } else { Ordering::Less };
    let mut cands = Vec::new();
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                let v = [x, y, z];
                if v == [0, 0, 0] || ctx.x_sign(&v) != want {
                    continue;
                }
                let (xf, ex, r, er) = ctx.approx(&v);
                let s = component as f64;
                cands.push(Cand { v, x: xf * s, ex, r, er });
            }
        }
    }
    if cands.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let enumerated = cands.len();
    // discard points dominated in both coordinates (with certainty)
    cands.sort_by(|p, q| (p.x - p.ex).total_cmp(&(q.x - q.ex)));
    let mut by_upper: Vec<usize> = (0..cands.len()).collect();
    by_upper.sort_by(|&i, &j| (cands[i].x + cands[i].ex).total_cmp(&(cands[j].x + cands[j].ex)));
    let mut ptr = 0;
    let mut min_r_upper = f64::INFINITY;
    let mut survivors = Vec::new();
    for p in &cands {
        while ptr < by_upper.len() && cands[by_upper[ptr]].x + cands[by_upper[ptr]].ex < p.x - p.ex {
            let q = &cands[by_upper[ptr]];
            min_r_upper = min_r_upper.min(q.r + q.er);
            ptr += 1;
        }
        if min_r_upper >= p.r - p.er {
            survivors.push(p.v);
        }
    }
    // exact coordinates; x is stored with the component sign folded in
    let sgn = BigRational::from_integer(BigInt::from(component));
    let mut pts: Vec<(V3, RatPoly, RatPoly)> = survivors
        .iter()
        .map(|v| {
            let (x, r) = ctx.exact(v);
            (*v, x.scale(&sgn), r)
        })
        .collect();
    let k = &ctx.field;
    pts.sort_by(|p, q| k.cmp(&p.1, &q.1).then_with(|| k.cmp(&p.2, &q.2)).then_with(|| p.0.cmp(&q.0)));
    // group equal projections, keep the strict Pareto frontier
    let mut groups: Vec<(RatPoly, RatPoly, Vec<V3>)> = Vec::new();
    for (v, x, r) in pts {
        if let Some(last) = groups.last_mut() {
            if k.cmp(&last.0, &x).is_eq() && k.cmp(&last.1, &r).is_eq() {
                last.2.push(v);
                continue;
            }
        }
        groups.push((x, r, vec![v]));
    }
    let mut frontier: Vec<(RatPoly, RatPoly, Vec<V3>)> = Vec::new();
    for g in groups {
        if frontier.last().is_none_or(|f| k.cmp(&g.1, &f.1) == Ordering::Less) {
            // equal x with larger r is dominated; equal x, smaller r cannot
            // occur after sorting by (x, r)
            frontier.push(g);
        }
    }
    // lower-left convex chain
    let orient = |p: &(RatPoly, RatPoly, Vec<V3>), q: &(RatPoly, RatPoly, Vec<V3>), s: &(RatPoly, RatPoly, Vec<V3>)| {
        let a1 = k.reduce(&(s.0.clone() - q.0.clone()));
        let a2 = k.reduce(&(p.0.clone() - s.0.clone()));
        let a3 = k.reduce(&(q.0.clone() - p.0.clone()));
        sign_sum_sqrt3(k, [(&a1, &p.1), (&a2, &q.1), (&a3, &s.1)])
    };
    let mut chain: Vec<(RatPoly, RatPoly, Vec<V3>)> = Vec::new();
    for g in frontier {
        while chain.len() >= 2 && orient(&chain[chain.len() - 2], &chain[chain.len() - 1], &g) != Ordering::Greater {
            chain.pop();
        }
        chain.push(g);
    }
    // certification of edges by the cap below each supporting line
    let approx = |p: &(RatPoly, RatPoly, Vec<V3>)| (k.to_f64(&p.0), k.to_f64(&p.1).max(0.0).sqrt());
    let mut edge_certified = Vec::new();
    for w in chain.windows(2) {
        let (x1, r1) = approx(&w[0]);
        let (x2, r2) = approx(&w[1]);
        let ok = if r1 > r2 && x2 > x1 {
            let x0 = x1 + r1 * (x2 - x1) / (r1 - r2);
            let y0 = r1 + x1 * (r1 - r2) / (x2 - x1);
            (x0 * ctx.k1).max(y0 * ctx.k2) * (1.0 + 1e-6) <= bound as f64
        } else {
            false
        };
        edge_certified.push(ok);
    }
    let n = chain.len();
    let points = chain
        .into_iter()
        .enumerate()
        .map(|(i, (x, r, reps))| {
            let certified = i > 0 && i + 1 < n && edge_certified[i - 1] && edge_certified[i];
            KvPoint {
                x: k.to_f64(&x),
                r2: k.to_f64(&r),
                representatives: reps.iter().map(|v| LatticePoint3::from(*v)).collect(),
                certified,
                exact: (x, r),
                reps,
            }
        })
        .collect();
    Ok(KVFactorSail { component, bound, points, edge_certified, enumerated, complex_eigenvalue: ctx.c, ctx })
}

fn multiset(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    let mut out = vec![v.len() as u64];
    out.extend(v);
    out
}

/// One period of the chain: from a certified vertex to its image under
/// the Dirichlet generator (or its inverse, whichever moves forward).
pub fn kv_fundamental_domain(sail: &KVFactorSail, gens: &DirichletGens) -> Result<FundamentalDomain3> {
    if gens.class != SpectrumClass::KleinVoronoi || gens.rank() != 1 {
        return Err(Error::SpectrumMismatch("factor-sail domains need one Dirichlet generator".into()));
    }
    let too_small = Error::RegionTooSmall { suggested_radius: sail.bound * 2 };
    let forward = gens.certificates[0].log_eigenvalues[0].0 > 0.0;
    let g = if forward { gens.gens[0].clone() } else { gens.gens[0].unimodular_inverse()? };
    let gm = small_matrix(&g)?;
    let k = &sail.ctx.field;
    let sgn = BigRational::from_integer(BigInt::from(sail.component));
    let pts = &sail.points;
    let n = pts.len();
    let edge_ok = |e: usize| e < sail.edge_certified.len() && sail.edge_certified[e];
    let mut found = None;
    'outer: for i in 1..n {
        if !edge_ok(i - 1) {
            continue;
        }
        let Some(img) = apply(&gm, &pts[i].reps[0]) else { continue };
        let (x, r) = sail.ctx.exact(&img);
        let x = x.scale(&sgn);
        for j in i + 1..n {
            if !edge_ok(j - 1) {
                continue 'outer;
            }
            if k.cmp(&pts[j].exact.0, &x).is_eq() && k.cmp(&pts[j].exact.1, &r).is_eq() {
                found = Some((i, j));
                break 'outer;
            }
            if k.cmp(&pts[j].exact.0, &x) == Ordering::Greater {
                continue 'outer;
            }
        }
    }
    let (i, j) = found.ok_or(too_small)?;
    let q = j - i;
    let vertex = |t: usize| &pts[i + (t % q)];
    let at = |t: usize| &pts[i - 1 + t]; // t = 0 is the point before the period
    // edge e joins period vertices e and e + 1
    let edge_sets: Vec<Vec<u64>> = (0..q)
        .map(|e| {
            let (a, b) = (at(e + 1), at(e + 2));
            multiset(a.reps.iter().flat_map(|p| b.reps.iter().map(move |s| integer_length(p, s))).collect())
        })
        .collect();
    let sine_sets: Vec<Vec<u64>> = (0..q)
        .map(|t| {
            let (a, b, c) = (at(t), at(t + 1), at(t + 2));
            let mut v = Vec::new();
            for p in &a.reps {
                for s in &b.reps {
                    for w in &c.reps {
                        v.push(integer_sine(p, s, w));
                    }
                }
            }
            multiset(v)
        })
        .collect();
    let items = |order: &[usize]| -> Vec<Vec<u64>> {
        (0..q)
            .map(|t| {
                let (o, o2) = (order[t], order[(t + 1) % q]);
                let e = if o2 == (o + 1) % q { o } else { o2 };
                let mut item = sine_sets[o].clone();
                item.extend(edge_sets[e].iter().copied());
                item
            })
            .collect()
    };
    let record = FaceRecord {
        dimension: 1,
        area: q as u64,
        vertex_count: q,
        distance: 0,
        vertices: (0..q).map(|t| LatticePoint3::from(vertex(t).reps[0])).collect(),
        edge_lengths: edge_sets.iter().map(|s| s.get(1).copied().unwrap_or(0)).collect(),
        sines: sine_sets.iter().map(|s| s.get(1).copied().unwrap_or(0)).collect(),
        degrees: vec![2; q],
        data: canonical_cycle(q, items),
    };
    Ok(FundamentalDomain3 {
        class: SpectrumClass::KleinVoronoi,
        orthant: [sail.component, 0, 0],
        radius: sail.bound,
        faces: vec![record],
        orbit_sizes: vec![1],
        euler_characteristic: 0,
        generator_coefficients: gens.certificates.iter().map(|c| c.coefficients).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plastic() -> IntMatrix {
        IntMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]).unwrap()
    }

    #[test]
    fn r2_matches_complex_evaluation() {
        let a = plastic();
        let ctx = KvContext::new(&a).unwrap();
        let ed = eigen_data(&a).unwrap();
        let u = &ed.left_eigenvectors[0];
        for v in [[1, 0, 0], [0, 1, 0], [2, -3, 5], [-7, 1, 4]] {
            let c = ctx.coords(&v);
            let uc = (0..3).fold((0.0, 0.0), |acc, k| {
                let t = ceval(&u[k], ctx.c);
                (acc.0 + t.0 * v[k] as f64, acc.1 + t.1 * v[k] as f64)
            });
            let direct = uc.0 * uc.0 + uc.1 * uc.1;
            assert!((c.r2_approx - direct).abs() < 1e-9 * (1.0 + direct), "{v:?}");
            assert!((ctx.field.to_f64(&c.r2) - direct).abs() < 1e-9 * (1.0 + direct));
        }
    }

    #[test]
    fn norm_bound_constants_hold() {
        let ctx = KvContext::new(&plastic()).unwrap();
        for v in [[1, 0, 0], [3, -2, 7], [0, 0, 1], [-5, 5, 2]] {
            let (x, _, r, _) = ctx.approx(&v);
            let bound = ctx.k1 * x.abs() + ctx.k2 * r.sqrt();
            let m = v.iter().map(|t: &i64| t.abs()).max().unwrap() as f64;
            assert!(m <= bound * (1.0 + 1e-9), "{v:?}: {m} > {bound}");
        }
    }
}
