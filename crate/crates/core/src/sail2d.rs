//! Sails of planar cones cut out by the eigenlines of a 2×2 hyperbolic
//! matrix, integer lengths and sines, and LLS-sequences.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::QuadraticSurd;
use crate::cf::{cf_expand, period_of, slope_of_expanding_eigenvector, word_matrix, CFExpansion, PeriodWord};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticePoint2 {
    #[serde(serialize_with = "crate::ser::int")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::ser::int")]
    pub y: BigInt,
}

impl LatticePoint2 {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        LatticePoint2 { x: x.into(), y: y.into() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        LatticePoint2 { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn neg(&self) -> Self {
        LatticePoint2 { x: -&self.x, y: -&self.y }
    }

    /// `a·self - o`
    fn step(&self, a: &BigInt, o: &Self) -> Self {
        LatticePoint2 { x: a * &self.x - &o.x, y: a * &self.y - &o.y }
    }

    pub fn apply(&self, m: &IntMatrix) -> Self {
        LatticePoint2 {
            x: &m[(0, 0)] * &self.x + &m[(0, 1)] * &self.y,
            y: &m[(1, 0)] * &self.x + &m[(1, 1)] * &self.y,
        }
    }
}

impl fmt::Display for LatticePoint2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn cross(a: &LatticePoint2, b: &LatticePoint2) -> BigInt {
    &a.x * &b.y - &a.y * &b.x
}

/// Number of lattice points interior to `PQ`, plus one.
pub fn integer_length(p: &LatticePoint2, q: &LatticePoint2) -> Result<BigInt> {
    let d = q.sub(p);
    if d.x.is_zero() && d.y.is_zero() {
        return Err(Error::DegenerateSegment);
    }
    Ok(d.x.gcd(&d.y))
}

/// `2·S(PQR) / (Il(PQ)·Il(QR))`, always a positive integer.
pub fn integer_sine(p: &LatticePoint2, q: &LatticePoint2, r: &LatticePoint2) -> Result<BigInt> {
    let twice_area = cross(&p.sub(q), &r.sub(q)).abs();
    if twice_area.is_zero() {
        return Err(Error::DegenerateAngle);
    }
    let den = integer_length(p, q)? * integer_length(q, r)?;
    let (s, rem) = twice_area.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::Internal(format!("integer sine at {q} is not integral")));
    }
    Ok(s)
}

/// Open cone `{σ_i (x - ω_i y) > 0}` bounded by two eigenlines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone2 {
    pub slopes: [QuadraticSurd; 2],
    pub signs: [i8; 2],
}

impl Cone2 {
    pub fn contains(&self, p: &LatticePoint2) -> bool {
        self.slopes.iter().zip(self.signs).all(|(w, s)| {
            let v = form(w, p);
            let sign = match v.signum() {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => 0,
            };
            sign == s
        })
    }
}

/// `x - ω y`
fn form(omega: &QuadraticSurd, p: &LatticePoint2) -> QuadraticSurd {
    let x = QuadraticSurd::from_integer(p.x.clone());
    let wy = omega.mul(&QuadraticSurd::from_integer(p.y.clone())).expect("same field");
    x.sub(&wy).expect("same field")
}

/// A window of consecutive sail vertices with its LLS data.
#[derive(Clone, Debug, Serialize)]
pub struct SailChain2D {
    pub vertices: Vec<LatticePoint2>,
    pub cone: Cone2,
    #[serde(serialize_with = "crate::ser::ints")]
    pub lls: Vec<BigInt>,
}

/// The four cones, named by their position in the reduced frame: `V`
/// contains `(1, 0)` and `(1, -1)`, `U` contains `(0, 1)` and `(1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedCone {
    V,
    U,
    NegV,
    NegU,
}

/// Coordinates in which the eigen-slope is purely periodic: `P` is the
/// product of the preperiod step matrices and `τ` the first complete
/// quotient of the period, so `P·(τ, 1)ᵀ` is parallel to `(ω, 1)ᵀ` and
/// `τ > 1 > 0 > τ̄ > -1`.
struct ReducedFrame {
    omega: QuadraticSurd,
    p: IntMatrix,
    tau: QuadraticSurd,
    expansion: CFExpansion,
}

impl ReducedFrame {
    fn of(a: &IntMatrix) -> Result<Self> {
        let omega = slope_of_expanding_eigenvector(a)?;
        let expansion = cf_expand(&omega)?;
        let tau = CFExpansion { preperiod: vec![], period: expansion.period.clone() }.value()?;
        let p = word_matrix(&expansion.preperiod);
        Ok(ReducedFrame { omega, p, tau, expansion })
    }

    fn cone_of(&self, v: &LatticePoint2) -> Result<ReducedCone> {
        let w = v.apply(&self.p.unimodular_inverse()?);
        let l1 = form(&self.tau, &w).signum();
        let l2 = form(&self.tau.conj(), &w).signum();
        use std::cmp::Ordering::*;
        Ok(match (l1, l2) {
            (Greater, Greater) => ReducedCone::V,
            (Less, Greater) => ReducedCone::U,
            (Less, Less) => ReducedCone::NegV,
            (Greater, Less) => ReducedCone::NegU,
            _ => return Err(Error::Internal(format!("{v} lies on an eigenline"))),
        })
    }

    /// Consecutive boundary points of the sail of a reduced cone, mapped to
    /// the original coordinates, together with the multipliers `a_i` of
    /// `b_{i+2} = a_i b_{i+1} - b_i`.
    fn boundary(&self, cone: ReducedCone, steps: usize) -> Result<(Vec<LatticePoint2>, Vec<BigInt>)> {
        let (m0, m1) = match cone {
            ReducedCone::V | ReducedCone::NegV => (LatticePoint2::new(1, -1), LatticePoint2::new(1, 0)),
            ReducedCone::U | ReducedCone::NegU => (LatticePoint2::new(0, 1), LatticePoint2::new(1, 1)),
        };
        // walking toward the ray (τ, 1), on which x - τy vanishes
        let mut pts = vec![m0, m1];
        let mut mult = Vec::with_capacity(steps);
        let mut ell = vec![form(&self.tau, &pts[0]), form(&self.tau, &pts[1])];
        for i in 0..steps {
            let a = ell[i].div(&ell[i + 1])?.floor() + BigInt::one();
            let next = pts[i + 1].step(&a, &pts[i]);
            ell.push(form(&self.tau, &next));
            pts.push(next);
            mult.push(a);
        }
        let flip = matches!(cone, ReducedCone::NegV | ReducedCone::NegU);
        let pts = pts
            .iter()
            .map(|w| {
                let v = w.apply(&self.p);
                if flip {
                    v.neg()
                } else {
                    v
                }
            })
            .collect();
        Ok((pts, mult))
    }
}

/// Sail vertices starting from the first corner after the initial
/// boundary point, with the integer lengths between them.
fn vertices_from_boundary(pts: &[LatticePoint2], mult: &[BigInt]) -> (Vec<LatticePoint2>, Vec<BigInt>) {
    let two = BigInt::from(2);
    let mut verts = Vec::new();
    let mut lengths = Vec::new();
    let mut last = None;
    for (i, a) in mult.iter().enumerate() {
        if *a != two {
            if let Some(j) = last {
                lengths.push(BigInt::from(i + 1 - j));
            }
            verts.push(pts[i + 1].clone());
            last = Some(i + 1);
        }
    }
    (verts, lengths)
}

fn chain_in_cone(frame: &ReducedFrame, cone: ReducedCone, window: usize) -> Result<SailChain2D> {
    if window < 3 {
        return Err(Error::TooShort { needed: 3, got: window });
    }
    let mut steps = 4 * window + 8;
    loop {
        let (pts, mult) = frame.boundary(cone, steps)?;
        let (verts, _) = vertices_from_boundary(&pts, &mult);
        if verts.len() >= window {
            let vertices: Vec<LatticePoint2> = verts.into_iter().take(window).collect();
            let (s1, s2) = match cone {
                ReducedCone::V => (1, 1),
                ReducedCone::U => (-1, 1),
                ReducedCone::NegV => (-1, -1),
                ReducedCone::NegU => (1, -1),
            };
            let cone = original_cone(frame, [s1, s2])?;
            let lls = lls_of_vertices(&vertices)?;
            return Ok(SailChain2D { vertices, cone, lls });
        }
        steps *= 2;
    }
}

/// Describe the image of a reduced cone as sign conditions on `x - ω y`
/// and `x - ω̄ y`, read off from a sample interior point.
fn original_cone(frame: &ReducedFrame, signs: [i8; 2]) -> Result<Cone2> {
    // an interior point of the reduced cone with the given signs
    let w = match signs {
        [1, 1] => LatticePoint2::new(1, 0),
        [-1, 1] => LatticePoint2::new(0, 1),
        [-1, -1] => LatticePoint2::new(-1, 0),
        _ => LatticePoint2::new(0, -1),
    };
    let v = w.apply(&frame.p);
    let slopes = [frame.omega.clone(), frame.omega.conj()];
    let sign = |s: &QuadraticSurd| match form(s, &v).signum() {
        std::cmp::Ordering::Greater => 1,
        _ => -1,
    };
    let signs = [sign(&slopes[0]), sign(&slopes[1])];
    Ok(Cone2 { slopes, signs })
}

/// A window of `window` consecutive vertices of the sail of the cone
/// containing `(1, 0)`.
pub fn sail_vertices(a: &IntMatrix, window: usize) -> Result<SailChain2D> {
    let frame = ReducedFrame::of(a)?;
    let cone = frame.cone_of(&LatticePoint2::new(1, 0))?;
    chain_in_cone(&frame, cone, window)
}

/// Same as [`sail_vertices`] for the cone containing an arbitrary point
/// off the eigenlines.
pub fn sail_vertices_at(a: &IntMatrix, point: &LatticePoint2, window: usize) -> Result<SailChain2D> {
    let frame = ReducedFrame::of(a)?;
    let cone = frame.cone_of(point)?;
    chain_in_cone(&frame, cone, window)
}

/// Window size covering two periods of the sail plus margin.
pub fn default_window(a: &IntMatrix) -> Result<usize> {
    Ok(2 * ReducedFrame::of(a)?.expansion.q() + 3)
}

fn lls_of_vertices(v: &[LatticePoint2]) -> Result<Vec<BigInt>> {
    if v.len() < 3 {
        return Err(Error::TooShort { needed: 3, got: v.len() });
    }
    let mut out = Vec::with_capacity(2 * v.len() - 3);
    for i in 0..v.len() - 1 {
        if i > 0 {
            out.push(integer_sine(&v[i - 1], &v[i], &v[i + 1])?);
        }
        out.push(integer_length(&v[i], &v[i + 1])?);
    }
    Ok(out)
}

/// `(Il(V0V1), Isin(V0V1V2), Il(V1V2), …)`: `2m - 3` entries for `m`
/// vertices.
pub fn lls_sequence(chain: &SailChain2D) -> Result<Vec<BigInt>> {
    lls_of_vertices(&chain.vertices)
}

/// The smallest positive-eigenvalue power/sign of `A`: it maps every cone
/// (and so every sail) to itself.
pub fn positive_generator(a: &IntMatrix) -> IntMatrix {
    if a.det().is_negative() {
        a * a
    } else if a.trace().is_negative() {
        -a.clone()
    } else {
        a.clone()
    }
}

/// Which reading of the LLS word matched the continued fraction period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Direct,
    Reversed,
}

#[derive(Clone, Debug, Serialize)]
pub struct LlsPeriod {
    /// Primitive LLS period, up to rotation.
    pub word: PeriodWord,
    /// The full word read off between a vertex and its image.
    #[serde(serialize_with = "crate::ser::ints")]
    pub raw: Vec<BigInt>,
    pub generator: IntMatrix,
    pub vertices_per_generator: usize,
}

/// LLS period of the sail of the cone containing `(1, 0)`, read between a
/// vertex `V` and its image under the positive generator.
pub fn lls_period_detail(a: &IntMatrix) -> Result<LlsPeriod> {
    let frame = ReducedFrame::of(a)?;
    let cone = frame.cone_of(&LatticePoint2::new(1, 0))?;
    let g = positive_generator(a);
    let g_inv = g.unimodular_inverse()?;
    let mut steps = 16;
    loop {
        let (pts, mult) = frame.boundary(cone, steps)?;
        let (verts, lengths) = vertices_from_boundary(&pts, &mult);
        if let Some(v0) = verts.first() {
            let targets = [v0.apply(&g), v0.apply(&g_inv)];
            if let Some(j) = (1..verts.len().saturating_sub(1)).find(|&j| targets.contains(&verts[j])) {
                let mut raw = Vec::with_capacity(2 * j);
                for i in 0..j {
                    raw.push(lengths[i].clone());
                    raw.push(integer_sine(&verts[i], &verts[i + 1], &verts[i + 2])?);
                }
                let reduced = CFExpansion::normalize(vec![], raw.clone())?.period;
                return Ok(LlsPeriod { word: PeriodWord::new(reduced), raw, generator: g, vertices_per_generator: j });
            }
        }
        if steps > 1 << 22 {
            return Err(Error::Internal("sail period not found".into()));
        }
        steps *= 2;
    }
}

pub fn lls_period(a: &IntMatrix) -> Result<PeriodWord> {
    Ok(lls_period_detail(a)?.word)
}

/// Compare the LLS period with the continued fraction period of `ω_A`,
/// first as read and then reversed.
pub fn lls_matches_cf(a: &IntMatrix) -> Result<Option<Orientation>> {
    let lls = lls_period(a)?;
    let cf = period_of(&cf_expand(&slope_of_expanding_eigenvector(a)?)?);
    Ok(if lls == cf {
        Some(Orientation::Direct)
    } else if lls.reversed() == cf {
        Some(Orientation::Reversed)
    } else {
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint2 {
        LatticePoint2::new(x, y)
    }

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn lengths_and_sines() {
        assert_eq!(integer_length(&pt(0, 0), &pt(2, 4)).unwrap(), 2.into());
        assert_eq!(integer_length(&pt(0, 0), &pt(1, 0)).unwrap(), 1.into());
        assert_eq!(integer_length(&pt(1, 1), &pt(4, 7)).unwrap(), 3.into());
        assert_eq!(integer_length(&pt(1, 1), &pt(1, 1)), Err(Error::DegenerateSegment));
        assert_eq!(integer_sine(&pt(1, 0), &pt(0, 0), &pt(0, 1)).unwrap(), 1.into());
        assert_eq!(integer_sine(&pt(2, 0), &pt(0, 0), &pt(0, 3)).unwrap(), 1.into());
        assert_eq!(integer_sine(&pt(1, 0), &pt(0, 0), &pt(1, 2)).unwrap(), 2.into());
        assert_eq!(integer_sine(&pt(1, 0), &pt(0, 0), &pt(2, 0)), Err(Error::DegenerateAngle));
    }

    #[test]
    fn cat_map_sail() {
        let chain = sail_vertices(&m(&[&[2, 1], &[1, 1]]), 4).unwrap();
        assert_eq!(chain.vertices, vec![pt(1, 0), pt(2, 1), pt(5, 3), pt(13, 8)]);
        assert!(chain.lls.iter().all(|x| x.is_one()));
        assert_eq!(chain.lls.len(), 5);
        let other = sail_vertices(&m(&[&[1, 1], &[1, 0]]), 4).unwrap();
        assert_eq!(other.vertices, chain.vertices);
        for v in &chain.vertices {
            assert!(chain.cone.contains(v));
        }
        // (1, 1) lies in the neighbouring cone
        assert!(!chain.cone.contains(&pt(1, 1)));
        let u = sail_vertices_at(&m(&[&[2, 1], &[1, 1]]), &pt(1, 1), 3).unwrap();
        assert!(u.vertices.contains(&pt(1, 1)));
    }

    #[test]
    fn generators() {
        assert_eq!(positive_generator(&m(&[&[1, 1], &[1, 0]])), m(&[&[2, 1], &[1, 1]]));
        assert_eq!(positive_generator(&m(&[&[-2, -1], &[-1, -1]])), m(&[&[2, 1], &[1, 1]]));
    }

    #[test]
    fn lls_periods_match_cf() {
        for rows in [[[2i64, 1], [1, 1]], [[1, 1], [1, 0]], [[3, 1], [2, 1]], [[5, 2], [2, 1]], [[-4, 1], [-7, 2]], [[0, 1], [1, 5]], [[7, 12], [4, 7]]] {
            let a = m(&[&rows[0], &rows[1]]);
            assert!(lls_matches_cf(&a).unwrap().is_some(), "{a}");
        }
    }
}
