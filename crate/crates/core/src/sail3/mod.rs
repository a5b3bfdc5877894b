//! Three-dimensional geometric continued fractions.
//!
//! Totally real operators get Klein sails in each of the eight orthants
//! cut out by the eigenplanes; operators with one real eigenvalue get the
//! Klein–Voronoi factor-sail, a planar chain in the `(x, r)` half-plane.
//! Both come with Dirichlet generators, fundamental domains and a
//! canonical [`Invariant3`].

mod cone;
pub mod decide;
pub mod dirichlet;
pub mod domain;
pub mod klein;
pub mod kv;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::sturm::count_real_roots;
use crate::error::{Error, Result};
use crate::arith::NumberField;
use crate::intmat::{eigen_data, is_hyperbolic, is_irreducible_over_q, lll_reduce, IntMatrix};

pub use cone::EigenCone3;
pub use decide::{decide_conjugacy3, decide_conjugacy3_with, search_witness, Reason3, Verdict3, VerdictKind};
pub use dirichlet::{dirichlet_generators, DirichletGens};
pub use domain::{invariant3, klein_fundamental_domain, FaceRecord, FundamentalDomain3, Invariant3, InvariantReport};
pub use klein::{klein_sail_patch, KleinFace, KleinSailPatch};
pub use kv::{kv_factor_sail, kv_fundamental_domain, kv_project, KVFactorSail, KvPoint};

/// Spectrum of a 3×3 operator: all real, or one real eigenvalue and a
/// complex pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumClass {
    Klein,
    KleinVoronoi,
}

/// An integer point of `Z³`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LatticePoint3 {
    #[serde(serialize_with = "crate::ser::int")]
    pub x: BigInt,
    #[serde(serialize_with = "crate::ser::int")]
    pub y: BigInt,
    #[serde(serialize_with = "crate::ser::int")]
    pub z: BigInt,
}

impl LatticePoint3 {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        LatticePoint3 { x: x.into(), y: y.into(), z: z.into() }
    }

    pub fn to_vec(&self) -> Vec<BigInt> {
        vec![self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub(crate) fn to_v3(&self) -> Option<V3> {
        Some([self.x.to_i64()?, self.y.to_i64()?, self.z.to_i64()?])
    }
}

impl From<V3> for LatticePoint3 {
    fn from(v: V3) -> Self {
        LatticePoint3::new(v[0], v[1], v[2])
    }
}

impl std::fmt::Display for LatticePoint3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Preconditions for the 3-dimensional machinery: 3×3, det +1,
/// irreducible characteristic polynomial, hyperbolic.
pub fn classify_spectrum(a: &IntMatrix) -> Result<SpectrumClass> {
    if a.nrows() != 3 || a.ncols() != 3 {
        return Err(Error::DimensionMismatch(format!("expected a 3x3 matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    let d = a.det();
    if !d.is_one() {
        return Err(Error::Domain(format!(
            "determinant is {d}; the 3-dimensional path accepts det = +1 only"
        )));
    }
    let f = a.charpoly();
    if !is_irreducible_over_q(&f)? {
        return Err(Error::Domain(format!("characteristic polynomial {f} is reducible over Q")));
    }
    if !is_hyperbolic(a)? {
        return Err(Error::Domain("matrix is not hyperbolic".into()));
    }
    match count_real_roots(&f.to_rat()) {
        3 => Ok(SpectrumClass::Klein),
        1 => Ok(SpectrumClass::KleinVoronoi),
        n => Err(Error::Internal(format!("cubic with {n} real roots"))),
    }
}

pub(crate) type V3 = [i64; 3];
pub(crate) type M3 = [[i64; 3]; 3];

pub(crate) fn small_matrix(a: &IntMatrix) -> Result<M3> {
    let mut m = [[0i64; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = a[(i, j)]
                .to_i64()
                .filter(|v| v.unsigned_abs() < 1 << 40)
                .ok_or_else(|| Error::Domain("matrix entries too large for lattice enumeration".into()))?;
        }
    }
    Ok(m)
}

pub(crate) fn apply(m: &M3, v: &V3) -> Option<V3> {
    let mut out = [0i64; 3];
    for i in 0..3 {
        let s: i128 = (0..3).map(|k| m[i][k] as i128 * v[k] as i128).sum();
        out[i] = i64::try_from(s).ok()?;
    }
    Some(out)
}

pub(crate) fn sub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: &V3, b: &V3) -> [i128; 3] {
    let (a, b) = (a.map(i128::from), b.map(i128::from));
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot(a: &V3, b: &V3) -> i128 {
    (0..3).map(|k| a[k] as i128 * b[k] as i128).sum()
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive integer vector along `v` (same direction), if it fits.
pub(crate) fn primitive(v: [i128; 3]) -> Option<V3> {
    let g = gcd(gcd(v[0], v[1]), v[2]);
    if g == 0 {
        return None;
    }
    Some([
        i64::try_from(v[0] / g).ok()?,
        i64::try_from(v[1] / g).ok()?,
        i64::try_from(v[2] / g).ok()?,
    ])
}

/// Integer length of the segment `ab`.
pub(crate) fn integer_length(a: &V3, b: &V3) -> u64 {
    let d = sub(b, a);
    gcd(gcd(d[0] as i128, d[1] as i128), d[2] as i128) as u64
}

/// Lattice-normalized twice-area of the triangle `abc`: the index of the
/// lattice spanned by its edges inside the lattice of its plane.
pub(crate) fn integer_area2(a: &V3, b: &V3, c: &V3) -> u64 {
    let n = cross(&sub(b, a), &sub(c, a));
    gcd(gcd(n[0], n[1]), n[2]) as u64
}

/// Integer sine of the angle at `b` in the triangle `abc`.
pub(crate) fn integer_sine(a: &V3, b: &V3, c: &V3) -> u64 {
    let s = integer_area2(a, b, c);
    let d = integer_length(b, a) * integer_length(b, c);
    if d == 0 {
        0
    } else {
        s / d
    }
}

pub(crate) fn max_norm(v: &V3) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// Rows of approximate unit eigen-functionals: the three left
/// eigenvectors (Klein), or `u(ρ)`, `Re u(c)`, `Im u(c)` (Klein–Voronoi).
pub(crate) fn eigen_frame(a: &IntMatrix) -> Result<[[f64; 3]; 3]> {
    match classify_spectrum(a)? {
        SpectrumClass::KleinVoronoi => Ok(kv::KvContext::new(a)?.frame),
        SpectrumClass::Klein => {
            let ed = eigen_data(a)?;
            let mut frame = [[0.0; 3]; 3];
            for (i, row) in frame.iter_mut().enumerate() {
                let field = NumberField::new(&ed.charpoly, &ed.real_roots[i]);
                for (k, x) in row.iter_mut().enumerate() {
                    *x = field.to_f64(&ed.left_eigenvectors[i][k].to_rat());
                }
                let n = row.iter().map(|x| x * x).sum::<f64>().sqrt();
                row.iter_mut().for_each(|x| *x /= n);
            }
            Ok(frame)
        }
    }
}

/// Unimodular `V` such that the eigen-functionals of `V⁻¹AV` are close to
/// orthonormal: LLL-reduce the columns of the scaled, rounded frame `M`
/// and set `V = M⁻¹R`. Falls back to the identity if rounding degenerates.
pub(crate) fn balancing_transform(a: &IntMatrix) -> Result<IntMatrix> {
    let frame = eigen_frame(a)?;
    let scale = (1u64 << 24) as f64;
    let m = IntMatrix::from_fn(3, 3, |i, j| BigInt::from((frame[i][j] * scale).round() as i64));
    let d = m.det();
    if d.is_zero() {
        return Ok(IntMatrix::identity(3));
    }
    let cols: Vec<Vec<BigInt>> = (0..3).map(|j| m.col(j)).collect();
    let reduced = lll_reduce(&cols);
    let r = IntMatrix::from_fn(3, 3, |i, j| reduced[j][i].clone());
    let num = &m.adjugate() * &r;
    if num.entries().iter().any(|x| !(x % &d).is_zero()) {
        return Ok(IntMatrix::identity(3));
    }
    let v = IntMatrix::from_fn(3, 3, |i, j| &num[(i, j)] / &d);
    if v.is_unimodular() {
        Ok(v)
    } else {
        Ok(IntMatrix::identity(3))
    }
}

/// Safety cap on enumeration radii for the automatic radius search.
pub const DEFAULT_MAX_RADIUS: u64 = 200;
