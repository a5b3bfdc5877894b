//! Conjugacy of 2×2 hyperbolic matrices over GL₂(ℤ) and SL₂(ℤ), with
//! explicit witnesses, and a brute-force oracle usable in any dimension.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::cf::{cf_expand, period_of, slope_of_expanding_eigenvector, word_matrix, CFExpansion, PeriodWord};
use crate::error::{Error, Result};
use crate::intmat::{is_hyperbolic, is_irreducible_over_q, rational_null_space, similar_over_q, sylvester_system, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    GL2,
    SL2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason2 {
    CharpolyMismatch,
    PeriodMismatch,
    ParityObstruction,
    WitnessFound,
}

/// Which case of the period-parity analysis decided an SL₂ question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCase {
    /// Odd period: a determinant −1 element of the commutant exists and
    /// corrects the witness determinant.
    OddPeriod,
    /// Even period, witness already in SL₂.
    EvenPeriodDetPlus,
    /// Even period, every witness has determinant −1.
    EvenPeriodDetMinus,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict2 {
    pub conjugate: bool,
    pub group: Group,
    pub witness: Option<IntMatrix>,
    pub reason: Reason2,
    pub period_a: Option<PeriodWord>,
    pub period_b: Option<PeriodWord>,
    pub parity: Option<ParityCase>,
}

fn check_input(m: &IntMatrix, name: &str) -> Result<()> {
    if m.nrows() != 2 || m.ncols() != 2 {
        return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected 2x2", m.nrows(), m.ncols())));
    }
    if !m.is_unimodular() {
        return Err(Error::Domain(format!("{name} has determinant {}, not ±1", m.det())));
    }
    if !is_hyperbolic(m)? {
        return Err(Error::Domain(format!("{name} is not hyperbolic")));
    }
    if !is_irreducible_over_q(&m.charpoly())? {
        return Err(Error::Domain(format!("{name} has a reducible characteristic polynomial")));
    }
    Ok(())
}

/// `AC = CB` and `det C = ±1`, checked exactly.
pub fn verify_witness(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix) -> bool {
    a.nrows() == c.nrows() && c.is_unimodular() && a * c == c * b
}

struct SlopeData {
    expansion: CFExpansion,
    period: PeriodWord,
}

fn slope_data(m: &IntMatrix) -> Result<SlopeData> {
    let expansion = cf_expand(&slope_of_expanding_eigenvector(m)?)?;
    let period = period_of(&expansion);
    Ok(SlopeData { expansion, period })
}

/// The rotation `s` with `b = a[s..] ++ a[..s]`, if any.
fn rotation_offset(a: &[BigInt], b: &[BigInt]) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    (0..n).find(|&s| (0..n).all(|i| a[(s + i) % n] == b[i]))
}

/// A witness `C` with `AC = CB`, from matching periods.
///
/// With `P_A` the preperiod product and `τ_A` the purely periodic tail of
/// `ω_A`, `P_A·(τ_A, 1)ᵀ ∥ (ω_A, 1)ᵀ`. If the period of `B` is the period
/// of `A` rotated by `s`, then `τ_A = R(τ_B)` for `R` the product of the
/// first `s` period steps. `C = P_A R P_B⁻¹` sends the expanding
/// eigenline of `B` to that of `A`; equal characteristic polynomials then
/// force `C⁻¹AC = B`.
pub fn witness_from_periods(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let da = slope_data(a)?;
    let db = slope_data(b)?;
    let s = rotation_offset(&da.expansion.period, &db.expansion.period)
        .ok_or_else(|| Error::Domain("periods are not cyclically equal".into()))?;
    let pa = word_matrix(&da.expansion.preperiod);
    let pb = word_matrix(&db.expansion.preperiod);
    let r = word_matrix(&da.expansion.period[..s]);
    let c = &(&pa * &r) * &pb.unimodular_inverse()?;
    if !verify_witness(a, b, &c) {
        return Err(Error::Internal(format!("constructed witness {c} fails AC = CB")));
    }
    Ok(c)
}

/// The commutant element `P W P⁻¹` for `W` the product of one full
/// period; `det = (-1)^q`. Together with `-I` it generates the unit group
/// of the commutant.
pub fn period_unit(a: &IntMatrix) -> Result<IntMatrix> {
    let d = slope_data(a)?;
    let p = word_matrix(&d.expansion.preperiod);
    let w = word_matrix(&d.expansion.period);
    let u = &(&p * &w) * &p.unimodular_inverse()?;
    if &u * a != a * &u {
        return Err(Error::Internal("period unit does not commute".into()));
    }
    Ok(u)
}

pub fn decide_gl2(a: &IntMatrix, b: &IntMatrix) -> Result<Verdict2> {
    check_input(a, "A")?;
    check_input(b, "B")?;
    let mut v = Verdict2 {
        conjugate: false,
        group: Group::GL2,
        witness: None,
        reason: Reason2::CharpolyMismatch,
        period_a: None,
        period_b: None,
        parity: None,
    };
    if !similar_over_q(a, b)? {
        return Ok(v);
    }
    let pa = slope_data(a)?.period;
    let pb = slope_data(b)?.period;
    v.period_a = Some(pa.clone());
    v.period_b = Some(pb.clone());
    if pa != pb {
        v.reason = Reason2::PeriodMismatch;
        return Ok(v);
    }
    v.witness = Some(witness_from_periods(a, b)?);
    v.conjugate = true;
    v.reason = Reason2::WitnessFound;
    Ok(v)
}

pub fn decide_sl2(a: &IntMatrix, b: &IntMatrix) -> Result<Verdict2> {
    let mut v = decide_gl2(a, b)?;
    v.group = Group::SL2;
    let Some(c) = v.witness.take() else { return Ok(v) };
    let q = slope_data(a)?.expansion.q();
    if c.det().is_one() {
        v.parity = Some(if q % 2 == 1 { ParityCase::OddPeriod } else { ParityCase::EvenPeriodDetPlus });
        v.witness = Some(c);
        return Ok(v);
    }
    if q % 2 == 1 {
        let c1 = &period_unit(a)? * &c;
        if !(verify_witness(a, b, &c1) && c1.det().is_one()) {
            return Err(Error::Internal("odd-period correction failed".into()));
        }
        v.parity = Some(ParityCase::OddPeriod);
        v.witness = Some(c1);
        return Ok(v);
    }
    // Every witness is ±U^k·C with det U = +1, so all have det −1.
    v.conjugate = false;
    v.reason = Reason2::ParityObstruction;
    v.parity = Some(ParityCase::EvenPeriodDetMinus);
    Ok(v)
}

/// Outcome of the exhaustive oracle.
#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub witness: Option<IntMatrix>,
    /// Number of candidates in the box `[-bound, bound]^{n²}`.
    #[serde(serialize_with = "crate::ser::int")]
    pub box_size: BigInt,
    /// Integer points of the intertwiner space examined.
    pub examined: u64,
    pub hits: u64,
    pub intertwiner_dim: usize,
}

/// Exhaustive search for `C` with entries in `[-bound, bound]`,
/// `AC = CB` and `det C = ±1` (or `+1` when `det_plus_only`).
///
/// Candidates outside the rational intertwiner space cannot satisfy
/// `AC = CB`, so the scan runs over the free coordinates of that space and
/// solves for the pivot ones; this visits exactly the box points with
/// `AC = CB`. The result is the first hit in the fixed order: increasing
/// `max |c_ij|`, then increasing `Σ |c_ij|`, then row-major lexicographic
/// with entries ordered `0, 1, -1, 2, -2, …`.
pub fn brute_force_conjugator(a: &IntMatrix, b: &IntMatrix, bound: u64, det_plus_only: bool) -> Result<OracleResult> {
    let n = a.nrows();
    if !a.is_square() || !b.is_square() || b.nrows() != n {
        return Err(Error::DimensionMismatch("oracle inputs must be square of equal size".into()));
    }
    let nn = n * n;
    let box_size = BigInt::from(2 * bound + 1).pow(nn as u32);
    let basis = rational_null_space(&sylvester_system(a, b).to_rat());
    let dim = basis.len();
    let mut result = OracleResult { witness: None, box_size, examined: 0, hits: 0, intertwiner_dim: dim };
    if dim == 0 {
        return Ok(result);
    }
    // Each basis vector has a 1 at its free coordinate and 0 at the other
    // free coordinates, so a point of the space is fixed by its free
    // coordinates: x = Σ_f x_f · basis_f.
    let den = basis.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let to_i128 = |x: &BigInt| x.to_i128().ok_or_else(|| Error::Domain("oracle inputs too large".into()));
    // coef[f][i] = den · basis_f[i]
    let coef: Vec<Vec<i128>> = basis
        .iter()
        .map(|v| v.iter().map(|x| to_i128(&(x * BigRational::from_integer(den.clone())).to_integer())).collect())
        .collect::<Result<_>>()?;
    let den = to_i128(&den)?;
    let bnd = bound as i128;
    let mut best: Option<((i128, i128, Vec<i128>), Vec<i128>)> = None;
    let mut free_vals = vec![-bnd; dim];
    let mut x = vec![0i128; nn];
    'scan: loop {
        result.examined += 1;
        let mut ok = true;
        for i in 0..nn {
            let s: i128 = (0..dim).map(|f| coef[f][i] * free_vals[f]).sum();
            if s % den != 0 {
                ok = false;
                break;
            }
            x[i] = s / den;
            if x[i].abs() > bnd {
                ok = false;
                break;
            }
        }
        if ok {
            let d = det_i128(&x, n);
            if d == 1 || (d == -1 && !det_plus_only) {
                result.hits += 1;
                let key = scan_key(&x);
                if best.as_ref().map_or(true, |(k, _)| key < *k) {
                    best = Some((key, x.clone()));
                }
            }
        }
        // odometer over the free coordinates
        for f in 0..dim {
            if free_vals[f] < bnd {
                free_vals[f] += 1;
                continue 'scan;
            }
            free_vals[f] = -bnd;
        }
        break;
    }
    result.witness = best.map(|(_, x)| IntMatrix::from_fn(n, n, |i, j| BigInt::from(x[i * n + j])));
    Ok(result)
}

fn scan_key<T: Copy + Into<i128>>(x: &[T]) -> (i128, i128, Vec<i128>) {
    let shell = x.iter().map(|&v| v.into().abs()).max().unwrap_or(0);
    let l1 = x.iter().map(|&v| v.into().abs()).sum();
    (shell, l1, x.iter().map(|&v| 2 * v.into().abs() - i128::from(v.into() > 0)).collect())
}

fn det_i128(x: &[i128], n: usize) -> i128 {
    match n {
        1 => x[0],
        2 => x[0] * x[3] - x[1] * x[2],
        3 => {
            x[0] * (x[4] * x[8] - x[5] * x[7]) - x[1] * (x[3] * x[8] - x[5] * x[6]) + x[2] * (x[3] * x[7] - x[4] * x[6])
        }
        _ => {
            let m = IntMatrix::from_fn(n, n, |i, j| BigInt::from(x[i * n + j]));
            m.det().to_i128().unwrap_or(0)
        }
    }
}

/// Literal scan of every matrix in the box, in the same order; only for
/// small bounds (cross-checks the reduced oracle).
pub fn brute_force_conjugator_naive(a: &IntMatrix, b: &IntMatrix, bound: i64, det_plus_only: bool) -> Option<IntMatrix> {
    let n = a.nrows();
    let nn = n * n;
    let mut best: Option<((i128, i128, Vec<i128>), Vec<i64>)> = None;
    let mut x = vec![-bound; nn];
    loop {
        let c = IntMatrix::from_fn(n, n, |i, j| BigInt::from(x[i * n + j]));
        let d = c.det();
        if (d.is_one() || (!det_plus_only && (-&d).is_one())) && a * &c == &c * b {
            let key = scan_key(&x);
            if best.as_ref().map_or(true, |(k, _)| key < *k) {
                best = Some((key, x.clone()));
            }
        }
        let mut k = nn;
        loop {
            if k == 0 {
                return best.map(|(_, x)| IntMatrix::from_fn(n, n, |i, j| BigInt::from(x[i * n + j])));
            }
            k -= 1;
            if x[k] < bound {
                x[k] += 1;
                break;
            }
            x[k] = -bound;
        }
    }
}
