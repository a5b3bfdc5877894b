//! Exact integer matrix algebra: determinants, characteristic polynomials,
//! irreducibility, hyperbolicity, rational similarity, eigendata and the
//! intertwiner space `{X : AX = XB}`.

pub mod lattice;
pub mod matrix;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::poly::{rat_gcd, squarefree_part};
use crate::arith::sturm::sturm_count;
use crate::arith::{alg_sign, sturm_isolate, IntPoly, RatPoly, RootBox};
use crate::error::{Error, Result};

pub use lattice::{integer_kernel, lll_reduce, rational_null_space};
pub use matrix::{poly_at_matrix, IntMatrix, Matrix, RatMatrix};

pub fn det(m: &IntMatrix) -> BigInt {
    m.det()
}

pub fn charpoly(m: &IntMatrix) -> IntPoly {
    m.charpoly()
}

fn is_perfect_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let s = n.sqrt();
        &s * &s == *n
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// Irreducibility over Q for degrees 2 and 3.
pub fn is_irreducible_over_q(p: &IntPoly) -> Result<bool> {
    match p.degree() {
        Some(2) => {
            let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
            Ok(!is_perfect_square(&(&b * &b - BigInt::from(4) * a * c)))
        }
        Some(3) => {
            let a0 = p.coeff(0);
            if a0.is_zero() {
                return Ok(false);
            }
            let a3 = p.coeff(3);
            for num in divisors(&a0) {
                for den in divisors(&a3) {
                    for s in [1i32, -1] {
                        let x = BigRational::new(&num * BigInt::from(s), den.clone());
                        if p.eval_rat(&x).is_zero() {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
        d => Err(Error::UnsupportedDegree(d.unwrap_or(0))),
    }
}

/// True when some root of `f` lies on the unit circle.
///
/// Roots `z` with `|z| = 1` satisfy `f(1/z̄) = 0`, so they are roots of
/// `g = gcd(f, x^n f(1/x))`. Once `±1` are excluded `g` is palindromic of
/// even degree `2m`, and `g(x) / x^m = h(x + 1/x)`; unit-circle roots of
/// `g` correspond to roots of `h` in `(-2, 2)`.
pub fn has_unit_circle_root(f: &IntPoly) -> bool {
    let one = BigInt::one();
    if f.eval(&one).is_zero() || f.eval(&-one).is_zero() {
        return true;
    }
    let fr = f.to_rat();
    let g = rat_gcd(&fr, &fr.reversed());
    let Some(deg) = g.degree() else { return false };
    if deg == 0 {
        return false;
    }
    let g = g.to_int_primitive();
    debug_assert!(deg % 2 == 0 && g == g.reversed(), "reciprocal factor is not palindromic");
    let m = deg / 2;
    let t = IntPoly::x();
    let mut cheb = vec![IntPoly::constant(BigInt::from(2)), t.clone()];
    for j in 2..=m {
        let next = t.clone() * cheb[j - 1].clone() - cheb[j - 2].clone();
        cheb.push(next);
    }
    let mut h = IntPoly::constant(g.coeff(m));
    for j in 1..=m {
        h = h + cheb[j].scale(&g.coeff(m + j));
    }
    let two = BigRational::from_integer(2.into());
    // roots in (-2, 2]; h(2) = g(1) != 0
    sturm_count(&h.to_rat(), &-two.clone(), &two) > 0
}

/// No eigenvalue of modulus one. Requires `det M = ±1`.
pub fn is_hyperbolic(m: &IntMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    if !m.is_unimodular() {
        return Err(Error::Domain(format!("determinant {} is not ±1", m.det())));
    }
    Ok(!has_unit_circle_root(&m.charpoly()))
}

/// Invariant factors of `M` over `Q[x]` (monic, dividing each other),
/// from the determinantal divisors of `xI - M`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<RatPoly> {
    let n = m.nrows();
    let xi_m: Matrix<RatPoly> = Matrix::from_fn(n, n, |i, j| {
        let c = RatPoly::constant(-BigRational::from_integer(m[(i, j)].clone()));
        if i == j {
            c + RatPoly::x()
        } else {
            c
        }
    });
    let mut prev = RatPoly::one();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let subsets = k_subsets(n, k);
        let mut d = RatPoly::zero();
        'outer: for rows in &subsets {
            for cols in &subsets {
                let minor = xi_m.select(rows, cols).det_laplace();
                d = rat_gcd(&d, &minor);
                if d.degree() == Some(0) {
                    break 'outer;
                }
            }
        }
        let d = d.monic();
        out.push(d.div_rem(&prev).0);
        prev = d;
    }
    out
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Same rational canonical form.
pub fn similar_over_q(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.nrows() != b.nrows() || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if a.charpoly() != b.charpoly() {
        return Ok(false);
    }
    if a.charpoly().is_squarefree() {
        return Ok(true);
    }
    Ok(invariant_factors(a) == invariant_factors(b))
}

/// Real spectrum, complex-pair data and symbolic eigenvectors.
#[derive(Clone, Debug, Serialize)]
pub struct EigenData {
    #[serde(skip)]
    pub charpoly: IntPoly,
    pub real_roots: Vec<RootBox>,
    pub complex_pairs: usize,
    /// `|c|²` for each complex pair, as a boxed real root (n ≤ 3 only).
    pub complex_moduli_sq: Vec<RootBox>,
    /// Right eigenvector for each real root: entries are polynomials to be
    /// evaluated at that root.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<IntPoly>>,
    /// Left eigenvectors (rows `w` with `w M = λ w`), same convention.
    #[serde(skip)]
    pub left_eigenvectors: Vec<Vec<IntPoly>>,
    /// `adj(xI - M)`; its columns and rows specialise to right and left
    /// eigenvectors at any eigenvalue, including complex ones.
    #[serde(skip)]
    pub adjugate: Matrix<IntPoly>,
}

impl EigenData {
    pub fn k(&self) -> usize {
        self.real_roots.len()
    }

    pub fn l(&self) -> usize {
        self.complex_pairs
    }
}

pub fn eigen_data(m: &IntMatrix) -> Result<EigenData> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let n = m.nrows();
    let f = m.charpoly();
    if !f.is_squarefree() {
        return Err(Error::SquarefreeViolation);
    }
    let roots = sturm_isolate(&f)?;
    let adj = m.char_adjugate();
    let pick_nonzero = |vecs: Vec<Vec<IntPoly>>, root: &RootBox| -> Result<Vec<IntPoly>> {
        vecs.into_iter()
            .find(|v| v.iter().any(|p| alg_sign(&p.to_rat(), root) != Ordering::Equal))
            .ok_or_else(|| Error::Internal("adjugate vanishes at a simple eigenvalue".into()))
    };
    let mut right = Vec::new();
    let mut left = Vec::new();
    for r in &roots {
        right.push(pick_nonzero((0..n).map(|j| adj.col(j)).collect(), r)?);
        left.push(pick_nonzero((0..n).map(|i| adj.row(i).to_vec()).collect(), r)?);
    }
    let l = (n - roots.len()) / 2;
    let d = m.det();
    let mut moduli = Vec::new();
    if l == 1 && n == 2 {
        let dr = BigRational::from_integer(d.clone());
        moduli.push(RootBox { poly: IntPoly::new(vec![-d.clone(), BigInt::one()]), lo: dr.clone(), hi: dr });
    } else if l == 1 && n == 3 {
        // |c|² = det / ρ, a root of x³ f(det / x)
        let h = IntPoly::new((0..=3).map(|k| f.coeff(3 - k) * d.pow(3 - k as u32)).collect());
        // the only real root of h is det / ρ
        moduli.extend(sturm_isolate(&squarefree_part(&h))?.into_iter().take(1));
    }
    Ok(EigenData {
        charpoly: f,
        real_roots: roots,
        complex_pairs: l,
        complex_moduli_sq: moduli,
        eigenvectors: right,
        left_eigenvectors: left,
        adjugate: adj,
    })
}

/// Rational basis of the intertwiner space `{X : AX = XB}`.
#[derive(Clone, Debug)]
pub struct CommutingBasis {
    pub basis: Vec<RatMatrix>,
}

impl CommutingBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The `n² × n²` integer system whose kernel is `{X : AX = XB}`, with `X`
/// flattened row-major.
pub fn sylvester_system(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.nrows();
    let mut e = IntMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                e[(row, k * n + j)] += &a[(i, k)];
                e[(row, i * n + k)] -= &b[(k, j)];
            }
        }
    }
    e
}

fn unflatten<T: crate::arith::Ring>(n: usize, v: &[T]) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| v[i * n + j].clone())
}

pub fn solve_sylvester_rational(a: &IntMatrix, b: &IntMatrix) -> Result<CommutingBasis> {
    if a.nrows() != b.nrows() || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch("intertwiner of different sizes".into()));
    }
    let n = a.nrows();
    let ns = rational_null_space(&sylvester_system(a, b).to_rat());
    Ok(CommutingBasis { basis: ns.iter().map(|v| unflatten(n, v)).collect() })
}

/// LLL-reduced basis of the integer intertwiners `{X ∈ Z^{n×n} : AX = XB}`.
pub fn integer_intertwiners(a: &IntMatrix, b: &IntMatrix) -> Result<Vec<IntMatrix>> {
    if a.nrows() != b.nrows() || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch("intertwiner of different sizes".into()));
    }
    let n = a.nrows();
    let ker = integer_kernel(&sylvester_system(a, b));
    Ok(lll_reduce(&ker).iter().map(|v| unflatten(n, v)).collect())
}

/// Greatest common divisor of all entries.
pub fn content(m: &IntMatrix) -> BigInt {
    m.entries().iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Floating-point value of a polynomial vector at a boxed root, for logging
/// and fast filters.
pub fn eval_vec_approx(v: &[IntPoly], root: &RootBox) -> Vec<f64> {
    let x = root.approx();
    v.iter()
        .map(|p| p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x + num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)))
        .collect()
}
