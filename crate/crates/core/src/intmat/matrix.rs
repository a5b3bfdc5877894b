//! Dense matrices over an exact scalar ring.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::arith::{ExactDiv, IntPoly, Poly, Ring};
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, T::one())
    }

    pub fn scalar(n: usize, c: T) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c.clone() } else { T::zero() })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn pow(&self, mut k: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Determinant by cofactor expansion; division-free, so it works over
    /// any commutative ring (used for polynomial matrices).
    pub fn det_laplace(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        match n {
            0 => T::one(),
            1 => self.data[0].clone(),
            2 => self[(0, 0)].clone() * self[(1, 1)].clone() - self[(0, 1)].clone() * self[(1, 0)].clone(),
            _ => {
                let mut acc = T::zero();
                for j in 0..n {
                    if self[(0, j)].is_zero() {
                        continue;
                    }
                    let minor = self.minor(&[0], &[j]);
                    let term = self[(0, j)].clone() * minor.det_laplace();
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    /// Submatrix with the given rows and columns removed.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|i| !drop_rows.contains(i)).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|j| !drop_cols.contains(j)).collect();
        self.select(&rows, &cols)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl<T: ExactDiv> Matrix<T> {
    /// Fraction-free (Bareiss) determinant. Every division is exact.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone())
                        / prev.clone();
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T: ExactDiv + FromPrimitive> Matrix<T> {
    /// Monic characteristic polynomial `det(xI - M)` (Faddeev–LeVerrier;
    /// the division by `k` at step `k` is exact over the integers).
    pub fn charpoly(&self) -> Poly<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![T::zero(); n + 1];
        c[n] = T::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            m = &(self * &m) + &Self::scalar(n, c[n - k + 1].clone());
            let t = (self * &m).trace();
            c[n - k] = -(t / T::from_usize(k).unwrap());
        }
        Poly::new(c)
    }

    /// Adjugate via Cayley–Hamilton.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        let p = self.charpoly();
        // adj(M) = (-1)^(n-1) (M^(n-1) + c_{n-1} M^(n-2) + ... + c_1 I)
        let mut acc = Self::zeros(n, n);
        for k in (1..=n).rev() {
            acc = &(self * &acc) + &Self::scalar(n, p.coeff(k));
        }
        if n % 2 == 0 {
            -acc
        } else {
            acc
        }
    }

    /// `adj(xI - M)` as a matrix of polynomials.
    pub fn char_adjugate(&self) -> Matrix<Poly<T>> {
        let n = self.rows;
        let p = self.charpoly();
        // adj(xI - M) = Σ B_j x^j, B_{n-1} = I, B_{j-1} = M B_j + c_j I
        let mut b = vec![Self::zeros(n, n); n];
        b[n - 1] = Self::identity(n);
        for j in (1..n).rev() {
            b[j - 1] = &(self * &b[j]) + &Self::scalar(n, p.coeff(j));
        }
        Matrix::from_fn(n, n, |i, k| Poly::new(b.iter().map(|bj| bj[(i, k)].clone()).collect()))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T: Ring> Mul<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * rhs[(k, j)].clone())
        })
    }
}

impl<'a, T: Ring> Add<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + rhs[(i, j)].clone())
    }
}

impl<'a, T: Ring> Sub<&'a Matrix<T>> for &'a Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - rhs[(i, j)].clone())
    }
}

impl<T: Ring> Neg for Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_list().entries(rows).finish()
    }
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl Matrix<BigInt> {
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn to_rat(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && {
            let d = self.det();
            d.is_one() || (-d).is_one()
        }
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.is_one() {
            Ok(self.adjugate())
        } else if (-&d).is_one() {
            Ok(-self.adjugate())
        } else {
            Err(Error::Domain(format!("matrix has determinant {d}, not ±1")))
        }
    }

    pub fn max_abs(&self) -> BigInt {
        use num_traits::Signed;
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }
}

impl Serialize for Matrix<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::ser::int_rows(&self.to_rows(), s)
    }
}

/// Evaluate an integer polynomial at a square integer matrix.
pub fn poly_at_matrix(p: &IntPoly, m: &IntMatrix) -> IntMatrix {
    let n = m.nrows();
    p.coeffs()
        .iter()
        .rev()
        .fold(IntMatrix::zeros(n, n), |acc, c| &(&acc * m) + &IntMatrix::scalar(n, c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).det(), 1.into());
        assert_eq!(m(&[&[1, 1], &[1, 0]]).det(), (-1).into());
        assert_eq!(IntMatrix::identity(3).det(), 1.into());
        assert_eq!(m(&[&[0, 1, 2], &[3, 0, 5], &[6, 7, 0]]).det(), m(&[&[0, 1, 2], &[3, 0, 5], &[6, 7, 0]]).det_laplace());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), 0.into());
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).charpoly(), IntPoly::from_i64s(&[1, -3, 1]));
        assert_eq!(
            m(&[&[0, 0, 1], &[1, 0, 3], &[0, 1, 0]]).charpoly(),
            IntPoly::from_i64s(&[-1, -3, 0, 1])
        );
        assert_eq!(IntMatrix::identity(2).charpoly(), IntPoly::from_i64s(&[1, -2, 1]));
    }

    #[test]
    fn adjugate_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 1, 4], &[0, 3, 1]]);
        let adj = a.adjugate();
        assert_eq!(&a * &adj, IntMatrix::scalar(3, a.det()));
        let u = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(&u * &u.unimodular_inverse().unwrap(), IntMatrix::identity(2));
        let pa = a.char_adjugate();
        // at x = 5: adj(5I - A)
        let five = BigInt::from(5);
        let direct = (&IntMatrix::scalar(3, five.clone()) - &a).adjugate();
        assert_eq!(pa.map(|p| p.eval(&five)), direct);
    }

    #[test]
    fn cayley_hamilton() {
        let a = m(&[&[3, -2, 7], &[1, 0, 4], &[-5, 2, 2]]);
        assert!(poly_at_matrix(&a.charpoly(), &a).is_zero());
    }

    #[test]
    fn serialize_as_nested_arrays() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[2,1],[1,1]]");
        assert_eq!(a.to_string(), "[[2,1],[1,1]]");
    }
}
