//! Null spaces over Q and Z, and LLL reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix};

/// Basis of `{v : M v = 0}` over the rationals, from the reduced row
/// echelon form. One vector per free column, with a 1 in that column.
pub fn rational_null_space(m: &RatMatrix) -> Vec<Vec<BigRational>> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[i][j] - &f * &a[r][j];
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// A basis of the integer lattice `{v ∈ Z^N : M v = 0}` by unimodular
/// column reduction of `M`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, n) = (m.nrows(), m.ncols());
    let mut e = m.to_rows();
    let mut u: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_rows();
    // column operations act on e (rows x n) and u (n x n) alike
    let col_op = |mat: &mut Vec<Vec<BigInt>>, a: usize, b: usize, s: &BigInt, t: &BigInt, p: &BigInt, q: &BigInt| {
        for row in mat.iter_mut() {
            let (x, y) = (row[a].clone(), row[b].clone());
            row[a] = s * &x + t * &y;
            row[b] = p * &x + q * &y;
        }
    };
    let mut c = 0;
    for r in 0..rows {
        if c == n {
            break;
        }
        for j in c + 1..n {
            if e[r][j].is_zero() {
                continue;
            }
            let x = e[r][c].clone();
            let y = e[r][j].clone();
            let g = x.extended_gcd(&y);
            let (s, t) = (g.x, g.y);
            let gg = &s * &x + &t * &y;
            let p = -(&y / &gg);
            let q = &x / &gg;
            col_op(&mut e, c, j, &s, &t, &p, &q);
            col_op(&mut u, c, j, &s, &t, &p, &q);
        }
        if !e[r][c].is_zero() {
            c += 1;
        }
    }
    (c..n).map(|j| u.iter().map(|row| row[j].clone()).collect()).collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

fn to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        let bi = to_rat(&b[i]);
        let mut v = bi.clone();
        for j in 0..i {
            if norms[j].is_zero() {
                continue;
            }
            mu[i][j] = dot(&bi, &bstar[j]) / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&bstar[j]) {
                *vk = &*vk - &mu[i][j] * sk;
            }
        }
        norms.push(dot(&v, &v));
        bstar.push(v);
    }
    (bstar, mu, norms)
}

fn round(x: &BigRational) -> BigInt {
    (x + BigRational::new(1.into(), 2.into())).floor().to_integer()
}

/// LLL-reduce linearly independent integer vectors (δ = 3/4, exact
/// rational Gram–Schmidt).
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut b = basis.to_vec();
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = BigRational::new(3.into(), 4.into());
    let (_, mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let bj = b[j].clone();
            for (x, y) in b[k].iter_mut().zip(&bj) {
                *x = &*x - &q * y;
            }
            let qr = BigRational::from_integer(q);
            for i in 0..j {
                mu[k][i] = &mu[k][i] - &qr * &mu[j][i];
            }
            mu[k][j] = &mu[k][j] - &qr;
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let gs = gram_schmidt(&b);
            mu = gs.1;
            norms = gs.2;
            k = (k - 1).max(1);
        }
    }
    b
}

/// Scale a rational vector to a primitive integer vector.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g).collect()
}

pub fn norm_sq(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

pub fn max_abs(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // 2x + 4y + 6z = 0 : kernel lattice has index 1 in its span
        let m = IntMatrix::from_i64(&[&[2, 4, 6]]).unwrap();
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        // the primitive kernel vector (1, 1, -1) is an integer combination
        // of the basis: solve via the 2x2 minors being coprime
        let (a, b) = (&k[0], &k[1]);
        let minors = [
            &a[0] * &b[1] - &a[1] * &b[0],
            &a[0] * &b[2] - &a[2] * &b[0],
            &a[1] * &b[2] - &a[2] * &b[1],
        ];
        let g = minors.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert!(g.is_one());
    }

    #[test]
    fn rational_null_space_dimension() {
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]).unwrap().to_rat();
        let ns = rational_null_space(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn lll_shortens() {
        let b = vec![ints(&[1, 0, 0, 1345]), ints(&[0, 1, 0, 35]), ints(&[0, 0, 1, 154])];
        let r = lll_reduce(&b);
        let before = b.iter().map(|v| norm_sq(v)).min().unwrap();
        let after = r.iter().map(|v| norm_sq(v)).min().unwrap();
        assert!(after < before);
        // same lattice: determinants of Gram matrices agree
        let gram = |x: &[Vec<BigInt>]| {
            IntMatrix::from_fn(3, 3, |i, j| x[i].iter().zip(&x[j]).map(|(a, b)| a * b).sum())
        };
        assert_eq!(gram(&b).det(), gram(&r).det());
    }
}
