//! Exact rational matrices.
//!
//! Square matrices over `Q`, used wherever an identity has to hold
//! bit-exactly: Hadamard powers, determinants, exact solves and
//! nullspaces. Determinants clear denominators row by row and then run
//! fraction-free Bareiss elimination over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

use super::HermMatrix;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.n).map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>()))
            .finish()
    }
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| Rational::zero())
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| Rational::one())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    /// `u v^T`.
    pub fn outer(u: &[Rational], v: &[Rational]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                got: v.len(),
            });
        }
        Ok(Self::from_fn(u.len(), |i, j| &u[i] * &v[j]))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Entrywise `k`-th power; `k = 0` gives the all-ones matrix.
    pub fn hadamard_power(&self, k: u64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| Pow::pow(x, k)).collect(),
        }
    }

    pub fn hadamard_product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
        })
    }

    /// `sum_k coeffs[k] * A^{o exps[k]}`.
    pub fn entrywise_poly(&self, coeffs: &[Rational], exps: &[u64]) -> Result<Self> {
        check_exponents(coeffs.len(), exps)?;
        let mut out = Self::zeros(self.n);
        for (c, &e) in coeffs.iter().zip(exps) {
            out = out.add(&self.hadamard_power(e).scale(c))?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `diag(d) * self`.
    pub fn left_diag_mul(&self, d: &[Rational]) -> Result<Self> {
        if d.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: d.len(),
            });
        }
        Ok(Self::from_fn(self.n, |i, j| &d[i] * self.get(i, j)))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn to_herm(&self) -> Result<HermMatrix> {
        HermMatrix::from_real_fn(self.n, |i, j| to_f64(self.get(i, j)))
    }

    /// Exact determinant via fraction-free elimination.
    pub fn determinant(&self) -> Rational {
        let n = self.n;
        // Clear denominators row by row.
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let lcm = self.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            a.push(self.row(i).iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        }
        Rational::new(bareiss_det(a), scale)
    }

    pub fn rank(&self) -> usize {
        rref(self.data.chunks(self.n).map(|r| r.to_vec()).collect()).1.len()
    }

    /// Some solution of `A x = b`, with free variables set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.n;
        let aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let (reduced, pivots) = rref(aug);
        if pivots.contains(&n) {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = reduced[r][n].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let (reduced, pivots) = rref(aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, |i, j| reduced[i][n + j].clone()))
    }

    /// Exact basis of the right nullspace (one vector per free column).
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let n = self.n;
        let (reduced, pivots) = rref(self.data.chunks(n).map(|r| r.to_vec()).collect());
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); n];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[r][f].clone();
                }
                v
            })
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }
}

pub(crate) fn check_exponents(n_coeffs: usize, exps: &[u64]) -> Result<()> {
    if n_coeffs != exps.len() {
        return Err(Error::DimensionMismatch {
            expected: n_coeffs,
            got: exps.len(),
        });
    }
    let mut seen = exps.to_vec();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateExponent(w[0]));
    }
    Ok(())
}

/// Bareiss elimination; every intermediate division is exact.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Reduced row echelon form; returns the matrix and its pivot columns.
fn rref(mut a: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r][c..cols].to_vec();
                for (x, p) in a[i][c..cols].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Exact determinant of a square matrix given by rows.
pub fn det(rows: Vec<Vec<Rational>>) -> Rational {
    if rows.is_empty() {
        return Rational::one();
    }
    RatMatrix::from_rows(rows)
        .map(|m| m.determinant())
        .expect("square matrix")
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn max_abs(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn cofactor_det(a: &RatMatrix) -> Rational {
        let n = a.dim();
        if n == 1 {
            return a.get(0, 0).clone();
        }
        (0..n).fold(Rational::zero(), |acc, j| {
            let minor = RatMatrix::from_fn(n - 1, |r, c| a.get(r + 1, if c < j { c } else { c + 1 }).clone());
            let term = a.get(0, j) * cofactor_det(&minor);
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = RatMatrix::from_fn(4, |i, j| ratio((i * 7 + j * 3) as i64 % 5 - 2, (j + 1) as i64));
        assert_eq!(a.determinant(), cofactor_det(&a));
        assert_eq!(m(&[&[2, 4], &[3, 7]]).determinant(), int(2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), int(0));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), int(-1));
    }

    #[test]
    fn nullspace_and_solve() {
        let ones = RatMatrix::ones(3);
        let ns = ones.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&ones.mul_vec(v)));
        }
        assert_eq!(ones.rank(), 1);
        let x = ones.solve(&[int(3), int(3), int(3)]).unwrap();
        assert_eq!(ones.mul_vec(&x), vec![int(3), int(3), int(3)]);
        assert!(ones.solve(&[int(1), int(2), int(3)]).is_none());
        assert!(ones.inverse().is_none());
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
    }

    #[test]
    fn hadamard_power_zero_is_ones() {
        let a = m(&[&[0, 2], &[2, 5]]);
        assert_eq!(a.hadamard_power(0), RatMatrix::ones(2));
        assert_eq!(a.hadamard_power(2), m(&[&[0, 4], &[4, 25]]));
    }

    #[test]
    fn duplicate_exponents_rejected() {
        let a = RatMatrix::ones(2);
        assert_eq!(
            a.entrywise_poly(&[int(1), int(1)], &[2, 2]),
            Err(Error::DuplicateExponent(2))
        );
    }
}
