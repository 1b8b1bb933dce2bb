//! Schur polynomials and friends over exact rationals.
//!
//! `s_lam(x)` is evaluated by the bialternant ratio when the points are
//! pairwise distinct and by the dual Jacobi-Trudi determinant otherwise.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::exact::det;
use crate::rational::{binomial, Rational};

/// Weakly decreasing tuple of non-negative integers.
///
/// Stored with whatever zero padding it was built with; two partitions
/// compare equal when they agree after stripping trailing zeros.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if let Some(w) = parts.windows(2).find(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts must be weakly decreasing, found {} before {}",
                w[0], w[1]
            )));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Parts including any stored zero padding.
    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    fn stripped(&self) -> &[u64] {
        let len = self.length();
        &self.parts[..len]
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Parts padded (or trimmed of zeros) to exactly `n` entries.
    pub fn padded(&self, n: usize) -> Result<Vec<u64>> {
        if self.length() > n {
            return Err(Error::InvalidPartition(format!(
                "{self} has more than {n} nonzero parts"
            )));
        }
        let mut out = self.stripped().to_vec();
        out.resize(n, 0);
        Ok(out)
    }

    /// Conjugate partition (transpose of the Young diagram).
    pub fn conjugate(&self) -> Self {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|k| self.parts.iter().filter(|&&p| p >= k).count() as u64)
            .collect();
        Self { parts }
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.stripped() == other.stripped()
    }
}

impl Eq for Partition {}

impl Hash for Partition {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.stripped().hash(state);
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u64>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// The hook `(M-N+1, 1^{N-j-1}, 0^j)`, stored with `N` parts.
pub fn hook_partition(m: u64, n: usize, j: usize) -> Result<Partition> {
    if n == 0 || (m as u128) < n as u128 || j >= n {
        return Err(Error::InvalidHook { m, n, j });
    }
    let mut parts = vec![m - n as u64 + 1];
    parts.extend(std::iter::repeat_n(1, n - j - 1));
    parts.extend(std::iter::repeat_n(0, j));
    Partition::new(parts)
}

/// All of `e_0(x), ..., e_n(x)`.
pub fn elementary_all(x: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); x.len() + 1];
    e[0] = Rational::one();
    for (k, xi) in x.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            let add = &e[j - 1] * xi;
            e[j] += add;
        }
    }
    e
}

pub fn elementary_symmetric(j: usize, x: &[Rational]) -> Result<Rational> {
    if j > x.len() {
        return Err(Error::IndexOutOfRange { index: j, len: x.len() });
    }
    Ok(elementary_all(x).swap_remove(j))
}

/// `prod_{i<j} (x_i - x_j)`, which equals `det(x_i^{N-j})`.
pub fn vandermonde_det(x: &[Rational]) -> Rational {
    let mut out = Rational::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            out *= &x[i] - &x[j];
        }
    }
    out
}

fn pairwise_distinct(x: &[Rational]) -> bool {
    (0..x.len()).all(|i| (i + 1..x.len()).all(|j| x[i] != x[j]))
}

/// Bialternant `det(x_i^{lam_j+N-j}) / det(x_i^{N-j})`; `None` when two
/// points coincide.
pub fn schur_bialternant(lam: &Partition, x: &[Rational]) -> Option<Rational> {
    let n = x.len();
    let Ok(parts) = lam.padded(n) else {
        return Some(Rational::zero());
    };
    if !pairwise_distinct(x) {
        return None;
    }
    let rows = x
        .iter()
        .map(|xi| (0..n).map(|j| Pow::pow(xi, parts[j] + (n - 1 - j) as u64)).collect())
        .collect();
    Some(det(rows) / vandermonde_det(x))
}

/// Dual Jacobi-Trudi `det(e_{lam'_i - i + j})`, valid at repeated points.
pub fn schur_jacobi_trudi(lam: &Partition, x: &[Rational]) -> Rational {
    if lam.length() > x.len() {
        return Rational::zero();
    }
    let e = elementary_all(x);
    let conj = lam.conjugate();
    let ell = conj.parts().len();
    let rows = (0..ell)
        .map(|i| {
            (0..ell)
                .map(|j| {
                    let k = conj.parts()[i] as i64 - i as i64 + j as i64;
                    if k < 0 || k as usize >= e.len() {
                        Rational::zero()
                    } else {
                        e[k as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    det(rows)
}

pub fn schur_eval(lam: &Partition, x: &[Rational]) -> Rational {
    schur_bialternant(lam, x).unwrap_or_else(|| schur_jacobi_trudi(lam, x))
}

/// Float evaluation for complex points, via dual Jacobi-Trudi.
pub fn schur_eval_complex(lam: &Partition, x: &[Complex64]) -> Complex64 {
    if lam.length() > x.len() {
        return Complex64::zero();
    }
    let mut e = vec![Complex64::zero(); x.len() + 1];
    e[0] = Complex64::one();
    for (k, xi) in x.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            let add = e[j - 1] * xi;
            e[j] += add;
        }
    }
    let conj = lam.conjugate();
    let ell = conj.parts().len();
    let m = nalgebra::DMatrix::from_fn(ell, ell, |i, j| {
        let k = conj.parts()[i] as i64 - i as i64 + j as i64;
        if k < 0 || k as usize >= e.len() {
            Complex64::zero()
        } else {
            e[k as usize]
        }
    });
    if ell == 0 {
        Complex64::one()
    } else {
        m.determinant()
    }
}

/// `s_lam(1, ..., 1)` in `n` variables, by the product formula.
pub fn schur_ones(lam: &Partition, n: usize) -> BigInt {
    let Ok(parts) = lam.padded(n) else {
        return BigInt::zero();
    };
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(parts[i] as i64 - parts[j] as i64 + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    num / den
}

/// `binom(M, j) * binom(M-j-1, N-j-1)`, the closed form of the hook
/// specialization.
pub fn hook_ones_closed_form(m: u64, n: usize, j: usize) -> BigInt {
    binomial(m as i64, j as u64) * binomial(m as i64 - j as i64 - 1, (n - j - 1) as u64)
}
