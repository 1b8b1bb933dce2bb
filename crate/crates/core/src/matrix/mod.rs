//! Dense Hermitian matrices and the spectral helpers built on them.
//!
//! Float work goes through nalgebra's Hermitian eigensolver. Cutoffs are
//! scaled by the matrix: eigenvalues above `N * 1e-12 * sigma_max` are
//! inverted by the pseudoinverse, eigenvalues at or below
//! `N * 1e-10 * sigma_max` span the kernel.

pub mod exact;
pub mod io;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use exact::RatMatrix;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PINV_CUTOFF: f64 = 1e-12;
pub const KERNEL_CUTOFF: f64 = 1e-10;
pub const DEFAULT_PSD_EPS: f64 = 1e-9;
/// Relative size of the second eigenvalue tolerated by [`HermMatrix::rank_one_factor`].
pub const RANK_ONE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix {
    data: CMatrix,
    radius: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub tolerance_used: f64,
}

/// Orthonormal basis of a subspace of `C^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub dim_ambient: usize,
    pub vectors: Vec<CVector>,
}

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

fn max_abs_of(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl HermMatrix {
    /// Validates Hermitian symmetry to `1e-12 * maxabs`.
    pub fn new(data: CMatrix) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::DimensionMismatch {
                expected: data.nrows(),
                got: data.ncols(),
            });
        }
        if data.nrows() == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let scale = max_abs_of(&data);
        let deviation = max_abs_of(&(&data - data.adjoint()));
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NonHermitianInput { deviation });
        }
        Ok(Self { data, radius: None })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(CMatrix::from_fn(n, n, f))
    }

    pub fn from_real_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::new(CMatrix::from_fn(n, n, |i, j| Complex64::new(f(i, j), 0.0)))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        Self::from_real_fn(n, |i, j| rows[i][j])
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: CMatrix::identity(n, n),
            radius: None,
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            data: CMatrix::from_element(n, n, Complex64::new(1.0, 0.0)),
            radius: None,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: CMatrix::zeros(n, n),
            radius: None,
        }
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        Self {
            data: CMatrix::from_fn(n, n, |i, j| Complex64::new(if i == j { d[i] } else { 0.0 }, 0.0)),
            radius: None,
        }
    }

    /// `u u^*`.
    pub fn outer(u: &CVector) -> Self {
        Self {
            data: u * u.adjoint(),
            radius: None,
        }
    }

    /// `X X^*` for any `N x k` factor.
    pub fn gram(x: &CMatrix) -> Self {
        let mut data = x * x.adjoint();
        // Kill round-off asymmetry.
        data = (&data + data.adjoint()).scale(0.5);
        Self { data, radius: None }
    }

    /// Attaches a domain radius, checking `|a_ij| <= rho + 1e-12`.
    pub fn with_radius(mut self, rho: f64) -> Result<Self> {
        if rho.is_nan() || rho < 0.0 {
            return Err(Error::InvalidArgument(format!("radius {rho} must be non-negative")));
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let modulus = self.data[(i, j)].norm();
                if modulus > rho + 1e-12 {
                    return Err(Error::RadiusExceeded {
                        row: i,
                        col: j,
                        modulus,
                        radius: rho,
                    });
                }
            }
        }
        self.radius = Some(rho);
        Ok(self)
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        max_abs_of(&self.data)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Largest entry modulus divided into every entry; zero stays zero.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs();
        if m == 0.0 {
            return self.clone();
        }
        Self {
            data: self.data.unscale(m),
            radius: None,
        }
    }

    /// Entrywise `k`-th power; `k = 0` gives the all-ones matrix.
    pub fn hadamard_power(&self, k: u64) -> Self {
        let data = if k == 0 {
            CMatrix::from_element(self.dim(), self.dim(), Complex64::new(1.0, 0.0))
        } else {
            self.data.map(|z| z.powu(k as u32))
        };
        Self { data, radius: None }
    }

    pub fn hadamard_product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            data: self.data.component_mul(&other.data),
            radius: None,
        })
    }

    /// `sum_k coeffs[k] * A^{o exps[k]}`.
    pub fn entrywise_poly(&self, coeffs: &[f64], exps: &[u64]) -> Result<Self> {
        exact::check_exponents(coeffs.len(), exps)?;
        let n = self.dim();
        let mut data = CMatrix::zeros(n, n);
        for (&c, &e) in coeffs.iter().zip(exps) {
            data += self.hadamard_power(e).data.scale(c);
        }
        Ok(Self { data, radius: None })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            data: &self.data + &other.data,
            radius: None,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            data: self.data.scale(c),
            radius: None,
        }
    }

    /// Principal submatrix on `idx`, in the given order.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        Self {
            data: CMatrix::from_fn(k, k, |i, j| self.data[(idx[i], idx[j])]),
            radius: None,
        }
    }

    /// `P A P^T` where row `i` of the result is row `perm[i]` of `A`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.principal(perm)
    }

    pub fn quadratic_form(&self, v: &CVector) -> f64 {
        (v.adjoint() * &self.data * v)[(0, 0)].re
    }

    pub fn spectrum(&self) -> Spectrum {
        let eig = self.data.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let n = self.dim();
        let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Spectrum { values, vectors }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum().values
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues().iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// PSD verdict with tolerance `eps * max(1, max |eigenvalue|)`.
    pub fn psd_check(&self, eps: f64) -> PsdVerdict {
        let values = self.eigenvalues();
        let min_eigenvalue = values.first().copied().unwrap_or(0.0);
        let top = values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let tolerance_used = eps * top.max(1.0);
        PsdVerdict {
            is_psd: min_eigenvalue >= -tolerance_used,
            min_eigenvalue,
            tolerance_used,
        }
    }

    pub fn is_psd(&self) -> bool {
        self.psd_check(DEFAULT_PSD_EPS).is_psd
    }

    fn require_psd(&self) -> Result<Spectrum> {
        let spec = self.spectrum();
        let top = spec.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let min = spec.values.first().copied().unwrap_or(0.0);
        if min < -DEFAULT_PSD_EPS * top.max(1.0) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(spec)
    }

    fn spectral_fn(&self, spec: &Spectrum, f: impl Fn(f64) -> f64) -> Self {
        let n = self.dim();
        let sigma_max = spec.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let cutoff = n as f64 * PINV_CUTOFF * sigma_max;
        let mut data = CMatrix::zeros(n, n);
        for (k, &lam) in spec.values.iter().enumerate() {
            if lam > cutoff && lam > 0.0 {
                let v = spec.vectors.column(k);
                data += (v * v.adjoint()).scale(f(lam));
            }
        }
        data = (&data + data.adjoint()).scale(0.5);
        Self { data, radius: None }
    }

    /// Moore-Penrose inverse of a PSD matrix.
    pub fn pseudo_inverse(&self) -> Result<Self> {
        let spec = self.require_psd()?;
        Ok(self.spectral_fn(&spec, |x| 1.0 / x))
    }

    /// `A^{+/2}`, the square root of the pseudoinverse.
    pub fn pinv_sqrt(&self) -> Result<Self> {
        let spec = self.require_psd()?;
        Ok(self.spectral_fn(&spec, |x| 1.0 / x.sqrt()))
    }

    /// Kernel of a Hermitian matrix under the `N * 1e-10 * sigma_max` cutoff.
    pub fn kernel_basis(&self) -> KernelBasis {
        let spec = self.spectrum();
        let n = self.dim();
        let sigma_max = spec.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let cutoff = n as f64 * KERNEL_CUTOFF * sigma_max;
        let vectors = spec
            .values
            .iter()
            .enumerate()
            .filter(|(_, &lam)| lam.abs() <= cutoff)
            .map(|(k, _)| spec.vectors.column(k).into_owned())
            .collect();
        KernelBasis {
            dim_ambient: n,
            vectors,
        }
    }

    pub fn rank(&self) -> usize {
        self.dim() - self.kernel_basis().dim()
    }

    /// Factor `A = u u^*` with the first nonzero coordinate of `u` real and
    /// non-negative. The zero matrix gives the zero vector.
    pub fn rank_one_factor(&self) -> Result<CVector> {
        let n = self.dim();
        let spec = self.require_psd()?;
        let top = spec.values[n - 1];
        if top <= 0.0 || self.max_abs() == 0.0 {
            return Ok(CVector::zeros(n));
        }
        if n > 1 && spec.values[n - 2] > RANK_ONE_TOL * top {
            return Err(Error::RankExceedsOne {
                second: spec.values[n - 2],
            });
        }
        // Read the factor off the heaviest column; this is exact when A is.
        let f = (0..n)
            .max_by(|&a, &b| self.data[(a, a)].re.total_cmp(&self.data[(b, b)].re))
            .expect("non-empty");
        let scale = self.data[(f, f)].re.sqrt();
        let mut u: CVector = self.data.column(f).map(|z| z / scale);
        let floor = 1e-12 * scale;
        if let Some(lead) = u.iter().find(|z| z.norm() > floor).copied() {
            let phase = lead.conj() / lead.norm();
            u *= phase;
        }
        Ok(u)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

impl KernelBasis {
    pub fn empty(n: usize) -> Self {
        Self {
            dim_ambient: n,
            vectors: Vec::new(),
        }
    }

    /// Orthonormal basis of the span of `vectors`, dropping directions
    /// with singular value below `tol * sigma_max`.
    pub fn from_span(n: usize, vectors: &[CVector], tol: f64) -> Self {
        if vectors.is_empty() {
            return Self::empty(n);
        }
        let m = CMatrix::from_columns(vectors);
        let svd = m.svd(true, false);
        let u = svd.u.expect("requested");
        let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let vectors = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| sigma_max > 0.0 && s > tol * sigma_max)
            .map(|(k, _)| u.column(k).into_owned())
            .collect();
        Self {
            dim_ambient: n,
            vectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// The `N x k` matrix with the basis as columns.
    pub fn as_matrix(&self) -> CMatrix {
        if self.vectors.is_empty() {
            CMatrix::zeros(self.dim_ambient, 0)
        } else {
            CMatrix::from_columns(&self.vectors)
        }
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        let u = self.as_matrix();
        &u * u.adjoint()
    }

    /// `|| V - U U^* V ||_2`: sine of the largest principal angle from this
    /// subspace into `other`.
    pub fn sin_angle_into(&self, other: &Self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let v = self.as_matrix();
        let residual = &v - other.projector() * &v;
        spectral_norm(&residual)
    }

    /// Same dimension and both principal-angle sines within `tol`.
    pub fn same_subspace(&self, other: &Self, tol: f64) -> bool {
        self.dim_ambient == other.dim_ambient
            && self.dim() == other.dim()
            && self.sin_angle_into(other) <= tol
            && other.sin_angle_into(self) <= tol
    }

    /// Largest deviation from orthonormality of the basis.
    pub fn orthonormality_defect(&self) -> f64 {
        let u = self.as_matrix();
        let g = u.adjoint() * &u - CMatrix::identity(self.dim(), self.dim());
        max_abs_of(&g)
    }
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> HermMatrix {
        HermMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]]).unwrap()
    }

    #[test]
    fn hadamard_powers() {
        let a = sample();
        assert_eq!(a.hadamard_power(0), HermMatrix::ones(2));
        let sq = a.hadamard_power(2);
        assert_eq!(sq.get(0, 1), c(-1.0, 0.0));
        assert_eq!(sq.get(1, 0), c(-1.0, 0.0));
        let s = HermMatrix::from_real_rows(&[vec![2.0]]).unwrap();
        assert_eq!(s.hadamard_power(3).get(0, 0), c(8.0, 0.0));
    }

    #[test]
    fn entrywise_polynomial() {
        let a = HermMatrix::ones(3);
        let f = a.entrywise_poly(&[1.0, 1.0, 1.0, -1.0 / 19.0], &[0, 1, 2, 3]).unwrap();
        assert!((f.get(1, 2).re - 56.0 / 19.0).abs() < 1e-15);
        assert!(matches!(
            a.entrywise_poly(&[1.0, 2.0], &[1, 1]),
            Err(Error::DuplicateExponent(1))
        ));
    }

    #[test]
    fn psd_verdicts() {
        let v = HermMatrix::ones(3).psd_check(DEFAULT_PSD_EPS);
        assert!(v.is_psd && v.min_eigenvalue.abs() < 1e-14);
        assert!(!HermMatrix::diag(&[1.0, -1.0]).is_psd());
        let eig = sample().eigenvalues();
        assert!(eig[0].abs() < 1e-14 && (eig[1] - 2.0).abs() < 1e-14);
        let bad = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(HermMatrix::new(bad), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn pseudo_inverses() {
        let i3 = HermMatrix::identity(3);
        assert_eq!(i3.pseudo_inverse().unwrap(), i3);
        assert_eq!(HermMatrix::zeros(2).pseudo_inverse().unwrap(), HermMatrix::zeros(2));
        let u = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let a = HermMatrix::outer(&u).scale(5.0);
        let p = a.pseudo_inverse().unwrap();
        let expect = HermMatrix::outer(&u).scale(0.2);
        assert!(max_abs_of(&(p.as_matrix() - expect.as_matrix())) < 1e-12);
        assert!(matches!(
            HermMatrix::diag(&[1.0, -1.0]).pseudo_inverse(),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn kernels() {
        assert!(HermMatrix::identity(3).kernel_basis().is_empty());
        let k = HermMatrix::ones(2).kernel_basis();
        assert_eq!(k.dim(), 1);
        let v = &k.vectors[0];
        assert!((v[0] + v[1]).norm() < 1e-12 && (v[0].norm() - 0.5f64.sqrt()).abs() < 1e-12);
        let k3 = HermMatrix::ones(3).kernel_basis();
        assert_eq!(k3.dim(), 2);
        for v in &k3.vectors {
            assert!((v[0] + v[1] + v[2]).norm() < 1e-12);
        }
        assert!(k3.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn rank_one_factors() {
        let f = HermMatrix::from_real_rows(&[vec![4.0]])
            .unwrap()
            .rank_one_factor()
            .unwrap();
        assert_eq!(f[0], c(2.0, 0.0));
        let f = HermMatrix::from_real_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]])
            .unwrap()
            .rank_one_factor()
            .unwrap();
        assert_eq!(f.as_slice(), &[c(1.0, 0.0), c(-1.0, 0.0)]);
        let f = sample().rank_one_factor().unwrap();
        assert_eq!(f.as_slice(), &[c(1.0, 0.0), c(0.0, -1.0)]);
        assert_eq!(HermMatrix::zeros(2).rank_one_factor().unwrap(), CVector::zeros(2));
        assert!(matches!(
            HermMatrix::identity(2).rank_one_factor(),
            Err(Error::RankExceedsOne { .. })
        ));
    }

    #[test]
    fn radius_is_checked() {
        assert!(HermMatrix::ones(2).with_radius(1.0).is_ok());
        assert!(matches!(
            HermMatrix::ones(2).scale(2.0).with_radius(1.0),
            Err(Error::RadiusExceeded { row: 0, col: 0, .. })
        ));
    }
}
