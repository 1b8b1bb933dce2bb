//! Extreme critical values of matrix pencils.
//!
//! For PSD `C`, `D` with `ker C` inside `ker D`, the smallest `h` with
//! `D <= h C` is the spectral radius of `C^{+/2} D C^{+/2}`. Applied to
//! `C = h_c[A] = sum_{j<N} c_j A^{oj}` and `D = A^{oM}` this gives the
//! critical value of a single matrix `A`.

use nalgebra::DVector;
use num_complex::Complex64;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::exact::{dot, RatMatrix};
use crate::matrix::{CMatrix, CVector, HermMatrix};
use crate::rational::{int, to_f64, Rational};
use crate::threshold::CoeffVector;

/// Relative residual above which `ker C` is declared not to sit inside `ker D`.
pub const KERNEL_INCLUSION_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct PencilResult {
    pub value: f64,
    /// Unit vector attaining the value, in `(ker C)^perp`.
    pub optimizer: Option<CVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionReport {
    pub holds: bool,
    pub kernel_dim: usize,
    /// Largest `||g v|| / ||g||_2` over the kernel basis of `h`.
    pub residual: f64,
}

/// Largest `||D v|| / ||D||_2` over an orthonormal basis of `ker C`.
fn kernel_residual(c: &HermMatrix, d: &HermMatrix) -> (usize, f64) {
    let ker = c.kernel_basis();
    let scale = d.spectral_radius();
    if scale == 0.0 {
        return (ker.dim(), 0.0);
    }
    let r = ker
        .vectors
        .iter()
        .map(|v| (d.as_matrix() * v).norm() / scale)
        .fold(0.0, f64::max);
    (ker.dim(), r)
}

/// `h^{-1} = rho(C^{+/2} D C^{+/2})` and its maximizer.
pub fn extreme_ratio(c: &HermMatrix, d: &HermMatrix) -> Result<PencilResult> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: d.dim(),
        });
    }
    require_psd(d)?;
    let (_, residual) = kernel_residual(c, d);
    if residual > KERNEL_INCLUSION_TOL {
        return Err(Error::KernelNotContained { residual });
    }
    ratio_unchecked(c, d)
}

fn require_psd(m: &HermMatrix) -> Result<()> {
    let v = m.psd_check(crate::matrix::DEFAULT_PSD_EPS);
    if !v.is_psd {
        return Err(Error::NotPsd {
            min_eigenvalue: v.min_eigenvalue,
        });
    }
    Ok(())
}

fn ratio_unchecked(c: &HermMatrix, d: &HermMatrix) -> Result<PencilResult> {
    let s = c.pinv_sqrt()?;
    let m = HermMatrix::new(hermitize(s.as_matrix() * d.as_matrix() * s.as_matrix()))?;
    let spec = m.spectrum();
    let n = c.dim();
    let value = spec.values[n - 1].max(0.0);
    if value == 0.0 {
        return Ok(PencilResult { value, optimizer: None });
    }
    // The Rayleigh maximizer for (D, C) is C^{+/2} w, not w itself.
    let x = s.as_matrix() * spec.vectors.column(n - 1);
    let norm = x.norm();
    let optimizer = (norm > 0.0).then(|| x / Complex64::new(norm, 0.0));
    Ok(PencilResult { value, optimizer })
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()).scale(0.5)
}

/// `v^* D v / v^* C v`.
pub fn rayleigh(c: &HermMatrix, d: &HermMatrix, v: &CVector) -> f64 {
    d.quadratic_form(v) / c.quadratic_form(v)
}

/// `h(A, B) = B o sum_{j<m} A^{oj}` and `g(A, B) = B o A^{oM}`: checks
/// `ker h` inside `ker g` numerically.
pub fn kernel_inclusion(a: &HermMatrix, b: &HermMatrix, m: usize, big_m: u64) -> Result<InclusionReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    if m < a.dim() {
        return Err(Error::InvalidArgument(format!("need m >= N, got m={m}, N={}", a.dim())));
    }
    let a = a.normalized();
    let exps: Vec<u64> = (0..m as u64).collect();
    let h = a.entrywise_poly(&vec![1.0; m], &exps)?.hadamard_product(b)?;
    let g = a.hadamard_power(big_m).hadamard_product(b)?;
    let (kernel_dim, residual) = kernel_residual(&h, &g);
    Ok(InclusionReport {
        holds: residual <= KERNEL_INCLUSION_TOL,
        kernel_dim,
        residual,
    })
}

/// `h_c[A] = sum_j c_j A^{oj}`.
pub fn hc_matrix(a: &HermMatrix, c: &CoeffVector) -> Result<HermMatrix> {
    let exps: Vec<u64> = (0..c.len() as u64).collect();
    a.entrywise_poly(&c.to_f64(), &exps)
}

/// Critical value `rho(h_c[A]^{+/2} A^{oM} h_c[A]^{+/2})` of one matrix.
pub fn critical_value(a: &HermMatrix, c: &CoeffVector, m: u64) -> Result<PencilResult> {
    if c.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: c.len(),
        });
    }
    if a.max_abs() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    require_psd(a)?;
    let h = hc_matrix(a, c)?;
    let d = a.hadamard_power(m);
    ratio_unchecked(&h, &d)
}

/// Exact critical value of `u u^T` for a rational factor `u`:
/// `(u^M)^T G^+ u^M` with `G = sum_j c_j u^j (u^j)^T`.
pub fn critical_value_rank_one_exact(u: &[Rational], c: &CoeffVector, m: u64) -> Result<Rational> {
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let n = u.len();
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.len(),
        });
    }
    let powers: Vec<Vec<Rational>> = (0..n as u64)
        .map(|j| u.iter().map(|x| Pow::pow(x, j)).collect())
        .collect();
    let mut gram = RatMatrix::zeros(n);
    for (j, p) in powers.iter().enumerate() {
        gram = gram.add(&RatMatrix::outer(p, p)?.scale(&c.as_slice()[j]))?;
    }
    let target: Vec<Rational> = u.iter().map(|x| Pow::pow(x, m)).collect();
    // u^{oM} lies in the span of u^{o0}, ..., u^{o(N-1)}, so any solution works.
    let x = gram.solve(&target).ok_or(Error::KernelNotContained {
        residual: f64::INFINITY,
    })?;
    Ok(dot(&target, &x))
}

/// Float rank-one critical value `(u^M)^* G^+ u^M`, `G = sum c_j u^j (u^j)^*`.
pub fn critical_value_rank_one(u: &CVector, c: &CoeffVector, m: u64) -> Result<f64> {
    if u.iter().all(|z| *z == Complex64::zero()) {
        return Err(Error::ZeroVector);
    }
    let n = u.len();
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.len(),
        });
    }
    let pow = |k: u64| -> CVector {
        if k == 0 {
            DVector::from_element(n, Complex64::one())
        } else {
            u.map(|z| z.powu(k as u32))
        }
    };
    let mut g = CMatrix::zeros(n, n);
    for (j, cj) in c.to_f64().iter().enumerate() {
        let p = pow(j as u64);
        g += (&p * p.adjoint()).scale(*cj);
    }
    let g = HermMatrix::new(hermitize(g))?;
    let target = pow(m);
    let pinv = g.pseudo_inverse()?;
    Ok(pinv.quadratic_form(&target))
}

/// Exact critical value of a rational PSD matrix of rank one.
///
/// With `w = A[:, f]` for a positive diagonal entry `a = a_ff`, `A = w w^T / a`,
/// so the value is `a^{-M}` times the rank-one value of `w` under the
/// coefficients `c_j a^{-j}`.
pub fn critical_value_exact(a: &RatMatrix, c: &CoeffVector, m: u64) -> Result<Rational> {
    let n = a.dim();
    if c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.len(),
        });
    }
    if !a.is_symmetric() {
        return Err(Error::InvalidArgument("exact mode needs a symmetric matrix".into()));
    }
    let f = (0..n).find(|&i| a.get(i, i).is_positive()).ok_or(Error::ZeroMatrix)?;
    match a.rank() {
        1 => {}
        r => {
            return Err(Error::InvalidArgument(format!(
                "exact mode needs rank one, matrix has rank {r}"
            )))
        }
    }
    if (0..n).any(|i| a.get(i, i).is_negative()) {
        return Err(Error::NotPsd {
            min_eigenvalue: f64::NAN,
        });
    }
    let d = a.get(f, f).clone();
    let w = a.row(f).to_vec();
    let scaled = CoeffVector::new(
        c.as_slice()
            .iter()
            .enumerate()
            .map(|(j, cj)| cj / Pow::pow(&d, j as u64))
            .collect(),
    )?;
    Ok(critical_value_rank_one_exact(&w, &scaled, m)? / Pow::pow(&d, m))
}

/// Exact value on the witness family `u(t) = sqrt(rho) (1 - t, ..., 1 - N t)`.
///
/// The square root cancels: the value is
/// `rho^M (w^M)^T (sum_j c_j rho^j w^j (w^j)^T)^+ w^M` with `w = u / sqrt(rho)`.
pub fn witness_value(c: &CoeffVector, m: u64, rho: &Rational, t: &Rational) -> Result<Rational> {
    let n = c.len();
    let upper = Rational::new(1.into(), (n as i64).into());
    if !t.is_positive() || *t >= upper {
        return Err(Error::TOutOfRange(t.to_string()));
    }
    let w: Vec<Rational> = (1..=n as i64).map(|k| Rational::one() - t * int(k)).collect();
    let scaled = CoeffVector::new(
        c.as_slice()
            .iter()
            .enumerate()
            .map(|(j, cj)| cj * Pow::pow(rho, j as u64))
            .collect(),
    )?;
    Ok(Pow::pow(rho, m) * critical_value_rank_one_exact(&w, &scaled, m)?)
}

/// Exact witness-family values on a grid of `t`, in grid order.
pub fn sup_over_witness_family(
    c: &CoeffVector,
    m: u64,
    rho: &Rational,
    t_grid: &[Rational],
) -> Result<Vec<(Rational, Rational)>> {
    t_grid
        .iter()
        .map(|t| Ok((t.clone(), witness_value(c, m, rho, t)?)))
        .collect()
}

/// Critical value at the limit matrix `rho 1_{NxN}`: `rho^M / sum_j c_j rho^j`.
pub fn limit_matrix_value(c: &CoeffVector, m: u64, rho: &Rational) -> Rational {
    let denom: Rational = c
        .as_slice()
        .iter()
        .enumerate()
        .map(|(j, cj)| cj * Pow::pow(rho, j as u64))
        .sum();
    Pow::pow(rho, m) / denom
}

/// `10^{-1}, ..., 10^{-k}`.
pub fn decade_grid(k: u32) -> Vec<Rational> {
    (1..=k)
        .map(|e| Rational::new(1.into(), num_bigint::BigInt::from(10).pow(e)))
        .collect()
}

pub fn to_f64_pairs(v: &[(Rational, Rational)]) -> Vec<(f64, f64)> {
    v.iter().map(|(a, b)| (to_f64(a), to_f64(b))).collect()
}
