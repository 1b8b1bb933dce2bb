use itertools::Itertools;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::exact::RatMatrix;
use crate::rational::{int, to_f64, Rational};
use crate::schur::{hook_partition, schur_eval, vandermonde_det, Partition};
use crate::threshold::{threshold_2x2, CoeffVector};

use super::IdentityReport;

/// `det sum_k c_k (u v^T)^{o n_k}` against the Cauchy-Binet expansion
/// `Delta(u) Delta(v) sum_{|n'| = N} s_{lam(n')}(u) s_{lam(n')}(v) prod c`.
pub fn verify_rank_one_expansion(
    u: &[Rational],
    v: &[Rational],
    exps: &[u64],
    coeffs: &[Rational],
) -> Result<IdentityReport> {
    let n = u.len();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    if exps.len() != coeffs.len() {
        return Err(Error::DimensionMismatch {
            expected: exps.len(),
            got: coeffs.len(),
        });
    }
    if exps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("exponents must be strictly increasing".into()));
    }
    let a = RatMatrix::outer(u, v)?;
    let lhs = a.entrywise_poly(coeffs, exps)?.determinant();
    let mut sum = Rational::zero();
    for subset in (0..exps.len()).combinations(n) {
        // Descending exponents minus the staircase N-1, ..., 0.
        let parts: Vec<u64> = subset
            .iter()
            .rev()
            .enumerate()
            .map(|(i, &k)| exps[k] - (n - 1 - i) as u64)
            .collect();
        let lam = Partition::new(parts)?;
        let prod: Rational = subset.iter().map(|&k| coeffs[k].clone()).product();
        sum += schur_eval(&lam, u) * schur_eval(&lam, v) * prod;
    }
    let rhs = vandermonde_det(u) * vandermonde_det(v) * sum;
    let mut report = IdentityReport::new("rank_one_expansion", true);
    let diff = &lhs - &rhs;
    report.record(diff.is_zero(), lhs.to_string(), rhs.to_string(), diff.to_string());
    Ok(report)
}

/// `p_t(x) = t (c_0 x^R + ... + c_{N-1} x^{R+N-1}) - x^{R+M}` applied to
/// `u v^T`; checks the factored determinant at `N + 1` values of `t`.
pub fn verify_det_factorization(
    u: &[Rational],
    v: &[Rational],
    c: &CoeffVector,
    m: u64,
    r: u64,
) -> Result<IdentityReport> {
    let n = u.len();
    if v.len() != n || c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if v.len() != n { v.len() } else { c.len() },
        });
    }
    if (m as u128) < n as u128 {
        return Err(Error::TailBelowN { degree: m, dim: n });
    }
    let a = RatMatrix::outer(u, v)?;
    let mut exps: Vec<u64> = (0..n as u64).map(|j| r + j).collect();
    exps.push(r + m);
    let mut root = Rational::zero();
    for j in 0..n {
        let mu = hook_partition(m, n, j)?;
        root += schur_eval(&mu, u) * schur_eval(&mu, v) / &c.as_slice()[j];
    }
    let prefactor = vandermonde_det(u)
        * vandermonde_det(v)
        * (0..n)
            .map(|k| &c.as_slice()[k] * Pow::pow(&u[k], r) * Pow::pow(&v[k], r))
            .product::<Rational>();
    let mut report = IdentityReport::new("det_factorization", true);
    for step in 0..=n as i64 {
        let t = int(step);
        let mut coeffs: Vec<Rational> = c.as_slice().iter().map(|x| x * &t).collect();
        coeffs.push(-Rational::one());
        let lhs = a.entrywise_poly(&coeffs, &exps)?.determinant();
        let rhs = Pow::pow(&t, (n - 1) as u64) * &prefactor * (&t - &root);
        let diff = &lhs - &rhs;
        report.record(diff.is_zero(), lhs.to_string(), rhs.to_string(), diff.to_string());
    }
    Ok(report)
}

/// `A^{oM} = sum_{j<N} (-1)^{N-j-1} diag(s_{mu(M,N,j)}(row_i)) A^{oj}`.
pub fn verify_power_expansion(a: &RatMatrix, m: u64) -> Result<IdentityReport> {
    let n = a.dim();
    if (m as u128) < n as u128 {
        return Err(Error::TailBelowN { degree: m, dim: n });
    }
    let lhs = a.hadamard_power(m);
    let mut rhs = RatMatrix::zeros(n);
    for j in 0..n {
        let mu = hook_partition(m, n, j)?;
        let sign = if (n - j - 1).is_multiple_of(2) { int(1) } else { int(-1) };
        let d: Vec<Rational> = (0..n).map(|i| &sign * schur_eval(&mu, a.row(i))).collect();
        rhs = rhs.add(&a.hadamard_power(j as u64).left_diag_mul(&d)?)?;
    }
    let diff = lhs.sub(&rhs)?;
    let mut report = IdentityReport::new("power_expansion", true);
    let worst = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .map(|(i, k)| diff.get(i, k).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    report.record(
        worst.is_zero(),
        format!("{lhs:?}"),
        format!("{rhs:?}"),
        worst.to_string(),
    );
    Ok(report)
}

/// The first `min(N, #nonzero)` nonzero coefficients, in exponent order,
/// must be strictly positive.
pub fn necessary_coeff_check(coeffs: &[f64], exps: &[u64], n: usize) -> Result<bool> {
    if coeffs.len() != exps.len() {
        return Err(Error::DimensionMismatch {
            expected: exps.len(),
            got: coeffs.len(),
        });
    }
    let mut pairs: Vec<(u64, f64)> = exps.iter().copied().zip(coeffs.iter().copied()).collect();
    pairs.sort_by_key(|p| p.0);
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateExponent(
            pairs.windows(2).find(|w| w[0].0 == w[1].0).map(|w| w[0].0).unwrap_or(0),
        ));
    }
    Ok(pairs.iter().filter(|p| p.1 != 0.0).take(n).all(|p| p.1 > 0.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoByTwoReport {
    pub m: u64,
    pub n: u64,
    pub p: u64,
    pub c_m: String,
    pub c_n: String,
    pub threshold: String,
    pub grid: usize,
    /// Smallest `det f[u u^T]` over the grid at the threshold.
    pub min_det_at_threshold: f64,
    /// Smallest `det f[u u^T] / (u_1 - u_2)^2` (extended to the diagonal)
    /// at the threshold.
    pub min_quotient_at_threshold: f64,
    pub monotone_nonnegative: bool,
    /// Smallest quotient with `c_p` lowered by `1e-3`, and where.
    pub min_quotient_below: f64,
    pub argmin_below: (f64, f64),
    /// A point `u` with `det f[u u^T] < 0` below the threshold.
    pub witness_below: Option<(f64, f64, f64)>,
    pub pass: bool,
}

/// `(x^a - y^a) / (x - y)`, extended continuously to `x = y`.
fn divided_power(x: f64, y: f64, a: u64) -> f64 {
    (0..a).map(|i| x.powi(i as i32) * y.powi((a - 1 - i) as i32)).sum()
}

struct ThreeTerm {
    m: u64,
    n: u64,
    p: u64,
    cm: f64,
    cn: f64,
    cp: f64,
}

impl ThreeTerm {
    fn f(&self, x: f64) -> f64 {
        self.cm * x.powi(self.m as i32) + self.cn * x.powi(self.n as i32) + self.cp * x.powi(self.p as i32)
    }

    fn det(&self, u1: f64, u2: f64) -> f64 {
        self.f(u1 * u1) * self.f(u2 * u2) - self.f(u1 * u2).powi(2)
    }

    /// `det / (u1 - u2)^2` via the expansion into three squared differences.
    fn quotient(&self, u1: f64, u2: f64) -> f64 {
        let (m, n, p) = (self.m, self.n, self.p);
        let w = u1 * u2;
        self.cm * self.cn * w.powi(2 * m as i32) * divided_power(u2, u1, n - m).powi(2)
            + self.cm * self.cp * w.powi(2 * m as i32) * divided_power(u2, u1, p - m).powi(2)
            + self.cn * self.cp * w.powi(2 * n as i32) * divided_power(u2, u1, p - n).powi(2)
    }
}

/// Samples `det f[u u^T]` for `f = c_m x^m + c_n x^n + c_p x^p` on the grid
/// `u_i in {1/g, ..., 1}` at the critical `c_p`, and again `1e-3` below it.
pub fn verify_2x2_threshold(
    m: u64,
    n: u64,
    p: u64,
    c_m: &Rational,
    c_n: &Rational,
    grid: usize,
) -> Result<TwoByTwoReport> {
    let threshold = threshold_2x2(m, n, p, c_m, c_n)?;
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let pts: Vec<f64> = (1..=grid).map(|k| k as f64 / grid as f64).collect();
    let at = ThreeTerm {
        m,
        n,
        p,
        cm: to_f64(c_m),
        cn: to_f64(c_n),
        cp: to_f64(&threshold),
    };
    let below = ThreeTerm { cp: at.cp - 1e-3, ..at };
    let mut min_det = f64::INFINITY;
    let mut min_q = f64::INFINITY;
    let mut min_below = f64::INFINITY;
    let mut argmin_below = (0.0, 0.0);
    for &u1 in &pts {
        for &u2 in &pts {
            min_det = min_det.min(at.det(u1, u2));
            min_q = min_q.min(at.quotient(u1, u2));
            let q = below.quotient(u1, u2);
            if q < min_below {
                min_below = q;
                argmin_below = (u1, u2);
            }
        }
    }
    // f >= 0 and non-decreasing on [0, 1].
    let xs: Vec<f64> = (0..=grid).map(|k| k as f64 / grid as f64).collect();
    let monotone_nonnegative =
        xs.iter().all(|&x| at.f(x) >= -1e-12) && xs.windows(2).all(|w| at.f(w[1]) >= at.f(w[0]) - 1e-12);
    // Walk toward the corner u_1 = u_2 = 1 until the determinant itself is negative.
    let mut witness_below = None;
    if min_below < 0.0 {
        let mut h = 1.0 / grid as f64;
        for _ in 0..60 {
            let (u1, u2) = (1.0, 1.0 - h);
            let d = below.det(u1, u2);
            if d < 0.0 && below.quotient(u1, u2) < 0.0 {
                witness_below = Some((u1, u2, d));
                break;
            }
            h /= 2.0;
        }
    }
    let pass = min_det >= -1e-12 && min_q >= -1e-12 && monotone_nonnegative && witness_below.is_some();
    Ok(TwoByTwoReport {
        m,
        n,
        p,
        c_m: c_m.to_string(),
        c_n: c_n.to_string(),
        threshold: threshold.to_string(),
        grid,
        min_det_at_threshold: min_det,
        min_quotient_at_threshold: min_q,
        monotone_nonnegative,
        min_quotient_below: min_below,
        argmin_below,
        witness_below,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn expansion_small_cases() {
        let r = verify_rank_one_expansion(&v(&[1, 2]), &v(&[1, 3]), &[0, 1], &v(&[1, 1])).unwrap();
        assert!(r.pass());
        assert_eq!(r.failures.len(), 0);
        let lhs = RatMatrix::outer(&v(&[1, 2]), &v(&[1, 3]))
            .unwrap()
            .entrywise_poly(&v(&[1, 1]), &[0, 1])
            .unwrap()
            .determinant();
        assert_eq!(lhs, int(2));
        let r = verify_rank_one_expansion(&v(&[1, 2, 3]), &v(&[4, 5, 6]), &[1, 4], &v(&[2, 3])).unwrap();
        assert!(r.pass());
        let r = verify_rank_one_expansion(&v(&[3]), &v(&[5]), &[4], &v(&[7])).unwrap();
        assert!(r.pass());
    }

    #[test]
    fn factorization_small_cases() {
        let c = CoeffVector::ones(2);
        assert!(verify_det_factorization(&v(&[1, 2]), &v(&[1, 2]), &c, 2, 0)
            .unwrap()
            .pass());
        let c1 = CoeffVector::from_ints(&[3]).unwrap();
        assert!(verify_det_factorization(&[ratio(2, 3)], &[ratio(-1, 2)], &c1, 4, 2)
            .unwrap()
            .pass());
    }

    #[test]
    fn power_expansion_on_ones() {
        for n in 1..=4 {
            for m in n as u64..=8 {
                assert!(verify_power_expansion(&RatMatrix::ones(n), m).unwrap().pass());
            }
        }
    }

    #[test]
    fn coefficient_rule() {
        assert!(necessary_coeff_check(&[1.0, 1.0, 1.0, -5.0], &[0, 1, 2, 3], 3).unwrap());
        assert!(!necessary_coeff_check(&[1.0, -1.0, 1.0], &[0, 1, 2], 3).unwrap());
        assert!(!necessary_coeff_check(&[0.0, 2.0, 3.0, -1.0], &[0, 1, 2, 3], 3).unwrap());
        assert!(necessary_coeff_check(&[0.0, 2.0, 3.0, -1.0], &[0, 1, 2, 3], 2).unwrap());
    }

    #[test]
    fn two_by_two_anchor() {
        let r = verify_2x2_threshold(0, 1, 2, &int(1), &int(1), 200).unwrap();
        assert_eq!(r.threshold, "-1/5");
        assert!(r.pass, "{r:?}");
    }
}
