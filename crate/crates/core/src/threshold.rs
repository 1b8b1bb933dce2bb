//! Closed-form thresholds and bounds, all in exact arithmetic.
//!
//! The central quantity is
//!
//! ```text
//! C(c; z^M; N, rho) = sum_{j<N} binom(M,j)^2 binom(M-j-1,N-j-1)^2 rho^{M-j} / c_j
//! ```
//!
//! with the generalized binomial, so that `M < N` is legal and gives
//! `1 / c_M`. The polynomial `c_0 + ... + c_{N-1} z^{N-1} + c' z^M` preserves
//! positivity on `N x N` matrices with entries in the closed disc of
//! radius `rho` exactly when `c' >= -1/C`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, falling_factorial, int, powi, to_f64, Rational};

/// Strictly positive coefficients `c_0, ..., c_{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffVector {
    c: Vec<Rational>,
}

impl CoeffVector {
    pub fn new(c: Vec<Rational>) -> Result<Self> {
        if c.is_empty() || c.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidCoefficients);
        }
        Ok(Self { c })
    }

    pub fn from_ints(c: &[i64]) -> Result<Self> {
        Self::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn ones(n: usize) -> Self {
        Self {
            c: vec![Rational::one(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.c
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.c.iter().map(to_f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdQuery {
    pub c: CoeffVector,
    pub m: u64,
    pub n: usize,
    pub rho: Rational,
}

impl ThresholdQuery {
    pub fn new(c: CoeffVector, m: u64, n: usize, rho: Rational) -> Result<Self> {
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        if !rho.is_positive() {
            return Err(Error::InvalidArgument(format!("rho = {rho} must be positive")));
        }
        Ok(Self { c, m, n, rho })
    }

    /// Query with `N` taken from the length of `c`.
    pub fn for_coeffs(c: CoeffVector, m: u64, rho: Rational) -> Result<Self> {
        let n = c.len();
        Self::new(c, m, n, rho)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdValue {
    #[serde(with = "rational_string")]
    pub exact: Rational,
    pub float_view: f64,
}

impl ThresholdValue {
    pub fn new(exact: Rational) -> Self {
        let float_view = to_f64(&exact);
        Self { exact, float_view }
    }
}

/// Serde helper that writes rationals as `"p/q"` strings.
pub mod rational_string {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::rational::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// `binom(M,j)^2 binom(M-j-1,N-j-1)^2`, the squared hook specialization.
fn hook_weight(m: u64, n: usize, j: usize) -> BigInt {
    let a = binomial(m as i64, j as u64);
    if a.is_zero() {
        return a;
    }
    let b = binomial(m as i64 - j as i64 - 1, (n - j - 1) as u64);
    let ab = a * b;
    &ab * &ab
}

/// The `N` summands of the threshold constant, in order of `j`.
pub fn threshold_terms(q: &ThresholdQuery) -> Vec<Rational> {
    (0..q.n)
        .map(|j| {
            let w = hook_weight(q.m, q.n, j);
            if w.is_zero() {
                return Rational::zero();
            }
            Rational::from_integer(w) * powi(&q.rho, q.m as i64 - j as i64) / &q.c.as_slice()[j]
        })
        .collect()
}

pub fn threshold_constant(q: &ThresholdQuery) -> ThresholdValue {
    ThresholdValue::new(threshold_terms(q).into_iter().sum())
}

/// `-1/C`, the most negative admissible leading coefficient.
pub fn negative_threshold(q: &ThresholdQuery) -> Rational {
    -threshold_constant(q).exact.recip()
}

/// Partial constants `C_m = C((c_{N-m}, ..., c_{N-1}); z^{M-N+m}; m, rho)`
/// for `m = 1..=N`. They increase strictly.
pub fn partial_constants(c: &CoeffVector, m: u64, rho: &Rational) -> Result<Vec<Rational>> {
    let n = c.len();
    if (m as u128) < n as u128 {
        return Err(Error::TailBelowN { degree: m, dim: n });
    }
    (1..=n)
        .map(|k| {
            let sub = CoeffVector::new(c.as_slice()[n - k..].to_vec())?;
            let q = ThresholdQuery::new(sub, m - (n - k) as u64, k, rho.clone())?;
            Ok(threshold_constant(&q).exact)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticBound {
    /// `sum over positive tail coefficients of c_M * C(c; z^M; N, rho)`.
    #[serde(with = "rational_string")]
    pub series: Rational,
    /// The closed form built from the `(2N-2)`-th derivative of `g_+(z^2)`.
    #[serde(with = "rational_string")]
    pub bound: Rational,
}

/// Series and closed-form bound for a finite tail `sum c_M z^M`, `M >= N`.
pub fn analytic_bound(c: &CoeffVector, tail: &[(u64, Rational)], rho: &Rational) -> Result<AnalyticBound> {
    let n = c.len();
    if let Some(&(m, _)) = tail.iter().find(|(m, _)| (*m as u128) < n as u128) {
        return Err(Error::TailBelowN { degree: m, dim: n });
    }
    let positive: Vec<&(u64, Rational)> = tail.iter().filter(|(_, cm)| cm.is_positive()).collect();
    let mut series = Rational::zero();
    for (m, cm) in &positive {
        let q = ThresholdQuery::new(c.clone(), *m, n, rho.clone())?;
        series += cm * threshold_constant(&q).exact;
    }
    // d^{2N-2}/dz^{2N-2} of c_M z^{2M} at sqrt(rho) is c_M ff(2M, 2N-2) rho^{M-N+1}.
    let mut derivative = Rational::zero();
    for (m, cm) in &positive {
        let ff = falling_factorial(2 * *m as i64, 2 * (n as u64 - 1));
        derivative += cm * Rational::from_integer(ff) * powi(rho, *m as i64 - n as i64 + 1);
    }
    let nf = factorial(n as u64 - 1);
    let denom = Rational::from_integer(BigInt::from(2).pow(n as u32 - 1) * &nf * &nf);
    let tail_sum: Rational = (0..n)
        .map(|j| {
            let b = binomial(n as i64 - 1, j as u64);
            Rational::from_integer(&b * &b) * powi(rho, (n - j - 1) as i64) / &c.as_slice()[j]
        })
        .sum();
    Ok(AnalyticBound {
        series,
        bound: derivative / denom * tail_sum,
    })
}

/// Sum of per-term constants `|c_M| * C(c; z^M; N, rho)` over every tail
/// term, positive or not.
pub fn per_term_sum(c: &CoeffVector, tail: &[(u64, Rational)], rho: &Rational) -> Result<Rational> {
    let n = c.len();
    let mut out = Rational::zero();
    for (m, cm) in tail {
        let q = ThresholdQuery::new(c.clone(), *m, n, rho.clone())?;
        out += cm.abs() * threshold_constant(&q).exact;
    }
    Ok(out)
}

/// `h_{N,M} = sum_{m=0}^{M} C((1, ..., 1); z^{N+m}; N, rho)`.
pub fn universal_poly_constant(n: usize, m: u64, rho: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    (0..=m)
        .map(|k| {
            let q = ThresholdQuery::new(CoeffVector::ones(n), n as u64 + k, n, rho.clone())?;
            Ok(threshold_constant(&q).exact)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeBounds {
    #[serde(with = "rational_string")]
    pub eta_lower: Rational,
    #[serde(with = "rational_string")]
    pub eta_upper: Rational,
    /// `eta_upper / eta_lower = sum_m C(z^{N+m}) / C(z^{N+M})`, at least 1.
    #[serde(with = "rational_string")]
    pub ratio: Rational,
    pub ratio_f64: f64,
}

/// Lower and upper bounds on the largest cube size `eta` for the
/// signed tail `sum_{m<=M} u_m z^{N+m}`.
pub fn cube_bounds(c: &CoeffVector, m: u64, rho: &Rational) -> Result<CubeBounds> {
    let n = c.len();
    let constants = (0..=m)
        .map(|k| {
            let q = ThresholdQuery::new(c.clone(), n as u64 + k, n, rho.clone())?;
            Ok(threshold_constant(&q).exact)
        })
        .collect::<Result<Vec<Rational>>>()?;
    let total: Rational = constants.iter().sum();
    let last = constants.last().expect("m >= 0 gives one term").clone();
    let ratio = &total / &last;
    Ok(CubeBounds {
        eta_lower: total.recip(),
        eta_upper: last.recip(),
        ratio_f64: to_f64(&ratio),
        ratio,
    })
}

/// `b(m, M, rho) = ((M+1)!/(m+1)!)^2 rho^{m-M}`.
pub fn cube_b(m: u64, big_m: u64, rho: &Rational) -> Result<Rational> {
    if m >= big_m {
        return Err(Error::InvalidArgument(format!("need m < M, got m={m}, M={big_m}")));
    }
    let f = factorial(big_m + 1) / factorial(m + 1);
    Ok(Rational::from_integer(&f * &f) * powi(rho, m as i64 - big_m as i64))
}

/// `b(m, M, rho) N^{-2(M-m)}`, an upper bound for `C(z^{N+m}) / C(z^{N+M})`.
pub fn cube_ratio_bound(m: u64, big_m: u64, rho: &Rational, n: usize) -> Result<Rational> {
    let b = cube_b(m, big_m, rho)?;
    Ok(b * powi(&int(n as i64), -2 * (big_m - m) as i64))
}

/// Critical `c_p` for `c_m z^m + c_n z^n + c_p z^p` on `2 x 2` matrices.
pub fn threshold_2x2(m: u64, n: u64, p: u64, c_m: &Rational, c_n: &Rational) -> Result<Rational> {
    if !(m < n && n < p) {
        return Err(Error::BadExponentOrder { m, n, p });
    }
    if !c_m.is_positive() || !c_n.is_positive() {
        return Err(Error::InvalidCoefficients);
    }
    let sq = |x: u64| int((x * x) as i64);
    Ok(-(c_m * c_n * sq(n - m)) / (c_m * sq(p - m) + c_n * sq(p - n)))
}
