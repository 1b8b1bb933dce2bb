//! Empirical side of the phase transition: search for matrices `A` in the
//! disc of radius `rho` where `f[A]` has a negative eigenvalue, with
//! `f = c_0 + ... + c_{N-1} z^{N-1} + c' z^M`.

use nalgebra::DVector;
use num_complex::Complex64;
use num_traits::{One, Signed};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::exact::RatMatrix;
use crate::matrix::{CVector, HermMatrix};
use crate::pencil::{decade_grid, witness_value};
use crate::rational::{int, to_f64, Rational};
use crate::threshold::CoeffVector;

use super::sample;

/// `f[A]` counts as a witness when its least eigenvalue is below
/// `-WITNESS_TOL * max(1, max |eigenvalue|)`.
pub const WITNESS_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// `u_k = sqrt(rho) (1 - t' eps_k)`, `A = u u^T`.
    RankOneFamily,
    /// `u_k = sqrt(rho) exp(i s k)`, `A = u u^*`.
    PhaseFamily,
    /// Gaussian Gram matrix scaled into the disc.
    RandomPsd,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub matrix: HermMatrix,
    /// Unit eigenvector of `f[A]` for the least eigenvalue.
    pub vector: CVector,
    pub min_eigenvalue: f64,
    /// `min_eigenvalue / max(1, max |eigenvalue|)`.
    pub relative: f64,
    pub source: WitnessSource,
    pub draw: usize,
}

#[derive(Clone, Debug)]
pub struct NegativityScan {
    pub seed: u64,
    pub draws: usize,
    /// Most negative draw, whether or not it counts as a witness.
    pub best: Option<Witness>,
    /// Index of the first draw that counted as a witness.
    pub first_witness_draw: Option<usize>,
}

impl NegativityScan {
    /// The most negative draw when it clears the witness tolerance.
    pub fn witness(&self) -> Option<&Witness> {
        self.best.as_ref().filter(|w| w.relative < -WITNESS_TOL)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |w| w.min_eigenvalue)
    }

    pub fn min_relative(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |w| w.relative)
    }
}

fn apply(a: &HermMatrix, c: &[f64], c_prime: f64, m: u64) -> Result<HermMatrix> {
    let mut coeffs = c.to_vec();
    coeffs.push(c_prime);
    let mut exps: Vec<u64> = (0..c.len() as u64).collect();
    exps.push(m);
    a.entrywise_poly(&coeffs, &exps)
}

fn evaluate(a: HermMatrix, c: &[f64], c_prime: f64, m: u64, source: WitnessSource, draw: usize) -> Result<Witness> {
    let f = apply(&a, c, c_prime, m)?;
    let spec = f.spectrum();
    let min_eigenvalue = spec.values[0];
    let top = spec.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(Witness {
        vector: spec.vectors.column(0).into_owned(),
        relative: min_eigenvalue / top.max(1.0),
        min_eigenvalue,
        matrix: a,
        source,
        draw,
    })
}

/// Runs `budget` seeded draws cycling through the rank-one family, the
/// unit-modulus phase family and random PSD matrices.
pub fn find_negativity_witness(
    c: &CoeffVector,
    c_prime: f64,
    m: u64,
    rho: f64,
    budget: usize,
    seed: u64,
) -> Result<NegativityScan> {
    let n = c.len();
    if (m as u128) < n as u128 {
        return Err(Error::TailBelowN { degree: m, dim: n });
    }
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::InvalidArgument(format!("rho = {rho} must be positive")));
    }
    let cf = c.to_f64();
    let root = rho.sqrt();
    let mut rng = sample::rng(seed);
    let rounds = budget.div_ceil(3).max(1);
    let mut best: Option<Witness> = None;
    let mut first_witness_draw = None;
    for draw in 0..budget {
        let round = draw / 3;
        let (a, source) = match draw % 3 {
            0 => {
                let t = 10f64.powi(-1 - (round % 6) as i32);
                let mut eps: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                eps.sort_by(f64::total_cmp);
                let u = DVector::from_iterator(n, eps.iter().map(|e| Complex64::new(root * (1.0 - t * e), 0.0)));
                (HermMatrix::outer(&u), WitnessSource::RankOneFamily)
            }
            1 => {
                // Log-spaced angular steps in [1e-2, 1], lightly jittered.
                let frac = (round as f64 + rng.gen_range(0.0..1.0)) / rounds as f64;
                let s = 10f64.powf(-2.0 + 2.0 * frac);
                let u = DVector::from_fn(n, |k, _| Complex64::from_polar(root, s * k as f64));
                (HermMatrix::outer(&u), WitnessSource::PhaseFamily)
            }
            _ => {
                let a = sample::psd_any(&mut rng, n);
                let top = (0..n).map(|i| a.get(i, i).re).fold(0.0, f64::max);
                let target = if rng.gen_bool(0.5) {
                    rho
                } else {
                    rho * rng.gen_range(0.2..1.0)
                };
                let a = if top > 0.0 { a.scale(target / top) } else { a };
                (a, WitnessSource::RandomPsd)
            }
        };
        let w = evaluate(a, &cf, c_prime, m, source, draw)?;
        if first_witness_draw.is_none() && w.relative < -WITNESS_TOL {
            first_witness_draw = Some(draw);
        }
        if best.as_ref().is_none_or(|b| w.min_eigenvalue < b.min_eigenvalue) {
            best = Some(w);
        }
    }
    Ok(NegativityScan {
        seed,
        draws: budget,
        best,
        first_witness_draw,
    })
}

/// Exact `det f[rho w w^T]` for rational `w`, `f = h_c + c' z^M`.
pub fn rank_one_determinant(
    c: &CoeffVector,
    c_prime: &Rational,
    m: u64,
    rho: &Rational,
    u: &[Rational],
) -> Result<Rational> {
    let n = c.len();
    if u.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.len(),
        });
    }
    let mut coeffs = c.as_slice().to_vec();
    coeffs.push(c_prime.clone());
    let mut exps: Vec<u64> = (0..n as u64).collect();
    exps.push(m);
    Ok(RatMatrix::outer(u, u)?
        .scale(rho)
        .entrywise_poly(&coeffs, &exps)?
        .determinant())
}

/// Exact rank-one witness: `det f[rho w w^T] < 0` at `w = (1 - t, ..., 1 - N t)`.
#[derive(Clone, Debug, Serialize)]
pub struct RankOneCertificate {
    pub t: String,
    pub w: Vec<String>,
    pub determinant: String,
    pub determinant_f64: f64,
}

/// Walks `t = 10^{-1}, 10^{-2}, ...` down to `10^{-max_decades}` and returns
/// the first `t` with `det f[rho w w^T] < 0` in exact arithmetic.
/// Only a negative `c'` can produce one.
pub fn rank_one_certificate(
    c: &CoeffVector,
    c_prime: &Rational,
    m: u64,
    rho: &Rational,
    max_decades: u32,
) -> Result<Option<RankOneCertificate>> {
    let n = c.len();
    if (m as u128) < n as u128 {
        return Err(Error::TailBelowN { degree: m, dim: n });
    }
    if !c_prime.is_negative() {
        return Ok(None);
    }
    let target = -c_prime.recip();
    for t in decade_grid(max_decades) {
        if witness_value(c, m, rho, &t)? <= target {
            continue;
        }
        let w: Vec<Rational> = (1..=n as i64).map(|k| Rational::one() - &t * int(k)).collect();
        let det = rank_one_determinant(c, c_prime, m, rho, &w)?;
        if det.is_negative() {
            return Ok(Some(RankOneCertificate {
                t: t.to_string(),
                w: w.iter().map(|x| x.to_string()).collect(),
                determinant_f64: to_f64(&det),
                determinant: det.to_string(),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonnegative_leading_coefficient_has_no_witness() {
        let c = CoeffVector::ones(3);
        let scan = find_negativity_witness(&c, 0.5, 3, 1.0, 60, 3).unwrap();
        assert!(scan.witness().is_none());
        assert!(scan.first_witness_draw.is_none());
    }

    #[test]
    fn certificate_just_below_threshold() {
        let c = CoeffVector::ones(3);
        let cp = -crate::rational::ratio(1, 19) - crate::rational::ratio(1, 1000);
        let cert = rank_one_certificate(&c, &cp, 3, &Rational::one(), 8).unwrap().unwrap();
        assert!(cert.determinant_f64 < 0.0);
        let at = -crate::rational::ratio(1, 19);
        assert!(rank_one_certificate(&c, &at, 3, &Rational::one(), 8).unwrap().is_none());
    }

    #[test]
    fn far_below_threshold_is_caught() {
        let c = CoeffVector::ones(2);
        let scan = find_negativity_witness(&c, -1.0, 2, 1.0, 30, 1).unwrap();
        assert!(scan.witness().is_some());
    }
}
