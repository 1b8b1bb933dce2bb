//! Seeded suites bundling the identity checks, the phase-transition scans
//! and the kernel cross-checks.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::exact::RatMatrix;
use crate::rational::{ratio, to_f64, Rational};
use crate::strata::{simultaneous_kernel_report, stratify, GroupTag};
use crate::threshold::{threshold_constant, ThresholdQuery};

use super::identities::{
    verify_2x2_threshold, verify_det_factorization, verify_power_expansion, verify_rank_one_expansion,
};
use super::transition::{find_negativity_witness, rank_one_certificate};
use super::{sample, IdentityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Identities,
    Transition,
    Kernels,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "identities" => Ok(Suite::Identities),
            "transition" => Ok(Suite::Transition),
            "kernels" => Ok(Suite::Kernels),
            _ => Err(Error::InvalidArgument(format!("unknown suite '{s}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::All => "all",
            Suite::Identities => "identities",
            Suite::Transition => "transition",
            Suite::Kernels => "kernels",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub reports: Vec<IdentityReport>,
    pub pass: bool,
}

/// Trial `i` of a suite seeded with `seed` uses `seed + i`, so every
/// failure can be replayed on its own.
pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut reports = Vec::new();
    if matches!(suite, Suite::All | Suite::Identities) {
        reports.extend(identities(seed, trials)?);
    }
    if matches!(suite, Suite::All | Suite::Transition) {
        reports.extend(transition(seed, trials)?);
    }
    if matches!(suite, Suite::All | Suite::Kernels) {
        reports.extend(kernels(seed, trials)?);
    }
    let pass = reports.iter().all(IdentityReport::pass);
    Ok(SuiteReport {
        suite,
        seed,
        trials,
        reports,
        pass,
    })
}

fn distinct_exponents(rng: &mut sample::SeededRng, count: usize, max: u64) -> Vec<u64> {
    let mut pool: Vec<u64> = (0..=max).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count.min(pool.len()) {
        out.push(pool.swap_remove(rng.gen_range(0..pool.len())));
    }
    out.sort_unstable();
    out
}

fn symmetric_rational(rng: &mut sample::SeededRng, n: usize) -> RatMatrix {
    let upper: Vec<Vec<Rational>> = (0..n)
        .map(|i| (i..n).map(|_| sample::rational(rng, 5, 4)).collect())
        .collect();
    RatMatrix::from_fn(n, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        upper[lo][hi - lo].clone()
    })
}

fn identities(seed: u64, trials: usize) -> Result<Vec<IdentityReport>> {
    let mut expansion = IdentityReport::new("rank_one_expansion", true);
    let mut factorization = IdentityReport::new("det_factorization", true);
    let mut power = IdentityReport::new("power_expansion", true);
    for i in 0..trials {
        let s = seed.wrapping_add(i as u64);
        let mut rng = sample::rng(s);
        let n = rng.gen_range(1..=4);
        let u = sample::rational_vec(&mut rng, n, 5, 4);
        let v = sample::rational_vec(&mut rng, n, 5, 4);
        let count = rng.gen_range(0..=n + 2);
        let exps = distinct_exponents(&mut rng, count, 7);
        let coeffs = sample::rational_vec(&mut rng, exps.len(), 5, 4);
        expansion.absorb(verify_rank_one_expansion(&u, &v, &exps, &coeffs)?, s);

        let c = sample::coeffs(&mut rng, n);
        let m = rng.gen_range(n as u64..=7);
        let r = rng.gen_range(0..=2);
        factorization.absorb(verify_det_factorization(&u, &v, &c, m, r)?, s);

        let a = symmetric_rational(&mut rng, n);
        let m = rng.gen_range(n as u64..=9);
        power.absorb(verify_power_expansion(&a, m)?, s);
    }

    let mut two = IdentityReport::new("two_by_two_threshold", false);
    let mut rng = sample::rng(seed);
    let cases = [(0, 1, 2), (0, 1, 3), (1, 2, 4), (0, 2, 5)];
    for &(m, n, p) in &cases[..cases.len().min(trials.max(1))] {
        let (cm, cn) = (ratio(rng.gen_range(1..=5), 1), ratio(rng.gen_range(1..=5), 1));
        let r = verify_2x2_threshold(m, n, p, &cm, &cn, 200)?;
        two.record(
            r.pass,
            format!("min det {:e}, witness {:?}", r.min_det_at_threshold, r.witness_below),
            format!("c_p = {}", r.threshold),
            format!("{:e}", r.min_quotient_at_threshold),
        );
    }
    Ok(vec![expansion, factorization, power, two])
}

fn transition(seed: u64, trials: usize) -> Result<Vec<IdentityReport>> {
    let mut at = IdentityReport::new("no_witness_at_threshold", false);
    let mut below = IdentityReport::new("exact_witness_below_threshold", true);
    for i in 0..trials {
        let s = seed.wrapping_add(i as u64);
        let mut rng = sample::rng(s);
        let n = rng.gen_range(1..=3);
        let c = sample::coeffs(&mut rng, n);
        let m = rng.gen_range(n as u64..=n as u64 + 2);
        let rho = if rng.gen_bool(0.5) {
            Rational::one()
        } else {
            ratio(1, 2)
        };
        let big_c = threshold_constant(&ThresholdQuery::for_coeffs(c.clone(), m, rho.clone())?).exact;
        let critical = -big_c.recip();
        let scan = find_negativity_witness(&c, to_f64(&critical), m, to_f64(&rho), 30, s)?;
        let (min, rel) = (scan.min_eigenvalue(), scan.min_relative());
        at.record(
            scan.witness().is_none(),
            format!("min eigenvalue {min:e}"),
            format!("c' = {critical}"),
            format!("{rel:e}"),
        );
        let shifted = &critical - ratio(1, 1000);
        let cert = rank_one_certificate(&c, &shifted, m, &rho, 10)?;
        below.record(
            cert.is_some(),
            cert.as_ref()
                .map_or("none".into(), |k| format!("det {} at t = {}", k.determinant_f64, k.t)),
            format!("c' = {shifted}"),
            cert.map_or("no certificate".into(), |k| k.determinant),
        );
    }
    Ok(vec![at, below])
}

fn kernels(seed: u64, trials: usize) -> Result<Vec<IdentityReport>> {
    let mut recon = IdentityReport::new("stratify_reconstruction", false);
    let mut sim = IdentityReport::new("simultaneous_kernel_agreement", false);
    for i in 0..trials {
        let s = seed.wrapping_add(i as u64);
        let mut rng = sample::rng(s);
        let n = rng.gen_range(2..=6);
        let g = GroupTag::ALL[rng.gen_range(0..3)];
        let (a, _) = sample::structured(&mut rng, n, g);
        let dec = stratify(&a, g)?;
        let back = dec.reconstruct();
        let err = (a.as_matrix() - back.as_matrix()).camax() / a.max_abs().max(f64::MIN_POSITIVE);
        recon.record(err <= 1e-8, format!("{err:e}"), "0".into(), format!("{err:e}"));

        let rank = rng.gen_range(1..=n);
        let complex = rng.gen_bool(0.5);
        let b = sample::psd(&mut rng, n, rank, complex);
        let c = sample::coeffs(&mut rng, n);
        let r = simultaneous_kernel_report(&a, &b, &c)?;
        sim.record(
            r.agree(),
            format!("dims {}/{}/{}", r.direct.dim(), r.stacked.dim(), r.blockwise.dim()),
            format!("partition {:?}", r.partition.blocks()),
            format!("{:e}", r.max_sin_angle),
        );
    }
    Ok(vec![recon, sim])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Identities, Suite::Transition, Suite::Kernels] {
            let r = run_suite(suite, 11, 8).unwrap();
            for rep in &r.reports {
                assert!(rep.pass(), "{} {:?}", rep.name, rep.failures);
            }
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in ["all", "identities", "transition", "kernels"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
