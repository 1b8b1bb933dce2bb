//! Brute-force verification of the determinantal identities and an
//! empirical search for negativity witnesses.
//!
//! Identity checks run in exact rational arithmetic and report every
//! failing instance with its seed. Suites bundle many seeded instances
//! and serialize to JSON.

pub mod identities;
pub mod sample;
pub mod suites;
pub mod transition;

use serde::Serialize;

pub use identities::{
    necessary_coeff_check, verify_2x2_threshold, verify_det_factorization, verify_power_expansion,
    verify_rank_one_expansion, TwoByTwoReport,
};
pub use suites::{run_suite, Suite, SuiteReport};
pub use transition::{find_negativity_witness, NegativityScan, Witness, WitnessSource};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub lhs: String,
    pub rhs: String,
    pub diff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub instance_count: usize,
    pub failures: Vec<Failure>,
    pub exact_mode: bool,
}

impl IdentityReport {
    pub fn new(name: &str, exact_mode: bool) -> Self {
        Self {
            name: name.to_string(),
            instance_count: 0,
            failures: Vec::new(),
            exact_mode,
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// Folds another report's instances and failures into this one,
    /// relabelling failures with `seed`.
    pub fn absorb(&mut self, other: IdentityReport, seed: u64) {
        self.instance_count += other.instance_count;
        self.failures
            .extend(other.failures.into_iter().map(|f| Failure { seed, ..f }));
    }

    pub(crate) fn record(&mut self, ok: bool, lhs: String, rhs: String, diff: String) {
        self.instance_count += 1;
        if !ok {
            self.failures.push(Failure {
                seed: 0,
                lhs,
                rhs,
                diff,
            });
        }
    }
}
