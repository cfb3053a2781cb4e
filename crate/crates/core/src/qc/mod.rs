//! Numerical certificates for concavity and quasi-concavity claims.
//!
//! Two kinds of evidence are produced:
//!
//! - Local: a finite-difference bordered Hessian whose leading principal minors
//!   alternate in sign is a sufficient condition for quasi-concavity at that point.
//!   A failed pattern does not show that a function is not quasi-concave.
//! - Global: randomized checks of `f(mix) >= min(f(x1), f(x2))` (quasi-concavity) and
//!   `f(mix) >= lambda f(x1) + (1 - lambda) f(x2)` (concavity). A violation is a
//!   concrete counterexample; passing is evidence only.
//!
//! Every randomized routine takes a seed. Trial `t` draws from its own ChaCha8 stream
//! (`seed`, stream `t`), so trials can run in any order with identical results.

mod claims;
mod diff;
mod functions;
mod logdet;
mod minors;
mod sampling;

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use claims::{
    coherent_sum_eigen_check, composition_rule_checks, cs_equivalence_check, rate_bound_claims,
    relay_cut_counterexample, Claim, Expectation,
};
pub use diff::{bordered_hessian, gradient_fd, hessian_fd, DEFAULT_STEP};
pub use functions::{
    certify_bordered_minors, closed_form_bordered_hessian, Constants, FuncId, FuncSpec,
};
pub use logdet::{logdet_ratio, logdet_ratio_concavity, logdet_ratio_suite};
pub use minors::{leading_minors, minor_sign_test, INDETERMINATE_BELOW};
pub use sampling::{
    concavity_sample_test, family_sample_test, quasiconcavity_sample_test, Inequality,
};

/// Axis-aligned box; bounds may be infinite for domain checks but must be finite for sampling.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DomainBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl DomainBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() || lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(Error::EmptyFeasibleSet);
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `(lo, hi)` on every coordinate.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo; dim], alloc::vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Whether every coordinate lies strictly inside its interval, at least `pad[i]` away.
    pub fn contains_with_padding(&self, x: &[f64], pad: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(pad)
                .zip(self.lower.iter().zip(&self.upper))
                .all(|((v, p), (l, u))| v - p > *l && v + p < *u)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_with_padding(x, &alloc::vec![0.0; x.len()])
    }

    /// Uniform sample. Infinite bounds are rejected at sampling time.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| {
                if l.is_finite() && u.is_finite() {
                    Ok(l + (u - l) * rng.gen::<f64>())
                } else {
                    Err(Error::InvalidParameter {
                        name: "domain",
                        reason: "cannot sample an unbounded box",
                    })
                }
            })
            .collect()
    }
}

/// RNG for one trial: stream `trial` of the ChaCha8 generator keyed by `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Pass,
    Fail,
    /// No strict violation, but some quantity was too close to zero to sign.
    Indeterminate,
}

/// One failed check: the points involved, what was measured and its value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub points: Vec<Vec<f64>>,
    pub quantity: String,
    pub value: f64,
    /// Set when the quantity could not be signed rather than having the wrong sign.
    pub indeterminate: bool,
}

/// Outcome of a certificate. `verdict` is `Pass` exactly when `violations` is empty.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertResult {
    pub verdict: Verdict,
    pub trials: usize,
    /// Total failed checks; `violations` keeps only the first few.
    pub failures: usize,
    /// How many of `failures` were indeterminate rather than wrong-signed.
    pub indeterminate: usize,
    pub violations: Vec<Violation>,
    /// `(k, D_k)` for a single bordered-Hessian test.
    pub minor_signs: Option<Vec<(usize, f64)>>,
}

/// Violations kept per result.
pub const MAX_RECORDED: usize = 16;

impl CertResult {
    pub(crate) fn empty() -> Self {
        Self {
            verdict: Verdict::Pass,
            trials: 0,
            failures: 0,
            indeterminate: 0,
            violations: Vec::new(),
            minor_signs: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub(crate) fn record(&mut self, v: Violation) {
        self.failures += 1;
        if v.indeterminate {
            self.indeterminate += 1;
        }
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(v);
        }
    }

    /// Sets the verdict from the recorded violations.
    pub(crate) fn finish(mut self) -> Self {
        self.verdict = if self.failures == 0 {
            Verdict::Pass
        } else if self.failures == self.indeterminate {
            Verdict::Indeterminate
        } else {
            Verdict::Fail
        };
        self
    }

    /// Merges trial counts and violations of `other` into `self`.
    pub(crate) fn absorb(&mut self, other: CertResult) {
        self.trials += other.trials;
        let unrecorded = other.failures - other.violations.len();
        let unrecorded_indeterminate =
            other.indeterminate - other.violations.iter().filter(|v| v.indeterminate).count();
        for v in other.violations {
            self.record(v);
        }
        self.failures += unrecorded;
        self.indeterminate += unrecorded_indeterminate;
    }
}
