use alloc::string::ToString;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{trial_rng, CertResult, DomainBox, Violation};
use crate::error::Result;

/// Which inequality a sampling test checks on `mix = lambda x1 + (1 - lambda) x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    /// `f(mix) >= min(f(x1), f(x2))`
    QuasiConcave,
    /// `f(mix) >= lambda f(x1) + (1 - lambda) f(x2)`
    Concave,
}

/// Randomized check of `kind` for `f` on `domain`.
///
/// A trial fails when the inequality is missed by more than `tol * max(1, |rhs|)` or
/// any of the three values is not finite.
pub fn quasiconcavity_sample_test<F>(
    f: F,
    domain: &DomainBox,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CertResult>
where
    F: FnMut(&[f64]) -> f64,
{
    plain(Inequality::QuasiConcave, f, domain, trials, seed, tol)
}

pub fn concavity_sample_test<F>(
    f: F,
    domain: &DomainBox,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CertResult>
where
    F: FnMut(&[f64]) -> f64,
{
    plain(Inequality::Concave, f, domain, trials, seed, tol)
}

fn plain<F>(
    kind: Inequality,
    mut f: F,
    domain: &DomainBox,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CertResult>
where
    F: FnMut(&[f64]) -> f64,
{
    family_sample_test(kind, domain, trials, seed, tol, |_| (), |_, x| f(x))
}

/// Like [`quasiconcavity_sample_test`], but each trial first draws parameters with
/// `draw` (e.g. a random geometry or a fixed correlation) and tests `x -> f(params, x)`.
pub fn family_sample_test<P, G, F>(
    kind: Inequality,
    domain: &DomainBox,
    trials: usize,
    seed: u64,
    tol: f64,
    mut draw: G,
    mut f: F,
) -> Result<CertResult>
where
    G: FnMut(&mut ChaCha8Rng) -> P,
    F: FnMut(&P, &[f64]) -> f64,
{
    let mut out = CertResult::empty();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let params = draw(&mut rng);
        let x1 = domain.sample(&mut rng)?;
        let x2 = domain.sample(&mut rng)?;
        let lambda: f64 = rng.gen();
        let mix: Vec<f64> = x1
            .iter()
            .zip(&x2)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        let (f1, f2, fm) = (f(&params, &x1), f(&params, &x2), f(&params, &mix));
        out.trials += 1;
        let rhs = match kind {
            Inequality::QuasiConcave => f1.min(f2),
            Inequality::Concave => lambda * f1 + (1.0 - lambda) * f2,
        };
        let deficit = rhs - fm;
        let finite = f1.is_finite() && f2.is_finite() && fm.is_finite();
        if !finite || deficit > tol * rhs.abs().max(1.0) {
            let quantity = match (finite, kind) {
                (false, _) => "non-finite value",
                (true, Inequality::QuasiConcave) => "min(f(x1), f(x2)) - f(mix)",
                (true, Inequality::Concave) => "lambda f(x1) + (1 - lambda) f(x2) - f(mix)",
            };
            out.record(Violation {
                points: alloc::vec![x1, x2, mix],
                quantity: quantity.to_string(),
                value: deficit,
                indeterminate: false,
            });
        }
    }
    Ok(out.finish())
}
