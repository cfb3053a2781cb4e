use alloc::string::ToString;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{trial_rng, CertResult, Violation};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// `ln det Q - ln det Q[minor]`, the log-det ratio of `Q` to one of its principal
/// submatrices. `None` when either matrix is not positive definite.
pub fn logdet_ratio(q: &Matrix, minor: &[usize]) -> Option<f64> {
    let full = q.cholesky_logdet()?;
    let sub = if minor.is_empty() {
        0.0
    } else {
        q.principal_submatrix(minor).cholesky_logdet()?
    };
    Some(full - sub)
}

/// `A A^T + 0.1 I` with `A` uniform on `[-1, 1]^(dim x dim)`.
fn random_pd(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let a: Vec<f64> = (0..dim * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut q = Matrix::identity(dim);
    for i in 0..dim {
        for j in 0..dim {
            let dot: f64 = (0..dim).map(|k| a[i * dim + k] * a[j * dim + k]).sum();
            q[(i, j)] = dot + if i == j { 0.1 } else { 0.0 };
        }
    }
    q
}

/// Concavity of the log-det ratio on random positive-definite pairs. With `negate`
/// the (convex) negative is tested instead, which must fail.
pub fn logdet_ratio_concavity(
    dim: usize,
    minor: &[usize],
    negate: bool,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CertResult> {
    if !(1..=4).contains(&dim) {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: "matrix dimension must be 1 to 4",
        });
    }
    if minor.iter().any(|&i| i >= dim) || minor.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter {
            name: "minor",
            reason: "indices must be increasing and below dim",
        });
    }
    let sign = if negate { -1.0 } else { 1.0 };
    let f = |q: &Matrix| logdet_ratio(q, minor).map(|v| sign * v);
    let mut out = CertResult::empty();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let q1 = random_pd(dim, &mut rng);
        let q2 = random_pd(dim, &mut rng);
        let lambda: f64 = rng.gen();
        let mix = q1.mix(lambda, &q2, 1.0 - lambda);
        out.trials += 1;
        let (f1, f2, fm) = match (f(&q1), f(&q2), f(&mix)) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => {
                out.record(Violation {
                    points: alloc::vec![q1.as_slice().to_vec(), q2.as_slice().to_vec()],
                    quantity: "not positive definite".to_string(),
                    value: f64::NAN,
                    indeterminate: true,
                });
                continue;
            }
        };
        let rhs = lambda * f1 + (1.0 - lambda) * f2;
        if rhs - fm > tol * rhs.abs().max(1.0) {
            out.record(Violation {
                points: alloc::vec![
                    q1.as_slice().to_vec(),
                    q2.as_slice().to_vec(),
                    mix.as_slice().to_vec()
                ],
                quantity: "lambda f(Q1) + (1 - lambda) f(Q2) - f(mix)".to_string(),
                value: rhs - fm,
                indeterminate: false,
            });
        }
    }
    Ok(out.finish())
}

/// Runs [`logdet_ratio_concavity`] for every proper principal index set of every
/// dimension from 1 to `max_dim`, returning `(dim, minor, result)`.
pub fn logdet_ratio_suite(
    max_dim: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<(usize, Vec<usize>, CertResult)>> {
    let mut out = Vec::new();
    for dim in 1..=max_dim {
        for mask in 0..(1usize << dim) - 1 {
            let minor: Vec<usize> = (0..dim).filter(|i| mask & (1 << i) != 0).collect();
            let r = logdet_ratio_concavity(dim, &minor, false, trials, seed, tol)?;
            out.push((dim, minor, r));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::Verdict;
    use super::*;

    #[test]
    fn scalar_case_is_log() {
        assert!(logdet_ratio_concavity(1, &[], false, 1000, 1, 1e-9)
            .unwrap()
            .passed());
        let q = Matrix::from_rows(&[&[2.0]]);
        assert!((logdet_ratio(&q, &[]).unwrap() - crate::math::ln(2.0)).abs() < 1e-15);
    }

    #[test]
    fn conditional_form_passes_and_negation_fails() {
        assert!(logdet_ratio_concavity(3, &[0], false, 1000, 2, 1e-9)
            .unwrap()
            .passed());
        assert_eq!(
            logdet_ratio_concavity(3, &[0], true, 1000, 2, 1e-9)
                .unwrap()
                .verdict,
            Verdict::Fail
        );
    }

    #[test]
    fn rejects_bad_minor() {
        assert!(logdet_ratio_concavity(2, &[2], false, 1, 1, 1e-9).is_err());
        assert!(logdet_ratio_concavity(5, &[], false, 1, 1, 1e-9).is_err());
    }
}
