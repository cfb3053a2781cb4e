use alloc::vec;

use super::diff::{bordered_hessian, DEFAULT_STEP};
use super::minors::minor_sign_test_at;
use super::{trial_rng, CertResult, DomainBox};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::math::{ln, sqrt};

/// Functions with known (quasi-)concavity. The first five are the building blocks
/// whose bordered Hessians are certified; the rest are the rate terms expressed in the
/// variables their claims are about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FuncId {
    /// `ab`
    Ab,
    /// `ab / (a + b + k)`
    AbOverSumK,
    /// `k1 / a + 2 sqrt(k2 b / a)`
    K1OverAPlusSqrt,
    /// `-(1 - b)(k1 + k2 / a)`
    NegOneMinusB,
    /// `a + b + 2 sqrt(abc)`
    CoherentSum,
    /// Broadcast-cut SNR over `(rho^2, SNR_sj, SNR_rj)`.
    FJ,
    /// Cut-set multiple-access SNR over `(rho^2, SNR_sj, SNR_sr)`.
    GJ,
    /// Decode-forward relay SNR over `(rho^2, SNR_sr)`.
    GStarJ,
    /// Quantize-forward SNR over `(SNR_rj, SNR_sr)` at fixed `SNR_sj`.
    HJ,
    /// `ln(det Q / Q_11)` over `(q11, q12, q22)`.
    LogdetRatio,
}

impl FuncId {
    pub const ALL: [FuncId; 10] = [
        FuncId::Ab,
        FuncId::AbOverSumK,
        FuncId::K1OverAPlusSqrt,
        FuncId::NegOneMinusB,
        FuncId::CoherentSum,
        FuncId::FJ,
        FuncId::GJ,
        FuncId::GStarJ,
        FuncId::HJ,
        FuncId::LogdetRatio,
    ];

    /// The five building blocks with closed-form bordered Hessians.
    pub const BUILDING_BLOCKS: [FuncId; 5] = [
        FuncId::Ab,
        FuncId::AbOverSumK,
        FuncId::K1OverAPlusSqrt,
        FuncId::NegOneMinusB,
        FuncId::CoherentSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FuncId::Ab => "ab",
            FuncId::AbOverSumK => "ab_over_sum_k",
            FuncId::K1OverAPlusSqrt => "k1_over_a_plus_sqrt",
            FuncId::NegOneMinusB => "neg_one_minus_b",
            FuncId::CoherentSum => "coherent_sum",
            FuncId::FJ => "f_j",
            FuncId::GJ => "g_j",
            FuncId::GStarJ => "g_star_j",
            FuncId::HJ => "h_j",
            FuncId::LogdetRatio => "logdet_ratio",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.name() == name)
    }

    pub fn is_building_block(self) -> bool {
        Self::BUILDING_BLOCKS.contains(&self)
    }

    pub fn arity(self) -> usize {
        match self {
            FuncId::CoherentSum | FuncId::FJ | FuncId::GJ | FuncId::LogdetRatio => 3,
            _ => 2,
        }
    }
}

/// Constants used by the parametrized functions. `c` is the fixed third coordinate
/// used only by the closed-form matrix of [`FuncId::Ab`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Constants {
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    pub c: f64,
    pub snr_sj: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            k: 1.0,
            k1: 1.0,
            k2: 1.0,
            c: 1.0,
            snr_sj: 1.0,
        }
    }
}

/// A function together with its constants, definition domain and default sampling box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuncSpec {
    pub id: FuncId,
    pub constants: Constants,
}

impl FuncSpec {
    pub fn new(id: FuncId, constants: Constants) -> Result<Self> {
        let c = constants;
        let positive = [c.k, c.k1, c.k2, c.c];
        if positive.iter().any(|v| !(*v > 0.0) || !v.is_finite()) || !(c.snr_sj >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "constants",
                reason: "k, k1, k2 and c must be positive",
            });
        }
        Ok(Self { id, constants })
    }

    pub fn arity(&self) -> usize {
        self.id.arity()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let c = &self.constants;
        match self.id {
            FuncId::Ab => x[0] * x[1],
            FuncId::AbOverSumK => x[0] * x[1] / (x[0] + x[1] + c.k),
            FuncId::K1OverAPlusSqrt => c.k1 / x[0] + 2.0 * sqrt(c.k2 * x[1] / x[0]),
            FuncId::NegOneMinusB => -(1.0 - x[1]) * (c.k1 + c.k2 / x[0]),
            FuncId::CoherentSum => x[0] + x[1] + 2.0 * sqrt(x[0] * x[1] * x[2]),
            FuncId::FJ => x[1] + x[2] + 2.0 * sqrt(x[0] * x[1] * x[2]),
            FuncId::GJ => (1.0 - x[0]) * (x[1] + x[2]),
            FuncId::GStarJ => (1.0 - x[0]) * x[1],
            FuncId::HJ => c.snr_sj + x[0] * x[1] / (x[0] + x[1] + c.snr_sj + 1.0),
            FuncId::LogdetRatio => ln(x[0] * x[2] - x[1] * x[1]) - ln(x[0]),
        }
    }

    /// Open set on which the function is defined and smooth.
    pub fn domain(&self) -> DomainBox {
        let inf = f64::INFINITY;
        let (lower, upper) = match self.id {
            FuncId::NegOneMinusB => (vec![0.0, -inf], vec![inf, inf]),
            FuncId::LogdetRatio => (vec![0.0, -inf, 0.0], vec![inf, inf, inf]),
            id => (vec![0.0; id.arity()], vec![inf; id.arity()]),
        };
        DomainBox::new(lower, upper).expect("static domain")
    }

    /// Default sampling box: `(0.01, 10)` per coordinate, `rho^2` in `(0.01, 0.99)`,
    /// and `b < 1` for [`FuncId::NegOneMinusB`], where its minor pattern needs it.
    pub fn sample_box(&self) -> DomainBox {
        let (lo, hi) = (1e-2, 10.0);
        let (lower, upper) = match self.id {
            FuncId::NegOneMinusB => (vec![lo, lo], vec![hi, 0.99]),
            FuncId::FJ | FuncId::GJ => (vec![lo, lo, lo], vec![0.99, hi, hi]),
            FuncId::GStarJ => (vec![lo, lo], vec![0.99, hi]),
            FuncId::LogdetRatio => (vec![1.0, -1.0, 1.0], vec![hi, 1.0, hi]),
            id => (vec![lo; id.arity()], vec![hi; id.arity()]),
        };
        DomainBox::new(lower, upper).expect("static box")
    }
}

/// Closed-form bordered Hessians of the five building blocks. For [`FuncId::Ab`] the
/// matrix is that of `abc` in `(a, b)` at the fixed scale `constants.c`; its minors
/// have the same signs as those of `ab`.
pub fn closed_form_bordered_hessian(
    id: FuncId,
    x: &[f64],
    constants: &Constants,
) -> Option<Matrix> {
    let k = constants;
    Some(match id {
        FuncId::Ab => {
            let (a, b, c) = (x[0], x[1], k.c);
            Matrix::from_rows(&[&[0.0, b * c, a * c], &[b * c, 0.0, c], &[a * c, c, 0.0]])
        }
        FuncId::AbOverSumK => {
            let (a, b) = (x[0], x[1]);
            let s = a + b + k.k;
            let (s2, s3) = (s * s, s * s * s);
            let ga = b * (b + k.k) / s2;
            let gb = a * (a + k.k) / s2;
            let cross = (2.0 * a * b + s * k.k) / s3;
            Matrix::from_rows(&[
                &[0.0, ga, gb],
                &[ga, -2.0 * b * (b + k.k) / s3, cross],
                &[gb, cross, -2.0 * a * (a + k.k) / s3],
            ])
        }
        FuncId::K1OverAPlusSqrt => {
            let (a, b) = (x[0], x[1]);
            let root = sqrt(k.k2 * a * b);
            let ga = -(k.k1 + root) / (a * a);
            let gb = sqrt(k.k2 / (a * b));
            let cross = -sqrt(k.k2) / (2.0 * a * sqrt(a) * sqrt(b));
            Matrix::from_rows(&[
                &[0.0, ga, gb],
                &[ga, (4.0 * k.k1 + 3.0 * root) / (2.0 * a * a * a), cross],
                &[gb, cross, -sqrt(k.k2) / (2.0 * b * sqrt(b) * sqrt(a))],
            ])
        }
        FuncId::NegOneMinusB => {
            let (a, b) = (x[0], x[1]);
            let ga = (1.0 - b) * k.k2 / (a * a);
            let gb = k.k1 + k.k2 / a;
            Matrix::from_rows(&[
                &[0.0, ga, gb],
                &[ga, -2.0 * (1.0 - b) * k.k2 / (a * a * a), -k.k2 / (a * a)],
                &[gb, -k.k2 / (a * a), 0.0],
            ])
        }
        FuncId::CoherentSum => {
            let (a, b, c) = (x[0], x[1], x[2]);
            let ga = 1.0 + sqrt(b * c / a);
            let gb = 1.0 + sqrt(a * c / b);
            let gc = sqrt(a * b / c);
            Matrix::from_rows(&[
                &[0.0, ga, gb, gc],
                &[
                    ga,
                    -sqrt(b * c) / (2.0 * a * sqrt(a)),
                    0.5 * sqrt(c / (a * b)),
                    0.5 * sqrt(b / (a * c)),
                ],
                &[
                    gb,
                    0.5 * sqrt(c / (a * b)),
                    -sqrt(a * c) / (2.0 * b * sqrt(b)),
                    0.5 * sqrt(a / (b * c)),
                ],
                &[
                    gc,
                    0.5 * sqrt(b / (a * c)),
                    0.5 * sqrt(a / (b * c)),
                    -sqrt(a * b) / (2.0 * c * sqrt(c)),
                ],
            ])
        }
        _ => return None,
    })
}

/// Runs the bordered-Hessian minor test at `trials` points drawn uniformly from the
/// default sampling box of a building block. Passes when the pattern holds everywhere.
pub fn certify_bordered_minors(
    id: FuncId,
    constants: Constants,
    trials: usize,
    seed: u64,
) -> Result<CertResult> {
    if !id.is_building_block() {
        return Err(Error::InvalidParameter {
            name: "id",
            reason: "only the five building blocks have a minor certificate",
        });
    }
    let spec = FuncSpec::new(id, constants)?;
    let (domain, sample) = (spec.domain(), spec.sample_box());
    let f = |x: &[f64]| spec.eval(x);
    let mut out = CertResult::empty();
    for t in 0..trials {
        let x = sample.sample(&mut trial_rng(seed, t))?;
        let b = bordered_hessian(&f, &domain, &x, DEFAULT_STEP)?;
        out.absorb(minor_sign_test_at(&b, &x));
    }
    Ok(out.finish())
}

#[cfg(test)]
mod tests {
    use super::super::minors::{leading_minors, minor_sign_test};
    use super::*;

    fn spec(id: FuncId) -> FuncSpec {
        FuncSpec::new(id, Constants::default()).unwrap()
    }

    #[test]
    fn coherent_sum_matrix_at_unit_point() {
        let s = spec(FuncId::CoherentSum);
        let x = [1.0, 1.0, 1.0];
        let fd = bordered_hessian(&|x: &[f64]| s.eval(x), &s.domain(), &x, DEFAULT_STEP).unwrap();
        let closed =
            closed_form_bordered_hessian(FuncId::CoherentSum, &x, &Constants::default()).unwrap();
        assert_eq!(&closed.row(0)[1..], &[2.0, 2.0, 1.0]);
        for (a, b) in fd.as_slice().iter().zip(closed.as_slice()) {
            assert!((a - b).abs() < 1e-6);
        }
        let d = leading_minors(&closed);
        assert!((d[0].1 + 4.0).abs() < 1e-12);
        assert!((d[1].1 - 8.0).abs() < 1e-12);
        assert!((d[2].1 + 8.0).abs() < 1e-12);
    }

    #[test]
    fn finite_differences_match_closed_forms() {
        let c = Constants {
            k: 2.0,
            k1: 0.5,
            k2: 3.0,
            c: 1.0,
            snr_sj: 1.0,
        };
        for id in FuncId::BUILDING_BLOCKS {
            let s = FuncSpec::new(id, c).unwrap();
            let x: alloc::vec::Vec<f64> = [1.3, 0.4, 2.2][..id.arity()].to_vec();
            let fd =
                bordered_hessian(&|x: &[f64]| s.eval(x), &s.domain(), &x, DEFAULT_STEP).unwrap();
            let closed = closed_form_bordered_hessian(id, &x, &c).unwrap();
            for (a, b) in fd.as_slice().iter().zip(closed.as_slice()) {
                assert!(
                    (a - b).abs() < 1e-6 * b.abs().max(1.0),
                    "{}: {a} vs {b}",
                    id.name()
                );
            }
        }
    }

    #[test]
    fn product_and_scaled_product_share_signs() {
        let x = [0.8, 2.5];
        let c = Constants {
            c: 3.0,
            ..Constants::default()
        };
        let closed = minor_sign_test(&closed_form_bordered_hessian(FuncId::Ab, &x, &c).unwrap());
        assert!(closed.passed());
        let s = spec(FuncId::Ab);
        let fd = bordered_hessian(&|x: &[f64]| s.eval(x), &s.domain(), &x, DEFAULT_STEP).unwrap();
        let d = leading_minors(&fd);
        assert!((d[0].1 + 2.5 * 2.5).abs() < 1e-6 && (d[1].1 - 2.0 * 0.8 * 2.5).abs() < 1e-6);
    }

    #[test]
    fn unnegated_one_minus_b_fails_pattern() {
        let s = spec(FuncId::NegOneMinusB);
        let pos = |x: &[f64]| -s.eval(x);
        let b = bordered_hessian(&pos, &s.domain(), &[1.5, 0.3], DEFAULT_STEP).unwrap();
        assert!(!minor_sign_test(&b).passed());
    }

    #[test]
    fn certificates_pass_for_building_blocks() {
        for id in FuncId::BUILDING_BLOCKS {
            let r = certify_bordered_minors(id, Constants::default(), 200, 1).unwrap();
            assert!(r.passed(), "{}: {:?}", id.name(), r.violations.first());
            assert_eq!(r.trials, 200);
        }
        assert!(certify_bordered_minors(FuncId::HJ, Constants::default(), 1, 1).is_err());
    }

    #[test]
    fn names_round_trip() {
        for id in FuncId::ALL {
            assert_eq!(FuncId::from_name(id.name()), Some(id));
        }
    }
}
