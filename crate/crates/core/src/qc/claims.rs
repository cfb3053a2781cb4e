use alloc::string::ToString;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::diff::{hessian_fd, DEFAULT_STEP};
use super::functions::{Constants, FuncId, FuncSpec};
use super::sampling::{family_sample_test, Inequality};
use super::{trial_rng, CertResult, DomainBox, Violation};
use crate::error::Result;
use crate::geometry::{snr_vector, ChannelParams, LinkGains, NodeLayout, Position, SnrVector};
use crate::math::{ln_1p, powf, sqrt};
use crate::optimize::{maximize_rho, RhoObjective};
use crate::rates::{
    rate_cs, rate_cs_cov, rate_df, rate_dt, rate_qf, Correlation, CovMatrix2, RateMode,
};

/// What a claim is expected to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Expectation {
    Holds,
    /// A known counterexample; the test must find a violation.
    Fails,
    /// Conjectured only; the result is reported, not judged.
    Open,
}

/// A named property with its test outcome.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Claim {
    pub name: &'static str,
    pub statement: &'static str,
    pub expectation: Expectation,
    pub result: CertResult,
}

impl Claim {
    pub fn as_expected(&self) -> bool {
        match self.expectation {
            Expectation::Holds => self.result.passed(),
            Expectation::Fails => self.result.verdict == super::Verdict::Fail,
            Expectation::Open => true,
        }
    }
}

const N: usize = 3;
const SNR_MAX: f64 = 10.0;
const POS_HALF_WIDTH: f64 = 5.0;
const RHO_TOL: f64 = 1e-12;

fn snr(flat: &[f64]) -> SnrVector {
    SnrVector::from_slice(flat).expect("sampled SNRs are valid")
}

fn rho_of(c: f64) -> Correlation {
    Correlation::new(sqrt(c.clamp(0.0, 1.0))).expect("clamped")
}

fn cube(dim: usize, lo: f64, hi: f64) -> DomainBox {
    DomainBox::cube(dim, lo, hi).expect("static box")
}

/// `[0, 1]` for `rho^2` followed by `rest` copies of `(lo, hi)`.
fn with_rho2(rest: usize, lo: f64, hi: f64) -> DomainBox {
    let mut lower = alloc::vec![0.0];
    let mut upper = alloc::vec![1.0];
    lower.extend(core::iter::repeat_n(lo, rest));
    upper.extend(core::iter::repeat_n(hi, rest));
    DomainBox::new(lower, upper).expect("static box")
}

fn draw_snr(rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..2 * N + 1)
        .map(|_| rng.gen_range(0.0..SNR_MAX))
        .collect()
}

/// Source at the origin, `N` destinations uniform in the position box.
fn draw_geometry(rng: &mut ChaCha8Rng) -> Vec<Position> {
    (0..N)
        .map(|_| {
            let p = [
                rng.gen_range(-POS_HALF_WIDTH..POS_HALF_WIDTH),
                rng.gen_range(-POS_HALF_WIDTH..POS_HALF_WIDTH),
            ];
            Position::new(&p).expect("finite")
        })
        .collect()
}

fn snr_at(dests: &[Position], relay: &[f64]) -> Option<SnrVector> {
    let layout = NodeLayout::new(
        Position::new(&[0.0, 0.0]).ok()?,
        Position::new(relay).ok()?,
        dests.to_vec(),
    )
    .ok()?;
    snr_vector(&layout, &ChannelParams::unit()).ok()
}

fn df_coherent(s: &SnrVector, mode: RateMode) -> f64 {
    maximize_rho(RhoObjective::DecodeForward, s, mode, RHO_TOL).map_or(f64::NAN, |r| r.value)
}

/// Sampling tests of the concavity and quasi-concavity claims for the rate bounds,
/// with `N = 3` destinations and SNRs in `[0, 10]`. Position claims use a random
/// planar geometry per trial (source at the origin, path-loss exponent 2).
pub fn rate_bound_claims(mode: RateMode, trials: usize, seed: u64, tol: f64) -> Result<Vec<Claim>> {
    use Expectation::*;
    use Inequality::*;
    let m = mode;
    let snr_box = cube(2 * N + 1, 0.0, SNR_MAX);
    let rho_box = cube(1, 0.0, 1.0);
    let pos_box = cube(2, -POS_HALF_WIDTH, POS_HALF_WIDTH);
    let draw_rho = |rng: &mut ChaCha8Rng| rho_of(rng.gen::<f64>());
    let draw_gains = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..2 * N + 1).map(|_| rng.gen_range(0.0..2.0)).collect()
    };
    // SNRs from per-link gains and powers: source links scale with P_s, relay links with P_r.
    let powered = |g: &[f64], p_s: f64, p_r: f64| -> SnrVector {
        let flat: Vec<f64> = g
            .iter()
            .enumerate()
            .map(|(i, v)| v * if i <= N { p_s } else { p_r })
            .collect();
        snr(&flat)
    };

    let mut claims = Vec::new();
    let mut push = |name, statement, expectation, result| {
        claims.push(Claim {
            name,
            statement,
            expectation,
            result,
        })
    };

    push(
        "cs_concave_in_rho",
        "cut-set rate is concave in rho for fixed SNRs",
        Holds,
        family_sample_test(Concave, &rho_box, trials, seed, tol, draw_snr, |s, x| {
            rate_cs(Correlation::new(x[0]).unwrap(), &snr(s), m).value
        })?,
    );
    push(
        "cs_concave_in_snr",
        "cut-set rate is concave in the SNR vector for fixed rho",
        Holds,
        family_sample_test(Concave, &snr_box, trials, seed, tol, draw_rho, |r, x| {
            rate_cs(*r, &snr(x), m).value
        })?,
    );
    push(
        "cs_quasiconcave_in_rho2_snr",
        "cut-set rate is quasi-concave in (rho^2, SNRs)",
        Holds,
        family_sample_test(
            QuasiConcave,
            &with_rho2(2 * N + 1, 0.0, SNR_MAX),
            trials,
            seed,
            tol,
            |_| (),
            |_, x| rate_cs(rho_of(x[0]), &snr(&x[1..]), m).value,
        )?,
    );
    push(
        "cs_quasiconcave_in_rho2_power",
        "cut-set rate is quasi-concave in (rho^2, P_s, P_r)",
        Holds,
        family_sample_test(
            QuasiConcave,
            &with_rho2(2, 0.0, SNR_MAX),
            trials,
            seed,
            tol,
            draw_gains,
            |g, x| rate_cs(rho_of(x[0]), &powered(g, x[1], x[2]), m).value,
        )?,
    );
    push(
        "df_concave_in_rho",
        "decode-forward rate is concave in rho for fixed SNRs",
        Holds,
        family_sample_test(Concave, &rho_box, trials, seed, tol, draw_snr, |s, x| {
            rate_df(Correlation::new(x[0]).unwrap(), &snr(s), m).value
        })?,
    );
    push(
        "df_concave_in_snr",
        "decode-forward rate is concave in the SNR vector for fixed rho",
        Holds,
        family_sample_test(Concave, &snr_box, trials, seed, tol, draw_rho, |r, x| {
            rate_df(*r, &snr(x), m).value
        })?,
    );
    push(
        "df_quasiconcave_in_rho2_snr",
        "decode-forward rate is quasi-concave in (rho^2, SNRs)",
        Holds,
        family_sample_test(
            QuasiConcave,
            &with_rho2(2 * N + 1, 0.0, SNR_MAX),
            trials,
            seed,
            tol,
            |_| (),
            |_, x| rate_df(rho_of(x[0]), &snr(&x[1..]), m).value,
        )?,
    );
    push(
        "df_quasiconcave_in_rho2_power",
        "decode-forward rate is quasi-concave in (rho^2, P_s, P_r)",
        Holds,
        family_sample_test(
            QuasiConcave,
            &with_rho2(2, 0.0, SNR_MAX),
            trials,
            seed,
            tol,
            draw_gains,
            |g, x| rate_df(rho_of(x[0]), &powered(g, x[1], x[2]), m).value,
        )?,
    );
    push(
        "dt_concave_in_snr",
        "direct-transmission rate is concave in the SNR vector",
        Holds,
        family_sample_test(
            Concave,
            &snr_box,
            trials,
            seed,
            tol,
            |_| (),
            |_, x| rate_dt(&snr(x), m).value,
        )?,
    );
    push(
        "qf_quasiconcave_in_relay_snrs",
        "quantize-forward rate is quasi-concave in (SNR_sr, SNR_rj) with SNR_sj fixed",
        Holds,
        family_sample_test(
            QuasiConcave,
            &cube(N + 1, 0.0, SNR_MAX),
            trials,
            seed,
            tol,
            |rng| -> Vec<f64> { (0..N).map(|_| rng.gen_range(0.0..SNR_MAX)).collect() },
            |direct, x| {
                let mut flat = alloc::vec![x[0]];
                flat.extend_from_slice(direct);
                flat.extend_from_slice(&x[1..]);
                rate_qf(&snr(&flat), m).value
            },
        )?,
    );
    push(
        "cs_quasiconcave_in_position",
        "cut-set rate at fixed rho is quasi-concave in the relay position",
        Holds,
        family_sample_test(
            QuasiConcave,
            &pos_box,
            trials,
            seed,
            tol,
            |rng| (draw_rho(rng), draw_geometry(rng)),
            |(r, d), x| snr_at(d, x).map_or(f64::NAN, |s| rate_cs(*r, &s, m).value),
        )?,
    );
    push(
        "fj_quasiconcave_in_rho2_position",
        "the broadcast-cut SNR of one destination is quasi-concave in (rho^2, relay position)",
        Holds,
        family_sample_test(
            QuasiConcave,
            &with_rho2(2, -POS_HALF_WIDTH, POS_HALF_WIDTH),
            trials,
            seed,
            tol,
            draw_geometry,
            |d, x| {
                snr_at(d, &x[1..]).map_or(f64::NAN, |s| {
                    crate::rates::f_j(rho_of(x[0]), &s, 0).unwrap_or(f64::NAN)
                })
            },
        )?,
    );
    push(
        "df_quasiconcave_in_rho2_position",
        "decode-forward rate is quasi-concave in (rho^2, relay position)",
        Holds,
        family_sample_test(
            QuasiConcave,
            &with_rho2(2, -POS_HALF_WIDTH, POS_HALF_WIDTH),
            trials,
            seed,
            tol,
            draw_geometry,
            |d, x| snr_at(d, &x[1..]).map_or(f64::NAN, |s| rate_df(rho_of(x[0]), &s, m).value),
        )?,
    );
    push(
        "df_coherent_quasiconcave_in_position",
        "decode-forward rate with rho maximized is quasi-concave in the relay position",
        Holds,
        family_sample_test(
            QuasiConcave,
            &pos_box,
            trials,
            seed,
            tol,
            draw_geometry,
            |d, x| snr_at(d, x).map_or(f64::NAN, |s| df_coherent(&s, m)),
        )?,
    );
    push(
        "cs_coherent_quasiconcave_in_position",
        "cut-set rate with rho maximized is quasi-concave in the relay position (conjecture)",
        Open,
        family_sample_test(
            QuasiConcave,
            &pos_box,
            trials,
            seed,
            tol,
            draw_geometry,
            |d, x| {
                snr_at(d, x).map_or(f64::NAN, |s| {
                    maximize_rho(RhoObjective::CutSet, &s, m, RHO_TOL).map_or(f64::NAN, |r| r.value)
                })
            },
        )?,
    );
    Ok(claims)
}

/// The multiple-access term of the cut-set bound written in `(rho^2, D^alpha)`,
/// `(1 - rho^2)(k_s + k_r / D^alpha)` with unit constants. It is quasi-convex, not
/// quasi-concave, so the sampling test must find a violation.
pub fn relay_cut_counterexample(trials: usize, seed: u64, tol: f64) -> Result<Claim> {
    let bounds = DomainBox::new(alloc::vec![0.0, 1e-2], alloc::vec![1.0, 10.0])?;
    let result = family_sample_test(
        Inequality::QuasiConcave,
        &bounds,
        trials,
        seed,
        tol,
        |_| (),
        |_, x| (1.0 - x[0]) * (1.0 + 1.0 / x[1]),
    )?;
    Ok(Claim {
        name: "relay_cut_not_quasiconcave",
        statement: "(1 - rho^2)(k_s + k_r / D^alpha) is not quasi-concave in (rho^2, D^alpha)",
        expectation: Expectation::Fails,
        result,
    })
}

/// Quasi-concavity of functions built with the five composition rules.
pub fn composition_rule_checks(trials: usize, seed: u64, tol: f64) -> Result<Vec<Claim>> {
    use Expectation::Holds;
    use Inequality::QuasiConcave;
    let k = Constants::default();
    let ab = FuncSpec::new(FuncId::Ab, k)?;
    let ratio = FuncSpec::new(FuncId::AbOverSumK, k)?;
    let coherent = FuncSpec::new(FuncId::CoherentSum, k)?;
    let positive2 = cube(2, 1e-2, 10.0);
    let mut claims = Vec::new();
    let mut push = |name, statement, result| {
        claims.push(Claim {
            name,
            statement,
            expectation: Holds,
            result,
        })
    };

    push(
        "affine",
        "k1 f + k2 with k1 >= 0",
        family_sample_test(
            QuasiConcave,
            &positive2,
            trials,
            seed,
            tol,
            |_| (),
            |_, x| 3.0 * ratio.eval(x) - 2.0,
        )?,
    );
    push(
        "minimum",
        "pointwise minimum",
        family_sample_test(
            QuasiConcave,
            &positive2,
            trials,
            seed,
            tol,
            |_| (),
            |_, x| ab.eval(x).min(ratio.eval(x)),
        )?,
    );
    push(
        "nondecreasing_outer",
        "g(f) with g nondecreasing (capacity of the coherent sum)",
        family_sample_test(
            QuasiConcave,
            &cube(3, 1e-2, 10.0),
            trials,
            seed,
            tol,
            |_| (),
            |_, x| 0.5 * ln_1p(coherent.eval(x)),
        )?,
    );
    push(
        "supremum",
        "supremum over a convex parameter set (decode-forward maximized over rho)",
        family_sample_test(
            QuasiConcave,
            &cube(2 * N + 1, 0.0, SNR_MAX),
            trials,
            seed,
            tol,
            |_| (),
            |_, x| df_coherent(&snr(x), RateMode::Exact),
        )?,
    );
    // Destination at (3, 0), source at the origin: SNR_sj = 1/9.
    let direct = 1.0 / 9.0;
    push(
        "convex_inner",
        "f(g(a), b) with g convex and f nonincreasing in its first argument",
        family_sample_test(
            QuasiConcave,
            &with_rho2(2, -POS_HALF_WIDTH, POS_HALF_WIDTH),
            trials,
            seed,
            tol,
            |_| (),
            |_, x| {
                let d2 = (x[1] - 3.0) * (x[1] - 3.0) + x[2] * x[2];
                let relay = 1.0 / d2;
                direct + relay + 2.0 * sqrt(x[0] * direct * relay)
            },
        )?,
    );
    Ok(claims)
}

/// Finite-difference Hessian of the broadcast-cut SNR over `(SNR_sj, SNR_rj)` at random
/// points in `[0.1, 10]^2` with `rho` in `[0.1, 1]`: the trace must match
/// `-(rho/2)(a^2 + b^2)/(ab)^(3/2)` within relative `1e-4` and the determinant must
/// vanish (`|det| < 1e-6 ||H||^2`), i.e. one zero and one negative eigenvalue.
pub fn coherent_sum_eigen_check(points: usize, seed: u64) -> Result<CertResult> {
    let domain = cube(2, 0.0, f64::INFINITY);
    let mut out = CertResult::empty();
    for t in 0..points {
        let mut rng = trial_rng(seed, t);
        let (a, b) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let rho: f64 = rng.gen_range(0.1..1.0);
        let f = |x: &[f64]| x[0] + x[1] + 2.0 * rho * sqrt(x[0] * x[1]);
        let h = hessian_fd(&f, &domain, &[a, b], DEFAULT_STEP)?;
        out.trials += 1;
        let expected = -(rho / 2.0) * (a * a + b * b) / powf(a * b, 1.5);
        let rel = (h.trace() - expected).abs() / expected.abs();
        if !(rel <= 1e-4) {
            out.record(Violation {
                points: alloc::vec![alloc::vec![a, b, rho]],
                quantity: "relative trace error".to_string(),
                value: rel,
                indeterminate: false,
            });
        }
        let norm = h.frobenius_norm();
        let det_ratio = h.det().abs() / (norm * norm);
        if !(det_ratio < 1e-6) {
            out.record(Violation {
                points: alloc::vec![alloc::vec![a, b, rho]],
                quantity: "|det H| / ||H||^2".to_string(),
                value: det_ratio,
                indeterminate: false,
            });
        }
    }
    Ok(out.finish())
}

/// Compares the covariance form of the cut-set bound with the correlation form on
/// random gains (`(0.05, 3)`), powers (`(0.1, 10)`), correlations and 1 to 4 destinations.
pub fn cs_equivalence_check(
    trials: usize,
    seed: u64,
    tol: f64,
    mode: RateMode,
) -> Result<CertResult> {
    let mut out = CertResult::empty();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let n = rng.gen_range(1..=4usize);
        let mut gain = || rng.gen_range(0.05..3.0);
        let a_sr = gain();
        let a_s: Vec<f64> = (0..n).map(|_| gain()).collect();
        let a_r: Vec<f64> = (0..n).map(|_| gain()).collect();
        let (p_s, p_r) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let rho = Correlation::new(rng.gen::<f64>())?;
        let q = CovMatrix2::from_correlation(p_s, p_r, rho)?;
        let gains = LinkGains {
            a_sr,
            a_s: a_s.clone(),
            a_r: a_r.clone(),
        };
        let cov_form = rate_cs_cov(&q, &gains, mode)?.value;
        let s = SnrVector::new(
            a_sr * a_sr * p_s,
            a_s.iter().map(|a| a * a * p_s).collect(),
            a_r.iter().map(|a| a * a * p_r).collect(),
        )?;
        let rho_form = rate_cs(rho, &s, mode).value;
        out.trials += 1;
        let delta = (cov_form - rho_form).abs();
        if !(delta < tol) {
            let mut point = alloc::vec![rho.value(), p_s, p_r, a_sr];
            point.extend(a_s);
            point.extend(a_r);
            out.record(Violation {
                points: alloc::vec![point],
                quantity: "|covariance form - correlation form|".to_string(),
                value: delta,
                indeterminate: false,
            });
        }
    }
    Ok(out.finish())
}
