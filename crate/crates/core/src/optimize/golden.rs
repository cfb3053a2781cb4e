use alloc::vec;

use super::{Basin, OptResult};
use crate::error::{Error, Result};
use crate::geometry::SnrVector;
use crate::math;
use crate::rates::{rate_cs, rate_df, Correlation, RateMode};

const MAX_ITERATIONS: usize = 500;

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
///
/// The bracket is shrunk until its width is at most `tol`. The endpoints are evaluated
/// as well, so maxima sitting on the boundary are returned exactly. Ties prefer the
/// smaller argument.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<OptResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "tolerance must be positive",
        });
    }
    if !(lo <= hi) {
        return Err(Error::EmptyFeasibleSet);
    }
    let mut evaluations = 0;
    let mut eval = |x: f64| -> Result<f64> {
        evaluations += 1;
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteObjective)
        }
    };

    let inv_phi = (math::sqrt(5.0) - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut iterations = 0;
    while b - a > tol && iterations < MAX_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d)?;
        }
        iterations += 1;
    }

    let mid = 0.5 * (a + b);
    let mut best = (lo, eval(lo)?);
    for x in [mid, hi] {
        let v = eval(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(OptResult {
        argmax: vec![best.0],
        value: best.1,
        evaluations,
        achieved_tol: b - a,
        rho: None,
        beta: None,
        basins: vec![Basin {
            argmax: vec![best.0],
            value: best.1,
        }],
    })
}

/// Bounds that depend on the transmit correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoObjective {
    CutSet,
    DecodeForward,
}

/// Maximizes the cut-set or decode-forward rate over `rho` in `[0, 1]`.
///
/// Both rates are concave in `rho`, so the golden-section optimum is global.
pub fn maximize_rho(
    objective: RhoObjective,
    s: &SnrVector,
    mode: RateMode,
    tol: f64,
) -> Result<OptResult> {
    let mut result = golden_section_max(
        |r| {
            let rho = Correlation::new(r.clamp(0.0, 1.0))?;
            Ok(match objective {
                RhoObjective::CutSet => rate_cs(rho, s, mode).value,
                RhoObjective::DecodeForward => rate_df(rho, s, mode).value,
            })
        },
        0.0,
        1.0,
        tol,
    )?;
    result.rho = Some(result.argmax[0]);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn snr(sr: f64, s: &[f64], r: &[f64]) -> SnrVector {
        SnrVector::new(sr, s.to_vec(), r.to_vec()).unwrap()
    }

    /// Brute-force scan over rho with step 1e-4.
    fn rho_grid_max(objective: RhoObjective, s: &SnrVector, mode: RateMode) -> (f64, f64) {
        (0..=10_000)
            .map(|i| {
                let r = i as f64 * 1e-4;
                let rho = Correlation::new(r.min(1.0)).unwrap();
                let v = match objective {
                    RhoObjective::CutSet => rate_cs(rho, s, mode).value,
                    RhoObjective::DecodeForward => rate_df(rho, s, mode).value,
                };
                (r, v)
            })
            .fold((0.0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            })
    }

    #[test]
    fn golden_finds_interior_and_boundary_maxima() {
        let r = golden_section_max(|x| Ok(-(x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-9).unwrap();
        assert!((r.argmax[0] - 0.3).abs() < 1e-8);
        assert!(r.achieved_tol <= 1e-9);
        let r = golden_section_max(|x| Ok(-x), 0.0, 1.0, 1e-6).unwrap();
        assert_eq!(r.argmax[0], 0.0);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn golden_rejects_bad_input() {
        assert!(golden_section_max(Ok, 0.0, 1.0, 0.0).is_err());
        assert_eq!(
            golden_section_max(|_| Ok(f64::NAN), 0.0, 1.0, 1e-3),
            Err(Error::NonFiniteObjective)
        );
    }

    #[test]
    fn df_optimum_at_zero_when_relay_link_binds() {
        let s = snr(4.0, &[1.0], &[4.0]);
        let r = maximize_rho(RhoObjective::DecodeForward, &s, RateMode::LowSnr, 1e-9).unwrap();
        assert_eq!(r.rho, Some(0.0));
        assert_eq!(r.value, 2.0);
        let (grid_rho, grid_val) = rho_grid_max(RhoObjective::DecodeForward, &s, RateMode::LowSnr);
        assert_eq!(grid_rho, 0.0);
        assert!((grid_val - r.value).abs() < 1e-12);
    }

    #[test]
    fn df_optimum_near_one_with_strong_relay_link() {
        let s = snr(1e6, &[1.0], &[1.0]);
        let r = maximize_rho(RhoObjective::DecodeForward, &s, RateMode::LowSnr, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-3);
        assert!(r.rho.unwrap() > 1.0 - 1e-5);
        let (_, grid_val) = rho_grid_max(RhoObjective::DecodeForward, &s, RateMode::LowSnr);
        assert!((grid_val - r.value).abs() < 1e-3);
    }

    #[test]
    fn silent_relay_keeps_rho_at_zero() {
        let s = snr(3.0, &[2.0], &[0.0]);
        for objective in [RhoObjective::CutSet, RhoObjective::DecodeForward] {
            let r = maximize_rho(objective, &s, RateMode::Exact, 1e-9).unwrap();
            assert_eq!(r.rho, Some(0.0));
            let at_zero = match objective {
                RhoObjective::CutSet => rate_cs(Correlation::ZERO, &s, RateMode::Exact).value,
                RhoObjective::DecodeForward => {
                    rate_df(Correlation::ZERO, &s, RateMode::Exact).value
                }
            };
            assert_eq!(r.value, at_zero);
        }
    }

    #[test]
    fn matches_rho_grid_on_random_snrs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let flat: Vec<f64> = (0..2 * n + 1).map(|_| rng.gen_range(0.0..10.0)).collect();
            let s = SnrVector::from_slice(&flat).unwrap();
            for objective in [RhoObjective::CutSet, RhoObjective::DecodeForward] {
                for mode in [RateMode::Exact, RateMode::LowSnr] {
                    let r = maximize_rho(objective, &s, mode, 1e-9).unwrap();
                    let (_, grid_val) = rho_grid_max(objective, &s, mode);
                    assert!(r.value + 1e-12 >= grid_val - 1e-3);
                    assert!((grid_val - r.value).abs() < 1e-3);
                }
            }
        }
    }
}
