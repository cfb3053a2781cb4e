use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::golden::{maximize_rho, RhoObjective};
use super::grid::{Grid, SearchBox};
use super::simplex::nelder_mead_max;
use super::{Basin, OptResult};
use crate::error::{Error, Result};
use crate::geometry::{distance, snr_vector, ChannelParams, Network, NodeLayout, Position};
use crate::math;
use crate::rates::{rate_of, Bound, Correlation, RateMode};

const INNER_RHO_TOL: f64 = 1e-9;

/// How the transmit correlation is chosen at each relay position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoChoice {
    Fixed(Correlation),
    /// Maximized per position (coherent transmission).
    Optimized,
}

/// A rate bound viewed as a function of the relay position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayObjective {
    pub bound: Bound,
    pub rho: RhoChoice,
}

impl RelayObjective {
    pub fn df_coherent() -> Self {
        Self {
            bound: Bound::DecodeForward,
            rho: RhoChoice::Optimized,
        }
    }

    pub fn df_noncoherent() -> Self {
        Self {
            bound: Bound::DecodeForward,
            rho: RhoChoice::Fixed(Correlation::ZERO),
        }
    }

    pub fn cs_fixed_rho(rho: Correlation) -> Self {
        Self {
            bound: Bound::CutSet,
            rho: RhoChoice::Fixed(rho),
        }
    }

    pub fn cs_coherent() -> Self {
        Self {
            bound: Bound::CutSet,
            rho: RhoChoice::Optimized,
        }
    }

    pub fn two_hop() -> Self {
        Self::fixed(Bound::TwoHop)
    }

    pub fn rdf() -> Self {
        Self::fixed(Bound::RoutingDecodeForward)
    }

    pub fn dt() -> Self {
        Self::fixed(Bound::DirectTransmission)
    }

    pub fn qf() -> Self {
        Self::fixed(Bound::QuantizeForward)
    }

    fn fixed(bound: Bound) -> Self {
        Self {
            bound,
            rho: RhoChoice::Fixed(Correlation::ZERO),
        }
    }

    /// Objectives whose quasi-concavity in the relay position is not established get
    /// several simplex starts.
    pub fn needs_multistart(&self) -> bool {
        matches!(
            (self.bound, self.rho),
            (Bound::CutSet, RhoChoice::Optimized) | (Bound::QuantizeForward, _)
        )
    }
}

/// Objective value at one relay position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayValue {
    pub value: f64,
    pub rho: Option<f64>,
    pub beta: Option<f64>,
}

/// Evaluates `objective` with the relay at `relay`.
pub fn evaluate_relay(
    objective: &RelayObjective,
    network: &Network,
    relay: &[f64],
    params: &ChannelParams,
    mode: RateMode,
) -> Result<RelayValue> {
    let layout = network.with_relay(Position::new(relay)?)?;
    evaluate_layout(objective, &layout, params, mode)
}

fn evaluate_layout(
    objective: &RelayObjective,
    layout: &NodeLayout,
    params: &ChannelParams,
    mode: RateMode,
) -> Result<RelayValue> {
    let s = snr_vector(layout, params)?;
    let rho = match (objective.bound.uses_rho(), objective.rho) {
        (false, _) => Correlation::ZERO,
        (true, RhoChoice::Fixed(r)) => r,
        (true, RhoChoice::Optimized) => {
            let inner = match objective.bound {
                Bound::CutSet => RhoObjective::CutSet,
                _ => RhoObjective::DecodeForward,
            };
            Correlation::new(maximize_rho(inner, &s, mode, INNER_RHO_TOL)?.argmax[0])?
        }
    };
    let report = rate_of(objective.bound, rho, &s, mode)?;
    Ok(RelayValue {
        value: report.value,
        rho: report.rho_used,
        beta: report.beta,
    })
}

/// Settings for [`optimize_relay`].
#[derive(Debug, Clone, PartialEq)]
pub struct RelayOptions {
    /// Coarse-grid points per axis. Empty means the default for the box dimension.
    pub resolution: Vec<usize>,
    /// Simplex diameter at which refinement stops.
    pub tol: f64,
    /// Simplex evaluation budget per start.
    pub max_evals: usize,
    /// Exclusion radius around every node. `None` means 1e-3 of the box diagonal.
    pub margin: Option<f64>,
    /// Number of starts for objectives that get multistart.
    pub starts: usize,
}

impl Default for RelayOptions {
    fn default() -> Self {
        Self {
            resolution: Vec::new(),
            tol: 1e-6,
            max_evals: 10_000,
            margin: None,
            starts: 5,
        }
    }
}

impl RelayOptions {
    pub fn default_resolution(dim: usize) -> Vec<usize> {
        match dim {
            1 => alloc::vec![101],
            2 => alloc::vec![41, 41],
            _ => alloc::vec![21; dim],
        }
    }
}

/// Maximizes `objective` over relay positions in `bounds` that keep at least the margin
/// from every node.
///
/// A coarse grid finds the best cell; a downhill simplex started there with the grid
/// spacing as its initial step refines it. Objectives flagged by
/// [`RelayObjective::needs_multistart`] are refined from the best grid-local maxima
/// instead, and every distinct basin is reported.
pub fn optimize_relay(
    objective: &RelayObjective,
    network: &Network,
    params: &ChannelParams,
    bounds: &SearchBox,
    mode: RateMode,
    options: &RelayOptions,
) -> Result<OptResult> {
    let dim = network.dim();
    if bounds.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bounds.dim(),
        });
    }
    if !(options.tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: "tolerance must be positive",
        });
    }
    let margin = options.margin.unwrap_or(1e-3 * bounds.diagonal());
    if !(margin > 0.0) {
        return Err(Error::InvalidParameter {
            name: "margin",
            reason: "margin must be positive",
        });
    }
    let resolution = if options.resolution.is_empty() {
        RelayOptions::default_resolution(dim)
    } else {
        options.resolution.clone()
    };

    let feasible = |x: &[f64]| -> bool {
        bounds.contains(x)
            && Position::new(x)
                .map(|p| {
                    network
                        .positions()
                        .all(|n| distance(&p, n).is_ok_and(|d| d >= margin))
                })
                .unwrap_or(false)
    };
    let mut evaluations = 0usize;
    let mut first_error = None;
    let mut any_feasible = false;
    let grid = Grid::from_fn(bounds.clone(), &resolution, |x| {
        if !feasible(x) {
            return None;
        }
        any_feasible = true;
        evaluations += 1;
        match evaluate_relay(objective, network, x, params, mode) {
            Ok(v) => Some(v.value),
            Err(e) => {
                first_error.get_or_insert(e);
                None
            }
        }
    })?;
    if !any_feasible {
        return Err(Error::EmptyFeasibleSet);
    }
    if grid.max().is_none() {
        // A mode or topology error is the same at every cell; report it directly.
        return Err(match first_error {
            Some(e @ (Error::UnsupportedMode | Error::UnsupportedTopology { .. })) => e,
            _ => Error::NoValidCells,
        });
    }

    let starts = if objective.needs_multistart() {
        start_cells(&grid, options.starts.max(1))
    } else {
        alloc::vec![grid.max().map(|(i, _)| i).unwrap_or(0)]
    };
    let step: Vec<f64> = (0..dim)
        .map(|a| (bounds.upper()[a] - bounds.lower()[a]) / (resolution[a] - 1) as f64)
        .collect();

    let mut basins: Vec<(Basin, f64)> = Vec::new();
    for &cell in &starts {
        let start = grid.point(cell);
        let out = nelder_mead_max(
            |x| {
                if !feasible(x) {
                    return None;
                }
                evaluate_relay(objective, network, x, params, mode)
                    .ok()
                    .map(|v| v.value)
            },
            &start,
            &step,
            options.tol,
            options.max_evals,
        );
        evaluations += out.evaluations;
        let merge_radius = 0.5 * step.iter().copied().fold(f64::INFINITY, f64::min);
        match basins
            .iter_mut()
            .find(|(b, _)| dist(&b.argmax, &out.best) < merge_radius)
        {
            Some((b, d)) => {
                if out.value > b.value {
                    *b = Basin {
                        argmax: out.best,
                        value: out.value,
                    };
                    *d = out.diameter;
                }
            }
            None => basins.push((
                Basin {
                    argmax: out.best,
                    value: out.value,
                },
                out.diameter,
            )),
        }
    }
    // Best first; stable sort keeps start order among equal values.
    basins.sort_by(|a, b| {
        b.0.value
            .partial_cmp(&a.0.value)
            .unwrap_or(core::cmp::Ordering::Equal)
    });

    let (best, achieved_tol) = basins[0].clone();
    let at = evaluate_relay(objective, network, &best.argmax, params, mode)?;
    evaluations += 1;
    Ok(OptResult {
        argmax: best.argmax,
        value: at.value,
        evaluations,
        achieved_tol,
        rho: at.rho,
        beta: at.beta,
        basins: basins.into_iter().map(|(b, _)| b).collect(),
    })
}

/// Up to `k` start cells: grid-local maxima by decreasing value, then the best
/// remaining cells if there are fewer local maxima than `k`.
fn start_cells(grid: &Grid, k: usize) -> Vec<usize> {
    let mut order: Vec<(usize, f64)> = grid
        .values()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal));
    let mut picked: Vec<usize> = order
        .iter()
        .filter(|(i, v)| is_local_max(grid, *i, *v))
        .map(|(i, _)| *i)
        .take(k)
        .collect();
    for (i, _) in &order {
        if picked.len() >= k {
            break;
        }
        if !picked.contains(i) {
            picked.push(*i);
        }
    }
    picked
}

fn is_local_max(grid: &Grid, flat: usize, value: f64) -> bool {
    let idx = grid.multi_index(flat);
    let res = grid.resolution();
    (0..idx.len()).all(|axis| {
        [-1i64, 1].iter().all(|&d| {
            let j = idx[axis] as i64 + d;
            if j < 0 || j >= res[axis] as i64 {
                return true;
            }
            let mut n = idx.clone();
            n[axis] = j as usize;
            grid.value_at(&n).is_none_or(|v| v <= value)
        })
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    math::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Result of adding sampled interior points as extra destinations.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InteriorCheck {
    /// Objective with the original destinations.
    pub base_value: f64,
    /// Smallest objective seen after adding one interior point.
    pub worst_value: f64,
    /// Samples evaluated (points landing on the relay are skipped).
    pub samples: usize,
    /// First interior point that lowered the objective, if any.
    pub witness: Option<Vec<f64>>,
}

impl InteriorCheck {
    pub fn unchanged(&self) -> bool {
        self.witness.is_none()
    }
}

/// Samples random convex combinations of the destinations and checks that serving
/// each one as an additional destination leaves the objective at `relay` unchanged,
/// i.e. that interior points receive at least the rate of the worst destination.
pub fn interior_destination_check(
    objective: &RelayObjective,
    network: &Network,
    params: &ChannelParams,
    relay: &[f64],
    mode: RateMode,
    samples: usize,
    seed: u64,
) -> Result<InteriorCheck> {
    let base_value = evaluate_relay(objective, network, relay, params, mode)?.value;
    let relay_pos = Position::new(relay)?;
    let dests = network.destinations();
    let dim = network.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = InteriorCheck {
        base_value,
        worst_value: base_value,
        samples: 0,
        witness: None,
    };
    for _ in 0..samples {
        // Exponential weights normalized to one are uniform on the simplex.
        let weights: Vec<f64> = dests
            .iter()
            .map(|_| -math::ln(1.0 - rng.gen::<f64>()))
            .collect();
        let total: f64 = weights.iter().sum();
        let mut point = alloc::vec![0.0; dim];
        for (w, d) in weights.iter().zip(dests) {
            for (p, c) in point.iter_mut().zip(d.coords()) {
                *p += w / total * c;
            }
        }
        let mut extended = dests.to_vec();
        extended.push(Position::new(&point)?);
        let layout = match NodeLayout::new(*network.source(), relay_pos, extended) {
            Ok(l) => l,
            Err(Error::Singular { .. }) => continue,
            Err(e) => return Err(e),
        };
        let v = evaluate_layout(objective, &layout, params, mode)?.value;
        check.samples += 1;
        if v < check.worst_value {
            check.worst_value = v;
        }
        if v < base_value && check.witness.is_none() {
            check.witness = Some(point);
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn one_d() -> (Network, ChannelParams, SearchBox) {
        let p = |x: f64| Position::new(&[x]).unwrap();
        (
            Network::new(p(0.0), vec![p(1.0)]).unwrap(),
            ChannelParams::unit(),
            SearchBox::new(vec![0.0], vec![1.0]).unwrap(),
        )
    }

    #[test]
    fn two_hop_midpoint() {
        let (net, params, b) = one_d();
        let out = optimize_relay(
            &RelayObjective::two_hop(),
            &net,
            &params,
            &b,
            RateMode::LowSnr,
            &RelayOptions::default(),
        )
        .unwrap();
        assert!((out.argmax[0] - 0.5).abs() < 1e-5);
        assert!((out.value - 2.0).abs() < 1e-6);
    }

    #[test]
    fn noncoherent_df_matches_grid_oracle() {
        let (net, params, b) = one_d();
        let out = optimize_relay(
            &RelayObjective::df_noncoherent(),
            &net,
            &params,
            &b,
            RateMode::LowSnr,
            &RelayOptions::default(),
        )
        .unwrap();
        // Closed form on (0, 1): min(1 + 1/(1-r)^2, 1/r^2) / 2, maximized where the two terms cross.
        let oracle = (1..10_000)
            .map(|i| {
                let r = i as f64 * 1e-4;
                let v = 0.5 * (1.0 + 1.0 / ((1.0 - r) * (1.0 - r))).min(1.0 / (r * r));
                (r, v)
            })
            .fold(
                (0.0, 0.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        assert!((out.value - oracle.1).abs() < 1e-3);
        assert!((out.argmax[0] - oracle.0).abs() < 1e-3);
        let again = evaluate_relay(
            &RelayObjective::df_noncoherent(),
            &net,
            &out.argmax,
            &params,
            RateMode::LowSnr,
        )
        .unwrap();
        assert!((again.value - out.value).abs() <= 1e-12);
    }

    #[test]
    fn rdf_reports_split() {
        let (net, params, b) = one_d();
        let out = optimize_relay(
            &RelayObjective::rdf(),
            &net,
            &params,
            &b,
            RateMode::LowSnr,
            &RelayOptions::default(),
        )
        .unwrap();
        assert!((out.argmax[0] - 0.5).abs() < 1e-3);
        assert!((out.value - 2.0).abs() < 1e-6);
        assert_eq!(out.beta, Some(1.0));
    }

    #[test]
    fn low_snr_only_bounds_reject_exact_mode() {
        let (net, params, b) = one_d();
        let err = optimize_relay(
            &RelayObjective::two_hop(),
            &net,
            &params,
            &b,
            RateMode::Exact,
            &RelayOptions::default(),
        );
        assert_eq!(err, Err(Error::UnsupportedMode));
    }

    #[test]
    fn margin_swallowing_the_box_is_rejected() {
        let (net, params, _) = one_d();
        let tiny = SearchBox::new(vec![0.9999], vec![1.0001]).unwrap();
        let opts = RelayOptions {
            margin: Some(0.01),
            ..RelayOptions::default()
        };
        let err = optimize_relay(
            &RelayObjective::two_hop(),
            &net,
            &params,
            &tiny,
            RateMode::LowSnr,
            &opts,
        );
        assert_eq!(err, Err(Error::EmptyFeasibleSet));
    }

    #[test]
    fn multistart_reports_basins() {
        let (net, params, b) = one_d();
        let out = optimize_relay(
            &RelayObjective::cs_coherent(),
            &net,
            &params,
            &b,
            RateMode::LowSnr,
            &RelayOptions::default(),
        )
        .unwrap();
        assert!(!out.basins.is_empty());
        assert_eq!(out.basins[0].value, out.value);
        assert!(out.rho.is_some());
    }
}
