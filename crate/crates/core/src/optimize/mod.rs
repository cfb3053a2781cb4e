//! Maximization over the transmit correlation, the routing split and the relay position.
//!
//! Rates are concave in the correlation for fixed SNRs, so the inner problem is a
//! golden-section search on `[0, 1]`. Decode-forward and fixed-correlation cut-set rates
//! are quasi-concave in the relay position: a coarse grid locates the single basin and a
//! downhill simplex refines it. Objectives without that guarantee get several starts.

mod golden;
mod grid;
mod probe;
mod relay;
mod simplex;

use alloc::vec::Vec;

pub use golden::{golden_section_max, maximize_rho, RhoObjective};
pub use grid::{grid_points, sweep_grid, Grid, SearchBox};
pub use probe::{
    lattice_directions, superlevel_convexity_probe, superlevel_levels, ProbeResult, ProbeWitness,
};
pub use relay::{
    evaluate_relay, interior_destination_check, optimize_relay, InteriorCheck, RelayObjective,
    RelayOptions, RelayValue, RhoChoice,
};
pub use simplex::{nelder_mead_max, SimplexOutcome};

/// One local maximum found from one start.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Basin {
    pub argmax: Vec<f64>,
    pub value: f64,
}

/// Outcome of a maximization. `value` is the objective evaluated at `argmax`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptResult {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Final bracket width (1-D searches) or simplex diameter.
    pub achieved_tol: f64,
    /// Correlation used at the optimum, when the objective has one.
    pub rho: Option<f64>,
    /// Routing split at the optimum, for routing decode-forward.
    pub beta: Option<f64>,
    /// Distinct local maxima, best first. A single entry for single-start searches.
    pub basins: Vec<Basin>,
}
