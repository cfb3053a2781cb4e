//! Capacity bounds for additive-white-Gaussian-noise multicast relay channels.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`geometry`] turns node positions and path-loss parameters into link SNRs.
//! - [`rates`] evaluates the cut-set, direct-transmission, decode-forward,
//!   quantize-forward, routing decode-forward and two-hop rates.
//! - [`optimize`] maximizes those rates over the transmit correlation and the
//!   relay position, and produces grid sweeps with superlevel-set probes.
//! - [`qc`] numerically certifies concavity and quasi-concavity claims with
//!   finite-difference bordered Hessians and randomized inequality tests.
//!
//! All rates are in nats per channel use.

#![no_std]
#![warn(clippy::std_instead_of_alloc)]
#![warn(clippy::std_instead_of_core)]
// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

mod error;
pub mod geometry;
pub mod linalg;
mod math;
pub mod optimize;
pub mod qc;
pub mod rates;

pub use error::{Error, Result};
pub use geometry::{ChannelParams, LinkGains, Network, Node, NodeLayout, Position, SnrVector};
pub use optimize::{OptResult, RelayObjective, RhoChoice, SearchBox};
pub use rates::{Bound, Correlation, CovMatrix2, Cut, RateMode, RateReport};
