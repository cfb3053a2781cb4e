//! Rate bounds of the AWGN multicast relay channel.
//!
//! Every bound is a minimum over destinations of one or two per-destination terms
//! `C(x)`, where `C(x) = ln(1 + x) / 2` in [`RateMode::Exact`] and `C(x) = x / 2` in
//! [`RateMode::LowSnr`]. One mode applies to every term of a bound.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::geometry::{snr_vector, ChannelParams, LinkGains, NodeLayout, SnrVector};
use crate::linalg::Matrix;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RateMode {
    /// `C(x) = ln(1 + x) / 2`.
    Exact,
    /// Broadband linearization `C(x) = x / 2`.
    LowSnr,
}

/// Transmit correlation coefficient between source and relay, restricted to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Correlation(f64);

impl Correlation {
    pub const ZERO: Correlation = Correlation(0.0);
    pub const ONE: Correlation = Correlation(1.0);

    pub fn new(rho: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&rho) {
            Ok(Self(rho))
        } else {
            Err(Error::RhoOutOfRange(rho))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which rate expression a report or objective refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Bound {
    CutSet,
    DirectTransmission,
    DecodeForward,
    QuantizeForward,
    RoutingDecodeForward,
    TwoHop,
}

impl Bound {
    pub const ALL: [Bound; 6] = [
        Bound::CutSet,
        Bound::DirectTransmission,
        Bound::DecodeForward,
        Bound::QuantizeForward,
        Bound::RoutingDecodeForward,
        Bound::TwoHop,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Bound::CutSet => "cs",
            Bound::DirectTransmission => "dt",
            Bound::DecodeForward => "df",
            Bound::QuantizeForward => "qf",
            Bound::RoutingDecodeForward => "rdf",
            Bound::TwoHop => "2h",
        }
    }

    /// Whether the bound has a transmit correlation to choose.
    pub fn uses_rho(self) -> bool {
        matches!(self, Bound::CutSet | Bound::DecodeForward)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Label of the per-destination term that binds.
///
/// `Broadcast` is the coherent-combining term at the destination (`f_j`, the direct
/// link for DT, `h_j` for QF, the relay-to-destination hop for two-hop routing).
/// `MultipleAccess` is the term that involves the relay's reception (`g_j`, `g*_j`,
/// the source-to-relay hop).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Cut {
    Broadcast,
    MultipleAccess,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DestinationTerms {
    pub dest: usize,
    pub broadcast: f64,
    /// Absent for bounds with a single term per destination (DT, QF).
    pub multiple_access: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bottleneck {
    pub dest: usize,
    pub cut: Cut,
}

/// A bound value with its per-destination breakdown.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateReport {
    pub bound: Bound,
    pub mode: RateMode,
    /// Nats per channel use.
    pub value: f64,
    pub per_dest: Vec<DestinationTerms>,
    pub bottleneck: Bottleneck,
    pub rho_used: Option<f64>,
    /// Routing split, only for [`Bound::RoutingDecodeForward`].
    pub beta: Option<f64>,
}

impl RateReport {
    /// Builds the report; `value` is the exact minimum of the terms. Ties go to the
    /// lowest destination index, and the broadcast term before the multiple-access term.
    fn from_terms(
        bound: Bound,
        mode: RateMode,
        per_dest: Vec<DestinationTerms>,
        rho_used: Option<f64>,
        beta: Option<f64>,
    ) -> Self {
        let mut value = f64::INFINITY;
        let mut bottleneck = Bottleneck {
            dest: 0,
            cut: Cut::Broadcast,
        };
        for t in &per_dest {
            if t.broadcast < value {
                value = t.broadcast;
                bottleneck = Bottleneck {
                    dest: t.dest,
                    cut: Cut::Broadcast,
                };
            }
            if let Some(mac) = t.multiple_access {
                if mac < value {
                    value = mac;
                    bottleneck = Bottleneck {
                        dest: t.dest,
                        cut: Cut::MultipleAccess,
                    };
                }
            }
        }
        Self {
            bound,
            mode,
            value,
            per_dest,
            bottleneck,
            rho_used,
            beta,
        }
    }
}

/// Link capacity `C(snr)` in nats.
pub fn capacity(snr: f64, mode: RateMode) -> Result<f64> {
    if !(snr >= 0.0) {
        return Err(Error::NegativeSnr(snr));
    }
    Ok(cap(snr, mode))
}

#[inline]
fn cap(x: f64, mode: RateMode) -> f64 {
    debug_assert!(x >= 0.0);
    match mode {
        RateMode::Exact => 0.5 * math::ln_1p(x),
        RateMode::LowSnr => 0.5 * x,
    }
}

/// Coherent-combining SNR `SNR_sj + SNR_rj + 2 rho sqrt(SNR_sj SNR_rj)`.
pub fn f_j(rho: Correlation, s: &SnrVector, j: usize) -> Result<f64> {
    s.check_index(j)?;
    let (a, b) = (s.snr_s()[j], s.snr_r()[j]);
    Ok(a + b + 2.0 * rho.value() * math::sqrt(a * b))
}

/// `(1 - rho^2)(SNR_sj + SNR_sr)`.
pub fn g_j(rho: Correlation, s: &SnrVector, j: usize) -> Result<f64> {
    s.check_index(j)?;
    Ok(one_minus_rho_sq(rho) * (s.snr_s()[j] + s.snr_sr()))
}

/// `(1 - rho^2) SNR_sr`; the same for every destination.
pub fn g_star_j(rho: Correlation, s: &SnrVector) -> f64 {
    one_minus_rho_sq(rho) * s.snr_sr()
}

/// Effective SNR of quantize-forward with Gaussian quantization.
pub fn h_j(s: &SnrVector, j: usize) -> Result<f64> {
    s.check_index(j)?;
    let (a, b, c) = (s.snr_s()[j], s.snr_r()[j], s.snr_sr());
    Ok(a + b * c / (a + b + c + 1.0))
}

fn one_minus_rho_sq(rho: Correlation) -> f64 {
    let r = rho.value();
    (1.0 - r * r).max(0.0)
}

/// Cut-set bound at a fixed correlation.
pub fn rate_cs(rho: Correlation, s: &SnrVector, mode: RateMode) -> RateReport {
    let per_dest = (0..s.n())
        .map(|j| DestinationTerms {
            dest: j,
            broadcast: cap(f_j(rho, s, j).unwrap(), mode),
            multiple_access: Some(cap(g_j(rho, s, j).unwrap(), mode)),
        })
        .collect();
    RateReport::from_terms(Bound::CutSet, mode, per_dest, Some(rho.value()), None)
}

/// Decode-forward rate at a fixed correlation.
pub fn rate_df(rho: Correlation, s: &SnrVector, mode: RateMode) -> RateReport {
    let relay_term = cap(g_star_j(rho, s), mode);
    let per_dest = (0..s.n())
        .map(|j| DestinationTerms {
            dest: j,
            broadcast: cap(f_j(rho, s, j).unwrap(), mode),
            multiple_access: Some(relay_term),
        })
        .collect();
    RateReport::from_terms(
        Bound::DecodeForward,
        mode,
        per_dest,
        Some(rho.value()),
        None,
    )
}

/// Direct transmission with a silent relay.
pub fn rate_dt(s: &SnrVector, mode: RateMode) -> RateReport {
    let per_dest = s
        .snr_s()
        .iter()
        .enumerate()
        .map(|(j, &x)| DestinationTerms {
            dest: j,
            broadcast: cap(x, mode),
            multiple_access: None,
        })
        .collect();
    RateReport::from_terms(Bound::DirectTransmission, mode, per_dest, None, None)
}

/// Quantize-forward with Gaussian signaling and Gaussian quantization.
pub fn rate_qf(s: &SnrVector, mode: RateMode) -> RateReport {
    let per_dest = (0..s.n())
        .map(|j| DestinationTerms {
            dest: j,
            broadcast: cap(h_j(s, j).unwrap(), mode),
            multiple_access: None,
        })
        .collect();
    RateReport::from_terms(Bound::QuantizeForward, mode, per_dest, None, None)
}

/// Source/relay input covariance with the diagonal pinned to the powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMatrix2 {
    p_s: f64,
    p_r: f64,
    cross: f64,
}

impl CovMatrix2 {
    pub fn new(p_s: f64, p_r: f64, cross: f64) -> Result<Self> {
        if !(p_s >= 0.0 && p_r >= 0.0 && p_s.is_finite() && p_r.is_finite() && cross.is_finite()) {
            return Err(Error::NotPositiveSemidefinite);
        }
        // Relative slack so that cross = sqrt(p_s p_r) (rank one) is accepted after rounding.
        let bound = p_s * p_r;
        if cross * cross > bound * (1.0 + 1e-12) {
            return Err(Error::NotPositiveSemidefinite);
        }
        Ok(Self { p_s, p_r, cross })
    }

    pub fn from_correlation(p_s: f64, p_r: f64, rho: Correlation) -> Result<Self> {
        Self::new(p_s, p_r, rho.value() * math::sqrt(p_s * p_r))
    }

    pub fn p_s(&self) -> f64 {
        self.p_s
    }

    pub fn p_r(&self) -> f64 {
        self.p_r
    }

    pub fn cross(&self) -> f64 {
        self.cross
    }

    /// `cross / sqrt(p_s p_r)`, or `None` if either power is zero.
    pub fn correlation(&self) -> Option<f64> {
        let denom = math::sqrt(self.p_s * self.p_r);
        (denom > 0.0).then(|| self.cross / denom)
    }

    fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.p_s, self.cross], [self.cross, self.p_r]]
    }
}

/// Covariance of `(Y_r, Y_j, X_r)` for a given input covariance:
/// `A Q A^T + diag(1, 1, 0)` with `A = [[a_sr, 0], [a_sj, a_rj], [0, 1]]`.
pub fn assemble_cov(q: &CovMatrix2, a_sr: f64, a_sj: f64, a_rj: f64) -> Matrix {
    let a = [[a_sr, 0.0], [a_sj, a_rj], [0.0, 1.0]];
    let qm = q.matrix();
    let mut m = Matrix::zeros(3);
    for i in 0..3 {
        for k in 0..3 {
            let mut acc = 0.0;
            for u in 0..2 {
                for v in 0..2 {
                    acc += a[i][u] * qm[u][v] * a[k][v];
                }
            }
            m[(i, k)] = acc;
        }
    }
    m[(0, 0)] += 1.0;
    m[(1, 1)] += 1.0;
    m
}

/// Cut-set bound evaluated from the input covariance rather than from `(rho, S)`:
/// the destination term is `C(a_j^T Q a_j)` and the relay term is half the log of
/// `det Cov(Y_r, Y_j, X_r) / P_r`.
pub fn rate_cs_cov(q: &CovMatrix2, gains: &LinkGains, mode: RateMode) -> Result<RateReport> {
    if q.p_r == 0.0 {
        return Err(Error::ZeroRelayPower);
    }
    if gains.a_s.len() != gains.a_r.len() {
        return Err(Error::DimensionMismatch {
            expected: gains.a_s.len(),
            found: gains.a_r.len(),
        });
    }
    if gains.a_s.is_empty() {
        return Err(Error::NoDestinations);
    }
    let qm = q.matrix();
    let per_dest = gains
        .a_s
        .iter()
        .zip(&gains.a_r)
        .enumerate()
        .map(|(j, (&a_sj, &a_rj))| {
            let quad =
                a_sj * a_sj * qm[0][0] + 2.0 * a_sj * a_rj * qm[0][1] + a_rj * a_rj * qm[1][1];
            let ratio = assemble_cov(q, gains.a_sr, a_sj, a_rj).det() / q.p_r;
            let (broadcast, mac) = match mode {
                RateMode::Exact => (0.5 * math::ln(quad.max(0.0) + 1.0), 0.5 * math::ln(ratio)),
                RateMode::LowSnr => (0.5 * quad, 0.5 * (ratio - 1.0)),
            };
            // A rank-one covariance gives ratio = 1 up to rounding.
            DestinationTerms {
                dest: j,
                broadcast: broadcast.max(0.0),
                multiple_access: Some(mac.max(0.0)),
            }
        })
        .collect();
    Ok(RateReport::from_terms(
        Bound::CutSet,
        mode,
        per_dest,
        q.correlation(),
        None,
    ))
}

/// Routing split between the relayed and the direct flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaChoice {
    Auto,
    Fixed(f64),
}

/// Maximizer of `min(SNR_r1, beta SNR_sr) + (1 - beta) SNR_s1` over `beta` in `[0, 1]`.
///
/// The objective is piecewise linear: slope `SNR_sr - SNR_s1` up to
/// `beta = SNR_r1 / SNR_sr`, slope `-SNR_s1` after it.
pub fn rdf_optimal_beta(snr_sr: f64, snr_s1: f64, snr_r1: f64) -> f64 {
    if snr_sr >= snr_s1 && snr_sr > 0.0 {
        (snr_r1 / snr_sr).min(1.0)
    } else {
        0.0
    }
}

/// Routing decode-forward for a single destination, low-SNR regime.
pub fn rate_rdf(
    layout: &NodeLayout,
    params: &ChannelParams,
    beta: BetaChoice,
) -> Result<RateReport> {
    rate_rdf_snr(&snr_vector(layout, params)?, beta)
}

pub fn rate_rdf_snr(s: &SnrVector, beta: BetaChoice) -> Result<RateReport> {
    if s.n() != 1 {
        return Err(Error::UnsupportedTopology {
            expected: 1,
            found: s.n(),
        });
    }
    let (sr, s1, r1) = (s.snr_sr(), s.snr_s()[0], s.snr_r()[0]);
    let beta = match beta {
        BetaChoice::Auto => rdf_optimal_beta(sr, s1, r1),
        BetaChoice::Fixed(b) if (0.0..=1.0).contains(&b) => b,
        BetaChoice::Fixed(_) => {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: "routing split must lie in [0, 1]",
            })
        }
    };
    let direct = s1 * (1.0 - beta);
    // min(a, b) + c == min(a + c, b + c), which keeps the two-term report shape.
    let terms = DestinationTerms {
        dest: 0,
        broadcast: 0.5 * (r1 + direct),
        multiple_access: Some(0.5 * (beta * sr + direct)),
    };
    Ok(RateReport::from_terms(
        Bound::RoutingDecodeForward,
        RateMode::LowSnr,
        alloc::vec![terms],
        None,
        Some(beta),
    ))
}

/// Two-hop routing through the relay, low-SNR regime.
pub fn rate_2h(layout: &NodeLayout, params: &ChannelParams) -> Result<RateReport> {
    Ok(rate_2h_snr(&snr_vector(layout, params)?))
}

pub fn rate_2h_snr(s: &SnrVector) -> RateReport {
    let hop1 = 0.5 * s.snr_sr();
    let per_dest = s
        .snr_r()
        .iter()
        .enumerate()
        .map(|(j, &x)| DestinationTerms {
            dest: j,
            broadcast: 0.5 * x,
            multiple_access: Some(hop1),
        })
        .collect();
    RateReport::from_terms(Bound::TwoHop, RateMode::LowSnr, per_dest, None, None)
}

/// Evaluates a correlation-dependent bound (`CutSet` or `DecodeForward`) at `rho`.
/// Other bounds ignore `rho`; the two low-SNR-only bounds reject [`RateMode::Exact`].
pub fn rate_of(
    bound: Bound,
    rho: Correlation,
    s: &SnrVector,
    mode: RateMode,
) -> Result<RateReport> {
    match bound {
        Bound::CutSet => Ok(rate_cs(rho, s, mode)),
        Bound::DecodeForward => Ok(rate_df(rho, s, mode)),
        Bound::DirectTransmission => Ok(rate_dt(s, mode)),
        Bound::QuantizeForward => Ok(rate_qf(s, mode)),
        Bound::RoutingDecodeForward | Bound::TwoHop if mode == RateMode::Exact => {
            Err(Error::UnsupportedMode)
        }
        Bound::RoutingDecodeForward => rate_rdf_snr(s, BetaChoice::Auto),
        Bound::TwoHop => Ok(rate_2h_snr(s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Position;
    use alloc::vec;

    fn snr(sr: f64, s: &[f64], r: &[f64]) -> SnrVector {
        SnrVector::new(sr, s.to_vec(), r.to_vec()).unwrap()
    }

    fn rho(r: f64) -> Correlation {
        Correlation::new(r).unwrap()
    }

    fn line(relay: f64) -> NodeLayout {
        let p = |x: f64| Position::new(&[x]).unwrap();
        NodeLayout::new(p(0.0), p(relay), vec![p(1.0)]).unwrap()
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity(0.0, RateMode::Exact).unwrap(), 0.0);
        assert!(
            (capacity(core::f64::consts::E - 1.0, RateMode::Exact).unwrap() - 0.5).abs() < 1e-15
        );
        assert_eq!(capacity(4.0, RateMode::LowSnr).unwrap(), 2.0);
        assert_eq!(
            capacity(-1.0, RateMode::Exact),
            Err(Error::NegativeSnr(-1.0))
        );
        assert!(capacity(f64::NAN, RateMode::Exact).is_err());
    }

    #[test]
    fn correlation_range() {
        assert!(Correlation::new(-0.1).is_err());
        assert!(Correlation::new(1.1).is_err());
        assert_eq!(Correlation::new(1.0).unwrap(), Correlation::ONE);
    }

    #[test]
    fn term_examples() {
        let s = snr(24.0, &[1.0], &[4.0]);
        assert_eq!(f_j(rho(0.0), &s, 0).unwrap(), 5.0);
        assert_eq!(f_j(rho(1.0), &s, 0).unwrap(), 9.0);
        assert_eq!(f_j(rho(0.5), &snr(1.0, &[1.0], &[1.0]), 0).unwrap(), 3.0);
        assert_eq!(g_j(rho(0.0), &s, 0).unwrap(), 25.0);
        assert_eq!(g_j(rho(1.0), &s, 0).unwrap(), 0.0);
        assert!((g_j(rho(0.6), &snr(4.0, &[1.0], &[4.0]), 0).unwrap() - 3.2).abs() < 1e-15);
        assert_eq!(g_star_j(rho(0.0), &snr(4.0, &[1.0], &[1.0])), 4.0);
        assert_eq!(g_star_j(rho(1.0), &snr(4.0, &[1.0], &[1.0])), 0.0);
        assert_eq!(g_star_j(rho(0.5), &snr(8.0, &[1.0], &[1.0])), 6.0);
        assert_eq!(
            f_j(rho(0.0), &s, 1),
            Err(Error::DestinationIndex { index: 1, count: 1 })
        );
    }

    #[test]
    fn h_j_examples() {
        assert!((h_j(&snr(1.0, &[0.0], &[1.0]), 0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(h_j(&snr(7.0, &[2.5], &[0.0]), 0).unwrap(), 2.5);
        assert!((h_j(&snr(3.0, &[1.0], &[2.0]), 0).unwrap() - (1.0 + 6.0 / 7.0)).abs() < 1e-15);
    }

    #[test]
    fn cut_set_examples() {
        let s = snr(4.0, &[1.0], &[4.0]);
        let r = rate_cs(rho(0.0), &s, RateMode::LowSnr);
        assert_eq!(r.value, 2.5);
        // f = g = 5: tie goes to the broadcast term
        assert_eq!(
            r.bottleneck,
            Bottleneck {
                dest: 0,
                cut: Cut::Broadcast
            }
        );
        assert_eq!(
            rate_cs(
                rho(1.0),
                &snr(3.0, &[2.0, 1.0], &[1.0, 5.0]),
                RateMode::Exact
            )
            .value,
            0.0
        );
        let silent = snr(9.0, &[2.0], &[0.0]);
        let r = rate_cs(rho(0.0), &silent, RateMode::Exact);
        assert_eq!(r.value, capacity(2.0, RateMode::Exact).unwrap());
    }

    #[test]
    fn direct_transmission_examples() {
        let r = rate_dt(&snr(1.0, &[1.0, 4.0], &[1.0, 1.0]), RateMode::Exact);
        assert!((r.value - 0.5 * core::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(r.bottleneck.dest, 0);
        assert_eq!(r.rho_used, None);
        assert_eq!(
            rate_dt(&snr(1.0, &[0.0, 2.0], &[1.0, 1.0]), RateMode::Exact).value,
            0.0
        );
        assert_eq!(
            rate_dt(&snr(1.0, &[3.0], &[1.0]), RateMode::LowSnr).value,
            1.5
        );
    }

    #[test]
    fn decode_forward_examples() {
        let r = rate_df(rho(0.0), &snr(4.0, &[1.0], &[4.0]), RateMode::LowSnr);
        assert_eq!(r.value, 2.0);
        assert_eq!(r.bottleneck.cut, Cut::MultipleAccess);
        assert_eq!(
            rate_df(rho(1.0), &snr(4.0, &[1.0], &[4.0]), RateMode::Exact).value,
            0.0
        );
        assert_eq!(
            rate_df(rho(0.0), &snr(25.0, &[1.0], &[4.0]), RateMode::LowSnr).value,
            2.5
        );
    }

    #[test]
    fn quantize_forward_examples() {
        let s = snr(3.0, &[1.0, 2.0], &[0.0, 0.0]);
        assert_eq!(
            rate_qf(&s, RateMode::Exact).value,
            rate_dt(&s, RateMode::Exact).value
        );
        let r = rate_qf(&snr(1.0, &[0.0], &[1.0]), RateMode::Exact);
        assert!((r.value - 0.5 * math::ln(4.0 / 3.0)).abs() < 1e-15);

        // h_j approaches SNR_sj + SNR_rj from below as SNR_sr grows
        let mut prev = 0.0;
        for sr in [1.0, 10.0, 1e3, 1e6, 1e9] {
            let h = h_j(&snr(sr, &[1.0], &[2.0]), 0).unwrap();
            assert!(h > prev && h < 3.0);
            prev = h;
        }
        assert!((3.0 - prev).abs() < 1e-8);
    }

    #[test]
    fn routing_df_examples() {
        let params = ChannelParams::unit();
        let r = rate_rdf(&line(0.5), &params, BetaChoice::Auto).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.beta, Some(1.0));
        assert_eq!(r.rho_used, None);
        let r = rate_rdf(&line(0.5), &params, BetaChoice::Fixed(0.0)).unwrap();
        assert_eq!(r.value, 0.5);
        let r = rate_rdf(&line(0.25), &params, BetaChoice::Auto).unwrap();
        assert!((r.beta.unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert!((r.value - 4.0 / 3.0).abs() < 1e-14);
        assert!(rate_rdf(&line(0.5), &params, BetaChoice::Fixed(1.5)).is_err());
    }

    #[test]
    fn routing_df_rejects_multicast() {
        let s = snr(1.0, &[1.0, 1.0], &[1.0, 1.0]);
        assert_eq!(
            rate_rdf_snr(&s, BetaChoice::Auto),
            Err(Error::UnsupportedTopology {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn two_hop_examples() {
        let params = ChannelParams::unit();
        assert_eq!(rate_2h(&line(0.5), &params).unwrap().value, 2.0);
        let r = rate_2h(&line(0.1), &params).unwrap();
        assert!((r.value - 0.5 / 0.81).abs() < 1e-12);
        assert_eq!(r.bottleneck.cut, Cut::Broadcast);

        let p = |x: f64, y: f64| Position::new(&[x, y]).unwrap();
        let layout =
            NodeLayout::new(p(0.0, 0.0), p(0.5, 0.0), vec![p(1.0, 0.0), p(-1.0, 0.0)]).unwrap();
        let r = rate_2h(&layout, &params).unwrap();
        assert_eq!(
            r.bottleneck,
            Bottleneck {
                dest: 1,
                cut: Cut::Broadcast
            }
        );
    }

    #[test]
    fn covariance_form_examples() {
        let gains = LinkGains {
            a_sr: 1.0,
            a_s: vec![1.0],
            a_r: vec![1.0],
        };
        let q = CovMatrix2::new(1.0, 1.0, 0.0).unwrap();
        let cov = rate_cs_cov(&q, &gains, RateMode::Exact).unwrap();
        let direct = rate_cs(rho(0.0), &snr(1.0, &[1.0], &[1.0]), RateMode::Exact);
        assert!((cov.value - direct.value).abs() < 1e-12);

        let rank_one = CovMatrix2::new(2.0, 3.0, 6.0f64.sqrt()).unwrap();
        let r = rate_cs_cov(&rank_one, &gains, RateMode::Exact).unwrap();
        assert!(r.per_dest[0].multiple_access.unwrap().abs() < 1e-12);

        assert_eq!(
            CovMatrix2::new(1.0, 1.0, 1.1),
            Err(Error::NotPositiveSemidefinite)
        );
        let no_relay = CovMatrix2::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(
            rate_cs_cov(&no_relay, &gains, RateMode::Exact),
            Err(Error::ZeroRelayPower)
        );
    }

    #[test]
    fn low_snr_only_bounds_reject_exact_mode() {
        let s = snr(1.0, &[1.0], &[1.0]);
        assert_eq!(
            rate_of(Bound::TwoHop, rho(0.0), &s, RateMode::Exact),
            Err(Error::UnsupportedMode)
        );
        assert_eq!(
            rate_of(Bound::RoutingDecodeForward, rho(0.0), &s, RateMode::Exact),
            Err(Error::UnsupportedMode)
        );
    }
}
