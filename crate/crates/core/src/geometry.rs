//! Node positions, path-loss channel gains and the SNR vector.
//!
//! A link from node `u` to node `v` at distance `D` has gain `sqrt(xi) / D^(alpha/2)`
//! and SNR `xi * P_u / D^alpha`, where `xi` is a per-pair fading gain and `P_u` the
//! transmit power of `u`. Only the source and the relay transmit.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;

/// Point in 1, 2 or 3 dimensional Euclidean space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    coords: [f64; 3],
    dim: usize,
}

impl Position {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let dim = coords.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidDimension(dim));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        let mut buf = [0.0; 3];
        buf[..dim].copy_from_slice(coords);
        Ok(Self { coords: buf, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &Position) -> Result<f64> {
        distance(self, other)
    }
}

/// Euclidean distance between two positions of equal dimension.
pub fn distance(a: &Position, b: &Position) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    let sq: f64 = a
        .coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(math::sqrt(sq))
}

/// Role of a node in the multicast relay channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Node {
    Source,
    Relay,
    /// Zero-based destination index, in layout order.
    Destination(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Source => f.write_str("source"),
            Node::Relay => f.write_str("relay"),
            Node::Destination(j) => write!(f, "destination {j}"),
        }
    }
}

/// Source and destinations without a relay: the input to relay placement.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    source: Position,
    destinations: Vec<Position>,
}

impl Network {
    pub fn new(source: Position, destinations: Vec<Position>) -> Result<Self> {
        if destinations.is_empty() {
            return Err(Error::NoDestinations);
        }
        for (j, d) in destinations.iter().enumerate() {
            if d.dim() != source.dim() {
                return Err(Error::DimensionMismatch {
                    expected: source.dim(),
                    found: d.dim(),
                });
            }
            if distance(&source, d)? == 0.0 {
                return Err(Error::Singular {
                    from: Node::Source,
                    to: Node::Destination(j),
                });
            }
        }
        Ok(Self {
            source,
            destinations,
        })
    }

    pub fn source(&self) -> &Position {
        &self.source
    }

    pub fn destinations(&self) -> &[Position] {
        &self.destinations
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// Places the relay, validating that it does not coincide with any node.
    pub fn with_relay(&self, relay: Position) -> Result<NodeLayout> {
        NodeLayout::new(self.source, relay, self.destinations.clone())
    }

    /// Every node position: source first, then destinations.
    pub fn positions(&self) -> impl Iterator<Item = &Position> {
        core::iter::once(&self.source).chain(self.destinations.iter())
    }
}

/// Positions of source, relay and `N >= 1` destinations.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeLayout {
    source: Position,
    relay: Position,
    destinations: Vec<Position>,
}

impl NodeLayout {
    /// Any zero distance between the relay or source and another node is rejected
    /// as [`Error::Singular`].
    pub fn new(source: Position, relay: Position, destinations: Vec<Position>) -> Result<Self> {
        if relay.dim() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim(),
                found: relay.dim(),
            });
        }
        let network = Network::new(source, destinations)?;
        if distance(&source, &relay)? == 0.0 {
            return Err(Error::Singular {
                from: Node::Source,
                to: Node::Relay,
            });
        }
        for (j, d) in network.destinations.iter().enumerate() {
            if distance(&relay, d)? == 0.0 {
                return Err(Error::Singular {
                    from: Node::Relay,
                    to: Node::Destination(j),
                });
            }
        }
        Ok(Self {
            source,
            relay,
            destinations: network.destinations,
        })
    }

    pub fn source(&self) -> &Position {
        &self.source
    }

    pub fn relay(&self) -> &Position {
        &self.relay
    }

    pub fn destinations(&self) -> &[Position] {
        &self.destinations
    }

    pub fn num_destinations(&self) -> usize {
        self.destinations.len()
    }

    pub fn position(&self, node: Node) -> Result<&Position> {
        match node {
            Node::Source => Ok(&self.source),
            Node::Relay => Ok(&self.relay),
            Node::Destination(j) => self.destinations.get(j).ok_or(Error::DestinationIndex {
                index: j,
                count: self.destinations.len(),
            }),
        }
    }
}

/// Path-loss exponent, fading gains and transmit powers.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    alpha: f64,
    xi_default: f64,
    xi_overrides: BTreeMap<(Node, Node), f64>,
    p_s: f64,
    p_r: f64,
}

impl ChannelParams {
    /// Parameters with every fading gain equal to 1.
    pub fn new(alpha: f64, p_s: f64, p_r: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "path-loss exponent must be >= 1",
            });
        }
        for (name, p) in [("p_s", p_s), ("p_r", p_r)] {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "power must be finite and non-negative",
                });
            }
        }
        Ok(Self {
            alpha,
            xi_default: 1.0,
            xi_overrides: BTreeMap::new(),
            p_s,
            p_r,
        })
    }

    /// The normalized setting: `alpha = 2`, unit powers, unit fading gains.
    pub fn unit() -> Self {
        Self::new(2.0, 1.0, 1.0).expect("unit parameters are valid")
    }

    pub fn with_xi_default(mut self, xi: f64) -> Result<Self> {
        check_xi(xi)?;
        self.xi_default = xi;
        Ok(self)
    }

    /// Overrides the fading gain of the ordered pair `(from, to)`.
    pub fn with_xi(mut self, from: Node, to: Node, xi: f64) -> Result<Self> {
        check_xi(xi)?;
        self.xi_overrides.insert((from, to), xi);
        Ok(self)
    }

    pub fn with_powers(mut self, p_s: f64, p_r: f64) -> Result<Self> {
        let fresh = Self::new(self.alpha, p_s, p_r)?;
        self.p_s = fresh.p_s;
        self.p_r = fresh.p_r;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p_s(&self) -> f64 {
        self.p_s
    }

    pub fn p_r(&self) -> f64 {
        self.p_r
    }

    pub fn xi(&self, from: Node, to: Node) -> f64 {
        self.xi_overrides
            .get(&(from, to))
            .copied()
            .unwrap_or(self.xi_default)
    }

    pub fn power(&self, node: Node) -> Result<f64> {
        match node {
            Node::Source => Ok(self.p_s),
            Node::Relay => Ok(self.p_r),
            Node::Destination(_) => Err(Error::NotATransmitter(node)),
        }
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if xi.is_finite() && xi > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "xi",
            reason: "fading gain must be finite and positive",
        })
    }
}

fn link_distance(u: Node, v: Node, layout: &NodeLayout) -> Result<f64> {
    let d = distance(layout.position(u)?, layout.position(v)?)?;
    if d == 0.0 {
        return Err(Error::Singular { from: u, to: v });
    }
    Ok(d)
}

/// Amplitude gain `sqrt(xi) / D^(alpha/2)` of the link `u -> v`.
pub fn channel_gain(u: Node, v: Node, layout: &NodeLayout, params: &ChannelParams) -> Result<f64> {
    let d = link_distance(u, v, layout)?;
    Ok(math::sqrt(params.xi(u, v)) / math::powf(d, params.alpha() / 2.0))
}

/// `xi * P_u / D^alpha` for the link `u -> v`.
pub fn snr(u: Node, v: Node, layout: &NodeLayout, params: &ChannelParams) -> Result<f64> {
    let p = params.power(u)?;
    let d = link_distance(u, v, layout)?;
    Ok(params.xi(u, v) * p / math::powf(d, params.alpha()))
}

/// Link SNRs `(SNR_sr, SNR_s1..SNR_sN, SNR_r1..SNR_rN)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SnrVector {
    snr_sr: f64,
    snr_s: Vec<f64>,
    snr_r: Vec<f64>,
}

impl SnrVector {
    pub fn new(snr_sr: f64, snr_s: Vec<f64>, snr_r: Vec<f64>) -> Result<Self> {
        if snr_s.is_empty() {
            return Err(Error::NoDestinations);
        }
        if snr_s.len() != snr_r.len() {
            return Err(Error::DimensionMismatch {
                expected: snr_s.len(),
                found: snr_r.len(),
            });
        }
        for &v in core::iter::once(&snr_sr).chain(&snr_s).chain(&snr_r) {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NegativeSnr(v));
            }
        }
        Ok(Self {
            snr_sr,
            snr_s,
            snr_r,
        })
    }

    /// Inverse of [`SnrVector::to_vec`]: a flat slice of length `2N + 1`.
    pub fn from_slice(flat: &[f64]) -> Result<Self> {
        if flat.len() < 3 || flat.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: flat.len(),
            });
        }
        let n = (flat.len() - 1) / 2;
        Self::new(flat[0], flat[1..=n].to_vec(), flat[n + 1..].to_vec())
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(1 + 2 * self.n());
        v.push(self.snr_sr);
        v.extend_from_slice(&self.snr_s);
        v.extend_from_slice(&self.snr_r);
        v
    }

    pub fn n(&self) -> usize {
        self.snr_s.len()
    }

    pub fn snr_sr(&self) -> f64 {
        self.snr_sr
    }

    pub fn snr_s(&self) -> &[f64] {
        &self.snr_s
    }

    pub fn snr_r(&self) -> &[f64] {
        &self.snr_r
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j < self.n() {
            Ok(())
        } else {
            Err(Error::DestinationIndex {
                index: j,
                count: self.n(),
            })
        }
    }
}

/// Assembles the SNR vector with destinations in layout order.
pub fn snr_vector(layout: &NodeLayout, params: &ChannelParams) -> Result<SnrVector> {
    let n = layout.num_destinations();
    let snr_sr = snr(Node::Source, Node::Relay, layout, params)?;
    let mut snr_s = Vec::with_capacity(n);
    let mut snr_r = Vec::with_capacity(n);
    for j in 0..n {
        snr_s.push(snr(Node::Source, Node::Destination(j), layout, params)?);
        snr_r.push(snr(Node::Relay, Node::Destination(j), layout, params)?);
    }
    SnrVector::new(snr_sr, snr_s, snr_r)
}

/// Amplitude gains `a_sr`, `a_sj`, `a_rj` (no powers applied).
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGains {
    pub a_sr: f64,
    pub a_s: Vec<f64>,
    pub a_r: Vec<f64>,
}

impl LinkGains {
    pub fn n(&self) -> usize {
        self.a_s.len()
    }
}

pub fn channel_gains(layout: &NodeLayout, params: &ChannelParams) -> Result<LinkGains> {
    let n = layout.num_destinations();
    let a_sr = channel_gain(Node::Source, Node::Relay, layout, params)?;
    let mut a_s = Vec::with_capacity(n);
    let mut a_r = Vec::with_capacity(n);
    for j in 0..n {
        a_s.push(channel_gain(
            Node::Source,
            Node::Destination(j),
            layout,
            params,
        )?);
        a_r.push(channel_gain(
            Node::Relay,
            Node::Destination(j),
            layout,
            params,
        )?);
    }
    Ok(LinkGains { a_sr, a_s, a_r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(c: &[f64]) -> Position {
        Position::new(c).unwrap()
    }

    fn line(relay: f64) -> NodeLayout {
        NodeLayout::new(p(&[0.0]), p(&[relay]), vec![p(&[1.0])]).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&p(&[0.0]), &p(&[1.0])).unwrap(), 1.0);
        assert_eq!(distance(&p(&[0.0, 0.0]), &p(&[3.0, 4.0])).unwrap(), 5.0);
        assert_eq!(
            distance(&p(&[1.0, 1.0, 1.0]), &p(&[1.0, 1.0, 1.0])).unwrap(),
            0.0
        );
        assert_eq!(
            distance(&p(&[0.0]), &p(&[0.0, 1.0])),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn position_validation() {
        assert_eq!(Position::new(&[]), Err(Error::InvalidDimension(0)));
        assert_eq!(Position::new(&[0.0; 4]), Err(Error::InvalidDimension(4)));
        assert_eq!(Position::new(&[f64::NAN]), Err(Error::NonFiniteCoordinate));
    }

    #[test]
    fn gain_examples() {
        let params = ChannelParams::unit();
        // D = 1
        let at_one = NodeLayout::new(p(&[0.0]), p(&[1.0]), vec![p(&[3.0])]).unwrap();
        assert_eq!(
            channel_gain(Node::Source, Node::Relay, &at_one, &params).unwrap(),
            1.0
        );
        // xi = 4, D = 2
        let at_two = NodeLayout::new(p(&[0.0]), p(&[2.0]), vec![p(&[3.0])]).unwrap();
        let params4 = ChannelParams::unit()
            .with_xi(Node::Source, Node::Relay, 4.0)
            .unwrap();
        assert_eq!(
            channel_gain(Node::Source, Node::Relay, &at_two, &params4).unwrap(),
            1.0
        );
        // D = 0.5
        assert_eq!(
            channel_gain(Node::Source, Node::Relay, &line(0.5), &params).unwrap(),
            2.0
        );
    }

    #[test]
    fn snr_examples() {
        let params = ChannelParams::unit();
        assert_eq!(
            snr(Node::Source, Node::Relay, &line(0.5), &params).unwrap(),
            4.0
        );
        let at_one = NodeLayout::new(p(&[0.0]), p(&[1.0]), vec![p(&[3.0])]).unwrap();
        assert_eq!(
            snr(Node::Source, Node::Relay, &at_one, &params).unwrap(),
            1.0
        );
        let p2 = ChannelParams::new(4.0, 2.0, 1.0)
            .unwrap()
            .with_xi(Node::Source, Node::Relay, 3.0)
            .unwrap();
        assert_eq!(snr(Node::Source, Node::Relay, &at_one, &p2).unwrap(), 6.0);
        assert_eq!(
            snr(Node::Destination(0), Node::Relay, &at_one, &params),
            Err(Error::NotATransmitter(Node::Destination(0)))
        );
    }

    #[test]
    fn snr_vector_examples() {
        let params = ChannelParams::unit();
        let s = snr_vector(&line(0.5), &params).unwrap();
        assert_eq!(s, SnrVector::new(4.0, vec![1.0], vec![4.0]).unwrap());
        let s = snr_vector(&line(0.25), &params).unwrap();
        assert_eq!(s.snr_sr(), 16.0);
        assert_eq!(s.snr_s(), &[1.0]);
        assert!((s.snr_r()[0] - 16.0 / 9.0).abs() < 1e-15);

        let mirrored = NodeLayout::new(
            p(&[0.0, 0.0]),
            p(&[0.0, 0.5]),
            vec![p(&[1.0, 0.0]), p(&[-1.0, 0.0])],
        )
        .unwrap();
        let s = snr_vector(&mirrored, &params).unwrap();
        assert_eq!(s.snr_r()[0], s.snr_r()[1]);
    }

    #[test]
    fn coincident_relay_is_singular() {
        let err = NodeLayout::new(p(&[0.0]), p(&[1.0]), vec![p(&[1.0])]).unwrap_err();
        assert_eq!(
            err,
            Error::Singular {
                from: Node::Relay,
                to: Node::Destination(0)
            }
        );
        let err = NodeLayout::new(p(&[0.0]), p(&[0.0]), vec![p(&[1.0])]).unwrap_err();
        assert_eq!(
            err,
            Error::Singular {
                from: Node::Source,
                to: Node::Relay
            }
        );
        assert_eq!(Network::new(p(&[0.0]), vec![]), Err(Error::NoDestinations));
    }

    #[test]
    fn params_validation() {
        assert!(ChannelParams::new(0.5, 1.0, 1.0).is_err());
        assert!(ChannelParams::new(2.0, -1.0, 1.0).is_err());
        assert!(ChannelParams::unit()
            .with_xi(Node::Source, Node::Relay, 0.0)
            .is_err());
        let params = ChannelParams::unit().with_xi_default(2.0).unwrap();
        assert_eq!(params.xi(Node::Relay, Node::Destination(3)), 2.0);
    }

    #[test]
    fn snr_vector_flat_roundtrip() {
        let s = SnrVector::new(1.0, vec![2.0, 3.0], vec![4.0, 5.0]).unwrap();
        assert_eq!(SnrVector::from_slice(&s.to_vec()).unwrap(), s);
        assert!(SnrVector::from_slice(&[1.0, 2.0]).is_err());
        assert_eq!(
            SnrVector::new(-1.0, vec![1.0], vec![1.0]),
            Err(Error::NegativeSnr(-1.0))
        );
    }
}
