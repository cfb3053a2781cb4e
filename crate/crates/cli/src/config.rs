//! Scenario files: the JSON document a run is described by, and its validation.

use std::collections::HashMap;
use std::path::Path;

use relaycap_core::optimize::RelayOptions;
use relaycap_core::{
    ChannelParams, Correlation, Network, Node, Position, RateMode, RhoChoice, SearchBox,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Source,
    Relay,
    Destination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: String,
    pub role: Role,
    pub pos: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XiOverride {
    pub from: String,
    pub to: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// A correlation value, or the keyword `"optimize"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoSpec {
    Value(f64),
    Keyword(String),
}

impl RhoSpec {
    pub fn parse(text: &str) -> Self {
        text.trim().parse().map_or_else(
            |_| RhoSpec::Keyword(text.trim().to_string()),
            RhoSpec::Value,
        )
    }
}

/// The on-disk scenario. Everything except `nodes` has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub nodes: Vec<NodeSpec>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub xi_default: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub xi_overrides: Vec<XiOverride>,
    #[serde(default = "one")]
    pub p_s: f64,
    #[serde(default = "one")]
    pub p_r: f64,
    #[serde(default = "default_mode")]
    pub mode: RateMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoSpec>,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub search_box: Option<BoxSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_alpha() -> f64 {
    2.0
}

fn one() -> f64 {
    1.0
}

fn default_mode() -> RateMode {
    RateMode::Exact
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 1;

/// A validated scenario, ready for the core library.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub network: Network,
    pub relay: Option<Position>,
    pub params: ChannelParams,
    pub mode: RateMode,
    pub bound: Option<String>,
    pub rho: RhoChoice,
    pub search_box: Option<SearchBox>,
    pub resolution: Vec<usize>,
    pub tol: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn require_box(&self) -> Result<&SearchBox> {
        self.search_box
            .as_ref()
            .ok_or_else(|| CliError::field("box", "a search box is required for this command"))
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Replaces the relay node, or adds one, at `pos`.
    pub fn set_relay(&mut self, pos: Vec<f64>) {
        match self.nodes.iter_mut().find(|n| n.role == Role::Relay) {
            Some(n) => n.pos = pos,
            None => self.nodes.push(NodeSpec {
                id: "r".to_string(),
                role: Role::Relay,
                pos,
            }),
        }
    }

    pub fn validate(&self) -> Result<Scenario> {
        if !self.alpha.is_finite() {
            return Err(CliError::field("alpha", "must be a finite number"));
        }
        if self.alpha < 1.0 {
            return Err(CliError::AlphaTooSmall(self.alpha));
        }
        for (field, value) in [("p_s", self.p_s), ("p_r", self.p_r)] {
            if !value.is_finite() {
                return Err(CliError::field(field, "must be a finite number"));
            }
            if value < 0.0 {
                return Err(CliError::NegativePower { field, value });
            }
        }
        if !(self.xi_default.is_finite() && self.xi_default > 0.0) {
            return Err(CliError::field(
                "xi_default",
                "fading gain must be finite and positive",
            ));
        }
        let rho = match &self.rho {
            None => RhoChoice::Fixed(Correlation::ZERO),
            Some(RhoSpec::Value(r)) if r.is_nan() => {
                return Err(CliError::field("rho", "must be a number"))
            }
            Some(RhoSpec::Value(r)) => {
                RhoChoice::Fixed(Correlation::new(*r).map_err(|_| CliError::RhoOutOfRange(*r))?)
            }
            Some(RhoSpec::Keyword(k)) if k == "optimize" => RhoChoice::Optimized,
            Some(RhoSpec::Keyword(k)) => {
                return Err(CliError::field(
                    "rho",
                    format!("expected a number in [0, 1] or \"optimize\", got \"{k}\""),
                ))
            }
        };

        let (network, relay, ids) = self.build_nodes()?;
        let mut params =
            ChannelParams::new(self.alpha, self.p_s, self.p_r)?.with_xi_default(self.xi_default)?;
        for (i, o) in self.xi_overrides.iter().enumerate() {
            let field = format!("xi_overrides[{i}]");
            let lookup = |id: &str| {
                ids.get(id)
                    .copied()
                    .ok_or_else(|| CliError::field(&field, format!("unknown node id `{id}`")))
            };
            let (from, to) = (lookup(&o.from)?, lookup(&o.to)?);
            if matches!(from, Node::Destination(_)) {
                return Err(CliError::field(
                    &field,
                    "`from` must be the source or the relay",
                ));
            }
            if !(o.value.is_finite() && o.value > 0.0) {
                return Err(CliError::field(
                    &field,
                    "fading gain must be finite and positive",
                ));
            }
            params = params.with_xi(from, to, o.value)?;
        }

        let dim = network.dim();
        let search_box = match &self.search_box {
            None => None,
            Some(b) => {
                if b.lower.len() != dim || b.upper.len() != dim {
                    return Err(CliError::field(
                        "box",
                        format!("lower and upper need {dim} coordinate(s)"),
                    ));
                }
                if b.lower.iter().zip(&b.upper).any(|(l, u)| !(l < u)) {
                    return Err(CliError::field(
                        "box",
                        "every lower coordinate must be below the upper one",
                    ));
                }
                Some(
                    SearchBox::new(b.lower.clone(), b.upper.clone())
                        .map_err(|e| CliError::field("box", e.to_string()))?,
                )
            }
        };
        let resolution = match &self.resolution {
            None => RelayOptions::default_resolution(dim),
            Some(r) if r.len() != dim => {
                return Err(CliError::field("resolution", format!("need {dim} entries")))
            }
            Some(r) if r.iter().any(|&n| n < 2) => {
                return Err(CliError::field(
                    "resolution",
                    "every axis needs at least 2 points",
                ))
            }
            Some(r) => r.clone(),
        };
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::field("tol", "must be positive"));
        }

        Ok(Scenario {
            network,
            relay,
            params,
            mode: self.mode,
            bound: self.bound.clone(),
            rho,
            search_box,
            resolution,
            tol,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        })
    }

    fn build_nodes(&self) -> Result<(Network, Option<Position>, HashMap<String, Node>)> {
        let mut ids = HashMap::new();
        let mut source = None;
        let mut relay = None;
        let mut dests = Vec::new();
        let dim = self.nodes.first().map_or(0, |n| n.pos.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let field = format!("nodes[{i}]");
            if n.id.is_empty() {
                return Err(CliError::field(&field, "id must not be empty"));
            }
            if n.pos.len() != dim {
                return Err(CliError::field(
                    &field,
                    format!("expected {dim} coordinate(s), found {}", n.pos.len()),
                ));
            }
            let pos = Position::new(&n.pos).map_err(|e| CliError::field(&field, e.to_string()))?;
            let node = match n.role {
                Role::Source if source.is_some() => {
                    return Err(CliError::field(&field, "only one source is allowed"))
                }
                Role::Relay if relay.is_some() => {
                    return Err(CliError::field(&field, "only one relay is allowed"))
                }
                Role::Source => {
                    source = Some(pos);
                    Node::Source
                }
                Role::Relay => {
                    relay = Some(pos);
                    Node::Relay
                }
                Role::Destination => {
                    dests.push(pos);
                    Node::Destination(dests.len() - 1)
                }
            };
            if ids.insert(n.id.clone(), node).is_some() {
                return Err(CliError::field(&field, format!("duplicate id `{}`", n.id)));
            }
        }
        for (i, a) in self.nodes.iter().enumerate() {
            if let Some(b) = self.nodes[i + 1..].iter().find(|b| b.pos == a.pos) {
                return Err(CliError::CoincidentNodes {
                    a: a.id.clone(),
                    b: b.id.clone(),
                });
            }
        }
        let source = source.ok_or_else(|| CliError::field("nodes", "a source node is required"))?;
        if dests.is_empty() {
            return Err(CliError::field(
                "nodes",
                "at least one destination is required",
            ));
        }
        Ok((Network::new(source, dests)?, relay, ids))
    }
}
