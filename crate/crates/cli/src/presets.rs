//! Built-in scenarios with unit powers, unit fading and path-loss exponent 2.

use relaycap_core::RateMode;

use crate::config::{BoxSpec, NodeSpec, Role, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    OneDRelay,
    Square2d,
    Poly3d,
}

const SQUARE_DESTINATIONS: [[f64; 2]; 5] = [
    [10.0, 0.0],
    [0.0, 10.0],
    [10.0, 10.0],
    [-10.0, 10.0],
    [10.0, -10.0],
];

const POLY_DESTINATIONS: [[f64; 3]; 5] = [
    [10.0, 0.0, 2.0],
    [0.0, 10.0, -2.0],
    [-8.0, -6.0, 0.0],
    [2.0, 2.0, 10.0],
    [3.0, -4.0, -9.0],
];

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::OneDRelay, Preset::Square2d, Preset::Poly3d];

    pub fn name(self) -> &'static str {
        match self {
            Preset::OneDRelay => "one_d_relay",
            Preset::Square2d => "square_2d",
            Preset::Poly3d => "poly_3d",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::OneDRelay => "source at 0, destination at 1, relay searched on [0, 1]; low-SNR",
            Preset::Square2d => "source at the origin, five destinations on a 20 x 20 square; relay box [-10, 10]^2; low-SNR",
            Preset::Poly3d => "source at the origin, five non-coplanar destinations; relay box [-10, 10]^3; low-SNR",
        }
    }

    pub fn config(self) -> ScenarioConfig {
        let node = |id: &str, role, pos: &[f64]| NodeSpec {
            id: id.to_string(),
            role,
            pos: pos.to_vec(),
        };
        let (nodes, lower, upper, res) = match self {
            Preset::OneDRelay => (
                vec![
                    node("s", Role::Source, &[0.0]),
                    node("r", Role::Relay, &[0.5]),
                    node("d1", Role::Destination, &[1.0]),
                ],
                vec![0.0],
                vec![1.0],
                vec![101],
            ),
            Preset::Square2d => {
                let mut nodes = vec![
                    node("s", Role::Source, &[0.0, 0.0]),
                    node("r", Role::Relay, &[5.0, 5.0]),
                ];
                for (j, d) in SQUARE_DESTINATIONS.iter().enumerate() {
                    nodes.push(node(&format!("d{}", j + 1), Role::Destination, d));
                }
                (nodes, vec![-10.0; 2], vec![10.0; 2], vec![51, 51])
            }
            Preset::Poly3d => {
                let mut nodes = vec![
                    node("s", Role::Source, &[0.0; 3]),
                    node("r", Role::Relay, &[1.0, 1.0, 1.0]),
                ];
                for (j, d) in POLY_DESTINATIONS.iter().enumerate() {
                    nodes.push(node(&format!("d{}", j + 1), Role::Destination, d));
                }
                (nodes, vec![-10.0; 3], vec![10.0; 3], vec![21, 21, 21])
            }
        };
        ScenarioConfig {
            nodes,
            alpha: 2.0,
            xi_default: 1.0,
            xi_overrides: Vec::new(),
            p_s: 1.0,
            p_r: 1.0,
            mode: RateMode::LowSnr,
            bound: None,
            rho: None,
            search_box: Some(BoxSpec { lower, upper }),
            resolution: Some(res),
            tol: None,
            seed: None,
        }
    }
}
