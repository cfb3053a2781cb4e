use proptest::prelude::*;
use relaycap_core::geometry::{distance, snr, snr_vector};
use relaycap_core::optimize::{maximize_rho, RhoObjective};
use relaycap_core::rates::{rate_2h_snr, rate_cs, rate_df, rate_dt, rate_qf};
use relaycap_core::{
    ChannelParams, Correlation, Network, Node, NodeLayout, Position, RateMode, RateReport,
    SnrVector,
};

fn snr_vec(n: usize) -> impl Strategy<Value = SnrVector> {
    prop::collection::vec(0.0..10.0f64, 2 * n + 1).prop_map(|v| SnrVector::from_slice(&v).unwrap())
}

fn any_snr() -> impl Strategy<Value = SnrVector> {
    (1usize..=4).prop_flat_map(snr_vec)
}

fn mode() -> impl Strategy<Value = RateMode> {
    prop_oneof![Just(RateMode::Exact), Just(RateMode::LowSnr)]
}

fn rho() -> impl Strategy<Value = Correlation> {
    (0.0..=1.0f64).prop_map(|r| Correlation::new(r).unwrap())
}

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, dim)
}

fn min_of_terms(r: &RateReport) -> f64 {
    r.per_dest
        .iter()
        .flat_map(|t| core::iter::once(t.broadcast).chain(t.multiple_access))
        .fold(f64::INFINITY, f64::min)
}

fn line(relay: f64, dest: f64) -> NodeLayout {
    let p = |x: f64| Position::new(&[x]).unwrap();
    NodeLayout::new(p(0.0), p(relay), vec![p(dest)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bound_ordering(s in any_snr(), m in mode(), r in rho()) {
        let cs_star = maximize_rho(RhoObjective::CutSet, &s, m, 1e-10).unwrap().value;
        prop_assert!(rate_dt(&s, m).value <= cs_star + 1e-12);
        prop_assert!(rate_qf(&s, m).value <= cs_star + 1e-12);
        prop_assert!(rate_df(r, &s, m).value <= rate_cs(r, &s, m).value);
    }

    #[test]
    fn report_value_is_min_of_terms(s in any_snr(), m in mode(), r in rho()) {
        for report in [rate_cs(r, &s, m), rate_df(r, &s, m), rate_dt(&s, m), rate_qf(&s, m)] {
            prop_assert!((report.value - min_of_terms(&report)).abs() <= 1e-12);
        }
    }

    #[test]
    fn rates_nondecreasing_in_each_snr(s in any_snr(), m in mode(), idx in 0usize..9, bump in 1e-6..1.0f64) {
        let mut flat = s.to_vec();
        let i = idx % flat.len();
        flat[i] += bump;
        let up = SnrVector::from_slice(&flat).unwrap();
        let zero = Correlation::ZERO;
        prop_assert!(rate_cs(zero, &up, m).value >= rate_cs(zero, &s, m).value);
        prop_assert!(rate_df(zero, &up, m).value >= rate_df(zero, &s, m).value);
        prop_assert!(rate_qf(&up, m).value >= rate_qf(&s, m).value);
    }

    #[test]
    fn df_noncoherent_dominates_two_hop(s in any_snr()) {
        prop_assert!(rate_df(Correlation::ZERO, &s, RateMode::LowSnr).value >= rate_2h_snr(&s).value);
    }

    #[test]
    fn snr_strictly_decreasing_in_distance(d1 in 0.01..100.0f64, gap in 1e-3..10.0f64, alpha in 1.0..6.0f64) {
        let params = ChannelParams::new(alpha, 1.0, 1.0).unwrap();
        let near = snr(Node::Source, Node::Destination(0), &line(-1.0, d1), &params).unwrap();
        let far = snr(Node::Source, Node::Destination(0), &line(-1.0, d1 + gap), &params).unwrap();
        prop_assert!(far < near);
    }

    #[test]
    fn snr_linear_in_power(d in 0.01..100.0f64, p in 0.0..100.0f64, alpha in 1.0..6.0f64) {
        let layout = line(0.5 * d, d);
        let one = ChannelParams::new(alpha, p, p).unwrap();
        let two = ChannelParams::new(alpha, 2.0 * p, 2.0 * p).unwrap();
        for (u, v) in [(Node::Source, Node::Relay), (Node::Source, Node::Destination(0)), (Node::Relay, Node::Destination(0))] {
            prop_assert_eq!(snr(u, v, &layout, &two).unwrap(), 2.0 * snr(u, v, &layout, &one).unwrap());
        }
    }

    #[test]
    fn distance_power_convex_in_relay(
        (a, b, node) in (1usize..=3).prop_flat_map(|d| (point(d), point(d), point(d))),
        lambda in 0.0..=1.0f64,
        alpha in 1.0..6.0f64,
    ) {
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect();
        let n = Position::new(&node).unwrap();
        let pow = |x: &[f64]| distance(&Position::new(x).unwrap(), &n).unwrap().powf(alpha);
        let rhs = lambda * pow(&a) + (1.0 - lambda) * pow(&b);
        prop_assert!(pow(&mix) <= rhs * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn snr_vector_follows_layout_order(dests in prop::collection::vec(point(2), 1..5), relay in point(2)) {
        let source = Position::new(&[0.0, 0.0]).unwrap();
        let ds: Vec<Position> = dests.iter().map(|d| Position::new(d).unwrap()).collect();
        let Ok(net) = Network::new(source, ds.clone()) else { return Ok(()); };
        let Ok(layout) = net.with_relay(Position::new(&relay).unwrap()) else { return Ok(()); };
        let s = snr_vector(&layout, &ChannelParams::unit()).unwrap();
        for (j, d) in ds.iter().enumerate() {
            let dist = distance(&source, d).unwrap();
            prop_assert!((s.snr_s()[j] - 1.0 / (dist * dist)).abs() <= 1e-12 * s.snr_s()[j].max(1.0));
        }
    }
}
