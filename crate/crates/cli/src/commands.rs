use std::fmt::Write as _;

use rayon::prelude::*;
use relaycap_core::geometry::snr_vector;
use relaycap_core::optimize::{
    evaluate_relay, grid_points, maximize_rho, optimize_relay, Grid, RelayOptions, RhoObjective,
};
use relaycap_core::qc::{
    certify_bordered_minors, coherent_sum_eigen_check, composition_rule_checks,
    cs_equivalence_check, logdet_ratio_suite, quasiconcavity_sample_test, rate_bound_claims,
    relay_cut_counterexample, CertResult, Claim, Constants, Expectation, FuncId, FuncSpec, Verdict,
};
use relaycap_core::rates::rate_of;
use relaycap_core::{
    Bound, Correlation, Cut, Error as CoreError, OptResult, RateMode, RateReport, RelayObjective,
    RhoChoice,
};
use serde::Serialize;

use crate::config::Scenario;
use crate::error::{CliError, Result};
use crate::output::{num, point, sweep_csv, Unit};

/// Text (or JSON) to print and whether the run counts as a pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

pub const OBJECTIVE_NAMES: [&str; 11] = [
    "df_coherent",
    "df_noncoherent",
    "cs_fixed_rho",
    "cs_coherent",
    "two_hop",
    "rdf",
    "dt",
    "qf",
    "cs",
    "df",
    "2h",
];

/// Maps a bound name to an objective. `cs` and `df` take the scenario correlation;
/// the long names fix it.
pub fn parse_objective(name: &str, rho: RhoChoice) -> Result<RelayObjective> {
    Ok(match name {
        "df_coherent" => RelayObjective::df_coherent(),
        "df_noncoherent" => RelayObjective::df_noncoherent(),
        "cs_fixed_rho" => match rho {
            RhoChoice::Fixed(r) => RelayObjective::cs_fixed_rho(r),
            RhoChoice::Optimized => {
                return Err(CliError::field(
                    "rho",
                    "cs_fixed_rho needs a numeric correlation",
                ))
            }
        },
        "cs_coherent" => RelayObjective::cs_coherent(),
        "two_hop" | "2h" => RelayObjective::two_hop(),
        "rdf" => RelayObjective::rdf(),
        "dt" => RelayObjective::dt(),
        "qf" => RelayObjective::qf(),
        "cs" => RelayObjective {
            bound: Bound::CutSet,
            rho,
        },
        "df" => RelayObjective {
            bound: Bound::DecodeForward,
            rho,
        },
        other => {
            return Err(CliError::field(
                "bound",
                format!(
                    "unknown bound `{other}`; expected one of {}",
                    OBJECTIVE_NAMES.join(", ")
                ),
            ))
        }
    })
}

const RATE_DEFAULT: [&str; 6] = ["cs", "dt", "df", "qf", "rdf", "2h"];

#[derive(Serialize)]
struct RateJson<'a> {
    unit: Unit,
    relay: Vec<f64>,
    reports: &'a [RateReport],
}

/// Full rate reports at the scenario's relay position.
pub fn rate_reports(scenario: &Scenario) -> Result<Vec<RateReport>> {
    let relay = scenario
        .relay
        .ok_or_else(|| CliError::field("nodes", "`rate` needs a relay node or --relay"))?;
    let layout = scenario.network.with_relay(relay)?;
    let s = snr_vector(&layout, &scenario.params)?;
    let (names, explicit): (Vec<&str>, bool) = match scenario.bound.as_deref() {
        None | Some("all") => (RATE_DEFAULT.to_vec(), false),
        Some(list) => (list.split(',').map(str::trim).collect(), true),
    };
    let mut out = Vec::new();
    for name in names {
        let obj = parse_objective(name, scenario.rho)?;
        let rho = match (obj.bound.uses_rho(), obj.rho) {
            (false, _) => Correlation::ZERO,
            (true, RhoChoice::Fixed(r)) => r,
            (true, RhoChoice::Optimized) => {
                let inner = if obj.bound == Bound::CutSet {
                    RhoObjective::CutSet
                } else {
                    RhoObjective::DecodeForward
                };
                Correlation::new(maximize_rho(inner, &s, scenario.mode, 1e-9)?.argmax[0])?
            }
        };
        match rate_of(obj.bound, rho, &s, scenario.mode) {
            Ok(r) => out.push(r),
            // Without an explicit request, skip bounds the scenario does not support.
            Err(CoreError::UnsupportedMode | CoreError::UnsupportedTopology { .. })
                if !explicit => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

pub fn cmd_rate(scenario: &Scenario, unit: Unit, json: bool) -> Result<Outcome> {
    let reports: Vec<RateReport> = rate_reports(scenario)?
        .iter()
        .map(|r| unit.scale_report(r))
        .collect();
    let relay = scenario
        .relay
        .as_ref()
        .map(|p| p.coords().to_vec())
        .unwrap_or_default();
    if json {
        return Ok(Outcome::ok(to_json(&RateJson {
            unit,
            relay,
            reports: &reports,
        })));
    }
    let mut text = format!(
        "relay {}  mode {}  unit {}\n",
        point(&relay),
        mode_name(scenario.mode),
        unit.name()
    );
    for r in &reports {
        write!(text, "{:<4} {}", r.bound.short_name(), num(r.value)).unwrap();
        if let Some(rho) = r.rho_used {
            write!(text, "  rho={}", num(rho)).unwrap();
        }
        if let Some(beta) = r.beta {
            write!(text, "  beta={}", num(beta)).unwrap();
        }
        let cut = match r.bottleneck.cut {
            Cut::Broadcast => "broadcast",
            Cut::MultipleAccess => "multiple_access",
        };
        writeln!(
            text,
            "  bottleneck=destination {} ({cut})",
            r.bottleneck.dest
        )
        .unwrap();
    }
    Ok(Outcome::ok(text))
}

/// Display name of an objective; `df` and `cs` resolve to their correlation variant.
pub fn objective_label(obj: &RelayObjective) -> &'static str {
    match (obj.bound, obj.rho) {
        (Bound::DecodeForward, RhoChoice::Fixed(r)) if r == Correlation::ZERO => "df_noncoherent",
        (Bound::DecodeForward, RhoChoice::Fixed(_)) => "df_fixed_rho",
        (Bound::DecodeForward, RhoChoice::Optimized) => "df_coherent",
        (Bound::CutSet, RhoChoice::Fixed(_)) => "cs_fixed_rho",
        (Bound::CutSet, RhoChoice::Optimized) => "cs_coherent",
        (Bound::TwoHop, _) => "two_hop",
        (Bound::RoutingDecodeForward, _) => "rdf",
        (Bound::DirectTransmission, _) => "dt",
        (Bound::QuantizeForward, _) => "qf",
    }
}

/// The optimize/sweep objective; decode-forward at the scenario correlation by default.
fn objective_of(scenario: &Scenario) -> Result<(String, RelayObjective)> {
    let obj = parse_objective(scenario.bound.as_deref().unwrap_or("df"), scenario.rho)?;
    Ok((objective_label(&obj).to_string(), obj))
}

pub fn optimize(scenario: &Scenario) -> Result<(String, OptResult)> {
    let (name, obj) = objective_of(scenario)?;
    let options = RelayOptions {
        resolution: scenario.resolution.clone(),
        tol: scenario.tol,
        ..RelayOptions::default()
    };
    let res = optimize_relay(
        &obj,
        &scenario.network,
        &scenario.params,
        scenario.require_box()?,
        scenario.mode,
        &options,
    )?;
    Ok((name, res))
}

#[derive(Serialize)]
struct OptimizeJson<'a> {
    objective: &'a str,
    unit: Unit,
    result: OptResult,
}

pub fn cmd_optimize(scenario: &Scenario, unit: Unit, json: bool) -> Result<Outcome> {
    let (name, mut res) = optimize(scenario)?;
    res.value = unit.scale(res.value);
    for b in &mut res.basins {
        b.value = unit.scale(b.value);
    }
    if json {
        return Ok(Outcome::ok(to_json(&OptimizeJson {
            objective: &name,
            unit,
            result: res,
        })));
    }
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), num);
    let mut text = String::new();
    writeln!(text, "objective    {name}").unwrap();
    writeln!(text, "argmax       {}", point(&res.argmax)).unwrap();
    writeln!(text, "value        {} {}", num(res.value), unit.name()).unwrap();
    writeln!(text, "rho          {}", opt(res.rho)).unwrap();
    writeln!(text, "beta         {}", opt(res.beta)).unwrap();
    writeln!(text, "evaluations  {}", res.evaluations).unwrap();
    writeln!(text, "achieved_tol {}", num(res.achieved_tol)).unwrap();
    if res.basins.len() > 1 {
        for b in &res.basins {
            writeln!(text, "basin        {} {}", point(&b.argmax), num(b.value)).unwrap();
        }
    }
    Ok(Outcome::ok(text))
}

/// Evaluates the objective at every grid cell in parallel. Cells where the rate is
/// undefined (the relay on top of a node) are `None`. Each cell is computed
/// independently, so the result matches a sequential sweep bit for bit.
pub fn sweep(scenario: &Scenario) -> Result<Grid> {
    let (_, obj) = objective_of(scenario)?;
    let bounds = scenario.require_box()?.clone();
    let points = grid_points(&bounds, &scenario.resolution)?;
    let values: Vec<Option<f64>> = points
        .par_iter()
        .map(|x| {
            evaluate_relay(&obj, &scenario.network, x, &scenario.params, scenario.mode)
                .ok()
                .map(|v| v.value)
        })
        .collect();
    if values.iter().all(Option::is_none) {
        // The same mode or topology error would appear at every cell; surface it.
        let probe = points.iter().find_map(|x| {
            evaluate_relay(&obj, &scenario.network, x, &scenario.params, scenario.mode).err()
        });
        return Err(probe.unwrap_or(CoreError::NoValidCells).into());
    }
    Ok(Grid::from_values(bounds, &scenario.resolution, values)?)
}

pub fn cmd_sweep(scenario: &Scenario, unit: Unit) -> Result<(Grid, String)> {
    let grid = sweep(scenario)?;
    let csv = sweep_csv(&grid, unit);
    Ok((grid, csv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Minors,
    EquivalenceCs,
    Sample,
    Claims,
    Composition,
    Eigen,
    Logdet,
    All,
}

pub struct CheckSettings {
    pub suite: Suite,
    pub target: Option<String>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    /// `None` runs both rate modes where the suite depends on one.
    pub mode: Option<RateMode>,
}

/// One certificate in a check report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub suite: &'static str,
    pub name: String,
    pub expectation: Expectation,
    pub as_expected: bool,
    pub result: CertResult,
}

impl CheckEntry {
    fn holds(suite: &'static str, name: impl Into<String>, result: CertResult) -> Self {
        let as_expected = result.passed();
        Self {
            suite,
            name: name.into(),
            expectation: Expectation::Holds,
            as_expected,
            result,
        }
    }

    fn from_claim(suite: &'static str, prefix: &str, c: Claim) -> Self {
        let as_expected = c.as_expected();
        Self {
            suite,
            name: format!("{prefix}{}", c.name),
            expectation: c.expectation,
            as_expected,
            result: c.result,
        }
    }
}

const DEFAULT_TRIALS: usize = 1000;
const EIGEN_DEFAULT_POINTS: usize = 100;

fn modes(m: Option<RateMode>) -> Vec<RateMode> {
    m.map_or_else(|| vec![RateMode::Exact, RateMode::LowSnr], |m| vec![m])
}

/// Runs the requested certificate suite. `sample` passes only when the target is
/// quasi-concave on the samples; every other suite passes when each certificate
/// matches its expectation.
pub fn run_checks(set: &CheckSettings) -> Result<(Vec<CheckEntry>, bool)> {
    let trials = set.trials.unwrap_or(DEFAULT_TRIALS);
    let (seed, tol) = (set.seed, set.tol);
    let mut out = Vec::new();
    let all = set.suite == Suite::All;

    if set.suite == Suite::Sample {
        let target = set
            .target
            .as_deref()
            .ok_or_else(|| CliError::Usage("check sample needs --target NAME".to_string()))?;
        let entry = sample_target(target, trials, seed, tol, set.mode)?;
        let passed = entry.result.verdict == Verdict::Pass;
        return Ok((vec![entry], passed));
    }
    if all || set.suite == Suite::Minors {
        let ids: Vec<FuncId> = match set.target.as_deref() {
            Some(t) if !all => vec![FuncId::from_name(t)
                .filter(|id| id.is_building_block())
                .ok_or_else(|| CliError::Usage(format!("unknown building block `{t}`")))?],
            _ => FuncId::BUILDING_BLOCKS.to_vec(),
        };
        for id in ids {
            out.push(CheckEntry::holds(
                "minors",
                id.name(),
                certify_bordered_minors(id, Constants::default(), trials, seed)?,
            ));
        }
    }
    if all || set.suite == Suite::EquivalenceCs {
        for m in modes(set.mode) {
            out.push(CheckEntry::holds(
                "equivalence-cs",
                mode_name(m),
                cs_equivalence_check(trials, seed, tol, m)?,
            ));
        }
    }
    if all || set.suite == Suite::Claims {
        for m in modes(set.mode) {
            for c in rate_bound_claims(m, trials, seed, tol)? {
                out.push(CheckEntry::from_claim(
                    "claims",
                    &format!("{}/", mode_name(m)),
                    c,
                ));
            }
        }
        out.push(CheckEntry::from_claim(
            "claims",
            "",
            relay_cut_counterexample(trials, seed, tol)?,
        ));
    }
    if all || set.suite == Suite::Composition {
        for c in composition_rule_checks(trials, seed, tol)? {
            out.push(CheckEntry::from_claim("composition", "", c));
        }
    }
    if all || set.suite == Suite::Eigen {
        let points = set.trials.unwrap_or(EIGEN_DEFAULT_POINTS);
        out.push(CheckEntry::holds(
            "eigen",
            "coherent_sum_hessian",
            coherent_sum_eigen_check(points, seed)?,
        ));
    }
    if all || set.suite == Suite::Logdet {
        for (dim, minor, r) in logdet_ratio_suite(4, trials, seed, tol)? {
            out.push(CheckEntry::holds(
                "logdet",
                format!("dim{dim}/minor{minor:?}"),
                r,
            ));
        }
    }
    let passed = out.iter().all(|e| e.as_expected);
    Ok((out, passed))
}

/// Quasi-concavity sampling of one named function: `relay_cut`, a rate-bound claim name
/// (optionally prefixed `exact/` or `low_snr/`), or a function from the certificate
/// catalogue.
fn sample_target(
    target: &str,
    trials: usize,
    seed: u64,
    tol: f64,
    mode: Option<RateMode>,
) -> Result<CheckEntry> {
    if target == "relay_cut" || target == "gtilde" {
        return Ok(CheckEntry::from_claim(
            "sample",
            "",
            relay_cut_counterexample(trials, seed, tol)?,
        ));
    }
    if let Some(id) = FuncId::from_name(target) {
        let spec = FuncSpec::new(id, Constants::default())?;
        let r = quasiconcavity_sample_test(
            |x: &[f64]| spec.eval(x),
            &spec.sample_box(),
            trials,
            seed,
            tol,
        )?;
        return Ok(CheckEntry::holds("sample", id.name(), r));
    }
    let (m, name) = match target.split_once('/') {
        Some(("exact", n)) => (RateMode::Exact, n),
        Some(("low_snr", n)) => (RateMode::LowSnr, n),
        _ => (mode.unwrap_or(RateMode::Exact), target),
    };
    let claim = rate_bound_claims(m, trials, seed, tol)?
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| CliError::Usage(format!("unknown sample target `{target}`")))?;
    Ok(CheckEntry::from_claim(
        "sample",
        &format!("{}/", mode_name(m)),
        claim,
    ))
}

pub fn cmd_check(set: &CheckSettings, json: bool) -> Result<Outcome> {
    let (entries, passed) = run_checks(set)?;
    if json {
        #[derive(Serialize)]
        struct CheckJson<'a> {
            passed: bool,
            checks: &'a [CheckEntry],
        }
        return Ok(Outcome {
            text: to_json(&CheckJson {
                passed,
                checks: &entries,
            }),
            passed,
        });
    }
    let mut text = String::new();
    for e in &entries {
        let verdict = match e.result.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        };
        let note = match (e.expectation, e.as_expected) {
            (Expectation::Holds, _) => "",
            (Expectation::Fails, true) => "  (expected failure)",
            (Expectation::Fails, false) => "  (expected a violation, none found)",
            (Expectation::Open, _) => "  (open, informational)",
        };
        writeln!(
            text,
            "{:<15} {:<48} {:<13} trials={} failures={} indeterminate={}{note}",
            e.suite, e.name, verdict, e.result.trials, e.result.failures, e.result.indeterminate
        )
        .unwrap();
        if let Some(v) = e.result.violations.iter().find(|v| !v.indeterminate) {
            let pts: Vec<String> = v.points.iter().map(|p| point(p)).collect();
            writeln!(
                text,
                "    witness: {} = {} at {}",
                v.quantity,
                num(v.value),
                pts.join(" ")
            )
            .unwrap();
        }
    }
    writeln!(text, "overall: {}", if passed { "pass" } else { "fail" }).unwrap();
    Ok(Outcome { text, passed })
}

pub fn mode_name(m: RateMode) -> &'static str {
    match m {
        RateMode::Exact => "exact",
        RateMode::LowSnr => "low_snr",
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}
