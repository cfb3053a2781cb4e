use std::fmt::Write as _;
use std::path::Path;

use relaycap_core::optimize::Grid;
use relaycap_core::RateReport;
use serde::Serialize;

use crate::error::{CliError, Result};

/// Significant digits used for every number the CLI prints.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Nats,
    Bits,
}

impl Unit {
    pub fn from_flag(bits: bool) -> Self {
        if bits {
            Unit::Bits
        } else {
            Unit::Nats
        }
    }

    pub fn scale(self, nats: f64) -> f64 {
        match self {
            Unit::Nats => nats,
            Unit::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Unit::Nats => "nats",
            Unit::Bits => "bits",
        }
    }

    /// Converts every rate in a report.
    pub fn scale_report(self, report: &RateReport) -> RateReport {
        let mut out = report.clone();
        out.value = self.scale(out.value);
        for t in &mut out.per_dest {
            t.broadcast = self.scale(t.broadcast);
            t.multiple_access = t.multiple_access.map(|v| self.scale(v));
        }
        out
    }
}

/// `%g`-style formatting: `digits` significant digits, trailing zeros trimmed,
/// exponent form outside `[1e-5, 10^digits)`.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn num(v: f64) -> String {
    fmt_sig(v, SIG_DIGITS)
}

pub fn point(x: &[f64]) -> String {
    format!(
        "({})",
        x.iter().map(|v| num(*v)).collect::<Vec<_>>().join(", ")
    )
}

/// Row-major CSV of a sweep: `x[,y[,z]],value,status`.
pub fn sweep_csv(grid: &Grid, unit: Unit) -> String {
    let axes = ["x", "y", "z"];
    let mut out = String::new();
    for a in &axes[..grid.dim()] {
        out.push_str(a);
        out.push(',');
    }
    out.push_str("value,status\n");
    for (i, v) in grid.values().iter().enumerate() {
        for c in grid.point(i) {
            out.push_str(&num(c));
            out.push(',');
        }
        match v {
            Some(v) => writeln!(out, "{},ok", num(unit.scale(*v))).expect("string write"),
            None => out.push_str(",invalid\n"),
        }
    }
    out
}

/// Writes the whole buffer in one call.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use relaycap_core::SearchBox;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(2.0, 12), "2");
        assert_eq!(fmt_sig(0.1, 12), "0.1");
        assert_eq!(fmt_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(fmt_sig(-2.0 / 3.0, 12), "-0.666666666667");
        assert_eq!(fmt_sig(123456.789, 4), "1.235e5");
        assert_eq!(fmt_sig(1234.5678, 6), "1234.57");
        assert_eq!(fmt_sig(1.5e-7, 12), "1.5e-7");
        assert_eq!(fmt_sig(2.5e13, 12), "2.5e13");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(0.00012345, 3), "0.000123");
    }

    #[test]
    fn csv_layout() {
        let b = SearchBox::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
        let g = Grid::from_values(
            b,
            &[2, 2],
            vec![Some(1.0), None, Some(0.5), Some(2.0 / 3.0)],
        )
        .unwrap();
        let csv = sweep_csv(&g, Unit::Nats);
        assert_eq!(
            csv,
            "x,y,value,status\n0,0,1,ok\n0,2,,invalid\n1,0,0.5,ok\n1,2,0.666666666667,ok\n"
        );
    }

    #[test]
    fn bits_conversion() {
        assert!((Unit::Bits.scale(std::f64::consts::LN_2) - 1.0).abs() < 1e-15);
        assert_eq!(Unit::Nats.scale(0.7), 0.7);
    }
}
