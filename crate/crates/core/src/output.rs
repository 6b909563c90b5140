//! Flat records for CSV/JSON export. Numbers are rendered with 12
//! significant digits, `.` as decimal separator, independent of locale.

use serde::{Deserialize, Serialize};

use crate::correlations::CorrelationReport;
use crate::models::ModelParams;
use crate::sweep::SweepRow;
use crate::threshold::ThresholdPoint;

pub const SIGNIFICANT_DIGITS: usize = 12;

pub const CSV_HEADER: &str = "T,gamma,b1,b2,total,quantum,classical,concurrence";
pub const THRESHOLD_CSV_HEADER: &str = "gamma,t_th,degenerate";

/// Formats like C's `%.{sig}g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt12(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        fmt12(x).parse().unwrap_or(x)
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    #[serde(rename = "T")]
    pub t: f64,
    pub gamma: f64,
    pub b1: f64,
    pub b2: f64,
    pub total: f64,
    pub quantum: f64,
    pub classical: f64,
    pub concurrence: f64,
}

impl OutputRecord {
    pub fn new(p: &ModelParams, t: f64, r: &CorrelationReport) -> Self {
        Self {
            t,
            gamma: p.gamma,
            b1: p.b1,
            b2: p.b2,
            total: r.total,
            quantum: r.quantum,
            classical: r.classical,
            concurrence: r.concurrence,
        }
    }

    pub fn from_row(row: &SweepRow) -> Option<Self> {
        row.outcome
            .as_ref()
            .ok()
            .map(|r| Self::new(&row.params, row.temperature, r))
    }

    fn fields(&self) -> [f64; 8] {
        [
            self.t,
            self.gamma,
            self.b1,
            self.b2,
            self.total,
            self.quantum,
            self.classical,
            self.concurrence,
        ]
    }

    pub fn csv_line(&self) -> String {
        self.fields().map(fmt12).join(",")
    }

    /// Same record with every field rounded as it would be printed.
    pub fn rounded(&self) -> Self {
        let [t, gamma, b1, b2, total, quantum, classical, concurrence] = self.fields().map(round12);
        Self {
            t,
            gamma,
            b1,
            b2,
            total,
            quantum,
            classical,
            concurrence,
        }
    }
}

/// Header plus one `\n`-terminated line per record.
pub fn to_csv(records: &[OutputRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

pub fn threshold_csv(points: &[ThresholdPoint]) -> String {
    let mut out = String::new();
    out.push_str(THRESHOLD_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt12(p.gamma),
            fmt12(p.t_th),
            p.degenerate
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (1.0, "1"),
            (0.05, "0.05"),
            (2.0 / 3f64.ln(), "1.82047845325"),
            (-1.0, "-1"),
            (1e-7, "1e-07"),
            (1.5e-5, "1.5e-05"),
            (0.0001234, "0.0001234"),
            (123456789012345.0, "1.23456789012e+14"),
            (999999999999.9, "1e+12"),
            (0.1 + 0.2, "0.3"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt12(x), want, "{x}");
        }
        assert_eq!(fmt12(-0.0), "0");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [0.1 + 0.2, 2.0 / 3.0, 1e-13 / 3.0, 12345.678901234567] {
            let r = round12(x);
            assert_eq!(round12(r), r);
            assert!((r - x).abs() <= 1e-11 * x.abs());
        }
    }
}
