//! Grid evaluation of correlation reports and feature detection on 1D slices.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{report, CorrelationReport};
use crate::error::{Error, Result};
use crate::models::{thermal_state_auto, ModelParams};

/// Default prominence, in bits, for [`count_peaks`].
pub const DEFAULT_PROMINENCE: f64 = 0.01;
/// Column values at or below this count as zero in [`detect_zero_plateau`].
pub const ZERO_PLATEAU_TOL: f64 = 1e-10;
/// Margin for [`detect_quantum_exceeds_classical`].
pub const EXCESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxisName {
    #[serde(rename = "T")]
    T,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "b1")]
    B1,
    #[serde(rename = "b2")]
    B2,
    /// `B₁ = B₂ = v`.
    #[serde(rename = "b_uniform")]
    BUniform,
    /// `B₁ = v`, `B₂ = −v`.
    #[serde(rename = "b_anti")]
    BAnti,
}

impl AxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::T => "T",
            AxisName::Gamma => "gamma",
            AxisName::B1 => "b1",
            AxisName::B2 => "b2",
            AxisName::BUniform => "b_uniform",
            AxisName::BAnti => "b_anti",
        }
    }

    fn touches_b1(&self) -> bool {
        matches!(self, AxisName::B1 | AxisName::BUniform | AxisName::BAnti)
    }

    fn touches_b2(&self) -> bool {
        matches!(self, AxisName::B2 | AxisName::BUniform | AxisName::BAnti)
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "T" | "t" => AxisName::T,
            "gamma" => AxisName::Gamma,
            "b1" => AxisName::B1,
            "b2" => AxisName::B2,
            "b_uniform" => AxisName::BUniform,
            "b_anti" => AxisName::BAnti,
            other => return Err(Error::usage(format!("unknown axis {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub name: AxisName,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl AxisSpec {
    pub fn new(name: AxisName, start: f64, stop: f64, points: usize) -> Result<Self> {
        let axis = Self {
            name,
            start,
            stop,
            points,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::validation(format!(
                "axis {} needs at least 2 points, got {}",
                self.name, self.points
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start >= self.stop {
            return Err(Error::validation(format!(
                "axis {} needs start < stop, got {}..{}",
                self.name, self.start, self.stop
            )));
        }
        Ok(())
    }

    /// Evenly spaced values with both endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let span = self.stop - self.start;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.stop
                } else {
                    self.start + span * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

impl FromStr for AxisSpec {
    type Err = Error;

    /// `name=start:stop:points`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::usage(format!(
                "axis must look like name=start:stop:points, got {s:?}"
            ))
        };
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, points] = parts.as_slice() else {
            return Err(bad());
        };
        let start: f64 = start.trim().parse().map_err(|_| bad())?;
        let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
        let points: usize = points.trim().parse().map_err(|_| bad())?;
        AxisSpec::new(name.trim().parse()?, start, stop, points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    /// Temperature used when no axis is `T`.
    pub temperature: Option<f64>,
    pub axis1: AxisSpec,
    pub axis2: Option<AxisSpec>,
}

impl SweepSpec {
    pub fn one_d(base: ModelParams, temperature: Option<f64>, axis: AxisSpec) -> Result<Self> {
        let spec = Self {
            base,
            temperature,
            axis1: axis,
            axis2: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn two_d(
        base: ModelParams,
        temperature: Option<f64>,
        axis1: AxisSpec,
        axis2: AxisSpec,
    ) -> Result<Self> {
        let spec = Self {
            base,
            temperature,
            axis1,
            axis2: Some(axis2),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn axes(&self) -> Vec<&AxisSpec> {
        std::iter::once(&self.axis1)
            .chain(self.axis2.as_ref())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for axis in self.axes() {
            axis.validate()?;
        }
        if let Some(a2) = &self.axis2 {
            let a1 = &self.axis1;
            if a1.name == a2.name {
                return Err(Error::validation(format!("axis {} given twice", a1.name)));
            }
            if (a1.name.touches_b1() && a2.name.touches_b1())
                || (a1.name.touches_b2() && a2.name.touches_b2())
            {
                return Err(Error::validation(format!(
                    "axes {} and {} both set the same field",
                    a1.name, a2.name
                )));
            }
        }
        let has_t_axis = self.axes().iter().any(|a| a.name == AxisName::T);
        if !has_t_axis && self.temperature.is_none() {
            return Err(Error::validation(
                "a temperature is required when T is not an axis",
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(|a| a.points).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis values of every grid point, row-major over `(axis1, axis2)`.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let v1 = self.axis1.values();
        match &self.axis2 {
            None => v1.into_iter().map(|x| vec![x]).collect(),
            Some(a2) => {
                let v2 = a2.values();
                v1.iter()
                    .flat_map(|&x| v2.iter().map(move |&y| vec![x, y]))
                    .collect()
            }
        }
    }

    /// Model parameters and temperature at one grid point.
    pub fn point(&self, values: &[f64]) -> (ModelParams, f64) {
        let mut p = self.base;
        let mut t = self.temperature.unwrap_or(f64::NAN);
        for (axis, &v) in self.axes().iter().zip(values) {
            match axis.name {
                AxisName::T => t = v,
                AxisName::Gamma => p.gamma = v,
                AxisName::B1 => p.b1 = v,
                AxisName::B2 => p.b2 = v,
                AxisName::BUniform => {
                    p.b1 = v;
                    p.b2 = v;
                }
                AxisName::BAnti => {
                    p.b1 = v;
                    p.b2 = -v;
                }
            }
        }
        (p, t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    pub params: ModelParams,
    pub temperature: f64,
    pub outcome: Result<CorrelationReport>,
}

impl SweepRow {
    pub fn report(&self) -> Result<&CorrelationReport> {
        self.outcome.as_ref().map_err(Clone::clone)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

pub fn evaluate_point(p: &ModelParams, t: f64) -> Result<CorrelationReport> {
    report(&thermal_state_auto(p, t)?)
}

/// Evaluates every grid point in parallel; rows come back in row-major order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let rows = spec
        .grid()
        .into_par_iter()
        .map(|axis_values| {
            let (params, temperature) = spec.point(&axis_values);
            let outcome = params
                .validate()
                .and_then(|_| evaluate_point(&params, temperature));
            SweepRow {
                axis_values,
                params,
                temperature,
                outcome,
            }
        })
        .collect();
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    Total,
    Quantum,
    Classical,
    Concurrence,
}

impl Column {
    pub fn get(&self, r: &CorrelationReport) -> f64 {
        match self {
            Column::Total => r.total,
            Column::Quantum => r.quantum,
            Column::Classical => r.classical,
            Column::Concurrence => r.concurrence,
        }
    }
}

impl FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "total" => Column::Total,
            "quantum" => Column::Quantum,
            "classical" => Column::Classical,
            "concurrence" => Column::Concurrence,
            other => return Err(Error::usage(format!("unknown column {other:?}"))),
        })
    }
}

/// A run of consecutive grid points, given by its first and last axis value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub stop: f64,
    pub start_index: usize,
    pub stop_index: usize,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.start <= x && x <= self.stop
    }
}

impl SweepTable {
    pub fn is_one_d(&self) -> bool {
        self.spec.axis2.is_none()
    }

    fn require_one_d(&self) -> Result<()> {
        if self.is_one_d() {
            Ok(())
        } else {
            Err(Error::usage("this analysis needs a 1D sweep"))
        }
    }

    /// Values of a column; fails if any row failed to evaluate.
    pub fn column(&self, column: Column) -> Result<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| row.report().map(|r| column.get(r)))
            .collect()
    }

    pub fn axis1_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.axis_values[0]).collect()
    }

    /// Axis values of the row with the largest value in `column` (first on ties).
    pub fn argmax(&self, column: Column) -> Result<Vec<f64>> {
        let values = self.column(column)?;
        let best = values
            .iter()
            .enumerate()
            .fold(None, |acc: Option<(usize, f64)>, (i, &v)| match acc {
                Some((_, b)) if b >= v => acc,
                _ => Some((i, v)),
            })
            .ok_or_else(|| Error::usage("empty table"))?;
        Ok(self.rows[best.0].axis_values.clone())
    }

    fn intervals_where(&self, mask: &[bool]) -> Vec<Interval> {
        let x = self.axis1_values();
        let mut out = Vec::new();
        let mut start = None;
        for (i, &m) in mask.iter().chain(std::iter::once(&false)).enumerate() {
            match (m, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    out.push(Interval {
                        start: x[s],
                        stop: x[i - 1],
                        start_index: s,
                        stop_index: i - 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        out
    }
}

/// Maximal runs where `quantum > classical + 1e-12`.
pub fn detect_quantum_exceeds_classical(table: &SweepTable) -> Result<Vec<Interval>> {
    table.require_one_d()?;
    let q = table.column(Column::Quantum)?;
    let c = table.column(Column::Classical)?;
    let mask: Vec<bool> = q.iter().zip(&c).map(|(q, c)| *q > c + EXCESS_TOL).collect();
    Ok(table.intervals_where(&mask))
}

/// Maximal runs where the column is `≤ 1e-10`.
pub fn detect_zero_plateau(table: &SweepTable, column: Column) -> Result<Vec<Interval>> {
    table.require_one_d()?;
    let v = table.column(column)?;
    let mask: Vec<bool> = v.iter().map(|&x| x <= ZERO_PLATEAU_TOL).collect();
    Ok(table.intervals_where(&mask))
}

/// Number of interior local maxima with prominence `≥ min_prominence`.
pub fn count_peaks(table: &SweepTable, column: Column, min_prominence: f64) -> Result<usize> {
    table.require_one_d()?;
    let v = table.column(column)?;
    Ok(peak_prominences(&v)
        .into_iter()
        .filter(|&(_, p)| p >= min_prominence)
        .count())
}

/// Number of interior local minima with prominence `≥ min_prominence`.
pub fn count_minima(table: &SweepTable, column: Column, min_prominence: f64) -> Result<usize> {
    table.require_one_d()?;
    let v: Vec<f64> = table.column(column)?.into_iter().map(|x| -x).collect();
    Ok(peak_prominences(&v)
        .into_iter()
        .filter(|&(_, p)| p >= min_prominence)
        .count())
}

/// Interior local maxima (flat tops count once, reported at their midpoint)
/// with their topographic prominence.
pub fn peak_prominences(values: &[f64]) -> Vec<(usize, f64)> {
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i - 1] < values[i] {
            let mut r = i;
            while r + 1 < n && values[r + 1] == values[i] {
                r += 1;
            }
            if r + 1 < n && values[r + 1] < values[i] {
                peaks.push((i + r) / 2);
            }
            i = r + 1;
        } else {
            i += 1;
        }
    }
    peaks
        .into_iter()
        .map(|p| {
            let h = values[p];
            let mut left_min = h;
            for &x in values[..p].iter().rev() {
                if x > h {
                    break;
                }
                left_min = left_min.min(x);
            }
            let mut right_min = h;
            for &x in &values[p + 1..] {
                if x > h {
                    break;
                }
                right_min = right_min.min(x);
            }
            (p, h - left_min.max(right_min))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let a: AxisSpec = "T=0.05:4:200".parse().unwrap();
        assert_eq!(a.name, AxisName::T);
        assert_eq!(a.points, 200);
        let v = a.values();
        assert_eq!(v[0], 0.05);
        assert_eq!(*v.last().unwrap(), 4.0);
        assert!("b_anti=-3:3:61".parse::<AxisSpec>().is_ok());
        assert!("T=1:0:10".parse::<AxisSpec>().is_err());
        assert!("T=0:1:1".parse::<AxisSpec>().is_err());
        assert!("speed=0:1:10".parse::<AxisSpec>().is_err());
        assert!("T=0:1".parse::<AxisSpec>().is_err());
    }

    #[test]
    fn spec_validation() {
        let base = ModelParams::xy(0.0, 0.0).unwrap();
        let a = |s: &str| s.parse::<AxisSpec>().unwrap();
        assert!(SweepSpec::two_d(base, Some(1.0), a("b1=-1:1:3"), a("b1=-1:1:3")).is_err());
        assert!(SweepSpec::two_d(base, Some(1.0), a("b_uniform=-1:1:3"), a("b2=-1:1:3")).is_err());
        assert!(SweepSpec::two_d(base, Some(1.0), a("b1=-1:1:3"), a("b2=-1:1:3")).is_ok());
        assert!(SweepSpec::one_d(base, None, a("b1=-1:1:3")).is_err());
        assert!(SweepSpec::one_d(base, None, a("T=0.1:1:3")).is_ok());
    }

    #[test]
    fn grid_is_row_major() {
        let base = ModelParams::xy(0.0, 0.0).unwrap();
        let spec = SweepSpec::two_d(
            base,
            Some(1.0),
            "b1=0:1:2".parse().unwrap(),
            "b2=0:2:3".parse().unwrap(),
        )
        .unwrap();
        assert_eq!(
            spec.grid(),
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, 2.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![1.0, 2.0]
            ]
        );
        let (p, t) = spec.point(&[1.0, 2.0]);
        assert_eq!((p.b1, p.b2, t), (1.0, 2.0, 1.0));
    }

    #[test]
    fn non_positive_temperature_is_a_row_error() {
        let spec = SweepSpec::one_d(
            ModelParams::heisenberg(0.0).unwrap(),
            None,
            "T=0:1:3".parse().unwrap(),
        )
        .unwrap();
        let table = run_sweep(&spec).unwrap();
        assert!(matches!(table.rows[0].outcome, Err(Error::Domain(_))));
        assert!(table.rows[1].outcome.is_ok());
        assert!(table.column(Column::Total).is_err());
    }

    #[test]
    fn prominence_basics() {
        assert!(peak_prominences(&[1.0; 10]).is_empty());
        let p = peak_prominences(&[0.0, 1.0, 0.5, 2.0, 0.0]);
        assert_eq!(p, vec![(1, 0.5), (3, 2.0)]);
        // flat top counted once
        assert_eq!(peak_prominences(&[0.0, 1.0, 1.0, 1.0, 0.0]), vec![(2, 1.0)]);
        // edges are not peaks
        assert!(peak_prominences(&[3.0, 2.0, 1.0]).is_empty());
    }

    #[test]
    fn analyses_reject_two_d_tables() {
        let spec = SweepSpec::two_d(
            ModelParams::xy(0.0, 0.0).unwrap(),
            Some(1.0),
            "b1=0:1:2".parse().unwrap(),
            "b2=0:1:2".parse().unwrap(),
        )
        .unwrap();
        let table = run_sweep(&spec).unwrap();
        assert!(matches!(
            detect_quantum_exceeds_classical(&table),
            Err(Error::Usage(_))
        ));
        assert!(count_peaks(&table, Column::Quantum, DEFAULT_PROMINENCE).is_err());
        assert!(detect_zero_plateau(&table, Column::Quantum).is_err());
        assert!("entropy".parse::<Column>().is_err());
    }
}
