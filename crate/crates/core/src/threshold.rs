//! Threshold temperatures above which the concurrence is exactly zero.
//!
//! In zero field the threshold obeys `γ = (T/2)·ln(e^{2/T} − 2)`, which is
//! solved here by bisection. For every other parameter set the threshold
//! is located numerically on the concurrence of the thermal state.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::concurrence;
use crate::error::{Error, Result};
use crate::models::{thermal_state, ModelParams};

const BRACKET_LOW: f64 = 1e-3;
const BRACKET_HIGH: f64 = 10.0;
/// Below this temperature `e^{2/T} − 2` is handled in log form.
const LOG_DOMAIN_BELOW: f64 = 0.1;
const RESIDUAL_TOL: f64 = 1e-10;
const SCAN_POINTS: usize = 200;
const NUMERIC_BISECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub gamma: f64,
    pub b1: f64,
    pub b2: f64,
    pub t_th: f64,
    /// Set at `γ = 1`, where entanglement is absent at every temperature.
    pub degenerate: bool,
}

/// Right-hand side `(T/2)·ln(e^{2/T} − 2)`; `−∞` once `e^{2/T} ≤ 2`.
pub fn threshold_rhs(t: f64) -> f64 {
    if t < LOG_DOMAIN_BELOW {
        // ln(e^{2/T} − 2) = 2/T + ln(1 − 2e^{−2/T})
        1.0 + t / 2.0 * (-2.0 * (-2.0 / t).exp()).ln_1p()
    } else {
        let inner = (2.0 / t).exp() - 2.0;
        if inner <= 0.0 {
            f64::NEG_INFINITY
        } else {
            t / 2.0 * inner.ln()
        }
    }
}

/// `γ − (T/2)·ln(e^{2/T} − 2)`; zero at the threshold.
pub fn threshold_residual(gamma: f64, t: f64) -> f64 {
    gamma - threshold_rhs(t)
}

/// Result of the zero-field threshold solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropicThreshold {
    pub t_th: f64,
    pub degenerate: bool,
}

/// Zero-field threshold temperature for anisotropy `gamma`.
///
/// The right-hand side decreases monotonically in `T`, so plain bisection
/// on `[1e-3, 10]` converges to the unique root.
pub fn tth_anisotropic(gamma: f64) -> Result<AnisotropicThreshold> {
    if !(-1.0..=1.0).contains(&gamma) {
        return Err(Error::domain(format!(
            "gamma must lie in [-1, 1], got {gamma}"
        )));
    }
    if gamma == 1.0 {
        return Ok(AnisotropicThreshold {
            t_th: 0.0,
            degenerate: true,
        });
    }
    let (mut lo, mut hi) = (BRACKET_LOW, BRACKET_HIGH);
    // residual is increasing in T; bisect down to float resolution
    while hi - lo > 2.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if threshold_residual(gamma, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    debug_assert!(threshold_residual(gamma, mid).abs() < RESIDUAL_TOL);
    Ok(AnisotropicThreshold {
        t_th: mid,
        degenerate: false,
    })
}

/// Numerically located threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericThreshold {
    pub t_th: f64,
    /// Number of positive-to-zero transitions seen on the coarse scan; the
    /// largest-temperature one is returned. Values above one deserve a look.
    pub transitions: usize,
}

impl NumericThreshold {
    pub fn has_multiple_transitions(&self) -> bool {
        self.transitions > 1
    }
}

fn entangled(p: &ModelParams, t: f64) -> Result<bool> {
    Ok(concurrence(&thermal_state(p, t)?)? > 0.0)
}

/// Largest temperature in `(0, t_max]` where the concurrence drops to zero.
///
/// Returns `None` when no positive-to-zero transition is seen on the scan
/// grid (never entangled, or still entangled at `t_max`).
pub fn tth_numeric(p: &ModelParams, t_max: f64) -> Result<Option<NumericThreshold>> {
    p.validate()?;
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::domain(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let grid: Vec<f64> = (1..=SCAN_POINTS)
        .map(|k| t_max * k as f64 / SCAN_POINTS as f64)
        .collect();
    let flags = grid
        .iter()
        .map(|&t| entangled(p, t))
        .collect::<Result<Vec<_>>>()?;
    let transitions: Vec<usize> = flags
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] && !w[1])
        .map(|(k, _)| k)
        .collect();
    let Some(&last) = transitions.last() else {
        return Ok(None);
    };
    let (mut lo, mut hi) = (grid[last], grid[last + 1]);
    while hi - lo > NUMERIC_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if entangled(p, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(NumericThreshold {
        t_th: 0.5 * (lo + hi),
        transitions: transitions.len(),
    }))
}

/// Zero-field threshold at each `γ`, evaluated in parallel, order preserved.
pub fn threshold_curve(gammas: &[f64]) -> Result<Vec<ThresholdPoint>> {
    gammas
        .par_iter()
        .map(|&gamma| {
            let th = tth_anisotropic(gamma)?;
            Ok(ThresholdPoint {
                gamma,
                b1: 0.0,
                b2: 0.0,
                t_th: th.t_th,
                degenerate: th.degenerate,
            })
        })
        .collect()
}
