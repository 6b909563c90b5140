//! Oracle suites: each check pits an analytic route against an independent
//! numerical one and reports the worst residual seen.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::correlations::{
    concurrence, entanglement_of_formation, is_separable_ppt, sampled_decomposition_averages,
};
use crate::error::{Error, Result};
use crate::models::{thermal_state, thermal_state_analytic, zero_field_concurrence, ModelParams};
use crate::random::{random_density_matrix, rng_from_seed};

pub const GIBBS_TOL: f64 = 1e-10;
pub const WOOTTERS_TOL: f64 = 1e-10;
/// Concurrence above this counts as entangled for the PPT comparison.
pub const PPT_CONCURRENCE_TOL: f64 = 1e-9;
/// Sampled averages may undershoot `E_f` by at most this much.
pub const ENSEMBLE_SLACK: f64 = 1e-9;

pub const DEFAULT_GIBBS_POINTS: usize = 200;
pub const DEFAULT_PPT_SAMPLES: usize = 1000;
pub const DEFAULT_ENSEMBLE_SAMPLES: usize = 10_000;
pub const DEFAULT_ENSEMBLE_STATES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Gibbs,
    Wootters,
    Ppt,
    Ensemble,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "gibbs" => Suite::Gibbs,
            "wootters" => Suite::Wootters,
            "ppt" => Suite::Ppt,
            "ensemble" => Suite::Ensemble,
            other => return Err(Error::usage(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides the per-suite sample count (PPT states, decompositions per state).
    pub samples: Option<usize>,
    pub ensemble_states: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            samples: None,
            ensemble_states: DEFAULT_ENSEMBLE_STATES,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub worst_residual: f64,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {} (worst residual {:.3e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.worst_residual
        )
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    match suite {
        Suite::All => Ok(vec![
            check_gibbs(cfg)?,
            check_wootters()?,
            check_ppt(cfg)?,
            check_ensemble(cfg)?,
        ]),
        Suite::Gibbs => Ok(vec![check_gibbs(cfg)?]),
        Suite::Wootters => Ok(vec![check_wootters()?]),
        Suite::Ppt => Ok(vec![check_ppt(cfg)?]),
        Suite::Ensemble => Ok(vec![check_ensemble(cfg)?]),
    }
}

/// A random parameter point with a closed-form thermal state.
pub fn random_supported_point<R: Rng + ?Sized>(rng: &mut R) -> (ModelParams, f64) {
    let t = rng.random_range(0.05..=5.0);
    let p = if rng.random_bool(0.5) {
        ModelParams::heisenberg(rng.random_range(-1.0..=1.0))
    } else {
        ModelParams::xy(rng.random_range(-3.0..=3.0), rng.random_range(-3.0..=3.0))
    }
    .expect("sampled parameters are in range");
    (p, t)
}

/// Closed-form thermal states against the spectral Gibbs construction.
pub fn check_gibbs(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut rng = rng_from_seed(cfg.seed);
    let points: Vec<_> = (0..DEFAULT_GIBBS_POINTS)
        .map(|_| random_supported_point(&mut rng))
        .collect();
    let worst = points
        .iter()
        .map(|(p, t)| {
            Ok(thermal_state_analytic(p, *t)?.max_abs_diff(thermal_state(p, *t)?.matrix()))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(CheckResult {
        name: "gibbs",
        passed: worst < GIBBS_TOL,
        worst_residual: worst,
        detail: format!("{} random supported points, T in [0.05, 5]", points.len()),
    })
}

/// The `(γ, T)` grid used by [`check_wootters`]: 10 anisotropies × 5 temperatures.
pub fn wootters_grid() -> Vec<(f64, f64)> {
    let gammas = (0..10).map(|k| -1.0 + 2.0 * k as f64 / 9.0);
    gammas
        .flat_map(|g| [0.1, 0.5, 1.0, 2.0, 3.0].into_iter().map(move |t| (g, t)))
        .collect()
}

/// Closed-form zero-field concurrence against the Wootters pipeline.
pub fn check_wootters() -> Result<CheckResult> {
    let grid = wootters_grid();
    let mut worst = 0.0_f64;
    for &(g, t) in &grid {
        let rho = thermal_state_analytic(&ModelParams::heisenberg(g)?, t)?;
        worst = worst.max((concurrence(&rho)? - zero_field_concurrence(g, t)?).abs());
    }
    Ok(CheckResult {
        name: "wootters",
        passed: worst < WOOTTERS_TOL,
        worst_residual: worst,
        detail: format!("{}-point (gamma, T) grid", grid.len()),
    })
}

/// Concurrence-positive must coincide with PPT violation on random states.
pub fn check_ppt(cfg: &VerifyConfig) -> Result<CheckResult> {
    let samples = cfg.samples.unwrap_or(DEFAULT_PPT_SAMPLES);
    let mut rng = rng_from_seed(cfg.seed);
    let mut disagreements = 0;
    let mut entangled = 0;
    // residual: smallest concurrence among disagreeing states' margins
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let rho = random_density_matrix(&mut rng);
        let c = concurrence(&rho)?;
        let ppt = is_separable_ppt(&rho)?;
        let positive = c > PPT_CONCURRENCE_TOL;
        if positive {
            entangled += 1;
        }
        if positive == ppt {
            disagreements += 1;
            worst = worst.max(c);
        }
    }
    Ok(CheckResult {
        name: "ppt",
        passed: disagreements == 0,
        worst_residual: worst,
        detail: format!(
            "{}/{samples} agreements ({entangled} entangled)",
            samples - disagreements
        ),
    })
}

/// Sampled decompositions never beat the closed-form `E_f`.
pub fn check_ensemble(cfg: &VerifyConfig) -> Result<CheckResult> {
    let samples = cfg.samples.unwrap_or(DEFAULT_ENSEMBLE_SAMPLES);
    let per_state = (0..cfg.ensemble_states)
        .into_par_iter()
        .map(|k| {
            let state_seed = cfg.seed.wrapping_add(k as u64);
            let rho = random_density_matrix(&mut rng_from_seed(state_seed ^ 0x5eed));
            let ef = entanglement_of_formation(&rho)?;
            let size = 4 + k % 5;
            let averages = sampled_decomposition_averages(&rho, size, samples, state_seed)?;
            let violations = averages
                .iter()
                .filter(|&&a| a < ef - ENSEMBLE_SLACK)
                .count();
            let undershoot = averages
                .iter()
                .map(|&a| ef - a)
                .fold(f64::NEG_INFINITY, f64::max);
            Ok((violations, undershoot))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: usize = per_state.iter().map(|v| v.0).sum();
    let worst = per_state
        .iter()
        .map(|v| v.1)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(CheckResult {
        name: "ensemble",
        passed: violations == 0,
        worst_residual: worst.max(0.0),
        detail: format!(
            "{violations} lower-bound violations over {} states x {samples} decompositions",
            cfg.ensemble_states
        ),
    })
}
