//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! prints its own PASS/FAIL line; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use dimercorr::correlations::sampled_decomposition_averages;
use dimercorr::random::{random_density_matrix, rng_from_seed};
use dimercorr::sweep::{
    count_peaks, detect_quantum_exceeds_classical, detect_zero_plateau, Column, DEFAULT_PROMINENCE,
};
use dimercorr::{
    concurrence, entanglement_of_formation, is_separable_ppt, report, run_sweep, thermal_state,
    thermal_state_analytic, threshold_curve, tth_anisotropic, tth_numeric, AxisName, AxisSpec,
    ComplexMatrix, DensityMatrix, ModelParams, Result, SweepSpec,
};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

fn triple_error(p: &DensityMatrix, want: [f64; 3]) -> Result<f64> {
    let r = report(p)?;
    Ok([
        r.total - want[0],
        r.quantum - want[1],
        r.classical - want[2],
    ]
    .iter()
    .fold(0.0, |m, d| m.max(d.abs())))
}

fn singlet_ground_state() -> Result<Outcome> {
    let rho = thermal_state(&ModelParams::heisenberg(0.0)?, 0.01)?;
    let err = triple_error(&rho, [2.0, 1.0, 1.0])?;
    outcome(
        err <= 1e-3,
        format!("max deviation from (2, 1, 1) = {err:.2e}"),
    )
}

fn classical_mixture() -> Result<Outcome> {
    let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]))?;
    let err = triple_error(&rho, [1.0, 0.0, 1.0])?;
    outcome(
        err <= 1e-12,
        format!("max deviation from (1, 0, 1) = {err:.2e}"),
    )
}

fn gibbs_equivalence() -> Result<Outcome> {
    let mut rng = rng_from_seed(20_240_001);
    let mut worst = 0.0_f64;
    let mut families = [0usize; 2];
    for _ in 0..200 {
        let t = rng.random_range(0.05..=5.0);
        let p = if rng.random_bool(0.5) {
            families[0] += 1;
            ModelParams::heisenberg(rng.random_range(-1.0..=1.0))?
        } else {
            families[1] += 1;
            ModelParams::xy(rng.random_range(-3.0..=3.0), rng.random_range(-3.0..=3.0))?
        };
        let diff = thermal_state_analytic(&p, t)?.max_abs_diff(thermal_state(&p, t)?.matrix());
        worst = worst.max(diff);
    }
    outcome(
        worst <= 1e-10,
        format!(
            "200 points ({} zero-field, {} planar), worst entry diff {worst:.2e}",
            families[0], families[1]
        ),
    )
}

/// Zero-field concurrence written out directly from the eigenvalue expression.
fn zero_field_concurrence_oracle(gamma: f64, t: f64) -> f64 {
    let a = ((1.0 - gamma) / t).sinh();
    let b = ((1.0 - gamma) / t).cosh();
    let e = (-(1.0 + gamma) / t).exp();
    ((a - e) / (b + e)).max(0.0)
}

fn closed_form_concurrence() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    let mut n = 0;
    for i in 0..10 {
        let gamma = -1.0 + 2.0 * i as f64 / 9.0;
        for t in [0.1, 0.6, 1.2, 2.0, 3.5] {
            let rho = thermal_state_analytic(&ModelParams::heisenberg(gamma)?, t)?;
            worst = worst.max((concurrence(&rho)? - zero_field_concurrence_oracle(gamma, t)).abs());
            n += 1;
        }
    }
    outcome(
        worst <= 1e-10,
        format!("{n}-point grid, worst diff {worst:.2e}"),
    )
}

fn threshold_closed_forms() -> Result<Outcome> {
    let at_zero = tth_anisotropic(0.0)?.t_th;
    let at_minus_one = tth_anisotropic(-1.0)?.t_th;
    let e0 = (at_zero - 2.0 / 3f64.ln()).abs();
    let e1 = (at_minus_one - 2.0 / (1.0 + 2f64.sqrt()).ln()).abs();
    let gammas: Vec<f64> = (0..100).map(|k| -1.0 + 1.99 * k as f64 / 99.0).collect();
    let curve = threshold_curve(&gammas)?;
    let decreasing = curve.windows(2).all(|w| w[1].t_th < w[0].t_th);
    outcome(
        e0 <= 1e-6 && e1 <= 1e-6 && decreasing,
        format!(
            "T_th(0) = {at_zero:.9} (err {e0:.1e}), T_th(-1) = {at_minus_one:.9} (err {e1:.1e}), \
             100-point curve on [-1, 0.99] strictly decreasing: {decreasing}"
        ),
    )
}

fn field_independent_threshold() -> Result<Outcome> {
    let mut values = Vec::new();
    for b in [0.0, 0.5, 1.0, 1.5] {
        match tth_numeric(&ModelParams::xy(b, b)?, 5.0)? {
            Some(th) => values.push(th.t_th),
            None => return outcome(false, format!("no threshold found below T = 5 at B = {b}")),
        }
    }
    let spread = values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        - values.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    outcome(
        spread <= 1e-6,
        format!("T_th = {values:.9?}, pairwise spread {spread:.2e}"),
    )
}

fn t_slice(
    base: ModelParams,
    start: f64,
    stop: f64,
    points: usize,
) -> Result<dimercorr::SweepTable> {
    run_sweep(&SweepSpec::one_d(
        base,
        None,
        AxisSpec::new(AxisName::T, start, stop, points)?,
    )?)
}

fn quantum_exceeds_classical() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut any = false;
    for b in [0.95, 1.05] {
        let table = t_slice(ModelParams::xy(b, b)?, 0.01, 2.0, 200)?;
        let intervals = detect_quantum_exceeds_classical(&table)?;
        any |= !intervals.is_empty();
        let spans: Vec<String> = intervals
            .iter()
            .map(|i| format!("[{:.3}, {:.3}]", i.start, i.stop))
            .collect();
        parts.push(format!(
            "B = {b}: {}",
            if spans.is_empty() {
                "none".into()
            } else {
                spans.join(" ")
            }
        ));
    }
    outcome(any, parts.join("; "))
}

fn peak_splitting() -> Result<Outcome> {
    let slice = |t: f64| -> Result<dimercorr::SweepTable> {
        run_sweep(&SweepSpec::one_d(
            ModelParams::xy(0.0, 0.0)?,
            Some(t),
            AxisSpec::new(AxisName::BAnti, -3.0, 3.0, 201)?,
        )?)
    };
    let low = count_peaks(&slice(0.3)?, Column::Quantum, DEFAULT_PROMINENCE)?;
    let mid = count_peaks(&slice(1.6)?, Column::Quantum, DEFAULT_PROMINENCE)?;
    let plateaus = detect_zero_plateau(&slice(2.5)?, Column::Quantum)?;
    let centred = plateaus.iter().find(|i| i.contains(0.0));
    outcome(
        low == 1 && mid == 2 && centred.is_some(),
        format!(
            "peaks at T=0.3: {low}, at T=1.6: {mid}; zero plateau at T=2.5 around B1=0: {}",
            centred.map_or("none".into(), |i| format!(
                "[{:.2}, {:.2}]",
                i.start, i.stop
            ))
        ),
    )
}

fn isotropic_separability() -> Result<Outcome> {
    let table = t_slice(ModelParams::heisenberg(1.0)?, 0.05, 4.0, 200)?;
    let quantum = table.column(Column::Quantum)?;
    let total = table.column(Column::Total)?;
    let classical = table.column(Column::Classical)?;
    let max_q = quantum.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    let gap = total
        .iter()
        .zip(&classical)
        .fold(0.0_f64, |a, (t, c)| a.max((t - c).abs()));
    outcome(
        quantum.iter().all(|&q| q == 0.0) && gap <= 1e-12,
        format!(
            "200 temperatures, max |quantum| = {max_q:.1e}, max |total - classical| = {gap:.1e}"
        ),
    )
}

fn ppt_oracle() -> Result<Outcome> {
    let mut rng = rng_from_seed(20_240_010);
    let mut disagreements = 0;
    let mut entangled = 0;
    for _ in 0..1000 {
        let rho = random_density_matrix(&mut rng);
        let positive = concurrence(&rho)? > 1e-9;
        entangled += positive as usize;
        if positive == is_separable_ppt(&rho)? {
            disagreements += 1;
        }
    }
    outcome(
        disagreements == 0,
        format!("1000 states ({entangled} entangled), {disagreements} disagreements"),
    )
}

fn formation_lower_bound() -> Result<Outcome> {
    let per_state = (0..20u64)
        .into_par_iter()
        .map(|k| {
            let rho = random_density_matrix(&mut rng_from_seed(20_240_011 + k));
            let ef = entanglement_of_formation(&rho)?;
            let averages =
                sampled_decomposition_averages(&rho, 4 + (k as usize) % 5, 10_000, 7_000 + k)?;
            let below = averages.iter().filter(|&&a| a < ef - 1e-9).count();
            let min = averages.iter().fold(f64::INFINITY, |a, &b| a.min(b));
            Ok((below, min - ef))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: usize = per_state.iter().map(|s| s.0).sum();
    let closest = per_state.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    outcome(
        violations == 0,
        format!("20 states x 10^4 decompositions, {violations} violations, smallest margin {closest:.4}"),
    )
}

fn high_temperature_decay() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for gamma in [-1.0, 0.0, 0.9] {
        let r = report(&thermal_state(&ModelParams::heisenberg(gamma)?, 100.0)?)?;
        worst = [r.total, r.quantum, r.classical, r.concurrence]
            .into_iter()
            .fold(worst, |a, v| a.max(v.abs()));
    }
    outcome(
        worst <= 1e-3,
        format!("largest correlation at T=100: {worst:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("singlet ground state", singlet_ground_state),
        ("classical mixture", classical_mixture),
        ("analytic vs spectral Gibbs", gibbs_equivalence),
        ("closed-form concurrence", closed_form_concurrence),
        ("threshold closed forms", threshold_closed_forms),
        ("field-independent threshold", field_independent_threshold),
        ("quantum exceeds classical", quantum_exceeds_classical),
        ("peak splitting", peak_splitting),
        ("isotropic separability", isotropic_separability),
        ("PPT oracle", ppt_oracle),
        ("formation lower bound", formation_lower_bound),
        ("high-temperature decay", high_temperature_decay),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = check().unwrap_or_else(|e| Outcome {
            passed: false,
            detail: format!("error: {e}"),
        });
        failed += !result.passed as usize;
        println!(
            "[{}] {:>2} {name}: {} ({:.1}s)",
            if result.passed { "PASS" } else { "FAIL" },
            k + 1,
            result.detail,
            started.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
