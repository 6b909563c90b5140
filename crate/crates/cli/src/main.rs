use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dimercorr::output::{self, OutputRecord};
use dimercorr::sweep::{self, AxisName, AxisSpec, SweepSpec};
use dimercorr::verify::{self, Suite, VerifyConfig};
use dimercorr::{threshold_curve, Error, ModelParams};

const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "dimercorr",
    version,
    about = "Correlations of two-qubit Heisenberg dimer thermal states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point.
    Point {
        #[command(flatten)]
        model: ModelArgs,
        /// Temperature in units of J.
        #[arg(long, allow_hyphen_values = true)]
        temp: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate a 1D or 2D parameter grid.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Fixed temperature when T is not an axis.
        #[arg(long, allow_hyphen_values = true)]
        temp: Option<f64>,
        /// Grid axis `name=start:stop:points`; repeat once for a 2D grid.
        /// Names: T, gamma, b1, b2, b_uniform, b_anti.
        #[arg(
            long = "axis",
            required = true,
            num_args = 1,
            allow_hyphen_values = true
        )]
        axes: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write to this file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Worker threads (default: logical processor count).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Zero-field threshold temperature versus anisotropy.
    Threshold {
        /// `start:stop:points` with start <= stop inside [-1, 1].
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run oracle suites and report residuals.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Sample count for the ppt suite (states) and ensemble suite
        /// (decompositions per state).
        #[arg(long)]
        samples: Option<usize>,
        /// Number of random states in the ensemble suite.
        #[arg(long, default_value_t = verify::DEFAULT_ENSEMBLE_STATES)]
        states: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    /// Zero-field anisotropic model, any gamma.
    Heisenberg,
    /// gamma = -1 in fields B1, B2.
    Xy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Gibbs,
    Wootters,
    Ppt,
    Ensemble,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Gibbs => Suite::Gibbs,
            SuiteArg::Wootters => Suite::Wootters,
            SuiteArg::Ppt => Suite::Ppt,
            SuiteArg::Ensemble => Suite::Ensemble,
        }
    }
}

#[derive(clap::Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Heisenberg)]
    model: ModelKind,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b2: Option<f64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Usage(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: 1,
            message: format!("i/o error: {e}"),
        }
    }
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams, Failure> {
        match self.model {
            ModelKind::Heisenberg => {
                if self.b1.unwrap_or(0.0) != 0.0 || self.b2.unwrap_or(0.0) != 0.0 {
                    return Err(Failure::usage("model heisenberg requires b1 = b2 = 0"));
                }
                Ok(ModelParams::heisenberg(self.gamma.unwrap_or(0.0))?)
            }
            ModelKind::Xy => {
                if self.gamma.is_some_and(|g| g != -1.0) {
                    return Err(Failure::usage("model xy fixes gamma = -1"));
                }
                Ok(ModelParams::xy(
                    self.b1.unwrap_or(0.0),
                    self.b2.unwrap_or(0.0),
                )?)
            }
        }
    }

    fn check_axis(&self, axis: &AxisSpec) -> Result<(), Failure> {
        let field_axis = matches!(
            axis.name,
            AxisName::B1 | AxisName::B2 | AxisName::BUniform | AxisName::BAnti
        );
        match self.model {
            ModelKind::Heisenberg if field_axis => Err(Failure::usage(format!(
                "model heisenberg has no fields; axis {} is not allowed",
                axis.name
            ))),
            ModelKind::Xy if axis.name == AxisName::Gamma => Err(Failure::usage(
                "model xy fixes gamma = -1; axis gamma is not allowed",
            )),
            _ => Ok(()),
        }
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    spec: &'a SweepSpec,
    records: Vec<OutputRecord>,
}

fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_point(model: &ModelArgs, temp: f64, format: Format) -> Result<(), Failure> {
    let p = model.params()?;
    let report = sweep::evaluate_point(&p, temp)?;
    let record = OutputRecord::new(&p, temp, &report);
    let text = match format {
        Format::Csv => output::to_csv(&[record]),
        Format::Json => to_json_string(&record.rounded()),
    };
    emit(&text, None)
}

fn cmd_sweep(
    model: &ModelArgs,
    temp: Option<f64>,
    axes: &[String],
    format: Format,
    out: Option<&PathBuf>,
    threads: Option<usize>,
) -> Result<(), Failure> {
    let base = model.params()?;
    let parsed = axes
        .iter()
        .map(|a| a.parse::<AxisSpec>())
        .collect::<Result<Vec<_>, _>>()?;
    for axis in &parsed {
        model.check_axis(axis)?;
        if axis.name == AxisName::T && axis.start <= 0.0 {
            return Err(Failure {
                code: EXIT_DOMAIN,
                message: "temperature grid must be strictly positive".into(),
            });
        }
    }
    if let Some(t) = temp {
        if !t.is_finite() || t <= 0.0 {
            return Err(Failure {
                code: EXIT_DOMAIN,
                message: "temperature must be strictly positive".into(),
            });
        }
    }
    let spec = match parsed.as_slice() {
        [a] => SweepSpec::one_d(base, temp, *a)?,
        [a, b] => SweepSpec::two_d(base, temp, *a, *b)?,
        _ => return Err(Failure::usage("give one or two --axis flags")),
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::usage(format!("cannot start worker pool: {e}")))?;
    let table = pool.install(|| sweep::run_sweep(&spec))?;

    let mut records = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        match &row.outcome {
            Ok(r) => records.push(OutputRecord::new(&row.params, row.temperature, r)),
            Err(e) => {
                return Err(Failure::from(e.clone())
                    .with_context(&format!("grid point {:?}", row.axis_values)))
            }
        }
    }
    let text = match format {
        Format::Csv => output::to_csv(&records),
        Format::Json => {
            let records = records.iter().map(OutputRecord::rounded).collect();
            to_json_string(&SweepDocument {
                spec: &spec,
                records,
            })
        }
    };
    emit(&text, out)
}

impl Failure {
    fn with_context(mut self, context: &str) -> Self {
        self.message = format!("{context}: {}", self.message);
        self
    }
}

fn parse_gamma_range(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || {
        Failure::usage(format!(
            "--gamma must look like start:stop:points, got {s:?}"
        ))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, points] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let points: usize = points.trim().parse().map_err(|_| bad())?;
    if points == 0 || start > stop || (points == 1 && start != stop) {
        return Err(bad());
    }
    if !(-1.0..=1.0).contains(&start) || !(-1.0..=1.0).contains(&stop) {
        return Err(Failure {
            code: EXIT_DOMAIN,
            message: format!("gamma range {start}..{stop} leaves [-1, 1]"),
        });
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    Ok(AxisSpec {
        name: AxisName::Gamma,
        start,
        stop,
        points,
    }
    .values())
}

fn cmd_threshold(gamma: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    let gammas = parse_gamma_range(gamma)?;
    let curve = threshold_curve(&gammas)?;
    emit(&output::threshold_csv(&curve), out)
}

fn cmd_verify(
    suite: SuiteArg,
    seed: u64,
    samples: Option<usize>,
    states: usize,
) -> Result<(), Failure> {
    let cfg = VerifyConfig {
        seed,
        samples,
        ensemble_states: states,
    };
    let results = verify::run(suite.into(), &cfg)?;
    let mut stdout = io::stdout().lock();
    for r in &results {
        writeln!(stdout, "{r}")?;
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    if failed.is_empty() {
        writeln!(stdout, "all {} checks passed", results.len())?;
        Ok(())
    } else {
        let worst = failed
            .iter()
            .map(|r| r.worst_residual)
            .fold(f64::NEG_INFINITY, f64::max);
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!(
                "{} of {} checks failed (worst residual {worst:.3e})",
                failed.len(),
                results.len()
            ),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Point {
            model,
            temp,
            format,
        } => cmd_point(model, *temp, *format),
        Command::Sweep {
            model,
            temp,
            axes,
            format,
            output,
            threads,
        } => cmd_sweep(model, *temp, axes, *format, output.as_ref(), *threads),
        Command::Threshold { gamma, output } => cmd_threshold(gamma, output.as_ref()),
        Command::Verify {
            suite,
            seed,
            samples,
            states,
        } => cmd_verify(*suite, *seed, *samples, *states),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dimercorr: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
