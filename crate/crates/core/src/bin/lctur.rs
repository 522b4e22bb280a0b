use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lct_uncertainty::entropy::{renyi_entropy, shannon_entropy, RenyiOrderPair};
use lct_uncertainty::harness::{
    linspace, position_momentum_rows, selftest, sweep, write_sweep_csv, ExperimentSpec, GridParams, Measurement,
    Relation, StateSource, Status, SweepAxis, VerificationReport,
};
use lct_uncertainty::lct::{self, io as wfio, probability_density, EDGE_CELLS};
use lct_uncertainty::symplectic::{direct_sum, fourier_form, rotation, SymplecticMatrix};
use lct_uncertainty::{Error, Result};

const EXIT_VIOLATION: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "lctur", version, about = "Linear canonical transforms and multimode uncertainty-relation checks")]
struct Cli {
    /// Log level: repeat for more detail.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one relation on one state; spec from a JSON file or from flags.
    Verify(ExperimentArgs),
    /// Run a template experiment over a range of one parameter.
    Sweep {
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long)]
        axis: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Apply a linear canonical transform to a wavefunction file.
    Transform {
        #[arg(long)]
        input: PathBuf,
        /// Symplectic matrix JSON: {"n": .., "entries": [row-major]}.
        #[arg(long, conflicts_with_all = ["fourier", "rotation"])]
        matrix: Option<PathBuf>,
        #[arg(long)]
        fourier: bool,
        /// Same fractional Fourier angle on every axis.
        #[arg(long, allow_hyphen_values = true)]
        rotation: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Encoding::Array)]
        encoding: Encoding,
    },
    /// Sample a test state on a symmetric grid and write it as a wavefunction file.
    Prepare {
        #[arg(long, value_enum, default_value_t = StateKind::Vacuum)]
        state: StateKind,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        state_param: f64,
        #[arg(long = "N", default_value_t = 1)]
        modes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 512)]
        grid_points: usize,
        #[arg(long, default_value_t = 12.0)]
        grid_extent: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Encoding::Array)]
        encoding: Encoding,
    },
    /// Entropies of the position density of a wavefunction file.
    Entropy {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quick invariant suite.
    Selftest {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoding {
    Array,
    Base64,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Vacuum,
    Squeezed,
    Correlated,
    Fock,
    Cat,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasurementKind {
    /// Identity and Fourier (or position and momentum rows).
    Standard,
    /// Seeded random measurements.
    Random,
}

#[derive(Args)]
struct ExperimentArgs {
    /// ExperimentSpec JSON; other experiment flags are ignored when given.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    relation: Option<String>,
    /// Measured quadratures per side.
    #[arg(long)]
    n: Option<usize>,
    /// Number of modes.
    #[arg(long = "N")]
    modes: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = StateKind::Vacuum)]
    state: StateKind,
    /// Squeezing for `--state squeezed`, or Fock occupation / cat amplitude.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    state_param: f64,
    #[arg(long, value_enum, default_value_t = MeasurementKind::Standard)]
    measurements: MeasurementKind,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Rényi order; its conjugate is used for the second measurement.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    grid_extent: Option<f64>,
    /// Evaluate Gaussian states on the grid instead of in closed form.
    #[arg(long)]
    force_grid: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl ExperimentArgs {
    fn build(&self) -> Result<ExperimentSpec> {
        if let Some(path) = &self.spec {
            return Ok(serde_json::from_str(&fs::read_to_string(path)?)?);
        }
        let relation: Relation = self
            .relation
            .as_deref()
            .ok_or_else(|| Error::Invalid("either --spec or --relation is required".into()))?
            .parse()?;
        let modes = self.modes.or(self.n).unwrap_or(1);
        let state = state_source(self.state, self.state_param, modes)?;
        let mut spec = ExperimentSpec::new(relation, state);
        spec.n = self.n;
        spec.seed = self.seed;
        spec.theta = self.theta;
        spec.phi = self.phi;
        spec.force_grid = self.force_grid;
        if let Some(alpha) = self.alpha {
            spec.orders =
                Some(if alpha == 1.0 { RenyiOrderPair::shannon() } else { RenyiOrderPair::conjugate(alpha)? });
        }
        if self.grid_points.is_some() || self.grid_extent.is_some() {
            let d = GridParams::default();
            spec.grid = Some(GridParams {
                points: self.grid_points.unwrap_or(d.points),
                extent: self.grid_extent.unwrap_or(d.extent),
            });
        }
        let rows = matches!(relation, Relation::Theorem1Extended | Relation::Huang);
        let n = self.n.unwrap_or(if relation == Relation::Huang { 1 } else { modes });
        let (a, b) = match (self.measurements, rows) {
            (MeasurementKind::Standard, false) => (Measurement::Identity, Measurement::Fourier),
            (MeasurementKind::Standard, true) => position_momentum_rows(n, modes)?,
            (MeasurementKind::Random, false) => (
                Measurement::Random { seed: self.seed.wrapping_add(1) },
                Measurement::Random { seed: self.seed.wrapping_add(2) },
            ),
            (MeasurementKind::Random, true) => (
                Measurement::RandomRows { n, seed: self.seed.wrapping_add(1) },
                Measurement::RandomRows { n, seed: self.seed.wrapping_add(2) },
            ),
        };
        spec.a = Some(a);
        spec.b = Some(b);
        Ok(spec)
    }
}

fn state_source(kind: StateKind, param: f64, modes: usize) -> Result<StateSource> {
    Ok(match kind {
        StateKind::Vacuum => StateSource::Vacuum { modes },
        StateKind::Squeezed => StateSource::Squeezed { s: vec![param; modes] },
        StateKind::Correlated => StateSource::Correlated { modes, seed: None },
        StateKind::Fock => {
            if param < 0.0 || param.fract() != 0.0 {
                return Err(Error::Invalid(format!("Fock occupation must be a non-negative integer, got {param}")));
            }
            StateSource::Fock { occupations: vec![param as usize; modes] }
        }
        StateKind::Cat => StateSource::Cat { re: param, im: 0.0 },
    })
}

fn wire_encoding(e: Encoding) -> wfio::Encoding {
    match e {
        Encoding::Array => wfio::Encoding::Array,
        Encoding::Base64 => wfio::Encoding::Base64,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn report_text(r: &VerificationReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(r)?,
        Format::Csv => format!("{}\n{}\n", VerificationReport::CSV_HEADER, r.csv_fields()),
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify(args) => {
            let report = args.build()?.run()?;
            emit(args.out.as_deref(), &report_text(&report, args.format)?)?;
            Ok(if report.status == Status::Violation { EXIT_VIOLATION } else { 0 })
        }
        Command::Sweep { experiment, axis, from, to, steps } => {
            let template = experiment.build()?;
            let axis: SweepAxis = axis.parse()?;
            let rows = sweep(&template, axis, &linspace(from, to, steps));
            let text = match experiment.format {
                Format::Json => serde_json::to_string_pretty(&rows)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_sweep_csv(&mut buf, axis, &rows)?;
                    String::from_utf8(buf).expect("CSV is UTF-8")
                }
            };
            emit(experiment.out.as_deref(), &text)?;
            let violated = rows.iter().any(|r| r.report.as_ref().is_some_and(|r| r.status == Status::Violation));
            let failed = rows.iter().any(|r| r.error.is_some());
            Ok(if violated {
                EXIT_VIOLATION
            } else if failed {
                EXIT_INPUT
            } else {
                0
            })
        }
        Command::Transform { input, matrix, fourier, rotation: theta, out, format, encoding } => {
            let wf = wfio::read(&input)?;
            let n = wf.n();
            let s = match (matrix, fourier, theta) {
                (Some(path), _, _) => serde_json::from_str::<SymplecticMatrix>(&fs::read_to_string(path)?)?,
                (None, true, None) => fourier_form(n),
                (None, false, Some(t)) => direct_sum(&vec![rotation(t); n]),
                _ => return Err(Error::Invalid("give exactly one of --matrix, --fourier, --rotation".into())),
            };
            let (result, route) = lct::lct_apply_routed(&wf, &s)?;
            log::info!("route {route:?}, output grid {:?}", result.grid.points);
            lct::check_edges(&result, "transform output");
            let text = match format {
                Format::Json => wfio::to_json(&result, wire_encoding(encoding))?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    wfio::write_csv(&mut buf, &result)?;
                    String::from_utf8(buf).expect("CSV is UTF-8")
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Prepare { state, state_param, modes, seed, grid_points, grid_extent, out, encoding } => {
            let mut spec = ExperimentSpec::new(Relation::Theorem1, state_source(state, state_param, modes)?);
            spec.seed = seed;
            spec.grid = Some(GridParams { points: grid_points, extent: grid_extent });
            let wf = spec.sample_state()?;
            emit(out.as_deref(), &wfio::to_json(&wf, wire_encoding(encoding))?)?;
            Ok(0)
        }
        Command::Entropy { input, alpha, out } => {
            let wf = wfio::read(&input)?;
            let rho = probability_density(&wf);
            let mut doc = serde_json::json!({
                "n": wf.n(),
                "norm": wf.norm_sqr(),
                "edge_mass": wf.edge_mass(EDGE_CELLS),
                "shannon": shannon_entropy(&rho, &wf.grid)?,
            });
            if let Some(a) = alpha {
                doc["alpha"] = a.into();
                doc["renyi"] = renyi_entropy(&rho, &wf.grid, a)?.into();
            }
            emit(out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
            Ok(0)
        }
        Command::Selftest { format, out } => {
            let checks = selftest();
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&checks)?,
                Format::Csv => {
                    let mut s = String::from("name,passed,detail\n");
                    for c in &checks {
                        s.push_str(&format!(
                            "{},{},{}\n",
                            c.name.replace(',', ";"),
                            c.passed,
                            c.detail.replace(',', ";")
                        ));
                    }
                    s
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(if checks.iter().all(|c| c.passed) { 0 } else { EXIT_VIOLATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
