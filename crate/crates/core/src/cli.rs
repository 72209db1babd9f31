//! Command-line front end.
//!
//! Exit codes: 0 ok or stable, 2 unstable, 3 uncertified, 64 usage,
//! 65 data format. `simulate` reports 0 when the trajectory converged, 2 on
//! a fixed point and 3 when the step budget ran out.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{self, AnalysisError, SimOutcome, StableMap, Verdict};
use crate::fnalg::{self, FnError};
use crate::mpmatrix::{MapError, MapFile, MpMap, NonnegVector};
use crate::ratio::{self, Rational};
use crate::spectral::{
    self, CertificateMode, LeftEigenfunctional, LeftMode, RightEigenvector, SpectralError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSTABLE: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
/// A descent certificate found a violation; this signals a bug.
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Parser)]
#[command(
    name = "maxpres",
    version,
    about = "Exact analysis of max-preserving maps on the nonnegative orthant"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a map file and check every entry invariant.
    Validate { file: PathBuf },
    /// Cycle contraction test; prints the stability report as JSON.
    Check { file: PathBuf },
    /// Writes the closure A* as a map file.
    Closure {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluates A at a vector.
    Eval {
        file: PathBuf,
        #[arg(long = "vec", value_parser = parse_vector)]
        x: NonnegVector,
        /// Also print floating-point values; needed for irrational powers.
        #[arg(long)]
        approx: bool,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Left eigenfunctional l(x) = w·A*x and its descent l(Ax) < l(x).
    Left {
        file: PathBuf,
        #[arg(long = "vec", value_parser = parse_vector)]
        x: NonnegVector,
        #[arg(long, value_parser = parse_vector)]
        weights: Option<NonnegVector>,
        #[arg(long, value_enum, default_value_t = ModeArg::Sum)]
        mode: ModeArg,
    },
    /// Right eigenvector r(t) = A*(t·v) and the relation of A(r(t)) to r(t).
    Right {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        t: Rational,
        #[arg(long, value_parser = parse_vector)]
        direction: Option<NonnegVector>,
        /// Also evaluate V(x) = max_i r_i⁻¹(x_i) at this vector.
        #[arg(long, value_parser = parse_vector)]
        lyapunov_at: Option<NonnegVector>,
    },
    /// Maximal solution of x ≤ Ax ⊕ b.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = parse_vector)]
        b: NonnegVector,
    },
    /// Iterates x ↦ Ax and writes the trajectory as CSV.
    Simulate {
        file: PathBuf,
        #[arg(long, value_parser = parse_vector)]
        x0: NonnegVector,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, value_parser = parse_rational, default_value = "1/1000000")]
        halt: Rational,
        /// Render coordinates as rounded decimals instead of exact fractions.
        #[arg(long)]
        approx: bool,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Samples a Lyapunov candidate at seeded random points.
    Certify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CertArg::LeftSum)]
        mode: CertArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Sum,
    Max,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CertArg {
    LeftSum,
    LeftMax,
    MaxSeparable,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    ratio::parse(s).map_err(|e| e.to_string())
}

fn parse_vector(s: &str) -> Result<NonnegVector, String> {
    let coords = ratio::parse_list(s).map_err(|e| e.to_string())?;
    NonnegVector::new(coords).map_err(|e| e.to_string())
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::NotStable(v) => Failure::new(
                verdict_code(v),
                format!("map is not certified stable ({v:?})"),
            ),
            AnalysisError::Map(m) => m.into(),
        }
    }
}

impl From<MapError> for Failure {
    fn from(e: MapError) -> Self {
        let code = match e {
            MapError::DimensionMismatch { .. } => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Analysis(a) => a.into(),
            SpectralError::Map(m) => m.into(),
            SpectralError::NotPositive { .. } | SpectralError::NoSamples => {
                Failure::new(EXIT_USAGE, e.to_string())
            }
            SpectralError::Inverse { .. } => Failure::new(EXIT_DATA, e.to_string()),
            SpectralError::DescentViolated { .. } => Failure::new(EXIT_INTERNAL, e.to_string()),
        }
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Stable => EXIT_OK,
        Verdict::Unstable => EXIT_UNSTABLE,
        Verdict::Uncertified => EXIT_UNCERTIFIED,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<MpMap, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let file: MapFile = serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
    file.to_map()
        .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn load_stable(path: &Path) -> Result<StableMap, Failure> {
    Ok(StableMap::new(load(path)?)?)
}

fn emit_json(
    value: &impl Serialize,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::new(EXIT_DATA, e.to_string()))?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string())),
    }
}

fn execute(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    match command {
        Command::Validate { file } => {
            let a = load(&file)?;
            writeln!(stdout, "ok: {}×{} map", a.dim(), a.dim()).map_err(io_failure)?;
            Ok(EXIT_OK)
        }
        Command::Check { file } => {
            let report = analysis::check_stability(&load(&file)?);
            emit_json(&report, None, stdout)?;
            Ok(verdict_code(report.verdict))
        }
        Command::Closure { file, out } => {
            let stable = load_stable(&file)?;
            emit_json(stable.closure(), out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Eval {
            file,
            x,
            approx,
            digits,
        } => {
            let a = load(&file)?;
            let exact = match a.apply(&x) {
                Ok(ax) => Some(ax),
                Err(MapError::Entry {
                    source: FnError::IrrationalValue,
                    ..
                }) if approx => None,
                Err(e) => return Err(e.into()),
            };
            let mut value = json!({ "x": x });
            if let Some(ax) = &exact {
                value["ax"] = json!(ax);
            }
            if approx {
                let xf: Vec<f64> = x.coords().iter().map(ratio::to_f64).collect();
                let axf: Vec<String> = (0..a.dim())
                    .map(|i| {
                        let m = (0..a.dim())
                            .map(|j| fnalg::evaluate_approx(a.entry(i, j), xf[j]))
                            .fold(0.0, f64::max);
                        format!("{m:.digits$}")
                    })
                    .collect();
                value["ax_approx"] = json!(axf);
            }
            emit_json(&value, None, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Left {
            file,
            x,
            weights,
            mode,
        } => {
            let stable = load_stable(&file)?;
            let mode = match mode {
                ModeArg::Sum => LeftMode::Sum,
                ModeArg::Max => LeftMode::Max,
            };
            let l = LeftEigenfunctional::new(&stable, weights, mode)?;
            let d = l.descent(&x)?;
            let value = json!({
                "mode": mode,
                "weights": l.weights(),
                "x": x,
                "l": ratio::format(&d.before),
                "l_of_ax": ratio::format(&d.after),
                "strict": d.strict,
            });
            emit_json(&value, None, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Right {
            file,
            t,
            direction,
            lyapunov_at,
        } => {
            let stable = load_stable(&file)?;
            let r = RightEigenvector::new(&stable, direction)?;
            if t < ratio::int(0) {
                return Err(Failure::new(EXIT_USAGE, "t must be nonnegative"));
            }
            let d = r.descent(&t)?;
            let mut value = json!({
                "t": ratio::format(&t),
                "direction": r.direction(),
                "r": d.r,
                "ar": d.ar,
                "relation": d.relation,
            });
            if let Some(x) = lyapunov_at {
                let v = r.max_separable_lyapunov(&x)?;
                value["lyapunov"] = json!({ "x": x, "v": ratio::format(&v) });
            }
            emit_json(&value, None, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Solve { file, b } => {
            let stable = load_stable(&file)?;
            let x = stable.maximal_solution(&b)?;
            let residual = stable.map().apply(&x)?.join(&b)?;
            let (_, steps) = stable.iterate_maximal_solution(&b)?;
            let value = json!({
                "b": b,
                "x": x,
                "fixed_point": residual == x,
                "iteration_steps": steps,
            });
            emit_json(&value, None, stdout)?;
            Ok(if residual == x {
                EXIT_OK
            } else {
                EXIT_INTERNAL
            })
        }
        Command::Simulate {
            file,
            x0,
            steps,
            halt,
            approx,
            digits,
        } => {
            let a = load(&file)?;
            let traj = analysis::simulate(&a, &x0, steps, &halt)?;
            let mut csv = String::new();
            if approx {
                csv.push_str(&format!(
                    "# approximate: decimals rounded to {digits} digits\n"
                ));
            }
            csv.push('k');
            for i in 1..=a.dim() {
                csv.push_str(&format!(",x{i}"));
            }
            csv.push('\n');
            for (k, state) in traj.states.iter().enumerate() {
                csv.push_str(&k.to_string());
                for c in state.coords() {
                    csv.push(',');
                    if approx {
                        csv.push_str(&ratio::to_decimal(c, digits));
                    } else {
                        csv.push_str(&ratio::format(c));
                    }
                }
                csv.push('\n');
            }
            stdout.write_all(csv.as_bytes()).map_err(io_failure)?;
            let outcome = serde_json::to_value(traj.outcome)
                .map_err(|e| Failure::new(EXIT_DATA, e.to_string()))?;
            writeln!(
                stderr,
                "outcome: {} after {} steps",
                outcome.as_str().unwrap_or("?"),
                traj.states.len() - 1
            )
            .map_err(io_failure)?;
            Ok(match traj.outcome {
                SimOutcome::ConvergedBelow => EXIT_OK,
                SimOutcome::FixedPointHit => EXIT_UNSTABLE,
                SimOutcome::StepsExhausted => EXIT_UNCERTIFIED,
            })
        }
        Command::Certify {
            file,
            mode,
            samples,
            seed,
            out,
        } => {
            let stable = load_stable(&file)?;
            let mode = match mode {
                CertArg::LeftSum => CertificateMode::LeftSum,
                CertArg::LeftMax => CertificateMode::LeftMax,
                CertArg::MaxSeparable => CertificateMode::MaxSeparable,
            };
            let cert = spectral::certify(&stable, mode, samples, seed)?;
            emit_json(&cert, out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(EXIT_USAGE, e.to_string())
}
