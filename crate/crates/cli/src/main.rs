//! `polyescape`: decide polytope escape for linear dynamics, certify escape
//! bounds, and cross-check them by simulation.
//!
//! Exit codes: 0 success, 1 trapped point exists, 2 invalid polytope,
//! 3 malformed input or initial point, 4 bound precondition failed,
//! 5 certification failure, 6 validation failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use polyescape_core::bounds::{escape_bound, BoundError, EscapeCertificate};
use polyescape_core::decide::{decide, Decision, Instance, Outcome};
use polyescape_core::instance_file::InstanceFile;
use polyescape_core::matrix::RatVector;
use polyescape_core::par;
use polyescape_core::rational::{int, parse_rational, Rational};
use polyescape_core::simulate::{sample_points, validate_certificate, SamplingPlan, Simulator, TrajectoryRun, ValidationStatus, DEFAULT_PRECISION, DEFAULT_SIM_CAP};
use polyescape::report::{Report, Timings};
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(name = "polyescape", version, about = "Polytope escape analysis for linear dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether every trajectory leaves the polytope.
    Decide(Common),
    /// Certified uniform escape-time (or iteration) bound.
    Bound(Common),
    /// Simulate trajectories and report their exit times.
    Simulate(Common),
    /// Check a certificate against simulated trajectories.
    Validate(Common),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum RatioSource {
    Formula,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Instance file (JSON).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Working precision in bits.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Random interior starting points.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Simulation horizon (time units or iterations).
    #[arg(long)]
    horizon: Option<String>,
    /// Largest bound validated by simulation.
    #[arg(long = "sim-cap")]
    sim_cap: Option<String>,
    /// Directory for per-run CSV traces.
    #[arg(long = "trace-dir")]
    trace_dir: Option<PathBuf>,
    /// Single starting point, comma separated (e.g. "1,1/2").
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// Existing certificate or bound report to validate instead of a fresh one.
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[arg(long = "ratio-source", value_enum, default_value = "formula")]
    ratio_source: RatioSource,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn parse_time(flag: &str, v: &Option<String>, default: Rational) -> Result<Rational, Failure> {
    match v {
        None => Ok(default),
        Some(s) => {
            let r = parse_rational(s).map_err(|e| fail(3, format!("--{flag}: {e}")))?;
            if r <= Rational::from_integer(0.into()) {
                return Err(fail(3, format!("--{flag} must be positive")));
            }
            Ok(r)
        }
    }
}

fn parse_point(s: &str, inst: &Instance) -> Result<RatVector, Failure> {
    let xs = s.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>, _>>().map_err(|e| fail(3, format!("--x0: {e}")))?;
    let mut x = RatVector(xs);
    if let Some(d) = inst.homogenized_from {
        if x.len() == d {
            x.0.push(int(1));
        }
    }
    if x.len() != inst.dimension() {
        return Err(fail(3, format!("--x0 has {} coordinates, the instance has {}", x.len(), inst.dimension())));
    }
    if !inst.polytope.contains(&x) {
        return Err(fail(3, format!("--x0 {x} is not in the polytope")));
    }
    Ok(x)
}

fn decision_code(d: &Decision) -> u8 {
    match d.outcome {
        Outcome::AllEscape => 0,
        Outcome::TrappedPointExists => 1,
        Outcome::InvalidPolytope(_) => 2,
    }
}

fn bound_failure(e: BoundError) -> Failure {
    match e {
        BoundError::Precondition(o) => fail(4, format!("bound needs an instance where every trajectory escapes, decision was {o:?}")),
        other => fail(5, format!("certification failed: {other}")),
    }
}

fn write_trace(dir: &Path, index: usize, run: &TrajectoryRun) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| fail(3, format!("--trace-dir: {e}")))?;
    let d = run.initial_point.len();
    let mut out = String::from("t");
    for i in 1..=d {
        out.push_str(&format!(",x{i}"));
    }
    out.push_str(",inside\n");
    for s in &run.samples {
        out.push_str(&s.t.to_string());
        for v in &s.x {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push_str(if s.inside { ",1\n" } else { ",0\n" });
    }
    let path = dir.join(format!("run_{index:04}.csv"));
    fs::write(&path, out).map_err(|e| fail(3, format!("{}: {e}", path.display())))
}

fn load_certificate(path: &Path) -> Result<EscapeCertificate, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(3, format!("{}: {e}", path.display())))?;
    if let Ok(r) = serde_json::from_str::<Report>(&text) {
        return r.certificate.ok_or_else(|| fail(3, format!("{}: report has no certificate", path.display())));
    }
    serde_json::from_str::<EscapeCertificate>(&text).map_err(|e| fail(3, format!("{}: not a certificate: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(Report, u8), Failure> {
    let start = Instant::now();
    let (name, args) = match &cli.command {
        Command::Decide(a) => ("decide", a),
        Command::Bound(a) => ("bound", a),
        Command::Simulate(a) => ("simulate", a),
        Command::Validate(a) => ("validate", a),
    };
    let RatioSource::Formula = args.ratio_source;
    let bytes = fs::read(&args.input).map_err(|e| fail(3, format!("{}: {e}", args.input.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| fail(3, "input is not UTF-8"))?;
    let file = InstanceFile::from_json(&text).map_err(|e| fail(3, e.to_string()))?;
    let inst = file.to_instance().map_err(|e| fail(3, e.to_string()))?;
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let sim_cap = parse_time("sim-cap", &args.sim_cap, int(DEFAULT_SIM_CAP))?;
    let horizon = parse_time("horizon", &args.horizon, sim_cap.clone())?;

    let t0 = Instant::now();
    let decision = decide(&inst);
    let decide_ms = ms(t0);
    let mut report = Report {
        tool: "polyescape".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: name.into(),
        input_sha256: digest,
        mode: inst.mode,
        dimension: inst.dimension(),
        bit_size: inst.bit_size(),
        decision: decision.clone(),
        certificate: None,
        runs: None,
        validation: None,
        notes: Vec::new(),
        timings: Timings { decide_ms, bound_ms: 0.0, simulate_ms: 0.0, total_ms: 0.0 },
    };
    if let Some(d) = inst.homogenized_from {
        report.notes.push(format!("affine term folded into a homogenizing coordinate: dimension {d} became {}", d + 1));
    }
    let mut code = 0;
    match &cli.command {
        Command::Decide(_) => code = decision_code(&decision),
        Command::Bound(_) => {
            if let Outcome::InvalidPolytope(_) = decision.outcome {
                return Err(fail(2, "the polytope must be compact and nonempty"));
            }
            let t = Instant::now();
            report.certificate = Some(escape_bound(&inst, args.precision).map_err(bound_failure)?);
            report.timings.bound_ms = ms(t);
        }
        Command::Simulate(_) => {
            if let Outcome::InvalidPolytope(_) = decision.outcome {
                return Err(fail(2, "the polytope must be compact and nonempty"));
            }
            let points = match &args.x0 {
                Some(s) => vec![parse_point(s, &inst)?],
                None => {
                    let plan = SamplingPlan { include_vertices: true, random_interior_count: args.samples, seed: args.seed };
                    sample_points(&inst.polytope, &plan).map_err(|e| fail(3, e.to_string()))?
                }
            };
            let t = Instant::now();
            let sim = Simulator::new(&inst);
            let record = args.trace_dir.is_some();
            let runs = par::map(&points, |x| sim.run(x, &horizon, args.precision, record))
                .into_iter()
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| fail(5, format!("simulation failed: {e}")))?;
            report.timings.simulate_ms = ms(t);
            if let Some(dir) = &args.trace_dir {
                for (i, r) in runs.iter().enumerate() {
                    write_trace(dir, i, r)?;
                }
            }
            report.runs = Some(runs);
        }
        Command::Validate(_) => {
            if let Outcome::InvalidPolytope(_) = decision.outcome {
                return Err(fail(2, "the polytope must be compact and nonempty"));
            }
            if decision.outcome == Outcome::TrappedPointExists {
                return Err(fail(4, "validation needs an instance where every trajectory escapes; a trapped point exists"));
            }
            let t = Instant::now();
            let cert = match &args.certificate {
                Some(p) => load_certificate(p)?,
                None => escape_bound(&inst, args.precision).map_err(bound_failure)?,
            };
            report.timings.bound_ms = ms(t);
            let t = Instant::now();
            let plan = SamplingPlan { include_vertices: true, random_interior_count: args.samples, seed: args.seed };
            let v = validate_certificate(&inst, &cert, &plan, &sim_cap, args.precision);
            report.timings.simulate_ms = ms(t);
            code = match v.status {
                ValidationStatus::Passed => 0,
                ValidationStatus::Failed => 6,
                ValidationStatus::Refused(_) => 4,
            };
            report.certificate = Some(cert);
            report.validation = Some(v);
        }
    }
    report.timings.total_ms = ms(start);
    Ok((report, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match &cli.command {
        Command::Decide(a) | Command::Bound(a) | Command::Simulate(a) | Command::Validate(a) => a.format,
    };
    match run(cli) {
        Ok((report, code)) => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
                Format::Text => report.to_text(),
            };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
