//! `ncfk`: verification suites, synthesis sweeps and the action benchmark.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ncfk::action::{act_direct_with_cap, act_spectral, DEFAULT_QUADRATURE_CAP};
use ncfk::builtins::{builtin_operator, describe_builtin, BUILTIN_NAMES};
use ncfk::ncfk::{read_ncfk, to_bytes, NcfkData};
use ncfk::suites::{gaussian_projector, gaussian_weight, is_suite, run_suite, SUITES};
use ncfk::synthesis::decay::decay_ladder;
use ncfk::synthesis::mollifier::make_mollifier;
use ncfk::synthesis::rho::find_rho;
use ncfk::{Error, KernelOperator, LineGrid, PlaneGrid, Report};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_TRACE: u8 = 4;
const EXIT_RESOLUTION: u8 = 5;

#[derive(Parser)]
#[command(name = "ncfk", version, about = "Alpha transform calculus on discretized trace-class operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite and write its JSON report.
    Verify {
        /// One of: plancherel, riemann-lebesgue, hausdorff-young, hoelder, inversion,
        /// multiplier, derivatives, product-rules, oscillator, hermite, versal.
        suite: String,
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Report path; the report goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dyadic mollifier ladder: L^p bound and trace-norm decay table.
    SynthesisDecay {
        #[command(flatten)]
        input: OperatorInput,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[arg(long)]
        csv: PathBuf,
        /// Report sidecar; defaults to the CSV path with a `.json` extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a mollifier ρ with ‖ρ·X‖_{S¹} < eps.
    FindRho {
        #[command(flatten)]
        input: OperatorInput,
        #[arg(long)]
        eps: f64,
        /// Plane NCFK file for ρ.
        #[arg(long)]
        out: PathBuf,
        /// Metadata JSON; defaults to the output path with a `.json` extension.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Time the quadrature and spectral module actions against each other.
    Bench {
        /// Comma-separated grid sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [16, 32, 64])]
        n: Vec<usize>,
        #[arg(long)]
        csv: PathBuf,
        /// Largest grid the quadrature route will run on.
        #[arg(long, default_value_t = DEFAULT_QUADRATURE_CAP)]
        cap: usize,
        /// Timing repetitions; the minimum is reported.
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

#[derive(Args)]
struct OperatorInput {
    /// Builtin operator name (hermite01, gauss-proj, random-tracezero, zero) or NCFK kernel path.
    #[arg(long)]
    x: String,
    /// Grid size for builtin operators.
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Seed for random builtins.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OperatorInput {
    fn load(&self) -> Result<(KernelOperator, String), Failure> {
        if BUILTIN_NAMES.contains(&self.x.as_str()) {
            let grid = LineGrid::self_dual(self.n)?;
            let op = builtin_operator(&self.x, &grid, self.seed)?;
            return Ok((op, format!("builtin {}: {}", self.x, describe_builtin(&self.x))));
        }
        let file = std::fs::File::open(&self.x)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot open '{}': {e}", self.x)))?;
        match read_ncfk(std::io::BufReader::new(file)) {
            Ok(NcfkData::Kernel(k)) => Ok((k, format!("file {}", self.x))),
            Ok(_) => Err(Failure::new(EXIT_USAGE, format!("'{}' does not hold a kernel", self.x))),
            Err(e) => Err(Failure::new(EXIT_IO, format!("cannot read '{}': {e}", self.x))),
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Format(_) => EXIT_IO,
            Error::NonzeroTrace { .. } => EXIT_TRACE,
            Error::ResolutionExceeded(_) | Error::SynthesisExhausted { .. } | Error::DeltaTooSmall { .. } => {
                EXIT_RESOLUTION
            }
            _ => EXIT_USAGE,
        };
        let message = match &e {
            Error::NonzeroTrace { trace, .. } => format!("{e}\nmeasured trace: {trace:e}"),
            Error::SynthesisExhausted { best_norm, .. } => format!("{e}\nbest norm: {best_norm:e}"),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_IO, format!("cannot write '{}': {e}", path.display()))
}

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_failure(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_failure(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_failure(path, e))?;
    tmp.persist(path).map_err(|e| io_failure(path, e.error))?;
    Ok(())
}

fn report_json(r: &Report) -> Result<String, Failure> {
    r.to_json().map_err(|e| Failure::new(EXIT_IO, format!("cannot serialize report: {e}")))
}

fn summarize(r: &Report) {
    let failed: Vec<_> = r.failed_checks().collect();
    eprintln!(
        "{}: {} ({} checks, {} failed)",
        r.suite,
        if r.pass { "PASS" } else { "FAIL" },
        r.checks.len(),
        failed.len()
    );
    for c in failed {
        eprintln!("  failed {}: lhs {:e}, rhs {:e}, tolerance {:e}", c.name, c.lhs, c.rhs, c.tolerance);
    }
    for w in &r.warnings {
        eprintln!("  warning: {w}");
    }
}

fn verdict(pass: bool) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::new(EXIT_CHECK_FAILED, "one or more checks failed"))
    }
}

fn cmd_verify(suite: &str, n: usize, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    if !is_suite(suite) {
        return Err(Failure::new(
            EXIT_USAGE,
            format!(
                "unknown suite '{suite}'\nusage: ncfk verify <SUITE> [--n N] [--seed SEED] [--out PATH]\nsuites: {}",
                SUITES.join(", ")
            ),
        ));
    }
    let mut report = run_suite(suite, n, seed)?;
    report.input("seed", Some(seed), "suite seed");
    let text = report_json(&report)?;
    match out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => println!("{text}"),
    }
    summarize(&report);
    verdict(report.pass)
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn cmd_synthesis_decay(input: &OperatorInput, p: f64, levels: usize, csv: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let (x, construction) = input.load()?;
    let fam = make_mollifier(&PlaneGrid::square(*x.grid()))?;
    let mut table = decay_ladder(&x, &fam, p, levels)?;
    table.report.input("X", Some(input.seed), construction);
    let csv_text = table.to_csv_string()?;
    write_atomic(csv, csv_text.as_bytes())?;
    let json_path = out.map(Path::to_path_buf).unwrap_or_else(|| sidecar(csv));
    write_atomic(&json_path, report_json(&table.report)?.as_bytes())?;
    summarize(&table.report);
    verdict(table.report.pass)
}

fn cmd_find_rho(input: &OperatorInput, eps: f64, out: &Path, meta: Option<&Path>) -> Result<(), Failure> {
    let (x, construction) = input.load()?;
    let fam = make_mollifier(&PlaneGrid::square(*x.grid()))?;
    let meta_path = meta.map(Path::to_path_buf).unwrap_or_else(|| sidecar(out));
    match find_rho(&x, eps, &fam) {
        Ok(mut res) => {
            res.report.input("X", Some(input.seed), construction);
            write_atomic(out, &to_bytes(&NcfkData::Plane(res.rho)))?;
            let meta_json = json!({
                "status": "ok",
                "delta0": res.delta0,
                "versal": fam.versal,
                "final_norm": res.final_norm,
                "epsilon": eps,
                "report": serde_json::to_value(&res.report).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?,
            });
            write_atomic(&meta_path, pretty(&meta_json)?.as_bytes())?;
            summarize(&res.report);
            println!("delta0 = {}, final_norm = {:e}", res.delta0, res.final_norm);
            verdict(res.report.pass)
        }
        Err(Error::SynthesisExhausted {
            best_norm,
            best_delta,
            mut report,
        }) => {
            report.input("X", Some(input.seed), construction);
            let meta_json = json!({
                "status": "exhausted",
                "best_norm": best_norm,
                "best_delta": best_delta,
                "versal": fam.versal,
                "epsilon": eps,
                "report": serde_json::to_value(&*report).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?,
            });
            write_atomic(&meta_path, pretty(&meta_json)?.as_bytes())?;
            summarize(&report);
            Err(Error::SynthesisExhausted {
                best_norm,
                best_delta,
                report,
            }
            .into())
        }
        Err(e) => Err(e.into()),
    }
}

fn pretty(v: &serde_json::Value) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::new(EXIT_IO, e.to_string()))
}

fn min_time_ms<T>(reps: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut best = f64::INFINITY;
    let mut last = None;
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        let v = f();
        best = best.min(t.elapsed().as_secs_f64() * 1e3);
        last = Some(v);
    }
    (best, last.expect("at least one repetition"))
}

fn cmd_bench(ns: &[usize], csv: &Path, cap: usize, reps: usize) -> Result<(), Failure> {
    let mut text = String::from("n,direct_ms,spectral_ms,s1_disagreement\n");
    let mut disagreements = Vec::new();
    for &n in ns {
        let grid = LineGrid::self_dual(n)?;
        let x = gaussian_projector(&grid)?;
        let q = gaussian_weight(&PlaneGrid::square(grid));
        let (spectral_ms, spectral) = min_time_ms(reps, || act_spectral(&q, &x));
        let spectral = spectral?.value;
        if n > cap {
            writeln!(text, "{n},skipped,{spectral_ms:.3},skipped").expect("string write");
            eprintln!("n = {n}: quadrature route skipped (cap {cap})");
            continue;
        }
        let (direct_ms, direct) = min_time_ms(reps, || act_direct_with_cap(&q, &x, cap));
        let dis = direct?.sub(&spectral)?.trace_norm();
        disagreements.push(dis);
        writeln!(text, "{n},{direct_ms:.3},{spectral_ms:.3},{dis}").expect("string write");
        eprintln!("n = {n}: direct {direct_ms:.3} ms, spectral {spectral_ms:.3} ms, S1 disagreement {dis:e}");
    }
    write_atomic(csv, text.as_bytes())?;
    let monotone = disagreements.windows(2).all(|w| w[1] < w[0]);
    eprintln!(
        "disagreement decreasing with n: {}",
        if monotone { "yes" } else { "no" }
    );
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("NCFK_THREADS") {
        let threads: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Failure::new(EXIT_USAGE, format!("NCFK_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Verify { suite, n, seed, out } => cmd_verify(&suite, n, seed, out.as_deref()),
        Command::SynthesisDecay {
            input,
            p,
            levels,
            csv,
            out,
        } => cmd_synthesis_decay(&input, p, levels, &csv, out.as_deref()),
        Command::FindRho { input, eps, out, meta } => cmd_find_rho(&input, eps, &out, meta.as_deref()),
        Command::Bench { n, csv, cap, reps } => cmd_bench(&n, &csv, cap, reps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if f.code != EXIT_CHECK_FAILED {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
