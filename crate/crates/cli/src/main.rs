//! Command-line verification harness: runs the named check suites, writes
//! deterministic JSON reports, evaluates the matrix composition laws on
//! explicit input, and explains what each check id verifies.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use glnstar::error::Error;
use glnstar::star::{
    big_d, big_d_tilde, big_k, big_k_inv, matrix_from_json, matrix_to_json, CMatrix,
    Sampler, StarParams,
};
use glnstar::suites::{explain, run_suite, SuiteConfig, SuiteReport, SUITE_NAMES};

#[derive(Parser)]
#[command(name = "glnstar", version, about = "Verification harness for the deformed-coordinate engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report per-check results
    Verify(VerifyArgs),
    /// Run the numeric star-product suite
    Star(StarSuiteArgs),
    /// Evaluate a matrix composition law on sampled or supplied input
    Eval(EvalArgs),
    /// Print the section and formula a check id verifies
    Explain { id: String },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run (default: all of them)
    suites: Vec<String>,
    /// Additional suites, comma separated
    #[arg(long = "suites", value_delimiter = ',')]
    suites_flag: Vec<String>,
    /// JSON file with suite configuration; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Matrix dimension
    #[arg(long)]
    n: Option<u8>,
    /// Deformation parameter for numeric checks
    #[arg(long)]
    u: Option<f64>,
    /// RNG seed for numeric sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Numeric tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Per-leg monomial degree bound for extensional operator checks
    #[arg(long)]
    max_degree: Option<u32>,
    /// Truncation order in the deformation parameter
    #[arg(long)]
    order: Option<u32>,
    /// Number of random samples for numeric checks
    #[arg(long)]
    samples: Option<usize>,
    /// Directory to write one `<suite>.json` report per suite
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of suites to run concurrently
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Copy, Clone, ValueEnum)]
enum StarOp {
    /// Composition law of the first family
    D,
    /// Composition law of the dual family
    Dt,
    /// The map k -> ln(1 + u k) / u
    K,
    /// Its inverse on the principal branch
    KInv,
}

#[derive(Args)]
struct StarSuiteArgs {
    /// Matrix dimension
    #[arg(long, default_value_t = 3)]
    n: u8,
    /// Deformation parameter
    #[arg(long, default_value_t = 0.3)]
    u: f64,
    /// RNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Numeric tolerance
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Number of random samples
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Directory to write the `star.json` report
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Matrix dimension when sampling
    #[arg(long, default_value_t = 2)]
    n: u8,
    /// Deformation parameter
    #[arg(long, default_value_t = 0.3)]
    u: f64,
    /// RNG seed when sampling
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// JSON file with the first operand (sampled when omitted)
    #[arg(long)]
    k: Option<PathBuf>,
    /// JSON file with the second operand (sampled when omitted)
    #[arg(long)]
    q: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StarOp::D)]
    op: StarOp,
    /// Write the resulting matrix here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify(args) => verify(args),
        Command::Star(args) => star_suite(args),
        Command::Eval(args) => eval(args),
        Command::Explain { id } => match explain(&id) {
            Some(anchor) => {
                println!("{id}: {anchor}");
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("unknown check id '{id}'");
                ExitCode::from(2)
            }
        },
    }
}

fn load_config(args: &VerifyArgs) -> Result<SuiteConfig, String> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .map_err(|e| format!("bad config {}: {e}", path.display()))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(u) = args.u {
        config.u = u;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(tol) = args.tol {
        config.tol = tol;
    }
    if let Some(d) = args.max_degree {
        config.max_degree = d;
    }
    if let Some(order) = args.order {
        config.order = order;
    }
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn verify(args: VerifyArgs) -> ExitCode {
    let config = match load_config(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut suites: Vec<String> = args.suites.clone();
    suites.extend(args.suites_flag.clone());
    if suites.is_empty() {
        suites = SUITE_NAMES.iter().map(|s| s.to_string()).collect();
    }
    for name in &suites {
        if !SUITE_NAMES.contains(&name.as_str()) {
            eprintln!(
                "config error: unknown suite '{name}' (known: {})",
                SUITE_NAMES.join(", ")
            );
            return ExitCode::from(2);
        }
    }
    if args.workers == 0 {
        eprintln!("config error: workers must be at least 1");
        return ExitCode::from(2);
    }

    let results = run_all(&suites, &config, args.workers);

    let mut all_pass = true;
    for (name, result) in &results {
        match result {
            Ok(report) => {
                let failed = report.checks.iter().filter(|c| !c.pass).count();
                if report.all_pass {
                    println!("PASS {name} ({} checks)", report.checks.len());
                } else {
                    all_pass = false;
                    println!(
                        "FAIL {name} ({failed} of {} checks failed)",
                        report.checks.len()
                    );
                    for check in report.checks.iter().filter(|c| !c.pass) {
                        println!("  FAIL {} {} residual={}", check.id, check.detail, check.residual);
                    }
                }
                if let Some(dir) = &args.out {
                    if let Err(msg) = write_report(dir, name, report) {
                        eprintln!("config error: {msg}");
                        return ExitCode::from(2);
                    }
                }
            }
            Err(err) => {
                eprintln!("config error: suite {name}: {err}");
                return ExitCode::from(2);
            }
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_all(
    suites: &[String],
    config: &SuiteConfig,
    workers: usize,
) -> Vec<(String, Result<SuiteReport, Error>)> {
    let slots: std::sync::Mutex<Vec<Option<Result<SuiteReport, Error>>>> =
        std::sync::Mutex::new((0..suites.len()).map(|_| None).collect());
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(suites.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= suites.len() {
                    break;
                }
                let started = Instant::now();
                let result = run_suite(&suites[i], config);
                eprintln!("{} finished in {:.2?}", suites[i], started.elapsed());
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });
    let results = slots.into_inner().unwrap();
    suites
        .iter()
        .cloned()
        .zip(results.into_iter().map(|r| r.unwrap()))
        .collect()
}

/// Write the report atomically: a temporary file in the same directory is
/// renamed over the final path, so readers never observe a partial report.
fn write_report(dir: &Path, suite: &str, report: &SuiteReport) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let text = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    let tmp = dir.join(format!(".{suite}.json.tmp"));
    let target = dir.join(format!("{suite}.json"));
    let mut file =
        fs::File::create(&tmp).map_err(|e| format!("cannot create {}: {e}", tmp.display()))?;
    file.write_all(text.as_bytes())
        .and_then(|_| file.write_all(b"\n"))
        .map_err(|e| format!("cannot write {}: {e}", tmp.display()))?;
    drop(file);
    fs::rename(&tmp, &target)
        .map_err(|e| format!("cannot move report into {}: {e}", target.display()))
}

fn load_matrix(path: Option<&PathBuf>, sampler: &mut Sampler) -> Result<CMatrix, String> {
    match path {
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| format!("bad matrix {}: {e}", p.display()))?;
            matrix_from_json(&value).ok_or_else(|| {
                format!(
                    "bad matrix {}: expected [[[re, im], ...], ...]",
                    p.display()
                )
            })
        }
        None => Ok(sampler.next_matrix()),
    }
}

fn star_suite(args: StarSuiteArgs) -> ExitCode {
    let mut config = SuiteConfig::default();
    config.n = args.n;
    config.u = args.u;
    config.seed = args.seed;
    config.tol = args.tol;
    config.samples = args.samples;
    if let Err(err) = config.validate() {
        eprintln!("config error: {err}");
        return ExitCode::from(2);
    }
    let report = match run_suite("star", &config) {
        Ok(r) => r,
        Err(err) => {
            eprintln!("config error: {err}");
            return ExitCode::from(2);
        }
    };
    for check in &report.checks {
        println!(
            "{} {} {} residual={}",
            if check.pass { "PASS" } else { "FAIL" },
            check.id,
            check.detail,
            check.residual
        );
    }
    if let Some(dir) = &args.out {
        if let Err(msg) = write_report(dir, "star", &report) {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    }
    if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn eval(args: EvalArgs) -> ExitCode {
    if args.n == 0 || args.n > 8 {
        eprintln!("config error: n must lie in 1..=8");
        return ExitCode::from(2);
    }
    let params = StarParams::new(args.u);
    let mut sampler = Sampler::new(args.n as usize, args.u, args.seed);
    let k = match load_matrix(args.k.as_ref(), &mut sampler) {
        Ok(m) => m,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match args.op {
        StarOp::K => Ok(big_k(&k, &params)),
        StarOp::KInv => big_k_inv(&k, &params),
        StarOp::D | StarOp::Dt => {
            let q = match load_matrix(args.q.as_ref(), &mut sampler) {
                Ok(m) => m,
                Err(msg) => {
                    eprintln!("config error: {msg}");
                    return ExitCode::from(2);
                }
            };
            Ok(match args.op {
                StarOp::D => big_d(&k, &q, &params),
                _ => big_d_tilde(&k, &q, &params),
            })
        }
    };
    let matrix = match result {
        Ok(m) => m,
        Err(err) => {
            eprintln!("evaluation error: {err}");
            return ExitCode::from(1);
        }
    };
    let text = serde_json::to_string_pretty(&matrix_to_json(&matrix)).unwrap();
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, format!("{text}\n")) {
                eprintln!("config error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    ExitCode::SUCCESS
}
