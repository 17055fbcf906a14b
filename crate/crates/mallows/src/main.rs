//! Batch front door: sampling, distances, Lindeberg reports, convergence
//! experiments, and oracle checks, with reproducible CSV/JSON outputs and a
//! manifest sidecar per run.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;
use serde::Serialize;
use sha2::{Digest, Sha256};

use mallows::coupling::{generate, PairModel};
use mallows::harness::{run_experiment, ExperimentConfig};
use mallows::lindeberg::LindebergReport;
use mallows::rng::{derive_seed, stream, Domain};
use mallows::transport::{mallows_discrete, transport_oracle, DiscreteLaw, EmpiricalDistribution};
use mallows::{Error, StableParams};

/// Exit code for usage and parameter-domain errors.
const EXIT_DOMAIN: u8 = 2;
/// Exit code for runtime numeric or I/O failures.
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "mallows", version, about = "Stable sums, Mallows distances, and Lindeberg-type convergence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw i.i.d. stable variates to a one-column file.
    Sample(SampleArgs),
    /// Mallows distance between two samples or two discrete laws.
    Distance(DistanceArgs),
    /// Lindeberg condition report (corrected and original sums) over a grid.
    Lindeberg(ReportArgs),
    /// Convergence experiment: one row per n of the ladder.
    Converge(ReportArgs),
    /// Cross-check the discrete distance against the transport oracle on
    /// random instances.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long)]
    alpha: f64,
    /// Sample file (one value per line); pairs with --ys.
    #[arg(long, requires = "ys", conflicts_with_all = ["p", "q"])]
    xs: Option<PathBuf>,
    #[arg(long)]
    ys: Option<PathBuf>,
    /// Inline discrete law, e.g. '{"atoms": [[0.0, 0.5], [1.0, 0.5]]}'.
    #[arg(long, requires = "q")]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Solve the discrete instance with the brute-force transport oracle
    /// instead of the quantile coupling.
    #[arg(long)]
    oracle: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON experiment config; see the book's CLI chapter for the schema.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_atoms: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Stability indices to exercise.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.2, 1.5, 1.9])]
    alphas: Vec<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Distance(args) => cmd_distance(args),
        Command::Lindeberg(args) => cmd_lindeberg(args),
        Command::Converge(args) => cmd_converge(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let domain = err
                .downcast_ref::<Error>()
                .map(Error::is_domain)
                .unwrap_or(false);
            ExitCode::from(if domain { EXIT_DOMAIN } else { EXIT_RUNTIME })
        }
    }
}

/// 17 significant digits: enough to round-trip any f64.
fn fmt(x: f64) -> String {
    format!("{:.16e}", x)
}

#[derive(Serialize)]
struct RunManifest {
    tool: String,
    version: String,
    command: String,
    seed: u64,
    config: serde_json::Value,
    outputs: Vec<OutputRecord>,
}

#[derive(Serialize)]
struct OutputRecord {
    path: String,
    sha256: String,
}

fn write_manifest(
    out: &Path,
    command: &str,
    seed: u64,
    config: serde_json::Value,
    payload: &[u8],
) -> anyhow::Result<()> {
    let digest = Sha256::digest(payload);
    let manifest = RunManifest {
        tool: "mallows".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        seed,
        config,
        outputs: vec![OutputRecord {
            path: out.display().to_string(),
            sha256: format!("{digest:x}"),
        }],
    };
    let path = manifest_path(out);
    fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn cmd_sample(args: SampleArgs) -> anyhow::Result<ExitCode> {
    let params = StableParams::new(args.alpha, args.sigma, args.beta, args.mu)?;
    if args.count == 0 {
        return Err(Error::EmptyCount.into());
    }
    let draws = params.sample(args.count, args.seed)?;
    let mut body = String::with_capacity(args.count * 24);
    for x in &draws {
        body.push_str(&fmt(*x));
        body.push('\n');
    }
    fs::write(&args.out, body.as_bytes())?;
    write_manifest(
        &args.out,
        "sample",
        args.seed,
        serde_json::json!({
            "stable": params,
            "count": args.count,
        }),
        body.as_bytes(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn read_sample_file(path: &Path) -> anyhow::Result<EmpiricalDistribution> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|e| {
            anyhow::anyhow!("{}:{}: bad number ({e})", path.display(), lineno + 1)
        })?;
        values.push(v);
    }
    Ok(EmpiricalDistribution::from_unsorted(values)?)
}

fn cmd_distance(args: DistanceArgs) -> anyhow::Result<ExitCode> {
    let estimate = match (&args.xs, &args.ys, &args.p, &args.q) {
        (Some(xs), Some(ys), None, None) => {
            if args.oracle {
                return Err(Error::InvalidConfig(
                    "--oracle applies to discrete laws, not sample files".into(),
                )
                .into());
            }
            let xs = read_sample_file(xs)?;
            let ys = read_sample_file(ys)?;
            mallows::transport::mallows_empirical(&xs, &ys, args.alpha)?
        }
        (None, None, Some(p), Some(q)) => {
            let p: DiscreteLaw = serde_json::from_str(p)?;
            let q: DiscreteLaw = serde_json::from_str(q)?;
            if args.oracle {
                transport_oracle(&p, &q, args.alpha)?
            } else {
                mallows_discrete(&p, &q, args.alpha)?
            }
        }
        _ => {
            return Err(Error::InvalidConfig(
                "need either --xs/--ys or --p/--q".into(),
            )
            .into())
        }
    };
    let body = format!(
        "{{\"alpha\": {}, \"cost\": {}, \"root\": {}}}\n",
        fmt(estimate.alpha),
        fmt(estimate.cost),
        fmt(estimate.root)
    );
    match &args.out {
        Some(path) => fs::write(path, body.as_bytes())?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn load_config(args: &ReportArgs) -> anyhow::Result<ExperimentConfig> {
    let text = fs::read_to_string(&args.config)?;
    let mut config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", args.config.display())))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

fn cmd_converge(args: ReportArgs) -> anyhow::Result<ExitCode> {
    let config = load_config(&args)?;
    let rows = run_experiment(&config)?;
    let body = match args.format {
        OutputFormat::Csv => {
            let mut body =
                String::from("n,b_used,c_n,d_cost_hat,lindeberg,bound_rhs,replicates,se\n");
            for row in &rows {
                body.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    row.n,
                    fmt(row.b_used),
                    fmt(row.c_n),
                    fmt(row.d_cost_hat),
                    fmt(row.lindeberg),
                    fmt(row.bound_rhs),
                    row.replicates,
                    fmt(row.se)
                ));
            }
            body
        }
        OutputFormat::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    fs::write(&args.out, body.as_bytes())?;
    write_manifest(
        &args.out,
        "converge",
        config.seed,
        serde_json::to_value(&config)?,
        body.as_bytes(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_lindeberg(args: ReportArgs) -> anyhow::Result<ExitCode> {
    let config = load_config(&args)?;
    let mut body = match args.format {
        OutputFormat::Csv => String::from("n,b,L2,L1\n"),
        OutputFormat::Json => String::from("[\n"),
    };
    let mut first = true;
    for &n in &config.n_ladder {
        let report = match &config.model {
            // Exact mode for tabulated gap laws.
            PairModel::Custom { laws } => {
                LindebergReport::from_laws(laws, config.stable.alpha, n, &config.b_grid)?
            }
            // Monte Carlo realization otherwise.
            _ => {
                let seed = derive_seed(config.seed, Domain::Replicate, n as u64);
                let pairs = generate(&config.model, &config.stable, n, seed)?;
                LindebergReport::from_pairs(&pairs, &config.b_grid)?
            }
        };
        for row in &report.rows {
            match args.format {
                OutputFormat::Csv => body.push_str(&format!(
                    "{},{},{},{}\n",
                    n,
                    fmt(row.b),
                    fmt(row.l2),
                    fmt(row.l1)
                )),
                OutputFormat::Json => {
                    if !first {
                        body.push_str(",\n");
                    }
                    first = false;
                    body.push_str(&format!(
                        "  {{\"n\": {}, \"b\": {}, \"L2\": {}, \"L1\": {}}}",
                        n,
                        fmt(row.b),
                        fmt(row.l2),
                        fmt(row.l1)
                    ));
                }
            }
        }
    }
    if args.format == OutputFormat::Json {
        body.push_str("\n]\n");
    }
    fs::write(&args.out, body.as_bytes())?;
    write_manifest(
        &args.out,
        "lindeberg",
        config.seed,
        serde_json::to_value(&config)?,
        body.as_bytes(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn random_law(rng: &mut impl RngCore, max_atoms: usize) -> DiscreteLaw {
    let unit = |rng: &mut dyn RngCore| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    loop {
        let count = 1 + (rng.next_u64() as usize) % max_atoms;
        let mut locations: Vec<f64> = (0..count).map(|_| 10.0 * unit(rng) - 5.0).collect();
        locations.sort_by(f64::total_cmp);
        locations.dedup();
        let mut probs: Vec<f64> = (0..locations.len()).map(|_| unit(rng) + 1e-3).collect();
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        // Pin the mass to exactly one within the law's tolerance.
        let head: f64 = probs[..probs.len() - 1].iter().sum();
        let last = probs.len() - 1;
        probs[last] = 1.0 - head;
        let atoms: Vec<(f64, f64)> = locations.into_iter().zip(probs).collect();
        if let Ok(law) = DiscreteLaw::new(atoms) {
            return law;
        }
    }
}

fn cmd_oracle_check(args: OracleArgs) -> anyhow::Result<ExitCode> {
    if args.max_atoms == 0 || args.max_atoms > mallows::transport::ORACLE_ATOM_LIMIT {
        return Err(Error::InvalidConfig(format!(
            "max_atoms must be in 1..={}",
            mallows::transport::ORACLE_ATOM_LIMIT
        ))
        .into());
    }
    let mut rng = stream(args.seed, Domain::Sample, 0);
    let mut max_diff = 0.0f64;
    for i in 0..args.instances {
        let p = random_law(&mut rng, args.max_atoms);
        let q = random_law(&mut rng, args.max_atoms);
        let alpha = args.alphas[i % args.alphas.len()];
        let fast = mallows_discrete(&p, &q, alpha)?;
        let oracle = transport_oracle(&p, &q, alpha)?;
        max_diff = max_diff.max((fast.cost - oracle.cost).abs());
    }
    let pass = max_diff <= args.tolerance;
    println!(
        "{{\"instances\": {}, \"max_abs_diff\": {}, \"tolerance\": {}, \"pass\": {}}}",
        args.instances,
        fmt(max_diff),
        fmt(args.tolerance),
        pass
    );
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(EXIT_RUNTIME) })
}
