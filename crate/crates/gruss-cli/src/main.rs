//! `gruss` — evaluate trace-functional bound chains on matrices.
//!
//! Exit codes: 0 all checks hold, 1 a mathematical claim failed (violated
//! link, failed precondition, verify failures), 2 usage or I/O trouble.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gruss_cli::campaign::{self, TrialConfig};
use gruss_core::bounds::{chain_by_name, ChainInput, HProfile};
use gruss_core::distance::{dist_characterizations, dist_sphere, dist_to_scalars};
use gruss_core::linalg::{spectral_norm, DensityOperator, OptimizerSettings};
use gruss_core::matrix::ComplexMatrix;
use gruss_core::zoo::{self, Family, ZooSpec};
use gruss_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "gruss",
    version,
    about = "Trace-functional bound chains: verification campaigns, single evaluations, sweeps"
)]
struct Cli {
    /// Base seed for all randomized searches (env GRUSS_SEED).
    #[arg(long, global = true, env = "GRUSS_SEED", default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChainArg {
    Renaud,
    Refined,
    Normal,
    Transloid,
    Theorem,
    Normaloid,
}

impl ChainArg {
    fn name(self) -> &'static str {
        match self {
            ChainArg::Renaud => "renaud",
            ChainArg::Refined => "refined",
            ChainArg::Normal => "normal",
            ChainArg::Transloid => "transloid",
            ChainArg::Theorem => "theorem",
            ChainArg::Normaloid => "normaloid",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full property campaign and write a JSON summary.
    Verify {
        /// JSON TrialConfig file; flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Trials per family in the chain suites.
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated dimensions, e.g. 2,3,4,6.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Matrix families for the chain suites.
        #[arg(long = "family", value_delimiter = ',')]
        families: Option<Vec<String>>,
        /// Override the absolute and relative inequality tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Report path (default gruss-verify.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one chain on explicit matrices and a state.
    Chain {
        matrix_a: PathBuf,
        matrix_t: PathBuf,
        state_p: PathBuf,
        #[arg(long, value_enum)]
        chain: ChainArg,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the (λ, μ) grid of the parametric bound, CSV output.
    Sweep {
        matrix_a: PathBuf,
        matrix_t: PathBuf,
        /// Grid points per axis (≥ 2, endpoints included).
        #[arg(long, default_value_t = 11)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance to the scalar operators with every cross-check.
    Distance {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a zoo sample or named fixture as matrix JSON.
    Zoo {
        #[arg(long, default_value = "ginibre")]
        family: String,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long)]
        rank: Option<usize>,
        /// Fixture name when --family fixture is selected.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Mathematical failure (violated inequality or precondition) vs usage/IO.
enum Failure {
    Math(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Math(m) | Failure::Usage(m) => m,
        }
    }
}

fn classify(err: CoreError) -> Failure {
    match &err {
        CoreError::Precondition { .. }
        | CoreError::NotHermitian { .. }
        | CoreError::NotPositiveSemidefinite { .. }
        | CoreError::NotPositiveDefinite { .. }
        | CoreError::TraceNotOne { .. }
        | CoreError::NonConvergence { .. } => Failure::Math(err.to_string()),
        _ => Failure::Usage(err.to_string()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("reading {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("parsing {what} {}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, default_name: &str, content: &str) -> Result<PathBuf, Failure> {
    let target = path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(default_name));
    fs::write(&target, content)
        .map_err(|e| Failure::Usage(format!("writing {}: {e}", target.display())))?;
    Ok(target)
}

fn settings_with_seed(seed: u64) -> OptimizerSettings {
    OptimizerSettings::default().with_seed(seed)
}

fn cmd_verify(
    seed: u64,
    config_path: Option<PathBuf>,
    trials: Option<usize>,
    dims: Option<Vec<usize>>,
    families: Option<Vec<String>>,
    tol: Option<f64>,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    let mut config: TrialConfig = match config_path {
        Some(path) => read_json(&path, "config")?,
        None => TrialConfig::default(),
    };
    config.seed = seed;
    if let Some(t) = trials {
        config.trials = t;
    }
    if let Some(d) = dims {
        config.dims = d;
    }
    if let Some(f) = families {
        config.families = f;
    }
    if let Some(t) = tol {
        config.tolerances.ineq_abs = Some(t);
        config.tolerances.ineq_rel = Some(t);
    }
    if let Some(path) = &out {
        config.output_path = Some(path.display().to_string());
    }
    config.validate().map_err(classify)?;

    let report = campaign::run_verify(&config).map_err(classify)?;
    for suite in &report.suites {
        println!(
            "suite {:22} trials {:>6}  failures {:>3}  worst slack {: .3e}",
            suite.suite, suite.trials, suite.failures, suite.worst_slack
        );
    }
    println!(
        "total failures: {} ({}s)",
        report.failures_total, report.elapsed_seconds as u64
    );
    let out_name = config
        .output_path
        .clone()
        .unwrap_or_else(|| "gruss-verify.json".into());
    let text = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let target = write_output(Some(Path::new(&out_name)), "gruss-verify.json", &text)?;
    println!("report written to {}", target.display());
    Ok(if report.failures_total == 0 { 0 } else { 1 })
}

fn cmd_chain(
    seed: u64,
    matrix_a: PathBuf,
    matrix_t: PathBuf,
    state_p: PathBuf,
    chain: ChainArg,
    lambda: f64,
    mu: f64,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    let a: ComplexMatrix = read_json(&matrix_a, "matrix A")?;
    let t: ComplexMatrix = read_json(&matrix_t, "matrix T")?;
    let p_matrix: ComplexMatrix = read_json(&state_p, "state P")?;
    let state = DensityOperator::new(p_matrix).map_err(classify)?;
    let evaluator = chain_by_name(chain.name()).map_err(classify)?;
    let settings = settings_with_seed(seed);
    let input = ChainInput {
        a: &a,
        t: &t,
        state: &state,
        lambda,
        mu,
    };
    let report = evaluator.evaluate(&input, &settings).map_err(classify)?;
    print!("{}", report.render_table());
    if let Some(path) = out {
        let text =
            serde_json::to_string_pretty(&report).map_err(|e| Failure::Usage(e.to_string()))?;
        let target = write_output(Some(&path), "chain.json", &text)?;
        println!("report written to {}", target.display());
    }
    if report.all_hold() {
        Ok(0)
    } else {
        Err(Failure::Math(format!(
            "chain `{}` violated: worst slack {:.3e}",
            chain.name(),
            report.worst_slack()
        )))
    }
}

fn cmd_sweep(
    seed: u64,
    matrix_a: PathBuf,
    matrix_t: PathBuf,
    grid: usize,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    if grid < 2 {
        return Err(Failure::Usage("grid must be ≥ 2".into()));
    }
    let a: ComplexMatrix = read_json(&matrix_a, "matrix A")?;
    let t: ComplexMatrix = read_json(&matrix_t, "matrix T")?;
    let settings = settings_with_seed(seed);
    let profile_a = HProfile::compute(&a, &settings).map_err(classify)?;
    let profile_t = HProfile::compute(&t, &settings).map_err(classify)?;
    let dist_a = dist_to_scalars(&a, &settings).map_err(classify)?;
    let dist_t = dist_to_scalars(&t, &settings).map_err(classify)?;
    let lhs = dist_a.distance * dist_t.distance;
    let rr = profile_a.disc.radius * profile_t.disc.radius;

    let mut csv = String::from("lambda,mu,h_lambda,h_mu,k,bound,lhs,slack\n");
    for i in 0..grid {
        for j in 0..grid {
            let lam = i as f64 / (grid - 1) as f64;
            let mu = j as f64 / (grid - 1) as f64;
            let h_a = profile_a.h(lam).map_err(classify)?;
            let h_t = profile_t.h(mu).map_err(classify)?;
            let k = h_a * h_t;
            let bound = k * rr;
            csv.push_str(&format!(
                "{lam},{mu},{h_a:.12},{h_t:.12},{k:.12},{bound:.12},{lhs:.12},{:.12}\n",
                bound - lhs
            ));
        }
    }
    let target = write_output(out.as_deref(), "sweep.csv", &csv)?;
    println!("{} rows written to {}", grid * grid, target.display());
    Ok(0)
}

fn cmd_distance(seed: u64, matrix: PathBuf, out: Option<PathBuf>) -> Result<u8, Failure> {
    let a: ComplexMatrix = read_json(&matrix, "matrix")?;
    let settings = settings_with_seed(seed);
    let direct = dist_to_scalars(&a, &settings).map_err(classify)?;
    let sphere = dist_sphere(&a, &settings).map_err(classify)?;
    let ch = dist_characterizations(&a, &settings).map_err(classify)?;
    let norm = spectral_norm(&a).map_err(classify)?;
    let tol = 1e-6 * (1.0 + norm);
    let sphere_agrees = (direct.distance - sphere.distance).abs() <= tol;
    let char_tol = 1e-4 * (1.0 + direct.distance);
    let comm_agrees = (ch.commutator_half_sup - direct.distance).abs() <= char_tol;
    let proj_agrees = (ch.rank_one_proj_sup - direct.distance).abs() <= char_tol;

    println!("c(A)                = {:+.12}{:+.12}i", direct.center.re, direct.center.im);
    println!("dist(A, C·Id)       = {:.12}", direct.distance);
    println!("sphere supremum     = {:.12}  (agrees: {sphere_agrees})", sphere.distance);
    println!(
        "commutator bound    = {:.12}  (agrees: {comm_agrees})",
        ch.commutator_half_sup
    );
    println!(
        "rank-one projection = {:.12}  (agrees: {proj_agrees})",
        ch.rank_one_proj_sup
    );
    if direct.degenerate {
        println!("input is a scalar multiple of the identity (degenerate)");
    }

    let payload = json!({
        "center": [direct.center.re, direct.center.im],
        "distance": direct.distance,
        "grid_value": direct.grid_value,
        "degenerate": direct.degenerate,
        "converged": direct.converged,
        "sphere_distance": sphere.distance,
        "sphere_converged": sphere.converged,
        "commutator_half_sup": ch.commutator_half_sup,
        "rank_one_proj_sup": ch.rank_one_proj_sup,
        "agreement": {
            "sphere": sphere_agrees,
            "commutator": comm_agrees,
            "rank_one_projection": proj_agrees,
        },
    });
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&payload)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        let target = write_output(Some(&path), "distance.json", &text)?;
        println!("report written to {}", target.display());
    }
    Ok(0)
}

fn cmd_zoo(
    seed: u64,
    family: String,
    dim: usize,
    rank: Option<usize>,
    fixture: Option<String>,
    out: Option<PathBuf>,
) -> Result<u8, Failure> {
    let family_enum = Family::parse(&family).map_err(classify)?;
    let spec = ZooSpec {
        family: family_enum,
        dim,
        rank,
        seed,
        fixture_name: fixture,
    };
    let matrix = zoo::generate(&spec).map_err(classify)?.into_matrix();
    let text =
        serde_json::to_string_pretty(&matrix).map_err(|e| Failure::Usage(e.to_string()))?;
    match out {
        Some(path) => {
            let target = write_output(Some(&path), "matrix.json", &text)?;
            println!("matrix written to {}", target.display());
        }
        None => println!("{text}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify {
            config,
            trials,
            dims,
            families,
            tol,
            out,
        } => cmd_verify(cli.seed, config, trials, dims, families, tol, out),
        Command::Chain {
            matrix_a,
            matrix_t,
            state_p,
            chain,
            lambda,
            mu,
            out,
        } => cmd_chain(cli.seed, matrix_a, matrix_t, state_p, chain, lambda, mu, out),
        Command::Sweep {
            matrix_a,
            matrix_t,
            grid,
            out,
        } => cmd_sweep(cli.seed, matrix_a, matrix_t, grid, out),
        Command::Distance { matrix, out } => cmd_distance(cli.seed, matrix, out),
        Command::Zoo {
            family,
            dim,
            rank,
            fixture,
            out,
        } => cmd_zoo(cli.seed, family, dim, rank, fixture, out),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
