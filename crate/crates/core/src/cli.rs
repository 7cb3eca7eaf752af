//! Command-line surface. `main.rs` only parses arguments and maps errors
//! to exit codes; everything else lives here so it can be driven from
//! tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Result, RsmError};
use crate::evaluation::adjusted_rand_index;
use crate::generator::{sample_scenario, scenario_table3, ScenarioSpec};
use crate::inference::{fit, FitConfig};
use crate::io;
use crate::oracle::{exact_log_evidence, OracleLimits};
use crate::params::PriorHyperparams;
use crate::selection::select_k;

#[derive(Debug, Parser)]
#[command(
    name = "rsm",
    version,
    about = "Random subgraph model for typed directed networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a network, its partition and the true clusters.
    Generate(GenerateArgs),
    /// Fit the model with a fixed number of clusters.
    Fit(FitArgs),
    /// Fit a range of cluster counts and pick the best lower bound.
    SelectK(SelectArgs),
    /// Adjusted Rand index between two label files.
    Eval(EvalArgs),
    /// Test tooling.
    #[command(subcommand)]
    Debug(DebugCommand),
}

#[derive(Debug, Subcommand)]
pub enum DebugCommand {
    /// Exact log-evidence by enumeration (tiny networks only).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Built-in simulation setting (1, 2 or 3).
    #[arg(long, conflicts_with = "params", required_unless_present = "params")]
    pub scenario: Option<usize>,
    /// TOML file with a structured scenario.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for network.txt, partition.txt and truth.txt.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    #[arg(long = "max-iter", default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output directory for the result bundle.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long = "k-min", default_value_t = 1)]
    pub k_min: usize,
    #[arg(long = "k-max", default_value_t = 8)]
    pub k_max: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// CSV output path; the curve goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub labels_a: PathBuf,
    pub labels_b: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(&args, out),
        Command::Fit(args) => cmd_fit(&args, out),
        Command::SelectK(args) => cmd_select_k(&args, out),
        Command::Eval(args) => cmd_eval(&args, out),
        Command::Debug(DebugCommand::Oracle(args)) => cmd_oracle(&args, out),
    }
}

fn emit(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(text).map_err(|source| RsmError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn resolve_seed(seed: Option<u64>, out: &mut dyn Write) -> Result<u64> {
    let seed = seed.unwrap_or_else(rand::random);
    emit(out, format_args!("seed: {seed}\n"))?;
    Ok(seed)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| RsmError::Io {
        path: dir.display().to_string(),
        source,
    })
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let spec = match (&args.scenario, &args.params) {
        (Some(which), _) => {
            // validates the index before a seed is drawn
            crate::generator::table3_spec::<f64>(*which)?;
            None
        }
        (None, Some(path)) => {
            let text = io::read_file(path)?;
            let spec: ScenarioSpec<f64> = toml::from_str(&text).map_err(|e| RsmError::Parse {
                path: path.display().to_string(),
                line: e
                    .span()
                    .map(|s| text[..s.start].lines().count().max(1))
                    .unwrap_or(0),
                message: e.message().to_string(),
            })?;
            Some(spec)
        }
        (None, None) => {
            return Err(RsmError::Usage(
                "either --scenario or --params is required".into(),
            ))
        }
    };
    let seed = resolve_seed(args.seed, out)?;
    let sample = match (spec, args.scenario) {
        (Some(spec), _) => sample_scenario(&spec, seed)?,
        (None, Some(which)) => scenario_table3::<f64>(which, seed)?,
        (None, None) => unreachable!(),
    };
    ensure_dir(&args.out)?;
    io::write_file(
        &args.out.join("network.txt"),
        &io::format_network(&sample.network),
    )?;
    io::write_file(
        &args.out.join("partition.txt"),
        &io::format_partition(&sample.network),
    )?;
    io::write_file(
        &args.out.join("truth.txt"),
        &io::format_labels(&sample.true_labels),
    )?;
    emit(
        out,
        format_args!(
            "N={} S={} C={} edges={}\n",
            sample.network.n_vertices(),
            sample.network.n_subgraphs(),
            sample.network.n_types(),
            sample.network.n_edges()
        ),
    )
}

fn solver_config(k: usize, solver: &SolverArgs, seed: u64) -> FitConfig<f64> {
    FitConfig {
        n_restarts: solver.restarts,
        max_iterations: solver.max_iter,
        epsilon_converge: solver.epsilon,
        ..FitConfig::new(k).with_seed(seed)
    }
}

pub fn cmd_fit(args: &FitArgs, out: &mut dyn Write) -> Result<()> {
    let net = io::read_network(&args.input.network, &args.input.partition)?;
    let seed = resolve_seed(args.solver.seed, out)?;
    let config = solver_config(args.k, &args.solver, seed);
    let result = fit(&net, &config)?;

    ensure_dir(&args.out)?;
    io::write_file(
        &args.out.join("labels.txt"),
        &io::format_labels(&result.map_labels),
    )?;
    io::write_file(
        &args.out.join("params.txt"),
        &io::format_params_report(&result.state.posterior_means()),
    )?;
    io::write_file(
        &args.out.join("elbo_trace.csv"),
        &io::format_elbo_trace(&result.elbo_trace),
    )?;

    let mut meta = format!(
        "seed={seed}\nK={}\nrestarts={}\nepsilon={:e}\nmax_iterations={}\nbest_restart={}\nfinal_elbo={:.12}\niterations={}\nconverged={}\n",
        config.n_clusters,
        config.n_restarts,
        config.epsilon_converge,
        config.max_iterations,
        result.restart_index + 1,
        result.final_elbo(),
        result.n_iterations,
        result.converged,
    );
    for r in &result.restarts {
        meta.push_str(&format!(
            "restart {}: elbo={:.12} iterations={} converged={}\n",
            r.index + 1,
            r.final_elbo,
            r.n_iterations,
            r.converged
        ));
    }
    io::write_file(&args.out.join("run.txt"), &meta)?;

    emit(
        out,
        format_args!(
            "elbo: {:.6}\niterations: {}\n",
            result.final_elbo(),
            result.n_iterations
        ),
    )
}

pub fn cmd_select_k(args: &SelectArgs, out: &mut dyn Write) -> Result<()> {
    if args.k_min == 0 || args.k_min > args.k_max {
        return Err(RsmError::Usage(format!(
            "need 1 <= --k-min <= --k-max, got {}..{}",
            args.k_min, args.k_max
        )));
    }
    let net = io::read_network(&args.input.network, &args.input.partition)?;
    let seed = resolve_seed(args.solver.seed, out)?;
    let template = solver_config(args.k_min, &args.solver, seed);
    let result = select_k(&net, args.k_min..=args.k_max, &template)?;

    let mut csv = String::from("K,best_elbo,n_restarts_converged\n");
    for (k, elbo, converged) in result.curve() {
        csv.push_str(&format!("{k},{elbo:.12},{converged}\n"));
    }
    for (k, err) in &result.excluded {
        eprintln!("K={k} excluded: {err}");
    }
    match &args.out {
        Some(path) => io::write_file(path, &csv)?,
        None => emit(out, format_args!("{csv}"))?,
    }
    emit(out, format_args!("k_star: {}\n", result.k_star))
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let a = io::parse_labels(
        &io::read_file(&args.labels_a)?,
        &args.labels_a.display().to_string(),
    )?;
    let b = io::parse_labels(
        &io::read_file(&args.labels_b)?,
        &args.labels_b.display().to_string(),
    )?;
    if a.len() != b.len() {
        return Err(RsmError::Usage(format!(
            "label files cover different vertex sets (1..={} vs 1..={})",
            a.len(),
            b.len()
        )));
    }
    let ari = adjusted_rand_index(&a, &b)?;
    emit(out, format_args!("{ari:.6}\n"))
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<()> {
    let net = io::read_network(&args.input.network, &args.input.partition)?;
    let priors = PriorHyperparams::<f64>::jeffreys(net.n_subgraphs(), args.k, net.n_types());
    let value = exact_log_evidence(&net, args.k, &priors, OracleLimits::default())?;
    emit(out, format_args!("log_evidence: {value:.12}\n"))
}
