use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use trackscope_cli::output::OutputDir;
use trackscope_cli::pipeline::{run_config_stage, run_overlap, run_tt, Stage};
use trackscope_cli::{CliError, CliResult, RunConfig};

/// Publisher-tracker graph analytics over browser crawl logs.
///
/// The worker thread count is read from TRACKSCOPE_THREADS (default: all
/// cores); everything else comes from the config file and flags.
#[derive(Parser)]
#[command(name = "trackscope", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse logs, classify requests, filter publishers and align snapshots.
    Ingest(ConfigArgs),
    /// Per-publisher tracker activity panels, CDFs and HTTPS adoption.
    Netstats(ConfigArgs),
    /// Publisher-tracker graphs: summary, node metrics, correlations, rankings.
    Pt(ConfigArgs),
    /// Tracker co-occurrence graph from a PT edge list.
    Tt {
        /// PT edge list (`tracker,publisher,weight`).
        #[arg(long)]
        pt_edges: PathBuf,
        /// Optional `node,role` table adding isolated nodes.
        #[arg(long)]
        pt_nodes: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Minimum number of shared publishers for an edge.
        #[arg(long, default_value_t = trackscope::ttgraph::DEFAULT_THETA)]
        min_cooccurrence: u32,
    },
    /// Overlap between a cookie-sync ground-truth graph and a TT graph.
    Overlap {
        /// CSV with `domain_a,domain_b[,weight]`.
        #[arg(long)]
        cs: PathBuf,
        /// TT edge list (`node_a,node_b,weight`).
        #[arg(long)]
        tt: PathBuf,
        /// Optional `node,role` table of TT nodes, for isolated trackers.
        #[arg(long)]
        tt_nodes: Option<PathBuf>,
        #[arg(long)]
        suffix_rules: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Weight 1 for rows without a weight.
        #[arg(long)]
        default_weight: bool,
    },
    /// Trends and top-K stability across snapshots.
    Evolve(ConfigArgs),
    /// Every stage in order.
    All(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TT co-occurrence threshold, overriding the config.
    #[arg(long)]
    theta: Option<u32>,
    /// Ranking length, overriding the config.
    #[arg(long)]
    top_k: Option<usize>,
    /// Analyse snapshots without restricting them to common publishers.
    #[arg(long)]
    no_align: bool,
}

impl ConfigArgs {
    fn load(&self) -> CliResult<RunConfig> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(out) = &self.out {
            cfg.output_dir = std::env::current_dir()
                .map_err(|e| CliError::io(".", e))?
                .join(out);
        }
        if let Some(t) = self.theta {
            cfg.theta = t;
        }
        if let Some(k) = self.top_k {
            cfg.top_k = k;
        }
        if self.no_align {
            cfg.align = false;
        }
        Ok(cfg)
    }
}

fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("TRACKSCOPE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "TRACKSCOPE_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

/// Runs `f` against a fresh output directory and always writes the manifest.
fn with_output(
    root: PathBuf,
    command: &str,
    f: impl FnOnce(&mut OutputDir) -> CliResult<()>,
) -> CliResult<()> {
    let mut out = OutputDir::create(&root)?;
    let result = f(&mut out);
    out.finish(command, result.as_ref().err())?;
    result
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Tt {
            pt_edges,
            pt_nodes,
            out,
            min_cooccurrence,
        } => with_output(out, "tt", |o| {
            run_tt(&pt_edges, pt_nodes.as_deref(), min_cooccurrence, o)
        }),
        Command::Overlap {
            cs,
            tt,
            tt_nodes,
            suffix_rules,
            out,
            default_weight,
        } => with_output(out, "overlap", |o| {
            run_overlap(
                &cs,
                &tt,
                tt_nodes.as_deref(),
                &suffix_rules,
                default_weight,
                o,
            )
        }),
        Command::Ingest(a) => config_stage(Stage::Ingest, &a),
        Command::Netstats(a) => config_stage(Stage::Netstats, &a),
        Command::Pt(a) => config_stage(Stage::Pt, &a),
        Command::Evolve(a) => config_stage(Stage::Evolve, &a),
        Command::All(a) => config_stage(Stage::All, &a),
    }
}

fn config_stage(stage: Stage, args: &ConfigArgs) -> CliResult<()> {
    let cfg = args.load()?;
    cfg.validate()?;
    with_output(cfg.output_root(), stage.name(), |o| {
        run_config_stage(stage, &cfg, o)
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
