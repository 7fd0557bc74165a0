//! `graphcx`: enumerate, check and compute with graph complexes from the
//! command line.
//!
//! Exit status: 0 on success, 2 on usage or input errors, 3 when a
//! verification finds a nonzero residual (or an oracle disagrees), 4 when
//! `--strict` is set and a window is not closed or a degree is untrusted.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "graphcx", version, about = "Exact computations in Kontsevich and hairy graph complexes")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = "GRAPHCX_CONFIG")]
    config: Option<PathBuf>,
    /// Worker threads; outputs do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Treat untrusted degrees and open windows as failures (exit 4).
    #[arg(long, global = true)]
    strict: bool,
    /// Recompute key numbers with independent routines and compare.
    #[arg(long, global = true)]
    oracle: bool,
    /// Directory receiving a copy of the report.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the permutation checks done under `--oracle`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Kontsevich,
    Hairy,
}

/// Bounds shared by the enumerating subcommands. Missing values fall back
/// to the `[truncation]` table of the config file, then to the command's
/// own default.
#[derive(Args, Debug, Clone, Copy)]
pub struct Bounds {
    #[arg(long)]
    max_edges: Option<usize>,
    #[arg(long)]
    max_internal: Option<usize>,
    #[arg(long)]
    max_hairs: Option<usize>,
    #[arg(long)]
    max_decorations: Option<usize>,
}

/// Algebra and twisting choices for hairy mode.
#[derive(Args, Debug, Clone)]
pub struct HairyArgs {
    /// Algebra labelling the hairs (builtin or registered name).
    #[arg(long, default_value = "sphere3")]
    hair_alg: String,
    /// Algebra decorating internal vertices.
    #[arg(long)]
    deco_alg: Option<String>,
    /// Twisting element file; its algebra becomes the decoration algebra
    /// unless `--deco-alg` is given.
    #[arg(long)]
    z: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the basis of a graph complex slice in the plain-text format.
    Basis {
        #[arg(long, value_enum, default_value = "kontsevich")]
        mode: Mode,
        #[arg(long, default_value_t = 3)]
        n: i32,
        /// Number of external vertices (Kontsevich mode).
        #[arg(long, default_value_t = 2)]
        externals: usize,
        /// Only graphs of this cohomological degree.
        #[arg(long, allow_negative_numbers = true)]
        degree: Option<i32>,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        hairy: HairyArgs,
        /// Basis file to write instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check that the differential squares to zero on every graph of a window.
    Dsq {
        #[arg(long, value_enum, default_value = "kontsevich")]
        mode: Mode,
        #[arg(long, default_value_t = 3)]
        n: i32,
        #[arg(long, default_value_t = 2)]
        externals: usize,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        hairy: HairyArgs,
    },
    /// Cohomology of a truncated Kontsevich complex, with trust flags.
    Cohomology {
        #[arg(long, default_value_t = 3)]
        n: i32,
        #[arg(long, default_value_t = 2)]
        externals: usize,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Curvature report of a twisting element through a truncation.
    McCheck {
        /// Twisting element file.
        #[arg(long)]
        z: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// The L-infinity relations on every multiset of graphs in a window.
    LinfCheck {
        #[arg(long, default_value_t = 3)]
        n: i32,
        /// Highest relation order checked.
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        hairy: HairyArgs,
    },
    /// The two worked examples.
    #[command(subcommand)]
    Example(Example),
}

#[derive(Subcommand, Debug)]
enum Example {
    /// Decorated versus haired complexes for a sphere target.
    S51 {
        #[arg(long, default_value_t = 3)]
        n: i32,
        #[arg(long, default_value_t = 3)]
        k: i32,
        #[arg(long)]
        max_loops: Option<usize>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Lowest-degree tree shapes for a product of spheres.
    S52 {
        #[arg(long, default_value_t = 3)]
        d: i32,
        #[arg(long, default_value_t = 3)]
        k: i32,
        #[command(flatten)]
        bounds: Bounds,
    },
}

/// Resolved global settings.
pub struct Run {
    pub cfg: RunConfig,
    pub strict: bool,
    pub oracle: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

/// How a command ended; each maps to an exit status.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Usage(String),
    Verification,
    Trust,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => RunConfig::default(),
    };
    let threads = cli.threads.or(cfg.threads).unwrap_or(0);
    let run = Run {
        strict: cli.strict || cfg.strict,
        oracle: cli.oracle || cfg.oracle,
        seed: cli.seed.or(cfg.seed).unwrap_or(0),
        out: cli.out.clone().or_else(|| cfg.out_dir.clone()),
        cfg,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let status = pool.install(|| dispatch(&run, cli.command));
    match status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Status::Verification => ExitCode::from(3),
        Status::Trust => ExitCode::from(4),
    }
}

fn dispatch(run: &Run, command: Command) -> Status {
    let reg = match run.cfg.registry() {
        Ok(r) => r,
        Err(e) => return Status::Usage(e),
    };
    let t = run.cfg.truncation;
    let result = match command {
        Command::Basis { mode, n, externals, degree, bounds, hairy, output } => {
            commands::basis(run, &reg, mode, n, externals, degree, bounds.resolve(t), &hairy, output)
        }
        Command::Dsq { mode, n, externals, bounds, hairy } => {
            commands::dsq(run, &reg, mode, n, externals, bounds.resolve(t), &hairy)
        }
        Command::Cohomology { n, externals, bounds } => commands::cohomology(run, n, externals, bounds.resolve(t)),
        Command::McCheck { z, bounds } => commands::mc_check(run, &reg, &z, bounds.resolve(t)),
        Command::LinfCheck { n, order, bounds, hairy } => {
            commands::linf_check(run, &reg, n, order, bounds.resolve(t), &hairy)
        }
        Command::Example(Example::S51 { n, k, max_loops, bounds }) => {
            let loops = max_loops.or(t.max_loops).unwrap_or(2);
            commands::s51(run, n, k, loops, bounds.resolve(t))
        }
        Command::Example(Example::S52 { d, k, bounds }) => commands::s52(run, d, k, bounds.resolve(t)),
    };
    result.unwrap_or_else(|e| Status::Usage(e.to_string()))
}

/// Bounds after falling back to the config file.
#[derive(Debug, Clone, Copy)]
pub struct Resolved {
    pub max_edges: Option<usize>,
    pub max_internal: Option<usize>,
    pub max_hairs: Option<usize>,
    pub max_decorations: Option<usize>,
}

impl Bounds {
    fn resolve(self, t: config::Truncation) -> Resolved {
        Resolved {
            max_edges: self.max_edges.or(t.max_edges),
            max_internal: self.max_internal.or(t.max_internal),
            max_hairs: self.max_hairs.or(t.max_hairs),
            max_decorations: self.max_decorations.or(t.max_decorations),
        }
    }
}
