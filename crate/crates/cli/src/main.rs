//! `ego-refine`: compare graphs, model-check formulas, compile and run
//! networks, count homomorphisms.
//!
//! Exit codes: 0 indistinguishable (or the formula holds), 10 distinguished
//! (or it fails), 2 usage, input or guard errors.

mod commands;
mod report;
mod source;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ego_refine::he::Radius;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ego_refine::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(name = "ego-refine", version, about = "Hierarchical ego refinement toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Worker threads for parallel steps.
    #[arg(long, env = "EGO_REFINE_WORKERS", global = true)]
    pub workers: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Wl,
    He,
    Wlir,
    Net,
    Formula,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Wl => "wl",
            Method::He => "he",
            Method::Wlir => "wlir",
            Method::Net => "net",
            Method::Formula => "formula",
        }
    }
}

fn parse_radius(s: &str) -> Result<Radius, String> {
    s.parse().map_err(|e: ego_refine::Error| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct Refinement {
    /// Nesting depth.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// Ego radius, a positive integer or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_radius)]
    pub radius: Radius,
    /// Refinement rounds per level; defaults to the largest node count.
    #[arg(long)]
    pub iters: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a method tells two graphs apart.
    Distinguish {
        /// Graph source, or a source holding a pair.
        left: String,
        right: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::He)]
        method: Method,
        #[command(flatten)]
        refine: Refinement,
        /// Formula source for `--method formula`.
        #[arg(long)]
        formula: Option<String>,
        /// Network file for `--method net`.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Model-check a formula at one node or at every node.
    Check {
        graph: String,
        formula: String,
        #[arg(long)]
        node: Option<usize>,
        /// Variable binding `x=3`; repeatable.
        #[arg(long = "env", value_name = "VAR=NODE")]
        env: Vec<String>,
    },
    /// Compile a sentence into a network file.
    Compile {
        formula: String,
        /// Bound every plain binder to this radius.
        #[arg(long)]
        radius: Option<u32>,
        /// Input propositions, comma separated; defaults to those in the formula.
        #[arg(long, value_delimiter = ',')]
        props: Option<Vec<String>>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run a network file on a graph.
    RunNet {
        spec: String,
        graph: String,
        /// Use checked integer arithmetic.
        #[arg(long)]
        exact: bool,
    },
    /// Pairwise comparison over a directory of graph6 files.
    Report {
        dir: String,
        #[arg(long, value_enum, default_value_t = Method::He)]
        method: Method,
        #[command(flatten)]
        refine: Refinement,
        #[arg(long)]
        out: Option<String>,
    },
    /// Color refinement on one graph.
    Wl {
        graph: String,
        #[arg(long)]
        iters: Option<usize>,
    },
    /// WL-IR tree of one graph.
    Wlir {
        graph: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Include the whole tree.
        #[arg(long)]
        tree: bool,
    },
    /// Rooted homomorphism counts.
    Homcount {
        pattern: String,
        graph: String,
        /// Count at this node only.
        #[arg(long)]
        node: Option<usize>,
    },
    /// Ego-rank of a rooted pattern with a witness.
    Egorank {
        pattern: String,
        /// Minimize over all valid assignments, not only normal-form ones.
        #[arg(long)]
        literal: bool,
    },
    /// List built-in graphs and formulas, or run the separation table.
    Examples {
        #[arg(long)]
        run: bool,
    },
}

fn dispatch(cmd: Command) -> Result<(serde_json::Value, u8), CliError> {
    match cmd {
        Command::Distinguish { left, right, method, refine, formula, spec } => {
            commands::distinguish(&left, right.as_deref(), method, &refine, formula.as_deref(), spec.as_deref())
        }
        Command::Check { graph, formula, node, env } => commands::check(&graph, &formula, node, &env),
        Command::Compile { formula, radius, props, out } => commands::compile(&formula, radius, props, out.as_deref()),
        Command::RunNet { spec, graph, exact } => commands::run_net(&spec, &graph, exact),
        Command::Report { dir, method, refine, out } => commands::report(&dir, method, &refine, out.as_deref()),
        Command::Wl { graph, iters } => commands::wl(&graph, iters),
        Command::Wlir { graph, depth, tree } => commands::wlir(&graph, depth, tree),
        Command::Homcount { pattern, graph, node } => commands::homcount(&pattern, &graph, node),
        Command::Egorank { pattern, literal } => commands::egorank(&pattern, literal),
        Command::Examples { run } => commands::examples(run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match dispatch(cli.command) {
        Ok((mut out, code)) => {
            if cli.global.timing {
                if let Some(obj) = out.as_object_mut() {
                    obj.insert("wall_time_ms".into(), (start.elapsed().as_secs_f64() * 1e3).into());
                }
            }
            report::emit(&out, cli.global.format);
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
