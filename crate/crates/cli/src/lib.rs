//! Argument parsing and command execution for the `distcolor` binary.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use distcolor::bench::{
    run_partitioned, sweep, write_json, write_metrics_csv, write_trajectory_csv, BenchGraph, CsvRow,
    ExperimentConfig, TrajectoryRow,
};
use distcolor::dist::{Backend, Mode, ProtocolConfig, DEFAULT_MAX_ROUNDS};
use distcolor::graph::{
    block_partition, build_rank_views, generate_rmat, load_edge_list, load_matrix_market, load_partition_file,
    write_edge_list, write_matrix_market, write_partition_file, Graph, Partition, RmatParams,
};
use distcolor::recolor::{recolor_iterations, PermutationSchedule, RecolorConfig, RecolorFlavor};
use distcolor::seq::{check_validity, Coloring, OrderingKind, SelectionKind};
use distcolor::{RunMetrics, UNCOLORED};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1;
pub const MAX_ROUNDS_ENV: &str = "DISTCOLOR_MAX_ROUNDS";

#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    Rmat(RmatParams),
    MatrixMarket(PathBuf),
    EdgeList(PathBuf),
}

impl GraphSource {
    /// Parses `rmat:scale[,edge_factor[,a,b,c,d]]` or a file path, which
    /// is read as Matrix Market when it ends in `.mtx`.
    pub fn parse(spec: &str, graph_seed: u64) -> Result<Self, String> {
        let Some(rest) = spec.strip_prefix("rmat:") else {
            let path = PathBuf::from(spec);
            return Ok(if path.extension().is_some_and(|e| e == "mtx") {
                GraphSource::MatrixMarket(path)
            } else {
                GraphSource::EdgeList(path)
            });
        };
        let fields: Vec<&str> = rest.split(',').collect();
        if !matches!(fields.len(), 1 | 2 | 6) {
            return Err(format!("expected rmat:scale[,edge_factor[,a,b,c,d]], got {spec:?}"));
        }
        let scale: u32 = fields[0].parse().map_err(|_| format!("bad RMAT scale {:?}", fields[0]))?;
        let edge_factor: usize = match fields.get(1) {
            Some(f) => f.parse().map_err(|_| format!("bad RMAT edge factor {f:?}"))?,
            None => 8,
        };
        let mut probabilities = RmatParams::ER;
        if fields.len() == 6 {
            for (slot, f) in probabilities.iter_mut().zip(&fields[2..]) {
                *slot = f.parse().map_err(|_| format!("bad RMAT probability {f:?}"))?;
            }
        }
        let params = RmatParams::new(scale, edge_factor, probabilities, graph_seed);
        params.validate().map_err(|e| e.to_string())?;
        Ok(GraphSource::Rmat(params))
    }

    /// Short name used in result tables.
    pub fn name(&self) -> String {
        match self {
            GraphSource::Rmat(p) => {
                let [a, b, c, d] = p.probabilities;
                format!("rmat-{}-{}-{a}-{b}-{c}-{d}", p.scale, p.edge_factor)
            }
            GraphSource::MatrixMarket(path) | GraphSource::EdgeList(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }

    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::Rmat(p) => Ok(generate_rmat(p)?),
            GraphSource::MatrixMarket(path) => {
                let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
                load_matrix_market(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
            }
            GraphSource::EdgeList(path) => {
                let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
                load_edge_list(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartsSource {
    Block(usize),
    File { path: PathBuf, ranks: usize },
}

impl FromStr for PartsSource {
    type Err = String;

    /// `block:P`, `file:PATH` (rank count = largest owner + 1) or
    /// `file:PATH:P`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(p) = s.strip_prefix("block:") {
            let p: usize = p.parse().map_err(|_| format!("bad rank count {p:?}"))?;
            if p == 0 {
                return Err("rank count must be at least 1".into());
            }
            return Ok(PartsSource::Block(p));
        }
        if let Some(rest) = s.strip_prefix("file:") {
            let (path, ranks) = match rest.rsplit_once(':') {
                Some((path, p)) if p.parse::<usize>().is_ok() => (path, p.parse().unwrap()),
                _ => (rest, 0),
            };
            return Ok(PartsSource::File {
                path: path.into(),
                ranks,
            });
        }
        Err(format!("expected block:P or file:PATH, got {s:?}"))
    }
}

impl PartsSource {
    pub fn load(&self, g: &Graph) -> Result<Partition> {
        match self {
            PartsSource::Block(p) => Ok(block_partition(g, *p)?),
            PartsSource::File { path, ranks } => {
                let text = std::fs::read_to_string(path).with_context(|| format!("opening {}", path.display()))?;
                let ranks = if *ranks > 0 {
                    *ranks
                } else {
                    text.split_whitespace()
                        .filter_map(|t| t.parse::<usize>().ok())
                        .max()
                        .map_or(1, |m| m + 1)
                };
                load_partition_file(text.as_bytes(), g, ranks)
                    .with_context(|| format!("reading partition {}", path.display()))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Speed,
    Quality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl FromStr for SeedArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "random" {
            return Ok(SeedArg::Random);
        }
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an integer or `random`, got {s:?}"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "distcolor", version, about = "Distributed-memory graph coloring on a simulated cluster")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Write a graph to a file (.mtx or edge list).
    Generate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a partition file, one owner per line.
    Partition {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        parts: PartsSource,
        #[arg(long)]
        out: PathBuf,
    },
    /// Color a graph, optionally followed by recoloring.
    Color(RunArgs),
    /// Recolor a graph; colors it first unless `--initial` is given.
    Recolor {
        #[command(flatten)]
        run: RunArgs,
        /// Starting coloring, in the format written by `--coloring`.
        #[arg(long)]
        initial: Option<PathBuf>,
    },
    /// Run presets over graphs, rank counts and seeds.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GraphSourceArgs {
    /// `rmat:scale[,edge_factor[,a,b,c,d]]` or a graph file.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub mtx: Option<PathBuf>,
    #[arg(long)]
    pub edges: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    #[command(flatten)]
    pub source: GraphSourceArgs,
    /// Seed for RMAT generation.
    #[arg(long, default_value_t = 1)]
    pub graph_seed: u64,
}

impl GraphArgs {
    fn resolve(&self) -> Result<GraphSource, String> {
        match (&self.source.graph, &self.source.mtx, &self.source.edges) {
            (Some(spec), None, None) => GraphSource::parse(spec, self.graph_seed),
            (None, Some(p), None) => Ok(GraphSource::MatrixMarket(p.clone())),
            (None, None, Some(p)) => Ok(GraphSource::EdgeList(p.clone())),
            _ => Err("give exactly one of --graph, --mtx, --edges".into()),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// `block:P` or `file:PATH[:P]`.
    #[arg(long, default_value = "block:1")]
    pub parts: PartsSource,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// natural | lf | sl | if | bf
    #[arg(long)]
    pub ordering: Option<OrderingKind>,
    /// ff | sff[:estimate] | lu | randx:X
    #[arg(long)]
    pub selection: Option<SelectionKind>,
    /// sync | async
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Vertices colored per superstep.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub superstep: Option<u64>,
    #[arg(long)]
    pub recolor_iters: Option<usize>,
    /// rv | ni | nd | rand | nd-rand:X | nd-rand-pow2
    #[arg(long)]
    pub perm: Option<PermutationSchedule>,
    #[arg(long)]
    pub piggyback: bool,
    /// sync | async
    #[arg(long, default_value = "sync")]
    pub recolor_flavor: Mode,
    /// Integer, or `random` for a fresh seed.
    #[arg(long)]
    pub seed: Option<SeedArg>,
    /// deterministic | threaded
    #[arg(long, default_value = "deterministic")]
    pub backend: Backend,
    /// Metrics CSV.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Metrics JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Coloring dump, one `vertex color` pair per line.
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// Color count per recoloring iteration, CSV.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Graph specs, repeatable.
    #[arg(long = "graph", required = true)]
    pub graphs: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub graph_seed: u64,
    /// Rank counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub ranks: Vec<usize>,
    /// Presets to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "speed,quality")]
    pub presets: Vec<Preset>,
    /// X of Random-X Fit in the quality preset.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub quality_x: u32,
    /// Number of seeds per cell, starting at `--seed`.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub seeds: u64,
    #[arg(long)]
    pub seed: Option<SeedArg>,
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outputs {
    pub metrics_csv: Option<PathBuf>,
    pub metrics_json: Option<PathBuf>,
    pub coloring: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
}

/// A validated `color` or `recolor` invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub graph: GraphSource,
    pub parts: PartsSource,
    pub experiment: ExperimentConfig,
    pub seed: u64,
    /// Starting coloring for `recolor`.
    pub initial: Option<PathBuf>,
    pub outputs: Outputs,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub graphs: Vec<GraphSource>,
    pub configs: Vec<ExperimentConfig>,
    pub seeds: Vec<u64>,
    pub outputs: Outputs,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Generate { graph: GraphSource, out: PathBuf },
    Partition { graph: GraphSource, parts: PartsSource, out: PathBuf },
    Run(RunConfig),
    Sweep(SweepConfig),
}

fn usage_error(kind: ErrorKind, msg: impl std::fmt::Display) -> clap::Error {
    Cli::command().error(kind, msg)
}

fn max_rounds_from_env() -> Result<u32, clap::Error> {
    match std::env::var(MAX_ROUNDS_ENV) {
        Err(_) => Ok(DEFAULT_MAX_ROUNDS),
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(usage_error(
                ErrorKind::ValueValidation,
                format!("{MAX_ROUNDS_ENV} must be a positive integer, got {v:?}"),
            )),
        },
    }
}

fn resolve_seed(seed: Option<SeedArg>) -> u64 {
    match seed {
        None => DEFAULT_SEED,
        Some(SeedArg::Fixed(s)) => s,
        Some(SeedArg::Random) => rand::random(),
    }
}

fn experiment_from(args: &RunArgs, ranks: usize, default_iterations: usize) -> Result<ExperimentConfig, clap::Error> {
    let mut exp = match args.preset {
        Some(Preset::Speed) => ExperimentConfig::speed(ranks),
        Some(Preset::Quality) => ExperimentConfig::quality(ranks, 5),
        None => ExperimentConfig {
            ranks,
            recolor_iterations: default_iterations,
            ..ExperimentConfig::speed(ranks)
        },
    };
    if args.preset.is_none() {
        exp.protocol.ordering = OrderingKind::Natural;
    }
    if let Some(o) = args.ordering {
        exp.protocol.ordering = o;
    }
    if let Some(s) = args.selection {
        exp.protocol.selection = s;
    }
    if let Some(m) = args.mode {
        exp.protocol.mode = m;
    }
    if let Some(s) = args.superstep {
        exp.protocol.superstep_size = s as usize;
    }
    if let Some(i) = args.recolor_iters {
        exp.recolor_iterations = i;
    }
    if let Some(p) = args.perm {
        exp.schedule = p;
    }
    exp.piggyback = args.piggyback;
    exp.recolor_async = args.recolor_flavor == Mode::Asynchronous;
    if args.piggyback && exp.recolor_async {
        return Err(usage_error(
            ErrorKind::ArgumentConflict,
            "--piggyback applies to synchronous recoloring only",
        ));
    }
    exp.protocol.backend = args.backend;
    exp.protocol.max_rounds = max_rounds_from_env()?;
    exp.protocol
        .validate()
        .map_err(|e| usage_error(ErrorKind::ValueValidation, e))?;
    Ok(exp)
}

fn run_config(args: &RunArgs, initial: Option<PathBuf>, default_iterations: usize) -> Result<RunConfig, clap::Error> {
    let graph = args
        .graph
        .resolve()
        .map_err(|e| usage_error(ErrorKind::ValueValidation, format!("--graph: {e}")))?;
    let ranks = match &args.parts {
        PartsSource::Block(p) => *p,
        PartsSource::File { ranks, .. } => *ranks,
    };
    Ok(RunConfig {
        graph,
        parts: args.parts.clone(),
        experiment: experiment_from(args, ranks, default_iterations)?,
        seed: resolve_seed(args.seed),
        initial,
        outputs: Outputs {
            metrics_csv: args.metrics.clone(),
            metrics_json: args.json.clone(),
            coloring: args.coloring.clone(),
            trajectory: args.trajectory.clone(),
        },
    })
}

/// Parses and validates a full argument vector, program name first.
pub fn parse_config<I, T>(argv: I) -> Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let graph_error = |e: String| usage_error(ErrorKind::ValueValidation, format!("--graph: {e}"));
    Ok(match cli.command {
        CliCommand::Generate { graph, out } => Command::Generate {
            graph: graph.resolve().map_err(graph_error)?,
            out,
        },
        CliCommand::Partition { graph, parts, out } => Command::Partition {
            graph: graph.resolve().map_err(graph_error)?,
            parts,
            out,
        },
        CliCommand::Color(args) => Command::Run(run_config(&args, None, 0)?),
        CliCommand::Recolor { run, initial } => Command::Run(run_config(&run, initial, 1)?),
        CliCommand::Sweep(args) => {
            let graphs = args
                .graphs
                .iter()
                .map(|g| GraphSource::parse(g, args.graph_seed))
                .collect::<Result<Vec<_>, _>>()
                .map_err(graph_error)?;
            if args.ranks.contains(&0) {
                return Err(usage_error(ErrorKind::ValueValidation, "--ranks: rank counts must be at least 1"));
            }
            let max_rounds = max_rounds_from_env()?;
            let mut configs = Vec::new();
            for &preset in &args.presets {
                for &p in &args.ranks {
                    let mut cfg = match preset {
                        Preset::Speed => ExperimentConfig::speed(p),
                        Preset::Quality => ExperimentConfig::quality(p, args.quality_x),
                    };
                    cfg.protocol.max_rounds = max_rounds;
                    configs.push(cfg);
                }
            }
            let first = resolve_seed(args.seed);
            Command::Sweep(SweepConfig {
                graphs,
                configs,
                seeds: (0..args.seeds).map(|i| first.wrapping_add(i)).collect(),
                outputs: Outputs {
                    metrics_csv: args.metrics,
                    metrics_json: args.json,
                    coloring: None,
                    trajectory: args.trajectory,
                },
            })
        }
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_tables(outputs: &Outputs, rows: &[CsvRow], trajectory: &[TrajectoryRow]) -> Result<()> {
    if let Some(path) = &outputs.metrics_csv {
        write_metrics_csv(create(path)?, rows).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &outputs.metrics_json {
        write_json(create(path)?, rows).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &outputs.trajectory {
        write_trajectory_csv(create(path)?, trajectory).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Writes `vertex color` lines, vertices 0-based, colors 1-based.
pub fn write_coloring<W: Write>(mut out: W, coloring: &Coloring) -> std::io::Result<()> {
    for (v, &c) in coloring.as_raw().iter().enumerate() {
        writeln!(out, "{v} {c}")?;
    }
    out.flush()
}

pub fn read_coloring<R: BufRead>(reader: R, n: usize) -> Result<Coloring> {
    let mut coloring = Coloring::uncolored(n);
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(v), Some(c), None) = (it.next(), it.next(), it.next()) else {
            bail!("line {}: expected `vertex color`", i + 1);
        };
        let v: usize = v.parse().with_context(|| format!("line {}: bad vertex", i + 1))?;
        let c: u32 = c.parse().with_context(|| format!("line {}: bad color", i + 1))?;
        if v >= n || c == UNCOLORED {
            bail!("line {}: vertex {v} or color {c} out of range", i + 1);
        }
        coloring.set(v, c);
    }
    Ok(coloring)
}

fn ensure_valid(g: &Graph, coloring: &Coloring) -> Result<()> {
    let bad = check_validity(g, coloring)?;
    if !bad.is_empty() {
        bail!("coloring failed validity check: {} conflicting edges", bad.len());
    }
    Ok(())
}

fn recolor_from(g: &Graph, part: &Partition, initial: &Coloring, cfg: &RunConfig) -> Result<(Coloring, RunMetrics)> {
    let exp = &cfg.experiment;
    let rc = RecolorConfig {
        schedule: exp.schedule,
        iterations: exp.recolor_iterations,
        selection: exp.recolor_selection,
        piggyback: exp.piggyback,
        seed: cfg.seed,
        flavor: if exp.recolor_async {
            RecolorFlavor::Asynchronous(ProtocolConfig {
                seed: cfg.seed,
                ..exp.protocol.clone()
            })
        } else {
            RecolorFlavor::Synchronous
        },
    };
    let views = build_rank_views(g, part)?;
    let (out, metrics, _) = recolor_iterations(g, views, initial, &rc)?;
    Ok((out, metrics))
}

fn execute_run(cfg: &RunConfig) -> Result<()> {
    let g = cfg.graph.load()?;
    let part = cfg.parts.load(&g)?;
    let mut exp = cfg.experiment.clone();
    exp.ranks = part.num_ranks();

    let (coloring, metrics) = match &cfg.initial {
        Some(path) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let initial = read_coloring(BufReader::new(file), g.num_vertices())
                .with_context(|| format!("reading {}", path.display()))?;
            ensure_valid(&g, &initial).context("initial coloring")?;
            recolor_from(&g, &part, &initial, cfg)?
        }
        None => run_partitioned(&g, &part, &exp, cfg.seed)?,
    };
    ensure_valid(&g, &coloring)?;

    let name = cfg.graph.name();
    let label = exp.label();
    let rows = [CsvRow::from_metrics(&name, &label, cfg.seed, &metrics)];
    let trajectory = TrajectoryRow::from_metrics(&name, &label, cfg.seed, &metrics);
    write_tables(&cfg.outputs, &rows, &trajectory)?;
    if let Some(path) = &cfg.outputs.coloring {
        write_coloring(create(path)?, &coloring).with_context(|| format!("writing {}", path.display()))?;
    }
    println!(
        "{name} {label}: {} colors, {} rounds, {} conflicts, {} messages ({} non-empty)",
        metrics.num_colors,
        metrics.rounds,
        metrics.conflicts,
        metrics.messages(),
        metrics.nonempty_messages()
    );
    Ok(())
}

fn execute_sweep(cfg: &SweepConfig) -> Result<()> {
    let graphs = cfg
        .graphs
        .iter()
        .map(|src| {
            Ok(BenchGraph {
                name: src.name(),
                graph: src.load()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let table = sweep(&graphs, &cfg.configs, &cfg.seeds)?;
    write_tables(&cfg.outputs, &table.csv_rows(), &table.trajectory_rows())?;
    for cell in &table.cells {
        match cell.error() {
            Some(e) => println!("{} {}: error: {e}", cell.graph, cell.config),
            None => println!(
                "{} {}: mean {:.2} colors",
                cell.graph,
                cell.config,
                cell.mean("num_colors").unwrap_or(f64::NAN)
            ),
        }
    }
    Ok(())
}

pub fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Generate { graph, out } => {
            let g = graph.load()?;
            let w = create(out)?;
            if out.extension().is_some_and(|e| e == "mtx") {
                write_matrix_market(&g, w)?;
            } else {
                write_edge_list(&g, w)?;
            }
            println!("{}: {} vertices, {} edges", graph.name(), g.num_vertices(), g.num_edges());
            Ok(())
        }
        Command::Partition { graph, parts, out } => {
            let g = graph.load()?;
            let part = parts.load(&g)?;
            write_partition_file(&part, create(out)?)?;
            Ok(())
        }
        Command::Run(cfg) => execute_run(cfg),
        Command::Sweep(cfg) => execute_sweep(cfg),
    }
}
