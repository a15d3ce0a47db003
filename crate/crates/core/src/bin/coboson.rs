use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use coboson::coboson::run_fidelity;
use coboson::eigen::{SolverOptions, DEFAULT_TOL};
use coboson::experiments::{
    self, csv, fidelity_row, node_metrics_csv, run_sweep, summary_csv, FamilySweep, GraphSpec,
    Measure, SweepConfig,
};
use coboson::graph::{load_graph, save_graph, Boundary, Family, Graph, LoadOptions};
use coboson::hamiltonian::ModelOptions;
use coboson::metrics::MetricsReport;
use coboson::Error;

#[derive(Parser)]
#[command(name = "coboson", version, about = "Coboson ansatz fidelity on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write its edge list plus metrics CSVs.
    Graph {
        #[command(flatten)]
        graph: GraphArgs,
        /// Edge-list output path (default: <label>.edges).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print average path length, circuit rank and degree histogram.
    Metrics {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also write <OUT>.metrics.csv and <OUT>.summary.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the N-pair ground state with the coboson ansatz.
    Fidelity {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        pairs: u8,
        #[command(flatten)]
        model: ModelArgs,
        /// Append the result row to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep from a config file or from command-line ranges.
    Sweep(SweepArgs),
    /// Regenerate a figure dataset from the pinned presets.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Open,
    Closed,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Open => Boundary::Open,
            BoundaryArg::Closed => Boundary::Closed,
        }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct GraphArgs {
    /// chain, square, triangular, hexagonal, sierpinski, hanoi, vicsek, star, complete
    #[arg(value_name = "FAMILY", value_parser = parse_family)]
    family_pos: Option<Family>,
    #[arg(long, value_parser = parse_family, conflicts_with = "family_pos")]
    family: Option<Family>,
    /// Node count (chain, star, complete) or lattice columns.
    #[arg(long)]
    m: Option<usize>,
    /// Lattice side (rows).
    #[arg(long)]
    n: Option<usize>,
    /// Fractal level.
    #[arg(long)]
    level: Option<usize>,
    /// Vicsek branching number.
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long, value_enum, default_value = "open")]
    boundary: BoundaryArg,
    /// Read the graph from an edge-list file instead.
    #[arg(long, conflicts_with_all = ["family_pos", "family"])]
    graph: Option<PathBuf>,
}

impl GraphArgs {
    fn spec(&self) -> Option<GraphSpec> {
        let family = self.family.or(self.family_pos)?;
        Some(GraphSpec {
            family,
            m: self.m,
            n: self.n,
            level: self.level,
            nu: self.nu,
            boundary: self.boundary.into(),
        })
    }

    fn load(&self) -> coboson::Result<Graph> {
        if let Some(path) = &self.graph {
            return load_graph(path, LoadOptions::default());
        }
        match self.spec() {
            Some(spec) => spec.build(),
            None => Err(Error::InvalidParam(
                "give a graph family or --graph <FILE>".into(),
            )),
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Drop the nearest-neighbour interaction (hard-core constraint only).
    #[arg(long)]
    no_nn_repulsion: bool,
}

impl ModelArgs {
    fn apply(&self, cfg: &mut SweepConfig) {
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if self.no_nn_repulsion {
            cfg.nn_repulsion = false;
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Keep finished instances found in an existing output file.
    #[arg(long)]
    resume: bool,
}

impl RunArgs {
    fn apply(&self, cfg: &mut SweepConfig) {
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// TOML sweep configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_family, conflicts_with = "config")]
    family: Option<Family>,
    /// Node counts (chain, star, complete), comma separated.
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// Lattice sides, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Fractal levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    level: Vec<usize>,
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',')]
    boundary: Vec<BoundaryArg>,
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(2..=3))]
    pairs: Vec<u8>,
    #[arg(long, value_parser = parse_measure)]
    measure: Option<Measure>,
    /// Output file stem.
    #[arg(long)]
    name: Option<String>,
    /// Leave the smallest size of each family out of dimension fits.
    #[arg(long)]
    fit_exclude_smallest: bool,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct ReproduceArgs {
    /// fig2, fig3, fig4, fig5 or fig6
    figure: String,
    /// Preset file to use instead of the built-in one.
    #[arg(long)]
    presets: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeTooSmall(_)
        | Error::InvalidParam(_)
        | Error::Config(_)
        | Error::UnsupportedPairs(_)
        | Error::TooFewSites { .. }
        | Error::Parse { .. }
        | Error::DuplicateEdge(..)
        | Error::SelfLoop(_)
        | Error::NodeOutOfRange { .. }
        | Error::DisconnectedGraph { .. }
        | Error::DimensionTooLarge { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Graph { graph, out } => cmd_graph(&graph, out),
        Command::Metrics { graph, out } => cmd_metrics(&graph, out),
        Command::Fidelity {
            graph,
            pairs,
            model,
            out,
        } => cmd_fidelity(&graph, pairs as usize, &model, out),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Reproduce(args) => cmd_reproduce(&args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn ensure_parent(path: &Path) -> coboson::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| Error::Io {
                path: dir.to_path_buf(),
                source: e,
            })
        }
        _ => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> coboson::Result<()> {
    ensure_parent(path)?;
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn print_summary(g: &Graph, report: &MetricsReport) {
    println!("M = {}", report.num_nodes);
    println!("E = {}", report.num_edges);
    println!(
        "avg_path_length = {}",
        csv::format_float(report.avg_path_length)
    );
    println!("circuit_rank = {}", report.circuit_rank);
    let hist: Vec<String> = g
        .degree_histogram()
        .iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect();
    println!("degrees = {}", hist.join(" "));
}

fn write_metrics(g: &Graph, report: &MetricsReport, stem: &Path) -> coboson::Result<()> {
    let metrics = stem.with_extension("metrics.csv");
    let summary = stem.with_extension("summary.csv");
    write_file(&metrics, &node_metrics_csv(g, report))?;
    write_file(&summary, &summary_csv(g, report))?;
    eprintln!("wrote {} and {}", metrics.display(), summary.display());
    Ok(())
}

fn cmd_graph(args: &GraphArgs, out: Option<PathBuf>) -> coboson::Result<ExitCode> {
    let g = args.load()?;
    let out = match (out, args.spec()) {
        (Some(p), _) => p,
        (None, Some(spec)) => PathBuf::from(format!("{}.edges", spec.label())),
        (None, None) => PathBuf::from("graph.edges"),
    };
    ensure_parent(&out)?;
    save_graph(&g, &out)?;
    eprintln!(
        "wrote {} ({} nodes, {} edges)",
        out.display(),
        g.num_nodes(),
        g.num_edges()
    );
    let report = MetricsReport::compute(&g)?;
    write_metrics(&g, &report, &out)?;
    print_summary(&g, &report);
    Ok(ExitCode::SUCCESS)
}

fn cmd_metrics(args: &GraphArgs, out: Option<PathBuf>) -> coboson::Result<ExitCode> {
    let g = args.load()?;
    let report = MetricsReport::compute(&g)?;
    print_summary(&g, &report);
    if let Some(stem) = out {
        write_metrics(&g, &report, &stem)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fidelity(
    args: &GraphArgs,
    pairs: usize,
    model: &ModelArgs,
    out: Option<PathBuf>,
) -> coboson::Result<ExitCode> {
    let g = args.load()?;
    let solver = SolverOptions::default()
        .with_tol(model.tol.unwrap_or(DEFAULT_TOL))
        .with_seed(model.seed.unwrap_or(0));
    let opts = ModelOptions {
        include_nn_repulsion: !model.no_nn_repulsion,
    };
    let run = run_fidelity(&g, pairs, opts, &solver)?;
    let header = csv::header_line(csv::FIDELITY_COLUMNS);
    let row = fidelity_row(&run.record);
    println!("{header}");
    println!("{row}");
    if let Some(path) = out {
        append_row(&path, &header, &row)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn append_row(path: &Path, header: &str, row: &str) -> coboson::Result<()> {
    let io_err = |e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    ensure_parent(path)?;
    let fresh = !path.exists() || fs::metadata(path).map_err(io_err)?.len() == 0;
    if !fresh {
        // Validates the header of the existing file.
        csv::read_rows(path, csv::FIDELITY_COLUMNS)?;
    }
    let mut f = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err)?;
    let mut text = String::new();
    if fresh {
        text.push_str(&format!(
            "# coboson fidelity schema_version={}\n# created_unix={}\n{header}\n",
            csv::SCHEMA_VERSION,
            csv::unix_timestamp()
        ));
    }
    text.push_str(row);
    text.push('\n');
    f.write_all(text.as_bytes()).map_err(io_err)
}

fn sweep_from_flags(args: &SweepArgs) -> coboson::Result<SweepConfig> {
    let family = args
        .family
        .ok_or_else(|| Error::InvalidParam("sweep needs --config or --family".into()))?;
    let lists = [&args.m, &args.n, &args.level];
    let given: Vec<&&Vec<usize>> = lists.iter().filter(|l| !l.is_empty()).collect();
    if given.len() != 1 {
        return Err(Error::InvalidParam(
            "give exactly one of --m, --n, --level as the size list".into(),
        ));
    }
    Ok(SweepConfig {
        families: vec![FamilySweep {
            family,
            boundaries: args.boundary.iter().map(|&b| b.into()).collect(),
            nu: args.nu,
            sizes: given[0].to_vec(),
        }],
        ..SweepConfig::default()
    })
}

fn cmd_sweep(args: &SweepArgs) -> coboson::Result<ExitCode> {
    let mut cfg = match &args.config {
        Some(path) => {
            if !(args.m.is_empty() && args.n.is_empty() && args.level.is_empty())
                || args.nu.is_some()
                || !args.boundary.is_empty()
            {
                return Err(Error::InvalidParam(
                    "family ranges come from the config file; drop --m/--n/--level/--nu/--boundary"
                        .into(),
                ));
            }
            SweepConfig::load(path)?
        }
        None => sweep_from_flags(args)?,
    };
    if !args.pairs.is_empty() {
        cfg.pairs = args.pairs.iter().map(|&p| p as usize).collect();
    }
    if let Some(m) = args.measure {
        cfg.measure = m;
    }
    if let Some(name) = &args.name {
        cfg.name = name.clone();
    }
    if args.fit_exclude_smallest {
        cfg.fit_exclude_smallest = true;
    }
    args.model.apply(&mut cfg);
    args.run.apply(&mut cfg);
    finish_sweep(&cfg, args.run.resume)
}

fn cmd_reproduce(args: &ReproduceArgs) -> coboson::Result<ExitCode> {
    let mut cfg = match &args.presets {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            let (_, mut presets) = experiments::presets_from_str(&text)?;
            presets.remove(&args.figure).ok_or_else(|| {
                Error::InvalidParam(format!(
                    "{} has no preset '{}'",
                    path.display(),
                    args.figure
                ))
            })?
        }
        None => experiments::preset(&args.figure)?,
    };
    args.model.apply(&mut cfg);
    if !cfg.nn_repulsion && cfg.measure == Measure::Fidelity {
        cfg.name.push_str("_hardcore");
    }
    args.run.apply(&mut cfg);
    finish_sweep(&cfg, args.run.resume)
}

fn finish_sweep(cfg: &SweepConfig, resume: bool) -> coboson::Result<ExitCode> {
    let report = run_sweep(cfg, resume)?;
    eprintln!(
        "{}: {} instances, {} reused, {} computed, {} failed",
        report.path.display(),
        report.total,
        report.reused,
        report.computed,
        report.failures.len()
    );
    if let Some(fit) = &report.fit_path {
        eprintln!("dimension fits in {}", fit.display());
    }
    for f in &report.failures {
        eprintln!("failed: {f}");
    }
    Ok(if report.is_success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
