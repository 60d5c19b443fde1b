//! Run configuration: every subcommand resolves to a serializable
//! `RunConfig` that re-executes to identical output.

use std::f64::consts::PI;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qw_core::{
    classical_column_distribution, classical_position_distribution, classify_coins,
    column_distribution, cycle_eigensystem, degeneracy_condition, enumerate_unbiased_coins4,
    evolve, extremal_spreading, find_period_numeric, limiting_distribution, minimal_periods,
    moments, moments2d, position_distribution, solve_period_condition,
    time_averaged_distribution, total_variation, BoundaryMode, CoinOperator, CoinSet, CoinSpec,
    Distribution, GraphKind, InitialCoinState, WalkGraph, WalkState,
};

use crate::output::{distribution_csv, fmt_f64, json_pretty, resolve_path, write_text};

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[command(
    name = "qw",
    version,
    about = "Discrete-time coined quantum walk simulator",
    after_help = "All angle flags (--theta, --phi, --alpha, --delta-over-pi) are in units of \u{03c0}."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file for the primary data product (`-` for stdout, the default).
    /// Relative paths are joined onto $QW_OUTPUT_DIR when set.
    #[arg(long, global = true)]
    pub output: Option<String>,

    /// Output format; each command has a natural default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the resolved run configuration as JSON to this path.
    #[arg(long, global = true)]
    pub save_config: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evolve a walk; writes the position distribution and a moment report.
    Walk(WalkArgs),
    /// Fourier-mode eigensystem of a cycle walk.
    Spectrum(SpectrumArgs),
    /// Analytic limiting distribution vs the empirical time average.
    Limit(LimitArgs),
    /// Numeric period search for a walk.
    Periods(PeriodsArgs),
    /// Scan the exact-periodicity condition over cycle sizes.
    PeriodScan(PeriodScanArgs),
    /// Enumerate and classify the 640 unbiased 4-D coins.
    Classify(ClassifyArgs),
    /// Column distributions on the glued-trees graph.
    GluedTrees(GluedTreesArgs),
    /// Extremal spreading of a 4-D coin over a grid of initial states.
    Sweep(SweepArgs),
    /// Re-execute a saved run configuration.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphArg {
    Line,
    Cycle,
    Lattice,
    GluedTrees,
    Hypercube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryArg {
    Open,
    Torus,
    MoebiusX,
    Klein,
}

impl From<BoundaryArg> for BoundaryMode {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Open => BoundaryMode::Open,
            BoundaryArg::Torus => BoundaryMode::Torus,
            BoundaryArg::MoebiusX => BoundaryMode::MoebiusX,
            BoundaryArg::Klein => BoundaryMode::Klein,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoinArg {
    /// Hadamard on degree 2, Hadamard⊗Hadamard on degree-4 lattices.
    Hadamard,
    Hadamard4,
    /// Grover coin of the local degree.
    Grover,
    Grover2,
    Grover3,
    Grover4,
    /// DFT coin of the local degree.
    Dft,
    Dft2,
    Dft3,
    Dft4,
    /// General 2-D coin from --rho/--theta/--phi.
    General,
    /// The δ = −π/2 unbiased mixing coin.
    Nonuniform,
    /// Member --coin-index of the enumerated 640-coin set.
    Index,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    /// |R⟩ on degree-2 graphs.
    Right,
    Left,
    /// (|R⟩ + i|L⟩)/√2.
    Symmetric,
    /// Uniform real superposition over all directions.
    Uniform,
    /// Basis state |RU⟩ on the lattice.
    Ru,
    /// (1/2)(|LD⟩ + i|LU⟩ + i|RD⟩ − |RU⟩).
    SymHadamard,
    /// (1/2)(|LD⟩ − |LU⟩ − |RD⟩ + |RU⟩).
    SymGrover,
    /// (1/2)(|LD⟩ + ω|LU⟩ + |RD⟩ − ω|RU⟩), ω = (1−i)/√2.
    SymDft,
    /// A fixed, entangled, phase-generic state (useful for period searches).
    Generic,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GraphOpts {
    #[arg(long, value_enum, default_value_t = GraphArg::Line)]
    pub graph: GraphArg,
    /// Cycle size N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Lattice width (the twisted axis for moebius-x/klein).
    #[arg(long)]
    pub width: Option<usize>,
    /// Lattice height.
    #[arg(long)]
    pub height: Option<usize>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    /// Glued-trees depth N.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Hypercube dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Line window override (default 2·steps+3).
    #[arg(long)]
    pub window: Option<usize>,
    /// Seed for the glued-trees random matching.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CoinOpts {
    #[arg(long, value_enum, default_value_t = CoinArg::Hadamard)]
    pub coin: CoinArg,
    /// Coin bias ρ ∈ [0, 1] for --coin general.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Coin phase θ in units of π.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Coin phase φ in units of π.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Index into the enumerated 640-coin set for --coin index.
    #[arg(long)]
    pub coin_index: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct InitOpts {
    /// Initial coin bias η ∈ [0, 1] (degree-2 graphs).
    #[arg(long)]
    pub eta: Option<f64>,
    /// Initial coin phase α in units of π.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub init: Option<InitArg>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct WalkArgs {
    #[command(flatten)]
    pub graph: GraphOpts,
    #[command(flatten)]
    pub coin: CoinOpts,
    #[command(flatten)]
    pub init: InitOpts,
    #[arg(long, default_value_t = 100)]
    pub steps: u64,
    /// Evolve the classical uniform-over-ports baseline instead.
    #[arg(long, default_value_t = false)]
    pub classical: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumArgs {
    /// Cycle size N.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub coin: CoinOpts,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct LimitArgs {
    /// Cycle size N.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub coin: CoinOpts,
    #[command(flatten)]
    pub init: InitOpts,
    /// Steps in the empirical Cesàro average.
    #[arg(long, default_value_t = 10_000)]
    pub t_avg: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct PeriodsArgs {
    #[command(flatten)]
    pub graph: GraphOpts,
    #[command(flatten)]
    pub coin: CoinOpts,
    #[command(flatten)]
    pub init: InitOpts,
    #[arg(long, default_value_t = 10_000)]
    pub omega_max: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct PeriodScanArgs {
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 120)]
    pub omega_max: u64,
    /// Report every certificate, including period multiples.
    #[arg(long, default_value_t = false)]
    pub all: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyArgs {
    /// Length of the second-moment probe trajectory.
    #[arg(long, default_value_t = 20)]
    pub t_probe: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GluedTreesArgs {
    #[arg(long)]
    pub depth: usize,
    #[command(flatten)]
    pub coin: CoinOpts,
    #[arg(long, default_value_t = 17)]
    pub steps: u64,
    /// Emit a time series (t,column,probability) at these steps instead.
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evolve the classical baseline instead.
    #[arg(long, default_value_t = false)]
    pub classical: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub coin: CoinOpts,
    #[arg(long, default_value_t = 40)]
    pub steps: u64,
    /// Number of random initial coin states added to the fixed grid.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Path to a JSON file written by --save-config.
    pub config: String,
}

/// The persisted, re-executable form of a CLI invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub output: Option<String>,
    pub format: Option<Format>,
}

pub fn run(cli: &Cli) -> Result<()> {
    let config = RunConfig {
        command: cli.command.clone(),
        output: cli.output.clone(),
        format: cli.format,
    };
    if let Some(path) = &cli.save_config {
        write_text(&Some(PathBuf::from(path)), &json_pretty(&config)?)?;
    }
    execute(&config)
}

pub fn execute(config: &RunConfig) -> Result<()> {
    let out = resolve_path(&config.output);
    match &config.command {
        Command::Walk(args) => cmd_walk(args, &out, config.format),
        Command::Spectrum(args) => cmd_spectrum(args, &out, config.format),
        Command::Limit(args) => cmd_limit(args, &out, config.format),
        Command::Periods(args) => cmd_periods(args, &out),
        Command::PeriodScan(args) => cmd_period_scan(args, &out, config.format),
        Command::Classify(args) => cmd_classify(args, &out, config.format),
        Command::GluedTrees(args) => cmd_glued_trees(args, &out, config.format),
        Command::Sweep(args) => cmd_sweep(args, &out),
        Command::Replay(args) => {
            let text = std::fs::read_to_string(&args.config)
                .with_context(|| format!("reading {}", args.config))?;
            let inner: RunConfig = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", args.config))?;
            if matches!(inner.command, Command::Replay(_)) {
                bail!("config: a replay cannot nest another replay");
            }
            execute(&inner)
        }
    }
}

// ---------------------------------------------------------------------------
// argument resolution

fn build_graph(g: &GraphOpts, steps: u64) -> Result<WalkGraph> {
    let window_for = |over: Option<usize>| -> Result<usize> {
        let need = 2 * steps as usize + 3;
        match over {
            Some(w) if w < need => {
                bail!("--window {w} is too small for --steps {steps}; the light cone needs at least {need} sites")
            }
            Some(w) => Ok(w),
            None => Ok(need),
        }
    };
    let graph = match g.graph {
        GraphArg::Line => WalkGraph::line(window_for(g.window)?)?,
        GraphArg::Cycle => {
            let n = g.n.ok_or_else(|| anyhow!("--n is required for --graph cycle"))?;
            WalkGraph::cycle(n)?
        }
        GraphArg::Lattice => {
            let boundary: BoundaryMode = g.boundary.into();
            let need = 2 * steps as usize + 3;
            let (width, height) = match boundary {
                BoundaryMode::Open => (
                    g.width.unwrap_or(need),
                    g.height.unwrap_or(need),
                ),
                BoundaryMode::MoebiusX => {
                    let w = g
                        .width
                        .ok_or_else(|| anyhow!("--width is required for --boundary moebius-x"))?;
                    (w, g.height.unwrap_or(need))
                }
                _ => {
                    let w = g
                        .width
                        .ok_or_else(|| anyhow!("--width is required for periodic boundaries"))?;
                    let h = g
                        .height
                        .ok_or_else(|| anyhow!("--height is required for periodic boundaries"))?;
                    (w, h)
                }
            };
            if matches!(boundary, BoundaryMode::Open) && (width < need || height < need) {
                bail!("--width/--height {width}x{height} too small for --steps {steps}; an open window needs at least {need} sites per axis");
            }
            WalkGraph::lattice2d(width, height, boundary)?
        }
        GraphArg::GluedTrees => {
            let depth = g
                .depth
                .ok_or_else(|| anyhow!("--depth is required for --graph glued-trees"))?;
            WalkGraph::glued_trees(depth, g.seed)?
        }
        GraphArg::Hypercube => {
            let dim = g
                .dim
                .ok_or_else(|| anyhow!("--dim is required for --graph hypercube"))?;
            WalkGraph::hypercube(dim)?
        }
    };
    Ok(graph)
}

fn general2_spec(c: &CoinOpts) -> Result<CoinSpec> {
    let rho = c
        .rho
        .ok_or_else(|| anyhow!("--rho is required for --coin general"))?;
    Ok(CoinSpec::General2 {
        rho,
        theta: c.theta.unwrap_or(0.0) * PI,
        phi: c.phi.unwrap_or(0.0) * PI,
    })
}

/// Resolve the coin against a graph. Glued trees take per-degree coin sets.
fn build_coins(c: &CoinOpts, graph: &WalkGraph) -> Result<CoinSet> {
    if matches!(graph.kind(), GraphKind::GluedTrees { .. }) {
        return match c.coin {
            CoinArg::Grover => Ok(CoinSet::grover_for(graph)?),
            CoinArg::Dft => Ok(CoinSet::dft_for(graph)?),
            other => bail!(
                "--coin {other:?} is not defined on the glued trees; use grover or dft (coins of the local vertex degree)"
            ),
        };
    }
    let d = graph.degree(0);
    let op = match c.coin {
        CoinArg::Hadamard => match d {
            2 => CoinOperator::hadamard(),
            4 => CoinOperator::hadamard().kron(&CoinOperator::hadamard(), "hadamard⊗hadamard"),
            _ => bail!("--coin hadamard needs a degree-2 or degree-4 graph, this one has degree {d}"),
        },
        CoinArg::Hadamard4 => {
            require_degree(d, 4, "hadamard4")?;
            CoinOperator::hadamard().kron(&CoinOperator::hadamard(), "hadamard⊗hadamard")
        }
        CoinArg::Grover => CoinOperator::grover(d)?,
        CoinArg::Grover2 => fixed_degree(d, 2, CoinOperator::grover(2)?, "grover2")?,
        CoinArg::Grover3 => fixed_degree(d, 3, CoinOperator::grover(3)?, "grover3")?,
        CoinArg::Grover4 => fixed_degree(d, 4, CoinOperator::grover(4)?, "grover4")?,
        CoinArg::Dft => CoinOperator::dft(d)?,
        CoinArg::Dft2 => fixed_degree(d, 2, CoinOperator::dft(2)?, "dft2")?,
        CoinArg::Dft3 => fixed_degree(d, 3, CoinOperator::dft(3)?, "dft3")?,
        CoinArg::Dft4 => fixed_degree(d, 4, CoinOperator::dft(4)?, "dft4")?,
        CoinArg::General => {
            require_degree(d, 2, "general")?;
            general2_spec(c)?.build()?
        }
        CoinArg::Nonuniform => {
            require_degree(d, 2, "nonuniform")?;
            CoinOperator::non_uniform_mixing()
        }
        CoinArg::Index => {
            require_degree(d, 4, "index")?;
            let idx = c
                .coin_index
                .ok_or_else(|| anyhow!("--coin-index is required for --coin index"))?;
            let coins = enumerate_unbiased_coins4();
            coins
                .get(idx)
                .cloned()
                .ok_or_else(|| anyhow!("--coin-index {idx} out of range (the set has {} coins)", coins.len()))?
        }
    };
    Ok(CoinSet::uniform(op))
}

fn require_degree(actual: usize, want: usize, name: &str) -> Result<()> {
    if actual != want {
        bail!("--coin {name} needs a degree-{want} graph, this one has degree {actual}");
    }
    Ok(())
}

fn fixed_degree(actual: usize, want: usize, op: CoinOperator, name: &str) -> Result<CoinOperator> {
    require_degree(actual, want, name)?;
    Ok(op)
}

fn generic_state(d: usize) -> InitialCoinState {
    // fixed phase-generic entangled vector, deterministic across runs
    let mut v: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(0.3 + 0.1 * (k as f64 + 1.0), 0.7 * k as f64 + 0.3))
        .collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    InitialCoinState::Explicit(v)
}

fn build_init(i: &InitOpts, graph: &WalkGraph) -> Result<InitialCoinState> {
    let d = graph.degree(graph.origin_vertex());
    if i.eta.is_some() || i.alpha.is_some() {
        if i.init.is_some() {
            bail!("--eta/--alpha and --init are mutually exclusive");
        }
        if d != 2 {
            bail!("--eta/--alpha describe a 2-D coin state; this graph has degree {d}");
        }
        return Ok(InitialCoinState::bias(
            i.eta.unwrap_or(1.0),
            i.alpha.unwrap_or(0.0) * PI,
        )?);
    }
    let named = i.init.unwrap_or(match d {
        2 => InitArg::Right,
        _ => InitArg::Uniform,
    });
    let state = match named {
        InitArg::Right => {
            require_degree(d, 2, "right (use --init for other graphs)")?;
            InitialCoinState::right()
        }
        InitArg::Left => {
            require_degree(d, 2, "left")?;
            InitialCoinState::left()
        }
        InitArg::Symmetric => {
            require_degree(d, 2, "symmetric")?;
            InitialCoinState::symmetric2()
        }
        InitArg::Uniform => InitialCoinState::uniform(d),
        InitArg::Ru => {
            require_degree(d, 4, "ru")?;
            InitialCoinState::Explicit(vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ])
        }
        InitArg::SymHadamard => {
            require_degree(d, 4, "sym-hadamard")?;
            InitialCoinState::sym_hadamard4()
        }
        InitArg::SymGrover => {
            require_degree(d, 4, "sym-grover")?;
            InitialCoinState::sym_grover4()
        }
        InitArg::SymDft => {
            require_degree(d, 4, "sym-dft")?;
            InitialCoinState::sym_dft4()
        }
        InitArg::Generic => generic_state(d),
    };
    Ok(state)
}

/// The 2-D coin spec for spectral commands.
fn spectral_coin(c: &CoinOpts) -> Result<CoinSpec> {
    match c.coin {
        CoinArg::Hadamard | CoinArg::Hadamard4 => Ok(CoinSpec::Hadamard),
        CoinArg::General => general2_spec(c),
        CoinArg::Nonuniform => Ok(CoinSpec::NonUniformMixing),
        CoinArg::Grover | CoinArg::Grover2 => Ok(CoinSpec::Grover { degree: 2 }),
        CoinArg::Dft | CoinArg::Dft2 => Ok(CoinSpec::Dft { degree: 2 }),
        other => bail!("--coin {other:?} is not a 2-D coin; spectral analysis needs one"),
    }
}

// ---------------------------------------------------------------------------
// commands

fn emit(
    dist: &Distribution,
    report: serde_json::Value,
    out: &Option<PathBuf>,
    format: Option<Format>,
) -> Result<()> {
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => distribution_csv(dist),
        Format::Json => json_pretty(&serde_json::json!({
            "report": report,
            "distribution": dist,
        }))?,
    };
    write_text(out, &text)?;
    let report_line = serde_json::to_string(&report)?;
    if out.is_some() {
        println!("{report_line}");
    } else {
        eprintln!("{report_line}");
    }
    Ok(())
}

fn cmd_walk(args: &WalkArgs, out: &Option<PathBuf>, format: Option<Format>) -> Result<()> {
    let graph = build_graph(&args.graph, args.steps)?;
    let origin = graph.origin_vertex();

    let dist = if args.classical {
        match graph.kind() {
            GraphKind::GluedTrees { .. } => classical_column_distribution(&graph, origin, args.steps)?,
            _ => classical_position_distribution(&graph, origin, args.steps)?,
        }
    } else {
        let coins = build_coins(&args.coin, &graph)?;
        let init = build_init(&args.init, &graph)?;
        let s0 = WalkState::initial(&graph, origin, &init)?;
        let st = evolve(&graph, &coins, &s0, args.steps)?;
        match graph.kind() {
            GraphKind::GluedTrees { .. } => column_distribution(&graph, &st)?,
            _ => position_distribution(&graph, &st)?,
        }
    };

    let mut report = serde_json::json!({
        "command": "walk",
        "graph": format!("{:?}", graph.kind()),
        "steps": args.steps,
        "classical": args.classical,
    });
    if let Ok(m) = moments(&dist) {
        report["moments"] = serde_json::to_value(&m)?;
    }
    if let Ok(m2) = moments2d(&dist) {
        report["moments2d"] = serde_json::to_value(&m2)?;
    }
    emit(&dist, report, out, format)
}

fn cmd_spectrum(args: &SpectrumArgs, out: &Option<PathBuf>, format: Option<Format>) -> Result<()> {
    let coin = spectral_coin(&args.coin)?;
    let dec = cycle_eigensystem(args.n, &coin)?;
    let degen = degeneracy_condition(args.n, &coin)?;
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => json_pretty(&serde_json::json!({
            "decomposition": dec,
            "degeneracy": degen,
        }))?,
        Format::Csv => {
            let mut s = String::from(
                "k,omega,lambda_plus_re,lambda_plus_im,lambda_minus_re,lambda_minus_im,norm_plus,norm_minus\n",
            );
            for m in &dec.modes {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    m.k,
                    fmt_f64(m.omega),
                    fmt_f64(m.lambda_plus.re),
                    fmt_f64(m.lambda_plus.im),
                    fmt_f64(m.lambda_minus.re),
                    fmt_f64(m.lambda_minus.im),
                    fmt_f64(m.norm_plus),
                    fmt_f64(m.norm_minus),
                ));
            }
            s
        }
    };
    write_text(out, &text)
}

fn cmd_limit(args: &LimitArgs, out: &Option<PathBuf>, format: Option<Format>) -> Result<()> {
    let coin = spectral_coin(&args.coin)?;
    let graph = WalkGraph::cycle(args.n)?;
    let init = build_init(&args.init, &graph)?;

    let analytic = limiting_distribution(args.n, &coin, &init)?;
    let coins = CoinSet::uniform(coin.build()?);
    let s0 = WalkState::initial(&graph, 0, &init)?;
    let empirical = time_averaged_distribution(&graph, &coins, &s0, args.t_avg)?;
    let tv = total_variation(&analytic, &empirical)?;
    let degen = degeneracy_condition(args.n, &coin)?;

    let report = serde_json::json!({
        "command": "limit",
        "n": args.n,
        "t_avg": args.t_avg,
        "tv_analytic_vs_empirical": tv,
        "degenerate_pairs": degen.pairs.len(),
        "phi": degen.phi,
        "uniform": degen.pairs.is_empty(),
        "empirical": empirical.probs(),
    });
    emit(&analytic, report, out, format)
}

fn cmd_periods(args: &PeriodsArgs, out: &Option<PathBuf>) -> Result<()> {
    let graph = build_graph(&args.graph, 0)?;
    let coins = build_coins(&args.coin, &graph)?;
    // a phase-generic state witnesses the full operator period
    let init = match args.init.init {
        None if args.init.eta.is_none() && args.init.alpha.is_none() => {
            generic_state(graph.degree(graph.origin_vertex()))
        }
        _ => build_init(&args.init, &graph)?,
    };
    let s0 = WalkState::initial(&graph, graph.origin_vertex(), &init)?;
    let period = find_period_numeric(&graph, &coins, &s0, args.omega_max)?;
    let text = json_pretty(&serde_json::json!({
        "command": "periods",
        "graph": format!("{:?}", graph.kind()),
        "omega_max": args.omega_max,
        "period": period,
    }))?;
    write_text(out, &text)
}

fn cmd_period_scan(
    args: &PeriodScanArgs,
    out: &Option<PathBuf>,
    format: Option<Format>,
) -> Result<()> {
    if args.n_min < 2 || args.n_max < args.n_min {
        bail!("--n-min/--n-max must satisfy 2 <= n-min <= n-max");
    }
    let mut all = Vec::new();
    for n in args.n_min..=args.n_max {
        let certs = solve_period_condition(n, args.omega_max)?;
        if args.all {
            all.extend(certs);
        } else {
            all.extend(minimal_periods(&certs));
        }
    }
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("n,omega,rho,delta_over_pi,m\n");
            for c in &all {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.n,
                    c.omega,
                    fmt_f64(c.rho),
                    fmt_f64(c.delta / PI),
                    c.m
                ));
            }
            s
        }
        Format::Json => json_pretty(&all)?,
    };
    write_text(out, &text)
}

fn cmd_classify(args: &ClassifyArgs, out: &Option<PathBuf>, format: Option<Format>) -> Result<()> {
    let coins = enumerate_unbiased_coins4();
    let classes = classify_coins(&coins, args.t_probe)?;

    let named: Vec<(&str, CoinOperator)> = vec![
        (
            "hadamard⊗hadamard",
            CoinOperator::hadamard().kron(&CoinOperator::hadamard(), "hadamard⊗hadamard"),
        ),
        ("grover4", CoinOperator::grover(4)?),
        ("dft4", CoinOperator::dft(4)?),
    ];
    let mut named_classes = serde_json::Map::new();
    for (name, op) in &named {
        let class = qw_core::class_of(op, &classes, args.t_probe)?;
        named_classes.insert(name.to_string(), serde_json::json!(class));
    }

    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("class,members,representative_index\n");
            for c in &classes {
                s.push_str(&format!("{},{},{}\n", c.id, c.members.len(), c.representative_index));
            }
            s
        }
        Format::Json => json_pretty(&serde_json::json!({
            "coin_count": coins.len(),
            "t_probe": args.t_probe,
            "classes": classes,
            "named_coin_classes": named_classes,
        }))?,
    };
    write_text(out, &text)
}

fn cmd_glued_trees(
    args: &GluedTreesArgs,
    out: &Option<PathBuf>,
    format: Option<Format>,
) -> Result<()> {
    let graph = WalkGraph::glued_trees(args.depth, args.seed)?;
    let dist_at = |t: u64| -> Result<Distribution> {
        if args.classical {
            Ok(classical_column_distribution(&graph, 0, t)?)
        } else {
            let coins = match args.coin.coin {
                CoinArg::Grover => CoinSet::grover_for(&graph)?,
                CoinArg::Dft => CoinSet::dft_for(&graph)?,
                other => bail!("--coin {other:?} is not defined on the glued trees; use grover or dft"),
            };
            let s0 = WalkState::initial(&graph, 0, &InitialCoinState::uniform(2))?;
            let st = evolve(&graph, &coins, &s0, t)?;
            Ok(column_distribution(&graph, &st)?)
        }
    };

    if args.times.is_empty() {
        let dist = dist_at(args.steps)?;
        let exit = dist.probs()[dist.len() - 1];
        let report = serde_json::json!({
            "command": "glued-trees",
            "depth": args.depth,
            "seed": args.seed,
            "steps": args.steps,
            "classical": args.classical,
            "exit_column_probability": exit,
        });
        emit(&dist, report, out, format)
    } else {
        let mut rows = Vec::new();
        for &t in &args.times {
            rows.push((t, dist_at(t)?));
        }
        let text = match format.unwrap_or(Format::Csv) {
            Format::Csv => {
                let mut s = String::from("t,column,probability\n");
                for (t, d) in &rows {
                    for (c, p) in d.probs().iter().enumerate() {
                        s.push_str(&format!("{t},{c},{}\n", fmt_f64(*p)));
                    }
                }
                s
            }
            Format::Json => json_pretty(&serde_json::json!({
                "depth": args.depth,
                "seed": args.seed,
                "classical": args.classical,
                "series": rows
                    .iter()
                    .map(|(t, d)| serde_json::json!({"t": t, "probabilities": d.probs()}))
                    .collect::<Vec<_>>(),
            }))?,
        };
        write_text(out, &text)
    }
}

fn cmd_sweep(args: &SweepArgs, out: &Option<PathBuf>) -> Result<()> {
    let lattice = WalkGraph::lattice2d(3, 3, BoundaryMode::Open)?; // degree probe
    let coins = build_coins(&args.coin, &lattice)?;
    let op = match &coins {
        CoinSet::Uniform(op) => op.clone(),
        _ => bail!("--coin must resolve to a single 4-D operator for sweep"),
    };
    let grid = qw_core::default_state_grid(args.samples, args.seed);
    let report = extremal_spreading(&op, &grid, args.steps)?;
    let text = json_pretty(&serde_json::json!({
        "command": "sweep",
        "steps": args.steps,
        "samples": args.samples,
        "seed": args.seed,
        "grid_size": grid.len(),
        "report": report,
    }))?;
    write_text(out, &text)
}
