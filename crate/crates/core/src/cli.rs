//! `beba` command line. Every command writes one CSV or JSON document
//! (to `--out`, or stdout) and is deterministic for fixed flags and seeds.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 precondition failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    self, beta_grid, beta_sweep, edge_intervention, estimate_beta_p, star_comparison, theorem1_predict,
    AnalysisError, InterventionMode, Objective, Summary,
};
use crate::dynamics::{self, run_single_agent, Model, RunConfig, RunError};
use crate::graph::{self, GraphError};
use crate::io::{self, GraphSummary, IoError, OpinionSource, RunReport};
use crate::models::{BebaParams, BofParams, FixedEnvironment, ModelError, Scale};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::BaselineMismatch { .. } | AnalysisError::BudgetExceeded { .. } => {
                CliError::Precondition(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "beba", version, about = "Opinion dynamics with backfire effect and biased assimilation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GeneratorKind {
    Er,
    Ws,
    Ba,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelKind {
    Beba,
    Degroot,
    Bof,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Add,
    Delete,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ObjectiveArg {
    Consensus,
    PolarizedMean,
}

#[derive(Debug, Clone, clap::Args)]
pub struct IterArgs {
    /// Iteration budget per run
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    /// Convergence tolerance on the sup-norm movement of one step
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Classification tolerance for consensus spread and extremeness
    #[arg(long, default_value_t = 1e-6)]
    pub class_tol: f64,
}

impl IterArgs {
    fn config(&self) -> RunConfig {
        RunConfig { max_iters: self.max_iters, conv_tol: self.tol, class_tol: self.class_tol, record_every: 1 }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a connected random graph and write it as an edge list
    #[command(allow_negative_numbers = true)]
    Generate {
        /// Random graph family
        #[arg(long, value_enum)]
        model: GeneratorKind,
        /// Number of nodes
        #[arg(long)]
        n: usize,
        /// Edge probability (er)
        #[arg(long)]
        rho: Option<f64>,
        /// Mean degree, even (ws)
        #[arg(long)]
        k: Option<usize>,
        /// Size of the complete seed graph (ba)
        #[arg(long)]
        m0: Option<usize>,
        /// Edges attached per arriving node (ba)
        #[arg(long)]
        m: Option<usize>,
        /// Random seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge-list path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one model to convergence and write a JSON report
    #[command(allow_negative_numbers = true)]
    Simulate {
        /// Edge-list file or `karate`
        #[arg(long, default_value = "karate")]
        graph: String,
        /// `node,opinion` CSV or `uniform:SEED`
        #[arg(long)]
        opinions: String,
        /// Update rule
        #[arg(long, value_enum, default_value = "beba")]
        model: ModelKind,
        /// Entrenchment: a number or a `node,value` CSV (beba)
        #[arg(long, default_value = "1")]
        beta: String,
        /// Bias: a number or a `node,value` CSV (bof)
        #[arg(long, default_value = "1")]
        bias: String,
        /// Self-weight applied to every node
        #[arg(long, default_value_t = 1.0)]
        self_weight: f64,
        #[command(flatten)]
        iter: IterArgs,
        /// Keep every N-th step in the trajectory
        #[arg(long, default_value_t = 1)]
        record_every: usize,
        /// Report path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional trajectory CSV (t,node,opinion)
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Estimate the smallest entrenchment that breaks consensus
    #[command(allow_negative_numbers = true)]
    Betap {
        /// Edge-list file or `karate`
        #[arg(long, default_value = "karate")]
        graph: String,
        /// `node,opinion` CSV, `uniform:SEED` or `uniform:batch:COUNT:SEED`
        #[arg(long)]
        opinions: String,
        /// Search range `lo:hi`
        #[arg(long, default_value = "0:20")]
        range: String,
        /// Grid step
        #[arg(long, default_value_t = 0.1)]
        resolution: f64,
        /// Self-weight applied to every node
        #[arg(long, default_value_t = 1.0)]
        self_weight: f64,
        #[command(flatten)]
        iter: IterArgs,
        /// JSON (single vector) or CSV (batch) output path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Batch mode: histogram CSV with bins of this width
        #[arg(long)]
        histogram: Option<PathBuf>,
        /// Histogram bin width
        #[arg(long, default_value_t = 0.5)]
        bin_width: f64,
    },
    /// Simulate BEBA over a grid of entrenchment values
    #[command(allow_negative_numbers = true)]
    Sweep {
        /// Grid `lo:hi:step`
        #[arg(long)]
        betas: String,
        /// Edge-list file or `karate`
        #[arg(long, default_value = "karate")]
        graph: String,
        /// `node,opinion` CSV or `uniform:SEED`
        #[arg(long)]
        opinions: String,
        /// Self-weight applied to every node
        #[arg(long, default_value_t = 1.0)]
        self_weight: f64,
        #[command(flatten)]
        iter: IterArgs,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank every single-edge addition or deletion by its effect on the outcome
    #[command(allow_negative_numbers = true)]
    Intervene {
        /// Edit type
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Quantity compared against the unedited run
        #[arg(long, value_enum, default_value = "consensus")]
        objective: ObjectiveArg,
        /// Entrenchment: a number or a `node,value` CSV
        #[arg(long, default_value = "1")]
        beta: String,
        /// Edge-list file or `karate`
        #[arg(long, default_value = "karate")]
        graph: String,
        /// `node,opinion` CSV or `uniform:SEED`
        #[arg(long)]
        opinions: String,
        /// Self-weight applied to every node
        #[arg(long, default_value_t = 1.0)]
        self_weight: f64,
        #[command(flatten)]
        iter: IterArgs,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Next opinion of a star center under BOF and BEBA
    #[command(allow_negative_numbers = true)]
    Compare {
        /// Center entrenchment for BEBA
        #[arg(long, default_value_t = 1.0)]
        beta1: f64,
        /// Center bias for BOF
        #[arg(long, default_value_t = 1.0)]
        bias1: f64,
        /// Center opinion on [0, 1]; sweeps it too when omitted
        #[arg(long)]
        x1: Option<f64>,
        /// Grid points per axis over [0, 1]
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate one agent against fixed neighbor opinions
    #[command(name = "single-agent", allow_negative_numbers = true)]
    SingleAgent {
        /// Comma-separated fixed opinions
        #[arg(long)]
        p: String,
        /// Agent entrenchment
        #[arg(long)]
        beta: f64,
        /// Agent self-weight
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        /// Comma-separated initial opinions
        #[arg(long)]
        y0: String,
        #[command(flatten)]
        iter: IterArgs,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let threads = analysis::threads_from_env();
    let result = analysis::with_threads(threads, || execute(cli.command))
        .map_err(CliError::from)
        .and_then(|r| r);
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: Option<&PathBuf>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => Ok(io::write_file(path, contents)?),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("invalid {what} `{t}`"))))
        .collect()
}

fn parse_range(s: &str) -> Result<(f64, f64), CliError> {
    let v = s
        .split(':')
        .map(|t| t.parse::<f64>().map_err(|_| usage(format!("invalid range `{s}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    match v.as_slice() {
        [lo, hi] => Ok((*lo, *hi)),
        _ => Err(usage(format!("range must be `lo:hi` (got `{s}`)"))),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn load_graph(spec: &str, self_weight: f64) -> Result<graph::Graph, CliError> {
    Ok(io::load_graph(spec)?.with_uniform_self_weight(self_weight)?)
}

fn single_vector(spec: &str, n: usize, scale: Scale) -> Result<(crate::models::OpinionVector, Option<u64>), CliError> {
    let source = OpinionSource::parse(spec)?;
    if matches!(source, OpinionSource::Batch { .. }) {
        return Err(usage("this command takes a single opinion vector"));
    }
    let seed = source.seed();
    let mut vectors = source.vectors(n, scale)?;
    Ok((vectors.remove(0), seed))
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate { model, n, rho, k, m0, m, seed, out } => {
            let missing = |flag: &str| usage(format!("--{flag} is required for this model"));
            let (g, header) = match model {
                GeneratorKind::Er => {
                    let rho = rho.ok_or_else(|| missing("rho"))?;
                    (graph::generate_er(n, rho, seed)?, format!("er n={n} rho={rho} seed={seed}"))
                }
                GeneratorKind::Ws => {
                    let k = k.ok_or_else(|| missing("k"))?;
                    (graph::generate_ws(n, k, seed)?, format!("ws n={n} k={k} seed={seed}"))
                }
                GeneratorKind::Ba => {
                    let m0 = m0.ok_or_else(|| missing("m0"))?;
                    let m_each = m.ok_or_else(|| missing("m"))?;
                    (graph::generate_ba(n, m0, m_each, seed)?, format!("ba n={n} m0={m0} m={m_each} seed={seed}"))
                }
            };
            let text = graph::write_edge_list(&g, Some(&header));
            match out.as_ref() {
                Some(path) => {
                    io::write_file(path, &text)?;
                    println!("{header} m={}", g.m());
                }
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Simulate {
            graph: graph_spec,
            opinions,
            model,
            beta,
            bias,
            self_weight,
            iter,
            record_every,
            out,
            trajectory,
        } => {
            let g = load_graph(&graph_spec, self_weight)?;
            let n = g.n();
            let source = OpinionSource::parse(&opinions)?;
            let scale = match model {
                ModelKind::Bof => Scale::X01,
                _ => Scale::Y11,
            };
            let (mut y0, seed) = single_vector(&opinions, n, scale)?;
            if matches!(model, ModelKind::Bof) && !matches!(source, OpinionSource::File(_)) {
                y0 = y0.to_x01();
            }
            let (model_impl, beta_v, bias_v) = match model {
                ModelKind::Beba => {
                    let b = io::per_node_values(&beta, n)?;
                    (Model::Beba(BebaParams::new(b.clone())?), Some(b), None)
                }
                ModelKind::Bof => {
                    let b = io::per_node_values(&bias, n)?;
                    (Model::Bof(BofParams::new(b.clone())?), None, Some(b))
                }
                ModelKind::Degroot => (Model::DeGroot, None, None),
            };
            let cfg = RunConfig { record_every, ..iter.config() };
            let (outcome, traj) = dynamics::run(&g, &model_impl, &y0, &cfg)?;
            if let Some(path) = trajectory.as_ref() {
                io::write_file(path, &traj.to_csv())?;
            }
            let report = RunReport::new(
                model_impl.id(),
                GraphSummary { n, m: g.m(), source: graph_spec },
                beta_v,
                bias_v,
                self_weight,
                &cfg,
                seed,
                &outcome,
                trajectory.map(|p| p.display().to_string()),
            );
            emit(out.as_ref(), &report.to_json()?)
        }
        Command::Betap { graph: graph_spec, opinions, range, resolution, self_weight, iter, out, histogram, bin_width } => {
            let g = load_graph(&graph_spec, self_weight)?;
            let range = parse_range(&range)?;
            let cfg = iter.config();
            let source = OpinionSource::parse(&opinions)?;
            let vectors = source.vectors(g.n(), Scale::Y11)?;
            if let OpinionSource::Batch { .. } = source {
                use rayon::prelude::*;
                let results = vectors
                    .par_iter()
                    .map(|y0| estimate_beta_p(&g, y0, range, resolution, &cfg))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut csv = String::from("vector,mean_y0,beta_p,no_polarization,scan\n");
                for (k, (y0, r)) in vectors.iter().zip(&results).enumerate() {
                    let _ = writeln!(
                        csv,
                        "{k},{},{},{},{}",
                        dynamics::mean(y0.values()),
                        opt(r.beta_p),
                        r.no_polarization(),
                        r.scan
                    );
                }
                emit(out.as_ref(), &csv)?;
                let finite: Vec<f64> = results.iter().filter_map(|r| r.beta_p).collect();
                if let Some(path) = histogram.as_ref() {
                    if !(bin_width > 0.0) {
                        return Err(usage("--bin-width must be positive"));
                    }
                    io::write_file(path, &histogram_csv(&finite, range, bin_width))?;
                }
                if out.is_some() {
                    match Summary::of(&finite) {
                        Some(s) => println!(
                            "vectors={} finite={} mean={} std={} max={}",
                            results.len(),
                            s.count,
                            s.mean,
                            s.std,
                            s.max
                        ),
                        None => println!("vectors={} finite=0", results.len()),
                    }
                }
                Ok(())
            } else {
                let r = estimate_beta_p(&g, &vectors[0], range, resolution, &cfg)?;
                #[derive(Serialize)]
                struct BetaPReport<'a> {
                    beta_p: Option<f64>,
                    no_polarization: bool,
                    range: (f64, f64),
                    resolution: f64,
                    scan: bool,
                    seed: Option<u64>,
                    graph: &'a str,
                    probes: &'a [(f64, String)],
                }
                let report = BetaPReport {
                    beta_p: r.beta_p,
                    no_polarization: r.no_polarization(),
                    range: r.range,
                    resolution: r.resolution,
                    scan: r.scan,
                    seed: source.seed(),
                    graph: &graph_spec,
                    probes: &r.per_beta,
                };
                let mut json = serde_json::to_string_pretty(&report).map_err(IoError::from)?;
                json.push('\n');
                emit(out.as_ref(), &json)
            }
        }
        Command::Sweep { betas, graph: graph_spec, opinions, self_weight, iter, out } => {
            let g = load_graph(&graph_spec, self_weight)?;
            let parts = betas
                .split(':')
                .map(|t| t.parse::<f64>().map_err(|_| usage(format!("invalid grid `{betas}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let [lo, hi, step] = parts[..] else {
                return Err(usage(format!("--betas must be `lo:hi:step` (got `{betas}`)")));
            };
            let grid = beta_grid(lo, hi, step)?;
            let (y0, _) = single_vector(&opinions, g.n(), Scale::Y11)?;
            let rows = beta_sweep(&g, &y0, &grid, &iter.config())?;
            let mut csv = String::from("beta,kind,variance,consensus_value,polarized_mean,iters\n");
            for r in rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    r.beta,
                    r.kind,
                    r.variance,
                    opt(r.consensus_value),
                    opt(r.polarized_mean),
                    r.iters
                );
            }
            emit(out.as_ref(), &csv)
        }
        Command::Intervene { mode, objective, beta, graph: graph_spec, opinions, self_weight, iter, out } => {
            let g = load_graph(&graph_spec, self_weight)?;
            let (y0, _) = single_vector(&opinions, g.n(), Scale::Y11)?;
            let params = BebaParams::new(io::per_node_values(&beta, g.n())?)?;
            let mode = match mode {
                ModeArg::Add => InterventionMode::Add,
                ModeArg::Delete => InterventionMode::Delete,
            };
            let objective = match objective {
                ObjectiveArg::Consensus => Objective::ConsensusValue,
                ObjectiveArg::PolarizedMean => Objective::PolarizedMean,
            };
            let report = edge_intervention(&g, &y0, &params, mode, objective, &iter.config())?;
            let mut csv = String::from("status,rank,u,v,outcome,objective,delta\n");
            for (rank, c) in report.candidates.iter().enumerate() {
                let _ = writeln!(
                    csv,
                    "candidate,{},{},{},{},{},{}",
                    rank + 1,
                    c.edge.0,
                    c.edge.1,
                    c.kind,
                    opt(c.objective),
                    opt(c.delta)
                );
            }
            for (u, v) in &report.excluded {
                let _ = writeln!(csv, "excluded,,{u},{v},,,");
            }
            emit(out.as_ref(), &csv)
        }
        Command::Compare { beta1, bias1, x1, grid, out } => {
            if let Some(x) = x1 {
                if !(0.0..=1.0).contains(&x) {
                    return Err(usage(format!("--x1 must lie in [0, 1] (got {x})")));
                }
            }
            let rows = star_comparison(beta1, bias1, x1, grid)?;
            let mut csv = String::from("x1,x_neighbors,bof,beba\n");
            for r in rows {
                let _ = writeln!(csv, "{},{},{},{}", r.x1, r.x_neighbors, r.bof, r.beba);
            }
            emit(out.as_ref(), &csv)
        }
        Command::SingleAgent { p, beta, w, y0, iter, out } => {
            let env = FixedEnvironment::new(parse_list(&p, "opinion")?, w, beta)?;
            let cfg = iter.config();
            let mut csv = String::from("y0,limit,iters,converged,predicted\n");
            for start in parse_list(&y0, "initial opinion")? {
                let (res, _) = run_single_agent(&env, start, &cfg)?;
                let predicted = match env.opinions() {
                    [single] if beta > 0.0 => Some(theorem1_predict(*single, beta, start, w)),
                    _ => None,
                };
                let _ = writeln!(csv, "{start},{},{},{},{}", res.limit, res.iters, res.converged, opt(predicted));
            }
            emit(out.as_ref(), &csv)
        }
    }
}

/// Bins of `width` starting at the range's lower end: `bin_lo,bin_hi,count`.
pub fn histogram_csv(values: &[f64], range: (f64, f64), width: f64) -> String {
    let bins = (((range.1 - range.0) / width).ceil() as usize).max(1);
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = (((v - range.0) / width).floor().max(0.0) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let mut csv = String::from("bin_lo,bin_hi,count\n");
    for (i, c) in counts.iter().enumerate() {
        let lo = range.0 + i as f64 * width;
        let _ = writeln!(csv, "{lo},{},{c}", lo + width);
    }
    csv
}
