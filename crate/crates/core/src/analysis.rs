//! Experimental instruments built on top of [`crate::dynamics`]: closed-form
//! predictions, threshold searches, sweeps, campaigns and edge interventions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{mean, run_beba, run_outcome, Model, Outcome, OutcomeKind, RunConfig, RunError};
use crate::graph::{Graph, GraphError};
use crate::models::{
    beba_step, bof_step, BebaParams, BofParams, ModelError, OpinionVector, Scale,
};

/// Default cap on simulated edits in [`edge_intervention`].
pub const INTERVENTION_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("baseline outcome is {got}, but the objective needs {expected}")]
    BaselineMismatch { expected: &'static str, got: &'static str },
    #[error("{candidates} candidate edits exceed the budget of {budget}")]
    BudgetExceeded { candidates: usize, budget: usize },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Predicted limit of one agent facing a single fixed opinion `p`.
/// Positive `p` is handled by mirroring both `p` and `y0`.
pub fn theorem1_predict(p: f64, beta: f64, y0: f64, _w: f64) -> f64 {
    if p > 0.0 {
        return -theorem1_predict(-p, beta, -y0, _w);
    }
    if p == 0.0 || beta < -1.0 / p {
        return p;
    }
    let threshold = -1.0 / (beta * p);
    if y0 < threshold {
        p
    } else if y0 > threshold {
        y0.signum()
    } else {
        y0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    /// Below `1 / max|y0|^2` the network reaches consensus.
    pub consensus_bound: f64,
    /// Above `1 / min|y0|^2` the network polarizes.
    pub polarization_bound: f64,
}

pub fn theorem2_thresholds(y0: &OpinionVector) -> Result<ThresholdPair, AnalysisError> {
    if y0.scale() != Scale::Y11 {
        return Err(AnalysisError::Precondition("opinions must be on the [-1, 1] scale".into()));
    }
    if y0.is_empty() {
        return Err(AnalysisError::Precondition("empty opinion vector".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for (i, &v) in y0.values().iter().enumerate() {
        let a = v.abs();
        if a == 0.0 || a >= 1.0 {
            return Err(AnalysisError::Precondition(format!(
                "opinion {v} at node {i} must lie in (-1, 0) or (0, 1)"
            )));
        }
        lo = lo.min(a);
        hi = hi.max(a);
    }
    Ok(ThresholdPair { consensus_bound: 1.0 / (hi * hi), polarization_bound: 1.0 / (lo * lo) })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum OpinionConstraint {
    #[default]
    None,
    /// Resample coordinates with `|y| < eta`.
    ExcludeZeroBand(f64),
}

/// i.i.d. uniform opinions on `[-1, 1]` from substream 0 of `seed`.
pub fn sample_opinions(n: usize, seed: u64, constraint: OpinionConstraint) -> OpinionVector {
    sample_opinions_stream(n, seed, 0, constraint)
}

/// As [`sample_opinions`] on an independent substream; campaigns use the
/// vector index as the stream so results do not depend on scheduling.
pub fn sample_opinions_stream(n: usize, seed: u64, stream: u64, constraint: OpinionConstraint) -> OpinionVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let eta = match constraint {
        OpinionConstraint::None => 0.0,
        OpinionConstraint::ExcludeZeroBand(eta) => eta.clamp(0.0, 1.0),
    };
    let values = (0..n)
        .map(|_| loop {
            let v: f64 = rng.gen_range(-1.0..=1.0);
            if v.abs() >= eta {
                break v;
            }
        })
        .collect();
    OpinionVector::from_raw(values, Scale::Y11)
}

/// `lo, lo + step, ...` up to `hi` (inclusive, rounded to the nearest step).
pub fn beta_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, AnalysisError> {
    if !(lo >= 0.0 && hi >= lo && step > 0.0 && hi.is_finite()) {
        return Err(AnalysisError::Precondition(format!(
            "need 0 <= lo <= hi and step > 0 (got {lo}:{hi}:{step})"
        )));
    }
    let count = ((hi - lo) / step).round() as usize;
    Ok((0..=count).map(|k| lo + k as f64 * step).collect())
}

fn left_consensus(kind: &OutcomeKind) -> bool {
    matches!(kind, OutcomeKind::Polarized { .. } | OutcomeKind::PersistentDisagreement)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaPResult {
    /// First grid value whose run no longer reaches consensus; `None` when
    /// even the top of the range reaches consensus.
    pub beta_p: Option<f64>,
    pub resolution: f64,
    pub range: (f64, f64),
    /// Set when bisection was abandoned for a linear scan.
    pub scan: bool,
    /// Every probed `(beta, outcome label)`, ascending in beta.
    pub per_beta: Vec<(f64, String)>,
}

impl BetaPResult {
    pub fn no_polarization(&self) -> bool {
        self.beta_p.is_none()
    }
}

/// Smallest entrenchment on the grid `lo, lo + res, ..., hi` at which the
/// BEBA run leaves consensus. Bisects on the assumption that the
/// transition is monotone; an unconverged probe or a bracket that is already
/// past the transition at `lo` switches to a full scan.
pub fn estimate_beta_p(
    g: &Graph,
    y0: &OpinionVector,
    range: (f64, f64),
    resolution: f64,
    cfg: &RunConfig,
) -> Result<BetaPResult, AnalysisError> {
    let (lo, hi) = range;
    if !(lo >= 0.0 && hi > lo && resolution > 0.0) {
        return Err(AnalysisError::Precondition(format!(
            "need 0 <= lo < hi and resolution > 0 (got ({lo}, {hi}), {resolution})"
        )));
    }
    let grid = beta_grid(lo, hi, resolution)?;
    let top = grid.len() - 1;
    let mut probes: BTreeMap<usize, OutcomeKind> = BTreeMap::new();
    let mut probe = |k: usize| -> Result<OutcomeKind, AnalysisError> {
        if let Some(kind) = probes.get(&k) {
            return Ok(kind.clone());
        }
        let kind = run_beba(g, y0, grid[k], cfg)?.kind;
        probes.insert(k, kind.clone());
        Ok(kind)
    };

    let mut scan = false;
    let mut answer: Option<usize> = None;
    let top_kind = probe(top)?;
    if top_kind == OutcomeKind::NotConverged {
        scan = true;
    } else if left_consensus(&top_kind) {
        let low_kind = probe(0)?;
        if low_kind == OutcomeKind::NotConverged || left_consensus(&low_kind) {
            scan = true;
        } else {
            let (mut a, mut b) = (0, top);
            while b - a > 1 {
                let mid = a + (b - a) / 2;
                let kind = probe(mid)?;
                if kind == OutcomeKind::NotConverged {
                    scan = true;
                    break;
                }
                if left_consensus(&kind) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            if !scan {
                let below = probe(b - 1)?;
                let at = probe(b)?;
                if left_consensus(&at) && !left_consensus(&below) {
                    answer = Some(b);
                } else {
                    scan = true;
                }
            }
        }
    }
    if scan {
        answer = None;
        for k in 0..=top {
            if left_consensus(&probe(k)?) {
                answer = Some(k);
                break;
            }
        }
    }
    Ok(BetaPResult {
        beta_p: answer.map(|k| grid[k]),
        resolution,
        range,
        scan,
        per_beta: probes.iter().map(|(&k, kind)| (grid[k], kind.label().to_string())).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    pub kind: String,
    pub variance: f64,
    pub consensus_value: Option<f64>,
    pub polarized_mean: Option<f64>,
    pub iters: usize,
}

impl SweepRow {
    fn from_outcome(beta: f64, out: &Outcome) -> Self {
        SweepRow {
            beta,
            kind: out.kind.label().to_string(),
            variance: out.variance,
            consensus_value: out.kind.consensus_value(),
            polarized_mean: out.kind.polarized_mean(),
            iters: out.iters,
        }
    }
}

/// One independent BEBA run per entrenchment value, all from `y0`.
pub fn beta_sweep(g: &Graph, y0: &OpinionVector, betas: &[f64], cfg: &RunConfig) -> Result<Vec<SweepRow>, AnalysisError> {
    if betas.is_empty() {
        return Err(AnalysisError::Precondition("beta list is empty".into()));
    }
    betas
        .par_iter()
        .map(|&beta| Ok(SweepRow::from_outcome(beta, &run_beba(g, y0, beta, cfg)?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarRow {
    pub x1: f64,
    pub x_neighbors: f64,
    pub bof: f64,
    pub beba: f64,
}

/// Next opinion of the center of a 5-node star whose four leaves share one
/// opinion, under BOF and under BEBA (evaluated on `y = 2x - 1` and mapped
/// back). `x1 = None` sweeps the center opinion over the same grid.
pub fn star_comparison(beta1: f64, bias1: f64, x1: Option<f64>, grid: usize) -> Result<Vec<StarRow>, AnalysisError> {
    if grid < 2 {
        return Err(AnalysisError::Precondition("grid needs at least 2 points".into()));
    }
    let star = Graph::star(4);
    let beba = BebaParams::new(vec![beta1, 0.0, 0.0, 0.0, 0.0])?;
    let bof = BofParams::new(vec![bias1, 0.0, 0.0, 0.0, 0.0])?;
    let points: Vec<f64> = (0..grid).map(|k| k as f64 / (grid - 1) as f64).collect();
    let centers = match x1 {
        Some(c) => vec![c],
        None => points.clone(),
    };
    let mut rows = Vec::with_capacity(centers.len() * points.len());
    for &c in &centers {
        for &leaf in &points {
            let x = OpinionVector::x01(vec![c, leaf, leaf, leaf, leaf])?;
            let bof_next = bof_step(&star, &x, &bof)?.values()[0];
            let beba_next = beba_step(&star, &x.to_y11(), &beba)?.to_x01().values()[0];
            rows.push(StarRow { x1: c, x_neighbors: leaf, bof: bof_next, beba: beba_next });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterventionMode {
    Add,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    ConsensusValue,
    PolarizedMean,
}

impl Objective {
    fn expected(self) -> &'static str {
        match self {
            Objective::ConsensusValue => "consensus",
            Objective::PolarizedMean => "polarized",
        }
    }

    fn read(self, kind: &OutcomeKind) -> Option<f64> {
        match self {
            Objective::ConsensusValue => kind.consensus_value(),
            Objective::PolarizedMean => kind.polarized_mean(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub edge: (usize, usize),
    pub kind: String,
    pub objective: Option<f64>,
    /// `objective(edited) - objective(baseline)`; `None` when the edited
    /// run ends in a different outcome class.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterventionReport {
    pub mode: InterventionMode,
    pub objective: Objective,
    pub baseline: f64,
    /// Sorted by delta descending, then by edge; missing deltas last.
    pub candidates: Vec<Candidate>,
    /// Edges whose deletion would disconnect the graph.
    pub excluded: Vec<(usize, usize)>,
}

pub fn edge_intervention(
    g: &Graph,
    y0: &OpinionVector,
    params: &BebaParams,
    mode: InterventionMode,
    objective: Objective,
    cfg: &RunConfig,
) -> Result<InterventionReport, AnalysisError> {
    edge_intervention_with_budget(g, y0, params, mode, objective, cfg, INTERVENTION_BUDGET)
}

/// Exhaustive single-edge what-if: each candidate edit is applied to `g` and
/// re-run from the original `y0`.
pub fn edge_intervention_with_budget(
    g: &Graph,
    y0: &OpinionVector,
    params: &BebaParams,
    mode: InterventionMode,
    objective: Objective,
    cfg: &RunConfig,
    budget: usize,
) -> Result<InterventionReport, AnalysisError> {
    let model = Model::Beba(params.clone());
    let baseline = run_outcome(g, &model, y0, cfg)?;
    let base_value = objective.read(&baseline.kind).ok_or(AnalysisError::BaselineMismatch {
        expected: objective.expected(),
        got: baseline.kind.label(),
    })?;

    let mut excluded = Vec::new();
    let mut edited: Vec<((usize, usize), Graph)> = Vec::new();
    let pairs: Vec<(usize, usize)> = match mode {
        InterventionMode::Add => g.non_edges(),
        InterventionMode::Delete => g.edges().map(|(u, v, _)| (u, v)).collect(),
    };
    if pairs.len() > budget {
        return Err(AnalysisError::BudgetExceeded { candidates: pairs.len(), budget });
    }
    for (u, v) in pairs {
        match mode {
            InterventionMode::Add => edited.push(((u, v), g.add_edge(u, v, 1.0)?)),
            InterventionMode::Delete => {
                let cut = g.remove_edge(u, v)?;
                if cut.connected {
                    edited.push(((u, v), cut.graph));
                } else {
                    excluded.push((u, v));
                }
            }
        }
    }

    let mut candidates = edited
        .par_iter()
        .map(|(edge, h)| {
            let out = run_outcome(h, &model, y0, cfg)?;
            let value = objective.read(&out.kind);
            Ok(Candidate {
                edge: *edge,
                kind: out.kind.label().to_string(),
                objective: value,
                delta: value.map(|v| v - base_value),
            })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    rank_candidates(&mut candidates);
    Ok(InterventionReport { mode, objective, baseline: base_value, candidates, excluded })
}

pub fn rank_candidates(candidates: &mut [Candidate]) {
    candidates.sort_by(|a, b| match (a.delta, b.delta) {
        (Some(x), Some(y)) => y.total_cmp(&x).then(a.edge.cmp(&b.edge)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.edge.cmp(&b.edge),
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPSearch {
    pub lo: f64,
    pub hi: f64,
    pub resolution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub num_vectors: usize,
    pub seed: u64,
    /// Fixed entrenchment values simulated for every vector.
    pub betas: Vec<f64>,
    pub beta_p: Option<BetaPSearch>,
    pub constraint: OpinionConstraint,
    pub run: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorRecord {
    pub index: usize,
    pub mean_y0: f64,
    pub beta_p: Option<BetaPResult>,
    pub per_beta: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub records: Vec<VectorRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let m = mean(values);
        let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64;
        Some(Summary {
            count: values.len(),
            mean: m,
            std: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

impl CampaignReport {
    /// Finite threshold estimates in vector order.
    pub fn beta_p_values(&self) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| r.beta_p.as_ref().and_then(|b| b.beta_p))
            .collect()
    }

    /// `(mean y0, consensus value)` pairs at `beta` for vectors that reached consensus.
    pub fn consensus_pairs(&self, beta: f64) -> Vec<(f64, f64)> {
        self.pairs(beta, |row| row.consensus_value)
    }

    /// `(mean y0, mean polarized opinion)` pairs at `beta`.
    pub fn polarized_pairs(&self, beta: f64) -> Vec<(f64, f64)> {
        self.pairs(beta, |row| row.polarized_mean)
    }

    fn pairs(&self, beta: f64, pick: impl Fn(&SweepRow) -> Option<f64>) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter_map(|r| {
                r.per_beta
                    .iter()
                    .find(|row| row.beta == beta)
                    .and_then(&pick)
                    .map(|v| (r.mean_y0, v))
            })
            .collect()
    }

    /// One row per (vector, beta) plus one `beta_p` row per vector when a
    /// threshold search ran.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vector,mean_y0,beta,kind,variance,consensus_value,polarized_mean,iters,beta_p,no_polarization,scan\n");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            for row in &r.per_beta {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},,,\n",
                    r.index,
                    r.mean_y0,
                    row.beta,
                    row.kind,
                    row.variance,
                    opt(row.consensus_value),
                    opt(row.polarized_mean),
                    row.iters
                ));
            }
            if let Some(bp) = &r.beta_p {
                out.push_str(&format!(
                    "{},{},,,,,,,{},{},{}\n",
                    r.index,
                    r.mean_y0,
                    opt(bp.beta_p),
                    bp.no_polarization(),
                    bp.scan
                ));
            }
        }
        out
    }
}

/// Reads `BEBA_THREADS`; 0 or unset means rayon's default.
pub fn threads_from_env() -> usize {
    std::env::var("BEBA_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Runs `f` inside a pool of `threads` workers (0 = automatic).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, AnalysisError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AnalysisError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

/// Monte Carlo over `num_vectors` random opinion vectors on one graph.
/// Vector `k` is drawn from substream `k` of the master seed.
pub fn campaign(g: &Graph, cfg: &CampaignConfig) -> Result<CampaignReport, AnalysisError> {
    let records = (0..cfg.num_vectors)
        .into_par_iter()
        .map(|index| {
            let y0 = sample_opinions_stream(g.n(), cfg.seed, index as u64, cfg.constraint);
            let beta_p = cfg
                .beta_p
                .map(|s| estimate_beta_p(g, &y0, (s.lo, s.hi), s.resolution, &cfg.run))
                .transpose()?;
            let per_beta = cfg
                .betas
                .iter()
                .map(|&beta| Ok(SweepRow::from_outcome(beta, &run_beba(g, &y0, beta, &cfg.run)?)))
                .collect::<Result<Vec<_>, AnalysisError>>()?;
            Ok(VectorRecord { index, mean_y0: mean(y0.values()), beta_p, per_beta })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    Ok(CampaignReport { seed: cfg.seed, records })
}

pub fn campaign_with_threads(g: &Graph, cfg: &CampaignConfig, threads: usize) -> Result<CampaignReport, AnalysisError> {
    with_threads(threads, || campaign(g, cfg))?
}

/// Pearson correlation; `None` for fewer than two points or zero variance.
pub fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    if pairs.len() < 2 {
        return None;
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
