//! Iterating a model to its limit and classifying where it ended up.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::models::{
    beba_into, bof_into, degroot_into, fixed_env_step, BebaParams, BofParams, FixedEnvironment, ModelError,
    OpinionVector, Scale,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid run configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub max_iters: usize,
    /// Stop once the sup-norm movement of one step is at most this.
    pub conv_tol: f64,
    /// Spread / extremeness threshold used by [`classify`].
    pub class_tol: f64,
    /// Keep every `record_every`-th snapshot in the trajectory.
    pub record_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { max_iters: 10_000, conv_tol: 1e-9, class_tol: 1e-6, record_every: 1 }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        if self.max_iters < 1 {
            return Err(RunError::Config("max_iters must be at least 1".into()));
        }
        if !(self.conv_tol > 0.0) {
            return Err(RunError::Config("conv_tol must be positive".into()));
        }
        if !(self.class_tol >= self.conv_tol) {
            return Err(RunError::Config("class_tol must be at least conv_tol".into()));
        }
        if self.record_every < 1 {
            return Err(RunError::Config("record_every must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutcomeKind {
    Consensus { value: f64 },
    Polarized { pattern: Vec<i8>, mean: f64 },
    PersistentDisagreement,
    NotConverged,
}

impl OutcomeKind {
    pub fn label(&self) -> &'static str {
        match self {
            OutcomeKind::Consensus { .. } => "consensus",
            OutcomeKind::Polarized { .. } => "polarized",
            OutcomeKind::PersistentDisagreement => "persistent_disagreement",
            OutcomeKind::NotConverged => "not_converged",
        }
    }

    pub fn is_consensus(&self) -> bool {
        matches!(self, OutcomeKind::Consensus { .. })
    }

    pub fn is_polarized(&self) -> bool {
        matches!(self, OutcomeKind::Polarized { .. })
    }

    pub fn consensus_value(&self) -> Option<f64> {
        match self {
            OutcomeKind::Consensus { value } => Some(*value),
            _ => None,
        }
    }

    pub fn polarized_mean(&self) -> Option<f64> {
        match self {
            OutcomeKind::Polarized { mean, .. } => Some(*mean),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub iters: usize,
    pub variance: f64,
    pub final_opinions: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub snapshots: Vec<(usize, Vec<f64>)>,
    pub variances: Vec<f64>,
    /// `(t, node)` pairs where the sign guard replaced the quotient at step `t`.
    pub guard_events: Vec<(usize, usize)>,
}

impl Trajectory {
    fn record(&mut self, t: usize, y: &[f64]) {
        self.snapshots.push((t, y.to_vec()));
        self.variances.push(variance(y));
    }

    /// Long-format CSV: `t,node,opinion`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,node,opinion\n");
        for (t, y) in &self.snapshots {
            for (node, v) in y.iter().enumerate() {
                out.push_str(&format!("{t},{node},{v}\n"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    DeGroot,
    Bof(BofParams),
    Beba(BebaParams),
}

impl Model {
    pub fn id(&self) -> &'static str {
        match self {
            Model::DeGroot => "degroot",
            Model::Bof(_) => "bof",
            Model::Beba(_) => "beba",
        }
    }
}

/// Population variance.
pub fn variance(y: &[f64]) -> f64 {
    if y.is_empty() {
        return 0.0;
    }
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

pub fn mean(y: &[f64]) -> f64 {
    if y.is_empty() {
        return 0.0;
    }
    y.iter().sum::<f64>() / y.len() as f64
}

/// Consensus is checked first, then polarization. `moved` is true when the
/// last step moved no more than the convergence tolerance.
pub fn classify(y: &[f64], moved: bool, class_tol: f64) -> OutcomeKind {
    if !moved {
        return OutcomeKind::NotConverged;
    }
    let (lo, hi) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo <= class_tol {
        return OutcomeKind::Consensus { value: mean(y) };
    }
    let extreme = y.iter().all(|v| v.abs() >= 1.0 - class_tol);
    if extreme && lo < 0.0 && hi > 0.0 {
        let pattern = y.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect();
        return OutcomeKind::Polarized { pattern, mean: mean(y) };
    }
    OutcomeKind::PersistentDisagreement
}

/// Iterates `model` from `y0` and records a trajectory.
pub fn run(g: &Graph, model: &Model, y0: &OpinionVector, cfg: &RunConfig) -> Result<(Outcome, Trajectory), RunError> {
    let mut traj = Trajectory::default();
    let outcome = iterate(g, model, y0, cfg, Some(&mut traj))?;
    Ok((outcome, traj))
}

/// Same dynamics as [`run`] without keeping snapshots.
pub fn run_outcome(g: &Graph, model: &Model, y0: &OpinionVector, cfg: &RunConfig) -> Result<Outcome, RunError> {
    iterate(g, model, y0, cfg, None)
}

/// Shorthand for a uniform-entrenchment BEBA run without a trajectory.
pub fn run_beba(g: &Graph, y0: &OpinionVector, beta: f64, cfg: &RunConfig) -> Result<Outcome, RunError> {
    let model = Model::Beba(BebaParams::uniform(beta, g.n())?);
    run_outcome(g, &model, y0, cfg)
}

fn iterate(
    g: &Graph,
    model: &Model,
    y0: &OpinionVector,
    cfg: &RunConfig,
    mut traj: Option<&mut Trajectory>,
) -> Result<Outcome, RunError> {
    cfg.validate()?;
    y0.check_paired(g)?;
    g.ensure_connected()?;
    let n = g.n();
    match model {
        Model::DeGroot => {}
        Model::Bof(b) => {
            if y0.scale() != Scale::X01 {
                return Err(ModelError::InvalidParameter("BOF opinions must be on the [0, 1] scale".into()).into());
            }
            if b.bias().len() != n {
                return Err(ModelError::LengthMismatch { expected: n, got: b.bias().len() }.into());
            }
        }
        Model::Beba(p) => {
            if y0.scale() != Scale::Y11 {
                return Err(ModelError::InvalidParameter("BEBA opinions must be on the [-1, 1] scale".into()).into());
            }
            if p.beta().len() != n {
                return Err(ModelError::LengthMismatch { expected: n, got: p.beta().len() }.into());
            }
        }
    }

    let mut cur = y0.values().to_vec();
    let mut next = vec![0.0; n];
    let mut guarded = Vec::new();
    if let Some(t) = traj.as_deref_mut() {
        t.record(0, &cur);
    }
    let mut settled = false;
    let mut iters = 0;
    while iters < cfg.max_iters {
        iters += 1;
        match model {
            Model::DeGroot => degroot_into(g, &cur, y0.scale(), &mut next),
            Model::Bof(b) => bof_into(g, &cur, b.bias(), &mut next),
            Model::Beba(p) => {
                guarded.clear();
                beba_into(g, &cur, p.beta(), &mut next, traj.is_some().then_some(&mut guarded));
            }
        }
        let movement = cur
            .iter()
            .zip(&next)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
        std::mem::swap(&mut cur, &mut next);
        settled = movement <= cfg.conv_tol;
        if let Some(t) = traj.as_deref_mut() {
            t.guard_events.extend(guarded.iter().map(|&node| (iters, node)));
            if iters % cfg.record_every == 0 || settled || iters == cfg.max_iters {
                t.record(iters, &cur);
            }
        }
        if settled {
            break;
        }
    }
    Ok(Outcome {
        kind: classify(&cur, settled, cfg.class_tol),
        iters,
        variance: variance(&cur),
        final_opinions: cur,
    })
}

/// Limit of a single agent in a fixed environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentOutcome {
    pub limit: f64,
    pub iters: usize,
    pub converged: bool,
}

pub fn run_single_agent(env: &FixedEnvironment, y0: f64, cfg: &RunConfig) -> Result<(AgentOutcome, Trajectory), RunError> {
    cfg.validate()?;
    if !Scale::Y11.contains(y0) {
        return Err(ModelError::OutOfRange { node: 0, value: y0, scale: Scale::Y11 }.into());
    }
    let mut traj = Trajectory::default();
    traj.record(0, &[y0]);
    let mut y = y0;
    let mut converged = false;
    let mut iters = 0;
    while iters < cfg.max_iters {
        iters += 1;
        let next = fixed_env_step(y, env);
        converged = (next - y).abs() <= cfg.conv_tol;
        y = next;
        if iters % cfg.record_every == 0 || converged || iters == cfg.max_iters {
            traj.record(iters, &[y]);
        }
        if converged {
            break;
        }
    }
    Ok((AgentOutcome { limit: y, iters, converged }, traj))
}
