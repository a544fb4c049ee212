//! Opinion and parameter files, opinion synthesizer specs, and the JSON run
//! report written by `beba simulate`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{sample_opinions_stream, OpinionConstraint};
use crate::dynamics::{Outcome, OutcomeKind, RunConfig};
use crate::graph::{self, Graph, GraphError};
use crate::models::{ModelError, OpinionVector, Scale};

/// JSON schema for [`RunReport`], shipped with the crate.
pub const RUN_REPORT_SCHEMA: &str = include_str!("../schemas/run_report.schema.json");

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{path}, line {line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn read_file(path: impl AsRef<Path>) -> Result<String, IoError> {
    std::fs::read_to_string(path.as_ref())
        .map_err(|source| IoError::File { path: path.as_ref().to_path_buf(), source })
}

pub fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<(), IoError> {
    std::fs::write(path.as_ref(), contents)
        .map_err(|source| IoError::File { path: path.as_ref().to_path_buf(), source })
}

/// `karate` or a path to an edge-list file.
pub fn load_graph(spec: &str) -> Result<Graph, IoError> {
    if spec == "karate" {
        Ok(graph::karate())
    } else {
        Ok(graph::parse_edge_list(&read_file(spec)?)?)
    }
}

/// Parses `node,value` rows covering every node `0..n` exactly once. A
/// leading header row and `#` comment lines are skipped.
pub fn parse_node_values(text: &str, n: usize, origin: &str) -> Result<Vec<f64>, IoError> {
    let mut values: Vec<Option<f64>> = vec![None; n];
    let err = |line: usize, msg: String| IoError::Parse { path: origin.to_string(), line, msg };
    let mut first_data = true;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(err(line_no, format!("expected `node,value`, found {} fields", fields.len())));
        }
        let node = match fields[0].parse::<usize>() {
            Ok(v) => v,
            Err(_) if first_data => {
                first_data = false;
                continue;
            }
            Err(_) => return Err(err(line_no, format!("invalid node id `{}`", fields[0]))),
        };
        first_data = false;
        let value = fields[1]
            .parse::<f64>()
            .map_err(|_| err(line_no, format!("invalid value `{}`", fields[1])))?;
        if node >= n {
            return Err(err(line_no, format!("node {node} out of range for {n} nodes")));
        }
        if values[node].replace(value).is_some() {
            return Err(err(line_no, format!("node {node} listed twice")));
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| IoError::Invalid(format!("{origin}: missing value for node {i}"))))
        .collect()
}

pub fn format_node_values(values: &[f64], header: &str) -> String {
    let mut out = format!("node,{header}\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

/// Where initial opinions come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpinionSource {
    File(PathBuf),
    /// `uniform:SEED`, a single vector.
    Uniform { seed: u64 },
    /// `uniform:batch:COUNT:SEED`, vector `k` drawn from substream `k`.
    Batch { count: usize, seed: u64 },
}

impl OpinionSource {
    pub fn parse(spec: &str) -> Result<Self, IoError> {
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str, what: &str| {
            s.parse::<u64>()
                .map_err(|_| IoError::Invalid(format!("invalid {what} `{s}` in opinion spec `{spec}`")))
        };
        match parts.as_slice() {
            ["uniform", "batch", count, seed] => Ok(OpinionSource::Batch {
                count: num(count, "count")? as usize,
                seed: num(seed, "seed")?,
            }),
            ["uniform", seed] => Ok(OpinionSource::Uniform { seed: num(seed, "seed")? }),
            ["uniform", ..] => Err(IoError::Invalid(format!("malformed opinion spec `{spec}`"))),
            _ => Ok(OpinionSource::File(PathBuf::from(spec))),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            OpinionSource::File(_) => None,
            OpinionSource::Uniform { seed } | OpinionSource::Batch { seed, .. } => Some(*seed),
        }
    }

    /// All vectors this source describes, on the `[-1, 1]` scale for the
    /// synthesizers and on `scale` for files.
    pub fn vectors(&self, n: usize, scale: Scale) -> Result<Vec<OpinionVector>, IoError> {
        match self {
            OpinionSource::File(path) => {
                let text = read_file(path)?;
                let values = parse_node_values(&text, n, &path.display().to_string())?;
                Ok(vec![OpinionVector::new(values, scale)?])
            }
            OpinionSource::Uniform { seed } => {
                Ok(vec![sample_opinions_stream(n, *seed, 0, OpinionConstraint::None)])
            }
            OpinionSource::Batch { count, seed } => Ok((0..*count)
                .map(|k| sample_opinions_stream(n, *seed, k as u64, OpinionConstraint::None))
                .collect()),
        }
    }
}

/// A scalar applied to every node, or a `node,value` file.
pub fn per_node_values(spec: &str, n: usize) -> Result<Vec<f64>, IoError> {
    match spec.parse::<f64>() {
        Ok(v) => Ok(vec![v; n]),
        Err(_) => parse_node_values(&read_file(spec)?, n, spec),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub beta: Option<Vec<f64>>,
    pub bias: Option<Vec<f64>>,
    pub self_weight: f64,
    pub max_iters: usize,
    pub conv_tol: f64,
    pub class_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOutcome {
    pub kind: String,
    pub consensus_value: Option<f64>,
    pub mean_polarized_opinion: Option<f64>,
    pub pattern: Option<Vec<i8>>,
    pub variance: f64,
    pub iters: usize,
    pub final_opinions: Vec<f64>,
}

impl From<&Outcome> for ReportOutcome {
    fn from(o: &Outcome) -> Self {
        let pattern = match &o.kind {
            OutcomeKind::Polarized { pattern, .. } => Some(pattern.clone()),
            _ => None,
        };
        ReportOutcome {
            kind: o.kind.label().to_string(),
            consensus_value: o.kind.consensus_value(),
            mean_polarized_opinion: o.kind.polarized_mean(),
            pattern,
            variance: o.variance,
            iters: o.iters,
            final_opinions: o.final_opinions.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub model: String,
    pub graph: GraphSummary,
    pub params: ReportParams,
    pub seed: Option<u64>,
    pub outcome: ReportOutcome,
    pub trajectory_path: Option<String>,
}

impl RunReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        model: &str,
        graph: GraphSummary,
        beta: Option<Vec<f64>>,
        bias: Option<Vec<f64>>,
        self_weight: f64,
        cfg: &RunConfig,
        seed: Option<u64>,
        outcome: &Outcome,
        trajectory_path: Option<String>,
    ) -> Self {
        RunReport {
            tool: "beba".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            model: model.into(),
            graph,
            params: ReportParams {
                beta,
                bias,
                self_weight,
                max_iters: cfg.max_iters,
                conv_tol: cfg.conv_tol,
                class_tol: cfg.class_tol,
            },
            seed,
            outcome: outcome.into(),
            trajectory_path,
        }
    }

    /// Pretty JSON; floats use the shortest representation that reads back
    /// to the same `f64`.
    pub fn to_json(&self) -> Result<String, IoError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}
