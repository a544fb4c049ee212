//! Single-step update rules.
//!
//! All steps are synchronous: every node reads the same frozen snapshot of
//! the current opinions. Neighbor sums run in ascending neighbor id.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("opinion {value} at node {node} is outside {scale:?}")]
    OutOfRange { node: usize, value: f64, scale: Scale },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("balanced environment (sum of fixed opinions is 0 with nonzero spread): no closed-form fixed points")]
    BalancedEnvironment,
}

/// Opinion range: `X01` is `[0, 1]`, `Y11` is `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scale {
    X01,
    Y11,
}

impl Scale {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Scale::X01 => (0.0, 1.0),
            Scale::Y11 => (-1.0, 1.0),
        }
    }

    pub fn contains(self, v: f64) -> bool {
        let (lo, hi) = self.bounds();
        (lo..=hi).contains(&v)
    }

    pub fn clamp(self, v: f64) -> f64 {
        let (lo, hi) = self.bounds();
        v.clamp(lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpinionVector {
    values: Vec<f64>,
    scale: Scale,
}

impl OpinionVector {
    pub fn new(values: Vec<f64>, scale: Scale) -> Result<Self, ModelError> {
        if let Some((node, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !scale.contains(**v))
        {
            return Err(ModelError::OutOfRange { node, value, scale });
        }
        Ok(OpinionVector { values, scale })
    }

    pub fn x01(values: Vec<f64>) -> Result<Self, ModelError> {
        Self::new(values, Scale::X01)
    }

    pub fn y11(values: Vec<f64>) -> Result<Self, ModelError> {
        Self::new(values, Scale::Y11)
    }

    pub(crate) fn from_raw(values: Vec<f64>, scale: Scale) -> Self {
        debug_assert!(values.iter().all(|&v| scale.contains(v)));
        OpinionVector { values, scale }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `y = 2x - 1`
    pub fn to_y11(&self) -> OpinionVector {
        match self.scale {
            Scale::Y11 => self.clone(),
            Scale::X01 => OpinionVector::from_raw(
                self.values.iter().map(|&x| Scale::Y11.clamp(2.0 * x - 1.0)).collect(),
                Scale::Y11,
            ),
        }
    }

    /// `x = (y + 1) / 2`
    pub fn to_x01(&self) -> OpinionVector {
        match self.scale {
            Scale::X01 => self.clone(),
            Scale::Y11 => OpinionVector::from_raw(
                self.values.iter().map(|&y| Scale::X01.clamp((y + 1.0) / 2.0)).collect(),
                Scale::X01,
            ),
        }
    }

    pub(crate) fn check_paired(&self, g: &Graph) -> Result<(), ModelError> {
        if self.len() != g.n() {
            return Err(ModelError::LengthMismatch { expected: g.n(), got: self.len() });
        }
        Ok(())
    }
}

/// Per-node entrenchment. `beta = 0` everywhere reduces BEBA to DeGroot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BebaParams {
    beta: Vec<f64>,
}

impl BebaParams {
    pub fn new(beta: Vec<f64>) -> Result<Self, ModelError> {
        if let Some(b) = beta.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
            return Err(ModelError::InvalidParameter(format!(
                "entrenchment must be finite and >= 0 (got {b})"
            )));
        }
        Ok(BebaParams { beta })
    }

    pub fn uniform(beta: f64, n: usize) -> Result<Self, ModelError> {
        Self::new(vec![beta; n])
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BofParams {
    bias: Vec<f64>,
}

impl BofParams {
    pub fn new(bias: Vec<f64>) -> Result<Self, ModelError> {
        if let Some(b) = bias.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
            return Err(ModelError::InvalidParameter(format!("bias must be finite and >= 0 (got {b})")));
        }
        Ok(BofParams { bias })
    }

    pub fn uniform(bias: f64, n: usize) -> Result<Self, ModelError> {
        Self::new(vec![bias; n])
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Weighted average of self and neighbors.
pub fn degroot_step(g: &Graph, x: &OpinionVector) -> Result<OpinionVector, ModelError> {
    x.check_paired(g)?;
    let mut out = vec![0.0; g.n()];
    degroot_into(g, x.values(), x.scale(), &mut out);
    Ok(OpinionVector::from_raw(out, x.scale()))
}

pub(crate) fn degroot_into(g: &Graph, x: &[f64], scale: Scale, out: &mut [f64]) {
    for (i, slot) in out.iter_mut().enumerate() {
        let w_self = g.self_weight(i);
        let mut num = w_self * x[i];
        let mut den = w_self;
        for &(j, w) in g.neighbors(i) {
            num += w * x[j];
            den += w;
        }
        *slot = scale.clamp(num / den);
    }
}

/// Biased-opinion-formation update on `[0, 1]` opinions. Uses `0^0 = 1`, so
/// a zero bias reproduces DeGroot.
pub fn bof_step(g: &Graph, x: &OpinionVector, b: &BofParams) -> Result<OpinionVector, ModelError> {
    x.check_paired(g)?;
    if x.scale() != Scale::X01 {
        return Err(ModelError::InvalidParameter("BOF opinions must be on the [0, 1] scale".into()));
    }
    if b.bias().len() != g.n() {
        return Err(ModelError::LengthMismatch { expected: g.n(), got: b.bias().len() });
    }
    let mut out = vec![0.0; g.n()];
    bof_into(g, x.values(), b.bias(), &mut out);
    Ok(OpinionVector::from_raw(out, Scale::X01))
}

pub(crate) fn bof_into(g: &Graph, x: &[f64], bias: &[f64], out: &mut [f64]) {
    for (i, slot) in out.iter_mut().enumerate() {
        let w_self = g.self_weight(i);
        let mut support = 0.0;
        let mut degree = 0.0;
        for &(j, w) in g.neighbors(i) {
            support += w * x[j];
            degree += w;
        }
        let favour = x[i].powf(bias[i]);
        let against = (1.0 - x[i]).powf(bias[i]);
        let num = w_self * x[i] + favour * support;
        let den = w_self + favour * support + against * (degree - support);
        *slot = if den > 0.0 { Scale::X01.clamp(num / den) } else { x[i] };
    }
}

/// Dynamic BEBA weight `beta_i * y_i * y_j + 1`. Negative values model the
/// backfire regime.
pub fn beba_weight(beta_i: f64, y_i: f64, y_j: f64) -> f64 {
    beta_i * y_i * y_j + 1.0
}

/// BEBA update. A node whose total weight is non-positive jumps to
/// `sgn(y_i)`; otherwise the weighted quotient is clipped to `[-1, 1]`.
///
/// On weighted graphs the dynamic weight is scaled by the static one:
/// `w_ij * (beta_i * y_i * y_j + 1)`.
pub fn beba_step(g: &Graph, y: &OpinionVector, p: &BebaParams) -> Result<OpinionVector, ModelError> {
    let mut guarded = Vec::new();
    beba_step_traced(g, y, p, &mut guarded)
}

/// As [`beba_step`], appending the ids of nodes where the sign guard fired.
pub fn beba_step_traced(
    g: &Graph,
    y: &OpinionVector,
    p: &BebaParams,
    guarded: &mut Vec<usize>,
) -> Result<OpinionVector, ModelError> {
    y.check_paired(g)?;
    if y.scale() != Scale::Y11 {
        return Err(ModelError::InvalidParameter("BEBA opinions must be on the [-1, 1] scale".into()));
    }
    if p.beta().len() != g.n() {
        return Err(ModelError::LengthMismatch { expected: g.n(), got: p.beta().len() });
    }
    let mut out = vec![0.0; g.n()];
    beba_into(g, y.values(), p.beta(), &mut out, Some(guarded));
    Ok(OpinionVector::from_raw(out, Scale::Y11))
}

pub(crate) fn beba_into(
    g: &Graph,
    y: &[f64],
    beta: &[f64],
    out: &mut [f64],
    mut guarded: Option<&mut Vec<usize>>,
) {
    for (i, slot) in out.iter_mut().enumerate() {
        let w_self = g.self_weight(i);
        let mut num = w_self * y[i];
        let mut den = w_self;
        for &(j, w_static) in g.neighbors(i) {
            let w = w_static * beba_weight(beta[i], y[i], y[j]);
            num += w * y[j];
            den += w;
        }
        *slot = if den <= 0.0 {
            if let Some(log) = guarded.as_deref_mut() {
                log.push(i);
            }
            sgn(y[i])
        } else {
            Scale::Y11.clamp(num / den)
        };
    }
}

/// A single agent facing `m` neighbors whose opinions never change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedEnvironment {
    opinions: Vec<f64>,
    self_weight: f64,
    beta: f64,
    sum_sq: f64,
    sum: f64,
}

impl FixedEnvironment {
    pub fn new(opinions: Vec<f64>, self_weight: f64, beta: f64) -> Result<Self, ModelError> {
        if opinions.is_empty() {
            return Err(ModelError::InvalidParameter("environment needs at least one opinion".into()));
        }
        if let Some((node, &value)) = opinions.iter().enumerate().find(|(_, v)| !Scale::Y11.contains(**v)) {
            return Err(ModelError::OutOfRange { node, value, scale: Scale::Y11 });
        }
        if !(self_weight.is_finite() && self_weight >= 0.0) {
            return Err(ModelError::InvalidParameter(format!("self-weight must be >= 0 (got {self_weight})")));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(ModelError::InvalidParameter(format!("entrenchment must be >= 0 (got {beta})")));
        }
        let sum_sq = opinions.iter().map(|p| p * p).sum();
        let sum = opinions.iter().sum();
        Ok(FixedEnvironment { opinions, self_weight, beta, sum_sq, sum })
    }

    pub fn single(p: f64, self_weight: f64, beta: f64) -> Result<Self, ModelError> {
        Self::new(vec![p], self_weight, beta)
    }

    pub fn opinions(&self) -> &[f64] {
        &self.opinions
    }

    /// `q`: sum of squared fixed opinions.
    pub fn sum_sq(&self) -> f64 {
        self.sum_sq
    }

    /// `s`: sum of fixed opinions.
    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn count(&self) -> f64 {
        self.opinions.len() as f64
    }

    pub fn self_weight(&self) -> f64 {
        self.self_weight
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

pub fn fixed_env_step(y: f64, env: &FixedEnvironment) -> f64 {
    let (w, beta) = (env.self_weight, env.beta);
    let den = w + beta * env.sum * y + env.count();
    if den <= 0.0 {
        return sgn(y);
    }
    let num = w * y + beta * env.sum_sq * y + env.sum;
    Scale::Y11.clamp(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoints {
    pub attracting: f64,
    /// Absent when the map is affine (`beta = 0`) or all fixed opinions are 0.
    pub repelling: Option<f64>,
}

/// Closed-form fixed points of the unclipped fixed-environment map.
pub fn fixed_env_fixed_points(env: &FixedEnvironment) -> Result<FixedPoints, ModelError> {
    let (beta, q, s, m) = (env.beta, env.sum_sq, env.sum, env.count());
    if beta == 0.0 {
        // affine map (w*y + s) / (w + m)
        return Ok(FixedPoints { attracting: s / m, repelling: None });
    }
    if s == 0.0 {
        return if q == 0.0 {
            Ok(FixedPoints { attracting: 0.0, repelling: None })
        } else {
            Err(ModelError::BalancedEnvironment)
        };
    }
    if env.opinions.len() == 1 {
        // sqrt(delta) reduces to beta*p^2 + 1 for a single neighbor
        let p = env.opinions[0];
        return Ok(FixedPoints { attracting: p, repelling: Some(-1.0 / (beta * p)) });
    }
    // Roots of beta*s*y^2 + (m - beta*q)*y - s = 0, computed without
    // cancellation; the "+ sqrt" root attracts.
    let b = m - beta * q;
    let sqrt_delta = ((beta * q - m).powi(2) + 4.0 * beta * s * s).sqrt();
    let (attracting, repelling) = if b >= 0.0 {
        let t = -(b + sqrt_delta) / 2.0;
        (-s / t, t / (beta * s))
    } else {
        let t = -(b - sqrt_delta) / 2.0;
        (t / (beta * s), -s / t)
    };
    Ok(FixedPoints { attracting, repelling: Some(repelling) })
}
