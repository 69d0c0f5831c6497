//! Exponential regression models fitted by Levenberg–Marquardt.
//!
//! Two families describe how cost reduction scales with the control count `m`:
//!
//! * growth: `b^m + c`
//! * decay: `s·b^(−(c·m − d)) + e`, with `s = +1`, or `s = −1` for curves that
//!   rise towards their asymptote `e` from below.
//!
//! In the decay family only `c·ln b` is identifiable, so `b` and `c` trade off
//! along a ridge; the damped normal equations stay solvable there and the
//! asymptote `e` is unaffected.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

const MAX_ITERATIONS: usize = 200;
const RELATIVE_TOLERANCE: f64 = 1e-10;
const INITIAL_DAMPING: f64 = 1e-3;
const MAX_DAMPING: f64 = 1e12;
const JACOBIAN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("{family} needs at least {needed} points, got {found}")]
    InsufficientPoints {
        family: Family,
        needed: usize,
        found: usize,
    },
    #[error("point {index} is not finite")]
    NonFiniteInput { index: usize },
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: Family, reason: String },
    #[error("damping exceeded {MAX_DAMPING:e} without reducing the residual")]
    SingularNormalEquations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `b^m + c`
    GrowthExp,
    /// `±b^(−(c·m − d)) + e`
    DecayExp { negated: bool },
}

impl Family {
    pub fn param_count(self) -> usize {
        match self {
            Family::GrowthExp => 2,
            Family::DecayExp { .. } => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::GrowthExp => "growth",
            Family::DecayExp { negated: false } => "decay",
            Family::DecayExp { negated: true } => "neg-decay",
        }
    }

    /// Starting point used when the caller supplies none: `(1.5, 0)` for
    /// growth; `(1.5, 0.5, 0, y)` for decay, with `y` the mean response at the
    /// largest `m` present.
    pub fn default_initial(self, points: &[(f64, f64)]) -> Vec<f64> {
        match self {
            Family::GrowthExp => vec![1.5, 0.0],
            Family::DecayExp { .. } => {
                let m_max = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
                let tail: Vec<f64> = points
                    .iter()
                    .filter(|p| p.0 == m_max)
                    .map(|p| p.1)
                    .collect();
                let last = if tail.is_empty() {
                    0.0
                } else {
                    tail.iter().sum::<f64>() / tail.len() as f64
                };
                vec![1.5, 0.5, 0.0, last]
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "growth" => Ok(Family::GrowthExp),
            "decay" => Ok(Family::DecayExp { negated: false }),
            "neg-decay" => Ok(Family::DecayExp { negated: true }),
            other => Err(format!(
                "unknown family {other:?} (expected growth, decay or neg-decay)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitModel {
    pub family: Family,
    pub params: Vec<f64>,
}

impl FitModel {
    pub fn growth(base: f64, offset: f64) -> Self {
        Self {
            family: Family::GrowthExp,
            params: vec![base, offset],
        }
    }

    pub fn decay(base: f64, rate: f64, shift: f64, asymptote: f64) -> Self {
        Self {
            family: Family::DecayExp { negated: false },
            params: vec![base, rate, shift, asymptote],
        }
    }

    pub fn negated_decay(base: f64, rate: f64, shift: f64, asymptote: f64) -> Self {
        Self {
            family: Family::DecayExp { negated: true },
            params: vec![base, rate, shift, asymptote],
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> FitError {
        FitError::InvalidParams {
            family: self.family,
            reason: reason.into(),
        }
    }

    /// Checks the parameters define a real-valued curve: the right count,
    /// all finite, positive base.
    pub fn validate(&self) -> Result<(), FitError> {
        let need = self.family.param_count();
        if self.params.len() != need {
            return Err(self.invalid(format!(
                "expected {need} parameters, got {}",
                self.params.len()
            )));
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(self.invalid("parameters must be finite"));
        }
        if self.params[0] <= 0.0 {
            return Err(self.invalid("base must be positive"));
        }
        Ok(())
    }

    /// The constraints kept during fitting: `b > 1`, and `c > 0` for decay.
    fn is_feasible(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
            && self.params[0] > 1.0
            && match self.family {
                Family::GrowthExp => true,
                Family::DecayExp { .. } => self.params[1] > 0.0,
            }
    }

    fn eval_raw(&self, m: f64) -> f64 {
        let p = &self.params;
        match self.family {
            Family::GrowthExp => p[0].powf(m) + p[1],
            Family::DecayExp { negated } => {
                let power = p[0].powf(-(p[1] * m - p[2]));
                if negated {
                    p[3] - power
                } else {
                    p[3] + power
                }
            }
        }
    }

    pub fn eval(&self, m: f64) -> Result<f64, FitError> {
        self.validate()?;
        Ok(self.eval_raw(m))
    }
}

pub fn model_eval(model: &FitModel, m: f64) -> Result<f64, FitError> {
    model.eval(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub residual_sum_squares: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Serialize)]
struct FitReport<'a> {
    family: &'static str,
    params: &'a [f64],
    rss: f64,
    iterations: usize,
    converged: bool,
}

impl FitResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&FitReport {
            family: self.model.family.name(),
            params: &self.model.params,
            rss: self.residual_sum_squares,
            iterations: self.iterations,
            converged: self.converged,
        })
        .expect("report is plain data")
    }
}

fn rss(model: &FitModel, points: &[(f64, f64)]) -> f64 {
    points
        .iter()
        .map(|&(m, y)| (y - model.eval_raw(m)).powi(2))
        .sum()
}

fn jacobian(model: &FitModel, points: &[(f64, f64)]) -> DMatrix<f64> {
    let k = model.params.len();
    let mut jac = DMatrix::zeros(points.len(), k);
    let mut probe = model.clone();
    for i in 0..k {
        let p = model.params[i];
        let h = JACOBIAN_STEP * p.abs().max(1.0);
        for (row, &(m, _)) in points.iter().enumerate() {
            probe.params[i] = p + h;
            let up = probe.eval_raw(m);
            probe.params[i] = p - h;
            let down = probe.eval_raw(m);
            jac[(row, i)] = (up - down) / (2.0 * h);
        }
        probe.params[i] = p;
    }
    jac
}

/// Least-squares fit of `family` to `(m, y)` points.
///
/// Steps solve `(JᵀJ + λ·diag(JᵀJ)) δ = Jᵀr` with a central-difference
/// Jacobian. λ starts at 1e-3, drops tenfold after an accepted step and
/// grows tenfold after a rejected one; steps leaving `b > 1` (and `c > 0`
/// for decay) are rejected. The fit stops once an accepted step lowers the
/// residual by less than a relative 1e-10, once a rejected step is too small
/// to change any parameter, or after 200 iterations. Points are sorted
/// first, so the result does not depend on their order.
pub fn fit(
    points: &[(f64, f64)],
    family: Family,
    initial: Option<&[f64]>,
) -> Result<FitResult, FitError> {
    let needed = family.param_count() + 1;
    if points.len() < needed {
        return Err(FitError::InsufficientPoints {
            family,
            needed,
            found: points.len(),
        });
    }
    if let Some(index) = points
        .iter()
        .position(|p| !p.0.is_finite() || !p.1.is_finite())
    {
        return Err(FitError::NonFiniteInput { index });
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut model = FitModel {
        family,
        params: initial.map_or_else(|| family.default_initial(&pts), <[f64]>::to_vec),
    };
    model.validate()?;
    if !model.is_feasible() {
        return Err(model.invalid("initial guess violates b > 1 (and c > 0 for decay)"));
    }
    let mut cost = rss(&model, &pts);
    if !cost.is_finite() {
        return Err(model.invalid("model is not finite at the initial guess"));
    }

    let floor = f64::EPSILON.powi(2) * pts.iter().map(|p| p.1 * p.1).sum::<f64>();
    let ys = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let mut lambda = INITIAL_DAMPING;
    let mut iterations = 0;
    let mut converged = false;

    'outer: while iterations < MAX_ITERATIONS {
        if cost <= floor {
            converged = true;
            break;
        }
        iterations += 1;
        let jac = jacobian(&model, &pts);
        let fitted = DVector::from_iterator(pts.len(), pts.iter().map(|&(m, _)| model.eval_raw(m)));
        let residual = &ys - fitted;
        let normal = jac.transpose() * &jac;
        let gradient = jac.transpose() * residual;
        let diag_floor = 1e-12 * normal.diagonal().max().max(f64::MIN_POSITIVE);

        loop {
            let mut damped = normal.clone();
            for i in 0..damped.nrows() {
                damped[(i, i)] += lambda * normal[(i, i)].max(diag_floor);
            }
            let step = damped.cholesky().map(|ch| ch.solve(&gradient));
            let mut trial = model.clone();
            if let Some(step) = &step {
                for (p, d) in trial.params.iter_mut().zip(step.iter()) {
                    *p += d;
                }
                let trial_cost = rss(&trial, &pts);
                if trial.is_feasible() && trial_cost.is_finite() && trial_cost <= cost {
                    let decrease = (cost - trial_cost) / cost;
                    assert!(trial_cost <= cost, "accepted step increased the residual");
                    model = trial;
                    cost = trial_cost;
                    lambda = (lambda / 10.0).max(f64::EPSILON);
                    if decrease < RELATIVE_TOLERANCE {
                        converged = true;
                        break 'outer;
                    }
                    break;
                }
                let negligible = step
                    .iter()
                    .zip(&model.params)
                    .all(|(d, p)| d.abs() <= f64::EPSILON * p.abs().max(1.0));
                if negligible {
                    converged = true;
                    break 'outer;
                }
            }
            lambda *= 10.0;
            if lambda > MAX_DAMPING {
                return Err(FitError::SingularNormalEquations);
            }
        }
    }

    Ok(FitResult {
        model,
        residual_sum_squares: cost,
        iterations,
        converged,
    })
}
