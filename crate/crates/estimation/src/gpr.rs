//! Gaussian process regression of breakaway voltage over axis position.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{EstError, Result};

/// Diagonal jitter added to every Gram matrix.
pub const JITTER: f64 = 1e-10;

/// Squared-exponential kernel hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyper {
    pub signal_std: f64,
    pub length_scale: f64,
    pub noise_std: f64,
}

impl Hyper {
    fn kernel(&self, a: f64, b: f64) -> f64 {
        let d = (a - b) / self.length_scale;
        self.signal_std * self.signal_std * (-0.5 * d * d).exp()
    }
}

/// Search box of the hyperparameters, in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperBounds {
    pub signal_std: (f64, f64),
    pub length_scale: (f64, f64),
    pub noise_std: (f64, f64),
}

impl HyperBounds {
    /// Default box for inputs spanning `range`.
    pub fn for_range(range: f64) -> Self {
        HyperBounds {
            signal_std: (1e-3, 1e3),
            length_scale: (1e-2 * range, range),
            noise_std: (1e-4, 1.0),
        }
    }

    fn log_box(&self) -> [(f64, f64); 3] {
        [
            (self.signal_std.0.ln(), self.signal_std.1.ln()),
            (self.length_scale.0.ln(), self.length_scale.1.ln()),
            (self.noise_std.0.ln(), self.noise_std.1.ln()),
        ]
    }

    fn clamp_log(&self, p: &[f64]) -> [f64; 3] {
        let b = self.log_box();
        [p[0].clamp(b[0].0, b[0].1), p[1].clamp(b[1].0, b[1].1), p[2].clamp(b[2].0, b[2].1)]
    }
}

/// Fitted GP: training data, hyperparameters and the cached factorisation.
#[derive(Debug, Clone)]
pub struct GprModel {
    pub inputs: Vec<f64>,
    pub targets: Vec<f64>,
    pub hyper: Hyper,
    pub mean: f64,
    pub log_likelihood: f64,
    chol: Cholesky<f64, Dyn>,
    alpha: DVector<f64>,
}

/// Serializable summary of a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GprSummary {
    pub hyper: Hyper,
    pub mean: f64,
    pub log_likelihood: f64,
    pub points: usize,
}

impl GprModel {
    /// Condition on data with fixed hyperparameters.
    pub fn with_hyper(inputs: &[f64], targets: &[f64], hyper: Hyper) -> Result<Self> {
        if inputs.len() != targets.len() || inputs.is_empty() {
            return Err(EstError::Precondition("GPR needs matching, non-empty inputs and targets".into()));
        }
        if inputs.iter().chain(targets).any(|v| !v.is_finite()) {
            return Err(EstError::Precondition("non-finite GPR training data".into()));
        }
        if !(hyper.signal_std > 0.0 && hyper.length_scale > 0.0 && hyper.noise_std > 0.0) {
            return Err(EstError::Precondition(format!("hyperparameters must be positive: {hyper:?}")));
        }
        let n = inputs.len();
        let mean = targets.iter().sum::<f64>() / n as f64;
        let noise = hyper.noise_std * hyper.noise_std + JITTER;
        let k = DMatrix::from_fn(n, n, |i, j| {
            hyper.kernel(inputs[i], inputs[j]) + if i == j { noise } else { 0.0 }
        });
        let chol = Cholesky::new(k).ok_or_else(|| {
            EstError::Numerical(format!("GPR Gram matrix is not positive definite ({hyper:?})"))
        })?;
        let y = DVector::from_iterator(n, targets.iter().map(|t| t - mean));
        let alpha = chol.solve(&y);
        let log_det: f64 = chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>() * 2.0;
        let log_likelihood =
            -0.5 * y.dot(&alpha) - 0.5 * log_det - 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln();
        Ok(GprModel {
            inputs: inputs.to_vec(),
            targets: targets.to_vec(),
            hyper,
            mean,
            log_likelihood,
            chol,
            alpha,
        })
    }

    fn cross(&self, x: f64) -> DVector<f64> {
        DVector::from_iterator(self.inputs.len(), self.inputs.iter().map(|&xi| self.hyper.kernel(x, xi)))
    }

    /// Posterior mean and variance of the latent function.
    pub fn predict_latent(&self, x: f64) -> (f64, f64) {
        let ks = self.cross(x);
        let mean = self.mean + ks.dot(&self.alpha);
        let v = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&ks)
            .expect("Cholesky factor has a positive diagonal");
        let s2 = self.hyper.signal_std * self.hyper.signal_std;
        (mean, (s2 - v.norm_squared()).max(0.0))
    }

    /// Posterior predictive mean and variance of a new measurement.
    pub fn predict(&self, x: f64) -> (f64, f64) {
        let (m, v) = self.predict_latent(x);
        (m, v + self.hyper.noise_std * self.hyper.noise_std)
    }

    pub fn summary(&self) -> GprSummary {
        GprSummary {
            hyper: self.hyper,
            mean: self.mean,
            log_likelihood: self.log_likelihood,
            points: self.inputs.len(),
        }
    }
}

struct NegLogLikelihood<'a> {
    x: &'a [f64],
    y: &'a [f64],
    bounds: HyperBounds,
}

impl NegLogLikelihood<'_> {
    fn eval(&self, p: &[f64]) -> f64 {
        let q = self.bounds.clamp_log(p);
        // distance outside the box keeps the simplex from drifting away
        let outside: f64 = p.iter().zip(q.iter()).map(|(a, b)| (a - b).abs()).sum();
        let hyper = Hyper {
            signal_std: q[0].exp(),
            length_scale: q[1].exp(),
            noise_std: q[2].exp(),
        };
        match GprModel::with_hyper(self.x, self.y, hyper) {
            Ok(m) => -m.log_likelihood + 1e3 * outside,
            Err(_) => 1e300,
        }
    }
}

impl CostFunction for NegLogLikelihood<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.eval(p))
    }
}

/// Fit with the default hyperparameter box.
pub fn gpr_fit(inputs: &[f64], targets: &[f64], domain: (f64, f64)) -> Result<GprModel> {
    let range = (domain.1 - domain.0).abs();
    if !(range > 0.0) {
        return Err(EstError::Precondition("GPR domain has zero width".into()));
    }
    gpr_fit_bounded(inputs, targets, HyperBounds::for_range(range))
}

/// Maximise the log marginal likelihood by Nelder-Mead from several starts
/// in log space, keeping the best optimum.
pub fn gpr_fit_bounded(inputs: &[f64], targets: &[f64], bounds: HyperBounds) -> Result<GprModel> {
    if inputs.len() < 3 {
        return Err(EstError::Precondition(format!("GPR needs at least 3 samples, got {}", inputs.len())));
    }
    let n = targets.len() as f64;
    let mean = targets.iter().sum::<f64>() / n;
    let spread = (targets.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n).sqrt();
    let b = bounds.log_box();
    let mid = |k: usize, f: f64| b[k].0 + f * (b[k].1 - b[k].0);
    let sf0 = spread.max(1e-2).ln().clamp(b[0].0, b[0].1);
    let mut starts = Vec::new();
    for lf in [0.5, 0.8, 1.0] {
        for nf in [0.2, 0.6] {
            starts.push(vec![sf0, mid(1, lf), mid(2, nf)]);
        }
    }
    let cost = NegLogLikelihood { x: inputs, y: targets, bounds };
    let mut best: Option<(f64, [f64; 3])> = None;
    for s in starts {
        let mut simplex = vec![s.clone()];
        for k in 0..3 {
            let mut v = s.clone();
            v[k] += 0.1 * (b[k].1 - b[k].0);
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-9)
            .map_err(|e| EstError::Numerical(e.to_string()))?;
        let res = Executor::new(NegLogLikelihood { x: inputs, y: targets, bounds }, solver)
            .configure(|st| st.max_iters(400))
            .run()
            .map_err(|e| EstError::Numerical(e.to_string()))?;
        let p = res.state.best_param.clone().unwrap_or(s);
        let q = bounds.clamp_log(&p);
        let c = cost.eval(&q);
        if best.is_none_or(|(bc, _)| c < bc) {
            best = Some((c, q));
        }
    }
    let (c, q) = best.expect("at least one start");
    if c >= 1e299 {
        return Err(EstError::Numerical("no hyperparameters gave a positive-definite Gram matrix".into()));
    }
    GprModel::with_hyper(
        inputs,
        targets,
        Hyper {
            signal_std: q[0].exp(),
            length_scale: q[1].exp(),
            noise_std: q[2].exp(),
        },
    )
}

/// Uniform grid of `n` points over `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    // interpolating from both ends keeps the endpoints exact
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let s = i as f64 / m;
            (lo * (1.0 - s) + hi * s).clamp(lo.min(hi), lo.max(hi))
        })
        .collect()
}
