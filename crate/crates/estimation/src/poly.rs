//! Quartic reduction of a GPR friction map.

use crane_core::Polynomial4;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gpr::{grid, GprModel};
use crate::ls::{ls_solve, RegressionProblem};

pub const POLY_GRID: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyFit {
    pub poly: Polynomial4,
    /// Largest deviation from the GPR mean on the fitting grid.
    pub max_deviation: f64,
    /// Range of the GPR mean on the fitting grid.
    pub range: f64,
}

/// Least-squares quartic through `f` sampled on a 201-point grid.
pub fn fit_quartic(f: impl Fn(f64) -> f64, domain: (f64, f64)) -> Result<PolyFit> {
    let xs = grid(domain.0, domain.1, POLY_GRID);
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| (0..5).map(|k| x.powi(k)).collect()).collect();
    let problem = RegressionProblem::from_rows(&["c0", "c1", "c2", "c3", "c4"], &rows, &ys)?;
    let fit = ls_solve(&problem)?;
    let poly = Polynomial4::new([fit.theta[0], fit.theta[1], fit.theta[2], fit.theta[3], fit.theta[4]]);
    let max_deviation = xs
        .iter()
        .zip(&ys)
        .map(|(&x, y)| (poly.eval(x) - y).abs())
        .fold(0.0, f64::max);
    let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PolyFit {
        poly,
        max_deviation,
        range: hi - lo,
    })
}

/// Quartic fitted to the posterior mean of `model` over `domain`.
pub fn fit_poly4(model: &GprModel, domain: (f64, f64)) -> Result<PolyFit> {
    fit_quartic(|x| model.predict_latent(x).0, domain)
}
