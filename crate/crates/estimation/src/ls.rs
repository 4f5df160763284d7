//! Linear least squares with parameter correlation diagnostics.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{EstError, Result};

/// Largest admissible condition number of the column-normalised regressor.
pub const MAX_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionProblem {
    pub phi: DMatrix<f64>,
    pub y: DVector<f64>,
    pub labels: Vec<String>,
}

impl RegressionProblem {
    /// Build from rows of regressors and targets.
    pub fn from_rows(labels: &[&str], rows: &[Vec<f64>], y: &[f64]) -> Result<Self> {
        let p = labels.len();
        if rows.len() != y.len() {
            return Err(EstError::Precondition("row and target counts differ".into()));
        }
        if rows.iter().any(|r| r.len() != p) {
            return Err(EstError::Precondition(format!("every row needs {p} regressors")));
        }
        let phi = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
        Ok(RegressionProblem {
            phi,
            y: DVector::from_column_slice(y),
            labels: labels.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.phi.nrows()
    }

    pub fn cols(&self) -> usize {
        self.phi.ncols()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LsResult {
    pub labels: Vec<String>,
    pub theta: Vec<f64>,
    pub residual_rms: f64,
    /// Row-major correlation matrix of the estimates.
    pub correlation: Vec<Vec<f64>>,
    pub condition: f64,
    pub rows: usize,
}

impl LsResult {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.theta[i])
    }

    /// Largest absolute off-diagonal correlation.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.correlation.len();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.correlation[i][j].abs());
                }
            }
        }
        m
    }
}

/// Minimise `|Phi theta - y|^2`.
pub fn ls_solve(problem: &RegressionProblem) -> Result<LsResult> {
    let (n, p) = (problem.rows(), problem.cols());
    if p == 0 || n < p {
        return Err(EstError::Precondition(format!("{n} rows cannot determine {p} parameters")));
    }
    if n < 10 * p {
        log::warn!("only {n} rows for {p} parameters");
    }
    if problem.phi.iter().chain(problem.y.iter()).any(|v| !v.is_finite()) {
        return Err(EstError::Precondition("non-finite regressor or target".into()));
    }
    // column scaling makes the conditioning test unit-independent
    let norms: Vec<f64> = (0..p).map(|j| problem.phi.column(j).norm()).collect();
    if let Some(j) = norms.iter().position(|&s| s == 0.0) {
        return Err(EstError::IllConditioned {
            cond: f64::INFINITY,
            a: problem.labels[j].clone(),
            b: problem.labels[j].clone(),
        });
    }
    let mut scaled = problem.phi.clone();
    for j in 0..p {
        scaled.column_mut(j).scale_mut(1.0 / norms[j]);
    }
    let svd = scaled.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = smax / smin;
    if !(cond < MAX_CONDITION) {
        let (a, b) = most_collinear(&scaled);
        return Err(EstError::IllConditioned {
            cond,
            a: problem.labels[a].clone(),
            b: problem.labels[b].clone(),
        });
    }
    let z = svd
        .solve(&problem.y, 0.0)
        .map_err(|e| EstError::Numerical(e.to_string()))?;
    let theta: Vec<f64> = (0..p).map(|j| z[j] / norms[j]).collect();
    let resid = &problem.y - &problem.phi * DVector::from_column_slice(&theta);
    let residual_rms = (resid.norm_squared() / n as f64).sqrt();

    // (Phi^T Phi)^-1 of the scaled problem; correlations are scale-free
    let v = svd.v_t.as_ref().expect("V computed").transpose();
    let inv_s2 = svd.singular_values.map(|s| 1.0 / (s * s));
    let cov = &v * DMatrix::from_diagonal(&inv_s2) * v.transpose();
    let correlation = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| {
                    if i == j {
                        1.0
                    } else {
                        (cov[(i, j)] / (cov[(i, i)] * cov[(j, j)]).sqrt()).clamp(-1.0, 1.0)
                    }
                })
                .collect()
        })
        .collect();
    Ok(LsResult {
        labels: problem.labels.clone(),
        theta,
        residual_rms,
        correlation,
        condition: cond,
        rows: n,
    })
}

fn most_collinear(scaled: &DMatrix<f64>) -> (usize, usize) {
    let g = scaled.transpose() * scaled;
    let p = g.nrows();
    let mut best = (0, p.min(2) - 1, -1.0);
    for i in 0..p {
        for j in i + 1..p {
            if g[(i, j)].abs() > best.2 {
                best = (i, j, g[(i, j)].abs());
            }
        }
    }
    (best.0, best.1)
}
