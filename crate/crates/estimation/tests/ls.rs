use approx::assert_relative_eq;
use estimation::{ls_solve, EstError, RegressionProblem};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[test]
fn orthogonal_columns_are_uncorrelated() {
    let n = 200;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            vec![t.sin(), t.cos(), (2.0 * t).sin()]
        })
        .collect();
    let y: Vec<f64> = rows.iter().map(|r| r[0] - 2.0 * r[2]).collect();
    let fit = ls_solve(&RegressionProblem::from_rows(&["a", "b", "c"], &rows, &y).unwrap()).unwrap();
    assert!(fit.max_off_diagonal() < 1e-12, "{:?}", fit.correlation);
    assert_relative_eq!(fit.theta[0], 1.0, epsilon = 1e-12);
    assert_relative_eq!(fit.theta[1], 0.0, epsilon = 1e-12);
    assert_relative_eq!(fit.theta[2], -2.0, epsilon = 1e-12);
}

#[test]
fn target_equal_to_a_column_is_reproduced() {
    let rows: Vec<Vec<f64>> = (0..50).map(|k| vec![k as f64, (k as f64).sqrt(), 1.0]).collect();
    let y: Vec<f64> = rows.iter().map(|r| 2.0 * r[0]).collect();
    let fit = ls_solve(&RegressionProblem::from_rows(&["a", "b", "c"], &rows, &y).unwrap()).unwrap();
    assert_relative_eq!(fit.theta[0], 2.0, epsilon = 1e-10);
    assert!(fit.theta[1].abs() < 1e-9 && fit.theta[2].abs() < 1e-9);
    assert!(fit.residual_rms < 1e-9);
    assert_eq!(fit.get("a"), Some(fit.theta[0]));
}

#[test]
fn duplicate_column_is_ill_conditioned_and_named() {
    let rows: Vec<Vec<f64>> = (0..40).map(|k| vec![1.0, k as f64, 3.0 * k as f64]).collect();
    let y: Vec<f64> = (0..40).map(|k| k as f64).collect();
    match ls_solve(&RegressionProblem::from_rows(&["bias", "v", "v3"], &rows, &y).unwrap()) {
        Err(EstError::IllConditioned { a, b, cond }) => {
            let mut pair = [a, b];
            pair.sort();
            assert_eq!(pair, ["v".to_string(), "v3".to_string()]);
            assert!(cond > 1e10);
        }
        other => panic!("expected an ill-conditioned error, got {other:?}"),
    }
}

#[test]
fn zero_column_is_ill_conditioned() {
    let rows: Vec<Vec<f64>> = (0..20).map(|k| vec![k as f64, 0.0]).collect();
    let y = vec![1.0; 20];
    assert!(matches!(
        ls_solve(&RegressionProblem::from_rows(&["a", "z"], &rows, &y).unwrap()),
        Err(EstError::IllConditioned { .. })
    ));
}

#[test]
fn shape_errors() {
    assert!(RegressionProblem::from_rows(&["a"], &[vec![1.0]], &[1.0, 2.0]).is_err());
    assert!(RegressionProblem::from_rows(&["a", "b"], &[vec![1.0]], &[1.0]).is_err());
    let p = RegressionProblem::from_rows(&["a", "b"], &[vec![1.0, 2.0]], &[1.0]).unwrap();
    assert!(matches!(ls_solve(&p), Err(EstError::Precondition(_))));
    let p = RegressionProblem::from_rows(&["a"], &[vec![f64::NAN], vec![1.0]], &[1.0, 1.0]).unwrap();
    assert!(matches!(ls_solve(&p), Err(EstError::Precondition(_))));
}

/// Hoist regression on analytic derivatives of a smooth motion with 0.01 V
/// of input noise.
#[test]
fn hoist_parameters_from_noisy_input() {
    let (p1, p2, p3) = (2.01133, 76.57078, 1.07712);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let w = std::f64::consts::TAU / 8.0;
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for k in 0..16000 {
        let t = k as f64 * 0.002;
        // two tones so that acceleration and velocity are not in quadrature only
        let v = 0.05 * (w * t).cos() + 0.03 * (3.0 * w * t).cos();
        let a = -0.05 * w * (w * t).sin() - 0.09 * w * (3.0 * w * t).sin();
        if v.abs() < 1e-3 {
            continue;
        }
        rows.push(vec![a, v, v.signum()]);
        y.push(p1 * a + p2 * v + p3 * v.signum() + noise.sample(&mut rng));
    }
    let fit = ls_solve(&RegressionProblem::from_rows(&["P1", "P2", "P3"], &rows, &y).unwrap()).unwrap();
    for (got, want) in fit.theta.iter().zip([p1, p2, p3]) {
        assert!(((got - want) / want).abs() < 0.01, "{got} vs {want}");
    }
    assert!((fit.residual_rms - 0.01).abs() < 1e-3);
}

fn matrix(n: usize, p: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (
        prop::collection::vec(prop::collection::vec(-10.0..10.0f64, p), n),
        prop::collection::vec(-10.0..10.0f64, n),
    )
}

proptest! {
    #[test]
    fn residual_is_orthogonal_to_columns((rows, y) in matrix(30, 3)) {
        let labels = ["a", "b", "c"];
        let problem = RegressionProblem::from_rows(&labels, &rows, &y).unwrap();
        let Ok(fit) = ls_solve(&problem) else { return Ok(()) };
        let r = &problem.y - &problem.phi * DVector::from_column_slice(&fit.theta);
        let g = problem.phi.transpose() * r;
        let scale = problem.phi.norm() * problem.y.norm();
        prop_assert!(g.norm() <= 1e-9 * scale, "gradient {}", g.norm());
    }

    #[test]
    fn correlation_is_a_correlation_matrix((rows, y) in matrix(25, 4)) {
        let labels = ["a", "b", "c", "d"];
        let Ok(fit) = ls_solve(&RegressionProblem::from_rows(&labels, &rows, &y).unwrap()) else {
            return Ok(());
        };
        let c = nalgebra::DMatrix::from_fn(4, 4, |i, j| fit.correlation[i][j]);
        for i in 0..4 {
            prop_assert_eq!(c[(i, i)], 1.0);
            for j in 0..4 {
                prop_assert!((c[(i, j)] - c[(j, i)]).abs() < 1e-12);
                prop_assert!(c[(i, j)].abs() <= 1.0);
            }
        }
        let eig = c.symmetric_eigen().eigenvalues;
        prop_assert!(eig.min() > -1e-9, "eigenvalues {eig}");
    }
}
