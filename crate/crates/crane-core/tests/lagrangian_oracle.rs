//! Expected values below were produced by an independent symbolic
//! Euler-Lagrange derivation (sympy) of the rail/trolley/pendulum system with
//! kinetic energy of rail, trolley and point payload and gravitational
//! potential of the payload.

use std::f64::consts::FRAC_PI_2;

use approx::assert_relative_eq;
use crane_core::{
    evaluate, mechanical_energy, payload_position, presets, AxisLaws, AxisMode, CraneParams,
    CraneState, InputVector, ModeVector,
};

fn frictionless() -> CraneParams {
    let mut p = presets::case1();
    for ax in [&mut p.x, &mut p.y] {
        ax.coulomb_pos = crane_core::Polynomial4::constant(0.0);
        ax.coulomb_neg = crane_core::Polynomial4::constant(0.0);
    }
    p.rope.coulomb = 0.0;
    p
}

fn oracle_state() -> CraneState {
    CraneState {
        x_t: 0.1,
        dx_t: 0.05,
        y_t: 0.2,
        dy_t: -0.03,
        l: 0.4,
        dl: 0.0,
        alpha: FRAC_PI_2 + 0.3,
        dalpha: 0.4,
        beta: 0.15,
        dbeta: -0.25,
    }
}

#[test]
fn payload_position_matches_symbolic_evaluation() {
    let s = CraneState {
        x_t: 0.1,
        y_t: 0.1,
        l: 0.4,
        alpha: FRAC_PI_2 + 0.1,
        beta: 0.05,
        ..Default::default()
    };
    let (x, y, z) = payload_position(&s);
    assert_relative_eq!(x, 0.11989179264058418, max_relative = 1e-14);
    assert_relative_eq!(y, 0.060066633341268744, max_relative = 1e-14);
    assert_relative_eq!(z, -0.39750426766620173, max_relative = 1e-14);
}

#[test]
fn pendulum_on_held_trolley_matches_euler_lagrange() {
    let p = frictionless();
    let mut s = oracle_state();
    s.dx_t = 0.0;
    s.dy_t = 0.0;
    let e = evaluate(&s, &InputVector::default(), &AxisLaws::modal(ModeVector::REST), &p).unwrap();
    assert_relative_eq!(e.derivative.dalpha, -7.1838950387900713, max_relative = 1e-12);
    assert_relative_eq!(e.derivative.dbeta, -3.8981806752255794, max_relative = 1e-12);
}

#[test]
fn locked_rope_with_free_trolley_matches_euler_lagrange() {
    let p = frictionless();
    let s = oracle_state();
    let mode = ModeVector::new(AxisMode::Pos, AxisMode::Neg, AxisMode::Rest);
    let e = evaluate(&s, &InputVector::default(), &AxisLaws::modal(mode), &p).unwrap();
    let d = e.derivative;
    assert_relative_eq!(d.dx_t, 0.17534568145553622, max_relative = 1e-12);
    assert_relative_eq!(d.dy_t, -1.0543261998161193, max_relative = 1e-12);
    assert_relative_eq!(d.dalpha, -9.6826267294943484, max_relative = 1e-12);
    assert_relative_eq!(d.dbeta, -4.3518866218677612, max_relative = 1e-12);
    assert_eq!(d.dl, 0.0);
}

#[test]
fn energy_matches_symbolic_t_plus_v() {
    let p = frictionless();
    let mut s = oracle_state();
    s.dl = 0.07;
    assert_relative_eq!(mechanical_energy(&s, &p), -1.6791044585189692, max_relative = 1e-13);
}

#[test]
fn energy_at_rest_is_potential_only() {
    let p = presets::case1();
    let s = CraneState::hanging(0.2, 0.2, 0.5);
    let e = mechanical_energy(&s, &p);
    assert_relative_eq!(e, -p.payload_mass * p.gravity * 0.5, max_relative = 1e-14);
}
