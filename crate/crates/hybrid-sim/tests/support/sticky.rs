//! Brute-force fixed-step reference for the two scenarios, written from
//! scratch: semi-implicit Euler with explicit stick/slip bookkeeping.
//!
//! Case 1 reduces to a cart-pendulum in the Y-Z plane (rope locked, no
//! motion along X). With `th` the swing angle from the downward vertical
//! towards +y, the payload sits at `y + L sin th`, and
//!
//!   (M + m) y'' + m L cos th th'' - m L sin th th'^2 = -F_fric
//!   cos th y'' + L th'' + g sin th = 0
//!
//! Case 2 is a single mass on the rope with net drive `u + m g`.
#![allow(dead_code)]

pub struct Series {
    pub dt_out: f64,
    pub velocity: Vec<f64>,
}

/// Cart-pendulum with Coulomb friction `c` on the cart.
pub fn cart_pendulum(
    cart_mass: f64,
    m: f64,
    l: f64,
    g: f64,
    c: f64,
    th0: f64,
    t_end: f64,
    dt: f64,
    dt_out: f64,
) -> Series {
    let (mut v, mut th, mut w) = (0.0f64, th0, 0.0f64);
    let per_out = (dt_out / dt).round() as usize;
    let n = (t_end / dt).round() as usize;
    let mut out = Vec::with_capacity(n / per_out + 1);
    out.push(v);
    for i in 1..=n {
        let (s, co) = th.sin_cos();
        // force the pendulum exerts on the cart when the cart does not move
        let th_dd_held = -g * s / l;
        let pull = m * l * (w * w * s - co * th_dd_held);
        let (a, thdd);
        if v == 0.0 && pull.abs() <= c {
            a = 0.0;
            thdd = th_dd_held;
        } else {
            let dir = if v != 0.0 { v.signum() } else { pull.signum() };
            // eliminate th'' from the cart equation
            let rhs = m * l * s * w * w + m * g * s * co - c * dir;
            a = rhs / (cart_mass + m - m * co * co);
            thdd = -(co * a + g * s) / l;
        }
        let v_new = v + dt * a;
        v = if v != 0.0 && v_new.signum() != v.signum() { 0.0 } else { v_new };
        w += dt * thdd;
        th += dt * w;
        if i % per_out == 0 {
            out.push(v);
        }
    }
    Series { dt_out, velocity: out }
}

/// Point mass on the rope driven by `drive(t)` (already including gravity),
/// with Coulomb friction `c`.
pub fn hoist(mass: f64, c: f64, drive: impl Fn(f64) -> f64, t_end: f64, dt: f64, dt_out: f64) -> Series {
    let mut v = 0.0f64;
    let per_out = (dt_out / dt).round() as usize;
    let n = (t_end / dt).round() as usize;
    let mut out = Vec::with_capacity(n / per_out + 1);
    out.push(v);
    for i in 1..=n {
        let f = drive((i - 1) as f64 * dt);
        let a = if v == 0.0 {
            if f.abs() <= c { 0.0 } else { (f - c * f.signum()) / mass }
        } else {
            (f - c * v.signum()) / mass
        };
        let v_new = v + dt * a;
        v = if v != 0.0 && v_new.signum() != v.signum() { 0.0 } else { v_new };
        if i % per_out == 0 {
            out.push(v);
        }
    }
    Series { dt_out, velocity: out }
}
