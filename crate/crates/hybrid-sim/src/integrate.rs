//! Adaptive integration with event localisation.

use crane_core::{
    evaluate, CoreError, Axis, AxisLaws, AxisMode, CraneParams, CraneState, InputVector, ModeVector,
    STATE_DIM,
};
use log::{debug, trace};

use crate::config::{Model, SimConfig};
use crate::error::{Result, SimError};
use crate::events::{apply_transition, guards, guards_with, EventKind, GuardEvent, GuardPoint, NetForce};
use crate::input::InputSignal;
use crate::solver::{dopri_step, error_norm, Dense, Vector};
use crate::trajectory::{Sample, SimStats, Trajectory};

const COMPONENTS: [&str; STATE_DIM] = [
    "x_t", "dx_t", "y_t", "dy_t", "L", "dL", "alpha", "dalpha", "beta", "dbeta",
];

struct Runner<'a> {
    params: &'a CraneParams,
    input: &'a InputSignal,
    cfg: &'a SimConfig,
    stats: SimStats,
    samples: Vec<Sample>,
    events: Vec<GuardEvent>,
    grid_t0: f64,
    grid_n: usize,
    next_grid: usize,
    /// Net forces of the most recent vector-field evaluation.
    last_net: (f64, Vector, [f64; 3]),
}

impl<'a> Runner<'a> {
    fn u(&self, t: f64) -> InputVector {
        self.params.saturate(self.input.at(t))
    }

    fn laws(&self, mode: ModeVector) -> AxisLaws {
        match self.cfg.model {
            Model::Hybrid => AxisLaws::modal(mode),
            Model::Tanh { k } => AxisLaws::smooth(k, &self.cfg.locked_axes),
        }
    }

    fn deriv(&mut self, t: f64, y: &Vector, laws: &AxisLaws) -> Result<Vector> {
        let s = CraneState::from_array(y);
        let u = self.u(t);
        if !(u.u_x.is_finite() && u.u_y.is_finite() && u.u_l.is_finite()) {
            return Err(SimError::InvalidState {
                t,
                source: CoreError::InvalidState(format!("non-finite input {u:?}")),
            });
        }
        self.stats.evaluations += 1;
        let e = evaluate(&s, &u, laws, self.params)
            .map_err(|source| SimError::InvalidState { t, source })?;
        if e.singular {
            self.stats.singular_evaluations += 1;
        }
        self.last_net = (t, *y, e.net_force);
        Ok(e.derivative.to_array())
    }

    fn display_mode(&self, state: &CraneState, mode: ModeVector) -> ModeVector {
        match self.cfg.model {
            Model::Hybrid => mode,
            Model::Tanh { .. } => {
                let mut m = ModeVector::from_state(state);
                for &a in &self.cfg.locked_axes {
                    m[a] = AxisMode::Rest;
                }
                m
            }
        }
    }

    fn grid_time(&self, k: usize) -> f64 {
        self.grid_t0 + k as f64 * self.cfg.output_dt
    }

    fn push(&mut self, t: f64, state: CraneState, mode: ModeVector, on_grid: bool, event: bool) {
        let mode = self.display_mode(&state, mode);
        let input = self.u(t);
        self.samples.push(Sample {
            t,
            state,
            mode,
            input,
            on_grid,
            event,
        });
    }

    /// Emit grid samples from `dense` with times up to `t_hi`, exclusive
    /// unless `inclusive`.
    fn emit_grid(&mut self, dense: &Dense, t_hi: f64, inclusive: bool, mode: ModeVector) {
        let eps = 1e-12 * t_hi.abs().max(1.0);
        while self.next_grid <= self.grid_n {
            let tg = self.grid_time(self.next_grid);
            let take = if inclusive { tg <= t_hi + eps } else { tg < t_hi - eps };
            if !take {
                break;
            }
            let s = CraneState::from_array(&dense.at(tg));
            self.push(tg, s, mode, true, false);
            self.next_grid += 1;
        }
    }

    /// Consume the grid point at `t` if there is one.
    fn take_grid_at(&mut self, t: f64) -> bool {
        let eps = 1e-12 * t.abs().max(1.0);
        if self.next_grid <= self.grid_n && (self.grid_time(self.next_grid) - t).abs() <= eps {
            self.next_grid += 1;
            true
        } else {
            false
        }
    }

    /// Apply transitions at instant `t` until no guard fires.
    fn settle(
        &mut self,
        t: f64,
        state: &mut CraneState,
        mode: &mut ModeVector,
        count: &mut [usize; 3],
    ) -> Result<bool> {
        if self.cfg.model != Model::Hybrid {
            return Ok(false);
        }
        let mut any = false;
        loop {
            let u = self.u(t);
            let fired = guards(state, &u, *mode, self.params, &self.cfg.locked_axes, GuardPoint::Instant)
                .map_err(|source| SimError::InvalidState { t, source })?;
            if fired.iter().all(Option::is_none) {
                return Ok(any);
            }
            // one transition per pass: later guards depend on the new mode
            let axis = Axis::ALL
                .into_iter()
                .find(|a| fired[a.index()].is_some())
                .expect("some guard fired");
            let kind = fired[axis.index()].unwrap();
            self.transition(t, axis, kind, state, mode, count)?;
            any = true;
        }
    }

    fn transition(
        &mut self,
        t: f64,
        axis: Axis,
        kind: EventKind,
        state: &mut CraneState,
        mode: &mut ModeVector,
        count: &mut [usize; 3],
    ) -> Result<()> {
        count[axis.index()] += 1;
        if count[axis.index()] > self.cfg.chatter_limit {
            return Err(SimError::Chattering {
                axis,
                t,
                limit: self.cfg.chatter_limit,
                mode: *mode,
                state: *state,
            });
        }
        let pre = *mode;
        apply_transition(kind, axis, state, mode, self.params);
        trace!("t={t:.9} {axis} {kind:?} {pre} -> {mode}");
        self.events.push(GuardEvent {
            time: t,
            axis,
            kind,
            pre_mode: pre,
            post_mode: *mode,
        });
        Ok(())
    }

    fn fired_at(
        &self,
        dense: &Dense,
        t: f64,
        mode: ModeVector,
        forces: bool,
    ) -> Result<[Option<EventKind>; 3]> {
        let y = dense.at(t);
        let net = if !forces {
            NetForce::Skip
        } else if self.last_net.0 == t && self.last_net.1 == y {
            NetForce::Known(self.last_net.2)
        } else {
            NetForce::Evaluate
        };
        let s = CraneState::from_array(&y);
        guards_with(&s, &self.u(t), mode, self.params, &self.cfg.locked_axes, GuardPoint::Step, net)
            .map_err(|source| SimError::InvalidState { t, source })
    }

    /// Earliest guard firing in `(t0, t1]` localised to `event_time_tol`.
    /// Velocity and limit guards are sampled inside the step; breakaway
    /// guards, which need a vector-field evaluation, at its end.
    fn locate(&self, dense: &Dense, mode: ModeVector) -> Result<Option<(f64, [Option<EventKind>; 3])>> {
        let m = self.cfg.guard_samples;
        let (t0, h) = (dense.t0, dense.h);
        let mut lo = t0;
        for j in 1..=m {
            let hi = if j == m { dense.t1() } else { t0 + h * j as f64 / m as f64 };
            let fired = self.fired_at(dense, hi, mode, j == m)?;
            if fired.iter().all(Option::is_none) {
                lo = hi;
                continue;
            }
            // breakaway guards were not checked at the interior samples
            let breakaway = fired
                .iter()
                .any(|k| matches!(k, Some(EventKind::BreakawayPos | EventKind::BreakawayNeg)));
            let lo = if breakaway { t0 } else { lo };
            let (mut a, mut b, mut fb) = (lo, hi, fired);
            while b - a > self.cfg.event_time_tol {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = self.fired_at(dense, mid, mode, true)?;
                if fm.iter().all(Option::is_none) {
                    a = mid;
                } else {
                    b = mid;
                    fb = fm;
                }
            }
            return Ok(Some((b, fb)));
        }
        Ok(None)
    }
}

/// Integrate from `initial` at `t = 0` to `cfg.t_end`.
pub fn integrate(
    initial: &CraneState,
    input: &InputSignal,
    params: &CraneParams,
    cfg: &SimConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    params.validate()?;
    input.validate()?;
    initial.check()?;
    let mut state = *initial;
    let mut mode = ModeVector::from_state(&state);
    for &a in &cfg.locked_axes {
        if state.velocity(a) != 0.0 {
            return Err(SimError::Config(format!("locked axis {a} has a nonzero initial velocity")));
        }
        mode[a] = AxisMode::Rest;
    }
    if cfg.model == Model::Hybrid {
        for a in Axis::ALL {
            if !params.limits(a).contains(state.position(a)) {
                return Err(SimError::Config(format!(
                    "initial {a} position {} outside its limits",
                    state.position(a)
                )));
            }
        }
    }

    let t_end = cfg.t_end;
    let grid_n = ((t_end / cfg.output_dt) * (1.0 + 1e-12)).floor() as usize;
    let mut r = Runner {
        params,
        input,
        cfg,
        stats: SimStats::default(),
        samples: Vec::with_capacity(grid_n + 2),
        events: Vec::new(),
        grid_t0: 0.0,
        grid_n,
        next_grid: 0,
        last_net: (f64::NAN, [0.0; STATE_DIM], [0.0; 3]),
    };

    let mut t = 0.0;
    let ev = r.settle(t, &mut state, &mut mode, &mut [0; 3])?;
    r.take_grid_at(t);
    r.push(t, state, mode, true, ev);

    let h_min_rel = 16.0 * f64::EPSILON;
    let mut h = cfg.max_step.min(1e-4);
    let mut laws = r.laws(mode);
    let mut y = state.to_array();
    let mut k1 = r.deriv(t, &y, &laws)?;
    let mut last_err: Option<SimError> = None;

    while t < t_end {
        let bp = input.next_breakpoint(t).filter(|&b| b < t_end);
        let t_stop = bp.unwrap_or(t_end);
        let remaining = t_stop - t;
        let h_cap = h.min(cfg.max_step);
        let last = h_cap >= remaining;
        let h_try = if last { remaining } else { h_cap };
        if h_try < h_min_rel * t.abs().max(1.0) && !last {
            return Err(last_err.take().unwrap_or(SimError::StepUnderflow {
                t,
                h: h_try,
                component: "unknown",
            }));
        }

        let step = {
            let mut f = |tt: f64, yy: &Vector| r.deriv(tt, yy, &laws);
            dopri_step(&mut f, t, &y, &k1, h_try)
        };
        let step = match step {
            Ok(s) => s,
            Err(e) => {
                r.stats.rejected_steps += 1;
                last_err = Some(e);
                h = h_try * 0.25;
                continue;
            }
        };
        let (en, worst) = error_norm(&step.err, &y, &step.y1, cfg.rel_tol, cfg.abs_tol);
        if !(en <= 1.0) {
            r.stats.rejected_steps += 1;
            let fac = if en.is_finite() { (0.9 * en.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h = h_try * fac;
            last_err = Some(SimError::StepUnderflow {
                t,
                h,
                component: COMPONENTS[worst],
            });
            continue;
        }
        last_err = None;
        r.stats.accepted_steps += 1;
        let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
        let h_next = h_try * fac;

        let located = match cfg.model {
            Model::Hybrid => r.locate(&step.dense, mode)?,
            Model::Tanh { .. } => None,
        };
        match located {
            Some((te, fired)) => {
                r.emit_grid(&step.dense, te, false, mode);
                let mut s = CraneState::from_array(&step.dense.at(te));
                let mut count = [0usize; 3];
                for axis in Axis::ALL {
                    if let Some(kind) = fired[axis.index()] {
                        r.transition(te, axis, kind, &mut s, &mut mode, &mut count)?;
                    }
                }
                r.settle(te, &mut s, &mut mode, &mut count)?;
                t = te;
                state = s;
                let on_grid = r.take_grid_at(t);
                r.push(t, state, mode, on_grid, true);
                laws = r.laws(mode);
                y = state.to_array();
                k1 = r.deriv(t, &y, &laws)?;
                h = h_try;
            }
            None => {
                let t1 = if last { t_stop } else { t + h_try };
                r.emit_grid(&step.dense, t1, true, mode);
                t = t1;
                y = step.y1;
                k1 = step.k7;
                state = CraneState::from_array(&y);
                if last { h = h.max(h_next) } else { h = h_next }
                if last && bp.is_some() {
                    // the input may jump here
                    let before = mode;
                    if r.settle(t, &mut state, &mut mode, &mut [0; 3])? {
                        let on_grid = r.samples.last().is_some_and(|s| s.t == t);
                        if on_grid {
                            r.samples.pop();
                        }
                        r.push(t, state, mode, on_grid, true);
                        debug!("input breakpoint at {t} changed mode {before} -> {mode}");
                    }
                    laws = r.laws(mode);
                    y = state.to_array();
                    k1 = r.deriv(t, &y, &laws)?;
                }
            }
        }
    }
    // make sure the final grid point exists even if round-off left it out
    if r.next_grid <= r.grid_n {
        let tg = r.grid_time(r.next_grid);
        if r.samples.last().is_none_or(|s| s.t < tg) {
            r.push(tg, state, mode, true, false);
        }
    }

    Ok(Trajectory {
        model: cfg.model,
        samples: r.samples,
        events: r.events,
        stats: r.stats,
    })
}
