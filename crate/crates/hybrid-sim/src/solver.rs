//! Dormand–Prince 5(4) step with its continuous extension.

use crane_core::STATE_DIM;

pub type Vector = [f64; STATE_DIM];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One attempted step.
pub struct Step {
    pub y1: Vector,
    /// Derivative at the step end (first stage of the next step).
    pub k7: Vector,
    /// Per-component error estimate.
    pub err: Vector,
    pub dense: Dense,
}

/// Continuous extension over `[t0, t0 + h]`. Components whose stage
/// derivatives are all zero are reproduced bit-exactly.
#[derive(Debug, Clone)]
pub struct Dense {
    pub t0: f64,
    pub h: f64,
    r: [Vector; 5],
    y1: Vector,
}

impl Dense {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn at_theta(&self, th: f64) -> Vector {
        if th >= 1.0 {
            return self.y1;
        }
        let th1 = 1.0 - th;
        let r = &self.r;
        std::array::from_fn(|i| {
            r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])))
        })
    }

    pub fn at(&self, t: f64) -> Vector {
        self.at_theta(((t - self.t0) / self.h).clamp(0.0, 1.0))
    }
}

fn comb(y: &Vector, h: f64, terms: &[(f64, &Vector)]) -> Vector {
    std::array::from_fn(|i| {
        let s: f64 = terms.iter().map(|(a, k)| a * k[i]).sum();
        y[i] + h * s
    })
}

/// Take one step of size `h` from `(t, y)` where `k1 = f(t, y)`.
pub fn dopri_step<F, E>(f: &mut F, t: f64, y: &Vector, k1: &Vector, h: f64) -> Result<Step, E>
where
    F: FnMut(f64, &Vector) -> Result<Vector, E>,
{
    let k2 = f(t + C2 * h, &comb(y, h, &[(A21, k1)]))?;
    let k3 = f(t + C3 * h, &comb(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(t + C4 * h, &comb(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(
        t + C5 * h,
        &comb(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = f(
        t + h,
        &comb(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y1 = comb(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(t + h, &y1)?;
    let err: Vector = std::array::from_fn(|i| {
        h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
    });
    let mut r = [[0.0; STATE_DIM]; 5];
    for i in 0..STATE_DIM {
        let dy = y1[i] - y[i];
        let bspl = h * k1[i] - dy;
        r[0][i] = y[i];
        r[1][i] = dy;
        r[2][i] = bspl;
        r[3][i] = dy - h * k7[i] - bspl;
        r[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    Ok(Step {
        y1,
        k7,
        err,
        dense: Dense { t0: t, h, r, y1 },
    })
}

/// Scaled RMS error norm; also returns the index of the dominant component.
pub fn error_norm(err: &Vector, y0: &Vector, y1: &Vector, rtol: f64, atol: f64) -> (f64, usize) {
    let mut sum = 0.0;
    let mut worst = (0.0, 0);
    for i in 0..STATE_DIM {
        let sc = atol + rtol * y0[i].abs().max(y1[i].abs());
        let e = err[i] / sc;
        sum += e * e;
        if e.abs() > worst.0 {
            worst = (e.abs(), i);
        }
    }
    ((sum / STATE_DIM as f64).sqrt(), worst.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    // y' = -y in every component, exact solution e^{-t}
    fn decay(_t: f64, y: &Vector) -> Result<Vector, ()> {
        Ok(std::array::from_fn(|i| -y[i]))
    }

    #[test]
    fn fifth_order_accuracy_on_decay() {
        let y0 = [1.0; STATE_DIM];
        let mut f = decay;
        let k1 = decay(0.0, &y0).unwrap();
        let e1 = (dopri_step(&mut f, 0.0, &y0, &k1, 0.1).unwrap().y1[0] - (-0.1f64).exp()).abs();
        let e2 = (dopri_step(&mut f, 0.0, &y0, &k1, 0.05).unwrap().y1[0] - (-0.05f64).exp()).abs();
        // local error O(h^6)
        assert!(e1 / e2 > 40.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn dense_output_is_accurate_and_exact_at_ends() {
        let y0 = [1.0; STATE_DIM];
        let mut f = decay;
        let k1 = decay(0.0, &y0).unwrap();
        let s = dopri_step(&mut f, 0.0, &y0, &k1, 0.1).unwrap();
        assert_eq!(s.dense.at_theta(0.0)[0], 1.0);
        assert_eq!(s.dense.at_theta(1.0), s.y1);
        assert!((s.dense.at(0.037)[0] - (-0.037f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn frozen_component_is_bit_exact() {
        let mut y0 = [0.3; STATE_DIM];
        y0[2] = 0.123456789;
        let mut f = |_t: f64, y: &Vector| -> Result<Vector, ()> {
            let mut d: Vector = std::array::from_fn(|i| y[i].sin());
            d[2] = 0.0;
            d[3] = 0.0;
            Ok(d)
        };
        let k1 = f(0.0, &y0).unwrap();
        let s = dopri_step(&mut f, 0.0, &y0, &k1, 0.07).unwrap();
        assert_eq!(s.y1[2], y0[2]);
        for th in [0.1, 0.33, 0.5, 0.9] {
            assert_eq!(s.dense.at_theta(th)[2], y0[2]);
        }
    }
}
