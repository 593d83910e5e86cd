//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! Contract: the local error per step is held below
//! `tol * (1 + |y|)` componentwise through the embedded 4th-order
//! estimate and a standard step controller.

use crate::error::{Error, Result};
use crate::real::Real;

/// Statistics of one integration run.
#[derive(Debug, Clone, Copy)]
pub struct OdeStats {
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

const MAX_STEPS: usize = 2_000_000;

/// Dormand-Prince 5(4) coefficients (first-same-as-last).
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// b - b̂: weights of the embedded error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` (`t1 > t0`) with local
/// tolerance `tol`. Returns the final state and step statistics.
pub fn integrate_dp54<T, const N: usize, F>(
    mut f: F,
    t0: T,
    t1: T,
    y0: [T; N],
    tol: T,
) -> Result<([T; N], OdeStats)>
where
    T: Real,
    F: FnMut(T, &[T; N]) -> [T; N],
{
    if !(t1 > t0) {
        return Err(Error::param("t1", "integration window must be forward".to_string()));
    }
    if !(tol > T::zero()) || !tol.is_finite() {
        return Err(Error::param("tol", format!("must be positive, got {tol}")));
    }

    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut k: [[T; N]; 7] = [[T::zero(); N]; 7];
    k[0] = f(t, &y);

    let mut h = span * T::of(1e-2);
    let h_min = span * T::of(1e-14);
    let mut stats = OdeStats {
        steps_accepted: 0,
        steps_rejected: 0,
    };

    for _ in 0..MAX_STEPS {
        if t >= t1 {
            return Ok((y, stats));
        }
        if h > t1 - t {
            h = t1 - t;
        }

        for (s, row) in A.iter().enumerate() {
            let mut ys = y;
            for (j, &a) in row.iter().enumerate().take(s + 1) {
                if a != 0.0 {
                    let a = T::of(a);
                    for i in 0..N {
                        ys[i] += h * a * k[j][i];
                    }
                }
            }
            k[s + 1] = f(t + h * T::of(C[s]), &ys);
        }
        // 5th-order solution reuses the last A row (FSAL layout)
        let mut y5 = y;
        for (j, &b) in A[5].iter().enumerate() {
            if b != 0.0 {
                let b = T::of(b);
                for i in 0..N {
                    y5[i] += h * b * k[j][i];
                }
            }
        }

        // scaled error norm from the embedded difference
        let mut err = T::zero();
        for i in 0..N {
            let mut e = T::zero();
            for (j, &w) in E.iter().enumerate() {
                if w != 0.0 {
                    e += T::of(w) * k[j][i];
                }
            }
            e = e * h;
            let scale = tol * (T::one() + y[i].abs().max(y5[i].abs()));
            let r = e / scale;
            err += r * r;
        }
        err = (err / T::of(N as f64)).sqrt();

        if err <= T::one() {
            t += h;
            y = y5;
            k[0] = k[6];
            stats.steps_accepted += 1;
        } else {
            stats.steps_rejected += 1;
        }

        let factor = if err > T::zero() {
            (T::of(0.9) * err.powf(T::of(-0.2))).max(T::of(0.2)).min(T::of(5.0))
        } else {
            T::of(5.0)
        };
        h = h * factor;
        if h < h_min {
            return Err(Error::Integration(format!(
                "step size underflow at t = {t} (h = {h})"
            )));
        }
    }
    Err(Error::Integration(format!(
        "no convergence within {MAX_STEPS} steps (t = {t})"
    )))
}
