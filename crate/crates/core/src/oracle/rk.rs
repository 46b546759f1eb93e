//! Dormand–Prince 5(4) with PI step-size control.

use super::OracleError;
use crate::real::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult<R> {
    pub state: Vec<R>,
    /// Largest accepted local error estimate, in absolute units.
    pub error_bound: f64,
    pub steps: usize,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
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
// fifth-order weights equal the last row of A (FSAL)
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub const MIN_TOL: f64 = 1e-14;
pub const MAX_TOL: f64 = 1e-6;

/// Integrate `ṡ = f(t, s)` from `t = 0` to `t = duration` with mixed
/// absolute/relative error control at `tol`.
pub fn dopri5<R, F>(
    mut f: F,
    init: &[R],
    duration: f64,
    tol: f64,
) -> Result<FlowResult<R>, OracleError>
where
    R: Real,
    F: FnMut(R, &[R], &mut [R]),
{
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(OracleError::BadTolerance(tol));
    }
    let n = init.len();
    let mut s = init.to_vec();
    if duration == 0.0 {
        return Ok(FlowResult {
            state: s,
            error_bound: 0.0,
            steps: 0,
        });
    }
    let mut k: Vec<Vec<R>> = vec![vec![R::zero(); n]; 7];
    let mut tmp = vec![R::zero(); n];
    let mut t = 0.0f64;
    f(R::zero(), &s, &mut k[0]);
    let norm0 = s.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    let d0 = k[0].iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    let mut h = if d0 > 0.0 {
        (0.01 * (norm0.max(tol) / d0)).min(duration)
    } else {
        duration.min(0.1)
    };
    let mut err_prev = 1e-4f64;
    let mut error_bound = 0.0f64;
    let mut steps = 0usize;
    let mut rejected = false;
    while duration - t > 1e-15 * duration {
        if t + h > duration {
            h = duration - t;
        }
        if h < 1e-13 * duration.max(1.0) && h < duration - t || steps > 5_000_000 {
            return Err(OracleError::StepUnderflow { t });
        }
        let hr = R::from_f64(h);
        for stage in 1..7 {
            for i in 0..n {
                let mut acc = s[i];
                for (j, kj) in k.iter().enumerate().take(stage) {
                    if A[stage][j] != 0.0 {
                        acc += hr * R::from_f64(A[stage][j]) * kj[i];
                    }
                }
                tmp[i] = acc;
            }
            f(R::from_f64(t + C[stage] * h), &tmp, &mut k[stage]);
        }
        // tmp holds the fifth-order solution (stage 7 argument)
        let mut err = 0.0f64;
        let mut err_abs = 0.0f64;
        for i in 0..n {
            let mut e = R::zero();
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += R::from_f64(E[j]) * kj[i];
                }
            }
            let ea = (hr * e).to_f64().abs();
            let sc = tol + tol * s[i].to_f64().abs().max(tmp[i].to_f64().abs());
            err = err.max(ea / sc);
            err_abs = err_abs.max(ea);
        }
        if err <= 1.0 {
            t += h;
            steps += 1;
            s.copy_from_slice(&tmp);
            let last = k[6].clone();
            k[0] = last;
            error_bound = error_bound.max(err_abs);
            let fac = if err == 0.0 {
                5.0
            } else {
                0.9 * err.powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0)
            };
            let fac = if rejected { fac.min(1.0) } else { fac };
            h *= fac.clamp(0.2, 5.0);
            err_prev = err.max(1e-4);
            rejected = false;
        } else {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            rejected = true;
        }
    }
    Ok(FlowResult {
        state: s,
        error_bound,
        steps,
    })
}
