//! Taylor-series integrator for polynomial systems.
//!
//! Taylor coefficients come from the recurrence `s_{k+1} = F(s)_k / (k+1)`,
//! with every monomial built as a chain of Cauchy products that reuse shared
//! prefixes. Used in double-double precision where the embedded RK pair
//! cannot reach the required accuracy.

use std::collections::HashMap;

use super::rk::FlowResult;
use super::system::PolySystem;
use super::OracleError;
use crate::real::Real;

#[derive(Clone, Copy, Debug)]
enum Node {
    One,
    Var(usize),
    Mul(usize, usize),
}

struct Plan<R> {
    nodes: Vec<Node>,
    /// per component: (node, coefficient)
    comps: Vec<Vec<(usize, R)>>,
}

fn build_node(e: &[u32], nodes: &mut Vec<Node>, memo: &mut HashMap<Vec<u32>, usize>) -> usize {
    if let Some(&id) = memo.get(e) {
        return id;
    }
    let total: u32 = e.iter().sum();
    let id = if total == 0 {
        nodes.push(Node::One);
        nodes.len() - 1
    } else if total == 1 {
        let i = e.iter().position(|&p| p == 1).unwrap();
        nodes.push(Node::Var(i));
        nodes.len() - 1
    } else {
        // peel one factor of the last variable present
        let i = e.iter().rposition(|&p| p > 0).unwrap();
        let mut rest = e.to_vec();
        rest[i] -= 1;
        let mut unit = vec![0; e.len()];
        unit[i] = 1;
        let a = build_node(&rest, nodes, memo);
        let b = build_node(&unit, nodes, memo);
        nodes.push(Node::Mul(a, b));
        nodes.len() - 1
    };
    memo.insert(e.to_vec(), id);
    id
}

impl<R: Real> Plan<R> {
    fn new(sys: &PolySystem<R>) -> Self {
        let mut nodes = Vec::new();
        let mut memo = HashMap::new();
        let comps = sys
            .comps
            .iter()
            .map(|c| {
                c.iter()
                    .map(|(e, v)| (build_node(e, &mut nodes, &mut memo), *v))
                    .collect()
            })
            .collect();
        Plan { nodes, comps }
    }

    /// Taylor coefficients `0..=order` of the solution through `s0`.
    fn coefficients(&self, s0: &[R], order: usize) -> Vec<Vec<R>> {
        let n = s0.len();
        let mut x: Vec<Vec<R>> = s0.iter().map(|&v| vec![v]).collect();
        let mut ser: Vec<Vec<R>> = vec![Vec::with_capacity(order + 1); self.nodes.len()];
        for k in 0..order {
            for (id, node) in self.nodes.iter().enumerate() {
                let v = match *node {
                    Node::One => {
                        if k == 0 {
                            R::one()
                        } else {
                            R::zero()
                        }
                    }
                    Node::Var(i) => x[i][k],
                    Node::Mul(a, b) => {
                        let mut acc = R::zero();
                        for l in 0..=k {
                            acc += ser[a][l] * ser[b][k - l];
                        }
                        acc
                    }
                };
                ser[id].push(v);
            }
            let inv = R::one() / R::from_i64(k as i64 + 1);
            for i in 0..n {
                let mut f = R::zero();
                for &(id, c) in &self.comps[i] {
                    f += c * ser[id][k];
                }
                x[i].push(f * inv);
            }
        }
        x
    }
}

/// Integrate the autonomous system for `duration` with per-step error
/// target `tol` (relative to `max(1, |s|)`).
pub fn integrate_taylor<R: Real>(
    sys: &PolySystem<R>,
    init: &[R],
    duration: R,
    tol: f64,
) -> Result<FlowResult<R>, OracleError> {
    if !(tol > 0.0) {
        return Err(OracleError::BadTolerance(tol));
    }
    let plan = Plan::new(sys);
    let order = ((-tol.ln()) / 2.0).ceil().max(8.0) as usize + 2;
    let mut s = init.to_vec();
    let mut t = 0.0f64;
    let mut steps = 0usize;
    let mut error_bound = 0.0f64;
    let dur = duration;
    let duration = dur.to_f64();
    let mut elapsed = R::zero();
    while (dur - elapsed).to_f64() > 1e-30 * duration.max(1.0) {
        let c = plan.coefficients(&s, order);
        let scale = s.iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
        let mut h = f64::INFINITY;
        for p in [order - 1, order] {
            let norm = c.iter().map(|ci| ci[p].to_f64().abs()).fold(0.0, f64::max);
            if norm > 0.0 {
                h = h.min((tol * scale / norm).powf(1.0 / p as f64));
            }
        }
        let h = 0.9 * h;
        let remaining = (dur - elapsed).to_f64();
        let (hr, last) = if !h.is_finite() || h >= remaining {
            (dur - elapsed, true)
        } else {
            (R::from_f64(h), false)
        };
        if !last && h < 1e-12 * duration.max(1.0) || steps > 1_000_000 {
            return Err(OracleError::StepUnderflow { t });
        }
        for (si, ci) in s.iter_mut().zip(&c) {
            let mut acc = ci[order];
            for k in (0..order).rev() {
                acc = acc * hr + ci[k];
            }
            *si = acc;
            let tail = (ci[order] * hr.powi(order as i32)).to_f64().abs();
            error_bound = error_bound.max(tail);
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(OracleError::StepUnderflow { t });
        }
        elapsed = if last { dur } else { elapsed + hr };
        t = elapsed.to_f64();
        steps += 1;
    }
    Ok(FlowResult {
        state: s,
        error_bound,
        steps,
    })
}
