//! Independent numerical checks: flow integration, numerical Dulac maps,
//! error-slope fits, a brute-force resonance scan and a numerical conjugacy
//! test for the normal-form transformation.

mod brute;
mod conjugacy;
mod dulac_num;
mod fit;
mod rk;
mod system;
mod taylor;

pub use brute::brute_resonance;
pub use conjugacy::{apply_transform, conjugacy_check};
pub use dulac_num::{
    closed_form_dulac, convergence_order, derivative_decay_proxy, numerical_dulac,
    numerical_dulac_decoupled, numerical_dulac_taylor, omitted_exponent, ConvergenceConfig,
};
pub use fit::{fit_slope, log_grid, to_csv, SlopeFit, MIN_SAMPLES};
pub use rk::{dopri5, FlowResult, MAX_TOL, MIN_TOL};
pub use system::{field_qpolys, PolySystem, QPoly};
pub use taylor::integrate_taylor;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dulac::DulacError;
use crate::normalform::{NormalFormError, PolyVectorField};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("tolerance {0} outside the supported range")]
    BadTolerance(f64),
    #[error("errors at the rounding floor ({floor:e}); slope not measurable")]
    DegenerateFit { floor: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Dulac(#[from] DulacError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

/// Flow of a polynomial field for time `duration` with the embedded RK pair.
pub fn integrate_flow(
    x: &PolyVectorField,
    init: &[f64],
    duration: f64,
    tol: f64,
) -> Result<FlowResult<f64>, OracleError> {
    if init.len() != x.dim() {
        return Err(OracleError::InvalidInput(format!(
            "initial state has {} entries, field has {} variables",
            init.len(),
            x.dim()
        )));
    }
    let sys = PolySystem::<f64>::from_field(x);
    dopri5(|_, s, out| sys.eval(s, out), init, duration, tol)
}

/// Same, with the Taylor integrator in any [`Real`].
pub fn integrate_flow_taylor<R: Real>(
    x: &PolyVectorField,
    init: &[R],
    duration: R,
    tol: f64,
) -> Result<FlowResult<R>, OracleError> {
    let sys = PolySystem::<R>::from_field(x);
    integrate_taylor(&sys, init, duration, tol)
}

/// One line of a validation report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// `None` when there is nothing to predict (an exact series)
    pub expected: Option<f64>,
    /// `None` when no slope could be measured
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn within(name: &str, expected: f64, measured: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            expected: Some(expected),
            measured: Some(measured),
            tolerance,
            pass: (measured - expected).abs() <= tolerance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckReport>,
}

impl ValidationReport {
    pub fn push(&mut self, c: CheckReport) {
        self.checks.push(c);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
