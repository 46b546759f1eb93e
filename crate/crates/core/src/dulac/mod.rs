//! Variation coefficients and the Dulac-map series of a normal form.
//!
//! In the coordinates `Uy = x^{α0} y`, `Uz = x^{β0} z` a resonant normal form
//! with `ẋ = x` becomes
//!
//! ```text
//! U̇y = -a Uy + Σ c Uy^i Uz^j,   U̇z = -b Uz + Σ c Uy^i Uz^j,   u̇ = Σ c Uy^i Uz^j
//! ```
//!
//! with `a = α(u0) - α0`, `b = β(u0) - β0` kept symbolic. Expanding the flow
//! in the initial data `(Uy0, Uz0)` gives linear equations for each
//! coefficient, solved exactly in the exp-polynomial ring. The transit time to
//! `{x = 1}` is `t = -ln x0`.

mod coeffs;
mod series;
mod variation;

pub use coeffs::{label_for, monomial_for, NFCoeffs, WTerm};
pub use series::{
    assemble, dulac_series, eval_component, eval_dulac, DulacEntry, DulacEntryJson, DulacSeries,
    DulacSeriesJson, DulacValue, Output,
};
pub use variation::{
    build_variational_rhs, level_for_order, variation_coeffs, variation_coeffs_to_level, Rhs,
    VariationSeries, WSeries,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DulacError {
    #[error("field is not in normal form: {0}")]
    NotInNormalForm(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("variation coefficients below degree {0} are missing")]
    MissingLowerOrder(u32),
    #[error("a coefficient has a pole at the evaluation point")]
    PoleAtPoint,
    #[error("coefficient of {component} at (i={i}, j={j}) has no limit as a, b -> 0")]
    NotInRbar { component: String, i: u32, j: u32 },
    #[error("initial-data exponents ({i}, {j}) of {component} do not match the index lattice")]
    Label { component: String, i: u32, j: u32 },
}

#[cfg(test)]
mod tests;
