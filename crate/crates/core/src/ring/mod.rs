//! Exact symbolic arithmetic: polynomials and rational functions in the two
//! rate parameters `a`, `b`, and finite sums of `t^j e^{(n1 a + n2 b) t}`.

pub mod exppoly;
pub mod json;
pub mod limit;
mod modgcd;
pub mod omega;
pub mod parse;
pub mod poly2;
pub mod ratfunc;
pub mod tpoly;

pub use exppoly::{ExpKey, ExpPoly};
pub use limit::{default_limit_order, limit_params_zero, LimitError};
pub use omega::{
    omega_basis, omega_fn, omega_x, subst_neg_log, OmegaPoly, OmegaXExpr, RateOmegaView,
};
pub use parse::{parse_ratfunc, parse_rational, rational_to_string, ParseError};
pub use poly2::{q, qi, Poly2, Q};
pub use ratfunc::{Pole, RatFunc};
pub use tpoly::TPoly;
