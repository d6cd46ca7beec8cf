//! A small differential field for checking integral reduction identities by
//! differentiation.
//!
//! Elements live in `Q(sqrt2)(u, w)[sqrtQ]` with `Q = u^4/2 - 2w` and
//! `sqrtQ^2 = Q`, extended by three transcendental primitives
//!
//! ```text
//! A' = 1/sqrtQ,   B' = u^2/sqrtQ,   C' = u/sqrtQ
//! ```
//!
//! over which differentiation is defined formally. An identity
//! `int f du = F` is accepted when `d/du F - f` normalises to zero; one
//! antiderivative involves a logarithm and is handled by differentiating its
//! specific argument. Every accepted identity is additionally cross-checked
//! against numeric quadrature.

mod elem;
mod parse;
mod q2;
mod quad;
mod ratfunc;
mod suite;

pub use elem::{CalcElem, DiffElem, SqrtQScalar};
pub use parse::{parse_calc, CalcError};
pub use q2::{rational_to_f64, Q2};
pub use quad::integrate_adaptive;
pub use ratfunc::{QPoly2, RatFunc};
pub use suite::{
    appendix_suite, appendix_suite_from, check_identity, d_du_checked, AppendixReport,
    IdentityOutcome, IdentityReport, ManifestEntry, NumericCheck, MANIFEST_JSON,
};
