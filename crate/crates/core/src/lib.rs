//! Exact symbolic toolkit for Darboux polynomials (invariant algebraic surfaces)
//! and polynomial first integrals of the FitzHugh-Nagumo travelling-wave system
//!
//! ```text
//!     x' = z
//!     y' = b(x - dy)
//!     z' = x(x-1)(x-a) + y + cz
//! ```
//!
//! and of related three-dimensional polynomial vector fields.
//!
//! All core computations are exact over the rationals, with the parameters
//! `a, b, c, d, m, alpha` carried symbolically where needed. The crate is
//! organised as:
//!
//! * [`expr`] — sparse multivariate polynomials over Q, parsing/printing,
//!   weight grading with exponents (1,2,2);
//! * [`field`] — vector-field constructors, Lie derivative, the graded
//!   operator `L = z d/dx + m x z d/dy + x^3 d/dz`, alpha-scaling conjugation;
//! * [`graded`] — `L` restricted to weight-homogeneous slices as exact linear
//!   algebra: kernels, solvability obstructions, and the stage-by-stage
//!   cascade that builds Darboux polynomials from a top weight component;
//! * [`darboux`] — verification, cofactor recovery, degree-bounded search,
//!   parameter-constraint reduction, and the certificate registry for the
//!   six known generators;
//! * [`calculus`] — a differential field Q(sqrt2)(u,w)[sqrtQ] with the
//!   transcendental primitives A, B, C used to check the reduction identities
//!   behind the obstruction analysis;
//! * [`numeric`] — fixed-step 4th-order integration of the flow and drift
//!   reports validating the exponential transport law of Darboux pairs.
//!
//! Parallel sweeps use rayon behind the default `parallel` feature; build
//! with `--no-default-features` for a fully sequential library.

pub mod calculus;
pub mod darboux;
pub mod expr;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod numeric;
pub mod par;
pub mod sample;

pub use expr::{Monomial, Poly, Rational, VarId, WeightSpec};
pub use field::VectorField;
