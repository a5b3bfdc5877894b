//! Conjugacy of hyperbolic automorphisms of the 2- and 3-torus.
//!
//! In dimension 2 the decision goes through periodic continued fractions of
//! the expanding eigen-slope; in dimension 3 through Klein sails (totally
//! real spectrum) and Klein–Voronoi factor-sails (one real eigenvalue),
//! their Dirichlet groups and fundamental domains.
//!
//! All verdicts are exact. Floating point appears only as a fast filter in
//! front of exact fallbacks.

pub mod arith;
pub mod cf;
pub mod classify2;
pub mod error;
pub mod intmat;
pub mod sail2d;
pub mod sail3;
pub mod samples;
pub mod selftest;
pub(crate) mod ser;

pub use arith::{IntPoly, QuadraticSurd, RatPoly, RootBox};
pub use error::{Error, Result};
pub use intmat::{IntMatrix, RatMatrix};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type BigRat = num_rational::BigRational;
