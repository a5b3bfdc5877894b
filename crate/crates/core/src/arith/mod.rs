//! Exact arithmetic: rationals, quadratic surds, polynomials, Sturm root
//! isolation and certified signs at algebraic points.

pub mod field;
pub mod poly;
pub mod ring;
pub mod surd;
pub mod sturm;

pub use field::NumberField;
pub use poly::{IntPoly, Poly, RatPoly};
pub use ring::{ExactDiv, Ring};
pub use sturm::{alg_sign, root_refine, sturm_isolate, RootBox};
pub use surd::QuadraticSurd;
