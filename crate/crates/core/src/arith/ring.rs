use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Commutative ring with exact arithmetic. Blanket-implemented for the
/// scalar types the crate works with (`BigInt`, `BigRational`, `i64`,
/// `i128`, and polynomials over those).
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A ring whose `/` is exact whenever the quotient exists in the ring
/// (true division for fields, exact division for integers).
pub trait ExactDiv: Ring + Div<Output = Self> {}

impl<T> ExactDiv for T where T: Ring + Div<Output = T> {}
