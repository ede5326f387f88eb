//! Hausdorff dimension of bounded-type continued-fraction Cantor sets
//! `E_A = { x in (0,1) : every continued-fraction digit of x lies in A }`,
//! computed from periodic points and certified with Hardy-space bounds.
//!
//! The pipeline:
//!
//! 1. [`orbits`] enumerates primitive periodic orbits of the digit maps
//!    `T_i(x) = 1/(i + x)` up to a period `P` and evaluates traces of the
//!    transfer operator `L_s`.
//! 2. [`determinant`] turns traces into Taylor coefficients `δ_n(s)` of
//!    `det(I - z L_s)` and solves `1 + Σ_{n≤P} δ_n(s) = 0` for `s`.
//! 3. [`disc`] and [`hardy`] bound the neglected coefficients `δ_n`, `n > P`.
//! 4. [`certify`] checks the sign of the truncated determinant plus tail
//!    at two nearby points and records the result.

pub mod certify;
pub mod determinant;
pub mod disc;
pub mod error;
pub mod hardy;
pub mod mobius;
pub mod numerics;
pub mod orbits;

pub use error::{Error, Result};
