//! Exact computation of quadratic Euler characteristics chi(X/k) in the
//! Grothendieck-Witt ring GW(k) for smooth hypersurfaces in projective and
//! weighted projective space, via graded Jacobian rings and Scheja-Storch
//! forms, together with both sides of the quadratic conductor identities
//! for cone degenerations F - t X^e.
//!
//! All arithmetic is exact over Q, odd prime fields and rational function
//! fields in one parameter t.

#![allow(clippy::needless_range_loop)]

pub mod conductor;
pub mod error;
pub mod gw;
pub mod hyper;
pub mod jacobian;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod scalars;
