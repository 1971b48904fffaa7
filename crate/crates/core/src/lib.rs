//! Exact point counting on projective and affine varieties.
//!
//! The crate is organised along the pipeline it implements:
//!
//! * [`arith`]: primitive projective points, heights, gcd/CRT helpers and
//!   fraction-free linear algebra over the integers.
//! * [`poly`]: sparse multivariate integer polynomials, reduction mod p,
//!   an absolute-irreducibility checker and Hilbert functions of graded pieces.
//! * [`enumerate`]: the counting functions `N(F;B)`, `M(f;B)`, `N^aff` and
//!   slicing identities, built on an exact univariate root counter.
//! * [`curves`]: lines and tangent conics on surfaces, with the integral
//!   parameterisation of affine conic points by residue classes.
//! * [`geometry`]: tangent-plane multiplicity classification, small-height
//!   searches and linear projection of varieties.
//! * [`detmethod`]: prime windows, residue partitions, monomial selection,
//!   determinant certificates and auxiliary forms.
//! * [`harness`]: experiment configuration, exponent fits and report output.

pub mod arith;
pub mod curves;
pub mod detmethod;
pub mod enumerate;
mod error;
pub mod geometry;
pub mod harness;
pub mod poly;

pub use error::{Error, Result};
