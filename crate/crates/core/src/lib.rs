//! Exact Taylor coefficients of the dispersionless 2D Toda free energy `v`
//! and the exterior conformal map it encodes.
//!
//! The crate is `no_std` (it needs `alloc`). Everything that touches files,
//! JSON or the command line lives in the companion `taumap` crate.
//!
//! Layout:
//!
//! * [`exactring`]: truncated formal power series in `t_k`, `t̄_k` whose
//!   coefficients are Laurent polynomials in `t_0` with one `log t_0`
//!   generator, over exact rationals.
//! * [`combinatorics`]: the composition counts `P`, the pairwise and
//!   multi-index coefficient towers `T`, and the block-partition weights `S`.
//! * [`taucoeffs`]: Cauchy data, the coefficients `N(I | Ī)` and assembly of
//!   the truncated free energy.
//! * [`hirota`]: residual checks of the dispersionless Hirota equations.
//! * [`riemann`]: harmonic moments of analytic curves and the conformal map.

#![no_std]

extern crate alloc;

pub mod combinatorics;
mod error;
pub mod exactring;
pub mod hirota;
pub mod riemann;
pub mod taucoeffs;

pub use error::{Error, Result};
pub use exactring::{FormalSeries, Rational, Side, T0Monomial, T0Poly, TMonomial, Var};
