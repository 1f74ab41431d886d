//! Exact-arithmetic engine for the Cohen–Lenstra series of the nodal curve
//! singularity `F_q[[u,v]]/(uv)`.
//!
//! The crate has three layers:
//!
//! * exact truncated power series in `x` whose coefficients are either big
//!   rationals (fixed `t = 1/q`) or truncated series in `t` ([`qseries`],
//!   [`scalar`]), together with the named series of the theory: the entire
//!   correction factor `H(x;t)`, the nodal Cohen–Lenstra series, the smooth
//!   local series and the partial theta function;
//! * combinatorial and finite-field oracles that ground every generating
//!   function in brute-force counts ([`partition`], [`fq`], [`matrix`],
//!   [`census`], [`clseries`]);
//! * certified floating evaluation of `H(x;t)` as an entire function and
//!   exploratory scans of its coefficients ([`analytic`]).
//!
//! Everything on the exact side is computed over big rationals with no
//! floating point, so identity checks are equalities at the chosen
//! truncation, not approximations.

pub mod analytic;
pub mod census;
pub mod clseries;
pub mod fq;
pub mod matrix;
pub mod partition;
pub mod qseries;
pub mod report;
pub mod scalar;
pub mod serialize;
pub mod verify;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
