//! Exact constructions of the non-abelian Galois extensions of degree p^3
//! over the rationals, realized inside cyclotomic fields.
//!
//! The library builds the tower Q ⊂ F, K, L ⊂ Q(zeta_m) from a degree-p
//! cyclic field F (Gaussian-period subfield of Q(zeta_r) or the degree-p
//! subfield of Q(zeta_{p^2})), tests elements x in L* against an
//! ideal-theoretic non-p-th-power criterion, assembles the Kummer data
//! (beta, omega, b, the radical coefficients of alpha) for the Heisenberg
//! and C_{p^2}⋊C_p variants, and computes Irr(alpha; Q) of degree p^2 with
//! exact rational arithmetic end to end.
//!
//! All values are immutable and every operation is a pure function; no
//! floating point participates in any result (a numeric root cross-check
//! exists in [`minpoly`] as a sanity gadget only).

pub mod arith;
pub mod config;
pub mod construct;
pub mod cyclo;
pub mod expr;
pub mod ideals;
pub mod maps;
pub mod minpoly;
pub mod modpoly;
pub mod ramify;
pub mod ratpoly;
pub mod reproduce;
pub mod search;
pub mod tower;

mod error;
mod linalg;
mod serde_util;

pub use error::{Error, Result};
