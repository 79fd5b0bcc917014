//! p-adic functionals on finite-rank torsion-free abelian groups.
//!
//! The library computes with bounded-precision `Z_p` scalars and matrices,
//! represents groups through factored forms (one dual matrix per
//! exceptional prime), and implements the classification toolkit on top:
//! membership, the p-adic metric and divisibility, dual modules of
//! stationary inductive limits, constructive functional extension,
//! separating functionals, homomorphism/isomorphism verification, rank-1
//! types, and the invariant factors of `G/p^k G`.
//!
//! Brute-force reference implementations live in [`oracle`]; they share no
//! machinery with the main path and exist to be disagreed with.

// index loops mirror the matrix algorithms; iterator rewrites obscure them
#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod error;
pub mod functional;
pub mod group;
pub mod intmat;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod padic;

pub use error::{Error, Result};
