//! su(2) and su(1,1) displaced number states.
//!
//! Closed-form Fock expansions, photon-number distributions, Mandel Q
//! statistics and quadrature variances for the Holstein–Primakoff
//! displaced number states `D_2(M, xi)|n>` and `D_11(M, zeta)|n>`, plus
//! a matrix-exponential oracle that every closed form is checked against.

pub mod cli;
pub mod coefficients;
pub mod error;
pub mod expm;
pub mod hamiltonians;
pub mod oracle;
pub mod params;
pub mod squeezing;
pub mod stats;
pub mod sum;

pub use error::{Error, Result};
pub use params::{AlgebraKind, DnsParams, Su11Params, Su2Params};
