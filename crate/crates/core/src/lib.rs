//! Extended Rauzy-Veech renormalization for compact group extensions of
//! interval exchange transformations.
//!
//! The crate is organized bottom-up:
//!
//! - [`iet`]: exact and floating interval exchanges, coding and a
//!   brute-force first return search.
//! - [`rauzy`]: Rauzy-Veech induction, the Rauzy maps A/B on tuples, the
//!   extended renormalization, return words, Zorich runs and the Veech
//!   properties P1/P2.
//! - [`groups`]: U(1), tori, SU(2) and products, with Haar sampling,
//!   characters, low-dimensional matrices and Nielsen maps.
//! - [`extension`]: skew products, the orbit random walk on the group and
//!   equidistribution/mixing diagnostics.
//! - [`obstruction`]: fixed-vector and conjugacy functionals tracked along
//!   renormalization.
//! - [`cli`] and [`selftest`]: the seeded experiment runner behind the
//!   `gext` binary.

pub mod cli;
pub mod error;
pub mod extension;
pub mod groups;
pub mod iet;
pub mod obstruction;
pub mod rauzy;
pub mod scalar;
pub mod seed;
pub mod selftest;

pub use error::{Error, Result};
pub use groups::{GroupDescriptor, GroupElement, GroupOp, GTuple, Representation};
pub use iet::{Iet, Permutation};
pub use rauzy::{ExtendedState, RauzyRule, RenormPath};
pub use scalar::{Rational, Scalar};
