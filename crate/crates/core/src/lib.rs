//! Executable operator theory at desk scale.
//!
//! * [`numkit`]: dense complex linear algebra (spectra, SVD, solves, `expm`).
//! * [`operators`]: dense matrices, weighted shifts and direct sums acting
//!   exactly on finitely supported vectors.
//! * [`classify`]: concave / 2-isometric / 2-contractive, bounded below,
//!   pure and wandering-subspace tests.
//! * [`semigroup`]: matrix semigroups, Cayley cogenerators, growth bounds and
//!   the four-way concavity equivalence.
//! * [`analytic_model`]: the shift-on-a-reproducing-kernel-space model of a
//!   bounded below, pure operator with the wandering subspace property, the
//!   multiplier semigroup, and Wold-type decompositions.
//! * [`hardy`]: truncated power series, Blaschke products, Toeplitz
//!   truncations, model spaces and inner-symbol semigroups.
//! * [`acceptance`]: the end-to-end verification suite.

pub mod acceptance;
pub mod analytic_model;
pub mod classify;
pub mod error;
pub mod hardy;
pub mod numkit;
pub mod operators;
pub mod random;
pub mod semigroup;

pub use error::{Error, Result};
pub use numkit::{ComplexMatrix, Tolerances, C64};
