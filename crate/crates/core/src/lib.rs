//! Refined Donaldson-Thomas generating series of framed toric quivers with
//! potential, computed by torus localization over molten crystals.
//!
//! The pipeline is
//!
//! 1. [`quiverdsl`]: parse a quiver with potential and pick a slope,
//! 2. [`crystal`]: build the atom poset and enumerate its finite order ideals,
//! 3. [`tangent`]: weigh the tangent-obstruction complex at each crystal,
//! 4. [`localize`]: sum `y^Ind` per size into a truncated series.
//!
//! [`bbsmooth`] checks the smooth Białynicki-Birula identity on products of
//! projective spaces.

pub mod bbsmooth;
pub mod crystal;
pub mod error;
pub mod exactalg;
pub mod exec;
mod lattice;
pub mod localize;
pub mod quiverdsl;
pub mod tangent;

pub use error::{Error, Result};
pub use exactalg::{HalfLaurent, TruncatedSeries};
pub use exec::Strategy;
pub use lattice::integer_kernel;
pub use quiverdsl::{QuiverWithPotential, Slope};
