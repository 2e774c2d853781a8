//! Classification of caps in PG(r,q) up to projective equivalence.
//!
//! A cap is a set of points in the projective space PG(r,q) no three of
//! which are collinear. This crate enumerates, for small spaces over prime
//! fields, one representative of every projective equivalence class of
//! caps, marks the complete ones (those contained in no larger cap), and
//! recomputes the invariants used to tell classes apart: stabilizer groups
//! inside PGL(r+1,q) and the weight distributions of the linear codes
//! spanned by the cap coordinates.
//!
//! The main entry points are [`geometry::Space`] for the incidence
//! machinery, [`group::ProjectiveGroup`] for the symmetry group,
//! [`classify::classify`] for the search itself and
//! [`classify::verify`] for re-checking a finished catalog.

pub mod canonical;
pub mod catalog;
pub mod classify;
pub mod code;
pub mod equiv;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod format;
pub mod geometry;
pub mod group;
pub mod matrix;
pub mod pointset;
pub mod projectivity;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::Space;
pub use pointset::PointSet;
