//! Exact arithmetic on even integral lattices: roots, Weyl chambers, elliptic
//! fibration classes, isometries and their Salem factors, and word searches
//! over parabolic generators.

pub mod dynamics;
pub mod error;
pub mod fibrations;
pub mod io;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod registry;
pub mod roots;
pub mod salem;

pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeVector, Sublattice};
