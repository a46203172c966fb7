//! Exact computations on the divisor lattice `D_N` viewed as a site:
//! Heyting operations, Grothendieck topologies, sheaves, the subobject
//! classifier, and posets of concrete objects isomorphic to `D_N`.

pub mod cli;
pub mod equiv;
pub mod error;
pub mod heyting;
pub mod lattice;
pub mod omega;
pub mod presheaf;
pub mod sieve;
pub mod topology;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::Lattice;
pub use presheaf::Presheaf;
pub use sieve::{FiniteOrder, Sieve};
pub use topology::{Topology, TopologyKind};
