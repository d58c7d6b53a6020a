//! Exact group cohomology of finite groups acting on integer lattices.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure and
//! deterministic: finite groups as multiplication tables, Γ-lattices and
//! equivariant maps, integer normal forms, bar-resolution cohomology in
//! degrees 0 to 3, flasque/coflasque classification, the lattice
//! constructions built on top of them, and a mod-p wedge model for
//! vanishing of Milnor symbols.
//!
//! Parallelism and memoization are injected through [`exec::Context`]; the
//! core ships a sequential executor and a no-op cache, and the std companion
//! crate provides thread-pool and mutex-backed implementations.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod classify;
pub mod cohomology;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod group;
pub mod lattice;
pub mod matrix;
pub mod normal_form;
pub mod symbols;

pub use cohomology::{CohomologyClass, CohomologyGroup};
pub use error::{Error, Result};
pub use exec::Context;
pub use group::{FiniteGroup, Subgroup};
pub use lattice::{GammaLattice, LatticeMap};
pub use matrix::IntMatrix;
