//! Exact lattice computations: integer linear algebra, finite quadratic
//! forms, lattices with embeddings, the K3/Mukai catalog and the check suite.

#![allow(clippy::needless_range_loop)]

pub mod forms;
pub mod catalog;
pub mod lattice;
pub mod linalg;
pub mod suite;
