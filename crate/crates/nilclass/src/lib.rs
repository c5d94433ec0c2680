//! Exact symbolic toolkit for verifying classification data of low-dimensional
//! nilpotent weakly associative and symmetric Leibniz algebras.
//!
//! Everything is computed over the exact field Q(i)(p1,...,pm): identity
//! checks on structure-constant tensors, second cohomology and central
//! extensions, and degeneration / non-degeneration certificates. No floating
//! point anywhere; every answer is a proof-grade yes/no with a witness.

pub mod scalars;
pub mod linalg;
pub mod identities;
pub mod algebra;
pub mod cohomology;
pub mod degeneration;
pub mod catalog;
pub mod verify;
