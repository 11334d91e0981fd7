//! Holomorphic Poisson cohomology of nilpotent Lie algebras with abelian
//! complex structures, computed exactly over the Gaussian rationals.

pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod expr;
pub mod field;
pub mod lie_algebra;
pub mod schouten;
pub mod spec_io;
