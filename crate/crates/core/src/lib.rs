//! Exact combinatorial invariants of lattice polytopes.
//!
//! Everything is computed by exact integer and rational arithmetic:
//! lattice point enumeration of dilates, Ehrhart polynomials, the codegree,
//! normality with explicit non-normality witnesses, cohomology tables of
//! toric line bundles via lattice-point counts, autoregularity, and a
//! degree-capped probe of quadratic generation for toric ideals.

pub mod cohomology;
pub mod counting;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod normality;
pub mod syzygy;

pub use error::{Error, Result};
pub use geometry::{Containment, HalfSpace, LatticePoint, Polytope};
