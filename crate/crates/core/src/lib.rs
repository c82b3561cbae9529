//! Spherical skeletons, the ℘-invariant and G/H-reflexive polytope checks.
//!
//! All arithmetic is exact (`BigRational`).

pub mod document;
pub mod fano;
pub mod lp_solver;
pub mod p_invariant;
pub mod rational_geometry;
pub mod root_systems;
pub mod skeleton;
pub mod spherical_roots;
pub mod symmetric_catalog;
