//! Scaled topological spaces and fuzzy continuity.
//!
//! The crate has two worlds. The finite world works with explicit finite
//! topologies, per-point neighbourhood assignments (scales) and total maps,
//! where every continuity notion is decided exactly. The interval world works
//! with subsets of the real line (or a few disjoint copies of it) whose
//! endpoints live in `Q(sqrt 2)`, piecewise-affine maps between them, and a
//! catalog of scales given by membership rules.

pub mod continuity;
pub mod finite_topology;
pub mod interval_world;
pub mod scales;
pub mod verifier;
