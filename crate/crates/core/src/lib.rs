//! Coxeter groups, their walls and Cayley graphs, and the combinatorics of
//! right-angled-building-like complexes built from them.

pub mod automorphisms;
pub mod classification;
pub mod complexes;
pub mod coxeter;
pub mod error;
pub mod even_polytopes;
pub mod field;
pub mod walls;

pub use classification::{classify, classify_system, is_hyperbolic, is_rigid, nerve, DiagramType, SpecialSubset};
pub use coxeter::{
    enumerate_ball, enumerate_group, presets, CayleyBall, CoxeterMatrix, CoxeterSystem, GroupElement, Label,
};
pub use error::{Error, Result};
pub use walls::{Side, Wall};
