//! Skeletons of the coclass graph of p-groups of maximal class.
//!
//! Skeleton groups at depth `e` of the branch `B_p(n)` are parametrised by
//! tuples `x` over `Q_p(θ)` modulo the lattice `Γ_{n+e}`, up to the action of
//! `U ⋊ G` (units of `Z_p[θ]` twisted by the Galois group). This crate builds
//! the resulting trees, their Galois orders and Galois-tree partitions, and
//! checks structural statements about them.

pub mod action;
pub mod analysis;
pub mod cyclotomic;
pub mod equivalence;
pub mod error;
pub mod figure;
pub mod fixed;
pub mod lattice;
pub mod linalg;
pub mod modular;
pub mod oracle;
pub mod orbits;
pub mod periodicity;
pub mod render;
pub mod report;
pub mod roots;
pub mod session;
pub mod skeleton;
pub mod units;

pub use cyclotomic::{CycElem, Field, Valuation, MAX_DEGREE};
pub use error::{Error, Result};
