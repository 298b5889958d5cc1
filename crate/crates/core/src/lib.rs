//! Exact combinatorics on the m-adic tree.
//!
//! * [`tree`]: words, eventually periodic branches, meets, incidences, `≺`.
//! * [`patterns`]: first-move equivalences, combs and comb generators.
//! * [`table`]: color tables and the partitions they induce.
//! * [`spaces`]: symbolic points of `K1(P)` and `K∞(Q)`, convergence and
//!   separation certificates, classical subspace criteria.
//! * [`types`]: strong-dense-types, their enumeration and color tables.
//! * [`reduction`]: reduction maps between color tables.

pub mod error;
pub mod patterns;
pub mod reduction;
pub mod spaces;
pub mod table;
pub mod tree;
pub mod types;

pub use error::{PatternError, ReductionError, SpaceError, TreeError, TypeError};
