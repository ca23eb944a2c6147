//! User-facing surface of the crjet toolkit: text formats for
//! manifolds, maps, and points, the five analysis commands, and
//! deterministic JSON reports.
//!
//! Invariants
//! - identical input files, flags, and seed produce byte-identical
//!   reports (timing is opt-in precisely because it breaks this)
//! - every parse error carries the 1-based line/column of the
//!   offending token
//! - a [`geometry::ManifoldSpec`](crjet_core::geometry::ManifoldSpec)
//!   returned by the parser has already passed reality, base-membership,
//!   and genericity checks

pub mod commands;
pub mod input;
pub mod report;
