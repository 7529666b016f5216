//! Realizability of abstract Lyapunov graphs as Smale flows on S2xS1 and S3.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: exact integer and F2 matrices, Smith normal form, determinants.
//! - [`sft`]: invariants of subshift-of-finite-type labels (the `k` invariant,
//!   irreducibility, Bowen–Franks and Parry–Sullivan data).
//! - [`graph`]: the graph model, structural validation, time reversal.
//! - [`check`]: the per-condition realizability checker.
//! - [`enumerate`]: bounded exhaustive enumeration and seeded random graphs.
//! - [`io`]: the line-oriented DSL, the JSON format and report rendering.

pub mod check;
pub mod enumerate;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod sft;

pub use check::{check, CheckReport, ConditionId, Status, Target};
pub use graph::{Edge, LyapunovGraph, Vertex, VertexLabel};
pub use linalg::{F2Matrix, IntMatrix};
