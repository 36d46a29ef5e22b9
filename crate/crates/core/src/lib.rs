//! Flows on signed eulerian multigraphs.
//!
//! This crate classifies connected signed eulerian multigraphs by the least
//! `k` admitting a nowhere-zero integer `k`-flow (the *flow number*): the
//! verdict is one of *no flow at all*, `2`, `3`, or `4`, and every verdict
//! comes with a machine-checkable certificate — a bidirected orientation and
//! edge values satisfying Kirchhoff's law at every vertex, together with the
//! decomposition objects the construction used. It also decides existence of
//! nowhere-zero flows valued in `Z` or in finite products of cyclic groups,
//! and ships an independent brute-force oracle for cross-validation at small
//! scale.
//!
//! Modules, bottom up:
//!
//! * [`graph`] — signed multigraphs, switching, balance, small predicates;
//! * [`groups`] — value groups (`Z` and products of cyclic groups);
//! * [`flows`] — bidirected orientations, flows, verification, trail sends;
//! * [`decompose`] — eulerian trails, circuit decompositions, odd triples,
//!   even covers;
//! * [`classify`] — the flow-number cascade, certificates, signed circuit
//!   covers, group-valued flows;
//! * [`oracle`] — exhaustive enumeration and brute-force searches;
//! * [`generators`] — small named prototype graphs;
//! * [`io`] — text formats for graphs, flows, and reports.

pub mod classify;
pub mod decompose;
pub mod error;
pub mod flows;
pub mod generators;
pub mod graph;
pub mod groups;
pub mod io;
pub mod oracle;

pub use error::{Error, Result};
pub use graph::{Bipartition, Parity, Part, Sign, SignedMultigraph, Trail};
