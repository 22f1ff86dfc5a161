#![forbid(unsafe_code)]

//! Kempe chains, transversal graphs, and rooted minors in small graphs.
//!
//! Given a graph `G`, a proper coloring `C`, and a transversal `T` (one
//! vertex per color class), any two classes interact through their *Kempe
//! chains*: the connected components of the subgraph induced by the union
//! of the two classes. The derived graph on `T` joins two transversal
//! vertices whenever they lie in a common chain. This crate asks and
//! answers the resulting embedding question: does `G` contain a family of
//! disjoint connected bags, one rooted at each transversal vertex, whose
//! adjacencies realize a prescribed pattern inside the derived graph?
//!
//! The pieces:
//!
//! - [`graph`]: plain undirected graphs, contraction, canonical forms,
//!   graph6 and JSON codecs.
//! - [`kempe`]: colored instances, chains, the derived graph, and
//!   instance transformations.
//! - [`zmodel`]: the doubled graph `Z(G)`, good permutations, and a
//!   counting-based unsatisfiability certifier.
//! - [`certificates`]: rooted-certificate verification and the exact
//!   backtracking solver.
//! - [`constructive`]: certificate builders for cycles, unicyclic
//!   patterns, matchable anticliques, good matchings, and the strategy
//!   ladder for small `Z(G)` instances.
//! - [`generators`]: named graph families, random path-system instances,
//!   and exhaustive small-graph enumeration.
//! - [`minors`]: unrooted minor containment, planarity via forbidden
//!   minors, and reports on 5-class instances.
//! - [`cli`]: the batch command-line driver.
//!
//! Start with the runnable examples (`cargo run --example kempe_chains`)
//! or the CLI (`cargo run --bin kempe-minors -- --help`).

pub mod certificates;
pub mod cli;
pub mod codec;
pub mod constructive;
pub mod generators;
pub mod graph;
pub mod kempe;
pub mod minors;
pub mod zmodel;

pub use graph::{Graph, VertexSet};
pub use kempe::{ColoredInstance, Coloring, HGraph, KempeChain, Transversal};
pub use certificates::{RootedCertificate, SolveVerdict, TargetPattern};
