//! Colored instances and their Kempe-chain structure.
//!
//! A [`ColoredInstance`] bundles a graph, a proper coloring (partition
//! into anticliques), and a transversal (one representative per class).
//! Construction validates everything eagerly: an invalid instance cannot
//! exist, so downstream code never re-checks coloring properness.
//!
//! A *Kempe chain* is a connected component of the subgraph induced by
//! the union of two color classes. The derived graph [`HGraph`] lives on
//! the class indices and joins two classes when their transversal
//! representatives share a chain. For a base edge `xy` of a doubled
//! instance the union of the two classes induces a path on four vertices
//! between the transversal representatives; this crate measures chains by
//! vertex and edge counts and never by "length" to avoid ambiguity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{graph_from_doc, CodecError, GraphDoc};
use crate::graph::{Graph, VertexSet};

/// Hard cap on the number of color classes. Every instance in scope has
/// at most ten classes before doubling; the cap keeps bitmask space and
/// pair enumeration trivially small.
pub const MAX_CLASSES: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error(transparent)]
    Codec(#[from] CodecError),
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> InstanceError {
    InstanceError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

/// A proper coloring: a partition of the vertex set into anticliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    classes: Vec<VertexSet>,
    class_of: Vec<usize>,
}

impl Coloring {
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, i: usize) -> &VertexSet {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }
}

/// One representative vertex per color class, indexed by class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    reps: Vec<usize>,
}

impl Transversal {
    pub fn rep(&self, class: usize) -> usize {
        self.reps[class]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn contains(&self, v: usize) -> bool {
        self.reps.contains(&v)
    }
}

/// A graph with a validated proper coloring and transversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredInstance {
    pub graph: Graph,
    coloring: Coloring,
    transversal: Transversal,
}

impl ColoredInstance {
    /// Validates and assembles an instance. Error paths name the
    /// offending component (`classes[i]`, `transversal[i]`, ...).
    pub fn new(
        graph: Graph,
        classes: Vec<Vec<usize>>,
        transversal: Vec<usize>,
    ) -> Result<Self, InstanceError> {
        let n = graph.n();
        if classes.len() > MAX_CLASSES {
            return Err(invalid(
                "classes",
                format!("at most {MAX_CLASSES} classes supported, got {}", classes.len()),
            ));
        }
        let mut class_of = vec![usize::MAX; n];
        let mut sets = Vec::with_capacity(classes.len());
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(invalid(format!("classes[{i}]"), "class is empty"));
            }
            let mut set = VertexSet::empty(n);
            for (j, &v) in class.iter().enumerate() {
                if v >= n {
                    return Err(invalid(
                        format!("classes[{i}][{j}]"),
                        format!("vertex {v} out of range for n = {n}"),
                    ));
                }
                if class_of[v] != usize::MAX {
                    return Err(invalid(
                        format!("classes[{i}][{j}]"),
                        format!("vertex {v} already belongs to class {}", class_of[v]),
                    ));
                }
                class_of[v] = i;
                set.insert(v);
            }
            sets.push(set);
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(invalid("classes", format!("vertex {v} belongs to no class")));
        }
        for (i, set) in sets.iter().enumerate() {
            for u in set.iter() {
                for &w in graph.neighbors(u) {
                    if w > u && set.contains(w) {
                        return Err(invalid(
                            format!("classes[{i}]"),
                            format!("edge {{{u}, {w}}} lies inside the class"),
                        ));
                    }
                }
            }
        }
        if transversal.len() != sets.len() {
            return Err(invalid(
                "transversal",
                format!("expected {} representatives, got {}", sets.len(), transversal.len()),
            ));
        }
        for (i, &t) in transversal.iter().enumerate() {
            if t >= n || class_of[t] != i {
                return Err(invalid(
                    format!("transversal[{i}]"),
                    format!("vertex {t} is not a member of class {i}"),
                ));
            }
        }
        Ok(ColoredInstance {
            graph,
            coloring: Coloring {
                classes: sets,
                class_of,
            },
            transversal: Transversal { reps: transversal },
        })
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn k(&self) -> usize {
        self.coloring.k()
    }

    /// Union of two color classes as a vertex set.
    pub fn class_pair_union(&self, a: usize, b: usize) -> VertexSet {
        self.coloring.class(a).union(self.coloring.class(b))
    }

    /// Whether the representatives of classes `a` and `b` lie in a common
    /// Kempe chain.
    pub fn reps_share_chain(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        let union = self.class_pair_union(a, b);
        let ra = self.transversal.rep(a);
        let rb = self.transversal.rep(b);
        self.graph
            .components_within(&union)
            .iter()
            .any(|c| c.contains(ra) && c.contains(rb))
    }

    /// Restricts the instance to `keep`, dropping classes that become
    /// empty. Fails if a surviving class loses its representative.
    pub fn restrict(&self, keep: &VertexSet) -> Result<Restriction, InstanceError> {
        let (graph, old_of_new) = self.graph.induced(keep);
        let mut new_of_old = vec![usize::MAX; self.graph.n()];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut classes = Vec::new();
        let mut transversal = Vec::new();
        let mut class_map = vec![None; self.k()];
        for (i, slot) in class_map.iter_mut().enumerate() {
            let members: Vec<usize> = self
                .coloring
                .class(i)
                .iter()
                .filter(|&v| keep.contains(v))
                .map(|v| new_of_old[v])
                .collect();
            if members.is_empty() {
                continue;
            }
            let rep = self.transversal.rep(i);
            if !keep.contains(rep) {
                return Err(invalid(
                    format!("classes[{i}]"),
                    "restriction keeps class members but drops its representative",
                ));
            }
            *slot = Some(classes.len());
            classes.push(members);
            transversal.push(new_of_old[rep]);
        }
        let instance = ColoredInstance::new(graph, classes, transversal)?;
        Ok(Restriction {
            instance,
            old_of_new,
            class_map,
        })
    }
}

/// An instance restricted to a vertex subset, with the maps back.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub instance: ColoredInstance,
    /// `old_of_new[new] = old` over vertices.
    pub old_of_new: Vec<usize>,
    /// `class_map[old] = Some(new)` for surviving classes.
    pub class_map: Vec<Option<usize>>,
}

/// One Kempe chain: a connected component of the union of two classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KempeChain {
    pub class_a: usize,
    pub class_b: usize,
    pub vertices: VertexSet,
}

impl KempeChain {
    /// A chain is trivial when it spans no edge.
    pub fn is_trivial(&self) -> bool {
        self.vertices.len() <= 1
    }
}

/// The derived graph on class indices: `{i, j}` is an edge exactly when
/// the representatives of classes `i` and `j` share a Kempe chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGraph {
    pub graph: Graph,
}

impl HGraph {
    pub fn k(&self) -> usize {
        self.graph.n()
    }

    pub fn is_complete(&self) -> bool {
        let k = self.k();
        self.graph.edge_count() == k * k.saturating_sub(1) / 2
    }
}

/// All Kempe chains of the instance, one entry per connected component of
/// each class-pair union. Trivial (edgeless) components are excluded
/// unless `include_trivial` is set; the derived-graph adjacency only ever
/// depends on nontrivial components containing both representatives.
pub fn kempe_chains(inst: &ColoredInstance, include_trivial: bool) -> Vec<KempeChain> {
    let k = inst.k();
    let mut out = Vec::new();
    for a in 0..k {
        for b in (a + 1)..k {
            let union = inst.class_pair_union(a, b);
            for comp in inst.graph.components_within(&union) {
                let chain = KempeChain {
                    class_a: a,
                    class_b: b,
                    vertices: comp,
                };
                if include_trivial || !chain.is_trivial() {
                    out.push(chain);
                }
            }
        }
    }
    out
}

/// Builds the derived graph of the instance.
pub fn h_graph(inst: &ColoredInstance) -> HGraph {
    let k = inst.k();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in (a + 1)..k {
            if inst.reps_share_chain(a, b) {
                edges.push((a, b));
            }
        }
    }
    HGraph {
        graph: Graph::new(k, &edges).expect("derived graph is simple"),
    }
}

/// Whether every pair of classes induces a connected subgraph, together
/// with the number of connected pairs.
pub fn is_kempe_coloring(inst: &ColoredInstance) -> (bool, usize) {
    let k = inst.k();
    let mut connected_pairs = 0;
    for a in 0..k {
        for b in (a + 1)..k {
            let union = inst.class_pair_union(a, b);
            if inst.graph.components_within(&union).len() == 1 {
                connected_pairs += 1;
            }
        }
    }
    (connected_pairs == k * k.saturating_sub(1) / 2, connected_pairs)
}

/// Instance transformations that preserve validity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transform {
    /// Adds the edge between the representatives of two distinct classes
    /// (idempotent when already present). Afterward the two classes share
    /// a Kempe chain.
    AddTransversalEdge(usize, usize),
    /// Disjoint union with a complete graph on `m` fresh vertices, each
    /// forming a new singleton class whose vertex joins the transversal.
    DisjointClique(usize),
}

pub fn transform_instance(
    inst: &ColoredInstance,
    transform: &Transform,
) -> Result<ColoredInstance, InstanceError> {
    match *transform {
        Transform::AddTransversalEdge(i, j) => {
            if i == j {
                return Err(invalid(
                    "transform",
                    format!("cannot add an edge inside class {i}"),
                ));
            }
            if i >= inst.k() || j >= inst.k() {
                return Err(invalid("transform", format!("class index out of range: {}", i.max(j))));
            }
            let (u, v) = (inst.transversal.rep(i), inst.transversal.rep(j));
            let graph = if inst.graph.has_edge(u, v) {
                inst.graph.clone()
            } else {
                inst.graph.with_edge(u, v).expect("edge endpoints validated")
            };
            let classes = inst
                .coloring
                .classes()
                .iter()
                .map(VertexSet::to_vec)
                .collect();
            ColoredInstance::new(graph, classes, inst.transversal.reps().to_vec())
        }
        Transform::DisjointClique(m) => {
            let n = inst.graph.n();
            let mut edges = inst.graph.edges();
            for a in 0..m {
                for b in (a + 1)..m {
                    edges.push((n + a, n + b));
                }
            }
            let graph = Graph::new(n + m, &edges).map_err(|e| invalid("transform", e.to_string()))?;
            let mut classes: Vec<Vec<usize>> = inst
                .coloring
                .classes()
                .iter()
                .map(VertexSet::to_vec)
                .collect();
            let mut transversal = inst.transversal.reps().to_vec();
            for a in 0..m {
                classes.push(vec![n + a]);
                transversal.push(n + a);
            }
            ColoredInstance::new(graph, classes, transversal)
        }
    }
}

/// Serde shape of the JSON instance document.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub graph: GraphDoc,
    pub classes: Vec<Vec<usize>>,
    pub transversal: Vec<usize>,
}

impl InstanceDoc {
    pub fn from_instance(inst: &ColoredInstance) -> Self {
        InstanceDoc {
            graph: GraphDoc::from_graph(&inst.graph),
            classes: inst.coloring.classes().iter().map(VertexSet::to_vec).collect(),
            transversal: inst.transversal.reps().to_vec(),
        }
    }
}

pub fn instance_from_json(text: &str) -> Result<ColoredInstance, InstanceError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| CodecError::JsonSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let graph = graph_from_doc(&doc.graph)?;
    ColoredInstance::new(graph, doc.classes, doc.transversal)
}

pub fn instance_to_json(inst: &ColoredInstance) -> String {
    serde_json::to_string_pretty(&InstanceDoc::from_instance(inst)).expect("instance serializes")
}
