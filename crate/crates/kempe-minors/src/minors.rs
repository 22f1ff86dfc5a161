//! Unrooted minor containment and planarity via forbidden minors.
//!
//! [`has_minor`] runs an exact branch-and-prune search: pattern vertices
//! are seeded in descending-degree order, then bags grow lazily, one
//! adjacent vertex at a time, only when an unrealized pattern edge
//! demands it. A reachability check across undecided vertices prunes
//! dead branches, so exhaustion certifies absence. Planarity follows
//! from Wagner's characterization: a graph is planar exactly when it has
//! neither a `K_5` nor a `K_{3,3}` minor.

use serde::Serialize;
use thiserror::Error;

use crate::certificates::CertificateDoc;
use crate::generators::{family, FamilySpec};
use crate::graph::{Graph, VertexSet};
use crate::kempe::{h_graph, ColoredInstance};

pub const MINOR_PATTERN_MAX_VERTICES: usize = 8;
pub const MINOR_HOST_MAX_VERTICES: usize = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinorError {
    #[error("pattern has {n} vertices, search bound is {max}")]
    PatternTooLarge { n: usize, max: usize },
    #[error("host has {n} vertices, search bound is {max}")]
    HostTooLarge { n: usize, max: usize },
    #[error("expected exactly 5 classes, got {0}")]
    WrongClassCount(usize),
}

/// Disjoint connected bags, one per pattern vertex, with an edge of the
/// host between the bags of every pattern edge. No root constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorEmbedding {
    bags: Vec<VertexSet>,
}

impl MinorEmbedding {
    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }
}

/// Checks the three embedding conditions directly; used to gate every
/// embedding the search returns.
pub fn check_embedding(host: &Graph, pattern: &Graph, emb: &MinorEmbedding) -> bool {
    if emb.bags.len() != pattern.n() {
        return false;
    }
    for (i, bag) in emb.bags.iter().enumerate() {
        if bag.is_empty() || !host.is_connected_within(bag) {
            return false;
        }
        for other in &emb.bags[i + 1..] {
            if !bag.is_disjoint(other) {
                return false;
            }
        }
    }
    pattern.edges().iter().all(|&(a, b)| {
        emb.bags[a]
            .iter()
            .any(|u| host.neighbors(u).iter().any(|&w| emb.bags[b].contains(w)))
    })
}

struct MinorSearcher<'a> {
    host: &'a Graph,
    /// Pattern vertices in seeding order (descending degree).
    order: Vec<usize>,
    /// Pattern edges in fixed processing order.
    pattern_edges: Vec<(usize, usize)>,
    bags: Vec<VertexSet>,
    used: VertexSet,
}

impl<'a> MinorSearcher<'a> {
    fn new(host: &'a Graph, pattern: &'a Graph) -> Self {
        let mut order: Vec<usize> = (0..pattern.n()).collect();
        order.sort_by_key(|&p| (std::cmp::Reverse(pattern.degree(p)), p));
        MinorSearcher {
            host,
            order,
            pattern_edges: pattern.edges(),
            bags: vec![VertexSet::empty(host.n()); pattern.n()],
            used: VertexSet::empty(host.n()),
        }
    }

    fn edge_realized(&self, a: usize, b: usize) -> bool {
        self.bags[a]
            .iter()
            .any(|u| self.host.neighbors(u).iter().any(|&w| self.bags[b].contains(w)))
    }

    /// Every unrealized pattern edge must admit a connecting path whose
    /// interior avoids all other bags.
    fn still_feasible(&self) -> bool {
        for &(a, b) in &self.pattern_edges {
            if self.bags[a].is_empty() || self.bags[b].is_empty() || self.edge_realized(a, b) {
                continue;
            }
            let mut allowed = VertexSet::empty(self.host.n());
            for v in 0..self.host.n() {
                if !self.used.contains(v) || self.bags[a].contains(v) || self.bags[b].contains(v) {
                    allowed.insert(v);
                }
            }
            let mut reached = self.bags[a].clone();
            let mut queue: Vec<usize> = reached.iter().collect();
            let mut hit = false;
            'bfs: while let Some(v) = queue.pop() {
                for &w in self.host.neighbors(v) {
                    if self.bags[b].contains(w) {
                        hit = true;
                        break 'bfs;
                    }
                    if allowed.contains(w) && !reached.contains(w) {
                        reached.insert(w);
                        queue.push(w);
                    }
                }
            }
            if !hit {
                return false;
            }
        }
        true
    }

    fn seed(&mut self, idx: usize) -> Option<MinorEmbedding> {
        if idx == self.order.len() {
            return self.satisfy(0);
        }
        let p = self.order[idx];
        for v in 0..self.host.n() {
            if self.used.contains(v) {
                continue;
            }
            self.bags[p].insert(v);
            self.used.insert(v);
            if self.still_feasible() {
                if let Some(found) = self.seed(idx + 1) {
                    return Some(found);
                }
            }
            self.bags[p].remove(v);
            self.used.remove(v);
        }
        None
    }

    fn satisfy(&mut self, edge_idx: usize) -> Option<MinorEmbedding> {
        if edge_idx == self.pattern_edges.len() {
            return Some(MinorEmbedding {
                bags: self.bags.clone(),
            });
        }
        let (a, b) = self.pattern_edges[edge_idx];
        if self.edge_realized(a, b) {
            return self.satisfy(edge_idx + 1);
        }
        // Grow either endpoint bag by one adjacent unused vertex.
        for side in [a, b] {
            let frontier: Vec<usize> = (0..self.host.n())
                .filter(|&v| {
                    !self.used.contains(v)
                        && self.host.neighbors(v).iter().any(|&w| self.bags[side].contains(w))
                })
                .collect();
            for v in frontier {
                self.bags[side].insert(v);
                self.used.insert(v);
                if self.still_feasible() {
                    if let Some(found) = self.satisfy(edge_idx) {
                        return Some(found);
                    }
                }
                self.bags[side].remove(v);
                self.used.remove(v);
            }
        }
        None
    }
}

/// Exact minor containment: an embedding, or `None` after exhausted
/// search. Every returned embedding passes [`check_embedding`].
pub fn has_minor(host: &Graph, pattern: &Graph) -> Result<Option<MinorEmbedding>, MinorError> {
    if pattern.n() > MINOR_PATTERN_MAX_VERTICES {
        return Err(MinorError::PatternTooLarge {
            n: pattern.n(),
            max: MINOR_PATTERN_MAX_VERTICES,
        });
    }
    if host.n() > MINOR_HOST_MAX_VERTICES {
        return Err(MinorError::HostTooLarge {
            n: host.n(),
            max: MINOR_HOST_MAX_VERTICES,
        });
    }
    if pattern.n() > host.n() || pattern.edge_count() > host.edge_count() {
        return Ok(None);
    }
    let mut searcher = MinorSearcher::new(host, pattern);
    let result = searcher.seed(0);
    if let Some(ref emb) = result {
        assert!(
            check_embedding(host, pattern, emb),
            "minor search produced an invalid embedding"
        );
    }
    Ok(result)
}

/// Planarity by forbidden minors: planar exactly when neither `K_5` nor
/// `K_{3,3}` embeds.
pub fn is_planar(g: &Graph) -> Result<bool, MinorError> {
    let k5 = family(&FamilySpec::Complete(5)).expect("k5 is valid");
    if has_minor(g, &k5)?.is_some() {
        return Ok(false);
    }
    let k33 = family(&FamilySpec::CompleteBipartite(3, 3)).expect("k33 is valid");
    Ok(has_minor(g, &k33)?.is_none())
}

/// Findings on a 5-class instance: when every pair of transversal
/// vertices is joined by a two-colored path, the underlying graph should
/// be nonplanar and contain a `K_5` minor. `counterexample` flags any
/// instance where that fails.
#[derive(Clone, Debug, Serialize)]
pub struct RemarkReport {
    pub premises_ok: bool,
    pub planar: bool,
    pub has_k5_minor: bool,
    pub counterexample: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k5_embedding: Option<CertificateDoc>,
    /// Class pairs whose representatives share no chain (premise
    /// failures).
    pub missing_pairs: Vec<(usize, usize)>,
}

/// Evaluates the 5-class conclusions on one instance.
pub fn validate_remarks(inst: &ColoredInstance) -> Result<RemarkReport, MinorError> {
    if inst.k() != 5 {
        return Err(MinorError::WrongClassCount(inst.k()));
    }
    let h = h_graph(inst).graph;
    let mut missing_pairs = Vec::new();
    for a in 0..5 {
        for b in (a + 1)..5 {
            if !h.has_edge(a, b) {
                missing_pairs.push((a, b));
            }
        }
    }
    let premises_ok = missing_pairs.is_empty();
    let planar = is_planar(&inst.graph)?;
    let k5 = family(&FamilySpec::Complete(5)).expect("k5 is valid");
    let embedding = has_minor(&inst.graph, &k5)?;
    let has_k5_minor = embedding.is_some();
    let counterexample = premises_ok && (planar || !has_k5_minor);
    let k5_embedding = embedding.map(|emb| {
        let mut cert = crate::certificates::RootedCertificate::new();
        for (i, bag) in emb.bags().iter().enumerate() {
            cert.insert_bag(i, bag.clone());
        }
        CertificateDoc::from_certificate(&cert)
    });
    Ok(RemarkReport {
        premises_ok,
        planar,
        has_k5_minor,
        counterexample,
        k5_embedding,
        missing_pairs,
    })
}
