//! Rooted certificates: representation, verification, and exact search.
//!
//! A rooted certificate assigns to each transversal vertex `t` a bag
//! `V_t` containing `t`, such that the bags are pairwise disjoint, each
//! induces a connected subgraph, and for every pattern edge `st` some
//! graph edge joins `V_s` and `V_t`. The verifier reports every violated
//! condition with a witness; it is the single oracle every other
//! component defers to.
//!
//! The solver decides existence by growing bags from their roots: the
//! state assigns each vertex to a bag, to "unused", or leaves it
//! undecided, and three propagation rules prune assignments that cannot
//! extend to a certificate. Search order is deterministic, so verdicts
//! and certificates are reproducible.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::VertexSet;
use crate::kempe::{ColoredInstance, InstanceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("pattern edge {{{a}, {b}}} is not an edge of the derived graph")]
    PatternEdgeNotInH { a: usize, b: usize },
    #[error("pattern class index {index} out of range for {k} classes")]
    PatternClassOutOfRange { index: usize, k: usize },
    #[error("pattern edge {{{a}, {a}}} is a loop", a = .a)]
    PatternLoop { a: usize },
    #[error("classes {a} and {b} share no Kempe chain")]
    MissingRequiredChain { a: usize, b: usize },
    #[error("budget is malformed: {0}")]
    MalformedBudget(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// The pattern to embed: an edge set over class indices, required to be
/// a spanning subgraph of the instance's derived graph (isolated pattern
/// vertices are always allowed, so every class owns a pattern vertex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetPattern {
    k: usize,
    edges: Vec<(usize, usize)>,
}

impl TargetPattern {
    /// Validates the edge list against the instance: indices in range,
    /// no loops, and every edge backed by a shared Kempe chain.
    pub fn new(
        inst: &ColoredInstance,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, CertificateError> {
        let k = inst.k();
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(CertificateError::PatternLoop { a });
            }
            let (a, b) = (a.min(b), a.max(b));
            if b >= k {
                return Err(CertificateError::PatternClassOutOfRange { index: b, k });
            }
            if !inst.reps_share_chain(a, b) {
                return Err(CertificateError::PatternEdgeNotInH { a, b });
            }
            if !normalized.contains(&(a, b)) {
                normalized.push((a, b));
            }
        }
        normalized.sort_unstable();
        Ok(TargetPattern { k, edges: normalized })
    }

    /// The full derived graph as a pattern.
    pub fn full(inst: &ColoredInstance) -> Self {
        let h = crate::kempe::h_graph(inst);
        TargetPattern {
            k: inst.k(),
            edges: h.graph.edges(),
        }
    }

    /// Restricts a pattern-shaped graph (vertices = class indices) to a
    /// pattern, validating against the instance.
    pub fn from_graph(
        inst: &ColoredInstance,
        pattern: &crate::graph::Graph,
    ) -> Result<Self, CertificateError> {
        if pattern.n() != inst.k() {
            return Err(CertificateError::PatternClassOutOfRange {
                index: pattern.n().saturating_sub(1),
                k: inst.k(),
            });
        }
        TargetPattern::new(inst, pattern.edges())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        self.edges.binary_search(&(a, b)).is_ok()
    }

    pub fn degree(&self, a: usize) -> usize {
        self.edges.iter().filter(|&&(x, y)| x == a || y == a).count()
    }
}

/// Bags keyed by their root (a transversal vertex).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootedCertificate {
    bags: BTreeMap<usize, VertexSet>,
}

impl RootedCertificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_bag(&mut self, root: usize, bag: VertexSet) {
        self.bags.insert(root, bag);
    }

    pub fn bag(&self, root: usize) -> Option<&VertexSet> {
        self.bags.get(&root)
    }

    pub fn bags(&self) -> &BTreeMap<usize, VertexSet> {
        &self.bags
    }

    /// Total number of vertices across all bags.
    pub fn total_size(&self) -> usize {
        self.bags.values().map(VertexSet::len).sum()
    }
}

/// Serde shape of the certificate JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub bags: BTreeMap<String, Vec<usize>>,
}

impl CertificateDoc {
    pub fn from_certificate(cert: &RootedCertificate) -> Self {
        CertificateDoc {
            bags: cert
                .bags
                .iter()
                .map(|(root, bag)| (root.to_string(), bag.to_vec()))
                .collect(),
        }
    }

    pub fn into_certificate(self, universe: usize) -> Result<RootedCertificate, InstanceError> {
        let mut cert = RootedCertificate::new();
        for (key, members) in self.bags {
            let root: usize = key.parse().map_err(|_| InstanceError::Invalid {
                path: format!("bags[{key:?}]"),
                message: "bag key is not a vertex index".to_string(),
            })?;
            for &v in &members {
                if v >= universe {
                    return Err(InstanceError::Invalid {
                        path: format!("bags[{key:?}]"),
                        message: format!("vertex {v} out of range for n = {universe}"),
                    });
                }
            }
            cert.insert_bag(root, VertexSet::from_iter(universe, members));
        }
        Ok(cert)
    }
}

pub fn certificate_to_json(cert: &RootedCertificate) -> String {
    serde_json::to_string_pretty(&CertificateDoc::from_certificate(cert))
        .expect("certificate serializes")
}

pub fn certificate_from_json(
    text: &str,
    universe: usize,
) -> Result<RootedCertificate, InstanceError> {
    let doc: CertificateDoc =
        serde_json::from_str(text).map_err(|e| crate::codec::CodecError::JsonSyntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    doc.into_certificate(universe)
}

/// A violated certificate condition, with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    MissingBag { root: usize },
    UnknownRoot { root: usize },
    RootNotInBag { root: usize },
    EmptyBag { root: usize },
    OverlappingBags { vertex: usize, first_root: usize, second_root: usize },
    DisconnectedBag { root: usize, pieces: Vec<Vec<usize>> },
    UncoveredPatternEdge { class_a: usize, class_b: usize },
}

/// Checks all four certificate conditions and reports every violation.
/// An empty result means the certificate is clean.
pub fn verify(
    inst: &ColoredInstance,
    pattern: &TargetPattern,
    cert: &RootedCertificate,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    let n = inst.graph.n();
    let reps = inst.transversal().reps();

    for &root in cert.bags().keys() {
        if !reps.contains(&root) {
            violations.push(Violation::UnknownRoot { root });
        }
    }

    let mut owner: Vec<Option<usize>> = vec![None; n];
    for &root in reps.iter().take(pattern.k()) {
        let Some(bag) = cert.bag(root) else {
            violations.push(Violation::MissingBag { root });
            continue;
        };
        if bag.is_empty() {
            violations.push(Violation::EmptyBag { root });
            continue;
        }
        if !bag.contains(root) {
            violations.push(Violation::RootNotInBag { root });
        }
        for v in bag.iter() {
            match owner[v] {
                Some(prev) => violations.push(Violation::OverlappingBags {
                    vertex: v,
                    first_root: prev,
                    second_root: root,
                }),
                None => owner[v] = Some(root),
            }
        }
        let pieces = inst.graph.components_within(bag);
        if pieces.len() > 1 {
            violations.push(Violation::DisconnectedBag {
                root,
                pieces: pieces.iter().map(VertexSet::to_vec).collect(),
            });
        }
    }

    for &(a, b) in pattern.edges() {
        let (Some(bag_a), Some(bag_b)) = (cert.bag(reps[a]), cert.bag(reps[b])) else {
            continue; // already reported as missing
        };
        let covered = bag_a
            .iter()
            .any(|u| inst.graph.neighbors(u).iter().any(|&w| bag_b.contains(w)));
        if !covered {
            violations.push(Violation::UncoveredPatternEdge { class_a: a, class_b: b });
        }
    }

    violations
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Sat,
    Unsat,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnsatKind {
    Exhaustive,
    Counting,
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub max_depth: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug)]
pub struct SolveVerdict {
    pub status: SolveStatus,
    pub certificate: Option<RootedCertificate>,
    pub unsat_kind: Option<UnsatKind>,
    pub stats: SolveStats,
}

impl SolveVerdict {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct VerdictDoc<'a> {
            status: SolveStatus,
            #[serde(skip_serializing_if = "Option::is_none")]
            certificate: Option<CertificateDoc>,
            #[serde(skip_serializing_if = "Option::is_none")]
            unsat_kind: Option<UnsatKind>,
            stats: &'a SolveStats,
        }
        serde_json::to_string_pretty(&VerdictDoc {
            status: self.status,
            certificate: self.certificate.as_ref().map(CertificateDoc::from_certificate),
            unsat_kind: self.unsat_kind,
            stats: &self.stats,
        })
        .expect("verdict serializes")
    }
}

/// Node, time, and pruning configuration for the solver. The pruning
/// toggles exist so tests can assert that disabling any single rule
/// changes node counts but never verdicts.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_nodes: u64,
    pub max_time: Duration,
    pub prune_connectivity: bool,
    pub prune_size_force: bool,
    pub prune_reachability: bool,
    /// Upper bound on worker threads; the current engine explores the
    /// tree sequentially, so any positive value selects one worker.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_nodes: 100_000_000,
            max_time: Duration::from_secs(300),
            prune_connectivity: true,
            prune_size_force: true,
            prune_reachability: true,
            threads: 1,
        }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<(), CertificateError> {
        if self.max_nodes == 0 {
            return Err(CertificateError::MalformedBudget("max_nodes must be positive".into()));
        }
        if self.max_time.is_zero() {
            return Err(CertificateError::MalformedBudget("max_time must be positive".into()));
        }
        if self.threads == 0 {
            return Err(CertificateError::MalformedBudget("threads must be positive".into()));
        }
        Ok(())
    }
}

const UNDECIDED: u8 = u8::MAX;
const UNUSED: u8 = u8::MAX - 1;

struct Searcher<'a> {
    inst: &'a ColoredInstance,
    pattern: &'a TargetPattern,
    options: &'a SolveOptions,
    roots: Vec<usize>,
    assign: Vec<u8>,
    nodes: u64,
    max_depth: usize,
    started: Instant,
    deadline_hit: bool,
}

enum SearchOutcome {
    Found(RootedCertificate),
    Exhausted,
    OverBudget,
}

impl<'a> Searcher<'a> {
    fn new(inst: &'a ColoredInstance, pattern: &'a TargetPattern, options: &'a SolveOptions) -> Self {
        let roots = inst.transversal().reps().to_vec();
        let mut assign = vec![UNDECIDED; inst.graph.n()];
        for (class, &root) in roots.iter().enumerate() {
            assign[root] = class as u8;
        }
        Searcher {
            inst,
            pattern,
            options,
            roots,
            assign,
            nodes: 0,
            max_depth: 0,
            started: Instant::now(),
            deadline_hit: false,
        }
    }

    fn bag_members(&self, class: usize) -> Vec<usize> {
        (0..self.assign.len())
            .filter(|&v| self.assign[v] == class as u8)
            .collect()
    }

    fn edge_satisfied(&self, a: usize, b: usize) -> bool {
        let g = &self.inst.graph;
        (0..self.assign.len())
            .filter(|&v| self.assign[v] == a as u8)
            .any(|u| g.neighbors(u).iter().any(|&w| self.assign[w] == b as u8))
    }

    /// Rule (a): every bag must stay connectable through undecided
    /// vertices.
    fn connectivity_ok(&self) -> bool {
        let g = &self.inst.graph;
        let n = g.n();
        for class in 0..self.pattern.k() {
            let members = self.bag_members(class);
            if members.len() <= 1 {
                continue;
            }
            let mut allowed = VertexSet::empty(n);
            for v in 0..n {
                if self.assign[v] == class as u8 || self.assign[v] == UNDECIDED {
                    allowed.insert(v);
                }
            }
            let mut reached = VertexSet::empty(n);
            let mut queue = vec![members[0]];
            reached.insert(members[0]);
            while let Some(v) = queue.pop() {
                for &w in g.neighbors(v) {
                    if allowed.contains(w) && !reached.contains(w) {
                        reached.insert(w);
                        queue.push(w);
                    }
                }
            }
            if members.iter().any(|&m| !reached.contains(m)) {
                return false;
            }
        }
        true
    }

    /// Rule (b): every unsatisfied pattern edge forces at least one more
    /// vertex into one of its two bags; a set of vertex-disjoint forced
    /// edges therefore needs as many distinct undecided vertices.
    fn size_force_ok(&self) -> bool {
        let undecided = self.assign.iter().filter(|&&a| a == UNDECIDED).count();
        let mut used_classes = vec![false; self.pattern.k()];
        let mut required = 0;
        for &(a, b) in self.pattern.edges() {
            if used_classes[a] || used_classes[b] || self.edge_satisfied(a, b) {
                continue;
            }
            used_classes[a] = true;
            used_classes[b] = true;
            required += 1;
        }
        required <= undecided
    }

    /// Rule (c): for each unsatisfied pattern edge, the two bags must be
    /// joinable by a path through undecided vertices.
    fn reachability_ok(&self) -> bool {
        let g = &self.inst.graph;
        let n = g.n();
        for &(a, b) in self.pattern.edges() {
            if self.edge_satisfied(a, b) {
                continue;
            }
            let mut allowed = VertexSet::empty(n);
            let mut targets = VertexSet::empty(n);
            let mut queue = Vec::new();
            let mut reached = VertexSet::empty(n);
            for v in 0..n {
                match self.assign[v] {
                    x if x == a as u8 => {
                        allowed.insert(v);
                        reached.insert(v);
                        queue.push(v);
                    }
                    x if x == b as u8 => {
                        allowed.insert(v);
                        targets.insert(v);
                    }
                    x if x == UNDECIDED => {
                        allowed.insert(v);
                    }
                    _ => {}
                }
            }
            let mut hit = false;
            while let Some(v) = queue.pop() {
                if hit {
                    break;
                }
                for &w in g.neighbors(v) {
                    if targets.contains(w) {
                        hit = true;
                        break;
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

    fn prune(&self) -> bool {
        (self.options.prune_connectivity && !self.connectivity_ok())
            || (self.options.prune_size_force && !self.size_force_ok())
            || (self.options.prune_reachability && !self.reachability_ok())
    }

    fn over_budget(&mut self) -> bool {
        if self.nodes > self.options.max_nodes {
            return true;
        }
        if self.nodes.is_multiple_of(1024) && self.started.elapsed() > self.options.max_time {
            self.deadline_hit = true;
            return true;
        }
        self.deadline_hit
    }

    fn pick_branch_vertex(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None; // (score, vertex)
        for v in 0..self.assign.len() {
            if self.assign[v] != UNDECIDED {
                continue;
            }
            let mut score = 0;
            for &(a, b) in self.pattern.edges() {
                if self.edge_satisfied(a, b) {
                    continue;
                }
                let touches = self.inst.graph.neighbors(v).iter().any(|&w| {
                    self.assign[w] == a as u8 || self.assign[w] == b as u8
                });
                if touches {
                    score += 1;
                }
            }
            match best {
                Some((s, u)) if (score, std::cmp::Reverse(v)) <= (s, std::cmp::Reverse(u)) => {}
                _ => best = Some((score, v)),
            }
        }
        best.map(|(_, v)| v)
    }

    fn leaf_certificate(&self) -> Option<RootedCertificate> {
        // At a leaf every pattern edge must be directly covered.
        for &(a, b) in self.pattern.edges() {
            if !self.edge_satisfied(a, b) {
                return None;
            }
        }
        let n = self.inst.graph.n();
        let mut cert = RootedCertificate::new();
        for class in 0..self.pattern.k() {
            let bag = VertexSet::from_iter(n, self.bag_members(class));
            let sub = self.inst.graph.components_within(&bag);
            if sub.len() != 1 {
                return None;
            }
            cert.insert_bag(self.roots[class], bag);
        }
        Some(cert)
    }

    fn dfs(&mut self, depth: usize) -> SearchOutcome {
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth);
        if self.over_budget() {
            return SearchOutcome::OverBudget;
        }
        if self.prune() {
            return SearchOutcome::Exhausted;
        }
        let Some(v) = self.pick_branch_vertex() else {
            return match self.leaf_certificate() {
                Some(cert) => SearchOutcome::Found(cert),
                None => SearchOutcome::Exhausted,
            };
        };
        for value in (0..self.pattern.k() as u8).chain([UNUSED]) {
            self.assign[v] = value;
            match self.dfs(depth + 1) {
                SearchOutcome::Exhausted => {}
                other => {
                    self.assign[v] = UNDECIDED;
                    return other;
                }
            }
        }
        self.assign[v] = UNDECIDED;
        SearchOutcome::Exhausted
    }
}

/// Decides whether the instance admits a rooted certificate for the
/// pattern. SAT verdicts carry a certificate that has already passed the
/// verifier; UNSAT verdicts are produced only by exhausted search.
pub fn solve(
    inst: &ColoredInstance,
    pattern: &TargetPattern,
    options: &SolveOptions,
) -> Result<SolveVerdict, CertificateError> {
    options.validate()?;
    let mut searcher = Searcher::new(inst, pattern, options);
    let outcome = searcher.dfs(0);
    let stats = SolveStats {
        nodes: searcher.nodes,
        max_depth: searcher.max_depth,
        elapsed_ms: searcher.started.elapsed().as_millis(),
    };
    let verdict = match outcome {
        SearchOutcome::Found(cert) => {
            let violations = verify(inst, pattern, &cert);
            assert!(
                violations.is_empty(),
                "solver produced an invalid certificate: {violations:?}"
            );
            SolveVerdict {
                status: SolveStatus::Sat,
                certificate: Some(cert),
                unsat_kind: None,
                stats,
            }
        }
        SearchOutcome::Exhausted => SolveVerdict {
            status: SolveStatus::Unsat,
            certificate: None,
            unsat_kind: Some(UnsatKind::Exhaustive),
            stats,
        },
        SearchOutcome::OverBudget => SolveVerdict {
            status: SolveStatus::BudgetExceeded,
            certificate: None,
            unsat_kind: None,
            stats,
        },
    };
    Ok(verdict)
}

/// A SAT-preserving reduction of an instance, with the map back to the
/// original vertex indices.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub instance: ColoredInstance,
    /// `to_original[new] = old`.
    pub to_original: Vec<usize>,
}

impl Reduction {
    /// Translates a certificate of the reduced instance into original
    /// coordinates. Valid because the reduced instance is a subgraph of
    /// the original on the retained vertices: bags stay connected and
    /// adjacent after embedding.
    pub fn lift(&self, cert: &RootedCertificate, original_n: usize) -> RootedCertificate {
        let mut lifted = RootedCertificate::new();
        for (&root, bag) in cert.bags() {
            lifted.insert_bag(
                self.to_original[root],
                VertexSet::from_iter(original_n, bag.iter().map(|v| self.to_original[v])),
            );
        }
        lifted
    }
}

/// Keeps, for every pattern edge, a single two-colored path between the
/// two representatives (the breadth-first shortest one), drops all
/// vertices on no retained path, and keeps only path edges. Any
/// certificate of the result is a certificate of the original; the
/// converse does not hold, so unsatisfiability may only ever be claimed
/// on the unreduced instance.
pub fn reduce_for_sat(
    inst: &ColoredInstance,
    pattern: &TargetPattern,
) -> Result<Reduction, CertificateError> {
    let n = inst.graph.n();
    let mut keep = VertexSet::empty(n);
    for &rep in inst.transversal().reps() {
        keep.insert(rep);
    }
    let mut kept_edges: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in pattern.edges() {
        let path = two_colored_path(inst, a, b)
            .ok_or(CertificateError::MissingRequiredChain { a, b })?;
        for window in path.windows(2) {
            let (u, v) = (window[0].min(window[1]), window[0].max(window[1]));
            if !kept_edges.contains(&(u, v)) {
                kept_edges.push((u, v));
            }
        }
        for v in path {
            keep.insert(v);
        }
    }

    let old_of_new: Vec<usize> = keep.iter().collect();
    let mut new_of_old = vec![usize::MAX; n];
    for (new, &old) in old_of_new.iter().enumerate() {
        new_of_old[old] = new;
    }
    let edges: Vec<(usize, usize)> = kept_edges
        .iter()
        .map(|&(u, v)| (new_of_old[u], new_of_old[v]))
        .collect();
    let graph = crate::graph::Graph::new(old_of_new.len(), &edges)
        .expect("path union is a simple graph");
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut transversal = Vec::new();
    for class in 0..inst.k() {
        let members: Vec<usize> = inst
            .coloring()
            .class(class)
            .iter()
            .filter(|&v| keep.contains(v))
            .map(|v| new_of_old[v])
            .collect();
        classes.push(members);
        transversal.push(new_of_old[inst.transversal().rep(class)]);
    }
    let instance = ColoredInstance::new(graph, classes, transversal)?;
    Ok(Reduction {
        instance,
        to_original: old_of_new,
    })
}

/// Breadth-first shortest path between the representatives of two
/// classes inside the union of the classes; `None` when they share no
/// chain. Deterministic through ascending neighbor order.
pub fn two_colored_path(inst: &ColoredInstance, a: usize, b: usize) -> Option<Vec<usize>> {
    let union = inst.class_pair_union(a, b);
    let start = inst.transversal().rep(a);
    let goal = inst.transversal().rep(b);
    let n = inst.graph.n();
    let mut parent = vec![usize::MAX; n];
    let mut seen = VertexSet::empty(n);
    seen.insert(start);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if v == goal {
            let mut path = vec![goal];
            let mut cur = goal;
            while cur != start {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in inst.graph.neighbors(v) {
            if union.contains(w) && !seen.contains(w) {
                seen.insert(w);
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}
