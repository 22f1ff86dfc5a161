//! Constructive certificate builders.
//!
//! Where the exact solver searches, these builders follow explicit
//! recipes: singleton bags plus doubled class unions for matchable
//! anticliques, contraction/peeling recursions for cycle and unicyclic
//! patterns, and a strategy ladder for doubled instances of small bases.
//! Every builder's output is gated by the verifier before it is
//! returned; builders never self-certify.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::certificates::{
    reduce_for_sat, solve, two_colored_path, verify, CertificateError, RootedCertificate,
    SolveOptions, SolveStatus, TargetPattern,
};
use crate::graph::{Graph, VertexSet};
use crate::kempe::{h_graph, ColoredInstance, InstanceError};
use crate::zmodel::{find_good_permutation, permutation_certificate, z_of, ZError, ZInstance};

/// Largest base accepted by [`z_small_certificate`].
pub const Z_SMALL_MAX_BASE: usize = 6;

#[derive(Debug, Error)]
pub enum BuilderError {
    #[error("base has {n} vertices, ladder supports at most {max}")]
    BaseTooLarge { n: usize, max: usize },
    #[error("ring must list every class exactly once")]
    RingNotSpanning,
    #[error("pattern is disconnected")]
    PatternDisconnected,
    #[error("pattern has more than one cycle")]
    PatternNotUnicyclic,
    #[error("witness invalid: {0}")]
    InvalidWitness(String),
    #[error("connectivity condition fails for matched pair ({s}, {t})")]
    WitnessConnectivity { s: usize, t: usize },
    #[error("good-matching search requires 6 pattern vertices, got {0}")]
    NotSixVertices(usize),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Z(#[from] ZError),
}

/// An anticlique of the pattern together with a matching from the other
/// pattern vertices into it, all of whose matched pairs satisfy the
/// connectivity condition `G[P ∪ Q] - t connected`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingWitness {
    /// Class indices forming the anticlique, ascending.
    pub anticlique: Vec<usize>,
    /// Matching edges `(s, t)` with `s` outside and `t` inside the
    /// anticlique, covering every outside vertex.
    pub matching: Vec<(usize, usize)>,
}

fn bags_to_certificate(inst: &ColoredInstance, bags: &[VertexSet]) -> RootedCertificate {
    let mut cert = RootedCertificate::new();
    for (class, bag) in bags.iter().enumerate() {
        cert.insert_bag(inst.transversal().rep(class), bag.clone());
    }
    cert
}

fn certificate_to_bags(inst: &ColoredInstance, cert: &RootedCertificate) -> Vec<VertexSet> {
    let mut bags = vec![VertexSet::empty(inst.graph.n()); inst.k()];
    for (&root, bag) in cert.bags() {
        bags[inst.coloring().class_of(root)] = bag.clone();
    }
    bags
}

fn gate(
    inst: &ColoredInstance,
    pattern: &TargetPattern,
    cert: RootedCertificate,
    context: &str,
) -> Result<RootedCertificate, BuilderError> {
    let violations = verify(inst, pattern, &cert);
    if violations.is_empty() {
        Ok(cert)
    } else {
        Err(BuilderError::ConstructionFailed(format!(
            "{context}: {violations:?}"
        )))
    }
}

/// Whether the connectivity condition holds for a matched pair: the
/// union of the two classes stays connected after removing the inside
/// representative.
fn pair_connectivity_ok(inst: &ColoredInstance, s: usize, t: usize) -> bool {
    let mut union = inst.class_pair_union(s, t);
    union.remove(inst.transversal().rep(t));
    inst.graph.is_connected_within(&union)
}

/// Searches all anticliques of the pattern (in ascending bitmask order)
/// for one that receives a matching from the remaining pattern vertices,
/// using only pattern edges whose matched pair passes the connectivity
/// condition. Exhaustive for the class counts in scope.
pub fn find_matchable_anticlique(
    inst: &ColoredInstance,
    pattern: &TargetPattern,
) -> Option<MatchingWitness> {
    let k = pattern.k();
    for mask in 0u32..(1u32 << k) {
        let inside: Vec<usize> = (0..k).filter(|&v| mask >> v & 1 == 1).collect();
        if inside
            .iter()
            .enumerate()
            .any(|(i, &u)| inside[i + 1..].iter().any(|&v| pattern.has_edge(u, v)))
        {
            continue;
        }
        let outside: Vec<usize> = (0..k).filter(|&v| mask >> v & 1 == 0).collect();
        if let Some(matching) = match_into(inst, pattern, &outside, &inside) {
            return Some(MatchingWitness {
                anticlique: inside,
                matching,
            });
        }
    }
    None
}

/// Maximum bipartite matching from `outside` into `inside` over the
/// admissible pattern edges; `Some` only when every outside vertex is
/// covered. Deterministic augmenting order.
fn match_into(
    inst: &ColoredInstance,
    pattern: &TargetPattern,
    outside: &[usize],
    inside: &[usize],
) -> Option<Vec<(usize, usize)>> {
    let admissible: Vec<Vec<usize>> = outside
        .iter()
        .map(|&s| {
            inside
                .iter()
                .copied()
                .filter(|&t| pattern.has_edge(s, t) && pair_connectivity_ok(inst, s, t))
                .collect()
        })
        .collect();

    let mut matched_inside: Vec<Option<usize>> = vec![None; inside.len()];
    fn augment(
        s_idx: usize,
        admissible: &[Vec<usize>],
        inside: &[usize],
        matched_inside: &mut Vec<Option<usize>>,
        visited: &mut Vec<bool>,
    ) -> bool {
        for &t in &admissible[s_idx] {
            let t_idx = inside.iter().position(|&x| x == t).unwrap();
            if visited[t_idx] {
                continue;
            }
            visited[t_idx] = true;
            if matched_inside[t_idx].is_none()
                || augment(
                    matched_inside[t_idx].unwrap(),
                    admissible,
                    inside,
                    matched_inside,
                    visited,
                )
            {
                matched_inside[t_idx] = Some(s_idx);
                return true;
            }
        }
        false
    }
    for s_idx in 0..outside.len() {
        let mut visited = vec![false; inside.len()];
        if !augment(s_idx, &admissible, inside, &mut matched_inside, &mut visited) {
            return None;
        }
    }
    let mut matching: Vec<(usize, usize)> = matched_inside
        .iter()
        .enumerate()
        .filter_map(|(t_idx, s)| s.map(|s_idx| (outside[s_idx], inside[t_idx])))
        .collect();
    matching.sort_unstable();
    Some(matching)
}

/// Builds the certificate a matching witness encodes: singleton bags on
/// the anticlique, and for every matched pair `(s, t)` the bag of `s` is
/// the union of the two classes without `t`'s representative.
pub fn certificate_from_matching(
    inst: &ColoredInstance,
    pattern: &TargetPattern,
    witness: &MatchingWitness,
) -> Result<RootedCertificate, BuilderError> {
    let k = pattern.k();
    let in_anticlique = |c: usize| witness.anticlique.contains(&c);
    for &t in &witness.anticlique {
        if t >= k {
            return Err(BuilderError::InvalidWitness(format!(
                "anticlique member {t} out of range"
            )));
        }
    }
    for (i, &u) in witness.anticlique.iter().enumerate() {
        for &v in &witness.anticlique[i + 1..] {
            if pattern.has_edge(u, v) {
                return Err(BuilderError::InvalidWitness(format!(
                    "anticlique members {u} and {v} are pattern-adjacent"
                )));
            }
        }
    }
    let mut partner: Vec<Option<usize>> = vec![None; k];
    let mut inside_used = vec![false; k];
    for &(s, t) in &witness.matching {
        if s >= k || t >= k || in_anticlique(s) || !in_anticlique(t) {
            return Err(BuilderError::InvalidWitness(format!(
                "matching edge ({s}, {t}) does not run from outside into the anticlique"
            )));
        }
        if !pattern.has_edge(s, t) {
            return Err(BuilderError::InvalidWitness(format!(
                "matching edge ({s}, {t}) is not a pattern edge"
            )));
        }
        if partner[s].is_some() || inside_used[t] {
            return Err(BuilderError::InvalidWitness(format!(
                "matching edge ({s}, {t}) repeats a vertex"
            )));
        }
        partner[s] = Some(t);
        inside_used[t] = true;
    }
    for (c, p) in partner.iter().enumerate() {
        if !in_anticlique(c) && p.is_none() {
            return Err(BuilderError::InvalidWitness(format!(
                "pattern vertex {c} outside the anticlique is unmatched"
            )));
        }
    }
    for &(s, t) in &witness.matching {
        if !pair_connectivity_ok(inst, s, t) {
            return Err(BuilderError::WitnessConnectivity { s, t });
        }
    }

    let n = inst.graph.n();
    let mut bags = vec![VertexSet::empty(n); k];
    for c in 0..k {
        match partner[c] {
            None => bags[c] = VertexSet::from_iter(n, [inst.transversal().rep(c)]),
            Some(t) => {
                let mut bag = inst.class_pair_union(c, t);
                bag.remove(inst.transversal().rep(t));
                bags[c] = bag;
            }
        }
    }
    gate(inst, pattern, bags_to_certificate(inst, &bags), "matching bags")
}

/// Contracts the path `y - x - z` (with `y, z` in one class and `x` in
/// another) to a single vertex in `y`'s class. Returns the contracted
/// instance and the old-to-new vertex map.
fn contract_triple(
    inst: &ColoredInstance,
    y: usize,
    x: usize,
    z: usize,
) -> Result<(ColoredInstance, Vec<usize>), BuilderError> {
    let part = VertexSet::from_iter(inst.graph.n(), [y, x, z]);
    let (graph, map) = inst
        .graph
        .contract(&[part])
        .map_err(|e| BuilderError::ConstructionFailed(e.to_string()))?;
    let x_class = inst.coloring().class_of(x);
    let mut classes: Vec<Vec<usize>> = Vec::with_capacity(inst.k());
    for c in 0..inst.k() {
        let mut members: Vec<usize> = inst
            .coloring()
            .class(c)
            .iter()
            .filter(|&v| !(c == x_class && v == x))
            .map(|v| map[v])
            .collect();
        members.sort_unstable();
        members.dedup();
        classes.push(members);
    }
    let transversal: Vec<usize> = (0..inst.k())
        .map(|c| map[inst.transversal().rep(c)])
        .collect();
    let contracted = ColoredInstance::new(graph, classes, transversal)?;
    Ok((contracted, map))
}

/// Lifts a certificate through a contraction by taking preimages of each
/// bag under the vertex map.
fn lift_through_map(
    cert_bags: &[VertexSet],
    map: &[usize],
    old_n: usize,
) -> Vec<VertexSet> {
    cert_bags
        .iter()
        .map(|bag| VertexSet::from_iter(old_n, (0..old_n).filter(|&v| bag.contains(map[v]))))
        .collect()
}

/// Builds a certificate for a spanning cycle pattern given the cyclic
/// order of classes. Follows the classic recursion: contract interior
/// degree-two vertices; once every interior vertex lies on two paths,
/// peel the transversal layer and recurse; a fully singleton instance is
/// its own certificate.
pub fn cycle_certificate(
    inst: &ColoredInstance,
    ring: &[usize],
) -> Result<RootedCertificate, BuilderError> {
    let k = inst.k();
    if ring.len() != k || {
        let mut seen = vec![false; k];
        ring.iter().any(|&c| c >= k || std::mem::replace(&mut seen[c], true))
    } {
        return Err(BuilderError::RingNotSpanning);
    }
    let n = inst.graph.n();
    if k == 1 {
        let bag = VertexSet::from_iter(n, [inst.transversal().rep(ring[0])]);
        let pattern = TargetPattern::new(inst, vec![])?;
        return gate(inst, &pattern, bags_to_certificate(inst, &[bag]), "trivial ring");
    }

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        let (a, b) = (ring[i], ring[(i + 1) % k]);
        let e = (a.min(b), a.max(b));
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    let pattern = TargetPattern::new(inst, edges)?;
    let reduction = reduce_for_sat(inst, &pattern)?;
    let work = &reduction.instance;

    let work_bags = if k == 2 {
        split_single_path(work, ring[0], ring[1])?
    } else {
        ring_bags(work, ring)?
    };
    let lifted: Vec<VertexSet> = work_bags
        .iter()
        .map(|bag| VertexSet::from_iter(n, bag.iter().map(|v| reduction.to_original[v])))
        .collect();
    gate(inst, &pattern, bags_to_certificate(inst, &lifted), "ring bags")
}

/// Two-class base case: partition the single retained path into two
/// connected halves, one per endpoint.
fn split_single_path(
    work: &ColoredInstance,
    a: usize,
    b: usize,
) -> Result<Vec<VertexSet>, BuilderError> {
    let path = two_colored_path(work, a, b)
        .ok_or(CertificateError::MissingRequiredChain { a, b })?;
    let n = work.graph.n();
    let cut = path.len().div_ceil(2);
    let mut bags = vec![VertexSet::empty(n); work.k()];
    bags[a] = VertexSet::from_iter(n, path[..cut].iter().copied());
    bags[b] = VertexSet::from_iter(n, path[cut..].iter().copied());
    Ok(bags)
}

/// Core of the cycle recursion, operating on a freshly reduced instance.
fn ring_bags(work: &ColoredInstance, ring: &[usize]) -> Result<Vec<VertexSet>, BuilderError> {
    let k = work.k();
    let n = work.graph.n();

    // Contraction step: an interior vertex with exactly two neighbors,
    // both in a ring-adjacent class, disappears into a merged neighbor.
    for pos in 0..k {
        let class = ring[pos];
        let rep = work.transversal().rep(class);
        let prev = ring[(pos + k - 1) % k];
        let next = ring[(pos + 1) % k];
        for x in work.coloring().class(class).iter() {
            if x == rep || work.graph.degree(x) != 2 {
                continue;
            }
            let nbrs = work.graph.neighbors(x);
            let (y, z) = (nbrs[0], nbrs[1]);
            let cy = work.coloring().class_of(y);
            if cy != work.coloring().class_of(z) || (cy != prev && cy != next) {
                continue;
            }
            let (contracted, map) = contract_triple(work, y, x, z)?;
            let sub = cycle_certificate(&contracted, ring)?;
            let sub_bags = certificate_to_bags(&contracted, &sub);
            return Ok(lift_through_map(&sub_bags, &map, n));
        }
    }

    // Base case: all classes singleton.
    if (0..k).all(|c| work.coloring().class(c).len() == 1) {
        return Ok((0..k)
            .map(|c| VertexSet::from_iter(n, [work.transversal().rep(c)]))
            .collect());
    }

    // Peel: drop every representative; the new representative of a class
    // is the unique neighbor of the previous ring class's representative
    // inside it.
    let mut new_rep_of_class = vec![usize::MAX; k];
    for i in 0..k {
        let prev_rep = work.transversal().rep(ring[(i + k - 1) % k]);
        let class = ring[i];
        let candidates: Vec<usize> = work
            .graph
            .neighbors(prev_rep)
            .iter()
            .copied()
            .filter(|&v| work.coloring().class_of(v) == class)
            .collect();
        if candidates.len() != 1 {
            return Err(BuilderError::ConstructionFailed(format!(
                "expected a unique successor in class {class}, found {candidates:?}"
            )));
        }
        new_rep_of_class[class] = candidates[0];
    }

    let mut keep = VertexSet::full(n);
    for c in 0..k {
        keep.remove(work.transversal().rep(c));
    }
    let (graph, old_of_new) = work.graph.induced(&keep);
    let mut new_of_old = vec![usize::MAX; n];
    for (new, &old) in old_of_new.iter().enumerate() {
        new_of_old[old] = new;
    }
    let classes: Vec<Vec<usize>> = (0..k)
        .map(|c| {
            work.coloring()
                .class(c)
                .iter()
                .filter(|&v| keep.contains(v))
                .map(|v| new_of_old[v])
                .collect()
        })
        .collect();
    let transversal: Vec<usize> = (0..k).map(|c| new_of_old[new_rep_of_class[c]]).collect();
    let peeled = ColoredInstance::new(graph, classes, transversal)?;

    let sub = cycle_certificate(&peeled, ring)?;
    let sub_bags = certificate_to_bags(&peeled, &sub);

    // The bag grown from the successor of ring[i-1]'s representative
    // becomes ring[i-1]'s bag, extended by that representative.
    let mut bags = vec![VertexSet::empty(n); k];
    for i in 0..k {
        let target = ring[(i + k - 1) % k];
        let mut bag = VertexSet::from_iter(
            n,
            sub_bags[ring[i]].iter().map(|v| old_of_new[v]),
        );
        bag.insert(work.transversal().rep(target));
        bags[target] = bag;
    }
    Ok(bags)
}

/// Builds a certificate for a connected pattern with at most one cycle
/// by repeatedly stripping degree-one pattern vertices (contracting
/// their class down to its representative first), then delegating cycles
/// to [`cycle_certificate`].
pub fn unicyclic_certificate(
    inst: &ColoredInstance,
    pattern: &TargetPattern,
) -> Result<RootedCertificate, BuilderError> {
    let k = pattern.k();
    let pattern_graph = Graph::new(k, pattern.edges()).expect("pattern edges are simple");
    if k > 1 && !pattern_graph.is_connected() {
        return Err(BuilderError::PatternDisconnected);
    }
    if pattern.edges().len() > k {
        return Err(BuilderError::PatternNotUnicyclic);
    }
    let n = inst.graph.n();
    if k == 1 {
        let bag = VertexSet::from_iter(n, [inst.transversal().rep(0)]);
        return gate(inst, pattern, bags_to_certificate(inst, &[bag]), "single class");
    }
    if (0..k).all(|c| pattern_graph.degree(c) == 2) {
        return cycle_certificate(inst, &walk_cycle(&pattern_graph));
    }

    let q = (0..k)
        .find(|&c| pattern_graph.degree(c) == 1)
        .expect("a connected non-cycle pattern has a leaf");
    let r = pattern_graph.neighbors(q)[0];

    let reduction = reduce_for_sat(inst, pattern)?;
    let work = &reduction.instance;

    let work_bags = strip_leaf_bags(work, pattern, q, r)?;
    let lifted: Vec<VertexSet> = work_bags
        .iter()
        .map(|bag| VertexSet::from_iter(n, bag.iter().map(|v| reduction.to_original[v])))
        .collect();
    gate(inst, pattern, bags_to_certificate(inst, &lifted), "leaf stripping")
}

/// Removes the leaf class `q` from a reduced instance: contract its
/// non-representative members into the neighboring class, then recurse
/// without the class and re-attach a singleton bag.
fn strip_leaf_bags(
    work: &ColoredInstance,
    pattern: &TargetPattern,
    q: usize,
    r: usize,
) -> Result<Vec<VertexSet>, BuilderError> {
    let n = work.graph.n();
    let rep_q = work.transversal().rep(q);

    if work.coloring().class(q).len() > 1 {
        // Interior members of q's class sit on the single retained
        // (q, r) path with both neighbors in r's class.
        let x = work
            .coloring()
            .class(q)
            .iter()
            .find(|&v| v != rep_q)
            .expect("class has a non-representative member");
        let nbrs = work.graph.neighbors(x);
        if nbrs.len() != 2
            || work.coloring().class_of(nbrs[0]) != r
            || work.coloring().class_of(nbrs[1]) != r
        {
            return Err(BuilderError::ConstructionFailed(format!(
                "leaf-class vertex {x} is not an interior path vertex"
            )));
        }
        let (contracted, map) = contract_triple(work, nbrs[0], x, nbrs[1])?;
        let pattern2 = TargetPattern::new(&contracted, pattern.edges().to_vec())?;
        let sub = unicyclic_certificate(&contracted, &pattern2)?;
        let sub_bags = certificate_to_bags(&contracted, &sub);
        return Ok(lift_through_map(&sub_bags, &map, n));
    }

    // q's class is the lone representative: remove it and recurse on the
    // pattern without q.
    let mut keep = VertexSet::full(n);
    keep.remove(rep_q);
    let restriction = work.restrict(&keep)?;
    let (smaller, old_of_new, class_map) = (
        restriction.instance,
        restriction.old_of_new,
        restriction.class_map,
    );
    let remapped_edges: Vec<(usize, usize)> = pattern
        .edges()
        .iter()
        .filter(|&&(a, b)| a != q && b != q)
        .map(|&(a, b)| (class_map[a].unwrap(), class_map[b].unwrap()))
        .collect();
    let sub_pattern = TargetPattern::new(&smaller, remapped_edges)?;
    let sub = unicyclic_certificate(&smaller, &sub_pattern)?;
    let sub_bags = certificate_to_bags(&smaller, &sub);

    let mut bags = vec![VertexSet::empty(n); work.k()];
    for c in 0..work.k() {
        if c == q {
            bags[c] = VertexSet::from_iter(n, [rep_q]);
        } else {
            let c_new = class_map[c].expect("surviving class");
            bags[c] = VertexSet::from_iter(n, sub_bags[c_new].iter().map(|v| old_of_new[v]));
        }
    }
    Ok(bags)
}

/// Cyclic vertex order of a 2-regular connected graph.
fn walk_cycle(g: &Graph) -> Vec<usize> {
    let mut ring = vec![0];
    let mut prev = usize::MAX;
    let mut current = 0;
    while ring.len() < g.n() {
        let next = g
            .neighbors(current)
            .iter()
            .copied()
            .find(|&w| w != prev)
            .expect("2-regular vertex has a fresh neighbor");
        ring.push(next);
        prev = current;
        current = next;
    }
    ring
}

/// A perfect matching of a six-vertex pattern in which every non-matching
/// edge lies on a triangle through a matching edge or on a four-cycle
/// through two matching edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodMatching {
    pub edges: [(usize, usize); 3],
}

/// Tests the good-matching condition for an explicit perfect matching.
pub fn is_good_matching(pattern: &Graph, matching: &[(usize, usize); 3]) -> bool {
    let in_matching =
        |u: usize, v: usize| matching.iter().any(|&(a, b)| (a, b) == (u.min(v), u.max(v)));
    let mut covered = vec![false; pattern.n()];
    for &(a, b) in matching {
        if !pattern.has_edge(a, b) || covered[a] || covered[b] {
            return false;
        }
        covered[a] = true;
        covered[b] = true;
    }
    if !covered.iter().all(|&c| c) {
        return false;
    }
    pattern.edges().iter().all(|&(u, v)| {
        if in_matching(u, v) {
            return true;
        }
        // Triangle through a matching edge.
        let triangle = pattern.neighbors(u).iter().any(|&w| {
            w != v && pattern.has_edge(w, v) && (in_matching(u, w) || in_matching(v, w))
        });
        if triangle {
            return true;
        }
        // Four-cycle u-v-a-b-u with two matching edges among its sides.
        pattern.neighbors(v).iter().any(|&a| {
            a != u
                && pattern.neighbors(u).iter().any(|&b| {
                    b != v
                        && b != a
                        && pattern.has_edge(a, b)
                        && [(v, a), (a, b), (b, u)]
                            .iter()
                            .filter(|&&(x, y)| in_matching(x, y))
                            .count()
                            >= 2
                })
        })
    })
}

/// First good perfect matching of a six-vertex pattern in deterministic
/// enumeration order, or `None` after trying all perfect matchings.
pub fn find_good_matching(pattern: &Graph) -> Result<Option<GoodMatching>, BuilderError> {
    if pattern.n() != 6 {
        return Err(BuilderError::NotSixVertices(pattern.n()));
    }
    let mut result = None;
    let mut current: Vec<(usize, usize)> = Vec::new();
    let mut used = [false; 6];
    enumerate_matchings(pattern, &mut used, &mut current, &mut |m| {
        if result.is_none() {
            let edges = [m[0], m[1], m[2]];
            if is_good_matching(pattern, &edges) {
                result = Some(GoodMatching { edges });
            }
        }
    });
    Ok(result)
}

fn enumerate_matchings(
    pattern: &Graph,
    used: &mut [bool; 6],
    current: &mut Vec<(usize, usize)>,
    found: &mut impl FnMut(&[(usize, usize)]),
) {
    let Some(u) = (0..6).find(|&v| !used[v]) else {
        found(current);
        return;
    };
    used[u] = true;
    for &v in pattern.neighbors(u) {
        if v > u && !used[v] {
            used[v] = true;
            current.push((u, v));
            enumerate_matchings(pattern, used, current, found);
            current.pop();
            used[v] = false;
        }
    }
    used[u] = false;
}

/// Strategy rungs of the small-base ladder, in the order they are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rung {
    Components,
    Unicyclic,
    Cutvertex,
    MatchableAnticlique,
    SpanningFiveCycle,
    SpanningSixCycleNoLongChords,
    GoodMatching,
    SpanningWheel,
    Sporadic,
    GoodPermutation,
    SolverFallback,
}

impl fmt::Display for Rung {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rung::Components => "components",
            Rung::Unicyclic => "unicyclic",
            Rung::Cutvertex => "cutvertex",
            Rung::MatchableAnticlique => "matchable-anticlique",
            Rung::SpanningFiveCycle => "spanning-five-cycle",
            Rung::SpanningSixCycleNoLongChords => "spanning-six-cycle-no-long-chords",
            Rung::GoodMatching => "good-matching",
            Rung::SpanningWheel => "spanning-wheel",
            Rung::Sporadic => "sporadic",
            Rung::GoodPermutation => "good-permutation",
            Rung::SolverFallback => "solver-fallback",
        };
        f.write_str(name)
    }
}

/// The certificate found for a doubled small base, together with the
/// rungs applied along the way (outermost first).
#[derive(Clone, Debug)]
pub struct ZSmallReport {
    pub certificate: RootedCertificate,
    pub rungs: Vec<Rung>,
}

impl ZSmallReport {
    pub fn primary_rung(&self) -> Rung {
        self.rungs[0]
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            rung: String,
            trace: Vec<String>,
            certificate: crate::certificates::CertificateDoc,
            rungs: &'a [Rung],
        }
        serde_json::to_string_pretty(&Doc {
            rung: self.primary_rung().to_string(),
            trace: self.rungs.iter().map(Rung::to_string).collect(),
            certificate: crate::certificates::CertificateDoc::from_certificate(&self.certificate),
            rungs: &self.rungs,
        })
        .expect("report serializes")
    }
}

/// Certificate construction for `Z(G)` with `|V(G)| <= 6`, via an
/// ordered strategy ladder. The rungs mirror the structural case
/// analysis for small bases; the good-permutation rung catches the
/// four-vertex complete base the case analysis delegates elsewhere, and
/// the solver fallback guarantees totality (its firing is reported so
/// sweeps can flag it).
pub fn z_small_certificate(z: &ZInstance) -> Result<ZSmallReport, BuilderError> {
    if z.base.n() > Z_SMALL_MAX_BASE {
        return Err(BuilderError::BaseTooLarge {
            n: z.base.n(),
            max: Z_SMALL_MAX_BASE,
        });
    }
    let (bags, rungs) = build_small(z)?;
    let pattern = TargetPattern::full(&z.instance);
    let cert = gate(
        &z.instance,
        &pattern,
        bags_to_certificate(&z.instance, &bags),
        "ladder output",
    )?;
    Ok(ZSmallReport {
        certificate: cert,
        rungs,
    })
}

/// Maps bags of a doubled sub-instance back into the doubled parent via
/// a base-vertex map.
fn map_doubled_bags(
    sub_bags: &[VertexSet],
    base_map: &[usize],
    parent_zn: usize,
) -> Vec<(usize, VertexSet)> {
    sub_bags
        .iter()
        .enumerate()
        .map(|(class, bag)| {
            let mapped = VertexSet::from_iter(
                parent_zn,
                bag.iter().map(|v| 2 * base_map[v / 2] + v % 2),
            );
            (base_map[class], mapped)
        })
        .collect()
}

/// Bags indexed by class, with the rungs that produced them.
type LadderStep = (Vec<VertexSet>, Vec<Rung>);

fn build_small(z: &ZInstance) -> Result<LadderStep, BuilderError> {
    let base = &z.base;
    let k = base.n();
    let zn = z.instance.graph.n();
    let h = h_graph(&z.instance).graph;
    debug_assert_eq!(&h, base);
    let full = TargetPattern::full(&z.instance);
    let is_clean = |bags: &Vec<VertexSet>| {
        verify(&z.instance, &full, &bags_to_certificate(&z.instance, bags)).is_empty()
    };

    // Components: handle each base component separately and take the
    // union of the bags.
    let comps = base.components();
    if comps.len() > 1 {
        let mut bags = vec![VertexSet::empty(zn); k];
        let mut rungs = vec![Rung::Components];
        for comp in comps {
            let (sub_base, base_map) = base.induced(&comp);
            let sub_z = z_of(&sub_base)?;
            let (sub_bags, sub_rungs) = build_small(&sub_z)?;
            for (class, bag) in map_doubled_bags(&sub_bags, &base_map, zn) {
                bags[class] = bag;
            }
            for rung in sub_rungs {
                if !rungs.contains(&rung) {
                    rungs.push(rung);
                }
            }
        }
        return Ok((bags, rungs));
    }

    // Cutvertex reduction: split off a component of one or two vertices.
    if k >= 3 {
        if let Some(bags_rungs) = try_cutvertex(z, &h, zn)? {
            return Ok(bags_rungs);
        }
    }

    // Matchable anticliques.
    if let Some(witness) = find_matchable_anticlique(&z.instance, &full) {
        let cert = certificate_from_matching(&z.instance, &full, &witness)?;
        return Ok((
            certificate_to_bags(&z.instance, &cert),
            vec![Rung::MatchableAnticlique],
        ));
    }

    // Spanning-cycle constructions.
    if k == 5 {
        for cycle in hamiltonian_cycles(&h) {
            let bags = rotation_bags(z, &cycle, None);
            if is_clean(&bags) {
                return Ok((bags, vec![Rung::SpanningFiveCycle]));
            }
        }
    }
    if k == 6 {
        for cycle in hamiltonian_cycles(&h) {
            let no_long_chords = (0..3).all(|i| !h.has_edge(cycle[i], cycle[i + 3]));
            if !no_long_chords {
                continue;
            }
            let bags = rotation_bags(z, &cycle, None);
            if is_clean(&bags) {
                return Ok((bags, vec![Rung::SpanningSixCycleNoLongChords]));
            }
        }
        if let Some(matching) = find_good_matching(&h)? {
            let mut bags = vec![VertexSet::empty(zn); k];
            for &(r, s) in &matching.edges {
                bags[r] = VertexSet::from_iter(zn, [z.copy1(r), z.copy2(s)]);
                bags[s] = VertexSet::from_iter(zn, [z.copy1(s), z.copy2(r)]);
            }
            if is_clean(&bags) {
                return Ok((bags, vec![Rung::GoodMatching]));
            }
        }
        for center in 0..k {
            let keep = VertexSet::from_iter(k, (0..k).filter(|&v| v != center));
            let (rim_graph, rim_map) = h.induced(&keep);
            for rim_cycle in hamiltonian_cycles(&rim_graph) {
                let rim: Vec<usize> = rim_cycle.iter().map(|&v| rim_map[v]).collect();
                if rim.iter().any(|&v| !h.has_edge(center, v)) {
                    continue;
                }
                let bags = rotation_bags(z, &rim, Some(center));
                if is_clean(&bags) {
                    return Ok((bags, vec![Rung::SpanningWheel]));
                }
            }
        }
        if let Some(bags) = try_sporadic(z, &h, &is_clean) {
            return Ok((bags, vec![Rung::Sporadic]));
        }
    }

    // Remaining trees, cycles, and unicyclic bases (the structured rungs
    // above pass on them when no matchable anticlique exists).
    if base.edge_count() <= k {
        let cert = unicyclic_certificate(&z.instance, &full)?;
        return Ok((certificate_to_bags(&z.instance, &cert), vec![Rung::Unicyclic]));
    }

    // Good permutations give all-pairs certificates directly.
    if let Some(f) = find_good_permutation(base)? {
        let cert = permutation_certificate(z, &f)?;
        return Ok((
            certificate_to_bags(&z.instance, &cert),
            vec![Rung::GoodPermutation],
        ));
    }

    // Last resort: exact search. Callers treat this rung as a flag for
    // review.
    let verdict = solve(&z.instance, &full, &SolveOptions::default())?;
    match verdict.status {
        SolveStatus::Sat => {
            let cert = verdict.certificate.expect("sat verdicts carry certificates");
            Ok((certificate_to_bags(&z.instance, &cert), vec![Rung::SolverFallback]))
        }
        other => Err(BuilderError::ConstructionFailed(format!(
            "solver fallback returned {other:?} on a doubled small base"
        ))),
    }
}

/// Bags `{(c_i, 1), (c_{i+1}, 2)}` around a cycle of base vertices, plus
/// an optional singleton center.
fn rotation_bags(z: &ZInstance, cycle: &[usize], center: Option<usize>) -> Vec<VertexSet> {
    let zn = z.instance.graph.n();
    let mut bags = vec![VertexSet::empty(zn); z.base.n()];
    let l = cycle.len();
    for i in 0..l {
        let c = cycle[i];
        let next = cycle[(i + 1) % l];
        bags[c] = VertexSet::from_iter(zn, [z.copy1(c), z.copy2(next)]);
    }
    if let Some(center) = center {
        bags[center] = VertexSet::from_iter(zn, [z.copy1(center)]);
    }
    bags
}

fn try_cutvertex(
    z: &ZInstance,
    h: &Graph,
    zn: usize,
) -> Result<Option<LadderStep>, BuilderError> {
    let k = h.n();
    for s in 0..k {
        let keep = VertexSet::from_iter(k, (0..k).filter(|&v| v != s));
        let comps = h.components_within(&keep);
        if comps.len() <= 1 {
            continue;
        }
        let small = comps.iter().find(|c| c.len() <= 2).expect("some side is small");
        let members = small.to_vec();
        let bags = match *members.as_slice() {
            [t] => {
                let drop = VertexSet::from_iter(k, [s, t]);
                let sub_bags = recurse_without(z, &drop, zn)?;
                let mut bags = sub_bags;
                bags[s] = VertexSet::from_iter(
                    zn,
                    [z.copy1(s), z.copy2(s), z.copy2(t)],
                );
                bags[t] = VertexSet::from_iter(zn, [z.copy1(t)]);
                bags
            }
            [t, u] => {
                let drop = VertexSet::from_iter(k, [t, u]);
                let mut bags = recurse_without(z, &drop, zn)?;
                let (ts, us) = (h.has_edge(t, s), h.has_edge(u, s));
                match (ts, us) {
                    (true, true) => {
                        bags[t] = VertexSet::from_iter(zn, [z.copy1(t), z.copy2(u)]);
                        bags[u] = VertexSet::from_iter(zn, [z.copy1(u), z.copy2(t)]);
                    }
                    (true, false) => {
                        bags[t] = VertexSet::from_iter(
                            zn,
                            [z.copy1(t), z.copy2(t), z.copy2(u)],
                        );
                        bags[u] = VertexSet::from_iter(zn, [z.copy1(u)]);
                    }
                    (false, true) => {
                        bags[u] = VertexSet::from_iter(
                            zn,
                            [z.copy1(u), z.copy2(u), z.copy2(t)],
                        );
                        bags[t] = VertexSet::from_iter(zn, [z.copy1(t)]);
                    }
                    (false, false) => {
                        return Err(BuilderError::ConstructionFailed(
                            "cut component has no edge to the cutvertex".to_string(),
                        ))
                    }
                }
                bags
            }
            _ => unreachable!("component filtered to size <= 2"),
        };
        return Ok(Some((bags, vec![Rung::Cutvertex])));
    }
    Ok(None)
}

/// Recurses on the doubled instance of the base without `drop`, mapping
/// the returned bags back into the parent's coordinates.
fn recurse_without(
    z: &ZInstance,
    drop: &VertexSet,
    zn: usize,
) -> Result<Vec<VertexSet>, BuilderError> {
    let k = z.base.n();
    let keep = VertexSet::from_iter(k, (0..k).filter(|&v| !drop.contains(v)));
    let (sub_base, base_map) = z.base.induced(&keep);
    let sub_z = z_of(&sub_base)?;
    let (sub_bags, _) = build_small(&sub_z)?;
    let mut bags = vec![VertexSet::empty(zn); k];
    for (class, bag) in map_doubled_bags(&sub_bags, &base_map, zn) {
        bags[class] = bag;
    }
    Ok(bags)
}

/// The explicit six-vertex separator assignment: for identified
/// vertices (s, t, u, a, b, c) with `s` seeing exactly `{t, u}`,
/// `{a, b, c}` a triangle, `t` seeing all of it, `u` seeing `{b, c}` but
/// not `a`, the paired bags below form a certificate.
fn try_sporadic(
    z: &ZInstance,
    h: &Graph,
    is_clean: &impl Fn(&Vec<VertexSet>) -> bool,
) -> Option<Vec<VertexSet>> {
    use itertools::Itertools;
    let zn = z.instance.graph.n();
    for perm in (0..6).permutations(6) {
        let [s, t, u, a, b, c] = perm[..] else { unreachable!() };
        let premises = h.has_edge(s, t)
            && h.has_edge(s, u)
            && !h.has_edge(s, a)
            && !h.has_edge(s, b)
            && !h.has_edge(s, c)
            && h.has_edge(t, a)
            && h.has_edge(t, b)
            && h.has_edge(t, c)
            && h.has_edge(u, b)
            && h.has_edge(u, c)
            && !h.has_edge(u, a)
            && h.has_edge(a, b)
            && h.has_edge(b, c)
            && h.has_edge(a, c);
        if !premises {
            continue;
        }
        let mut bags = vec![VertexSet::empty(zn); 6];
        bags[s] = VertexSet::from_iter(zn, [z.copy1(s), z.copy2(u)]);
        bags[u] = VertexSet::from_iter(zn, [z.copy1(u), z.copy2(s)]);
        bags[t] = VertexSet::from_iter(zn, [z.copy1(t), z.copy2(c)]);
        bags[c] = VertexSet::from_iter(zn, [z.copy1(c), z.copy2(b)]);
        bags[b] = VertexSet::from_iter(zn, [z.copy1(b), z.copy2(t)]);
        bags[a] = VertexSet::from_iter(zn, [z.copy1(a)]);
        if is_clean(&bags) {
            return Some(bags);
        }
    }
    None
}

/// All Hamiltonian cycles of a graph on up to seven vertices, as vertex
/// sequences starting at 0, each cycle listed once (direction
/// canonicalized), deterministic order.
fn hamiltonian_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    if n < 3 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut path = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    fn extend(
        g: &Graph,
        path: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = g.n();
        let last = *path.last().unwrap();
        if path.len() == n {
            if g.has_edge(last, 0) && path[1] < path[n - 1] {
                out.push(path.clone());
            }
            return;
        }
        for &w in g.neighbors(last) {
            if !used[w] {
                used[w] = true;
                path.push(w);
                extend(g, path, used, out);
                path.pop();
                used[w] = false;
            }
        }
    }
    extend(g, &mut path, &mut used, &mut out);
    out
}
