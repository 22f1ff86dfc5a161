//! Undirected simple graphs on dense vertex indices `0..n`.
//!
//! All higher layers address vertices by index; name mappings live in the
//! CLI. Graphs are immutable after construction and cheap to clone at the
//! sizes this crate targets (a few hundred vertices at most).

use std::fmt;

use thiserror::Error;

/// Largest vertex count accepted by [`Graph::canonical_key`].
///
/// Canonicalization minimizes over vertex relabelings, so the cost grows
/// factorially; every instance this crate cares about fits well under the
/// limit before doubling.
pub const CANONICAL_MAX_VERTICES: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("part {index} is empty")]
    EmptyPart { index: usize },
    #[error("part {index} does not induce a connected subgraph")]
    DisconnectedPart { index: usize },
    #[error("parts {first} and {second} overlap at vertex {vertex}")]
    OverlappingParts {
        first: usize,
        second: usize,
        vertex: usize,
    },
    #[error("canonical form supports at most {max} vertices, got {n}")]
    TooLargeForCanonical { n: usize, max: usize },
}

/// A set of vertices of some graph, stored as a fixed-width bitset.
///
/// The set remembers its universe size so that equality, hashing, and
/// complement behave predictably.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    universe: usize,
    blocks: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            blocks: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(universe: usize, iter: I) -> Self {
        let mut s = Self::empty(universe);
        for v in iter {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        self.blocks[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.universe {
            self.blocks[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.blocks[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&v| self.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.universe, other.universe);
        VertexSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.universe, other.universe);
        VertexSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An undirected simple graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates, and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Ok(Graph { n, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Returns a copy with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        let mut adj = self.adj.clone();
        adj[u].push(v);
        adj[v].push(u);
        adj[u].sort_unstable();
        adj[v].sort_unstable();
        Ok(Graph { n: self.n, adj })
    }

    /// Connected components as disjoint vertex sets covering the graph,
    /// ordered by smallest contained vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut queue = vec![start];
            seen[start] = true;
            while let Some(v) = queue.pop() {
                comp.insert(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Components of the subgraph induced by `allowed`, ordered by
    /// smallest contained vertex.
    pub fn components_within(&self, allowed: &VertexSet) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in allowed.iter() {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut queue = vec![start];
            seen[start] = true;
            while let Some(v) = queue.pop() {
                comp.insert(v);
                for &w in &self.adj[v] {
                    if allowed.contains(w) && !seen[w] {
                        seen[w] = true;
                        queue.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Whether the vertices in `set` induce a connected nonempty subgraph.
    pub fn is_connected_within(&self, set: &VertexSet) -> bool {
        !set.is_empty() && self.components_within(set).len() == 1
    }

    /// Induced subgraph on `keep` (ascending order), together with the
    /// map from new indices back to original vertices.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let old_of_new: Vec<usize> = keep.iter().collect();
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges() {
            if keep.contains(u) && keep.contains(v) {
                edges.push((new_of_old[u], new_of_old[v]));
            }
        }
        let g = Graph::new(old_of_new.len(), &edges).expect("induced subgraph is simple");
        (g, old_of_new)
    }

    /// Contracts each part to a single vertex. Parts must be nonempty,
    /// pairwise disjoint, and connected. Untouched vertices keep distinct
    /// identities; the result is simple (parallel edges merged, loops
    /// dropped). Returns the contracted graph and the old-to-new vertex
    /// map.
    ///
    /// New indices are assigned by ordering all units (parts and
    /// untouched vertices) by their smallest original vertex.
    pub fn contract(&self, parts: &[VertexSet]) -> Result<(Graph, Vec<usize>), GraphError> {
        let mut owner = vec![usize::MAX; self.n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(GraphError::EmptyPart { index: i });
            }
            for v in part.iter() {
                if v >= self.n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
                }
                if owner[v] != usize::MAX {
                    return Err(GraphError::OverlappingParts {
                        first: owner[v],
                        second: i,
                        vertex: v,
                    });
                }
                owner[v] = i;
            }
            if !self.is_connected_within(part) {
                return Err(GraphError::DisconnectedPart { index: i });
            }
        }

        // Units ordered by smallest original member.
        let mut units: Vec<(usize, Option<usize>)> = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            units.push((part.min().unwrap(), Some(i)));
        }
        for (v, &part) in owner.iter().enumerate() {
            if part == usize::MAX {
                units.push((v, None));
            }
        }
        units.sort_unstable();

        let mut map = vec![usize::MAX; self.n];
        for (new, &(anchor, part)) in units.iter().enumerate() {
            match part {
                Some(i) => {
                    for v in parts[i].iter() {
                        map[v] = new;
                    }
                }
                None => map[anchor] = new,
            }
        }

        let mut edges = Vec::new();
        for (u, v) in self.edges() {
            let (a, b) = (map[u], map[v]);
            if a != b && !edges.contains(&(a.min(b), a.max(b))) {
                edges.push((a.min(b), a.max(b)));
            }
        }
        let g = Graph::new(units.len(), &edges).expect("contraction yields a simple graph");
        Ok((g, map))
    }

    /// Applies a relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let edges: Vec<(usize, usize)> = self
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::new(self.n, &edges).expect("relabeling preserves simplicity")
    }

    fn upper_triangle_bits(&self, position: &[usize]) -> u64 {
        // Bit t for the t-th pair (i, j), i < j, in lexicographic order.
        let mut bits = 0u64;
        let mut t = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                // position maps original vertices to their new labels; we
                // need the edge between the originals labeled i and j.
                if self.has_edge(position[i], position[j]) {
                    bits |= 1 << t;
                }
                t += 1;
            }
        }
        bits
    }

    /// Canonical key: equal keys if and only if the graphs are
    /// isomorphic. The key encodes the vertex count followed by the
    /// lexicographically minimal upper-triangle adjacency bitstring over
    /// all degree-sorted relabelings.
    pub fn canonical_key(&self) -> Result<Vec<u8>, GraphError> {
        if self.n > CANONICAL_MAX_VERTICES {
            return Err(GraphError::TooLargeForCanonical {
                n: self.n,
                max: CANONICAL_MAX_VERTICES,
            });
        }
        let bits = self.canonical_bits();
        let nbits = self.n * (self.n.saturating_sub(1)) / 2;
        let mut key = vec![self.n as u8];
        for byte in 0..nbits.div_ceil(8) {
            key.push(((bits >> (8 * byte)) & 0xff) as u8);
        }
        Ok(key)
    }

    /// The minimal adjacency bitstring itself; used internally for dedup.
    ///
    /// Only relabelings that sort degrees descending are considered: any
    /// isomorphism preserves degrees, so the minimum over this restricted
    /// set is still an isomorphism invariant, and the encoding remains an
    /// actual adjacency matrix of the graph, so equal values imply
    /// isomorphic graphs.
    pub(crate) fn canonical_bits(&self) -> u64 {
        assert!(self.n <= CANONICAL_MAX_VERTICES);
        if self.n <= 1 {
            return 0;
        }
        // Group vertices by degree, highest degree first.
        let mut by_degree: Vec<Vec<usize>> = Vec::new();
        let mut degrees: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees.dedup();
        for &d in &degrees {
            by_degree.push((0..self.n).filter(|&v| self.degree(v) == d).collect());
        }

        let mut best = u64::MAX;
        // position[slot] = original vertex placed at that slot.
        let mut position = vec![usize::MAX; self.n];
        self.minimize_over_groups(&by_degree, 0, 0, &mut position, &mut best);
        best
    }

    fn minimize_over_groups(
        &self,
        groups: &[Vec<usize>],
        group_idx: usize,
        offset: usize,
        position: &mut Vec<usize>,
        best: &mut u64,
    ) {
        if group_idx == groups.len() {
            let bits = self.upper_triangle_bits(position);
            if bits < *best {
                *best = bits;
            }
            return;
        }
        let group = &groups[group_idx];
        let mut perm: Vec<usize> = group.clone();
        permute_all(&mut perm, 0, &mut |arrangement| {
            for (i, &v) in arrangement.iter().enumerate() {
                position[offset + i] = v;
            }
            self.minimize_over_groups(groups, group_idx + 1, offset + group.len(), position, best);
        });
    }
}

/// Heap-style in-place permutation enumeration, deterministic order.
fn permute_all<F: FnMut(&[usize])>(items: &mut Vec<usize>, k: usize, f: &mut F) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, f);
        items.swap(k, i);
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, FamilySpec};

    fn path(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn components_of_connected_path() {
        let comps = path(3).components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 3);
    }

    #[test]
    fn components_of_edgeless_graph() {
        let comps = Graph::empty(3).components();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn components_of_g7_minus_two_vertices() {
        // Deleting v0 and v3 from the 6-cycle-plus-apex graph leaves the
        // arcs {v1, v2} and {v4, v5} and the isolated apex x = 6.
        let g7 = family(&FamilySpec::G7).unwrap();
        let keep = VertexSet::from_iter(7, [1, 2, 4, 5, 6]);
        let (induced, old) = g7.induced(&keep);
        let comps: Vec<Vec<usize>> = induced
            .components()
            .iter()
            .map(|c| c.iter().map(|v| old[v]).collect())
            .collect();
        assert_eq!(comps, vec![vec![1, 2], vec![4, 5], vec![6]]);
    }

    #[test]
    fn contract_path_in_six_cycle_gives_four_cycle() {
        let c6 = family(&FamilySpec::Cycle(6)).unwrap();
        // y-x-z = 0-1-2 is a path inside the cycle.
        let part = VertexSet::from_iter(6, [0, 1, 2]);
        let (g, map) = c6.contract(&[part]).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 4);
        // The merged vertex keeps adjacency to the old neighbors 3 and 5.
        let w = map[0];
        assert_eq!(map[1], w);
        assert_eq!(map[2], w);
        assert!(g.has_edge(w, map[3]));
        assert!(g.has_edge(w, map[5]));
        assert!(g.has_edge(map[3], map[4]));
        assert!(g.has_edge(map[4], map[5]));
    }

    #[test]
    fn contract_singleton_is_identity_like() {
        let c6 = family(&FamilySpec::Cycle(6)).unwrap();
        let part = VertexSet::from_iter(6, [2]);
        let (g, map) = c6.contract(&[part]).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(map, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(g.edges(), c6.edges());
    }

    #[test]
    fn contract_triangle_edge_gives_k2() {
        let k3 = family(&FamilySpec::Complete(3)).unwrap();
        let part = VertexSet::from_iter(3, [0, 1]);
        let (g, _) = k3.contract(&[part]).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn contract_rejects_disconnected_and_overlapping_parts() {
        let p4 = path(4);
        let disconnected = VertexSet::from_iter(4, [0, 3]);
        assert_eq!(
            p4.contract(&[disconnected]),
            Err(GraphError::DisconnectedPart { index: 0 })
        );
        let a = VertexSet::from_iter(4, [0, 1]);
        let b = VertexSet::from_iter(4, [1, 2]);
        assert_eq!(
            p4.contract(&[a, b]),
            Err(GraphError::OverlappingParts {
                first: 0,
                second: 1,
                vertex: 1
            })
        );
    }

    #[test]
    fn canonical_key_is_isomorphism_invariant_for_c4() {
        let c4 = family(&FamilySpec::Cycle(4)).unwrap();
        let relabeled = c4.relabel(&[2, 0, 3, 1]);
        assert_eq!(c4.canonical_key().unwrap(), relabeled.canonical_key().unwrap());
    }

    #[test]
    fn canonical_key_separates_c4_from_p4() {
        let c4 = family(&FamilySpec::Cycle(4)).unwrap();
        let p4 = path(4);
        assert_ne!(c4.canonical_key().unwrap(), p4.canonical_key().unwrap());
    }

    #[test]
    fn eleven_isomorphism_classes_on_four_vertices() {
        // Brute force over all 2^6 labeled graphs on 4 vertices.
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut keys = std::collections::HashSet::new();
        for mask in 0u32..64 {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(4, &edges).unwrap();
            keys.insert(g.canonical_key().unwrap());
        }
        assert_eq!(keys.len(), 11);
    }

    #[test]
    fn canonical_key_rejects_large_graphs() {
        let g = Graph::empty(11);
        assert_eq!(
            g.canonical_key(),
            Err(GraphError::TooLargeForCanonical { n: 11, max: 10 })
        );
    }

    #[test]
    fn duplicate_edge_rejected() {
        assert_eq!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
    }

    #[test]
    fn contraction_preserves_adjacency_outside_the_part() {
        let g7 = family(&FamilySpec::G7).unwrap();
        let part = VertexSet::from_iter(7, [5, 0, 1]);
        let (contracted, map) = g7.contract(std::slice::from_ref(&part)).unwrap();
        for (u, v) in g7.edges() {
            if !part.contains(u) && !part.contains(v) {
                assert!(contracted.has_edge(map[u], map[v]));
            }
        }
        for (u, v) in contracted.edges() {
            // Every contracted edge comes from some original edge.
            assert!(g7
                .edges()
                .iter()
                .any(|&(a, b)| (map[a], map[b]) == (u, v) || (map[b], map[a]) == (u, v)));
        }
    }

    fn random_graph(n: usize, seed: u64) -> Graph {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(0.4) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(1000))]

        #[test]
        fn canonical_key_is_relabeling_invariant(n in 1usize..=7, seed in 0u64..100_000) {
            use rand::{seq::SliceRandom, SeedableRng};
            let g = random_graph(n, seed);
            let mut perm: Vec<usize> = (0..n).collect();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            perm.shuffle(&mut rng);
            let relabeled = g.relabel(&perm);
            proptest::prop_assert_eq!(
                g.canonical_key().unwrap(),
                relabeled.canonical_key().unwrap()
            );
        }

        #[test]
        fn components_partition_and_connect(n in 1usize..=9, seed in 0u64..10_000) {
            let g = random_graph(n, seed);
            let comps = g.components();
            let mut seen = vec![false; n];
            for comp in &comps {
                proptest::prop_assert!(g.is_connected_within(comp));
                for v in comp.iter() {
                    proptest::prop_assert!(!seen[v]);
                    seen[v] = true;
                }
            }
            proptest::prop_assert!(seen.into_iter().all(|s| s));
        }
    }
}
