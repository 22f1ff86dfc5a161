//! Graph families, random path-system instances, and exhaustive
//! enumeration of small graphs up to isomorphism.
//!
//! Every generator is deterministic given its spec and seed, so fuzz
//! failures replay exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, VertexSet, CANONICAL_MAX_VERTICES};
use crate::kempe::{ColoredInstance, InstanceError};

pub const ENUMERATION_MAX_VERTICES: usize = 7;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid family parameter: {0}")]
    InvalidFamily(String),
    #[error("enumeration supports at most {max} vertices, got {n}")]
    TooLargeForEnumeration { n: usize, max: usize },
    #[error("path-system spec: {0}")]
    InvalidPathSystem(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Named graph families with fixed, documented labelings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// Cycle `0-1-...-(n-1)-0`, `n >= 3`.
    Cycle(usize),
    /// Path `0-1-...-(n-1)`, `n >= 1`.
    Path(usize),
    /// Complete graph, `n >= 1`.
    Complete(usize),
    /// Complete bipartite graph with parts `0..a` and `a..a+b`.
    CompleteBipartite(usize, usize),
    /// Outer cycle `0..4`, inner pentagram `5..9`, spokes `i (i+5)`.
    Petersen,
    /// Two triangles `{0,1,2}` and `{0,3,4}` sharing the center 0.
    Hourglass,
    /// `K_{2,3}` with parts `{0,1}` and `{2,3,4}`.
    K23,
    /// The 5-cycle `0-1-2-3-4-0` plus the chord `{0, 2}`.
    C5Plus,
    /// Rim cycle `0..n-1` plus hub `n` joined to every rim vertex,
    /// `n >= 3`.
    Wheel(usize),
    /// Triangles `{0,1,2}` and `{3,4,5}` with spokes `i (i+3)`.
    Prism,
    /// The 8-cycle `0..7` plus the four diagonals `i (i+4)`.
    Wagner,
    /// The 6-cycle `0..5` plus an apex 6 joined to the antipodal pair
    /// `{0, 3}`.
    G7,
}

/// Builds the named family member.
pub fn family(spec: &FamilySpec) -> Result<Graph, GeneratorError> {
    let bad = |msg: &str| GeneratorError::InvalidFamily(msg.to_string());
    let graph = |n: usize, edges: Vec<(usize, usize)>| {
        Graph::new(n, &edges).map_err(|e| GeneratorError::InvalidFamily(e.to_string()))
    };
    match *spec {
        FamilySpec::Cycle(n) => {
            if n < 3 {
                return Err(bad("cycle needs at least 3 vertices"));
            }
            graph(n, (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect())
        }
        FamilySpec::Path(n) => {
            if n < 1 {
                return Err(bad("path needs at least 1 vertex"));
            }
            graph(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect())
        }
        FamilySpec::Complete(n) => {
            if n < 1 {
                return Err(bad("complete graph needs at least 1 vertex"));
            }
            let mut edges = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    edges.push((a, b));
                }
            }
            graph(n, edges)
        }
        FamilySpec::CompleteBipartite(a, b) => {
            if a < 1 || b < 1 {
                return Err(bad("both parts must be nonempty"));
            }
            let mut edges = Vec::new();
            for u in 0..a {
                for v in 0..b {
                    edges.push((u, a + v));
                }
            }
            graph(a + b, edges)
        }
        FamilySpec::Petersen => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i.min((i + 1) % 5), i.max((i + 1) % 5)));
                edges.push((i, i + 5));
                let j = (i + 2) % 5;
                edges.push(((i + 5).min(j + 5), (i + 5).max(j + 5)));
            }
            edges.sort_unstable();
            edges.dedup();
            graph(10, edges)
        }
        FamilySpec::Hourglass => graph(5, vec![(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]),
        FamilySpec::K23 => family(&FamilySpec::CompleteBipartite(2, 3)),
        FamilySpec::C5Plus => graph(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)]),
        FamilySpec::Wheel(rim) => {
            if rim < 3 {
                return Err(bad("wheel rim needs at least 3 vertices"));
            }
            let mut edges: Vec<(usize, usize)> = (0..rim)
                .map(|i| (i.min((i + 1) % rim), i.max((i + 1) % rim)))
                .collect();
            for i in 0..rim {
                edges.push((i, rim));
            }
            edges.sort_unstable();
            edges.dedup();
            graph(rim + 1, edges)
        }
        FamilySpec::Prism => graph(
            6,
            vec![(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3), (1, 4), (2, 5)],
        ),
        FamilySpec::Wagner => {
            let mut edges: Vec<(usize, usize)> =
                (0..8).map(|i| (i.min((i + 1) % 8), i.max((i + 1) % 8))).collect();
            for i in 0..4 {
                edges.push((i, i + 4));
            }
            edges.sort_unstable();
            edges.dedup();
            graph(8, edges)
        }
        FamilySpec::G7 => graph(7, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 6), (3, 6)]),
    }
}

/// Parses a family name as used on the command line.
pub fn family_by_name(name: &str, n: Option<usize>) -> Result<Graph, GeneratorError> {
    let need = |what: &str| {
        GeneratorError::InvalidFamily(format!("family '{what}' requires --n"))
    };
    match name {
        "cycle" => family(&FamilySpec::Cycle(n.ok_or_else(|| need("cycle"))?)),
        "path" => family(&FamilySpec::Path(n.ok_or_else(|| need("path"))?)),
        "complete" => family(&FamilySpec::Complete(n.ok_or_else(|| need("complete"))?)),
        "wheel" => family(&FamilySpec::Wheel(n.ok_or_else(|| need("wheel"))?)),
        "petersen" => family(&FamilySpec::Petersen),
        "hourglass" => family(&FamilySpec::Hourglass),
        "k23" => family(&FamilySpec::K23),
        "c5plus" => family(&FamilySpec::C5Plus),
        "prism" => family(&FamilySpec::Prism),
        "wagner" => family(&FamilySpec::Wagner),
        "g7" => family(&FamilySpec::G7),
        other => Err(GeneratorError::InvalidFamily(format!("unknown family '{other}'"))),
    }
}

/// Spec for sampling a colored instance whose derived graph contains a
/// prescribed pattern as a spanning subgraph.
#[derive(Clone, Debug)]
pub struct PathSystemSpec {
    /// The pattern; one transversal vertex (and class) per pattern
    /// vertex.
    pub pattern: Graph,
    pub seed: u64,
    /// Maximum number of internal vertices per two-colored path; must be
    /// even so each path alternates between exactly its two end classes.
    pub max_internal: usize,
    /// Probability of attempting one extra cross-class edge per vertex
    /// pair sampled.
    pub extra_edge_prob: f64,
    /// Connect every class-pair union, making the coloring a Kempe
    /// coloring.
    pub kempe_complete: bool,
}

/// Outcome of instance sampling, including how many candidate extra
/// edges were rejected.
#[derive(Clone, Debug)]
pub struct SampledInstance {
    pub instance: ColoredInstance,
    pub rejected_extra_edges: usize,
}

/// Samples an instance realizing the pattern: one fresh two-colored path
/// of random even internal length per pattern edge, optional cross-class
/// noise edges, and (optionally) enough repair edges to connect every
/// class-pair union. Reproducible from the seed.
pub fn random_path_system(spec: &PathSystemSpec) -> Result<SampledInstance, GeneratorError> {
    if !spec.max_internal.is_multiple_of(2) {
        return Err(GeneratorError::InvalidPathSystem(
            "max_internal must be even".to_string(),
        ));
    }
    if !(0.0..=1.0).contains(&spec.extra_edge_prob) {
        return Err(GeneratorError::InvalidPathSystem(
            "extra_edge_prob must lie in [0, 1]".to_string(),
        ));
    }
    let k = spec.pattern.n();
    if k == 0 {
        return Err(GeneratorError::InvalidPathSystem("pattern is empty".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    fn push_edge(edges: &mut Vec<(usize, usize)>, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        if edges.contains(&e) {
            return false;
        }
        edges.push(e);
        true
    }

    // Transversal vertex i sits in class i; fresh interior vertices are
    // appended as needed.
    let mut class_of: Vec<usize> = (0..k).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for &(a, b) in spec.pattern.edges().iter() {
        let internal = 2 * rng.gen_range(0..=spec.max_internal / 2);
        let mut prev = a;
        for step in 0..internal {
            let v = class_of.len();
            // Interior vertices alternate b, a, b, a, ...
            class_of.push(if step % 2 == 0 { b } else { a });
            push_edge(&mut edges, prev, v);
            prev = v;
        }
        push_edge(&mut edges, prev, b);
    }

    // Optional noise: cross-class edges that never merge two distinct
    // chains of a pattern pair (such merges would collapse structure the
    // sampled paths are meant to keep apart).
    let mut rejected = 0;
    if spec.extra_edge_prob > 0.0 {
        let n = class_of.len();
        let attempts = n;
        for _ in 0..attempts {
            if !rng.gen_bool(spec.extra_edge_prob) {
                continue;
            }
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            let (cu, cv) = (class_of[u], class_of[v]);
            if u == v || cu == cv {
                continue;
            }
            if edges.contains(&(u.min(v), u.max(v))) {
                continue;
            }
            if spec.pattern.has_edge(cu, cv)
                && !same_pair_component(&edges, &class_of, u, v)
            {
                rejected += 1;
                continue;
            }
            push_edge(&mut edges, u, v);
        }
    }

    if spec.kempe_complete {
        // Repair pass: connect every class-pair union. Each added edge
        // joins two distinct components of some pair-union, so the pass
        // terminates.
        loop {
            let n = class_of.len();
            let graph = Graph::new(n, &edges).expect("sampled edges are simple");
            let mut added = false;
            'pairs: for a in 0..k {
                for b in (a + 1)..k {
                    let union = VertexSet::from_iter(
                        n,
                        (0..n).filter(|&v| class_of[v] == a || class_of[v] == b),
                    );
                    let comps = graph.components_within(&union);
                    if comps.len() <= 1 {
                        continue;
                    }
                    let main = comps
                        .iter()
                        .position(|c| c.contains(a))
                        .expect("representative a is in the union");
                    let stray = &comps[(0..comps.len()).find(|&i| i != main).unwrap()];
                    let joined = match stray.iter().find(|&v| class_of[v] == b) {
                        // A b-colored stray vertex can reach the main
                        // component's a-representative directly.
                        Some(u) => push_edge(&mut edges, u, a),
                        // An all-a stray needs any b-colored vertex
                        // outside itself.
                        None => {
                            let u = stray.min().unwrap();
                            let w = (0..n)
                                .find(|&w| class_of[w] == b && !stray.contains(w))
                                .expect("class b is nonempty");
                            push_edge(&mut edges, u, w)
                        }
                    };
                    assert!(joined, "repair edge was already present");
                    added = true;
                    break 'pairs;
                }
            }
            if !added {
                break;
            }
        }
    }

    let n = class_of.len();
    let graph = Graph::new(n, &edges).expect("sampled edges are simple");
    let classes: Vec<Vec<usize>> = (0..k)
        .map(|c| (0..n).filter(|&v| class_of[v] == c).collect())
        .collect();
    let transversal: Vec<usize> = (0..k).collect();
    let instance = ColoredInstance::new(graph, classes, transversal)?;
    Ok(SampledInstance {
        instance,
        rejected_extra_edges: rejected,
    })
}

/// Whether `u` and `v` already lie in the same component of the union of
/// their two classes (so joining them does not merge distinct chains).
fn same_pair_component(
    edges: &[(usize, usize)],
    class_of: &[usize],
    u: usize,
    v: usize,
) -> bool {
    let n = class_of.len();
    let (a, b) = (class_of[u], class_of[v]);
    let graph = Graph::new(n, edges).expect("sampled edges are simple");
    let union = VertexSet::from_iter(n, (0..n).filter(|&w| class_of[w] == a || class_of[w] == b));
    graph
        .components_within(&union)
        .iter()
        .any(|c| c.contains(u) && c.contains(v))
}

/// All graphs on exactly `n` vertices, one canonical representative per
/// isomorphism class, in ascending order of their canonical encoding.
///
/// Classes on `n` vertices are generated by extending the classes on
/// `n - 1` vertices with one new vertex and every possible neighborhood,
/// then deduplicating canonically: every graph arises this way because
/// deleting its last vertex leaves a graph on `n - 1` vertices.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>, GeneratorError> {
    if n > ENUMERATION_MAX_VERTICES || n > CANONICAL_MAX_VERTICES {
        return Err(GeneratorError::TooLargeForEnumeration {
            n,
            max: ENUMERATION_MAX_VERTICES,
        });
    }
    if n == 0 {
        return Ok(vec![Graph::empty(0)]);
    }
    let mut current = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut seen = std::collections::BTreeMap::new();
        for g in &current {
            let base_edges = g.edges();
            for mask in 0u32..(1 << (size - 1)) {
                let mut edges = base_edges.clone();
                for v in 0..(size - 1) {
                    if mask >> v & 1 == 1 {
                        edges.push((v, size - 1));
                    }
                }
                let candidate = Graph::new(size, &edges).expect("extension is simple");
                let key = candidate.canonical_bits();
                seen.entry(key).or_insert(candidate);
            }
        }
        current = seen.into_values().collect();
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kempe::{h_graph, is_kempe_coloring};

    #[test]
    fn g7_shape() {
        let g7 = family(&FamilySpec::G7).unwrap();
        assert_eq!(g7.n(), 7);
        assert_eq!(g7.edge_count(), 8);
        let mut degrees: Vec<usize> = (0..7).map(|v| g7.degree(v)).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(degrees, vec![3, 3, 2, 2, 2, 2, 2]);
        assert_eq!(girth(&g7), Some(5));
        // The apex joins the two antipodal cycle vertices.
        assert!(g7.has_edge(0, 6) && g7.has_edge(3, 6));
    }

    #[test]
    fn petersen_shape() {
        let p = family(&FamilySpec::Petersen).unwrap();
        assert_eq!(p.n(), 10);
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
        assert_eq!(girth(&p), Some(5));
        assert!(!is_bipartite(&p));
    }

    #[test]
    fn hourglass_shape() {
        let h = family(&FamilySpec::Hourglass).unwrap();
        assert_eq!(h.n(), 5);
        assert_eq!(h.edge_count(), 6);
        assert_eq!((0..5).filter(|&v| h.degree(v) == 4).count(), 1);
    }

    #[test]
    fn family_edge_lists_are_pinned() {
        assert_eq!(
            family(&FamilySpec::G7).unwrap().edges(),
            vec![(0, 1), (0, 5), (0, 6), (1, 2), (2, 3), (3, 4), (3, 6), (4, 5)]
        );
        assert_eq!(
            family(&FamilySpec::Petersen).unwrap().edges(),
            vec![
                (0, 1), (0, 4), (0, 5), (1, 2), (1, 6), (2, 3), (2, 7), (3, 4),
                (3, 8), (4, 9), (5, 7), (5, 8), (6, 8), (6, 9), (7, 9)
            ]
        );
        assert_eq!(
            family(&FamilySpec::Hourglass).unwrap().edges(),
            vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]
        );
        assert_eq!(
            family(&FamilySpec::Prism).unwrap().edges(),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
        );
        assert_eq!(
            family(&FamilySpec::Wagner).unwrap().edges(),
            vec![
                (0, 1), (0, 4), (0, 7), (1, 2), (1, 5), (2, 3), (2, 6),
                (3, 4), (3, 7), (4, 5), (5, 6), (6, 7)
            ]
        );
        assert_eq!(
            family(&FamilySpec::C5Plus).unwrap().edges(),
            vec![(0, 1), (0, 2), (0, 4), (1, 2), (2, 3), (3, 4)]
        );
        assert!(family(&FamilySpec::Cycle(2)).is_err());
        assert!(family(&FamilySpec::Wheel(2)).is_err());
    }

    #[test]
    fn zero_internal_path_system_is_the_pattern_itself() {
        let k4 = family(&FamilySpec::Complete(4)).unwrap();
        let sampled = random_path_system(&PathSystemSpec {
            pattern: k4.clone(),
            seed: 1,
            max_internal: 0,
            extra_edge_prob: 0.0,
            kempe_complete: false,
        })
        .unwrap();
        assert_eq!(sampled.instance.graph, k4);
        assert!(sampled.instance.coloring().classes().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn path_system_realizes_pattern_in_derived_graph() {
        let c5 = family(&FamilySpec::Cycle(5)).unwrap();
        let sampled = random_path_system(&PathSystemSpec {
            pattern: c5.clone(),
            seed: 7,
            max_internal: 4,
            extra_edge_prob: 0.3,
            kempe_complete: false,
        })
        .unwrap();
        let h = h_graph(&sampled.instance).graph;
        for (a, b) in c5.edges() {
            assert!(h.has_edge(a, b));
        }
    }

    #[test]
    fn kempe_complete_forces_connected_pairs() {
        let k5 = family(&FamilySpec::Complete(5)).unwrap();
        let sampled = random_path_system(&PathSystemSpec {
            pattern: k5,
            seed: 3,
            max_internal: 4,
            extra_edge_prob: 0.2,
            kempe_complete: true,
        })
        .unwrap();
        assert!(is_kempe_coloring(&sampled.instance).0);
    }

    #[test]
    fn sampled_instances_are_valid_across_seeds() {
        let patterns = [
            family(&FamilySpec::Cycle(5)).unwrap(),
            family(&FamilySpec::Hourglass).unwrap(),
            family(&FamilySpec::K23).unwrap(),
        ];
        for pattern in &patterns {
            for seed in 0..1000 {
                let sampled = random_path_system(&PathSystemSpec {
                    pattern: pattern.clone(),
                    seed,
                    max_internal: 6,
                    extra_edge_prob: 0.4,
                    kempe_complete: seed % 2 == 0,
                })
                .unwrap();
                // Construction re-validates everything; also check the
                // derived graph still contains the pattern.
                let h = h_graph(&sampled.instance).graph;
                for (a, b) in pattern.edges() {
                    assert!(h.has_edge(a, b), "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_graphs(3).unwrap().len(), 4);
        assert_eq!(enumerate_graphs(4).unwrap().len(), 11);
        let cumulative: usize = (1..=6).map(|n| enumerate_graphs(n).unwrap().len()).sum();
        assert_eq!(cumulative, 208);
        assert!(enumerate_graphs(8).is_err());
    }

    #[test]
    fn enumeration_matches_labeled_brute_force_on_four_vertices() {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut keys = std::collections::HashSet::new();
        for mask in 0u32..64 {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            keys.insert(Graph::new(4, &edges).unwrap().canonical_key().unwrap());
        }
        let enumerated: std::collections::HashSet<Vec<u8>> = enumerate_graphs(4)
            .unwrap()
            .iter()
            .map(|g| g.canonical_key().unwrap())
            .collect();
        assert_eq!(keys, enumerated);
    }

    fn girth(g: &Graph) -> Option<usize> {
        // Shortest cycle through any start vertex by BFS.
        let mut best: Option<usize> = None;
        for start in 0..g.n() {
            let mut dist = vec![usize::MAX; g.n()];
            let mut parent = vec![usize::MAX; g.n()];
            dist[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in g.neighbors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let cycle = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(cycle, |b: usize| b.min(cycle)));
                    }
                }
            }
        }
        best
    }

    fn is_bipartite(g: &Graph) -> bool {
        let mut color = vec![usize::MAX; g.n()];
        for start in 0..g.n() {
            if color[start] != usize::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in g.neighbors(v) {
                    if color[w] == usize::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }
}
