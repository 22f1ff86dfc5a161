//! The doubled instance `Z(G)` and its certificate arithmetic.
//!
//! `Z(G)` lives on two copies of each base vertex: `(x, 1)` is encoded as
//! `2x` and `(x, 2)` as `2x + 1`. For every base edge `xy` the three
//! edges `(x,1)(y,2)`, `(x,2)(y,1)`, `(x,2)(y,2)` are present; edges
//! between first copies are omitted. The canonical coloring pairs the two
//! copies of each base vertex, and the transversal picks all first
//! copies, so the derived graph of `Z(G)` is the base graph itself.
//!
//! Certificates of `Z(G)` with all bags of size two correspond exactly to
//! *good permutations* of the base: fixed-point-free maps `f` with
//! `x f(x)` always an edge, such that for every edge `xy` either `f(x)`
//! is adjacent to `y` or `f(y)`, or `f(y)` is adjacent to `x` or `f(x)`.
//! When no good permutation exists and the derived graph is
//! triangle-free, a counting bound over anticliques can rule out every
//! certificate shape at once; [`counting_unsat_check`] automates that
//! argument and reports the full bound table.

use serde::Serialize;
use thiserror::Error;

use crate::certificates::RootedCertificate;
use crate::graph::{Graph, VertexSet};
use crate::kempe::{ColoredInstance, InstanceError};

/// Search bound for [`find_good_permutation`]; backtracking over vertex
/// images is exhaustive below it.
pub const GOOD_PERM_MAX_VERTICES: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZError {
    #[error("doubling requires at least one base vertex")]
    EmptyBase,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("good-permutation search supports at most {max} vertices, got {n}")]
    TooLargeForSearch { n: usize, max: usize },
    #[error("map is not a permutation: {0}")]
    NotAPermutation(String),
    #[error("condition (i) fails at vertex {x}: image {image} is not a neighbor")]
    ConditionOne { x: usize, image: usize },
    #[error("condition (ii) fails at edge {{{x}, {y}}}")]
    ConditionTwo { x: usize, y: usize },
}

/// The doubled instance together with its base graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZInstance {
    pub base: Graph,
    pub instance: ColoredInstance,
}

impl ZInstance {
    /// First copy `(x, 1)` of a base vertex.
    pub fn copy1(&self, x: usize) -> usize {
        2 * x
    }

    /// Second copy `(x, 2)` of a base vertex.
    pub fn copy2(&self, x: usize) -> usize {
        2 * x + 1
    }

    /// The base vertex under a doubled vertex.
    pub fn base_vertex(&self, v: usize) -> usize {
        v / 2
    }
}

/// Builds `Z(g)` with its canonical coloring and transversal.
pub fn z_of(g: &Graph) -> Result<ZInstance, ZError> {
    if g.n() == 0 {
        return Err(ZError::EmptyBase);
    }
    let n = g.n();
    let mut edges = Vec::with_capacity(3 * g.edge_count());
    for (x, y) in g.edges() {
        edges.push((2 * x, 2 * y + 1));
        edges.push((2 * x + 1, 2 * y));
        edges.push((2 * x + 1, 2 * y + 1));
    }
    let graph = Graph::new(2 * n, &edges).expect("doubling preserves simplicity");
    let classes: Vec<Vec<usize>> = (0..n).map(|x| vec![2 * x, 2 * x + 1]).collect();
    let transversal: Vec<usize> = (0..n).map(|x| 2 * x).collect();
    let instance = ColoredInstance::new(graph, classes, transversal)?;
    Ok(ZInstance {
        base: g.clone(),
        instance,
    })
}

/// The involution swapping the two copies of a base vertex.
pub fn bar(z: &ZInstance, v: usize) -> usize {
    debug_assert!(v < z.instance.graph.n());
    v ^ 1
}

/// A permutation of the base vertex set satisfying conditions (i) and
/// (ii); equivalent to an all-bags-of-size-two certificate of `Z(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPermutation {
    images: Vec<usize>,
}

impl GoodPermutation {
    pub fn image(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// Checks conditions (i) and (ii) for an explicit map.
pub fn check_good_permutation(g: &Graph, images: &[usize]) -> Result<GoodPermutation, ZError> {
    let n = g.n();
    if images.len() != n {
        return Err(ZError::NotAPermutation(format!(
            "expected {n} images, got {}",
            images.len()
        )));
    }
    let mut seen = vec![false; n];
    for &y in images {
        if y >= n {
            return Err(ZError::NotAPermutation(format!("image {y} out of range")));
        }
        if seen[y] {
            return Err(ZError::NotAPermutation(format!("image {y} repeated")));
        }
        seen[y] = true;
    }
    for (x, &image) in images.iter().enumerate() {
        if !g.has_edge(x, image) {
            return Err(ZError::ConditionOne { x, image });
        }
    }
    for (x, y) in g.edges() {
        if !edge_condition_holds(g, images, x, y) {
            return Err(ZError::ConditionTwo { x, y });
        }
    }
    Ok(GoodPermutation {
        images: images.to_vec(),
    })
}

fn edge_condition_holds(g: &Graph, images: &[usize], x: usize, y: usize) -> bool {
    let (fx, fy) = (images[x], images[y]);
    g.has_edge(fx, y) || g.has_edge(fx, fy) || g.has_edge(fy, x)
}

/// Searches for a good permutation by backtracking over vertex images,
/// assigning vertices in descending-degree order and checking condition
/// (ii) as soon as both endpoints of an edge have images. Returns `None`
/// only after exhausting the search space.
pub fn find_good_permutation(g: &Graph) -> Result<Option<GoodPermutation>, ZError> {
    let n = g.n();
    if n > GOOD_PERM_MAX_VERTICES {
        return Err(ZError::TooLargeForSearch {
            n,
            max: GOOD_PERM_MAX_VERTICES,
        });
    }
    if n == 0 {
        return Ok(Some(GoodPermutation { images: vec![] }));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let mut images = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign_images(g, &order, 0, &mut images, &mut used) {
        Ok(Some(GoodPermutation { images }))
    } else {
        Ok(None)
    }
}

fn assign_images(
    g: &Graph,
    order: &[usize],
    idx: usize,
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if idx == order.len() {
        return true;
    }
    let x = order[idx];
    for &y in g.neighbors(x) {
        if used[y] {
            continue;
        }
        images[x] = y;
        used[y] = true;
        let ok = g
            .neighbors(x)
            .iter()
            .all(|&w| images[w] == usize::MAX || edge_condition_holds(g, images, x, w));
        if ok && assign_images(g, order, idx + 1, images, used) {
            return true;
        }
        images[x] = usize::MAX;
        used[y] = false;
    }
    false
}

/// Translates a good permutation of the base into a certificate of the
/// doubled instance: the bag of `(x, 1)` is `{(x, 1), (f(x), 2)}`.
pub fn permutation_certificate(
    z: &ZInstance,
    f: &GoodPermutation,
) -> Result<RootedCertificate, ZError> {
    // Re-validate against the base so a stale or foreign permutation is
    // rejected rather than silently producing a broken certificate.
    let f = check_good_permutation(&z.base, f.images())?;
    let mut cert = RootedCertificate::new();
    for x in 0..z.base.n() {
        cert.insert_bag(
            z.copy1(x),
            VertexSet::from_iter(z.instance.graph.n(), [z.copy1(x), z.copy2(f.image(x))]),
        );
    }
    Ok(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CountingVerdict {
    UnsatCertified,
    Inconclusive,
}

/// One row of the counting bound table: a nonempty anticlique `A` of the
/// derived graph with its neighborhood and the implied lower bound on
/// `q`, the total size of all bags. Bags rooted in `N(A)` need at least
/// three vertices, remaining non-`A` bags at least two, bags in `A`
/// exactly one, hence `q >= 3|N(A)| + 2(k - |A| - |N(A)|) + |A|`.
#[derive(Clone, Debug, Serialize)]
pub struct AnticliqueBound {
    pub anticlique: Vec<usize>,
    pub neighborhood: Vec<usize>,
    pub q_lower_bound: usize,
    pub satisfies_expansion: bool,
}

/// Outcome of the counting-based unsatisfiability check.
#[derive(Clone, Debug, Serialize)]
pub struct CountingReport {
    /// Whether the derived graph is triangle-free; the per-edge size
    /// forcing is only valid without triangles, so nothing is certified
    /// otherwise.
    pub applicable: bool,
    /// `None` when the base exceeds the search bound.
    pub good_perm_exists: Option<bool>,
    /// First anticlique (in subset order) with `|N(A)| <= |A|`, if any.
    pub violating_anticlique: Option<Vec<usize>>,
    pub verdict: CountingVerdict,
    /// `|V(Z(G))| = 2k`: any certificate's bags must fit inside it.
    pub capacity: usize,
    /// Smallest `q` lower bound over all nonempty anticliques.
    pub min_q_bound: Option<usize>,
    pub bounds: Vec<AnticliqueBound>,
}

/// Attempts to certify that `Z(G)` admits no rooted certificate for the
/// full derived pattern, by counting alone.
///
/// Certified exactly when (a) the derived graph is triangle-free, (b) the
/// base has no good permutation, and (c) every nonempty anticlique `A`
/// satisfies `|N(A)| >= |A| + 1`. Soundness: in any certificate the
/// size-one bags form an anticlique `A` of the derived graph; if `A` is
/// empty all bags have size exactly two, which is a good permutation,
/// and otherwise every neighbor bag of `A` needs at least three vertices,
/// so `q >= 2k + |N(A)| - |A| >= 2k + 1`, exceeding `|V(Z(G))| = 2k`.
pub fn counting_unsat_check(z: &ZInstance) -> CountingReport {
    let h = crate::kempe::h_graph(&z.instance).graph;
    let k = h.n();
    let capacity = 2 * k;
    let applicable = is_triangle_free(&h);

    let good_perm_exists = match find_good_permutation(&z.base) {
        Ok(result) => Some(result.is_some()),
        Err(_) => None,
    };

    let mut bounds = Vec::new();
    let mut violating = None;
    if k <= 20 {
        for mask in 1u32..(1 << k) {
            let members: Vec<usize> = (0..k).filter(|&v| mask >> v & 1 == 1).collect();
            if !is_anticlique(&h, &members) {
                continue;
            }
            let neighborhood = neighborhood_of(&h, &members);
            let a = members.len();
            let n_a = neighborhood.len();
            let q_lower_bound = 3 * n_a + 2 * (k - a - n_a) + a;
            let satisfies_expansion = n_a > a;
            if !satisfies_expansion && violating.is_none() {
                violating = Some(members.clone());
            }
            bounds.push(AnticliqueBound {
                anticlique: members,
                neighborhood,
                q_lower_bound,
                satisfies_expansion,
            });
        }
    }

    let min_q_bound = bounds.iter().map(|b| b.q_lower_bound).min();
    let certified = applicable
        && good_perm_exists == Some(false)
        && violating.is_none()
        && !bounds.is_empty();
    CountingReport {
        applicable,
        good_perm_exists,
        violating_anticlique: violating,
        verdict: if certified {
            CountingVerdict::UnsatCertified
        } else {
            CountingVerdict::Inconclusive
        },
        capacity,
        min_q_bound,
        bounds,
    }
}

fn is_triangle_free(g: &Graph) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| g.neighbors(u).iter().all(|&w| w == v || !g.has_edge(w, v)))
}

fn is_anticlique(g: &Graph, members: &[usize]) -> bool {
    members
        .iter()
        .enumerate()
        .all(|(i, &u)| members[i + 1..].iter().all(|&v| !g.has_edge(u, v)))
}

fn neighborhood_of(g: &Graph, members: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = (0..g.n())
        .filter(|&v| !members.contains(&v) && members.iter().any(|&u| g.has_edge(u, v)))
        .collect();
    out.sort_unstable();
    out
}

/// Whether `v` lies on a cycle of length at most four.
pub fn lies_on_short_cycle(g: &Graph, v: usize) -> bool {
    let nbrs = g.neighbors(v);
    for (i, &u) in nbrs.iter().enumerate() {
        for &w in &nbrs[i + 1..] {
            if g.has_edge(u, w) {
                return true;
            }
            if g.neighbors(u)
                .iter()
                .any(|&x| x != v && x != w && g.has_edge(x, w))
            {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{verify, TargetPattern};
    use crate::generators::{family, FamilySpec};
    use itertools::Itertools;

    /// Brute-force oracle: try all `n!` maps directly against the two
    /// conditions. Lives only in tests and shares no code with the
    /// backtracking search path.
    fn brute_force_good_permutation(g: &Graph) -> Option<Vec<usize>> {
        let n = g.n();
        (0..n).permutations(n).find(|images| {
            (0..n).all(|x| g.has_edge(x, images[x]))
                && g.edges().iter().all(|&(x, y)| {
                    let (fx, fy) = (images[x], images[y]);
                    g.has_edge(fx, y) || g.has_edge(fx, fy) || g.has_edge(fy, x)
                })
        })
    }

    #[test]
    fn z_of_counts() {
        let k2 = family(&FamilySpec::Complete(2)).unwrap();
        let z = z_of(&k2).unwrap();
        assert_eq!(z.instance.graph.n(), 4);
        assert_eq!(z.instance.graph.edge_count(), 3);

        let g7 = family(&FamilySpec::G7).unwrap();
        let z7 = z_of(&g7).unwrap();
        assert_eq!(z7.instance.graph.n(), 14);
        assert_eq!(z7.instance.graph.edge_count(), 3 * 8);

        let z_edgeless = z_of(&Graph::empty(3)).unwrap();
        assert_eq!(z_edgeless.instance.graph.n(), 6);
        assert_eq!(z_edgeless.instance.graph.edge_count(), 0);

        assert_eq!(z_of(&Graph::empty(0)), Err(ZError::EmptyBase));
    }

    #[test]
    fn bar_is_a_class_preserving_involution() {
        let z = z_of(&family(&FamilySpec::Cycle(5)).unwrap()).unwrap();
        for v in 0..z.instance.graph.n() {
            assert_eq!(bar(&z, bar(&z, v)), v);
            assert_eq!(
                z.instance.coloring().class_of(v),
                z.instance.coloring().class_of(bar(&z, v))
            );
        }
        assert_eq!(bar(&z, z.copy1(3)), z.copy2(3));
    }

    #[test]
    fn rotation_is_good_on_k3_and_c4() {
        let k3 = family(&FamilySpec::Complete(3)).unwrap();
        assert_eq!(brute_force_good_permutation(&k3), Some(vec![1, 2, 0]));
        assert!(find_good_permutation(&k3).unwrap().is_some());

        let c4 = family(&FamilySpec::Cycle(4)).unwrap();
        assert!(brute_force_good_permutation(&c4).is_some());
        assert!(find_good_permutation(&c4).unwrap().is_some());
    }

    #[test]
    fn g7_has_no_good_permutation() {
        let g7 = family(&FamilySpec::G7).unwrap();
        assert!(brute_force_good_permutation(&g7).is_none());
        assert!(find_good_permutation(&g7).unwrap().is_none());
    }

    #[test]
    fn permutation_certificates_verify() {
        for g in [
            family(&FamilySpec::Complete(3)).unwrap(),
            family(&FamilySpec::Cycle(4)).unwrap(),
            family(&FamilySpec::Cycle(5)).unwrap(),
        ] {
            let z = z_of(&g).unwrap();
            let f = find_good_permutation(&g).unwrap().expect("good permutation");
            let cert = permutation_certificate(&z, &f).unwrap();
            let pattern = TargetPattern::full(&z.instance);
            assert!(verify(&z.instance, &pattern, &cert).is_empty());
            assert!(cert.bags().values().all(|bag| bag.len() == 2));
        }
    }

    #[test]
    fn non_good_map_is_rejected() {
        // Rotation by two on a 6-cycle maps each vertex to a non-neighbor.
        let c6 = family(&FamilySpec::Cycle(6)).unwrap();
        let z = z_of(&c6).unwrap();
        let images = vec![2, 3, 4, 5, 0, 1];
        let fake = GoodPermutation { images };
        assert!(matches!(
            permutation_certificate(&z, &fake),
            Err(ZError::ConditionOne { .. })
        ));
    }

    #[test]
    fn counting_certifies_g7() {
        let z = z_of(&family(&FamilySpec::G7).unwrap()).unwrap();
        let report = counting_unsat_check(&z);
        assert!(report.applicable);
        assert_eq!(report.good_perm_exists, Some(false));
        assert_eq!(report.verdict, CountingVerdict::UnsatCertified);
        assert_eq!(report.capacity, 14);
        assert_eq!(report.min_q_bound, Some(15));
    }

    #[test]
    fn counting_certifies_petersen() {
        let z = z_of(&family(&FamilySpec::Petersen).unwrap()).unwrap();
        let report = counting_unsat_check(&z);
        assert_eq!(report.verdict, CountingVerdict::UnsatCertified);
        assert!(report.min_q_bound.unwrap() > report.capacity);
    }

    #[test]
    fn counting_is_inconclusive_on_c5() {
        let z = z_of(&family(&FamilySpec::Cycle(5)).unwrap()).unwrap();
        let report = counting_unsat_check(&z);
        assert_eq!(report.good_perm_exists, Some(true));
        assert_eq!(report.verdict, CountingVerdict::Inconclusive);
    }

    #[test]
    fn short_cycle_detection() {
        let c5 = family(&FamilySpec::Cycle(5)).unwrap();
        assert!(!lies_on_short_cycle(&c5, 0));
        let c4 = family(&FamilySpec::Cycle(4)).unwrap();
        assert!(lies_on_short_cycle(&c4, 2));
        let k3 = family(&FamilySpec::Complete(3)).unwrap();
        assert!(lies_on_short_cycle(&k3, 1));
    }
}
