//! Chains and the derived graph on a hand-built colored instance.
//!
//! ```bash
//! cargo run --example kempe_chains
//! ```

use kempe_minors::graph::Graph;
use kempe_minors::kempe::{
    h_graph, is_kempe_coloring, kempe_chains, transform_instance, ColoredInstance, Transform,
};

fn main() {
    // A 6-cycle colored with three classes of two opposite vertices each.
    let c6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
    let inst = ColoredInstance::new(
        c6,
        vec![vec![0, 3], vec![1, 4], vec![2, 5]],
        vec![0, 1, 2],
    )
    .unwrap();

    println!("chains (class pair -> vertices):");
    for chain in kempe_chains(&inst, false) {
        println!(
            "  ({}, {}) -> {:?}",
            chain.class_a,
            chain.class_b,
            chain.vertices.to_vec()
        );
    }

    let h = h_graph(&inst);
    println!("derived graph edges: {:?}", h.graph.edges());

    let (kempe, connected_pairs) = is_kempe_coloring(&inst);
    println!("kempe coloring: {kempe} ({connected_pairs} connected pairs)");

    // Growing the instance: a disjoint pair of fresh singleton classes.
    let grown = transform_instance(&inst, &Transform::DisjointClique(2)).unwrap();
    println!(
        "after adding a 2-clique: {} classes, derived edges {:?}",
        grown.k(),
        h_graph(&grown).graph.edges()
    );
}
