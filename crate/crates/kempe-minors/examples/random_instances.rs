//! Seeded instance sampling and a miniature fuzz loop.
//!
//! Every sampled instance realizes its pattern inside the derived graph;
//! the loop below solves a batch of hourglass instances and reports any
//! unsatisfiable one with its replay seed (none are expected).
//!
//! ```bash
//! cargo run --example random_instances
//! ```

use kempe_minors::certificates::{solve, SolveOptions, SolveStatus, TargetPattern};
use kempe_minors::generators::{family, random_path_system, FamilySpec, PathSystemSpec};
use kempe_minors::kempe::{h_graph, is_kempe_coloring};

fn main() {
    let hourglass = family(&FamilySpec::Hourglass).unwrap();

    let sampled = random_path_system(&PathSystemSpec {
        pattern: hourglass.clone(),
        seed: 20,
        max_internal: 4,
        extra_edge_prob: 0.3,
        kempe_complete: false,
    })
    .unwrap();
    println!(
        "seed 20: {} vertices, {} edges, {} noise edges rejected",
        sampled.instance.graph.n(),
        sampled.instance.graph.edge_count(),
        sampled.rejected_extra_edges
    );
    println!(
        "derived graph contains the pattern: {}",
        hourglass
            .edges()
            .iter()
            .all(|&(a, b)| h_graph(&sampled.instance).graph.has_edge(a, b))
    );

    // Forcing a Kempe coloring connects every class pair.
    let complete = random_path_system(&PathSystemSpec {
        pattern: family(&FamilySpec::Complete(5)).unwrap(),
        seed: 20,
        max_internal: 2,
        extra_edge_prob: 0.0,
        kempe_complete: true,
    })
    .unwrap();
    println!(
        "kempe-complete sample: {:?}",
        is_kempe_coloring(&complete.instance)
    );

    let mut sat = 0;
    for seed in 100..140 {
        let sampled = random_path_system(&PathSystemSpec {
            pattern: hourglass.clone(),
            seed,
            max_internal: 4,
            extra_edge_prob: 0.25,
            kempe_complete: false,
        })
        .unwrap();
        let pattern = TargetPattern::from_graph(&sampled.instance, &hourglass).unwrap();
        let verdict = solve(&sampled.instance, &pattern, &SolveOptions::default()).unwrap();
        match verdict.status {
            SolveStatus::Sat => sat += 1,
            other => println!("seed {seed}: {other:?} <- replay this seed"),
        }
    }
    println!("fuzz: {sat}/40 satisfiable");
}
