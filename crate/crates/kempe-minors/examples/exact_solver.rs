//! Solving, verifying, and the SAT-only path reduction.
//!
//! ```bash
//! cargo run --example exact_solver
//! ```

use kempe_minors::certificates::{
    reduce_for_sat, solve, verify, SolveOptions, TargetPattern,
};
use kempe_minors::generators::{family, random_path_system, FamilySpec, PathSystemSpec};
use kempe_minors::zmodel::z_of;

fn main() {
    let wheel = family(&FamilySpec::Wheel(5)).unwrap();
    let z = z_of(&wheel).unwrap();
    let pattern = TargetPattern::full(&z.instance);
    let verdict = solve(&z.instance, &pattern, &SolveOptions::default()).unwrap();
    println!(
        "doubled wheel: {:?} in {} nodes (depth {})",
        verdict.status, verdict.stats.nodes, verdict.stats.max_depth
    );
    let cert = verdict.certificate.unwrap();
    println!("certificate: {}", kempe_minors::certificates::certificate_to_json(&cert));
    assert!(verify(&z.instance, &pattern, &cert).is_empty());

    // Reduction keeps one two-colored path per pattern edge; a noisy
    // instance shrinks considerably, and certificates lift back.
    let c5 = family(&FamilySpec::Cycle(5)).unwrap();
    let sampled = random_path_system(&PathSystemSpec {
        pattern: c5.clone(),
        seed: 12,
        max_internal: 6,
        extra_edge_prob: 0.5,
        kempe_complete: false,
    })
    .unwrap();
    let target = TargetPattern::from_graph(&sampled.instance, &c5).unwrap();
    let reduction = reduce_for_sat(&sampled.instance, &target).unwrap();
    println!(
        "reduction: {} -> {} vertices, {} -> {} edges",
        sampled.instance.graph.n(),
        reduction.instance.graph.n(),
        sampled.instance.graph.edge_count(),
        reduction.instance.graph.edge_count()
    );
    let reduced_pattern = TargetPattern::from_graph(&reduction.instance, &c5).unwrap();
    let verdict = solve(&reduction.instance, &reduced_pattern, &SolveOptions::default()).unwrap();
    let lifted = reduction.lift(
        verdict.certificate.as_ref().unwrap(),
        sampled.instance.graph.n(),
    );
    println!(
        "lifted certificate verifies on the original: {}",
        verify(&sampled.instance, &target, &lifted).is_empty()
    );
}
