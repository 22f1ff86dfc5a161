//! The seven-vertex base whose doubled instance has no rooted
//! certificate: a 6-cycle plus an apex joined to two antipodal cycle
//! vertices. Both deciders agree, the exact solver by exhaustion and
//! the counting certifier by the 15 > 14 bound.
//!
//! ```bash
//! cargo run --example doubling_counterexample
//! ```

use kempe_minors::certificates::{solve, SolveOptions, TargetPattern};
use kempe_minors::generators::{family, FamilySpec};
use kempe_minors::kempe::h_graph;
use kempe_minors::zmodel::{counting_unsat_check, z_of};

fn main() {
    let g7 = family(&FamilySpec::G7).unwrap();
    let z = z_of(&g7).unwrap();
    println!(
        "base: 7 vertices, 8 edges; doubled: {} vertices, {} edges",
        z.instance.graph.n(),
        z.instance.graph.edge_count()
    );
    println!(
        "derived graph has {} of 21 possible edges",
        h_graph(&z.instance).graph.edge_count()
    );

    let pattern = TargetPattern::full(&z.instance);
    let verdict = solve(&z.instance, &pattern, &SolveOptions::default()).unwrap();
    println!(
        "exact search: {:?} after {} nodes",
        verdict.status, verdict.stats.nodes
    );

    let report = counting_unsat_check(&z);
    println!(
        "counting: {:?} (every certificate would need at least {} vertices, only {} exist)",
        report.verdict,
        report.min_q_bound.unwrap(),
        report.capacity
    );
    println!("bound rows (anticlique, neighborhood, forced total):");
    for row in report.bounds.iter().take(5) {
        println!(
            "  A = {:?}, N(A) = {:?} -> q >= {}",
            row.anticlique, row.neighborhood, row.q_lower_bound
        );
    }
    println!("  ... ({} rows total)", report.bounds.len());
}
