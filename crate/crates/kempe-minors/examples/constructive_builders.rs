//! The three certificate builders on hand-picked inputs: a matchable
//! anticlique, a spanning ring, and a unicyclic pattern.
//!
//! ```bash
//! cargo run --example constructive_builders
//! ```

use kempe_minors::certificates::{verify, TargetPattern};
use kempe_minors::constructive::{
    certificate_from_matching, cycle_certificate, find_matchable_anticlique,
    unicyclic_certificate,
};
use kempe_minors::generators::{family, random_path_system, FamilySpec, PathSystemSpec};
use kempe_minors::graph::Graph;
use kempe_minors::kempe::ColoredInstance;
use kempe_minors::zmodel::z_of;

fn main() {
    // A star pattern on a complete host: the leaves form the anticlique.
    let k5 = family(&FamilySpec::Complete(5)).unwrap();
    let inst = ColoredInstance::new(
        k5,
        (0..5).map(|v| vec![v]).collect(),
        (0..5).collect(),
    )
    .unwrap();
    let star = TargetPattern::new(&inst, vec![(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    let witness = find_matchable_anticlique(&inst, &star).unwrap();
    println!(
        "star: anticlique {:?}, matching {:?}",
        witness.anticlique, witness.matching
    );
    let cert = certificate_from_matching(&inst, &star, &witness).unwrap();
    println!("  verified: {}", verify(&inst, &star, &cert).is_empty());

    // The ring builder on a doubled 5-cycle.
    let z = z_of(&family(&FamilySpec::Cycle(5)).unwrap()).unwrap();
    let cert = cycle_certificate(&z.instance, &[0, 1, 2, 3, 4]).unwrap();
    println!("ring bags on the doubled 5-cycle:");
    for (root, bag) in cert.bags() {
        println!("  root {root}: {:?}", bag.to_vec());
    }

    // A unicyclic pattern (triangle with a pendant) over a random path
    // system.
    let paw = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
    let sampled = random_path_system(&PathSystemSpec {
        pattern: paw.clone(),
        seed: 4,
        max_internal: 4,
        extra_edge_prob: 0.0,
        kempe_complete: false,
    })
    .unwrap();
    let target = TargetPattern::from_graph(&sampled.instance, &paw).unwrap();
    let cert = unicyclic_certificate(&sampled.instance, &target).unwrap();
    println!(
        "unicyclic pattern on {} host vertices: verified {}",
        sampled.instance.graph.n(),
        verify(&sampled.instance, &target, &cert).is_empty()
    );
}
