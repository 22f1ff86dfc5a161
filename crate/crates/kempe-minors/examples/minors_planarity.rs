//! Unrooted minors, planarity by forbidden minors, and the reports on
//! 5-class instances with all pairs chain-connected.
//!
//! ```bash
//! cargo run --example minors_planarity
//! ```

use kempe_minors::generators::{family, random_path_system, FamilySpec, PathSystemSpec};
use kempe_minors::minors::{has_minor, is_planar, validate_remarks};

fn main() {
    let petersen = family(&FamilySpec::Petersen).unwrap();
    let k5 = family(&FamilySpec::Complete(5)).unwrap();
    let embedding = has_minor(&petersen, &k5).unwrap().unwrap();
    println!("k5 inside petersen:");
    for (i, bag) in embedding.bags().iter().enumerate() {
        println!("  branch set {i}: {:?}", bag.to_vec());
    }

    for (name, spec) in [
        ("k4", FamilySpec::Complete(4)),
        ("petersen", FamilySpec::Petersen),
        ("wagner", FamilySpec::Wagner),
    ] {
        let g = family(&spec).unwrap();
        println!("{name}: planar = {}", is_planar(&g).unwrap());
    }

    // Any 5-class instance whose transversal pairs are all joined by
    // two-colored paths is nonplanar with a k5 minor.
    let sampled = random_path_system(&PathSystemSpec {
        pattern: k5,
        seed: 33,
        max_internal: 4,
        extra_edge_prob: 0.0,
        kempe_complete: false,
    })
    .unwrap();
    let report = validate_remarks(&sampled.instance).unwrap();
    println!(
        "path system on {} vertices: premises {}, planar {}, k5 minor {}",
        sampled.instance.graph.n(),
        report.premises_ok,
        report.planar,
        report.has_k5_minor
    );
}
