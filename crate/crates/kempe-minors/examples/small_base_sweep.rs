//! Certificates for every doubled base on up to six vertices, with the
//! ladder rung that produced each one. The full sweep covers all 208
//! isomorphism classes in well under a minute.
//!
//! ```bash
//! cargo run --example small_base_sweep
//! ```

use std::collections::BTreeMap;

use kempe_minors::codec::to_graph6;
use kempe_minors::constructive::z_small_certificate;
use kempe_minors::generators::enumerate_graphs;
use kempe_minors::zmodel::z_of;

fn main() {
    let mut by_rung: BTreeMap<String, usize> = BTreeMap::new();
    let mut total = 0usize;
    for n in 1..=6 {
        for base in enumerate_graphs(n).unwrap() {
            let z = z_of(&base).unwrap();
            let report = z_small_certificate(&z).unwrap();
            let rung = report.primary_rung().to_string();
            if rung == "solver-fallback" {
                println!(
                    "note: {} needed the exact solver (bag sizes {:?})",
                    to_graph6(&base).unwrap(),
                    report
                        .certificate
                        .bags()
                        .values()
                        .map(|b| b.len())
                        .collect::<Vec<_>>()
                );
            }
            *by_rung.entry(rung).or_default() += 1;
            total += 1;
        }
    }
    println!("{total} bases certified; primary rungs:");
    for (rung, count) in by_rung {
        println!("  {rung:<36} {count}");
    }
}
