//! Cross-checks between independent routes to the same answer: the
//! counting certifier against the exact solver, the doubling against
//! the derived graph, permutation certificates against the verifier,
//! and solver monotonicity under instance growth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kempe_minors::certificates::{solve, verify, SolveOptions, SolveStatus, TargetPattern};
use kempe_minors::codec::to_graph6;
use kempe_minors::generators::{enumerate_graphs, family, FamilySpec};
use kempe_minors::kempe::{h_graph, is_kempe_coloring, transform_instance, Transform};
use kempe_minors::zmodel::{
    counting_unsat_check, find_good_permutation, permutation_certificate, z_of, CountingVerdict,
};

#[test]
fn doubled_derived_graph_reproduces_the_base() {
    for n in 1..=6 {
        for base in enumerate_graphs(n).unwrap() {
            let z = z_of(&base).unwrap();
            let h = h_graph(&z.instance).graph;
            // The encoding maps class i to base vertex i, so the derived
            // graph is the base on the nose, not just up to isomorphism.
            assert_eq!(h, base, "{}", to_graph6(&base).unwrap());
            assert_eq!(
                h.canonical_key().unwrap(),
                base.canonical_key().unwrap()
            );
        }
    }
}

#[test]
fn permutation_certificates_verify_across_the_sweep() {
    let mut found = 0usize;
    for n in 1..=6 {
        for base in enumerate_graphs(n).unwrap() {
            let Some(f) = find_good_permutation(&base).unwrap() else {
                continue;
            };
            found += 1;
            let z = z_of(&base).unwrap();
            let cert = permutation_certificate(&z, &f).unwrap();
            let pattern = TargetPattern::full(&z.instance);
            assert!(
                verify(&z.instance, &pattern, &cert).is_empty(),
                "{}",
                to_graph6(&base).unwrap()
            );
            assert!(cert.bags().values().all(|bag| bag.len() == 2));
        }
    }
    assert!(found > 50, "only {found} bases had good permutations");
}

#[test]
fn counting_certified_bases_are_solver_unsat() {
    let mut certified = Vec::new();
    for n in 1..=7 {
        for base in enumerate_graphs(n).unwrap() {
            let z = z_of(&base).unwrap();
            let report = counting_unsat_check(&z);
            if report.verdict == CountingVerdict::UnsatCertified {
                certified.push(base);
            }
        }
    }
    assert!(!certified.is_empty());
    for base in &certified {
        let z = z_of(base).unwrap();
        let pattern = TargetPattern::full(&z.instance);
        let verdict = solve(&z.instance, &pattern, &SolveOptions::default()).unwrap();
        assert_eq!(
            verdict.status,
            SolveStatus::Unsat,
            "counting and search disagree on {}",
            to_graph6(base).unwrap()
        );
    }
    println!(
        "counting certified {} bases on up to 7 vertices; the solver confirms each",
        certified.len()
    );
}

#[test]
fn kempe_colorings_have_complete_derived_graphs() {
    use kempe_minors::generators::{random_path_system, PathSystemSpec};
    for k in 3..=6 {
        let complete = family(&FamilySpec::Complete(k)).unwrap();
        for seed in 0..20 {
            let sampled = random_path_system(&PathSystemSpec {
                pattern: complete.clone(),
                seed,
                max_internal: 4,
                extra_edge_prob: 0.2,
                kempe_complete: true,
            })
            .unwrap();
            let (kempe, _) = is_kempe_coloring(&sampled.instance);
            assert!(kempe);
            assert!(h_graph(&sampled.instance).is_complete());
        }
    }
}

#[test]
fn adding_transversal_edges_never_loses_satisfiability() {
    // Growth monotonicity: a SAT instance stays SAT after adding an edge
    // between two transversal representatives (the pattern unchanged).
    let mut rng = ChaCha8Rng::seed_from_u64(0xABCD);
    let mut grown = 0usize;
    for _ in 0..40 {
        let k = rng.gen_range(3..=5usize);
        let pattern = family(&FamilySpec::Cycle(k)).unwrap();
        let sampled = kempe_minors::generators::random_path_system(
            &kempe_minors::generators::PathSystemSpec {
                pattern: pattern.clone(),
                seed: rng.gen(),
                max_internal: 2,
                extra_edge_prob: 0.2,
                kempe_complete: false,
            },
        )
        .unwrap();
        let target = TargetPattern::from_graph(&sampled.instance, &pattern).unwrap();
        let before = solve(&sampled.instance, &target, &SolveOptions::default()).unwrap();
        assert_eq!(before.status, SolveStatus::Sat);

        let i = rng.gen_range(0..k);
        let j = (i + 1 + rng.gen_range(0..k - 1)) % k;
        let bigger =
            transform_instance(&sampled.instance, &Transform::AddTransversalEdge(i, j)).unwrap();
        let target = TargetPattern::from_graph(&bigger, &pattern).unwrap();
        let after = solve(&bigger, &target, &SolveOptions::default()).unwrap();
        assert_eq!(after.status, SolveStatus::Sat);
        grown += 1;
    }
    assert_eq!(grown, 40);
}
