//! Acceptance suite: one test per headline property, each printing a
//! pass line with the measured numbers.
//!
//! The brute-force enumerators used as oracles live here, in test code,
//! and share no logic with the solver or the permutation search they
//! check.

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kempe_minors::certificates::{
    solve, verify, RootedCertificate, SolveOptions, SolveStatus, TargetPattern, UnsatKind,
};
use kempe_minors::codec::to_graph6;
use kempe_minors::constructive::{
    certificate_from_matching, cycle_certificate, find_matchable_anticlique,
    unicyclic_certificate, z_small_certificate, Rung,
};
use kempe_minors::generators::{
    enumerate_graphs, family, random_path_system, FamilySpec, PathSystemSpec,
};
use kempe_minors::graph::{Graph, VertexSet};
use kempe_minors::kempe::{h_graph, ColoredInstance};
use kempe_minors::minors::{check_embedding, has_minor, validate_remarks};
use kempe_minors::zmodel::{
    counting_unsat_check, find_good_permutation, lies_on_short_cycle, z_of, CountingVerdict,
    ZInstance,
};

fn full_pattern(z: &ZInstance) -> TargetPattern {
    TargetPattern::full(&z.instance)
}

/// Oracle: every assignment of non-root vertices to a bag or "unused",
/// filtered by the verifier.
fn naive_certificate_exists(inst: &ColoredInstance, pattern: &TargetPattern) -> bool {
    let n = inst.graph.n();
    let k = inst.k();
    let reps = inst.transversal().reps();
    let free: Vec<usize> = (0..n).filter(|v| !reps.contains(v)).collect();
    let choices = (k + 1) as u64;
    let total = choices.pow(free.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut members: Vec<Vec<usize>> = reps.iter().map(|&r| vec![r]).collect();
        for &v in &free {
            let pick = (c % choices) as usize;
            c /= choices;
            if pick < k {
                members[pick].push(v);
            }
        }
        let mut cert = RootedCertificate::new();
        for (class, bag) in members.into_iter().enumerate() {
            cert.insert_bag(reps[class], VertexSet::from_iter(n, bag));
        }
        if verify(inst, pattern, &cert).is_empty() {
            return true;
        }
    }
    false
}

/// Oracle: all maps checked directly against the two conditions.
fn naive_good_permutation_exists(g: &Graph) -> bool {
    let n = g.n();
    (0..n).permutations(n).any(|images| {
        (0..n).all(|x| g.has_edge(x, images[x]))
            && g.edges().iter().all(|&(x, y)| {
                let (fx, fy) = (images[x], images[y]);
                g.has_edge(fx, y) || g.has_edge(fx, fy) || g.has_edge(fy, x)
            })
    })
}

#[test]
fn criterion_1_counterexample_base_unsat_both_routes() {
    let g7 = family(&FamilySpec::G7).unwrap();
    let z = z_of(&g7).unwrap();
    let pattern = full_pattern(&z);
    assert_eq!(pattern.edges().len(), 8);

    let started = Instant::now();
    let verdict = solve(&z.instance, &pattern, &SolveOptions::default()).unwrap();
    let solve_time = started.elapsed();
    assert_eq!(verdict.status, SolveStatus::Unsat);
    assert_eq!(verdict.unsat_kind, Some(UnsatKind::Exhaustive));
    assert!(solve_time <= Duration::from_secs(300));

    let report = counting_unsat_check(&z);
    assert_eq!(report.verdict, CountingVerdict::UnsatCertified);
    assert_eq!(report.capacity, 14);
    assert_eq!(report.min_q_bound, Some(15));
    // The binding anticliques force exactly 15; larger expansions only
    // raise the bound.
    assert!(report.bounds.iter().all(|b| b.q_lower_bound >= 15));

    println!(
        "criterion 1: PASS - exhaustive unsat in {:?} ({} nodes) agrees with counting bound 15 > 14",
        solve_time, verdict.stats.nodes
    );
}

#[test]
fn criterion_2_regular_girth_five_counting() {
    let petersen = family(&FamilySpec::Petersen).unwrap();
    let z = z_of(&petersen).unwrap();
    let started = Instant::now();
    let report = counting_unsat_check(&z);
    let elapsed = started.elapsed();
    assert_eq!(report.verdict, CountingVerdict::UnsatCertified);
    assert_eq!(report.good_perm_exists, Some(false));
    assert!(report.violating_anticlique.is_none());
    assert!(!report.bounds.is_empty());
    // Expansion verified exhaustively over all independent sets.
    assert!(report
        .bounds
        .iter()
        .all(|b| b.neighborhood.len() > b.anticlique.len()));
    assert!(elapsed <= Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 2: PASS - certified over {} anticliques in {:?}",
        report.bounds.len(),
        elapsed
    );
}

#[test]
fn criterion_3_small_base_sweep() {
    let started = Instant::now();
    let mut rows = 0usize;
    let mut fallback_firings: Vec<String> = Vec::new();
    for n in 1..=6 {
        for base in enumerate_graphs(n).unwrap() {
            let z = z_of(&base).unwrap();
            let report = z_small_certificate(&z).expect("every small base is certifiable");
            let pattern = full_pattern(&z);
            assert!(
                verify(&z.instance, &pattern, &report.certificate).is_empty(),
                "unclean certificate for {}",
                to_graph6(&base).unwrap()
            );
            if report.rungs.contains(&Rung::SolverFallback) {
                fallback_firings.push(to_graph6(&base).unwrap());
            }
            rows += 1;
        }
    }
    let elapsed = started.elapsed();
    assert_eq!(rows, 208);
    assert!(elapsed <= Duration::from_secs(600), "took {elapsed:?}");
    // The ladder covers everything except one six-vertex graph whose
    // separator configuration admits no pair-style certificate; its
    // firing is pinned here so new firings fail the suite.
    for firing in &fallback_firings {
        println!("criterion 3: review - solver fallback fired on {firing}");
    }
    assert_eq!(fallback_firings, vec!["ETzg".to_string()]);
    println!(
        "criterion 3: PASS - 208 verifier-clean certificates in {:?}, {} logged fallback firing(s)",
        elapsed,
        fallback_firings.len()
    );
}

#[test]
fn criterion_4_good_permutation_oracle_and_short_cycles() {
    let mut checked = 0usize;
    for n in 1..=6 {
        for g in enumerate_graphs(n).unwrap() {
            let search = find_good_permutation(&g).unwrap().is_some();
            let brute = naive_good_permutation_exists(&g);
            assert_eq!(search, brute, "disagreement on {}", to_graph6(&g).unwrap());
            checked += 1;
        }
    }
    assert_eq!(checked, 208);

    let mut with_good_perm = 0usize;
    for n in 1..=7 {
        for g in enumerate_graphs(n).unwrap() {
            if find_good_permutation(&g).unwrap().is_some() {
                with_good_perm += 1;
                for v in 0..g.n() {
                    if g.degree(v) >= 3 {
                        assert!(
                            lies_on_short_cycle(&g, v),
                            "degree-3 vertex {v} off short cycles in {}",
                            to_graph6(&g).unwrap()
                        );
                    }
                }
            }
        }
    }
    println!(
        "criterion 4: PASS - 208 oracle agreements; short-cycle property holds on {} bases with good permutations",
        with_good_perm
    );
}

/// Random valid instance with a random spanning pattern: classes first
/// seeded with one vertex each, remaining vertices spread at random,
/// edges only across classes, pattern sampled from the derived graph.
fn random_instance(rng: &mut ChaCha8Rng) -> (ColoredInstance, TargetPattern) {
    let k = rng.gen_range(2..=4usize);
    let n = rng.gen_range(k.max(4)..=9usize);
    let mut class_of: Vec<usize> = (0..n)
        .map(|v| if v < k { v } else { rng.gen_range(0..k) })
        .collect();
    // Shuffle so the roots are not always the lowest indices.
    for v in (1..n).rev() {
        let w = rng.gen_range(0..=v);
        class_of.swap(v, w);
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if class_of[u] != class_of[v] && rng.gen_bool(0.35) {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::new(n, &edges).unwrap();
    let classes: Vec<Vec<usize>> = (0..k)
        .map(|c| (0..n).filter(|&v| class_of[v] == c).collect())
        .collect();
    let transversal: Vec<usize> = classes
        .iter()
        .map(|members| members[rng.gen_range(0..members.len())])
        .collect();
    let inst = ColoredInstance::new(graph, classes, transversal).unwrap();
    let h = h_graph(&inst).graph;
    let chosen: Vec<(usize, usize)> = h
        .edges()
        .into_iter()
        .filter(|_| rng.gen_bool(0.7))
        .collect();
    let pattern = TargetPattern::new(&inst, chosen).unwrap();
    (inst, pattern)
}

#[test]
fn criterion_5_solver_matches_assignment_enumerator() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut sat = 0usize;
    for trial in 0..300 {
        let (inst, pattern) = random_instance(&mut rng);
        let verdict = solve(&inst, &pattern, &SolveOptions::default()).unwrap();
        let expected = naive_certificate_exists(&inst, &pattern);
        let got = match verdict.status {
            SolveStatus::Sat => true,
            SolveStatus::Unsat => false,
            SolveStatus::BudgetExceeded => panic!("budget exceeded on trial {trial}"),
        };
        assert_eq!(got, expected, "trial {trial} disagrees");
        if got {
            sat += 1;
        }
    }
    println!("criterion 5: PASS - 300 verdicts match the enumerator ({sat} sat)");
}

#[test]
fn criterion_6_small_patterns_always_satisfiable() {
    let mut patterns: Vec<(String, Graph)> = enumerate_graphs(4)
        .unwrap()
        .into_iter()
        .map(|g| (to_graph6(&g).unwrap(), g))
        .collect();
    assert_eq!(patterns.len(), 11);
    for spec in [FamilySpec::Hourglass, FamilySpec::K23, FamilySpec::C5Plus] {
        let g = family(&spec).unwrap();
        patterns.push((format!("{spec:?}"), g));
    }
    let mut solved = 0usize;
    for (name, pattern) in &patterns {
        for trial in 0..100u64 {
            let sampled = random_path_system(&PathSystemSpec {
                pattern: pattern.clone(),
                seed: 1000 * trial + 7,
                max_internal: 4,
                extra_edge_prob: 0.25,
                kempe_complete: false,
            })
            .unwrap();
            let target = TargetPattern::from_graph(&sampled.instance, pattern).unwrap();
            let verdict = solve(&sampled.instance, &target, &SolveOptions::default()).unwrap();
            assert_eq!(
                verdict.status,
                SolveStatus::Sat,
                "pattern {name} seed {} is a publishable counterexample",
                1000 * trial + 7
            );
            solved += 1;
        }
    }
    println!(
        "criterion 6: PASS - {} instances over {} patterns all satisfiable",
        solved,
        patterns.len()
    );
}

#[test]
fn criterion_7_builders_agree_with_solver() {
    let started = Instant::now();

    // Rings.
    for trial in 0..200u64 {
        let len = 3 + (trial % 4) as usize;
        let ring_pattern = family(&FamilySpec::Cycle(len)).unwrap();
        let sampled = random_path_system(&PathSystemSpec {
            pattern: ring_pattern.clone(),
            seed: 31 * trial + 5,
            max_internal: 4,
            extra_edge_prob: 0.0,
            kempe_complete: false,
        })
        .unwrap();
        let ring: Vec<usize> = (0..len).collect();
        let cert = cycle_certificate(&sampled.instance, &ring).expect("ring builder");
        let target = TargetPattern::from_graph(&sampled.instance, &ring_pattern).unwrap();
        assert!(verify(&sampled.instance, &target, &cert).is_empty());
        let verdict = solve(&sampled.instance, &target, &SolveOptions::default()).unwrap();
        assert_eq!(verdict.status, SolveStatus::Sat);
    }

    // Unicyclic patterns: a random tree, half the time with one extra
    // cycle-closing edge.
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for trial in 0..200u64 {
        let k = rng.gen_range(3..=6usize);
        let mut edges: Vec<(usize, usize)> = (1..k)
            .map(|v| (rng.gen_range(0..v), v))
            .collect();
        if trial % 2 == 0 {
            let non_edges: Vec<(usize, usize)> = (0..k)
                .flat_map(|u| ((u + 1)..k).map(move |v| (u, v)))
                .filter(|&(u, v)| !edges.contains(&(u, v)))
                .collect();
            if !non_edges.is_empty() {
                edges.push(non_edges[rng.gen_range(0..non_edges.len())]);
            }
        }
        let pattern = Graph::new(k, &edges).unwrap();
        let sampled = random_path_system(&PathSystemSpec {
            pattern: pattern.clone(),
            seed: 77 * trial + 3,
            max_internal: 4,
            extra_edge_prob: 0.0,
            kempe_complete: false,
        })
        .unwrap();
        let target = TargetPattern::from_graph(&sampled.instance, &pattern).unwrap();
        let cert = unicyclic_certificate(&sampled.instance, &target).expect("unicyclic builder");
        assert!(verify(&sampled.instance, &target, &cert).is_empty());
        let verdict = solve(&sampled.instance, &target, &SolveOptions::default()).unwrap();
        assert_eq!(verdict.status, SolveStatus::Sat);
    }

    let elapsed = started.elapsed();
    assert!(elapsed <= Duration::from_secs(120), "took {elapsed:?}");
    println!("criterion 7: PASS - 400 builder certificates verified and matched by the solver in {elapsed:?}");
}

#[test]
fn criterion_8_five_class_reports() {
    let k5 = family(&FamilySpec::Complete(5)).unwrap();
    for trial in 0..50u64 {
        let sampled = random_path_system(&PathSystemSpec {
            pattern: k5.clone(),
            seed: 13 * trial + 1,
            max_internal: 2,
            extra_edge_prob: 0.0,
            kempe_complete: false,
        })
        .unwrap();
        let report = validate_remarks(&sampled.instance).unwrap();
        assert!(report.premises_ok, "seed {}", 13 * trial + 1);
        assert!(!report.planar, "seed {}", 13 * trial + 1);
        assert!(report.has_k5_minor, "seed {}", 13 * trial + 1);
        assert!(!report.counterexample);
        // Re-check the embedding with the independent checker.
        let embedding = has_minor(&sampled.instance.graph, &k5).unwrap().unwrap();
        assert!(check_embedding(&sampled.instance.graph, &k5, &embedding));
    }
    println!("criterion 8: PASS - 50 reports nonplanar with k5 minors, embeddings clean");
}

#[test]
fn criterion_9_matching_bags_follow_the_formula() {
    let mut witnesses = 0usize;
    for n in 1..=6 {
        for base in enumerate_graphs(n).unwrap() {
            let z = z_of(&base).unwrap();
            let pattern = full_pattern(&z);
            let Some(witness) = find_matchable_anticlique(&z.instance, &pattern) else {
                continue;
            };
            witnesses += 1;
            let cert = certificate_from_matching(&z.instance, &pattern, &witness).unwrap();
            assert!(verify(&z.instance, &pattern, &cert).is_empty());
            for &t in &witness.anticlique {
                let rep = z.instance.transversal().rep(t);
                assert_eq!(cert.bag(rep).unwrap().to_vec(), vec![rep]);
            }
            for &(s, t) in &witness.matching {
                let mut expected = z.instance.class_pair_union(s, t);
                expected.remove(z.instance.transversal().rep(t));
                assert_eq!(
                    cert.bag(z.instance.transversal().rep(s)),
                    Some(&expected),
                    "bag formula violated on {}",
                    to_graph6(&base).unwrap()
                );
            }
        }
    }
    assert!(witnesses > 0);
    println!("criterion 9: PASS - {witnesses} witnesses across the sweep follow the bag formula");
}
