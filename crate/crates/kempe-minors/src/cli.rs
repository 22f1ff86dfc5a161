//! Batch command-line driver.
//!
//! Exit codes: 0 for a completed run with the expected outcome, 1 when a
//! property violation was found (a replay command is printed), 2 for
//! usage or parse errors, 3 when a search budget was exceeded.

use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::certificates::{
    certificate_from_json, solve, verify, SolveOptions, SolveStatus, TargetPattern,
};
use crate::codec::{from_graph6, graph_from_json, graph_to_json, to_graph6};
use crate::constructive::{z_small_certificate, Rung};
use crate::generators::{
    enumerate_graphs, family_by_name, random_path_system, PathSystemSpec,
};
use crate::graph::Graph;
use crate::kempe::{h_graph, instance_from_json, instance_to_json, ColoredInstance};
use crate::minors::{has_minor, validate_remarks};
use crate::zmodel::{counting_unsat_check, find_good_permutation, z_of};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "kempe-minors",
    about = "Kempe chains, transversal graphs, and rooted minor certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Json,
    G6,
    Dot,
    Text,
}

#[derive(Args)]
struct BudgetArgs {
    /// Node budget for the exact solver.
    #[arg(long, default_value_t = 100_000_000)]
    budget_nodes: u64,
    /// Wall-clock budget for the exact solver, in seconds.
    #[arg(long, default_value_t = 300)]
    budget_secs: u64,
    /// Worker cap (KEMPE_THREADS is the fallback); exploration is
    /// currently sequential, so this only bounds the pool size.
    #[arg(long)]
    threads: Option<usize>,
}

impl BudgetArgs {
    fn to_options(&self) -> SolveOptions {
        let threads = self
            .threads
            .or_else(|| {
                std::env::var("KEMPE_THREADS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(1)
            .max(1);
        SolveOptions {
            max_nodes: self.budget_nodes,
            max_time: Duration::from_secs(self.budget_secs),
            threads,
            ..SolveOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named graph family member.
    Family {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Double a base graph into its canonical colored instance.
    Z {
        #[arg(long = "in")]
        input: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Derived graph of an instance.
    Hgraph {
        #[arg(long = "in")]
        input: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Search for a good permutation of a base graph.
    Goodperm {
        #[arg(long = "in")]
        input: String,
    },
    /// Decide rooted-certificate existence for an instance and pattern.
    Solve {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a certificate against an instance and pattern.
    Verify {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        cert: String,
    },
    /// Counting-based unsatisfiability check for a doubled base graph.
    Counting {
        #[arg(long = "in")]
        input: String,
    },
    /// Build certificates for every doubled base up to a given order.
    Zsweep {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Solve randomized path-system instances of a pattern.
    Fuzz {
        /// Family name or path to a pattern graph JSON file.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_internal: usize,
        #[arg(long, default_value_t = 0.25)]
        extra_edge_prob: f64,
        #[arg(long)]
        kempe_complete: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Planarity and K5-minor reports on random 5-class instances.
    Remarks {
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_internal: usize,
    },
    /// Exact unrooted minor containment between two graphs.
    Minor {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
    },
}

/// Parses and runs one invocation; returns the process exit code.
pub fn run(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit 0.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
    }
}

fn read_file(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn load_graph(path: &str) -> Result<Graph, String> {
    let text = read_file(path)?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        graph_from_json(&text).map_err(|e| format!("{path}: {e}"))
    } else {
        from_graph6(&text).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_instance(path: &str) -> Result<ColoredInstance, String> {
    instance_from_json(&read_file(path)?).map_err(|e| format!("{path}: {e}"))
}

fn emit_graph(g: &Graph, format: OutputFormat) -> Result<(), String> {
    match format {
        OutputFormat::Json => println!("{}", graph_to_json(g)),
        OutputFormat::G6 | OutputFormat::Text => {
            println!("{}", to_graph6(g).map_err(|e| e.to_string())?)
        }
        OutputFormat::Dot => println!("{}", graph_dot(g)),
    }
    Ok(())
}

fn graph_dot(g: &Graph) -> String {
    let mut out = String::from("graph {\n");
    for v in 0..g.n() {
        out.push_str(&format!("  {v};\n"));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push('}');
    out
}

fn instance_dot(inst: &ColoredInstance) -> String {
    let mut out = String::from("graph {\n  node [style=filled, colorscheme=set312];\n");
    for v in 0..inst.graph.n() {
        let class = inst.coloring().class_of(v);
        let outline = if inst.transversal().contains(v) {
            ", penwidth=3"
        } else {
            ""
        };
        out.push_str(&format!(
            "  {v} [fillcolor={}{outline}];\n",
            class % 12 + 1
        ));
    }
    for (u, v) in inst.graph.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push('}');
    out
}

fn dispatch(command: Command) -> Result<i32, String> {
    match command {
        Command::Family { name, n, format } => {
            let g = family_by_name(&name, n).map_err(|e| e.to_string())?;
            emit_graph(&g, format)?;
            Ok(EXIT_OK)
        }
        Command::Z { input, format } => {
            let base = load_graph(&input)?;
            let z = z_of(&base).map_err(|e| format!("{input}: {e}"))?;
            match format {
                OutputFormat::Dot => println!("{}", instance_dot(&z.instance)),
                _ => println!("{}", instance_to_json(&z.instance)),
            }
            Ok(EXIT_OK)
        }
        Command::Hgraph { input, format } => {
            let inst = load_instance(&input)?;
            let h = h_graph(&inst);
            emit_graph(&h.graph, format)?;
            Ok(EXIT_OK)
        }
        Command::Goodperm { input } => {
            let base = load_graph(&input)?;
            let result = find_good_permutation(&base).map_err(|e| format!("{input}: {e}"))?;
            #[derive(Serialize)]
            struct Doc {
                found: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                images: Option<Vec<usize>>,
            }
            let doc = Doc {
                found: result.is_some(),
                images: result.map(|f| f.images().to_vec()),
            };
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(EXIT_OK)
        }
        Command::Solve {
            input,
            pattern,
            budget,
        } => {
            let inst = load_instance(&input)?;
            let pattern_graph = load_graph(&pattern)?;
            let target = TargetPattern::from_graph(&inst, &pattern_graph)
                .map_err(|e| format!("{pattern}: {e}"))?;
            let verdict =
                solve(&inst, &target, &budget.to_options()).map_err(|e| e.to_string())?;
            println!("{}", verdict.to_json());
            Ok(match verdict.status {
                SolveStatus::BudgetExceeded => EXIT_BUDGET,
                _ => EXIT_OK,
            })
        }
        Command::Verify {
            input,
            pattern,
            cert,
        } => {
            let inst = load_instance(&input)?;
            let pattern_graph = load_graph(&pattern)?;
            let target = TargetPattern::from_graph(&inst, &pattern_graph)
                .map_err(|e| format!("{pattern}: {e}"))?;
            let certificate = certificate_from_json(&read_file(&cert)?, inst.graph.n())
                .map_err(|e| format!("{cert}: {e}"))?;
            let violations = verify(&inst, &target, &certificate);
            #[derive(Serialize)]
            struct Doc<'a> {
                ok: bool,
                violations: &'a [crate::certificates::Violation],
            }
            let doc = Doc {
                ok: violations.is_empty(),
                violations: &violations,
            };
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(if violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Counting { input } => {
            let base = load_graph(&input)?;
            let z = z_of(&base).map_err(|e| format!("{input}: {e}"))?;
            let report = counting_unsat_check(&z);
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(EXIT_OK)
        }
        Command::Zsweep { max_n, format } => run_zsweep(max_n, format),
        Command::Fuzz {
            pattern,
            n,
            trials,
            seed,
            max_internal,
            extra_edge_prob,
            kempe_complete,
            budget,
        } => run_fuzz(
            &pattern,
            n,
            trials,
            seed,
            max_internal,
            extra_edge_prob,
            kempe_complete,
            &budget,
        ),
        Command::Remarks {
            trials,
            seed,
            max_internal,
        } => run_remarks(trials, seed, max_internal),
        Command::Minor { g, h } => {
            let host = load_graph(&g)?;
            let pattern = load_graph(&h)?;
            let embedding = has_minor(&host, &pattern).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct Doc {
                found: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                bags: Option<Vec<Vec<usize>>>,
            }
            let doc = Doc {
                found: embedding.is_some(),
                bags: embedding.map(|e| e.bags().iter().map(|b| b.to_vec()).collect()),
            };
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(EXIT_OK)
        }
    }
}

fn run_zsweep(max_n: usize, format: OutputFormat) -> Result<i32, String> {
    if max_n > crate::constructive::Z_SMALL_MAX_BASE {
        return Err(format!(
            "zsweep supports bases up to {}",
            crate::constructive::Z_SMALL_MAX_BASE
        ));
    }
    #[derive(Serialize)]
    struct Row {
        n: usize,
        graph6: String,
        rung: String,
        ok: bool,
    }
    let mut rows = Vec::new();
    let mut failures = 0usize;
    let mut fallbacks = 0usize;
    for n in 1..=max_n {
        for base in enumerate_graphs(n).map_err(|e| e.to_string())? {
            let z = z_of(&base).map_err(|e| e.to_string())?;
            let graph6 = to_graph6(&base).map_err(|e| e.to_string())?;
            match z_small_certificate(&z) {
                Ok(report) => {
                    if report.rungs.contains(&Rung::SolverFallback) {
                        fallbacks += 1;
                        eprintln!("review: solver fallback fired on {graph6}");
                    }
                    rows.push(Row {
                        n,
                        graph6,
                        rung: report.primary_rung().to_string(),
                        ok: true,
                    });
                }
                Err(e) => {
                    failures += 1;
                    eprintln!("FAIL {graph6}: {e}");
                    rows.push(Row {
                        n,
                        graph6,
                        rung: "error".to_string(),
                        ok: false,
                    });
                }
            }
        }
    }
    match format {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        }
        _ => {
            println!("{:<3} {:<12} {:<34} ok", "n", "graph6", "rung");
            for row in &rows {
                println!(
                    "{:<3} {:<12} {:<34} {}",
                    row.n,
                    row.graph6,
                    row.rung,
                    if row.ok { "yes" } else { "NO" }
                );
            }
            println!(
                "total {} instances, {} failures, {} solver fallbacks",
                rows.len(),
                failures,
                fallbacks
            );
        }
    }
    Ok(if failures > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn load_pattern_source(pattern: &str, n: Option<usize>) -> Result<Graph, String> {
    if std::path::Path::new(pattern).exists() {
        load_graph(pattern)
    } else {
        family_by_name(pattern, n).map_err(|e| e.to_string())
    }
}

#[allow(clippy::too_many_arguments)]
fn run_fuzz(
    pattern_src: &str,
    n: Option<usize>,
    trials: u64,
    seed: u64,
    max_internal: usize,
    extra_edge_prob: f64,
    kempe_complete: bool,
    budget: &BudgetArgs,
) -> Result<i32, String> {
    let pattern = load_pattern_source(pattern_src, n)?;
    println!(
        "fuzz pattern={pattern_src} trials={trials} seed={seed} max-internal={max_internal} extra-edge-prob={extra_edge_prob} kempe-complete={kempe_complete}"
    );
    let options = budget.to_options();
    let mut sat = 0u64;
    let mut unsat = Vec::new();
    let mut exceeded = Vec::new();
    for trial in 0..trials {
        let trial_seed = seed.wrapping_add(trial);
        let sampled = random_path_system(&PathSystemSpec {
            pattern: pattern.clone(),
            seed: trial_seed,
            max_internal,
            extra_edge_prob,
            kempe_complete,
        })
        .map_err(|e| e.to_string())?;
        let target = TargetPattern::from_graph(&sampled.instance, &pattern)
            .map_err(|e| format!("trial seed {trial_seed}: {e}"))?;
        let verdict = solve(&sampled.instance, &target, &options).map_err(|e| e.to_string())?;
        match verdict.status {
            SolveStatus::Sat => sat += 1,
            SolveStatus::Unsat => unsat.push(trial_seed),
            SolveStatus::BudgetExceeded => exceeded.push(trial_seed),
        }
    }
    println!(
        "sat {}/{} unsat {} budget-exceeded {}",
        sat,
        trials,
        unsat.len(),
        exceeded.len()
    );
    let replay = |trial_seed: u64| {
        let mut cmd = format!(
            "kempe-minors fuzz --pattern {pattern_src} --trials 1 --seed {trial_seed} --max-internal {max_internal} --extra-edge-prob {extra_edge_prob}"
        );
        if let Some(n) = n {
            cmd.push_str(&format!(" --n {n}"));
        }
        if kempe_complete {
            cmd.push_str(" --kempe-complete");
        }
        cmd
    };
    for &s in &unsat {
        println!("VIOLATION: unsat instance; replay: {}", replay(s));
    }
    for &s in &exceeded {
        println!("budget exceeded; replay: {}", replay(s));
    }
    Ok(if !unsat.is_empty() {
        EXIT_VIOLATION
    } else if !exceeded.is_empty() {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn run_remarks(trials: u64, seed: u64, max_internal: usize) -> Result<i32, String> {
    let k5 = family_by_name("complete", Some(5)).map_err(|e| e.to_string())?;
    println!("remarks trials={trials} seed={seed} max-internal={max_internal}");
    let mut counterexamples = Vec::new();
    let mut nonplanar = 0u64;
    let mut with_minor = 0u64;
    for trial in 0..trials {
        let trial_seed = seed.wrapping_add(trial);
        let sampled = random_path_system(&PathSystemSpec {
            pattern: k5.clone(),
            seed: trial_seed,
            max_internal,
            extra_edge_prob: 0.0,
            kempe_complete: false,
        })
        .map_err(|e| e.to_string())?;
        let report = validate_remarks(&sampled.instance).map_err(|e| e.to_string())?;
        if !report.planar {
            nonplanar += 1;
        }
        if report.has_k5_minor {
            with_minor += 1;
        }
        if report.counterexample {
            counterexamples.push(trial_seed);
        }
    }
    println!(
        "nonplanar {nonplanar}/{trials}, k5-minor {with_minor}/{trials}, counterexamples {}",
        counterexamples.len()
    );
    for &s in &counterexamples {
        println!(
            "VIOLATION: replay: kempe-minors remarks --trials 1 --seed {s} --max-internal {max_internal}"
        );
    }
    Ok(if counterexamples.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}
