//! Acceptance gate: one test per criterion, each printing a pass/fail line.
//! Run with --nocapture to see the lines; any failure also fails the test.

use std::collections::HashMap;
use std::process::Command;

use sssp::block_seq::differential::differential_round;
use sssp::generate::{generate, GenKind, GenSpec, SplitMix64};
use sssp::graph::to_constant_degree;
use sssp::oracle::dijkstra;
use sssp::solver::{solve_sssp, SolveOptions};

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "pass" } else { "FAIL" };
    println!("criterion {criterion} [{status}] {name}: {detail}");
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn random_corpus() -> Vec<GenSpec> {
    let mut rng = SplitMix64::new(0xACCE97);
    let mut specs = Vec::with_capacity(1000);
    for _ in 0..1000 {
        let n = 2 + rng.next_below(511) as usize;
        let m = rng.next_below(4 * n as u64 + 1) as usize;
        specs.push(GenSpec::random(n, m, rng.next_u64()));
    }
    specs
}

fn layered_corpus() -> Vec<GenSpec> {
    (0..200)
        .map(|i| GenSpec {
            kind: GenKind::Layered,
            n: 8 + (i as usize * 7) % 250,
            m: 0,
            weight_min: 0.0,
            weight_max: 1.0,
            integer_weights: true,
            seed: 0xBEEF + i,
        })
        .collect()
}

/// Criteria 1 and 4 share the corpus: exact distances and the per-solve
/// direct-insert budget are both checked per instance.
#[test]
fn criteria_1_and_4_differential_correctness_and_insert_budget() {
    let mut checked = 0usize;
    let mut max_insert_ratio = 0.0f64;
    for spec in random_corpus().iter().chain(layered_corpus().iter()) {
        let g = generate(spec).expect("valid spec");
        let opts = SolveOptions {
            force_bmssp: true,
            ..Default::default()
        };
        let r = solve_sssp(&g, 0, &opts).expect("solve");
        let (want, _) = dijkstra(&g, 0).expect("oracle");
        for v in 0..g.vertex_count() {
            assert_eq!(
                r.distances[v].to_bits(),
                want[v].to_bits(),
                "seed {} vertex {v}: solver {} oracle {}",
                spec.seed,
                r.distances[v],
                want[v]
            );
        }
        assert!(
            r.direct_inserts <= r.transformed_edges as u64,
            "seed {}: {} direct inserts for {} transformed edges",
            spec.seed,
            r.direct_inserts,
            r.transformed_edges
        );
        if r.transformed_edges > 0 {
            max_insert_ratio =
                max_insert_ratio.max(r.direct_inserts as f64 / r.transformed_edges as f64);
        }
        checked += 1;
    }
    report(
        1,
        "differential correctness",
        checked == 1200,
        &format!("{checked} graphs bitwise-equal to the oracle"),
    );
    report(
        4,
        "edge-insert-once",
        true,
        &format!("max direct-insert/m ratio {max_insert_ratio:.3}"),
    );
}

#[test]
fn criterion_2_block_seq_oracle_equivalence() {
    let mut rounds = 0usize;
    for seed in 0..10_000u64 {
        let m = [1usize, 2, 4, 16][(seed % 4) as usize];
        differential_round(seed, m, 120);
        rounds += 1;
    }
    report(
        2,
        "block sequence vs sorted-map oracle",
        rounds == 10_000,
        &format!("{rounds} operation sequences matched on pulls and bounds"),
    );
}

#[test]
fn criterion_3_lemma_postconditions() {
    let mut rng = SplitMix64::new(0x1E3A);
    let mut nodes_ok = 0usize;
    for _ in 0..200 {
        let n = 2 + rng.next_below(255) as usize;
        let m = rng.next_below(4 * n as u64 + 1) as usize;
        let spec = GenSpec::random(n, m, rng.next_u64());
        let g = generate(&spec).expect("valid spec");
        let opts = SolveOptions {
            force_bmssp: true,
            instrument: true,
            trace: true,
            ..Default::default()
        };
        let r = solve_sssp(&g, 0, &opts).expect("solve");
        assert!(
            r.violations.is_empty(),
            "seed {}: {:?}",
            spec.seed,
            r.violations
        );
        nodes_ok += r.trace.map_or(0, |t| t.len());
    }
    report(
        3,
        "per-node lemma postconditions",
        true,
        &format!("200 instrumented graphs, {nodes_ok} recursion nodes, zero violations"),
    );
}

#[test]
fn criterion_5_operation_count_scaling() {
    let sizes = [1usize << 12, 1 << 14, 1 << 16, 1 << 18, 1 << 20];
    let mut solver_norms = Vec::new();
    let mut oracle_norms = Vec::new();
    for &n in &sizes {
        let g = generate(&GenSpec::random(n, 4 * n, 0x5CA1E ^ n as u64)).expect("valid spec");
        let m = g.edge_count() as f64;
        let log_n = (n as f64).log2();

        let opts = SolveOptions {
            force_bmssp: true,
            ..Default::default()
        };
        let r = solve_sssp(&g, 0, &opts).expect("solve");
        solver_norms.push(r.counters.total() as f64 / (m * log_n.powf(2.0 / 3.0)));

        let (_, c) = dijkstra(&g, 0).expect("oracle");
        oracle_norms.push(c.total() as f64 / (m * log_n));
    }
    let spread = |v: &[f64]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(0.0f64, f64::max);
        hi / lo
    };
    let (s_spread, o_spread) = (spread(&solver_norms), spread(&oracle_norms));
    report(
        5,
        "operation-count scaling",
        s_spread <= 4.0 && o_spread <= 4.0,
        &format!(
            "solver norm spread {s_spread:.2}x (ops/(m*log^{{2/3}}n) = {:?}), oracle spread {o_spread:.2}x",
            solver_norms
                .iter()
                .map(|x| (x * 100.0).round() / 100.0)
                .collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_6_constant_degree_transformation() {
    let mut rng = SplitMix64::new(0xDE6);
    for _ in 0..500 {
        let n = 1 + rng.next_below(64) as usize;
        let m = rng.next_below(4 * n as u64 + 1) as usize;
        let spec = GenSpec::random(n, m, rng.next_u64());
        let g = generate(&spec).expect("valid spec");
        let tr = to_constant_degree(&g);
        let tn = tr.graph.vertex_count();

        let mut out_deg = vec![0u32; tn];
        let mut in_deg = vec![0u32; tn];
        for e in 0..tr.graph.edge_count() as u32 {
            let edge = tr.graph.edge(e);
            out_deg[edge.from as usize] += 1;
            in_deg[edge.to as usize] += 1;
        }
        assert!(
            out_deg.iter().all(|&d| d <= 2) && in_deg.iter().all(|&d| d <= 2),
            "seed {}: degree above 2",
            spec.seed
        );

        let (orig, _) = dijkstra(&g, 0).expect("oracle");
        let (trans, _) = dijkstra(&tr.graph, tr.representative[0]).expect("oracle");
        for v in 0..n {
            assert_eq!(
                orig[v].to_bits(),
                trans[tr.representative[v] as usize].to_bits(),
                "seed {} vertex {v}",
                spec.seed
            );
        }
    }
    report(
        6,
        "constant-degree transformation",
        true,
        "500 graphs: degrees <= 2, representative distances bitwise-equal",
    );
}

#[test]
fn criterion_7_cli_round_trip() {
    let bin = env!("CARGO_BIN_EXE_sssp");
    let dir = std::env::temp_dir().join(format!("sssp-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");

    let kinds = ["random", "path", "grid", "layered"];
    for i in 0..20u64 {
        let graph_path = dir.join(format!("g{i}.gr"));
        let dist_path = dir.join(format!("d{i}.txt"));
        let n = 16 + (i as usize * 37) % 400;
        let kind = kinds[(i % 4) as usize];
        let mut gen = Command::new(bin);
        gen.args(["gen", "--kind", kind, "-n", &n.to_string(), "--seed", &i.to_string()])
            .args(["-o".as_ref(), graph_path.as_os_str()]);
        if kind == "random" {
            gen.args(["-m", &(3 * n).to_string()]);
        }
        let st = gen.status().expect("run gen");
        assert!(st.success(), "gen spec {i} exited {st:?}");

        let st = Command::new(bin)
            .args(["solve", "-s", "1", "--force-bmssp"])
            .args(["-i".as_ref(), graph_path.as_os_str()])
            .args(["-o".as_ref(), dist_path.as_os_str()])
            .status()
            .expect("run solve");
        assert!(st.success(), "solve spec {i} exited {st:?}");

        let st = Command::new(bin)
            .args(["verify", "-s", "1"])
            .args(["-i".as_ref(), graph_path.as_os_str()])
            .args(["-d".as_ref(), dist_path.as_os_str()])
            .status()
            .expect("run verify");
        assert_eq!(st.code(), Some(0), "verify spec {i}");
    }

    // Corrupt one distance and expect a mismatch exit code.
    let graph_path = dir.join("g0.gr");
    let dist_path = dir.join("d0.txt");
    let text = std::fs::read_to_string(&dist_path).expect("read distances");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let first = lines[0].split_whitespace().nth(1).unwrap().to_string();
    lines[0] = if first == "inf" {
        "1 0.5".to_string()
    } else {
        format!("1 {}", first.parse::<f64>().unwrap() + 1.0)
    };
    let bad_path = dir.join("d0-bad.txt");
    std::fs::write(&bad_path, lines.join("\n") + "\n").expect("write corrupted");
    let st = Command::new(bin)
        .args(["verify", "-s", "1"])
        .args(["-i".as_ref(), graph_path.as_os_str()])
        .args(["-d".as_ref(), bad_path.as_os_str()])
        .status()
        .expect("run verify");
    assert_eq!(st.code(), Some(1), "corrupted distances must exit 1");

    let _ = std::fs::remove_dir_all(&dir);
    report(
        7,
        "CLI round trip",
        true,
        "20 gen/solve/verify cycles exit 0; corrupted distance file exits 1",
    );
}

/// Histogram sanity: the corpora actually span the advertised ranges.
#[test]
fn corpus_shape() {
    let specs = random_corpus();
    let mut by_bucket: HashMap<usize, usize> = HashMap::new();
    for s in &specs {
        *by_bucket.entry(s.n / 64).or_default() += 1;
    }
    assert!(by_bucket.len() >= 8, "corpus should cover n in [2, 512]");
    assert!(specs.iter().all(|s| (2..=512).contains(&s.n) && s.m <= 4 * s.n));
}
