use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sssp::bench::{format_tsv, run_bench};
use sssp::dimacs::{parse_dimacs, parse_distances, write_dimacs, write_distances};
use sssp::generate::{generate, GenKind, GenSpec};
use sssp::graph::Graph;
use sssp::oracle::dijkstra;
use sssp::solver::{solve_sssp, SolveOptions, TraceNode};

#[derive(Parser)]
#[command(name = "sssp", about = "Shortest paths below the sorting barrier", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve single-source shortest paths on a DIMACS graph.
    Solve(SolveArgs),
    /// Solve and check the result, against an oracle run or a distance file.
    Verify(VerifyArgs),
    /// Generate a graph deterministically from a seed.
    Gen(GenArgs),
    /// Compare operation counts of the solver and the Dijkstra oracle.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Input graph (DIMACS, `p sp`).
    #[arg(short = 'i', long)]
    input: PathBuf,
    /// Source vertex, 1-based.
    #[arg(short = 's', long)]
    source: u64,
    /// Distance output file (stdout if omitted).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// Write one JSONL record per recursion node.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Run the full recursion even on tiny graphs.
    #[arg(long)]
    force_bmssp: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short = 'i', long)]
    input: PathBuf,
    /// Source vertex, 1-based.
    #[arg(short = 's', long)]
    source: u64,
    /// Expected distances; defaults to a fresh oracle run.
    #[arg(short = 'd', long)]
    distances: Option<PathBuf>,
    #[arg(long)]
    force_bmssp: bool,
}

#[derive(Args)]
struct GenArgs {
    /// random | path | grid | layered
    #[arg(long)]
    kind: GenKind,
    #[arg(short = 'n', long)]
    n: usize,
    /// Edge count (random kind only; others derive their own).
    #[arg(short = 'm', long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    weight_min: f64,
    #[arg(long, default_value_t = 1048576.0)]
    weight_max: f64,
    /// Draw integer weights from the range.
    #[arg(long)]
    integer_weights: bool,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated vertex counts, ascending.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn load_graph(path: &PathBuf) -> Result<Graph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_dimacs(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_source(g: &Graph, source: u64) -> Result<u32, String> {
    if source < 1 || source > g.vertex_count() as u64 {
        return Err(format!(
            "source {source} out of 1..={}",
            g.vertex_count()
        ));
    }
    Ok(source as u32 - 1)
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn trace_jsonl(trace: &[TraceNode]) -> String {
    let mut out = String::new();
    for t in trace {
        out.push_str(&format!(
            "{{\"l\":{},\"sizeS\":{},\"sizeP\":{},\"sizeU\":{},\"partial\":{}}}\n",
            t.level, t.size_s, t.size_p, t.size_u, t.partial
        ));
    }
    out
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, String> {
    let g = load_graph(&args.input)?;
    let s = to_source(&g, args.source)?;
    let opts = SolveOptions {
        force_bmssp: args.force_bmssp,
        trace: args.trace.is_some(),
        instrument: false,
    };
    let report = solve_sssp(&g, s, &opts).map_err(|e| e.to_string())?;
    emit(&args.output, &write_distances(&report.distances))?;
    if let Some(path) = &args.trace {
        let trace = report.trace.as_deref().unwrap_or(&[]);
        fs::write(path, trace_jsonl(trace)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    eprintln!(
        "solved n={} m={} (transformed n={} m={}) comparisons={} additions={}",
        g.vertex_count(),
        g.edge_count(),
        report.transformed_vertices,
        report.transformed_edges,
        report.counters.comparisons,
        report.counters.additions
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let g = load_graph(&args.input)?;
    let s = to_source(&g, args.source)?;
    let opts = SolveOptions {
        force_bmssp: args.force_bmssp,
        ..Default::default()
    };
    let report = solve_sssp(&g, s, &opts).map_err(|e| e.to_string())?;

    let expected = match &args.distances {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let d = parse_distances(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            if d.len() != g.vertex_count() {
                return Err(format!(
                    "{}: {} distances for {} vertices",
                    path.display(),
                    d.len(),
                    g.vertex_count()
                ));
            }
            d
        }
        None => dijkstra(&g, s).map_err(|e| e.to_string())?.0,
    };

    let mismatch = report
        .distances
        .iter()
        .zip(&expected)
        .position(|(a, b)| a.to_bits() != b.to_bits());
    match mismatch {
        None => {
            eprintln!("verify: ok ({} vertices)", g.vertex_count());
            Ok(ExitCode::SUCCESS)
        }
        Some(v) => {
            eprintln!(
                "verify: mismatch at vertex {}: solver {} vs expected {}",
                v + 1,
                report.distances[v],
                expected[v]
            );
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let spec = GenSpec {
        kind: args.kind,
        n: args.n,
        m: args.m,
        weight_min: args.weight_min,
        weight_max: args.weight_max,
        integer_weights: args.integer_weights,
        seed: args.seed,
    };
    let g = generate(&spec).map_err(|e| e.to_string())?;
    emit(&args.output, &write_dimacs(&g))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, String> {
    if args.sizes.is_empty() {
        return Err("bench requires at least one size".into());
    }
    if args.sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err("sizes must be ascending".into());
    }
    let rows = run_bench(&args.sizes, args.trials.max(1), args.seed).map_err(|e| e.to_string())?;
    emit(&args.output, &format_tsv(&rows))?;
    Ok(ExitCode::SUCCESS)
}
