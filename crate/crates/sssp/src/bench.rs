//! Operation-count benchmark: the recursive solver vs. the Dijkstra oracle
//! on random sparse graphs, reported as raw counts and normalized ratios.

use std::time::Instant;

use crate::generate::{generate, GenSpec};
use crate::oracle::dijkstra;
use crate::solver::{solve_sssp, SolveOptions, SolverError};

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub solver_ops: u64,
    pub oracle_ops: u64,
    /// solver_ops / (m * log2(n)^{2/3})
    pub solver_norm: f64,
    /// oracle_ops / (m * log2(n))
    pub oracle_norm: f64,
    pub solver_ms: f64,
    pub oracle_ms: f64,
}

pub fn run_bench(sizes: &[usize], trials: usize, base_seed: u64) -> Result<Vec<BenchRow>, SolverError> {
    let mut rows = Vec::new();
    for &n in sizes {
        for trial in 0..trials {
            let seed = base_seed ^ (n as u64).wrapping_mul(0x9e37) ^ trial as u64;
            let m = 4 * n;
            let g = generate(&GenSpec::random(n, m, seed)).expect("n >= 1");
            let m = g.edge_count();

            let t0 = Instant::now();
            let opts = SolveOptions {
                force_bmssp: true,
                ..Default::default()
            };
            let report = solve_sssp(&g, 0, &opts)?;
            let solver_ms = t0.elapsed().as_secs_f64() * 1e3;

            let t1 = Instant::now();
            let (_, oracle_counters) = dijkstra(&g, 0).expect("source 0 valid");
            let oracle_ms = t1.elapsed().as_secs_f64() * 1e3;

            let log_n = (n.max(2) as f64).log2();
            let solver_ops = report.counters.total();
            let oracle_ops = oracle_counters.total();
            rows.push(BenchRow {
                n,
                m,
                seed,
                solver_ops,
                oracle_ops,
                solver_norm: solver_ops as f64 / (m as f64 * log_n.powf(2.0 / 3.0)),
                oracle_norm: oracle_ops as f64 / (m as f64 * log_n),
                solver_ms,
                oracle_ms,
            });
        }
    }
    Ok(rows)
}

pub fn format_tsv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "n\tm\tseed\tsolver_ops\toracle_ops\tsolver_norm\toracle_norm\tsolver_ms\toracle_ms\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.3}\t{:.3}\n",
            r.n,
            r.m,
            r.seed,
            r.solver_ops,
            r.oracle_ops,
            r.solver_norm,
            r.oracle_norm,
            r.solver_ms,
            r.oracle_ms
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row_shape() {
        let rows = run_bench(&[1 << 12], 1, 7).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert!(r.solver_ops > 0 && r.oracle_ops > 0);
        assert!(r.solver_norm > 0.0 && r.oracle_norm > 0.0);
        let tsv = format_tsv(&rows);
        assert_eq!(tsv.lines().count(), 2);
        assert!(tsv.starts_with("n\tm\t"));
    }
}
