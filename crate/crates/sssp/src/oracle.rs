//! Reference shortest-path algorithms and the differential verifier.
//!
//! Both oracles use the same `PathKey` total order and relaxation primitive
//! as the main solver, so the accepted path to each vertex is identical and
//! all three accumulate weights in the same order: distances agree bitwise.

use crate::graph::{Graph, GraphError};
use crate::heap::MinHeap;
use crate::order::OpCounters;
use crate::state::{Relax, SsspState};

/// Textbook Dijkstra with a plain binary heap. Returns the full label state
/// (distances, hop counts, predecessor tree) so callers can inspect the
/// canonical shortest-path tree.
pub fn dijkstra_state(g: &Graph, s: u32) -> Result<SsspState, GraphError> {
    g.check_vertex(s)?;
    let n = g.vertex_count();
    let mut st = SsspState::new(n, s);
    let mut settled = vec![false; n];
    let mut heap = MinHeap::new();
    let mut heap_ops = OpCounters::default();
    heap.push(st.path_key_of(s).unwrap(), s, &mut heap_ops);
    while let Some((key, u)) = heap.pop(&mut heap_ops) {
        if settled[u as usize] || st.path_key_of(u).unwrap() != key {
            continue;
        }
        settled[u as usize] = true;
        for &e in g.out_edges(u) {
            if let Relax::Accepted { key, changed } = st.relax_edge(g, e, None) {
                if changed && !settled[key.endpoint as usize] {
                    heap.push(key, key.endpoint, &mut heap_ops);
                }
            }
        }
    }
    st.counters.merge(&heap_ops);
    Ok(st)
}

pub fn dijkstra(g: &Graph, s: u32) -> Result<(Vec<f64>, OpCounters), GraphError> {
    let st = dijkstra_state(g, s)?;
    let counters = st.counters;
    Ok((st.distances().to_vec(), counters))
}

/// Round-based Bellman-Ford; independent of any heap logic. Rounds stop at a
/// fixpoint or after n rounds (the canonical path has at most n vertices).
pub fn bellman_ford(g: &Graph, s: u32) -> Result<Vec<f64>, GraphError> {
    g.check_vertex(s)?;
    let n = g.vertex_count();
    let mut st = SsspState::new(n, s);
    for _ in 0..n {
        let mut changed = false;
        for e in 0..g.edge_count() as u32 {
            if !st.reached(g.edge(e).from) {
                continue;
            }
            if let Relax::Accepted { changed: c, .. } = st.relax_edge(g, e, None) {
                changed |= c;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(st.distances().to_vec())
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub equal: bool,
    pub first_mismatch: Option<(u32, f64, f64)>,
    pub oracle_counters: OpCounters,
}

/// Compare candidate distances against the Dijkstra oracle, bit-exactly.
pub fn verify(g: &Graph, s: u32, candidate: &[f64]) -> Result<VerifyReport, GraphError> {
    let (expected, oracle_counters) = dijkstra(g, s)?;
    for (v, (&e, &c)) in expected.iter().zip(candidate).enumerate() {
        if e.to_bits() != c.to_bits() {
            return Ok(VerifyReport {
                equal: false,
                first_mismatch: Some((v as u32, e, c)),
                oracle_counters,
            });
        }
    }
    let equal = expected.len() == candidate.len();
    Ok(VerifyReport {
        equal,
        first_mismatch: if equal {
            None
        } else {
            Some((expected.len().min(candidate.len()) as u32, f64::NAN, f64::NAN))
        },
        oracle_counters,
    })
}
