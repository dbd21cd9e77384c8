//! Bounded Bellman-Ford relaxation rounds and pivot extraction.
//!
//! `find_pivots` relaxes for k rounds from the frontier S, bails out with
//! P = S as soon as the reached set W outgrows k|S|, and otherwise returns
//! the members of S that root tight-edge trees of at least k vertices. Only
//! those pivots need to survive into the recursive calls.

use std::collections::{HashMap, HashSet};

use crate::graph::Graph;
use crate::order::Bound;
use crate::state::{Relax, SsspState};

#[derive(Clone, Debug)]
pub struct PivotResult {
    pub pivots: Vec<u32>,
    pub reached: Vec<u32>,
}

pub fn find_pivots(
    g: &Graph,
    state: &mut SsspState,
    bound: &Bound,
    frontier: &[u32],
    k: u64,
) -> PivotResult {
    let cap = k.saturating_mul(frontier.len() as u64);

    let mut w_set: HashSet<u32> = frontier.iter().copied().collect();
    let mut w_list: Vec<u32> = frontier.to_vec();
    let mut wave: Vec<u32> = frontier.to_vec();

    for _ in 0..k {
        let mut next: Vec<u32> = Vec::new();
        let mut next_set: HashSet<u32> = HashSet::new();
        for &u in &wave {
            for &e in g.out_edges(u) {
                if let Relax::Accepted { key, .. } = state.relax_edge(g, e, None) {
                    // Label always updates; W only tracks vertices below the
                    // bound. Re-improved vertices rejoin the wave so their
                    // edges are re-relaxed next round.
                    if bound.admits(&key, &mut state.counters) && next_set.insert(key.endpoint) {
                        next.push(key.endpoint);
                    }
                }
            }
        }
        for &v in &next {
            if w_set.insert(v) {
                w_list.push(v);
            }
        }
        // Early exit: the frontier is already small relative to the closure.
        if w_list.len() as u64 > cap {
            return PivotResult {
                pivots: frontier.to_vec(),
                reached: w_list,
            };
        }
        if next.is_empty() {
            break;
        }
        wave = next;
    }

    // Tight-edge forest F, encoded by the pred links restricted to W: v is a
    // child of u = pred[v] when both are in W and the pred edge is still
    // tight under the current labels.
    let mut children: HashMap<u32, Vec<u32>> = HashMap::new();
    for &v in &w_list {
        let (Some(u), Some(e)) = (state.pred(v), state.pred_edge(v)) else {
            continue;
        };
        if !w_set.contains(&u) {
            continue;
        }
        let edge = g.edge(e);
        state.counters.additions += 1;
        state.counters.comparisons += 1;
        let tight = state.dhat(u) + edge.weight == state.dhat(v) && state.hops(u) + 1 == state.hops(v);
        if tight {
            children.entry(u).or_default().push(v);
        }
    }

    // Subtree sizes via iterative DFS from each candidate root in S.
    let mut pivots = Vec::new();
    for &root in frontier {
        let is_root = match (state.pred(root), state.pred_edge(root)) {
            (Some(u), Some(e)) if w_set.contains(&u) => {
                let edge = g.edge(e);
                !(state.dhat(u) + edge.weight == state.dhat(root)
                    && state.hops(u) + 1 == state.hops(root))
            }
            _ => true,
        };
        if !is_root {
            continue;
        }
        let mut size = 0u64;
        let mut stack = vec![root];
        let mut seen = HashSet::new();
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            size += 1;
            if size >= k {
                break;
            }
            if let Some(cs) = children.get(&v) {
                stack.extend(cs.iter().copied());
            }
        }
        if size >= k {
            pivots.push(root);
        }
    }

    // Each pivot roots a disjoint tree of >= k vertices inside W.
    debug_assert!(pivots.len() as u64 * k <= w_list.len() as u64);
    PivotResult {
        pivots,
        reached: w_list,
    }
}
