//! Per-run mutable labels and the shared edge-relaxation primitive.

use thiserror::Error;

use crate::graph::Graph;
use crate::order::{Bound, OpCounters, PathKey};

pub const NO_VERTEX: u32 = u32::MAX;
pub const NO_EDGE: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq)]
#[error("vertex {0} has not been reached")]
pub struct Unreached(pub u32);

/// Tentative distances, hop counts, and predecessor links for one run.
///
/// `dhat[v]` is the length of some source-to-v path (or infinity) and never
/// increases; `pred` links always form a tree rooted at the source under the
/// path total order.
#[derive(Clone, Debug)]
pub struct SsspState {
    dhat: Vec<f64>,
    hops: Vec<u32>,
    pred: Vec<u32>,
    pred_edge: Vec<u32>,
    pub counters: OpCounters,
}

/// Outcome of relaxing one edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Relax {
    /// Candidate rejected by a bound before any label comparison.
    OutOfBound,
    /// Candidate key is strictly worse than the current label.
    Rejected,
    /// Candidate accepted; `changed` is false for an equality re-relaxation
    /// that left every label untouched.
    Accepted { key: PathKey, changed: bool },
}

impl Relax {
    pub fn accepted(&self) -> bool {
        matches!(self, Relax::Accepted { .. })
    }
}

impl SsspState {
    pub fn new(n: usize, source: u32) -> Self {
        let mut s = SsspState {
            dhat: vec![f64::INFINITY; n],
            hops: vec![0; n],
            pred: vec![NO_VERTEX; n],
            pred_edge: vec![NO_EDGE; n],
            counters: OpCounters::default(),
        };
        s.dhat[source as usize] = 0.0;
        s.hops[source as usize] = 1;
        s
    }

    pub fn dhat(&self, v: u32) -> f64 {
        self.dhat[v as usize]
    }

    pub fn hops(&self, v: u32) -> u32 {
        self.hops[v as usize]
    }

    pub fn pred(&self, v: u32) -> Option<u32> {
        let p = self.pred[v as usize];
        (p != NO_VERTEX).then_some(p)
    }

    pub fn pred_edge(&self, v: u32) -> Option<u32> {
        let e = self.pred_edge[v as usize];
        (e != NO_EDGE).then_some(e)
    }

    pub fn reached(&self, v: u32) -> bool {
        self.dhat[v as usize].is_finite()
    }

    pub fn distances(&self) -> &[f64] {
        &self.dhat
    }

    pub fn path_key_of(&self, v: u32) -> Result<PathKey, Unreached> {
        if !self.reached(v) {
            return Err(Unreached(v));
        }
        Ok(PathKey::new(
            self.dhat[v as usize],
            self.hops[v as usize],
            v,
        ))
    }

    pub fn read_counters(&self) -> OpCounters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = OpCounters::default();
    }

    /// Relax edge `e` of `g`, optionally refusing candidates at or above
    /// `bound` before touching the labels.
    ///
    /// Acceptance follows the path total order: the candidate
    /// `(dhat[u] + w, hops[u] + 1, v)` wins on strictly smaller length, then
    /// on fewer hops, and on a full tie the predecessors are compared
    /// (re-relaxation through the current predecessor, or a smaller-id
    /// predecessor, is accepted). Equality acceptance is deliberate: it lets
    /// an edge relaxed on a lower recursion level be re-used above.
    pub fn relax_edge(&mut self, g: &Graph, e: u32, bound: Option<&Bound>) -> Relax {
        let edge = g.edge(e);
        let (u, v, w) = (edge.from, edge.to, edge.weight);
        debug_assert!(self.reached(u), "relaxing from unreached vertex {u}");

        self.counters.additions += 1;
        let cand_len = self.dhat[u as usize] + w;
        let cand_hops = self.hops[u as usize] + 1;

        if let Some(b) = bound {
            let key = PathKey::new(cand_len, cand_hops, v);
            if b.at_or_above(&key, &mut self.counters) {
                return Relax::OutOfBound;
            }
        }

        self.counters.comparisons += 1;
        let old_len = self.dhat[v as usize];
        let accept_changed = if cand_len < old_len {
            true
        } else if cand_len > old_len {
            return Relax::Rejected;
        } else {
            // Length tie: compare hop counts.
            self.counters.comparisons += 1;
            let old_hops = self.hops[v as usize];
            if cand_hops < old_hops {
                true
            } else if cand_hops > old_hops {
                return Relax::Rejected;
            } else {
                // Full tie: the reversed vertex sequences diverge first at
                // the predecessor, so comparing u against pred[v] decides.
                self.counters.comparisons += 1;
                let p = self.pred[v as usize];
                if u == p {
                    false
                } else if u < p {
                    true
                } else {
                    return Relax::Rejected;
                }
            }
        };

        self.dhat[v as usize] = cand_len;
        self.hops[v as usize] = cand_hops;
        self.pred[v as usize] = u;
        self.pred_edge[v as usize] = e;
        Relax::Accepted {
            key: PathKey::new(cand_len, cand_hops, v),
            changed: accept_changed,
        }
    }

    /// Unbounded relaxation; returns whether the candidate was accepted.
    pub fn try_relax(&mut self, g: &Graph, e: u32) -> bool {
        self.relax_edge(g, e, None).accepted()
    }
}
