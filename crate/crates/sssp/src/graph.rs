//! Directed graph representation and the constant-degree transformation.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("negative weight {weight} on edge ({from}, {to})")]
    NegativeWeight { from: u32, to: u32, weight: f64 },
    #[error("vertex id {id} out of range (n = {n})")]
    BadVertexId { id: u32, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub weight: f64,
}

/// Immutable directed graph with non-negative real edge weights.
///
/// Vertex ids are dense in `[0, vertex_count)`. Parallel edges and self-loops
/// are permitted.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: u32) -> Edge {
        self.edges[e as usize]
    }

    /// Indices of the outgoing edges of `v`.
    pub fn out_edges(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn check_vertex(&self, v: u32) -> Result<(), GraphError> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(GraphError::BadVertexId {
                id: v,
                n: self.n,
            })
        }
    }
}

pub fn build_graph(n: usize, edge_list: &[(u32, u32, f64)]) -> Result<Graph, GraphError> {
    let mut edges = Vec::with_capacity(edge_list.len());
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edge_list {
        if u as usize >= n {
            return Err(GraphError::BadVertexId { id: u, n });
        }
        if v as usize >= n {
            return Err(GraphError::BadVertexId { id: v, n });
        }
        if !(w >= 0.0) {
            return Err(GraphError::NegativeWeight {
                from: u,
                to: v,
                weight: w,
            });
        }
        adj[u as usize].push(edges.len() as u32);
        edges.push(Edge {
            from: u,
            to: v,
            weight: w,
        });
    }
    Ok(Graph { n, edges, adj })
}

/// A graph with in-degree and out-degree at most 2 per vertex, plus the
/// vertex maps back to the original graph.
#[derive(Clone, Debug)]
pub struct TransformedGraph {
    pub graph: Graph,
    /// original vertex id -> transformed vertex id
    pub representative: Vec<u32>,
    /// transformed vertex id -> original vertex id
    pub origin: Vec<u32>,
}

/// Replace every vertex of degree >= 2 by a zero-weight directed cycle with
/// one node per incident edge endpoint; each original edge (u, v) becomes a
/// single weighted edge between the matching cycle nodes. Distances between
/// representatives are preserved because all intra-cycle edges cost 0.
pub fn to_constant_degree(g: &Graph) -> TransformedGraph {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum Dir {
        In,
        Out,
    }

    let n = g.vertex_count();
    // Per vertex: one slot per incident edge endpoint, ordered by
    // (neighbor id, direction, edge id) for a deterministic cycle layout.
    let mut slots: Vec<Vec<(u32, Dir, u32)>> = vec![Vec::new(); n];
    for (e, edge) in g.edges().iter().enumerate() {
        slots[edge.from as usize].push((edge.to, Dir::Out, e as u32));
        slots[edge.to as usize].push((edge.from, Dir::In, e as u32));
    }

    let mut representative = vec![0u32; n];
    let mut origin = Vec::new();
    let mut new_edges: Vec<(u32, u32, f64)> = Vec::new();
    // Transformed endpoints of each original edge: (tail node, head node).
    let mut edge_tail = vec![0u32; g.edge_count()];
    let mut edge_head = vec![0u32; g.edge_count()];

    for v in 0..n {
        slots[v].sort_unstable_by(|a, b| (a.0, &a.1, a.2).cmp(&(b.0, &b.1, b.2)));
        let first = origin.len() as u32;
        representative[v] = first;
        let d = slots[v].len();
        if d == 0 {
            origin.push(v as u32);
            continue;
        }
        for (i, (_, dir, e)) in slots[v].iter().enumerate() {
            let node = first + i as u32;
            origin.push(v as u32);
            match dir {
                Dir::Out => edge_tail[*e as usize] = node,
                Dir::In => edge_head[*e as usize] = node,
            }
        }
        if d >= 2 {
            for i in 0..d {
                let from = first + i as u32;
                let to = first + ((i + 1) % d) as u32;
                new_edges.push((from, to, 0.0));
            }
        }
    }

    for (e, edge) in g.edges().iter().enumerate() {
        new_edges.push((edge_tail[e], edge_head[e], edge.weight));
    }

    let graph = build_graph(origin.len(), &new_edges).expect("transformed graph is valid");
    TransformedGraph {
        graph,
        representative,
        origin,
    }
}
