//! Directed multigraphs with stable edge ids, Eulerian traversal, and exact
//! circuit counting.
//!
//! Edges are numbered in insertion order and every algorithm breaks ties by
//! smallest edge id, so traversals and counts are fully deterministic.
//! Circuit counting follows the BEST theorem: the number of Eulerian
//! circuits of a balanced connected digraph equals the number of spanning
//! arborescences toward any fixed root times `Π (deg(v) − 1)!`. The
//! arborescence count is a cofactor of the out-degree Laplacian, evaluated
//! by Bareiss fraction-free elimination over big integers — results stay
//! exact no matter how large they grow.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge id {0} does not exist")]
    InvalidEdge(usize),
    #[error("graph is not balanced: some vertex has in-degree ≠ out-degree")]
    Unbalanced,
    #[error("graph is not connected on its support")]
    Disconnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("{edges} edges exceed the exhaustive-count limit of {max}")]
    TooManyEdges { edges: usize, max: usize },
}

/// Arborescence and Eulerian-circuit counts of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    /// Spanning arborescences toward a fixed root (root-independent when the
    /// graph is balanced and connected).
    pub arborescences: BigInt,
    /// Eulerian circuits, counted up to rotation.
    pub circuits: BigInt,
}

/// A directed multigraph over vertices `0..vertex_count` with parallel edges
/// and loops. Edge ids are indices into insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiDigraph {
    pub fn new(vertex_count: usize) -> Self {
        MultiDigraph { vertex_count, edges: Vec::new() }
    }

    /// Adds an edge and returns its id.
    pub fn add_edge(&mut self, tail: usize, head: usize) -> usize {
        assert!(tail < self.vertex_count && head < self.vertex_count);
        self.edges.push((tail, head));
        self.edges.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> Option<(usize, usize)> {
        self.edges.get(id).copied()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(in, out)` degree per vertex; a loop contributes one to each.
    pub fn degrees(&self) -> Vec<(usize, usize)> {
        let mut deg = vec![(0usize, 0usize); self.vertex_count];
        for &(t, h) in &self.edges {
            deg[t].1 += 1;
            deg[h].0 += 1;
        }
        deg
    }

    pub fn is_balanced(&self) -> bool {
        self.degrees().iter().all(|&(i, o)| i == o)
    }

    fn support(&self) -> Vec<usize> {
        self.degrees().iter().enumerate().filter(|(_, &(i, o))| i + o > 0).map(|(v, _)| v).collect()
    }

    fn reachable(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(t, h) in &self.edges {
            if forward {
                adj[t].push(h);
            } else {
                adj[h].push(t);
            }
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = vec![start];
        seen[start] = true;
        while let Some(v) = queue.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        seen
    }

    /// Connectivity of the undirected view, over vertices with degree > 0.
    /// An edgeless graph counts as connected.
    pub fn is_weakly_connected(&self) -> bool {
        let support = self.support();
        let Some(&start) = support.first() else { return true };
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(t, h) in &self.edges {
            adj[t].push(h);
            adj[h].push(t);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = vec![start];
        seen[start] = true;
        while let Some(v) = queue.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        support.into_iter().all(|v| seen[v])
    }

    /// Mutual reachability over vertices with degree > 0.
    pub fn is_strongly_connected(&self) -> bool {
        let support = self.support();
        let Some(&start) = support.first() else { return true };
        let fwd = self.reachable(start, true);
        let bwd = self.reachable(start, false);
        support.into_iter().all(|v| fwd[v] && bwd[v])
    }

    /// Eulerian circuit as edge ids, starting with `start_edge`. After the
    /// forced first edge, the walk always takes the unused out-edge with the
    /// smallest id, so the result is deterministic.
    pub fn hierholzer(&self, start_edge: usize) -> Result<Vec<usize>, GraphError> {
        if start_edge >= self.edges.len() {
            return Err(GraphError::InvalidEdge(start_edge));
        }
        if !self.is_balanced() {
            return Err(GraphError::Unbalanced);
        }
        if !self.is_weakly_connected() {
            return Err(GraphError::Disconnected);
        }
        let mut out_adj = vec![Vec::new(); self.vertex_count];
        for (id, &(t, _)) in self.edges.iter().enumerate() {
            out_adj[t].push(id);
        }
        let mut cursor = vec![0usize; self.vertex_count];
        let mut used = vec![false; self.edges.len()];
        used[start_edge] = true;
        // (vertex, edge that led here); popping an entry retires its edge.
        let mut stack =
            vec![(self.edges[start_edge].0, None), (self.edges[start_edge].1, Some(start_edge))];
        let mut circuit = Vec::with_capacity(self.edges.len());
        while let Some(&(v, via)) = stack.last() {
            let mut next = None;
            while cursor[v] < out_adj[v].len() {
                let e = out_adj[v][cursor[v]];
                if used[e] {
                    cursor[v] += 1;
                } else {
                    next = Some(e);
                    break;
                }
            }
            match next {
                Some(e) => {
                    used[e] = true;
                    cursor[v] += 1;
                    stack.push((self.edges[e].1, Some(e)));
                }
                None => {
                    stack.pop();
                    if let Some(e) = via {
                        circuit.push(e);
                    }
                }
            }
        }
        circuit.reverse();
        debug_assert_eq!(circuit.len(), self.edges.len());
        Ok(circuit)
    }

    /// Out-degree Laplacian `L = D_out − A`. A loop adds one to both terms,
    /// so it cancels and never affects any cofactor.
    pub fn laplacian(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count;
        let mut l = vec![vec![0i64; n]; n];
        for &(t, h) in &self.edges {
            l[t][t] += 1;
            l[t][h] -= 1;
        }
        l
    }

    /// Number of spanning arborescences toward `root`: the Laplacian
    /// cofactor that deletes `root`'s row and column.
    pub fn arborescence_count(&self, root: usize) -> BigInt {
        assert!(root < self.vertex_count);
        let l = self.laplacian();
        let minor: Vec<Vec<BigInt>> = (0..self.vertex_count)
            .filter(|&r| r != root)
            .map(|r| {
                (0..self.vertex_count)
                    .filter(|&c| c != root)
                    .map(|c| BigInt::from(l[r][c]))
                    .collect()
            })
            .collect();
        determinant(minor)
    }

    /// Exact Eulerian-circuit count via the BEST theorem. Requires a
    /// balanced graph, connected on its support, with at least one edge.
    pub fn best_count(&self) -> Result<CountResult, GraphError> {
        if self.edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        if !self.is_balanced() {
            return Err(GraphError::Unbalanced);
        }
        if !self.is_weakly_connected() {
            return Err(GraphError::Disconnected);
        }
        let support = self.support();
        let degrees = self.degrees();
        let l = self.laplacian();
        let root = support[0];
        let minor: Vec<Vec<BigInt>> = support
            .iter()
            .filter(|&&r| r != root)
            .map(|&r| {
                support.iter().filter(|&&c| c != root).map(|&c| BigInt::from(l[r][c])).collect()
            })
            .collect();
        let arborescences = determinant(minor);
        let mut circuits = arborescences.clone();
        for &v in &support {
            circuits *= factorial(degrees[v].1 - 1);
        }
        Ok(CountResult { arborescences, circuits })
    }

    /// Exhaustive count of Eulerian edge sequences whose first edge is edge
    /// 0 — one sequence per circuit, since every circuit uses edge 0 exactly
    /// once. Deliberately independent of [`MultiDigraph::best_count`];
    /// guarded to small graphs.
    pub fn brute_circuits(&self) -> Result<BigInt, GraphError> {
        const MAX_EDGES: usize = 12;
        let m = self.edges.len();
        if m == 0 {
            return Err(GraphError::NoEdges);
        }
        if m > MAX_EDGES {
            return Err(GraphError::TooManyEdges { edges: m, max: MAX_EDGES });
        }
        let mut out_adj = vec![Vec::new(); self.vertex_count];
        for (id, &(t, _)) in self.edges.iter().enumerate() {
            out_adj[t].push(id);
        }
        let mut used = vec![false; m];
        used[0] = true;
        let home = self.edges[0].0;
        let count = self.extend_walk(self.edges[0].1, home, m - 1, &mut used, &out_adj);
        Ok(BigInt::from(count))
    }

    fn extend_walk(
        &self,
        at: usize,
        home: usize,
        remaining: usize,
        used: &mut Vec<bool>,
        out_adj: &[Vec<usize>],
    ) -> u64 {
        if remaining == 0 {
            return u64::from(at == home);
        }
        let mut total = 0;
        for &e in &out_adj[at] {
            if !used[e] {
                used[e] = true;
                total += self.extend_walk(self.edges[e].1, home, remaining - 1, used, out_adj);
                used[e] = false;
            }
        }
        total
    }

    /// DOT form with caller-supplied labels.
    pub fn to_dot(
        &self,
        vertex_label: impl Fn(usize) -> String,
        edge_label: impl Fn(usize) -> String,
    ) -> String {
        let mut out = String::from("digraph cycle {\n");
        for v in 0..self.vertex_count {
            out.push_str(&format!("  {v} [label=\"{}\"];\n", vertex_label(v)));
        }
        for (id, &(t, h)) in self.edges.iter().enumerate() {
            out.push_str(&format!("  {t} -> {h} [label=\"{}\"];\n", edge_label(id)));
        }
        out.push_str("}\n");
        out
    }

    /// JSON adjacency dump: vertex count plus `[tail, head]` per edge id.
    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertex_count,
            "edges": self.edges.iter().map(|&(t, h)| json!([t, h])).collect::<Vec<_>>(),
        })
    }
}

/// Exact determinant by Bareiss fraction-free elimination: every division is
/// exact, so the computation never leaves the integers.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut out = BigInt::one();
    for i in 2..=n {
        out *= BigInt::from(i);
    }
    out
}

/// Renders an integer matrix as a right-aligned grid.
pub fn format_matrix(m: &[Vec<i64>]) -> String {
    let width = m.iter().flatten().map(|e| e.to_string().len()).max().unwrap_or(1);
    let mut out = String::new();
    for row in m {
        let cells: Vec<String> = row.iter().map(|e| format!("{e:>width$}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
