//! Universal cycles of naturally labeled posets.
//!
//! For a fixed size `k`, a universal cycle is a cyclic symbol sequence whose
//! length-(k−1) windows decode, via window reduction, to every naturally
//! labeled poset on k elements exactly once. Construction goes through an
//! arc digraph: vertices are the posets of size k−1 in canonical order, and
//! each size-k poset contributes one edge from itself minus its largest
//! label to itself minus its smallest label. Out-degrees equal antichain
//! counts, the graph is balanced and connected, and every Eulerian circuit
//! spells a universal cycle. Counting circuits therefore counts cycles.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::coding::{self, CodingError, CyclicCode, DecodeMode};
use crate::eulergraph::{CountResult, GraphError, MultiDigraph};
use crate::poset::{NlPoset, PosetError, MAX_SIZE};

const SAMPLE_CAP: usize = 10;

#[derive(Debug, Error)]
pub enum CycleError {
    #[error("universal cycles need poset size at least 2, got {0}")]
    SizeTooSmall(usize),
    #[error("path endpoints differ in size: {from_size} vs {to_size}")]
    EndpointSizeMismatch { from_size: usize, to_size: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The arc digraph whose Eulerian circuits are the universal cycles for
/// posets of size `k`. Vertex v is `vertices()[v]`; edge ids index
/// `edge_posets()` in canonical order.
#[derive(Debug, Clone)]
pub struct PosetArcDigraph {
    k: usize,
    vertices: Vec<NlPoset>,
    edge_posets: Vec<NlPoset>,
    graph: MultiDigraph,
}

pub fn build_arc_digraph(k: usize) -> Result<PosetArcDigraph, CycleError> {
    if k < 2 {
        return Err(CycleError::SizeTooSmall(k));
    }
    let vertices = NlPoset::enumerate(k - 1);
    let index: HashMap<Vec<u64>, usize> =
        vertices.iter().enumerate().map(|(i, p)| (p.canonical_key(), i)).collect();
    let edge_posets = NlPoset::enumerate(k);
    let mut graph = MultiDigraph::new(vertices.len());
    for q in &edge_posets {
        let tail = index[&q.drop_max()?.canonical_key()];
        let head = index[&q.drop_min()?.canonical_key()];
        graph.add_edge(tail, head);
    }
    Ok(PosetArcDigraph { k, vertices, edge_posets, graph })
}

impl PosetArcDigraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[NlPoset] {
        &self.vertices
    }

    pub fn edge_posets(&self) -> &[NlPoset] {
        &self.edge_posets
    }

    pub fn graph(&self) -> &MultiDigraph {
        &self.graph
    }

    pub fn vertex_index(&self, poset: &NlPoset) -> Option<usize> {
        self.vertices.binary_search(poset).ok()
    }

    /// Deterministic Eulerian circuit, forced to start with edge 0 (the
    /// canonically least size-k poset).
    pub fn eulerian_circuit(&self) -> Result<Vec<usize>, GraphError> {
        self.graph.hierholzer(0)
    }

    fn label(poset: &NlPoset) -> String {
        match poset.size() {
            0 => "empty".to_string(),
            1 => "1".to_string(),
            _ => {
                coding::encode_poset(poset).expect("posets of size >= 2 always encode").to_string()
            }
        }
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot(|v| Self::label(&self.vertices[v]), |e| Self::label(&self.edge_posets[e]))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "vertices": self.vertices.iter().map(Self::label).collect::<Vec<_>>(),
            "edges": self
                .graph
                .edges()
                .iter()
                .enumerate()
                .map(|(id, &(t, h))| json!({
                    "code": Self::label(&self.edge_posets[id]),
                    "tail": t,
                    "head": h,
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Builds the universal cycle for posets of size `k` that the deterministic
/// circuit of the arc digraph produces.
pub fn generate_ucycle(k: usize) -> Result<CyclicCode, CycleError> {
    let arcs = build_arc_digraph(k)?;
    let circuit = arcs.eulerian_circuit()?;
    let posets: Vec<NlPoset> = circuit.iter().map(|&e| arcs.edge_posets[e].clone()).collect();
    Ok(coding::emit_ucycle(&posets)?)
}

/// Counts the universal cycles for posets of size `k` exactly, together
/// with the spanning-arborescence count of the arc digraph.
pub fn count_ucycles(k: usize) -> Result<CountResult, CycleError> {
    Ok(build_arc_digraph(k)?.graph.best_count()?)
}

/// Everything checked about a claimed universal cycle. Sample lists are
/// capped so reports stay small even for badly broken inputs.
#[derive(Debug, Clone)]
pub struct UcycleReport {
    pub poset_size: usize,
    pub window_count: usize,
    pub expected_count: usize,
    pub invalid_count: usize,
    pub invalid_samples: Vec<(usize, String)>,
    pub duplicate_count: usize,
    pub duplicate_samples: Vec<(usize, usize)>,
    pub missing_count: usize,
    pub valid: bool,
}

impl fmt::Display for UcycleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "windows: {} (expected: {} posets of size {})",
            self.window_count, self.expected_count, self.poset_size
        )?;
        writeln!(f, "invalid windows: {}", self.invalid_count)?;
        for (pos, err) in &self.invalid_samples {
            writeln!(f, "  at {pos}: {err}")?;
        }
        writeln!(f, "duplicate decodes: {}", self.duplicate_count)?;
        for (a, b) in &self.duplicate_samples {
            writeln!(f, "  windows {a} and {b} decode to the same poset")?;
        }
        writeln!(f, "missing posets: {}", self.missing_count)?;
        write!(f, "verdict: {}", if self.valid { "valid" } else { "INVALID" })
    }
}

/// Checks that every window of `code` decodes to a distinct naturally
/// labeled poset and that together they cover all posets of the window's
/// size plus one.
pub fn verify_ucycle(code: &CyclicCode) -> Result<UcycleReport, CycleError> {
    let k = code.poset_size();
    if k > MAX_SIZE {
        return Err(CycleError::Poset(PosetError::TooLarge(k)));
    }
    let symbols = code.symbols();
    let n = symbols.len();
    let w = code.window();
    let mut invalid_count = 0;
    let mut invalid_samples = Vec::new();
    let mut duplicate_count = 0;
    let mut duplicate_samples = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    for t in 0..n {
        let raw: Vec<u64> = (0..w).map(|p| symbols[(t + n - (w - 1) + p) % n]).collect();
        let reduced = coding::window_read(&raw);
        match coding::decode_code(&reduced, DecodeMode::Strict) {
            Ok(poset) => {
                if let Some(&first) = seen.get(&poset.canonical_key()) {
                    duplicate_count += 1;
                    if duplicate_samples.len() < SAMPLE_CAP {
                        duplicate_samples.push((first, t));
                    }
                } else {
                    seen.insert(poset.canonical_key(), t);
                }
            }
            Err(err) => {
                invalid_count += 1;
                if invalid_samples.len() < SAMPLE_CAP {
                    invalid_samples.push((t, err.to_string()));
                }
            }
        }
    }
    let expected: HashSet<Vec<u64>> =
        NlPoset::enumerate(k).into_iter().map(|p| p.canonical_key()).collect();
    let missing_count = expected.iter().filter(|key| !seen.contains_key(*key)).count();
    let valid =
        invalid_count == 0 && duplicate_count == 0 && missing_count == 0 && n == expected.len();
    Ok(UcycleReport {
        poset_size: k,
        window_count: n,
        expected_count: expected.len(),
        invalid_count,
        invalid_samples,
        duplicate_count,
        duplicate_samples,
        missing_count,
        valid,
    })
}

/// A walk in the arc digraph from `source` to `target`, returned as its
/// edge posets. Empty when the endpoints are equal; otherwise exactly
/// `source.size()` steps: step t appends a future copy of target element t
/// above the images of that element's covers, then drops the current
/// minimum. Relations picked up through surviving source elements sit below
/// the appended block and are shed as those elements drop out.
pub fn build_path(source: &NlPoset, target: &NlPoset) -> Result<Vec<NlPoset>, CycleError> {
    let n = source.size();
    if n != target.size() {
        return Err(CycleError::EndpointSizeMismatch { from_size: n, to_size: target.size() });
    }
    if source == target {
        return Ok(Vec::new());
    }
    let target_covers = target.covers();
    let mut at = source.clone();
    let mut edges = Vec::with_capacity(n);
    for t in 1..=n {
        // Source survivors hold labels 1..=n-t; the block built so far sits
        // above them, so target element r now wears label (n + 1 - t) + r.
        let shift = n + 1 - t;
        let below = crate::poset::Antichain::new(
            target_covers.iter().filter(|&&(_, j)| j == t).map(|&(i, _)| i + shift),
        );
        let q = at.append_max(&below)?;
        at = q.drop_min()?;
        edges.push(q);
    }
    debug_assert_eq!(at, *target);
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn size_two_graph_is_one_vertex_with_two_loops() {
        let arcs = build_arc_digraph(2).unwrap();
        assert_eq!(arcs.vertices().len(), 1);
        assert_eq!(arcs.graph().edges(), &[(0, 0), (0, 0)]);
        let count = count_ucycles(2).unwrap();
        assert_eq!(count.arborescences, BigInt::from(1));
        assert_eq!(count.circuits, BigInt::from(1));
        let code = generate_ucycle(2).unwrap();
        assert_eq!(code.symbols(), &[0, 1]);
        assert!(verify_ucycle(&code).unwrap().valid);
    }

    #[test]
    fn size_three_graph_counts() {
        let arcs = build_arc_digraph(3).unwrap();
        assert_eq!(arcs.vertices().len(), 2);
        assert_eq!(arcs.graph().edge_count(), 7);
        assert_eq!(arcs.graph().laplacian(), vec![vec![2, -2], vec![-2, 2]]);
        let count = count_ucycles(3).unwrap();
        assert_eq!(count.arborescences, BigInt::from(2));
        assert_eq!(count.circuits, BigInt::from(24));
        assert_eq!(arcs.graph().brute_circuits().unwrap(), BigInt::from(24));
    }

    #[test]
    fn size_three_ucycle_is_deterministic() {
        let code = generate_ucycle(3).unwrap();
        assert_eq!(code.symbols(), &[0, 1, 0, 2, 3, 1, 2]);
        assert!(verify_ucycle(&code).unwrap().valid);
        assert_eq!(generate_ucycle(3).unwrap(), code);
    }

    #[test]
    fn size_four_counts_match_independent_values() {
        let arcs = build_arc_digraph(4).unwrap();
        let count = count_ucycles(4).unwrap();
        assert_eq!(count.arborescences, BigInt::from(4900));
        assert_eq!(count.circuits, "147483721728000000".parse::<BigInt>().unwrap());
        let mut out_degrees: Vec<usize> = arcs.graph().degrees().iter().map(|&(_, o)| o).collect();
        out_degrees.sort_unstable();
        assert_eq!(out_degrees, vec![4, 5, 5, 6, 6, 6, 8]);
        for root in 0..arcs.vertices().len() {
            assert_eq!(arcs.graph().arborescence_count(root), BigInt::from(4900));
        }
    }

    #[test]
    fn out_degrees_equal_antichain_counts_and_graph_is_balanced() {
        for k in 2..=6 {
            let arcs = build_arc_digraph(k).unwrap();
            assert!(arcs.graph().is_balanced(), "k={k}");
            assert!(arcs.graph().is_strongly_connected(), "k={k}");
            let degrees = arcs.graph().degrees();
            for (v, poset) in arcs.vertices().iter().enumerate() {
                assert_eq!(degrees[v].1 as u64, poset.antichain_count(), "k={k} vertex {v}");
            }
        }
    }

    #[test]
    fn antichain_totals_count_the_next_size_up() {
        for k in 3..=7 {
            let total: u64 = NlPoset::enumerate(k - 2).iter().map(NlPoset::antichain_count).sum();
            assert_eq!(total as usize, NlPoset::enumerate(k - 1).len(), "k={k}");
        }
    }

    #[test]
    fn generated_ucycles_validate_through_size_five() {
        for k in 2..=5 {
            let code = generate_ucycle(k).unwrap();
            let report = verify_ucycle(&code).unwrap();
            assert!(report.valid, "k={k}: {report}");
            assert_eq!(code.len(), NlPoset::enumerate(k).len());
        }
    }

    #[test]
    fn verifier_rejects_perturbed_cycles() {
        let good = generate_ucycle(3).unwrap();
        let mut symbols = good.symbols().to_vec();
        symbols[4] = 1; // clobber one window
        let bad = CyclicCode::new(symbols, good.window()).unwrap();
        let report = verify_ucycle(&bad).unwrap();
        assert!(!report.valid);
        assert!(report.duplicate_count > 0 || report.invalid_count > 0);

        let short = CyclicCode::new(good.symbols()[..6].to_vec(), good.window()).unwrap();
        let report = verify_ucycle(&short).unwrap();
        assert!(!report.valid);
        assert!(report.missing_count > 0);
    }

    #[test]
    fn verifier_accepts_any_rotation() {
        let good = generate_ucycle(4).unwrap();
        let n = good.len();
        for r in 0..n {
            let rotated: Vec<u64> = (0..n).map(|i| good.symbols()[(i + r) % n]).collect();
            let code = CyclicCode::new(rotated, good.window()).unwrap();
            assert!(verify_ucycle(&code).unwrap().valid, "rotation {r}");
        }
    }

    #[test]
    fn paths_connect_all_vertex_pairs_of_small_graphs() {
        for n in 2..=3 {
            let posets = NlPoset::enumerate(n);
            for source in &posets {
                for target in &posets {
                    let path = build_path(source, target).unwrap();
                    if source == target {
                        assert!(path.is_empty());
                        continue;
                    }
                    assert_eq!(path.len(), n);
                    assert_eq!(path[0].drop_max().unwrap(), *source);
                    assert_eq!(path[n - 1].drop_min().unwrap(), *target);
                    for pair in path.windows(2) {
                        assert_eq!(pair[0].drop_min().unwrap(), pair[1].drop_max().unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn path_endpoints_must_match_in_size() {
        let a = NlPoset::chain(2);
        let b = NlPoset::chain(3);
        assert!(matches!(
            build_path(&a, &b),
            Err(CycleError::EndpointSizeMismatch { from_size: 2, to_size: 3 })
        ));
    }

    #[test]
    fn rejects_trivial_sizes() {
        assert!(matches!(build_arc_digraph(1), Err(CycleError::SizeTooSmall(1))));
        assert!(matches!(generate_ucycle(0), Err(CycleError::SizeTooSmall(0))));
    }

    #[test]
    fn graph_exports_mention_codes() {
        let arcs = build_arc_digraph(3).unwrap();
        let dot = arcs.to_dot();
        assert!(dot.contains("label=\"12\""));
        let json = arcs.to_json();
        assert_eq!(json["k"], 3);
        assert_eq!(json["edges"].as_array().unwrap().len(), 7);
    }
}
