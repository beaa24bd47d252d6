//! Juggling sequences and their overlap cycles.
//!
//! A site-swap sequence of period n lists n throw heights whose sum is a
//! multiple of n and whose landing slots (throw + position, mod n) are
//! pairwise distinct. Ball count is the mean throw height. For odd n, all
//! sequences of period n with at most b balls (throws capped at n·b, the
//! maximum a b-ball pattern can use) admit an (n−2)-overlap cycle: windows
//! of length n at stride 2 spell each sequence exactly once.
//!
//! Connectivity of the underlying graph is witnessed constructively by
//! [`reduce_to_zero`], which walks any sequence to the all-zeros sequence
//! through legal transitions only: single cyclic shifts (rotate left by 2)
//! and break-down moves that split the front throw onto its neighbor.

use std::collections::HashSet;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::eulergraph::{GraphError, MultiDigraph};
use crate::overlap::splice_words;
use crate::symbols;
use crate::verify::{scan_cycle, CycleReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JuggleError {
    #[error("period must be odd so that shifting by 2 reaches every rotation, got {0}")]
    PeriodNotOdd(usize),
    #[error("period {0} is too short for overlap cycles; need at least 3")]
    PeriodTooSmall(usize),
    #[error("sequence is empty")]
    Empty,
    #[error("throw sum {sum} is not a multiple of the period {n}")]
    SumNotDivisible { sum: u64, n: usize },
    #[error("throws at positions {first} and {second} land in the same slot")]
    LandingCollision { first: usize, second: usize },
    #[error("expected period {expected}, got a sequence of length {got}")]
    PeriodMismatch { expected: usize, got: usize },
    #[error("juggling graph is not connected; no single cycle covers it")]
    Disconnected,
    #[error("reduction ran past {0} moves without reaching all zeros")]
    ReduceCap(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A valid site-swap sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JugglingSequence {
    throws: Vec<u64>,
}

impl JugglingSequence {
    pub fn new(throws: Vec<u64>) -> Result<Self, JuggleError> {
        if throws.is_empty() {
            return Err(JuggleError::Empty);
        }
        let n = throws.len();
        let sum: u64 = throws.iter().sum();
        if !sum.is_multiple_of(n as u64) {
            return Err(JuggleError::SumNotDivisible { sum, n });
        }
        let mut landing = vec![usize::MAX; n];
        for (i, &t) in throws.iter().enumerate() {
            let slot = ((t as usize) + i) % n;
            if landing[slot] != usize::MAX {
                return Err(JuggleError::LandingCollision { first: landing[slot], second: i });
            }
            landing[slot] = i;
        }
        Ok(JugglingSequence { throws })
    }

    pub fn throws(&self) -> &[u64] {
        &self.throws
    }

    pub fn period(&self) -> usize {
        self.throws.len()
    }

    /// Mean throw height.
    pub fn ball_count(&self) -> u64 {
        self.throws.iter().sum::<u64>() / self.period() as u64
    }

    /// The landing permutation i ↦ (throw_i + i) mod n.
    pub fn underlying_permutation(&self) -> Vec<u64> {
        let n = self.period() as u64;
        self.throws.iter().enumerate().map(|(i, &t)| (t + i as u64) % n).collect()
    }

    /// Moves the first two throws to the end. Every landing slot shifts by
    /// the same amount mod n, so validity is preserved.
    pub fn cyclic_shift(&self) -> JugglingSequence {
        let mut throws = self.throws.clone();
        let by = 2 % throws.len();
        throws.rotate_left(by);
        JugglingSequence { throws }
    }
}

impl fmt::Display for JugglingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&symbols::render(&self.throws))
    }
}

/// True when `throws` is a valid site-swap sequence of its own length.
pub fn validate(throws: &[u64]) -> bool {
    JugglingSequence::new(throws.to_vec()).is_ok()
}

/// Period and ball bound for one cycle family; the overlap is always n−2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JuggleParams {
    n: usize,
    b: u64,
}

impl JuggleParams {
    pub fn new(n: usize, b: u64) -> Result<Self, JuggleError> {
        if n.is_multiple_of(2) {
            return Err(JuggleError::PeriodNotOdd(n));
        }
        Ok(JuggleParams { n, b })
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn balls(&self) -> u64 {
        self.b
    }

    pub fn overlap(&self) -> usize {
        self.n.saturating_sub(2)
    }

    /// Largest throw a pattern with at most b balls can contain.
    pub fn max_throw(&self) -> u64 {
        self.n as u64 * self.b
    }

    fn contains(&self, seq: &JugglingSequence) -> Result<(), String> {
        if seq.period() != self.n {
            return Err(format!("period {} differs from {}", seq.period(), self.n));
        }
        if seq.ball_count() > self.b {
            return Err(format!("{} balls exceed the bound {}", seq.ball_count(), self.b));
        }
        if let Some(&t) = seq.throws.iter().find(|&&t| t > self.max_throw()) {
            return Err(format!("throw {t} exceeds the cap {}", self.max_throw()));
        }
        Ok(())
    }
}

/// All valid sequences of period n with at most b balls and throws at most
/// n·b, in lexicographic order. Enumeration runs over landing permutations:
/// every sequence is p_i − i mod n plus a multiple of n per position.
pub fn enumerate_sequences(params: &JuggleParams) -> Vec<JugglingSequence> {
    let n = params.n;
    let nn = n as u64;
    let mut out = Vec::new();
    let mut perm: Vec<u64> = (0..nn).collect();
    permute(&mut perm, 0, &mut |p| {
        let base: Vec<u64> =
            p.iter().enumerate().map(|(i, &pi)| (pi + nn - (i as u64 % nn)) % nn).collect();
        let base_balls = base.iter().sum::<u64>() / nn;
        if base_balls > params.b {
            return;
        }
        // Raise positions by multiples of n while the ball count allows.
        let mut lifts = vec![0u64; n];
        distribute(&base, &mut lifts, 0, params.b - base_balls, params, &mut out);
    });
    out.sort_unstable();
    out
}

fn permute(items: &mut Vec<u64>, at: usize, visit: &mut impl FnMut(&[u64])) {
    if at == items.len() {
        visit(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, visit);
        items.swap(at, i);
    }
}

fn distribute(
    base: &[u64],
    lifts: &mut Vec<u64>,
    at: usize,
    budget: u64,
    params: &JuggleParams,
    out: &mut Vec<JugglingSequence>,
) {
    let nn = params.n as u64;
    if at == base.len() {
        let throws: Vec<u64> = base.iter().zip(lifts.iter()).map(|(&b, &l)| b + l * nn).collect();
        debug_assert!(validate(&throws));
        out.push(JugglingSequence { throws });
        return;
    }
    // base[at] < n ≤ max_throw when b ≥ 1; for b = 0 the ball filter leaves
    // only the all-zeros base, so the subtraction never underflows.
    let cap = (params.max_throw() - base[at]) / nn;
    for lift in 0..=budget.min(cap) {
        lifts[at] = lift;
        distribute(base, lifts, at + 1, budget - lift, params, out);
    }
    lifts[at] = 0;
}

/// The (n−2)-overlap graph: vertex v is `vertices()[v]`, edge ids index
/// `sequences()` in lexicographic order.
#[derive(Debug, Clone)]
pub struct JuggleGraph {
    params: JuggleParams,
    vertices: Vec<Vec<u64>>,
    sequences: Vec<JugglingSequence>,
    graph: MultiDigraph,
}

pub fn build_juggling_graph(params: &JuggleParams) -> Result<JuggleGraph, JuggleError> {
    if params.n < 3 {
        return Err(JuggleError::PeriodTooSmall(params.n));
    }
    let s = params.overlap();
    let sequences = enumerate_sequences(params);
    let mut vertex_set: HashSet<Vec<u64>> = HashSet::new();
    for seq in &sequences {
        vertex_set.insert(seq.throws[..s].to_vec());
        vertex_set.insert(seq.throws[params.n - s..].to_vec());
    }
    let mut vertices: Vec<Vec<u64>> = vertex_set.into_iter().collect();
    vertices.sort_unstable();
    let locate = |overlap: &[u64]| {
        vertices
            .binary_search_by(|v| v.as_slice().cmp(overlap))
            .expect("vertex set contains every prefix and suffix")
    };
    let mut graph = MultiDigraph::new(vertices.len());
    for seq in &sequences {
        let tail = locate(&seq.throws[..s]);
        let head = locate(&seq.throws[params.n - s..]);
        graph.add_edge(tail, head);
    }
    Ok(JuggleGraph { params: *params, vertices, sequences, graph })
}

impl JuggleGraph {
    pub fn params(&self) -> &JuggleParams {
        &self.params
    }

    pub fn vertices(&self) -> &[Vec<u64>] {
        &self.vertices
    }

    pub fn sequences(&self) -> &[JugglingSequence] {
        &self.sequences
    }

    pub fn graph(&self) -> &MultiDigraph {
        &self.graph
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot(|v| symbols::render(&self.vertices[v]), |e| self.sequences[e].to_string())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "period": self.params.n,
            "balls": self.params.b,
            "vertices": self.vertices.iter().map(|v| symbols::render(v)).collect::<Vec<_>>(),
            "edges": self
                .graph
                .edges()
                .iter()
                .enumerate()
                .map(|(id, &(t, h))| json!({
                    "sequence": self.sequences[id].to_string(),
                    "tail": t,
                    "head": h,
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Builds the overlap cycle the deterministic Eulerian circuit produces:
/// length 2 · (number of sequences), windows of length n at stride 2.
pub fn generate_ocycle(params: &JuggleParams) -> Result<Vec<u64>, JuggleError> {
    let jg = build_juggling_graph(params)?;
    if !jg.graph.is_weakly_connected() {
        return Err(JuggleError::Disconnected);
    }
    let circuit = jg.graph.hierholzer(0)?;
    let ordered: Vec<Vec<u64>> = circuit.iter().map(|&e| jg.sequences[e].throws.clone()).collect();
    Ok(splice_words(&ordered, 2))
}

/// Checks that windows of length n at stride 2 (at some offset class) spell
/// every sequence of the family exactly once.
pub fn verify_ocycle(cycle: &[u64], params: &JuggleParams) -> CycleReport {
    let expected: HashSet<Vec<u64>> =
        enumerate_sequences(params).into_iter().map(|seq| seq.throws).collect();
    scan_cycle(cycle, params.n, 2, Some(&expected), |window| {
        let seq = JugglingSequence::new(window.to_vec()).map_err(|e| e.to_string())?;
        params.contains(&seq)?;
        Ok(seq.throws)
    })
}

/// Walks `seq` to the all-zeros sequence and returns every intermediate,
/// starting with `seq` itself. Each move is one cyclic shift or one
/// break-down: with j_1 ≠ 0 in front, emit j_3…j_n, j_2+1, j_1−1, zeroing
/// any emitted value that hits exactly n.
///
/// Move planning repeats three stages. While some throw is at least n,
/// rotate a maximal one to the front (preferring the occurrence followed by
/// the smallest throw, then the fewest shifts) and break it down; its front
/// copy decays by one per round and is zeroed on reaching n. Otherwise
/// rotate a maximal throw next to the front (fewest shifts; unique, since
/// shift counts differ for distinct positions) and break down if the front
/// is nonzero; when the front is zero, keep shifting until the largest
/// smaller throw (or another maximum if none) first reaches the front, and
/// break that down instead.
pub fn reduce_to_zero(
    seq: &JugglingSequence,
    params: &JuggleParams,
) -> Result<Vec<JugglingSequence>, JuggleError> {
    const CAP: usize = 100_000;
    let n = params.n;
    if seq.period() != n {
        return Err(JuggleError::PeriodMismatch { expected: n, got: seq.period() });
    }
    if n < 3 {
        return Err(JuggleError::PeriodTooSmall(n));
    }
    let nn = n as u64;
    // 2 * inv2 ≡ 1 mod n; shifting t times moves index i to i − 2t mod n.
    let inv2 = n.div_ceil(2);
    let shifts_to = |from: usize, to: usize| (from + n - to) % n * inv2 % n;
    let mut chain = vec![seq.clone()];
    loop {
        let current = chain.last().unwrap().clone();
        let throws = &current.throws;
        if throws.iter().all(|&t| t == 0) {
            return Ok(chain);
        }
        if chain.len() >= CAP {
            return Err(JuggleError::ReduceCap(CAP));
        }
        let max = *throws.iter().max().unwrap();
        let front_shifts = if max >= nn {
            let pick = (0..n)
                .filter(|&i| throws[i] == max)
                .min_by_key(|&i| (throws[(i + 1) % n], shifts_to(i, 0)))
                .unwrap();
            shifts_to(pick, 0)
        } else {
            let pick =
                (0..n).filter(|&i| throws[i] == max).min_by_key(|&i| shifts_to(i, 1)).unwrap();
            let t2 = shifts_to(pick, 1);
            let at_front = throws[(pick + n - 1) % n];
            if at_front != 0 {
                // The maximum sits second with a nonzero front throw.
                t2
            } else {
                // Keep cycling until the best lower throw reaches the front.
                let next_best =
                    throws.iter().copied().filter(|&t| t > 0 && t < max).max().unwrap_or(max);
                t2 + (0..n)
                    .filter(|&i| throws[i] == next_best)
                    .map(|i| {
                        let idx_after_t2 = (i + n - (2 * t2) % n) % n;
                        shifts_to(idx_after_t2, 0)
                    })
                    .min()
                    .unwrap()
            }
        };
        let mut at = current;
        for _ in 0..front_shifts {
            at = at.cyclic_shift();
            chain.push(at.clone());
        }
        let z = |x: u64| if x == nn { 0 } else { x };
        let mut next = at.throws[2..].to_vec();
        next.push(z(at.throws[1] + 1));
        next.push(z(at.throws[0] - 1));
        chain.push(JugglingSequence::new(next).expect("break-down moves preserve validity"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> JugglingSequence {
        JugglingSequence::new(symbols::parse(text).unwrap()).unwrap()
    }

    fn params(n: usize, b: u64) -> JuggleParams {
        JuggleParams::new(n, b).unwrap()
    }

    #[test]
    fn validity_examples() {
        assert!(validate(&symbols::parse("531537").unwrap()));
        assert!(validate(&symbols::parse("151140").unwrap()));
        assert!(!validate(&[2, 1]));
        assert!(validate(&[0, 0, 0, 0]));
        assert!(!validate(&[1, 0, 0]));
        assert_eq!(
            JugglingSequence::new(vec![2, 1]).unwrap_err(),
            JuggleError::SumNotDivisible { sum: 3, n: 2 }
        );
        assert_eq!(
            JugglingSequence::new(vec![2, 1, 0]).unwrap_err(),
            JuggleError::LandingCollision { first: 0, second: 1 }
        );
        assert_eq!(JugglingSequence::new(vec![]).unwrap_err(), JuggleError::Empty);
    }

    #[test]
    fn ball_counts() {
        assert_eq!(seq("531537").ball_count(), 4);
        assert_eq!(seq("151140").ball_count(), 2);
        assert_eq!(seq("0000").ball_count(), 0);
    }

    #[test]
    fn underlying_permutations() {
        assert_eq!(seq("531537").underlying_permutation(), vec![5, 4, 3, 2, 1, 0]);
        assert_eq!(seq("151140").underlying_permutation(), vec![1, 0, 3, 4, 2, 5]);
        assert_eq!(seq("000").underlying_permutation(), vec![0, 1, 2]);
    }

    #[test]
    fn shifts_move_the_front_pair_to_the_back() {
        assert_eq!(seq("300300300").cyclic_shift(), seq("030030030"));
        let shifted = seq("531537").cyclic_shift();
        assert_eq!(shifted, seq("153753"));
        // Repeated shifts visit every rotation when the period is odd.
        let mut at = seq("012");
        let mut seen = vec![at.clone()];
        for _ in 0..2 {
            at = at.cyclic_shift();
            seen.push(at.clone());
        }
        assert_eq!(seen, vec![seq("012"), seq("201"), seq("120")]);
        assert_eq!(seen[2].cyclic_shift(), seen[0]);
    }

    #[test]
    fn shifts_preserve_validity_and_ball_count() {
        for (n, b) in [(1, 2), (3, 2), (5, 2)] {
            for s in enumerate_sequences(&params(n, b)) {
                let shifted = s.cyclic_shift();
                assert!(validate(shifted.throws()), "{s}");
                assert_eq!(shifted.ball_count(), s.ball_count());
            }
        }
    }

    #[test]
    fn enumerate_small_families() {
        let listed: Vec<String> =
            enumerate_sequences(&params(3, 1)).iter().map(ToString::to_string).collect();
        assert_eq!(listed, vec!["000", "003", "012", "030", "111", "120", "201", "300"]);
        let tiny: Vec<String> =
            enumerate_sequences(&params(1, 3)).iter().map(ToString::to_string).collect();
        assert_eq!(tiny, vec!["0", "1", "2", "3"]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (n, b) in [(3, 1), (3, 2), (5, 1)] {
            let p = params(n, b);
            let cap = p.max_throw();
            let mut brute = Vec::new();
            let mut stack = vec![Vec::new()];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == n {
                    if validate(&prefix) && prefix.iter().sum::<u64>() / n as u64 <= b {
                        brute.push(prefix);
                    }
                    continue;
                }
                for t in (0..=cap).rev() {
                    let mut next = prefix.clone();
                    next.push(t);
                    stack.push(next);
                }
            }
            brute.sort_unstable();
            let listed: Vec<Vec<u64>> =
                enumerate_sequences(&p).iter().map(|s| s.throws().to_vec()).collect();
            assert_eq!(listed, brute, "n={n} b={b}");
        }
    }

    #[test]
    fn graph_shape_for_one_ball() {
        let jg = build_juggling_graph(&params(3, 1)).unwrap();
        assert_eq!(jg.graph().edge_count(), 8);
        assert_eq!(jg.vertices().len(), 4);
        assert!(jg.graph().is_balanced());
        assert!(jg.graph().is_weakly_connected());
    }

    #[test]
    fn graphs_are_balanced_and_connected() {
        for (n, b) in [(3, 1), (3, 2), (5, 1), (5, 2)] {
            let jg = build_juggling_graph(&params(n, b)).unwrap();
            assert!(jg.graph().is_balanced(), "n={n} b={b}");
            assert!(jg.graph().is_weakly_connected(), "n={n} b={b}");
        }
    }

    #[test]
    fn even_periods_are_rejected() {
        assert_eq!(JuggleParams::new(4, 1).unwrap_err(), JuggleError::PeriodNotOdd(4));
        assert_eq!(
            build_juggling_graph(&params(1, 1)).unwrap_err(),
            JuggleError::PeriodTooSmall(1)
        );
    }

    #[test]
    fn one_ball_ocycle_is_exact() {
        let p = params(3, 1);
        let cycle = generate_ocycle(&p).unwrap();
        assert_eq!(cycle, vec![0, 0, 0, 0, 3, 0, 0, 1, 2, 0, 1, 1, 1, 2, 0, 3]);
        let report = verify_ocycle(&cycle, &p);
        assert!(report.valid, "{report}");
    }

    #[test]
    fn ocycles_cover_small_families() {
        for (n, b) in [(3, 1), (3, 2), (5, 1)] {
            let p = params(n, b);
            let cycle = generate_ocycle(&p).unwrap();
            assert_eq!(cycle.len(), 2 * enumerate_sequences(&p).len());
            let report = verify_ocycle(&cycle, &p);
            assert!(report.valid, "n={n} b={b}: {report}");
        }
    }

    #[test]
    fn verifier_rejects_tampering() {
        let p = params(3, 1);
        let mut cycle = generate_ocycle(&p).unwrap();
        cycle[3] += 3;
        assert!(!verify_ocycle(&cycle, &p).valid);
        assert!(!verify_ocycle(&[], &p).valid);
    }

    #[test]
    fn reduction_hits_published_transitions() {
        let p = params(9, 1);
        let chain = reduce_to_zero(&seq("300300300"), &p).unwrap();
        assert_eq!(chain.first().unwrap(), &seq("300300300"));
        assert_eq!(chain.last().unwrap(), &seq("000000000"));
        let rendered: Vec<String> = chain.iter().map(ToString::to_string).collect();
        for (from, to) in [("300300300", "030030012"), ("203003001", "300300111")] {
            let hit = rendered.windows(2).any(|pair| pair[0] == from && pair[1] == to);
            assert!(hit, "missing transition {from} -> {to} in {rendered:?}");
        }
    }

    #[test]
    fn reduction_moves_are_legal_transitions() {
        let p = params(9, 1);
        let chain = reduce_to_zero(&seq("300300300"), &p).unwrap();
        for pair in chain.windows(2) {
            assert!(validate(pair[1].throws()));
            // Consecutive sequences share the length-(n−2) overlap.
            assert_eq!(&pair[0].throws()[2..], &pair[1].throws()[..7]);
        }
    }

    #[test]
    fn reduction_terminates_for_whole_families() {
        for (n, b) in [(3, 1), (3, 2), (5, 1)] {
            let p = params(n, b);
            for s in enumerate_sequences(&p) {
                let chain = reduce_to_zero(&s, &p).unwrap();
                assert!(chain.last().unwrap().throws().iter().all(|&t| t == 0), "{s}");
                for pair in chain.windows(2) {
                    assert_eq!(&pair[0].throws()[2..], &pair[1].throws()[..n - 2]);
                }
            }
        }
    }

    #[test]
    fn reduction_of_zeros_is_trivial() {
        let p = params(3, 1);
        let chain = reduce_to_zero(&seq("000"), &p).unwrap();
        assert_eq!(chain.len(), 1);
    }

    #[test]
    fn exports_name_sequences() {
        let jg = build_juggling_graph(&params(3, 1)).unwrap();
        assert!(jg.to_dot().contains("label=\"300\""));
        assert_eq!(jg.to_json()["edges"].as_array().unwrap().len(), 8);
    }
}
