//! Overlap cycles of fixed-weight words.
//!
//! For parameters (n, k, q, s), the objects are length-n words over the
//! alphabet {0..=q} whose letters sum to k. In an s-overlap cycle,
//! consecutive words share s letters: each window of length n, taken at
//! stride n−s, spells one word, and every word appears exactly once.
//!
//! Construction is Eulerian: vertices are the length-s overlaps that can
//! extend to a full word, and each word runs from its s-prefix to its
//! s-suffix. The graph is balanced (complete an incoming edge's non-overlap
//! prefix to an outgoing edge's suffix and the degrees pair up), and
//! connectivity is established computationally. The descent certificate
//! ([`reduction_trace`]) walks any vertex to the most-maximal vertex by
//! alternately appending letters and rearranging, which is the hands-on
//! witness for connectedness.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};
use thiserror::Error;

use crate::eulergraph::{GraphError, MultiDigraph};
use crate::overlap::splice_words;
use crate::symbols;
use crate::verify::{scan_cycle, CycleReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("overlap must satisfy 1 <= s <= n-2, got s={s} with n={n}")]
    OverlapOutOfRange { n: usize, s: usize },
    #[error("word length {n} and overlap {s} must be coprime")]
    NotCoprime { n: usize, s: usize },
    #[error("alphabet bound q must be at least 1")]
    AlphabetZero,
    #[error("weight k={k} must be at least the alphabet bound q={q}")]
    WeightBelowAlphabet { k: u64, q: u64 },
    #[error("weight k={k} exceeds the maximum possible n*q={max}")]
    WeightTooLarge { k: u64, max: u64 },
    #[error("expected {expected} letters, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("letter {letter} at position {position} exceeds the alphabet bound {q}")]
    LetterTooLarge { position: usize, letter: u64, q: u64 },
    #[error("word weighs {got}, expected {expected}")]
    WrongWeight { expected: u64, got: u64 },
    #[error("overlap weight {weight} cannot extend to a weight-{k} word (needs {min}..={max})")]
    UnreachableWeight { weight: u64, k: u64, min: u64, max: u64 },
    #[error("overlap graph is not connected; no single cycle covers every word")]
    Disconnected,
    #[error("reduction ran past {0} rounds without reaching the most-maximal vertex")]
    ReductionCap(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parameters of one word-cycle family: length `n`, weight `k`, largest
/// letter `q`, overlap `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordCycleParams {
    n: usize,
    k: u64,
    q: u64,
    s: usize,
}

impl WordCycleParams {
    pub fn new(n: usize, k: u64, q: u64, s: usize) -> Result<Self, WordError> {
        if s < 1 || s + 2 > n {
            return Err(WordError::OverlapOutOfRange { n, s });
        }
        if n.gcd(&s) != 1 {
            return Err(WordError::NotCoprime { n, s });
        }
        if q == 0 {
            return Err(WordError::AlphabetZero);
        }
        if q > k {
            return Err(WordError::WeightBelowAlphabet { k, q });
        }
        let max = n as u64 * q;
        if k > max {
            return Err(WordError::WeightTooLarge { k, max });
        }
        Ok(WordCycleParams { n, k, q, s })
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> u64 {
        self.k
    }

    pub fn alphabet(&self) -> u64 {
        self.q
    }

    pub fn overlap(&self) -> usize {
        self.s
    }

    /// Fresh letters each window contributes: n − s.
    pub fn stride(&self) -> usize {
        self.n - self.s
    }

    /// Inclusive weight bounds for an s-letter overlap extendable to a
    /// weight-k word: the other n−s letters carry between 0 and (n−s)·q.
    fn overlap_weight_bounds(&self) -> (u64, u64) {
        let spare = (self.stride()) as u64 * self.q;
        let min = self.k.saturating_sub(spare);
        let max = self.k.min(self.s as u64 * self.q);
        (min, max)
    }
}

fn check_letters(letters: &[u64], expected_len: usize, q: u64) -> Result<(), WordError> {
    if letters.len() != expected_len {
        return Err(WordError::WrongLength { expected: expected_len, got: letters.len() });
    }
    for (position, &letter) in letters.iter().enumerate() {
        if letter > q {
            return Err(WordError::LetterTooLarge { position, letter, q });
        }
    }
    Ok(())
}

/// A word of length n over {0..=q} with letter sum exactly k.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightWord {
    letters: Vec<u64>,
}

impl WeightWord {
    pub fn new(letters: Vec<u64>, params: &WordCycleParams) -> Result<Self, WordError> {
        check_letters(&letters, params.n, params.q)?;
        let got: u64 = letters.iter().sum();
        if got != params.k {
            return Err(WordError::WrongWeight { expected: params.k, got });
        }
        Ok(WeightWord { letters })
    }

    pub fn letters(&self) -> &[u64] {
        &self.letters
    }

    pub fn weight(&self) -> u64 {
        self.letters.iter().sum()
    }
}

impl fmt::Display for WeightWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&symbols::render(&self.letters))
    }
}

/// An s-letter overlap that extends both leftward and rightward to a full
/// weight-k word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OverlapVertex {
    letters: Vec<u64>,
}

impl OverlapVertex {
    pub fn new(letters: Vec<u64>, params: &WordCycleParams) -> Result<Self, WordError> {
        check_letters(&letters, params.s, params.q)?;
        let weight: u64 = letters.iter().sum();
        let (min, max) = params.overlap_weight_bounds();
        if weight < min || weight > max {
            return Err(WordError::UnreachableWeight { weight, k: params.k, min, max });
        }
        Ok(OverlapVertex { letters })
    }

    pub fn letters(&self) -> &[u64] {
        &self.letters
    }

    pub fn weight(&self) -> u64 {
        self.letters.iter().sum()
    }
}

impl fmt::Display for OverlapVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&symbols::render(&self.letters))
    }
}

/// All length-`len` words over {0..=q} of each weight in `min..=max`, in
/// lexicographic order.
fn words_of_weight(len: usize, q: u64, min: u64, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn extend(
        current: &mut Vec<u64>,
        len: usize,
        q: u64,
        min: u64,
        max: u64,
        sum: u64,
        out: &mut Vec<Vec<u64>>,
    ) {
        if current.len() == len {
            if sum >= min {
                out.push(current.clone());
            }
            return;
        }
        let rest = (len - current.len() - 1) as u64 * q;
        for v in 0..=q {
            let s = sum + v;
            if s > max {
                break;
            }
            if s + rest < min {
                continue;
            }
            current.push(v);
            extend(current, len, q, min, max, s, out);
            current.pop();
        }
    }
    extend(&mut current, len, q, min, max, 0, &mut out);
    out
}

/// Every weight-k word, lexicographically.
pub fn enumerate_words(params: &WordCycleParams) -> Vec<WeightWord> {
    words_of_weight(params.n, params.q, params.k, params.k)
        .into_iter()
        .map(|letters| WeightWord { letters })
        .collect()
}

/// Every valid overlap vertex, lexicographically.
pub fn enumerate_vertices(params: &WordCycleParams) -> Vec<OverlapVertex> {
    let (min, max) = params.overlap_weight_bounds();
    words_of_weight(params.s, params.q, min, max)
        .into_iter()
        .map(|letters| OverlapVertex { letters })
        .collect()
}

/// The word-overlap graph: vertex v is `vertices()[v]`, edge ids index
/// `words()` in lexicographic order.
#[derive(Debug, Clone)]
pub struct WordGraph {
    params: WordCycleParams,
    vertices: Vec<OverlapVertex>,
    words: Vec<WeightWord>,
    graph: MultiDigraph,
}

pub fn build_word_graph(params: &WordCycleParams) -> WordGraph {
    let vertices = enumerate_vertices(params);
    let words = enumerate_words(params);
    let mut graph = MultiDigraph::new(vertices.len());
    let locate = |letters: &[u64]| {
        vertices
            .binary_search_by(|v| v.letters.as_slice().cmp(letters))
            .expect("every prefix and suffix of a weight-k word is a valid overlap")
    };
    for word in &words {
        let tail = locate(&word.letters[..params.s]);
        let head = locate(&word.letters[params.n - params.s..]);
        graph.add_edge(tail, head);
    }
    WordGraph { params: *params, vertices, words, graph }
}

impl WordGraph {
    pub fn params(&self) -> &WordCycleParams {
        &self.params
    }

    pub fn vertices(&self) -> &[OverlapVertex] {
        &self.vertices
    }

    pub fn words(&self) -> &[WeightWord] {
        &self.words
    }

    pub fn graph(&self) -> &MultiDigraph {
        &self.graph
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot(|v| self.vertices[v].to_string(), |e| self.words[e].to_string())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.params.n,
            "k": self.params.k,
            "q": self.params.q,
            "s": self.params.s,
            "vertices": self.vertices.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "edges": self
                .graph
                .edges()
                .iter()
                .enumerate()
                .map(|(id, &(t, h))| json!({
                    "word": self.words[id].to_string(),
                    "tail": t,
                    "head": h,
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Builds the s-overlap cycle the deterministic Eulerian circuit produces:
/// length (n−s) · (number of words), windows at stride n−s.
pub fn generate_ocycle(params: &WordCycleParams) -> Result<Vec<u64>, WordError> {
    let wg = build_word_graph(params);
    if !wg.graph.is_weakly_connected() {
        return Err(WordError::Disconnected);
    }
    let circuit = wg.graph.hierholzer(0)?;
    let ordered: Vec<Vec<u64>> = circuit.iter().map(|&e| wg.words[e].letters.clone()).collect();
    Ok(splice_words(&ordered, params.stride()))
}

/// Checks that windows of length n at stride n−s (at some offset class)
/// spell every weight-k word exactly once.
pub fn verify_ocycle(cycle: &[u64], params: &WordCycleParams) -> CycleReport {
    let expected: HashSet<Vec<u64>> =
        enumerate_words(params).into_iter().map(|w| w.letters).collect();
    scan_cycle(cycle, params.n, params.stride(), Some(&expected), |window| {
        WeightWord::new(window.to_vec(), params).map(|w| w.letters).map_err(|e| e.to_string())
    })
}

/// The descent target: q's in the last min(s, ⌊k/q⌋) positions, zeros
/// elsewhere.
pub fn most_maximal_vertex(params: &WordCycleParams) -> OverlapVertex {
    let full = (params.s as u64).min(params.k / params.q) as usize;
    let mut letters = vec![0u64; params.s];
    for slot in letters.iter_mut().rev().take(full) {
        *slot = params.q;
    }
    OverlapVertex { letters }
}

/// Extends an overlap to a full weight-k word: after the overlap come
/// ⌊(k−k_v)/q⌋ letters q, then the remainder (k−k_v) mod q if nonzero,
/// then zeros.
pub fn append_letters(v: &OverlapVertex, params: &WordCycleParams) -> WeightWord {
    let missing = params.k - v.weight();
    let mut letters = v.letters.clone();
    for _ in 0..missing / params.q {
        letters.push(params.q);
    }
    if !missing.is_multiple_of(params.q) {
        letters.push(missing % params.q);
    }
    letters.resize(params.n, 0);
    debug_assert_eq!(letters.iter().sum::<u64>(), params.k);
    WeightWord { letters }
}

/// Reorders a word's letters: everything below q in descending order, then
/// all the q's. The letter multiset is preserved.
pub fn rearrange(word: &WeightWord, q: u64) -> WeightWord {
    let mut small: Vec<u64> = word.letters.iter().copied().filter(|&x| x < q).collect();
    small.sort_unstable_by(|a, b| b.cmp(a));
    let qs = word.letters.len() - small.len();
    small.extend(std::iter::repeat_n(q, qs));
    WeightWord { letters: small }
}

/// One round of the descent: the word as appended, the word as rearranged,
/// and the vertex (s-suffix) the rearranged word points to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub appended: WeightWord,
    pub rearranged: WeightWord,
    pub vertex: OverlapVertex,
}

/// A full descent from `start` to the most-maximal vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub start: OverlapVertex,
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    /// The vertex the trace ends at.
    pub fn end(&self) -> &OverlapVertex {
        self.steps.last().map_or(&self.start, |s| &s.vertex)
    }

    /// Every string in visit order: start vertex, then per round the
    /// appended word, the rearranged word, and the next vertex.
    pub fn chain(&self) -> Vec<String> {
        let mut out = vec![self.start.to_string()];
        for step in &self.steps {
            out.push(step.appended.to_string());
            out.push(step.rearranged.to_string());
            out.push(step.vertex.to_string());
        }
        out
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.chain().join(" -> "))
    }
}

/// Walks from `v` to the most-maximal vertex, alternating append and
/// rearrange. Weights of successive vertices (ignoring trailing q's)
/// decrease, so this terminates; the cap only guards against bugs.
pub fn reduction_trace(
    v: &OverlapVertex,
    params: &WordCycleParams,
) -> Result<ReductionTrace, WordError> {
    const CAP: usize = 100_000;
    let goal = most_maximal_vertex(params);
    let mut at = v.clone();
    let mut steps = Vec::new();
    while at != goal {
        if steps.len() >= CAP {
            return Err(WordError::ReductionCap(CAP));
        }
        let appended = append_letters(&at, params);
        let rearranged = rearrange(&appended, params.q);
        let vertex = OverlapVertex::new(rearranged.letters[params.stride()..].to_vec(), params)?;
        at = vertex.clone();
        steps.push(ReductionStep { appended, rearranged, vertex });
    }
    Ok(ReductionTrace { start: v.clone(), steps })
}
