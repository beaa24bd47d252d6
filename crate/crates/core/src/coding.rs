//! Integer encoding of naturally labeled posets and the cyclic codes built
//! from it.
//!
//! A poset on `{1..k}` is determined by its cover relation, and natural
//! labeling lets each label's covers be packed into one integer: the symbol
//! for label `j` is
//!
//! ```text
//! a_j = Σ 2^(j-1-i)   over labels i covered by j
//! ```
//!
//! so the binary digits of `a_j`, written with width `j-1` and the smallest
//! label leftmost, mark the covered labels. The code of a poset is the symbol
//! sequence `(a_2, …, a_k)`. For example the six-element poset with covers
//! `1-2 1-4 2-5 4-5 3-6 5-6` encodes as `10455`.
//!
//! Because each `a_j` occupies `j-1` bits, a window of `k-1` arbitrary
//! integers can be *reduced* into a valid code by taking position `p` modulo
//! `2^p` ([`window_read`]). That reduction is what makes one cyclic symbol
//! string serve as a universal cycle: every cyclic window of `k-1` symbols
//! reduces to the code of the poset at that position ([`decode_ucycle`]),
//! and a circuit of overlapping posets is emitted one final symbol each
//! ([`emit_ucycle`]).

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::poset::{NlPoset, PosetError};
use crate::symbols;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodingError {
    #[error("poset must have at least 2 elements to encode")]
    TooSmall,
    #[error("symbol a_{index} = {value} must be smaller than 2^{width}")]
    SymbolTooLarge { index: usize, value: u64, width: usize },
    #[error("strict decode: symbols name a non-cover pair (the relation implies it transitively)")]
    NotCoverSet,
    #[error("decoded poset is invalid: {0}")]
    Poset(#[from] PosetError),
    #[error("cyclic code needs window ≥ 1 and at least one symbol")]
    EmptyCycle,
    #[error("circuit is empty")]
    EmptyCircuit,
    #[error("circuit posets must all share one size ≥ 2")]
    MixedSizes,
    #[error("overlap violated between circuit positions {0} and {1}")]
    OverlapViolation(usize, usize),
    #[error("window ending at position {position} failed to decode: {source}")]
    InvalidWindow { position: usize, source: Box<CodingError> },
    #[error("cannot parse cyclic code: {0}")]
    Parse(String),
}

/// How [`decode_code`] treats symbols that name redundant pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodeMode {
    /// Every named pair must be a genuine cover of the decoded order.
    #[default]
    Strict,
    /// Named pairs are closed transitively; redundant ones are absorbed.
    Normalize,
}

/// The symbol sequence `(a_2, …, a_k)` of a poset of size `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetCode {
    symbols: Vec<u64>,
}

impl PosetCode {
    /// Wraps raw symbols, enforcing `a_j < 2^(j-1)`.
    pub fn new(symbols: Vec<u64>) -> Result<Self, CodingError> {
        for (idx, &a) in symbols.iter().enumerate() {
            let j = idx + 2;
            if width_exceeded(a, j - 1) {
                return Err(CodingError::SymbolTooLarge { index: j, value: a, width: j - 1 });
            }
        }
        Ok(PosetCode { symbols })
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    /// Size of the poset the code denotes.
    pub fn size(&self) -> usize {
        self.symbols.len() + 1
    }
}

impl fmt::Display for PosetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", symbols::render(&self.symbols))
    }
}

impl FromStr for PosetCode {
    type Err = CodingError;

    fn from_str(text: &str) -> Result<Self, CodingError> {
        let syms = symbols::parse(text).map_err(|e| CodingError::Parse(e.to_string()))?;
        PosetCode::new(syms)
    }
}

fn width_exceeded(value: u64, width: usize) -> bool {
    width < 64 && value >= 1u64 << width
}

/// Encodes a poset of size ≥ 2 as its cover-symbol sequence.
pub fn encode_poset(poset: &NlPoset) -> Result<PosetCode, CodingError> {
    if poset.size() < 2 {
        return Err(CodingError::TooSmall);
    }
    Ok(PosetCode { symbols: poset.canonical_key() })
}

/// Decodes a symbol sequence back to a poset.
///
/// The bits of `a_j` name pairs `(i, j)`; the decoded order is their
/// transitive closure. In [`DecodeMode::Strict`] every named pair must be a
/// cover of that closure, so encode and decode are mutually inverse.
pub fn decode_code(code: &PosetCode, mode: DecodeMode) -> Result<NlPoset, CodingError> {
    let size = code.size();
    let mut named = Vec::new();
    for (idx, &a) in code.symbols.iter().enumerate() {
        let j = idx + 2;
        if width_exceeded(a, j - 1) {
            return Err(CodingError::SymbolTooLarge { index: j, value: a, width: j - 1 });
        }
        for i in 1..j {
            if a & (1 << (j - 1 - i)) != 0 {
                named.push((i, j));
            }
        }
    }
    let poset = NlPoset::from_covers(size, &named)?;
    if mode == DecodeMode::Strict {
        let mut named_sorted = named;
        named_sorted.sort_unstable();
        if poset.covers() != named_sorted {
            return Err(CodingError::NotCoverSet);
        }
    }
    Ok(poset)
}

/// Reduces a window of arbitrary symbols into a valid code: position `p`
/// (1-indexed) is taken modulo `2^p`.
pub fn window_read(window: &[u64]) -> PosetCode {
    let symbols = window
        .iter()
        .enumerate()
        .map(|(idx, &w)| {
            let p = idx + 1;
            if p >= 64 {
                w
            } else {
                w & ((1u64 << p) - 1)
            }
        })
        .collect();
    PosetCode { symbols }
}

/// A cyclic symbol string read through windows of a fixed length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCode {
    symbols: Vec<u64>,
    window: usize,
}

impl CyclicCode {
    pub fn new(symbols: Vec<u64>, window: usize) -> Result<Self, CodingError> {
        if window == 0 || symbols.is_empty() {
            return Err(CodingError::EmptyCycle);
        }
        Ok(CyclicCode { symbols, window })
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Size of the posets the windows decode to.
    pub fn poset_size(&self) -> usize {
        self.window + 1
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The lexicographically least rotation, used for display.
    pub fn canonical_rotation(&self) -> CyclicCode {
        let n = self.symbols.len();
        let mut best = 0;
        for cand in 1..n {
            for i in 0..n {
                let a = self.symbols[(cand + i) % n];
                let b = self.symbols[(best + i) % n];
                if a != b {
                    if a < b {
                        best = cand;
                    }
                    break;
                }
            }
        }
        let mut symbols = self.symbols.clone();
        symbols.rotate_left(best);
        CyclicCode { symbols, window: self.window }
    }

    /// Compact digit string, available when every symbol is a single digit.
    pub fn compact_string(&self) -> Option<String> {
        if self.symbols.iter().all(|&s| s < 10) {
            Some(symbols::render(&self.symbols))
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.poset_size(),
            "cycle": self.symbols,
        })
    }
}

impl fmt::Display for CyclicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "k={};{}", self.poset_size(), parts.join(","))
    }
}

impl FromStr for CyclicCode {
    type Err = CodingError;

    fn from_str(text: &str) -> Result<Self, CodingError> {
        let text = text.trim();
        let rest = text
            .strip_prefix("k=")
            .ok_or_else(|| CodingError::Parse("expected `k=<k>;<symbols>`".into()))?;
        let (k_part, sym_part) = rest
            .split_once(';')
            .ok_or_else(|| CodingError::Parse("expected `;` after k".into()))?;
        let k: usize =
            k_part.parse().map_err(|_| CodingError::Parse(format!("bad k value {k_part:?}")))?;
        if k < 2 {
            return Err(CodingError::Parse("k must be at least 2".into()));
        }
        let syms = symbols::parse(sym_part).map_err(|e| CodingError::Parse(e.to_string()))?;
        CyclicCode::new(syms, k - 1)
    }
}

/// Emits the cyclic code of a circuit of same-size posets in which
/// consecutive members overlap: `drop_min` of each equals `drop_max` of the
/// next, cyclically. Each poset contributes its final symbol `a_k`.
pub fn emit_ucycle(circuit: &[NlPoset]) -> Result<CyclicCode, CodingError> {
    if circuit.is_empty() {
        return Err(CodingError::EmptyCircuit);
    }
    let k = circuit[0].size();
    if k < 2 || circuit.iter().any(|p| p.size() != k) {
        return Err(CodingError::MixedSizes);
    }
    for (t, p) in circuit.iter().enumerate() {
        let next = &circuit[(t + 1) % circuit.len()];
        let tail = p.drop_min().expect("size >= 2");
        let head = next.drop_max().expect("size >= 2");
        if tail != head {
            return Err(CodingError::OverlapViolation(t, (t + 1) % circuit.len()));
        }
    }
    let symbols =
        circuit.iter().map(|p| encode_poset(p).expect("size >= 2").symbols[k - 2]).collect();
    CyclicCode::new(symbols, k - 1)
}

/// Decodes every cyclic window strictly. The window *ending* at position `t`
/// yields element `t`, so `decode_ucycle(emit_ucycle(c))` reproduces `c`
/// element-wise. Duplicate detection is left to the callers that verify
/// coverage.
pub fn decode_ucycle(code: &CyclicCode) -> Result<Vec<NlPoset>, CodingError> {
    let n = code.symbols.len();
    let w = code.window;
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let window: Vec<u64> = (0..w).map(|p| code.symbols[(t + n - (w - 1) + p) % n]).collect();
        let reduced = window_read(&window);
        let poset = decode_code(&reduced, DecodeMode::Strict)
            .map_err(|e| CodingError::InvalidWindow { position: t, source: Box::new(e) })?;
        out.push(poset);
    }
    Ok(out)
}
