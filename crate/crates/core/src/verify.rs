//! Cycle verification through pluggable window decoders.
//!
//! A cyclic symbol sequence is read through fixed-length windows advancing
//! at a fixed stride. Each window must decode to a distinct object, and
//! when the decoder's universe is small enough to enumerate, the windows
//! must cover it exactly. Every window offset class is tried, so rotating
//! the input never changes the verdict.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::coding::{self, DecodeMode};
use crate::overlap::cyclic_window;
use crate::poset::{NlPoset, MAX_SIZE};

const SAMPLE_CAP: usize = 10;

/// Universes larger than this are not enumerated; coverage goes unchecked.
const UNIVERSE_CAP: u128 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("window length must be at least 1")]
    ZeroWindow,
    #[error("stride must satisfy 1 <= stride <= window, got stride {stride} with window {window}")]
    StrideOutOfRange { stride: usize, window: usize },
    #[error("subset decoder needs at least {window} ground elements, got {ground}")]
    GroundTooSmall { window: usize, ground: u64 },
    #[error("weight range {min}..={max} does not fit a window of length {window}")]
    WeightRangeUnsatisfiable { min: u64, max: u64, window: usize },
    #[error("poset window of length {0} exceeds the supported maximum")]
    PosetWindowTooLong(usize),
}

/// How one window turns into one combinatorial object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoder {
    /// Any word over {0..=alphabet}; the object is the word itself.
    LiteralWord { alphabet: u64 },
    /// The window lists distinct elements of {1..=ground}; the object is
    /// the set, so windows that permute each other decode equal.
    SubsetOfN { ground: u64 },
    /// A binary window whose weight lies in `min..=max`; the object is the
    /// window itself.
    CharacteristicVector { min: u64, max: u64 },
    /// The window is a permutation of {1..=window}.
    Permutation,
    /// The window reduces to the code of a naturally labeled poset of size
    /// window + 1.
    PosetCode,
}

/// Window length, stride, and decoder bundled for verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowScheme {
    window: usize,
    stride: usize,
    decoder: Decoder,
}

impl WindowScheme {
    pub fn new(window: usize, stride: usize, decoder: Decoder) -> Result<Self, VerifyError> {
        if window == 0 {
            return Err(VerifyError::ZeroWindow);
        }
        if stride == 0 || stride > window {
            return Err(VerifyError::StrideOutOfRange { stride, window });
        }
        match decoder {
            Decoder::SubsetOfN { ground } => {
                if ground < window as u64 {
                    return Err(VerifyError::GroundTooSmall { window, ground });
                }
            }
            Decoder::CharacteristicVector { min, max } => {
                if min > max || max > window as u64 {
                    return Err(VerifyError::WeightRangeUnsatisfiable { min, max, window });
                }
            }
            Decoder::PosetCode => {
                if window + 1 > MAX_SIZE {
                    return Err(VerifyError::PosetWindowTooLong(window));
                }
            }
            Decoder::LiteralWord { .. } | Decoder::Permutation => {}
        }
        Ok(WindowScheme { window, stride, decoder })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }

    /// Size of the decoder's object universe, when within the enumeration
    /// cap.
    pub fn universe_size(&self) -> Option<usize> {
        let w = self.window;
        let size: u128 = match self.decoder {
            Decoder::LiteralWord { alphabet } => checked_pow(alphabet as u128 + 1, w)?,
            Decoder::SubsetOfN { ground } => binomial(ground as u128, w as u128)?,
            Decoder::CharacteristicVector { min, max } => {
                let mut total: u128 = 0;
                for i in min..=max {
                    total = total.checked_add(binomial(w as u128, i as u128)?)?;
                }
                total
            }
            Decoder::Permutation => {
                let mut total: u128 = 1;
                for i in 2..=w as u128 {
                    total = total.checked_mul(i)?;
                }
                total
            }
            Decoder::PosetCode => {
                // No closed form; enumerate only comfortably small sizes.
                if w + 1 > 8 {
                    return None;
                }
                NlPoset::enumerate(w + 1).len() as u128
            }
        };
        if size > UNIVERSE_CAP {
            None
        } else {
            Some(size as usize)
        }
    }

    /// Canonical keys of every object the decoder can produce, when the
    /// universe is within the cap.
    fn universe(&self) -> Option<HashSet<Vec<u64>>> {
        self.universe_size()?;
        let w = self.window;
        let mut keys = HashSet::new();
        match self.decoder {
            Decoder::LiteralWord { alphabet } => {
                let mut word = vec![0u64; w];
                loop {
                    keys.insert(word.clone());
                    let mut pos = w;
                    while pos > 0 {
                        if word[pos - 1] < alphabet {
                            word[pos - 1] += 1;
                            word[pos..].iter_mut().for_each(|x| *x = 0);
                            break;
                        }
                        pos -= 1;
                    }
                    if pos == 0 {
                        break;
                    }
                }
            }
            Decoder::SubsetOfN { ground } => {
                fn subsets(
                    start: u64,
                    ground: u64,
                    left: usize,
                    chosen: &mut Vec<u64>,
                    keys: &mut HashSet<Vec<u64>>,
                ) {
                    if left == 0 {
                        keys.insert(chosen.clone());
                        return;
                    }
                    for v in start..=ground {
                        if ground - v + 1 < left as u64 {
                            break;
                        }
                        chosen.push(v);
                        subsets(v + 1, ground, left - 1, chosen, keys);
                        chosen.pop();
                    }
                }
                subsets(1, ground, w, &mut Vec::new(), &mut keys);
            }
            Decoder::CharacteristicVector { min, max } => {
                for mask in 0u64..(1 << w) {
                    let weight = mask.count_ones() as u64;
                    if weight >= min && weight <= max {
                        let vector: Vec<u64> = (0..w).map(|i| (mask >> i) & 1).collect();
                        keys.insert(vector);
                    }
                }
            }
            Decoder::Permutation => {
                fn perms(rest: &mut Vec<u64>, chosen: &mut Vec<u64>, keys: &mut HashSet<Vec<u64>>) {
                    if rest.is_empty() {
                        keys.insert(chosen.clone());
                        return;
                    }
                    for i in 0..rest.len() {
                        let v = rest.remove(i);
                        chosen.push(v);
                        perms(rest, chosen, keys);
                        chosen.pop();
                        rest.insert(i, v);
                    }
                }
                perms(&mut (1..=w as u64).collect(), &mut Vec::new(), &mut keys);
            }
            Decoder::PosetCode => {
                for poset in NlPoset::enumerate(w + 1) {
                    keys.insert(poset.canonical_key());
                }
            }
        }
        Some(keys)
    }

    /// Decodes one window to the canonical key of its object.
    fn decode(&self, window: &[u64]) -> Result<Vec<u64>, String> {
        match self.decoder {
            Decoder::LiteralWord { alphabet } => {
                for (i, &v) in window.iter().enumerate() {
                    if v > alphabet {
                        return Err(format!(
                            "letter {v} at window position {i} exceeds alphabet bound {alphabet}"
                        ));
                    }
                }
                Ok(window.to_vec())
            }
            Decoder::SubsetOfN { ground } => {
                let mut sorted = window.to_vec();
                sorted.sort_unstable();
                for pair in sorted.windows(2) {
                    if pair[0] == pair[1] {
                        return Err(format!("element {} repeats in the window", pair[0]));
                    }
                }
                if let Some(&v) = sorted.iter().find(|&&v| v < 1 || v > ground) {
                    return Err(format!("element {v} is outside 1..={ground}"));
                }
                Ok(sorted)
            }
            Decoder::CharacteristicVector { min, max } => {
                if let Some(&v) = window.iter().find(|&&v| v > 1) {
                    return Err(format!("entry {v} is not binary"));
                }
                let weight: u64 = window.iter().sum();
                if weight < min || weight > max {
                    return Err(format!("weight {weight} is outside {min}..={max}"));
                }
                Ok(window.to_vec())
            }
            Decoder::Permutation => {
                let w = window.len() as u64;
                let mut seen = vec![false; window.len() + 1];
                for &v in window {
                    if v < 1 || v > w {
                        return Err(format!("symbol {v} is outside 1..={w}"));
                    }
                    if seen[v as usize] {
                        return Err(format!("symbol {v} repeats"));
                    }
                    seen[v as usize] = true;
                }
                Ok(window.to_vec())
            }
            Decoder::PosetCode => {
                let reduced = coding::window_read(window);
                coding::decode_code(&reduced, DecodeMode::Strict)
                    .map(|poset| poset.canonical_key())
                    .map_err(|err| err.to_string())
            }
        }
    }
}

/// Everything checked about one cyclic sequence. Sample lists are capped;
/// diagnostics refer to offset class 0 when no offset validates.
#[derive(Debug, Clone)]
pub struct CycleReport {
    pub window: usize,
    pub stride: usize,
    pub symbol_count: usize,
    pub window_count: usize,
    pub expected_count: Option<usize>,
    pub coverage_checked: bool,
    /// Offset class whose windows all validated, if any.
    pub offset: Option<usize>,
    pub length_ok: bool,
    pub invalid_count: usize,
    pub invalid_samples: Vec<(usize, String)>,
    pub duplicate_count: usize,
    pub duplicate_samples: Vec<(usize, usize)>,
    pub missing_count: usize,
    pub valid: bool,
}

impl fmt::Display for CycleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} symbols, {} windows of length {} at stride {}",
            self.symbol_count, self.window_count, self.window, self.stride
        )?;
        match (self.coverage_checked, self.expected_count) {
            (true, Some(expected)) => writeln!(f, "expected objects: {expected}")?,
            _ => writeln!(f, "coverage not checked (universe too large)")?,
        }
        if !self.length_ok {
            writeln!(f, "length is not a whole number of strides")?;
        }
        writeln!(f, "invalid windows: {}", self.invalid_count)?;
        for (pos, err) in &self.invalid_samples {
            writeln!(f, "  at {pos}: {err}")?;
        }
        writeln!(f, "duplicate objects: {}", self.duplicate_count)?;
        for (a, b) in &self.duplicate_samples {
            writeln!(f, "  windows at {a} and {b} decode to the same object")?;
        }
        writeln!(f, "missing objects: {}", self.missing_count)?;
        if let Some(offset) = self.offset {
            writeln!(f, "validated at offset class {offset}")?;
        }
        write!(f, "verdict: {}", if self.valid { "valid" } else { "INVALID" })
    }
}

/// Scans `symbols` once per offset class and returns the first fully valid
/// pass, or the offset-0 diagnostics when none validates. `decode` maps a
/// window to the canonical key of its object; `expected` is the universe to
/// cover, or None to skip the coverage check.
pub(crate) fn scan_cycle(
    symbols: &[u64],
    window: usize,
    stride: usize,
    expected: Option<&HashSet<Vec<u64>>>,
    decode: impl Fn(&[u64]) -> Result<Vec<u64>, String>,
) -> CycleReport {
    let n = symbols.len();
    let length_ok = n > 0 && n.is_multiple_of(stride);
    let blank = CycleReport {
        window,
        stride,
        symbol_count: n,
        window_count: 0,
        expected_count: expected.map(HashSet::len),
        coverage_checked: expected.is_some(),
        offset: None,
        length_ok,
        invalid_count: 0,
        invalid_samples: Vec::new(),
        duplicate_count: 0,
        duplicate_samples: Vec::new(),
        missing_count: expected.map_or(0, HashSet::len),
        valid: false,
    };
    if !length_ok {
        return blank;
    }
    let window_count = n / stride;
    let mut first_failure: Option<CycleReport> = None;
    for offset in 0..stride {
        let mut invalid_count = 0;
        let mut invalid_samples = Vec::new();
        let mut duplicate_count = 0;
        let mut duplicate_samples = Vec::new();
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        for t in 0..window_count {
            let start = (offset + t * stride) % n;
            match decode(&cyclic_window(symbols, start, window)) {
                Ok(key) => {
                    if let Some(&prior) = seen.get(&key) {
                        duplicate_count += 1;
                        if duplicate_samples.len() < SAMPLE_CAP {
                            duplicate_samples.push((prior, start));
                        }
                    } else {
                        seen.insert(key, start);
                    }
                }
                Err(err) => {
                    invalid_count += 1;
                    if invalid_samples.len() < SAMPLE_CAP {
                        invalid_samples.push((start, err));
                    }
                }
            }
        }
        let missing_count = expected
            .map(|set| set.iter().filter(|key| !seen.contains_key(*key)).count())
            .unwrap_or(0);
        let count_ok = expected.is_none_or(|set| window_count == set.len());
        let valid = invalid_count == 0 && duplicate_count == 0 && missing_count == 0 && count_ok;
        let report = CycleReport {
            window_count,
            offset: valid.then_some(offset),
            invalid_count,
            invalid_samples,
            duplicate_count,
            duplicate_samples,
            missing_count,
            valid,
            ..blank.clone()
        };
        if valid {
            return report;
        }
        first_failure.get_or_insert(report);
    }
    first_failure.expect("stride >= 1 guarantees at least one pass")
}

/// Verifies that the cyclic sequence spells each decodable object exactly
/// once through the scheme's windows.
pub fn verify_cycle(symbols: &[u64], scheme: &WindowScheme) -> CycleReport {
    let universe = scheme.universe();
    scan_cycle(symbols, scheme.window, scheme.stride, universe.as_ref(), |window| {
        scheme.decode(window)
    })
}

/// Cycle length implied by the length law: one stride of fresh symbols per
/// object.
pub fn expected_length(scheme: &WindowScheme, universe_size: usize) -> usize {
    scheme.stride * universe_size
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = out.checked_mul(base)?;
    }
    Some(out)
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out.checked_mul(n - i)?;
        out /= i + 1;
    }
    Some(out)
}
