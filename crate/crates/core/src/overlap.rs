//! Shared helpers for cycles read through fixed-length windows at a fixed
//! stride.

/// Splices equal-length words into one cyclic symbol sequence, given that
/// consecutive words (cyclically) agree on an overlap of `len − stride`
/// symbols. The result reads back the t-th word through the window starting
/// at offset `t · stride`.
pub(crate) fn splice_words(words: &[Vec<u64>], stride: usize) -> Vec<u64> {
    let n = words[0].len();
    debug_assert!(stride >= 1 && stride <= n);
    let mut cycle = Vec::with_capacity(words.len() * stride);
    for w in words {
        debug_assert_eq!(w.len(), n);
        cycle.extend_from_slice(&w[n - stride..]);
    }
    // The suffix chunks line up starting at offset `overlap` of the true
    // cycle; rotating right by that much re-anchors word 0 at offset 0.
    let overlap = n - stride;
    let total = cycle.len();
    cycle.rotate_right(overlap % total);
    cycle
}

/// The length-`len` window of `cycle` starting at `start`, wrapping around.
pub(crate) fn cyclic_window(cycle: &[u64], start: usize, len: usize) -> Vec<u64> {
    (0..len).map(|i| cycle[(start + i) % cycle.len()]).collect()
}
