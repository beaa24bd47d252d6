//! Universal cycles of naturally labeled posets, overlap cycles of fixed-weight
//! words, and overlap cycles of juggling sequences.
//!
//! A universal cycle lists a combinatorial family as the windows of one cyclic
//! string: every object appears as exactly one window. The three families here
//! all reduce to Eulerian circuits of a transition digraph:
//!
//! * [`poset`] / [`coding`] / [`posetcycle`] — naturally labeled posets on
//!   `{1..k}`, their antichains, the integer encoding of a poset by its cover
//!   sets, and the arc digraph whose Eulerian circuits are exactly the
//!   universal cycles (windows of length `k-1`, stride 1).
//! * [`words`] — length-`n` words over `{0..q}` of total weight `k`, read with
//!   an `s`-letter overlap (stride `n-s`).
//! * [`juggling`] — periodic juggling (site-swap) sequences with a bounded
//!   number of balls, read with an `(n-2)`-letter overlap.
//!
//! [`eulergraph`] supplies the shared machinery: a multigraph with stable
//! integer edge ids, a deterministic Hierholzer traversal, and exact circuit
//! counting via the BEST theorem (arborescences from a Laplacian cofactor,
//! computed fraction-free over big integers — no floating point anywhere).
//! [`verify`] checks an arbitrary cyclic string against a window scheme
//! without reference to how the string was produced.
//!
//! All enumeration orders, tie-breaks, and emitted strings are deterministic,
//! so identical calls yield identical output.

pub mod coding;
pub mod eulergraph;
pub mod juggling;
pub mod poset;
pub mod posetcycle;
pub mod symbols;
pub mod verify;
pub mod words;

mod overlap;
