//! Naturally labeled partial orders on `{1..k}`.
//!
//! A strict partial order `<` on labels `1..=k` is *naturally labeled* when
//! `x < y` in the order implies `x < y` as integers — the identity map is a
//! linear extension. The relation is stored transitively closed, as a set of
//! ordered pairs `(i, j)` with `i < j`.
//!
//! Counts by size grow 1, 1, 2, 7, 40, 357, 4824, … and every poset of size
//! `k` arises exactly once by adjoining a new largest element to a poset of
//! size `k-1`: the new element sits above a chosen antichain together with
//! everything below it. [`NlPoset::append_max`] performs that step,
//! [`NlPoset::prepend_min`] is the mirror step at the bottom, and
//! [`NlPoset::drop_max`] / [`NlPoset::drop_min`] invert them. The number of
//! ways to grow a poset therefore equals its number of antichains, which is
//! why [`NlPoset::antichains`] drives both enumeration and the transition
//! digraph built in [`crate::posetcycle`].
//!
//! Internally each element keeps a bitmask of the labels strictly below it,
//! which caps the supported size at [`MAX_SIZE`] — far beyond anything
//! enumerable in practice.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

/// Hard cap on poset size imposed by the bitmask representation.
pub const MAX_SIZE: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation is not a naturally labeled partial order on 1..={0}")]
    NotNaturalOrder(usize),
    #[error("label {label} out of range 1..={size}")]
    LabelOutOfRange { label: usize, size: usize },
    #[error("labels {0:?} are not an antichain of the poset")]
    NotAntichain(Vec<usize>),
    #[error("poset has no elements to drop")]
    Empty,
    #[error("poset size {0} exceeds the supported maximum {MAX_SIZE}")]
    TooLarge(usize),
}

/// A set of pairwise incomparable labels, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Antichain {
    members: Vec<usize>,
}

impl Antichain {
    /// Builds an antichain candidate from arbitrary labels; sorts and dedups.
    /// Incomparability is checked by the poset operation that consumes it.
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Antichain { members }
    }

    pub fn empty() -> Self {
        Antichain { members: Vec::new() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, m) in self.members.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// A naturally labeled poset, stored transitively closed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NlPoset {
    size: usize,
    /// `below[i]` has bit `b` set when label `b+1` is strictly below label `i+1`.
    below: Vec<u32>,
}

fn bit(label: usize) -> u32 {
    1 << (label - 1)
}

fn labels(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask & (1 << b) != 0).map(|b| b + 1)
}

/// Checks that `relation` is a transitively closed, naturally labeled strict
/// order on `1..=size`: every pair `(i, j)` satisfies `1 <= i < j <= size`,
/// and for pairs `(i, j)`, `(j, l)` in the relation, `(i, l)` is too.
pub fn is_natural_order(relation: &[(usize, usize)], size: usize) -> bool {
    if size > MAX_SIZE {
        return false;
    }
    let mut below = vec![0u32; size];
    for &(i, j) in relation {
        if i < 1 || j <= i || j > size {
            return false;
        }
        below[j - 1] |= bit(i);
    }
    (1..=size).all(|j| labels(below[j - 1]).all(|i| below[i - 1] & !below[j - 1] == 0))
}

impl NlPoset {
    /// The poset with no elements.
    pub fn empty() -> Self {
        NlPoset { size: 0, below: Vec::new() }
    }

    /// The one-element poset.
    pub fn singleton() -> Self {
        NlPoset { size: 1, below: vec![0] }
    }

    /// The total order `1 < 2 < … < size`.
    pub fn chain(size: usize) -> Self {
        assert!(size <= MAX_SIZE);
        let below = (0..size).map(|i| (1u32 << i) - 1).collect();
        NlPoset { size, below }
    }

    /// The empty order on `size` elements.
    pub fn antichain(size: usize) -> Self {
        assert!(size <= MAX_SIZE);
        NlPoset { size, below: vec![0; size] }
    }

    /// Builds a poset from a transitively closed relation.
    pub fn from_relation(size: usize, relation: &[(usize, usize)]) -> Result<Self, PosetError> {
        if size > MAX_SIZE {
            return Err(PosetError::TooLarge(size));
        }
        if !is_natural_order(relation, size) {
            return Err(PosetError::NotNaturalOrder(size));
        }
        let mut below = vec![0u32; size];
        for &(i, j) in relation {
            below[j - 1] |= bit(i);
        }
        Ok(NlPoset { size, below })
    }

    /// Builds a poset as the transitive closure of the given pairs. The pairs
    /// need not be an exact cover set; implied pairs are absorbed.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        if size > MAX_SIZE {
            return Err(PosetError::TooLarge(size));
        }
        let mut named = vec![0u32; size];
        for &(i, j) in covers {
            if i < 1 || i > size {
                return Err(PosetError::LabelOutOfRange { label: i, size });
            }
            if j < 1 || j > size {
                return Err(PosetError::LabelOutOfRange { label: j, size });
            }
            if i >= j {
                return Err(PosetError::NotNaturalOrder(size));
            }
            named[j - 1] |= bit(i);
        }
        // Labels below i are final before any j > i is processed, so one
        // ascending pass closes the relation.
        let mut below = vec![0u32; size];
        for j in 1..=size {
            for i in labels(named[j - 1]) {
                below[j - 1] |= bit(i) | below[i - 1];
            }
        }
        Ok(NlPoset { size, below })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// True when `i` is strictly below `j` in the order.
    pub fn less(&self, i: usize, j: usize) -> bool {
        if i < 1 || j < 1 || i > self.size || j > self.size || i >= j {
            return false;
        }
        self.below[j - 1] & bit(i) != 0
    }

    /// The full transitively closed relation, sorted.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..=self.size {
            for i in labels(self.below[j - 1]) {
                out.push((i, j));
            }
        }
        out.sort_unstable();
        out
    }

    fn cover_mask(&self, j: usize) -> u32 {
        let below = self.below[j - 1];
        let mut mask = below;
        for i in labels(below) {
            mask &= !self.below[i - 1];
        }
        mask
    }

    /// The transitive reduction: pairs `(i, j)` where `j` covers `i`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..=self.size {
            for i in labels(self.cover_mask(j)) {
                out.push((i, j));
            }
        }
        out.sort_unstable();
        out
    }

    fn check_antichain(&self, candidate: &Antichain) -> Result<u32, PosetError> {
        let mut mask = 0u32;
        for &m in candidate.members() {
            if m < 1 || m > self.size {
                return Err(PosetError::LabelOutOfRange { label: m, size: self.size });
            }
            mask |= bit(m);
        }
        for &m in candidate.members() {
            if self.below[m - 1] & mask != 0 {
                return Err(PosetError::NotAntichain(candidate.members().to_vec()));
            }
        }
        Ok(mask)
    }

    /// True when the labels are pairwise incomparable elements of the poset.
    pub fn is_antichain(&self, candidate: &Antichain) -> bool {
        self.check_antichain(candidate).is_ok()
    }

    /// All antichains, in lexicographic order on the sorted member lists with
    /// the empty antichain first.
    pub fn antichains(&self) -> Vec<Antichain> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.antichain_dfs(1, 0, &mut current, &mut |members: &[usize]| {
            out.push(Antichain { members: members.to_vec() })
        });
        out
    }

    /// Number of antichains, without materializing them.
    pub fn antichain_count(&self) -> u64 {
        fn walk(p: &NlPoset, from: usize, chosen: u32) -> u64 {
            let mut count = 1;
            for next in from..=p.size {
                if p.below[next - 1] & chosen == 0 {
                    count += walk(p, next + 1, chosen | bit(next));
                }
            }
            count
        }
        walk(self, 1, 0)
    }

    fn antichain_dfs(
        &self,
        from: usize,
        chosen: u32,
        current: &mut Vec<usize>,
        emit: &mut impl FnMut(&[usize]),
    ) {
        emit(current);
        for next in from..=self.size {
            // Members are numerically smaller than `next`, so incomparability
            // only needs `next`'s down-set to avoid them.
            if self.below[next - 1] & chosen == 0 {
                current.push(next);
                self.antichain_dfs(next + 1, chosen | bit(next), current, emit);
                current.pop();
            }
        }
    }

    /// Adjoins a new largest label `size+1` above exactly `antichain` and
    /// everything below its members.
    pub fn append_max(&self, antichain: &Antichain) -> Result<Self, PosetError> {
        if self.size + 1 > MAX_SIZE {
            return Err(PosetError::TooLarge(self.size + 1));
        }
        let mask = self.check_antichain(antichain)?;
        let mut down = 0u32;
        for i in labels(mask) {
            down |= bit(i) | self.below[i - 1];
        }
        let mut below = self.below.clone();
        below.push(down);
        Ok(NlPoset { size: self.size + 1, below })
    }

    /// Adjoins a new smallest label `1` below exactly `antichain` and
    /// everything above its members; existing labels shift up by one.
    pub fn prepend_min(&self, antichain: &Antichain) -> Result<Self, PosetError> {
        if self.size + 1 > MAX_SIZE {
            return Err(PosetError::TooLarge(self.size + 1));
        }
        let mask = self.check_antichain(antichain)?;
        let mut up = mask;
        for j in 1..=self.size {
            if self.below[j - 1] & mask != 0 {
                up |= bit(j);
            }
        }
        let mut below = Vec::with_capacity(self.size + 1);
        below.push(0u32);
        for j in 1..=self.size {
            let mut shifted = self.below[j - 1] << 1;
            if up & bit(j) != 0 {
                shifted |= 1;
            }
            below.push(shifted);
        }
        Ok(NlPoset { size: self.size + 1, below })
    }

    /// Removes label 1 and shifts the remaining labels down by one. Label 1
    /// is always minimal, so no cover through it ever needs repair.
    pub fn drop_min(&self) -> Result<Self, PosetError> {
        if self.size == 0 {
            return Err(PosetError::Empty);
        }
        let below = self.below[1..].iter().map(|&b| b >> 1).collect();
        Ok(NlPoset { size: self.size - 1, below })
    }

    /// Removes the largest label. It is always maximal, so the rest of the
    /// relation is untouched.
    pub fn drop_max(&self) -> Result<Self, PosetError> {
        if self.size == 0 {
            return Err(PosetError::Empty);
        }
        Ok(NlPoset { size: self.size - 1, below: self.below[..self.size - 1].to_vec() })
    }

    /// All naturally labeled posets of the given size, in canonical order
    /// (lexicographic on [`NlPoset::canonical_key`]). Size 0 yields the one
    /// empty poset.
    pub fn enumerate(size: usize) -> Vec<NlPoset> {
        assert!(size <= MAX_SIZE, "poset size {size} exceeds {MAX_SIZE}");
        let mut level = vec![NlPoset::empty()];
        for _ in 0..size {
            let mut next = Vec::new();
            for p in &level {
                for ac in p.antichains() {
                    next.push(p.append_max(&ac).expect("antichain came from the poset"));
                }
            }
            level = next;
        }
        level.sort_unstable();
        level
    }

    pub(crate) fn code_symbol(&self, j: usize) -> u64 {
        let mut a = 0u64;
        for i in labels(self.cover_mask(j)) {
            a |= 1 << (j - 1 - i);
        }
        a
    }

    /// The canonical sort key: the integer sequence `(a_2, …, a_k)` where the
    /// binary digits of `a_j` (most significant first, width `j-1`) mark which
    /// of `1..j` the label `j` covers. This is also the integer encoding used
    /// by [`crate::coding`].
    pub fn canonical_key(&self) -> Vec<u64> {
        (2..=self.size).map(|j| self.code_symbol(j)).collect()
    }

    /// Hasse diagram in DOT form: undirected-styled edges, drawn bottom-up.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph poset {\n  rankdir=BT;\n");
        for v in 1..=self.size {
            out.push_str(&format!("  {v};\n"));
        }
        for (i, j) in self.covers() {
            out.push_str(&format!("  {i} -- {j};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// JSON form: size plus the cover pairs.
    pub fn to_json(&self) -> Value {
        json!({
            "size": self.size,
            "covers": self.covers().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
        })
    }
}

impl Ord for NlPoset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size.cmp(&other.size).then_with(|| {
            for j in 2..=self.size {
                match self.code_symbol(j).cmp(&other.code_symbol(j)) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for NlPoset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NlPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poset(size={}", self.size)?;
        let covers = self.covers();
        if !covers.is_empty() {
            write!(f, "; ")?;
            for (idx, (i, j)) in covers.iter().enumerate() {
                if idx > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{i}-{j}")?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_poset() -> NlPoset {
        NlPoset::from_covers(6, &[(1, 2), (1, 4), (2, 5), (4, 5), (3, 6), (5, 6)]).unwrap()
    }

    #[test]
    fn natural_order_predicate() {
        assert!(is_natural_order(&[(1, 2)], 2));
        assert!(!is_natural_order(&[(2, 1)], 2));
        // Missing (1, 3): not transitively closed.
        assert!(!is_natural_order(&[(1, 2), (2, 3)], 3));
        assert!(is_natural_order(&[(1, 2), (2, 3), (1, 3)], 3));
        assert!(is_natural_order(&[], 4));
        assert!(!is_natural_order(&[(1, 5)], 4));
    }

    #[test]
    fn from_covers_closes_transitively() {
        let p = NlPoset::from_covers(3, &[(1, 2), (2, 3)]).unwrap();
        assert!(p.less(1, 3));
        assert_eq!(p, NlPoset::chain(3));
        assert_eq!(p.covers(), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn relation_round_trips_through_from_relation() {
        let p = figure_poset();
        let q = NlPoset::from_relation(6, &p.relation()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn antichains_of_two_element_posets() {
        let chain = NlPoset::chain(2);
        let list: Vec<String> = chain.antichains().iter().map(|a| a.to_string()).collect();
        assert_eq!(list, ["{}", "{1}", "{2}"]);

        let anti = NlPoset::antichain(2);
        let list: Vec<String> = anti.antichains().iter().map(|a| a.to_string()).collect();
        assert_eq!(list, ["{}", "{1}", "{1,2}", "{2}"]);
        assert_eq!(anti.antichain_count(), 4);
        assert_eq!(NlPoset::singleton().antichain_count(), 2);
        assert_eq!(NlPoset::empty().antichain_count(), 1);
    }

    #[test]
    fn antichain_counts_for_size_three_posets() {
        // In canonical order the seven size-3 posets have these counts.
        let counts: Vec<u64> = NlPoset::enumerate(3).iter().map(|p| p.antichain_count()).collect();
        assert_eq!(counts, [8, 6, 6, 5, 6, 4, 5]);
    }

    #[test]
    fn append_max_grows_above_the_chosen_antichain() {
        let p = NlPoset::singleton().append_max(&Antichain::new([1])).unwrap();
        assert_eq!(p, NlPoset::chain(2));

        // New top above both elements of an antichain.
        let v = NlPoset::antichain(2).append_max(&Antichain::new([1, 2])).unwrap();
        assert_eq!(v.relation(), vec![(1, 3), (2, 3)]);

        // Appending above the empty antichain adds an isolated maximum.
        let iso = NlPoset::chain(2).append_max(&Antichain::empty()).unwrap();
        assert_eq!(iso.relation(), vec![(1, 2)]);

        // Down-sets come along: above {2} in a chain means above {1, 2}.
        let c3 = NlPoset::chain(2).append_max(&Antichain::new([2])).unwrap();
        assert_eq!(c3, NlPoset::chain(3));
    }

    #[test]
    fn append_max_rejects_comparable_labels() {
        let err = NlPoset::chain(2).append_max(&Antichain::new([1, 2])).unwrap_err();
        assert_eq!(err, PosetError::NotAntichain(vec![1, 2]));
        let err = NlPoset::chain(2).append_max(&Antichain::new([7])).unwrap_err();
        assert_eq!(err, PosetError::LabelOutOfRange { label: 7, size: 2 });
    }

    #[test]
    fn prepend_min_grows_below_the_chosen_antichain() {
        let p = NlPoset::singleton().prepend_min(&Antichain::new([1])).unwrap();
        assert_eq!(p, NlPoset::chain(2));

        let iso = NlPoset::antichain(2).prepend_min(&Antichain::empty()).unwrap();
        assert_eq!(iso, NlPoset::antichain(3));

        // Up-sets come along: below {1} in a chain means below everything.
        let c3 = NlPoset::chain(2).prepend_min(&Antichain::new([1])).unwrap();
        assert_eq!(c3, NlPoset::chain(3));

        // Below only the top of a chain: 1 < 3 but 1 and 2 incomparable.
        let p = NlPoset::chain(2).prepend_min(&Antichain::new([2])).unwrap();
        assert_eq!(p.relation(), vec![(1, 3), (2, 3)]);
    }

    #[test]
    fn drop_operations_invert_growth() {
        let c3 = NlPoset::chain(3);
        assert_eq!(c3.drop_min().unwrap(), NlPoset::chain(2));
        assert_eq!(c3.drop_max().unwrap(), NlPoset::chain(2));
        assert_eq!(NlPoset::singleton().drop_min().unwrap(), NlPoset::empty());
        assert_eq!(NlPoset::empty().drop_min().unwrap_err(), PosetError::Empty);
        assert_eq!(NlPoset::empty().drop_max().unwrap_err(), PosetError::Empty);

        // The V poset 1<3, 2<3 loses its bottom antichain member.
        let v = NlPoset::from_covers(3, &[(1, 3), (2, 3)]).unwrap();
        assert_eq!(v.drop_min().unwrap(), NlPoset::chain(2));
        assert_eq!(v.drop_max().unwrap(), NlPoset::antichain(2));
    }

    #[test]
    fn drop_append_round_trip_is_exhaustive_through_size_five() {
        for k in 0..5 {
            for p in NlPoset::enumerate(k) {
                for ac in p.antichains() {
                    let grown = p.append_max(&ac).unwrap();
                    assert_eq!(grown.drop_max().unwrap(), p);
                    let grown = p.prepend_min(&ac).unwrap();
                    assert_eq!(grown.drop_min().unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn covers_of_the_six_element_example() {
        let p = figure_poset();
        assert_eq!(p.covers(), vec![(1, 2), (1, 4), (2, 5), (3, 6), (4, 5), (5, 6)]);
        // The closure adds 1<5, 1<6, 2<6, 4<6.
        assert!(p.less(1, 5));
        assert!(p.less(1, 6));
        assert!(p.less(2, 6));
        assert!(p.less(4, 6));
        assert!(!p.less(3, 5));
        assert_eq!(p.canonical_key(), vec![1, 0, 4, 5, 5]);
    }

    #[test]
    fn enumerate_counts_small_sizes() {
        assert_eq!(NlPoset::enumerate(0).len(), 1);
        assert_eq!(NlPoset::enumerate(1).len(), 1);
        assert_eq!(NlPoset::enumerate(2).len(), 2);
        assert_eq!(NlPoset::enumerate(3).len(), 7);
        assert_eq!(NlPoset::enumerate(4).len(), 40);
    }

    #[test]
    fn enumerate_is_sorted_and_duplicate_free() {
        for k in 0..=5 {
            let all = NlPoset::enumerate(k);
            for pair in all.windows(2) {
                assert!(pair[0] < pair[1], "{} !< {}", pair[0], pair[1]);
            }
        }
    }

    #[test]
    fn size_three_posets_in_canonical_order() {
        let keys: Vec<Vec<u64>> = NlPoset::enumerate(3).iter().map(|p| p.canonical_key()).collect();
        assert_eq!(
            keys,
            [vec![0, 0], vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 0], vec![1, 1], vec![1, 2]]
        );
    }

    #[test]
    fn dot_and_json_exports() {
        let p = NlPoset::chain(2);
        assert_eq!(p.to_dot(), "graph poset {\n  rankdir=BT;\n  1;\n  2;\n  1 -- 2;\n}\n");
        assert_eq!(p.to_json(), serde_json::json!({"size": 2, "covers": [[1, 2]]}));
    }
}
