//! Jet variables `x^A_{,μ}` and their derivative multi-indices.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::parity::Parity;
use crate::signature::Signature;

/// A derivative multi-index: a multiset of even time indices together with a
/// set of odd time indices.
///
/// Both parts are kept sorted ascending. A repeated odd index never occurs in
/// a stored multi-index; constructors return `None` in that case because the
/// jet variable is identically zero. Reordering an index string only picks up
/// a sign from transpositions of odd index pairs, so the canonical form is
/// the sorted string plus a tracked sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    even: Vec<u16>,
    odd: Vec<u16>,
}

impl MultiIndex {
    /// The empty multi-index (the coordinate itself).
    pub fn empty() -> MultiIndex {
        MultiIndex::default()
    }

    /// Canonicalizes an ordered index string.
    ///
    /// Returns the sorted multi-index and whether sorting flipped the sign;
    /// `None` if an odd index repeats.
    pub fn from_indices(indices: &[u16], sig: &Signature) -> Option<(MultiIndex, bool)> {
        let mut even = Vec::new();
        let mut odd_seq = Vec::new();
        for &idx in indices {
            if sig.time_parity(idx).is_odd() {
                odd_seq.push(idx);
            } else {
                even.push(idx);
            }
        }
        even.sort_unstable();
        // Count inversions among the odd indices; each is one transposition.
        let mut inversions = 0usize;
        for i in 0..odd_seq.len() {
            for j in (i + 1)..odd_seq.len() {
                match odd_seq[i].cmp(&odd_seq[j]) {
                    Ordering::Greater => inversions += 1,
                    Ordering::Equal => return None,
                    Ordering::Less => {}
                }
            }
        }
        odd_seq.sort_unstable();
        Some((MultiIndex { even, odd: odd_seq }, inversions % 2 == 1))
    }

    /// Total order `|μ|`.
    pub fn order(&self) -> u32 {
        (self.even.len() + self.odd.len()) as u32
    }

    pub fn is_empty(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.odd.len())
    }

    pub fn even_part(&self) -> &[u16] {
        &self.even
    }

    pub fn odd_part(&self) -> &[u16] {
        &self.odd
    }

    /// All indices ascending. Even indices precede odd ones numerically, so
    /// this is the concatenation of the two parts.
    pub fn indices(&self) -> impl Iterator<Item = u16> + '_ {
        self.even.iter().chain(self.odd.iter()).copied()
    }

    /// Adjoins the index of one more total derivative, i.e. canonicalizes the
    /// string `F μ`.
    ///
    /// Returns `None` when an odd `F` already occurs (the jet vanishes);
    /// otherwise the new multi-index and whether the sign flips. An odd `F`
    /// flips the sign once per smaller odd index it passes while sorting.
    pub fn append(&self, f: u16, sig: &Signature) -> Option<(MultiIndex, bool)> {
        let mut out = self.clone();
        if sig.time_parity(f).is_odd() {
            match out.odd.binary_search(&f) {
                Ok(_) => None,
                Err(pos) => {
                    out.odd.insert(pos, f);
                    Some((out, pos % 2 == 1))
                }
            }
        } else {
            let pos = out.even.partition_point(|&g| g <= f);
            out.even.insert(pos, f);
            Some((out, false))
        }
    }

    /// Shifts every odd index up by one (relabeling into the lifted
    /// signature, whose new even time takes index `r+1`).
    pub fn lifted(&self) -> MultiIndex {
        MultiIndex {
            even: self.even.clone(),
            odd: self.odd.iter().map(|&i| i + 1).collect(),
        }
    }

    /// Inverse of [`MultiIndex::lifted`].
    pub fn lowered(&self) -> MultiIndex {
        MultiIndex {
            even: self.even.clone(),
            odd: self.odd.iter().map(|&i| i - 1).collect(),
        }
    }
}

// Canonical total order: total degree, then even part, then odd part.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.even.cmp(&other.even))
            .then_with(|| self.odd.cmp(&other.odd))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The formal symbol `x^A_{,μ}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVariable {
    pub coord: u16,
    pub mindex: MultiIndex,
}

impl JetVariable {
    pub fn new(coord: u16, mindex: MultiIndex) -> JetVariable {
        JetVariable { coord, mindex }
    }

    /// The bare coordinate `x^A`.
    pub fn coordinate(coord: u16) -> JetVariable {
        JetVariable { coord, mindex: MultiIndex::empty() }
    }

    /// The first derivative along one time index.
    pub fn velocity(coord: u16, time: u16, sig: &Signature) -> JetVariable {
        let (mindex, neg) = MultiIndex::empty().append(time, sig).expect("fresh index");
        debug_assert!(!neg);
        JetVariable { coord, mindex }
    }

    pub fn parity(&self, sig: &Signature) -> Parity {
        sig.coord_parity(self.coord) + self.mindex.parity()
    }

    pub fn order(&self) -> u32 {
        self.mindex.order()
    }
}
