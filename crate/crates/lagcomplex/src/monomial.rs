//! Canonical monomials in time variables and jet variables.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::jet::JetVariable;
use crate::parity::Parity;
use crate::signature::Signature;

/// The variable content of one term: even time powers, odd time factors and
/// jet factors, each kept sorted.
///
/// The factor sequence of a monomial is, by convention, the even time powers,
/// then the odd time variables ascending, then the jet factors in canonical
/// order. All sign bookkeeping (anticommutation of odd factors) refers to
/// positions in that sequence. Odd factors never repeat; a product that would
/// repeat one is zero and is never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub(crate) etimes: Vec<(u16, u32)>,
    pub(crate) otimes: Vec<u16>,
    pub(crate) jets: Vec<(JetVariable, u32)>,
}

/// Key used to order odd factors across the time and jet blocks.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum OddKey<'a> {
    Time(u16),
    Jet(&'a JetVariable),
}

impl Monomial {
    /// The empty product.
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.etimes.is_empty() && self.otimes.is_empty() && self.jets.is_empty()
    }

    pub fn from_jet(jet: JetVariable) -> Monomial {
        Monomial { jets: alloc::vec![(jet, 1)], ..Monomial::default() }
    }

    pub fn from_time(index: u16, sig: &Signature) -> Monomial {
        if sig.time_parity(index).is_odd() {
            Monomial { otimes: alloc::vec![index], ..Monomial::default() }
        } else {
            Monomial { etimes: alloc::vec![(index, 1)], ..Monomial::default() }
        }
    }

    pub fn even_times(&self) -> &[(u16, u32)] {
        &self.etimes
    }

    pub fn odd_times(&self) -> &[u16] {
        &self.otimes
    }

    pub fn jet_factors(&self) -> &[(JetVariable, u32)] {
        &self.jets
    }

    pub fn is_time_free(&self) -> bool {
        self.etimes.is_empty() && self.otimes.is_empty()
    }

    pub fn is_jet_free(&self) -> bool {
        self.jets.is_empty()
    }

    /// Largest jet order among the factors; 0 when jet-free.
    pub fn max_jet_order(&self) -> u32 {
        self.jets.iter().map(|(v, _)| v.order()).max().unwrap_or(0)
    }

    pub fn parity(&self, sig: &Signature) -> Parity {
        let odd_jets = self.jets.iter().filter(|(v, _)| v.parity(sig).is_odd()).count();
        Parity::from_count(self.otimes.len() + odd_jets)
    }

    fn odd_seq<'a>(&'a self, sig: &Signature) -> Vec<OddKey<'a>> {
        let mut seq: Vec<OddKey<'a>> = self.otimes.iter().map(|&t| OddKey::Time(t)).collect();
        seq.extend(
            self.jets
                .iter()
                .filter(|(v, _)| v.parity(sig).is_odd())
                .map(|(v, _)| OddKey::Jet(v)),
        );
        seq
    }

    /// Product of two monomials.
    ///
    /// Returns the merged monomial and whether the sign flips (an odd number
    /// of odd-odd transpositions were needed to re-sort), or `None` when an
    /// odd factor would repeat.
    pub fn mul(&self, other: &Monomial, sig: &Signature) -> Option<(Monomial, bool)> {
        let a_odd = self.odd_seq(sig);
        let b_odd = other.odd_seq(sig);
        let mut inversions = 0usize;
        for b in &b_odd {
            for a in &a_odd {
                match b.cmp(a) {
                    Ordering::Less => inversions += 1,
                    Ordering::Equal => return None,
                    Ordering::Greater => {}
                }
            }
        }

        let mut etimes = self.etimes.clone();
        for &(idx, exp) in &other.etimes {
            match etimes.binary_search_by_key(&idx, |&(i, _)| i) {
                Ok(pos) => etimes[pos].1 += exp,
                Err(pos) => etimes.insert(pos, (idx, exp)),
            }
        }
        let mut otimes = self.otimes.clone();
        for &idx in &other.otimes {
            let pos = otimes.partition_point(|&t| t < idx);
            otimes.insert(pos, idx);
        }
        let mut jets = self.jets.clone();
        for (jet, exp) in &other.jets {
            match jets.binary_search_by_key(&jet, |(v, _)| v) {
                Ok(pos) => jets[pos].1 += exp,
                Err(pos) => jets.insert(pos, (jet.clone(), *exp)),
            }
        }
        Some((Monomial { etimes, otimes, jets }, inversions % 2 == 1))
    }

    /// Removes one power of the even time `index`; the remaining exponent is
    /// returned alongside. `None` when the variable is absent.
    pub(crate) fn decrement_etime(&self, index: u16) -> Option<(Monomial, u32)> {
        let pos = self.etimes.binary_search_by_key(&index, |&(i, _)| i).ok()?;
        let exp = self.etimes[pos].1;
        let mut out = self.clone();
        if exp == 1 {
            out.etimes.remove(pos);
        } else {
            out.etimes[pos].1 -= 1;
        }
        Some((out, exp))
    }

    /// Removes the odd time `index`, reporting the sign of moving the left
    /// derivative past the preceding odd factors. `None` when absent.
    pub(crate) fn remove_otime(&self, index: u16) -> Option<(Monomial, bool)> {
        let pos = self.otimes.binary_search(&index).ok()?;
        let mut out = self.clone();
        out.otimes.remove(pos);
        Some((out, pos % 2 == 1))
    }

    /// Parity of everything strictly before the `k`-th jet factor.
    pub(crate) fn prefix_parity_at_jet(&self, k: usize, sig: &Signature) -> Parity {
        let mut count = self.otimes.len();
        for (v, exp) in &self.jets[..k] {
            if v.parity(sig).is_odd() {
                count += *exp as usize;
            }
        }
        Parity::from_count(count)
    }

    /// Splits around the `k`-th jet factor for derivative rules: the prefix
    /// holds every time factor plus the jets before `k`, the suffix holds the
    /// jets after `k`.
    pub(crate) fn split_at_jet(&self, k: usize) -> (Monomial, Monomial) {
        let prefix = Monomial {
            etimes: self.etimes.clone(),
            otimes: self.otimes.clone(),
            jets: self.jets[..k].to_vec(),
        };
        let suffix = Monomial { jets: self.jets[k + 1..].to_vec(), ..Monomial::default() };
        (prefix, suffix)
    }
}
