//! Canonical expressions: formal sums of rational multiples of monomials.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jet::JetVariable;
use crate::monomial::Monomial;
use crate::parity::Parity;
use crate::signature::Signature;
use crate::Rat;

/// One factor of a raw (not yet canonical) term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawFactor {
    Time(u16),
    Jet(JetVariable),
}

/// A formal sum of monomials with exact rational coefficients, canonical by
/// construction: factors sorted with tracked signs, coefficients merged,
/// zero terms dropped, odd squares annihilated.
///
/// Every expression carries the signature its indices refer to; combining
/// expressions over different signatures is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    sig: Signature,
    terms: BTreeMap<Monomial, Rat>,
}

impl Expression {
    pub fn zero(sig: Signature) -> Expression {
        Expression { sig, terms: BTreeMap::new() }
    }

    pub fn constant(sig: Signature, value: Rat) -> Expression {
        let mut e = Expression::zero(sig);
        e.accumulate(Monomial::one(), value);
        e
    }

    pub fn from_int(sig: Signature, value: i64) -> Expression {
        Expression::constant(sig, Rat::from_integer(value.into()))
    }

    pub fn one(sig: Signature) -> Expression {
        Expression::from_int(sig, 1)
    }

    /// The expression consisting of a single jet variable.
    pub fn jet(sig: Signature, jet: JetVariable) -> Result<Expression> {
        validate_jet(&sig, &jet)?;
        let mut e = Expression::zero(sig);
        e.accumulate(Monomial::from_jet(jet), Rat::one());
        Ok(e)
    }

    /// The expression consisting of a single explicit time variable.
    pub fn time(sig: Signature, index: u16) -> Result<Expression> {
        sig.check_time(index)?;
        let mut e = Expression::zero(sig);
        e.accumulate(Monomial::from_time(index, &sig), Rat::one());
        Ok(e)
    }

    pub(crate) fn single(sig: Signature, mono: Monomial, coeff: Rat) -> Expression {
        let mut e = Expression::zero(sig);
        e.accumulate(mono, coeff);
        e
    }

    pub(crate) fn from_terms(
        sig: Signature,
        terms: impl IntoIterator<Item = (Monomial, Rat)>,
    ) -> Expression {
        let mut e = Expression::zero(sig);
        for (m, c) in terms {
            e.accumulate(m, c);
        }
        e
    }

    fn accumulate(&mut self, mono: Monomial, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// The constant value, if the expression is a constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    fn check_sig(&self, other: &Expression) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch { left: self.sig, right: other.sig })
        }
    }

    pub fn add(&self, other: &Expression) -> Result<Expression> {
        self.check_sig(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Expression) -> Result<Expression> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expression {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, factor: &Rat) -> Expression {
        if factor.is_zero() {
            return Expression::zero(self.sig);
        }
        Expression {
            sig: self.sig,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn mul(&self, other: &Expression) -> Result<Expression> {
        self.check_sig(other)?;
        let mut out = Expression::zero(self.sig);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, neg)) = m1.mul(m2, &self.sig) {
                    let c = c1 * c2;
                    out.accumulate(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Expression {
        let mut out = Expression::one(self.sig);
        for _ in 0..exp {
            out = out.mul(self).expect("same signature");
        }
        out
    }

    /// The terms of one parity.
    pub fn homogeneous_part(&self, parity: Parity) -> Expression {
        Expression {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity(&self.sig) == parity)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The common parity of all terms, or `None` when terms disagree.
    /// The zero expression counts as even.
    pub fn parity_of(&self) -> Option<Parity> {
        let mut result = None;
        for m in self.terms.keys() {
            let p = m.parity(&self.sig);
            match result {
                None => result = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        result.or(Some(Parity::Even))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parity_of().is_some()
    }

    /// Maximal jet order over all terms; `None` for the zero expression
    /// (order minus infinity), `Some(0)` for nonzero jet-free expressions.
    pub fn order_of(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::max_jet_order).max()
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.keys().all(Monomial::is_time_free)
    }

    pub fn has_jets(&self) -> bool {
        self.terms.keys().any(|m| !m.is_jet_free())
    }

    /// Distinct jet variables of one coordinate occurring anywhere.
    pub fn jets_of_coord(&self, coord: u16) -> BTreeSet<JetVariable> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.jet_factors() {
                if v.coord == coord {
                    out.insert(v.clone());
                }
            }
        }
        out
    }

    /// Relabels into the lifted signature (odd time indices shift up by one).
    pub fn lifted(&self) -> Expression {
        let sig = self.sig.lift();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let m2 = Monomial {
                    etimes: m.etimes.clone(),
                    otimes: m.otimes.iter().map(|&i| i + 1).collect(),
                    jets: m
                        .jets
                        .iter()
                        .map(|(v, e)| (JetVariable::new(v.coord, v.mindex.lifted()), *e))
                        .collect(),
                };
                (m2, c.clone())
            })
            .collect();
        Expression { sig, terms }
    }

    /// Relabels a jet-free expression down one even time (odd indices shift
    /// down). The dropped even time index `r` must not occur.
    pub(crate) fn lowered(&self) -> Expression {
        debug_assert!(self.sig.r >= 1);
        let sig = Signature::new(self.sig.n, self.sig.m, self.sig.r - 1, self.sig.s);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.is_jet_free());
                debug_assert!(m.etimes.iter().all(|&(i, _)| i < self.sig.r));
                let m2 = Monomial {
                    etimes: m.etimes.clone(),
                    otimes: m.otimes.iter().map(|&i| i - 1).collect(),
                    jets: Vec::new(),
                };
                (m2, c.clone())
            })
            .collect();
        Expression { sig, terms }
    }

    /// Reinterprets the expression over another signature, checking that
    /// every stored index keeps its block (even/odd) and stays in range.
    pub fn with_signature(&self, sig: Signature) -> Result<Expression> {
        for m in self.terms.keys() {
            for &(i, _) in m.even_times() {
                if i > sig.r {
                    return Err(Error::TimeOutOfRange { index: i, max: sig.times() });
                }
            }
            for &i in m.odd_times() {
                if i <= sig.r || i > sig.times() {
                    return Err(Error::TimeOutOfRange { index: i, max: sig.times() });
                }
            }
            for (v, _) in m.jet_factors() {
                if v.coord > sig.coords() {
                    return Err(Error::CoordOutOfRange { index: v.coord, max: sig.coords() });
                }
                if v.coord <= self.sig.n && v.coord > sig.n {
                    return Err(Error::CoordOutOfRange { index: v.coord, max: sig.n });
                }
                for i in v.mindex.even_part() {
                    if *i > sig.r {
                        return Err(Error::TimeOutOfRange { index: *i, max: sig.times() });
                    }
                }
                for i in v.mindex.odd_part() {
                    if *i <= sig.r || *i > sig.times() {
                        return Err(Error::TimeOutOfRange { index: *i, max: sig.times() });
                    }
                }
            }
        }
        Ok(Expression { sig, terms: self.terms.clone() })
    }

    /// Substitutes an expression for the even time variable `index`.
    pub fn subst_even_time(&self, index: u16, value: &Expression) -> Result<Expression> {
        self.sig.check_time(index)?;
        if self.sig.time_parity(index).is_odd() {
            return Err(Error::TimeOutOfRange { index, max: self.sig.r });
        }
        if value.sig != self.sig {
            return Err(Error::SignatureMismatch { left: self.sig, right: value.sig });
        }
        if !value.is_zero() && value.parity_of() != Some(Parity::Even) {
            return Err(Error::Inhomogeneous);
        }
        let mut out = Expression::zero(self.sig);
        for (m, c) in &self.terms {
            match m.decrement_etime(index) {
                None => out.accumulate(m.clone(), c.clone()),
                Some((_, exp)) => {
                    // Remove the variable entirely and multiply by value^exp.
                    let mut stripped = m.clone();
                    let pos = stripped
                        .etimes
                        .binary_search_by_key(&index, |&(i, _)| i)
                        .expect("present");
                    stripped.etimes.remove(pos);
                    let base = Expression::single(self.sig, stripped, c.clone());
                    let term = base.mul(&value.pow(exp)).expect("same signature");
                    out = out.add(&term).expect("same signature");
                }
            }
        }
        Ok(out)
    }
}

/// Validates that a jet variable fits a signature.
pub(crate) fn validate_jet(sig: &Signature, jet: &JetVariable) -> Result<()> {
    sig.check_coord(jet.coord)?;
    for i in jet.mindex.indices() {
        sig.check_time(i)?;
    }
    // Stored block classification must agree with the signature.
    for i in jet.mindex.even_part() {
        if sig.time_parity(*i).is_odd() {
            return Err(Error::TimeOutOfRange { index: *i, max: sig.r });
        }
    }
    for i in jet.mindex.odd_part() {
        if !sig.time_parity(*i).is_odd() {
            return Err(Error::TimeOutOfRange { index: *i, max: sig.times() });
        }
    }
    Ok(())
}

/// Builds the canonical expression from raw terms: each term a coefficient
/// and a factor sequence in written order.
pub fn canonicalize(sig: Signature, raw: Vec<(Rat, Vec<RawFactor>)>) -> Result<Expression> {
    let mut out = Expression::zero(sig);
    for (coeff, factors) in raw {
        let mut mono = Monomial::one();
        let mut negate = false;
        let mut alive = true;
        for f in factors {
            let single = match f {
                RawFactor::Time(idx) => {
                    sig.check_time(idx)?;
                    Monomial::from_time(idx, &sig)
                }
                RawFactor::Jet(jet) => {
                    validate_jet(&sig, &jet)?;
                    Monomial::from_jet(jet)
                }
            };
            match mono.mul(&single, &sig) {
                Some((m, neg)) => {
                    mono = m;
                    negate ^= neg;
                }
                None => {
                    alive = false;
                    break;
                }
            }
        }
        if alive {
            out.accumulate(mono, if negate { -coeff } else { coeff });
        }
    }
    Ok(out)
}

/// A homogeneous-parity expression tagged with its signature: an element of
/// the Lagrangian space for `r|s`-dimensional paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lagrangian {
    body: Expression,
}

impl Lagrangian {
    pub fn new(body: Expression) -> Result<Lagrangian> {
        if !body.is_homogeneous() {
            return Err(Error::Inhomogeneous);
        }
        Ok(Lagrangian { body })
    }

    pub fn sig(&self) -> Signature {
        self.body.sig()
    }

    pub fn body(&self) -> &Expression {
        &self.body
    }

    pub fn into_body(self) -> Expression {
        self.body
    }

    pub fn parity(&self) -> Parity {
        self.body.parity_of().expect("homogeneous by construction")
    }
}

impl fmt::Display for Lagrangian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

fn write_coord(f: &mut fmt::Formatter<'_>, sig: &Signature, coord: u16) -> fmt::Result {
    if coord <= sig.n {
        write!(f, "x{coord}")
    } else {
        write!(f, "th{}", coord - sig.n)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, sig: &Signature, m: &Monomial) -> fmt::Result {
    let mut first = true;
    let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
        if first {
            first = false;
            Ok(())
        } else {
            write!(f, " * ")
        }
    };
    for &(idx, exp) in m.even_times() {
        sep(f)?;
        write!(f, "t{idx}")?;
        if exp > 1 {
            write!(f, "^{exp}")?;
        }
    }
    for &idx in m.odd_times() {
        sep(f)?;
        write!(f, "tau{}", idx - sig.r)?;
    }
    for (jet, exp) in m.jet_factors() {
        sep(f)?;
        write_coord(f, sig, jet.coord)?;
        if !jet.mindex.is_empty() {
            write!(f, "[")?;
            let mut first_idx = true;
            for i in jet.mindex.indices() {
                if !first_idx {
                    write!(f, " ")?;
                }
                first_idx = false;
                write!(f, "{i}")?;
            }
            write!(f, "]")?;
        }
        if *exp > 1 {
            write!(f, "^{exp}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag} * ")?;
                }
                write_monomial(f, &self.sig, m)?;
            }
        }
        Ok(())
    }
}
