//! The dimension-raising differential on Lagrangians and the identities
//! that make the Lagrangian spaces a cochain complex.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::deriv::{total_deriv_multi, var_deriv, Covector};
use crate::error::{Error, Result};
use crate::expr::{Expression, Lagrangian};
use crate::jet::JetVariable;
use crate::parity::Parity;
use crate::signature::Signature;

/// Replaces every jet variable `x^A_{,μ}` by `D_μ` of the `A`-th component,
/// factor by factor in canonical order. Components must match the parity of
/// their coordinate.
pub(crate) fn replace_jets(e: &Expression, components: &[Expression]) -> Result<Expression> {
    let sig = e.sig();
    if components.len() != sig.coords() as usize {
        return Err(Error::UnboundCoordinate { coord: components.len() as u16 + 1 });
    }
    for (i, comp) in components.iter().enumerate() {
        let coord = i as u16 + 1;
        if comp.sig() != sig {
            return Err(Error::SignatureMismatch { left: sig, right: comp.sig() });
        }
        if !comp.is_zero() && comp.parity_of() != Some(sig.coord_parity(coord)) {
            return Err(Error::ParityMismatch { coord });
        }
    }

    let mut cache: BTreeMap<JetVariable, Expression> = BTreeMap::new();
    let mut out = Expression::zero(sig);
    for (m, c) in e.terms() {
        let times_only = crate::monomial::Monomial {
            etimes: m.even_times().to_vec(),
            otimes: m.odd_times().to_vec(),
            jets: Vec::new(),
        };
        let mut acc = Expression::single(sig, times_only, c.clone());
        for (jet, exp) in m.jet_factors() {
            if !cache.contains_key(jet) {
                let base = &components[(jet.coord - 1) as usize];
                let derived = total_deriv_multi(base, &jet.mindex)?;
                cache.insert(jet.clone(), derived);
            }
            let derived = &cache[jet];
            acc = acc.mul(&derived.pow(*exp))?;
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

/// The differential: multiplies each variational derivative by the velocity
/// along a fresh even time direction.
///
/// The new even time takes index `r+1`; the odd time indices of the input
/// shift up by one in every jet variable of the result.
pub fn apply_d(l: &Lagrangian) -> Result<Lagrangian> {
    let sig = l.sig();
    if !l.body().is_time_independent() {
        return Err(Error::TimeDependent);
    }
    let lifted_sig = sig.lift();
    let mut out = Expression::zero(lifted_sig);
    for a in sig.coord_range() {
        let component = var_deriv(l, a)?;
        if component.is_zero() {
            continue;
        }
        let velocity = Expression::jet(
            lifted_sig,
            JetVariable::velocity(a, sig.r + 1, &lifted_sig),
        )?;
        out = out.add(&velocity.mul(&component.lifted())?)?;
    }
    Lagrangian::new(out)
}

/// `d(dL)`, which must canonicalize to zero for every Lagrangian. A nonzero
/// return value witnesses a broken sign convention.
pub fn d_squared_check(l: &Lagrangian) -> Result<Expression> {
    Ok(apply_d(&apply_d(l)?)?.into_body())
}

/// A polynomial, parity-preserving change of coordinates `x^A = x^A(y)`.
/// Source and target have the same signature; the maps are polynomials in
/// the bare new coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateChange {
    sig: Signature,
    maps: Vec<Expression>,
}

impl CoordinateChange {
    pub fn new(sig: Signature, maps: Vec<Expression>) -> Result<CoordinateChange> {
        if maps.len() != sig.coords() as usize {
            return Err(Error::UnboundCoordinate { coord: maps.len() as u16 + 1 });
        }
        for (i, map) in maps.iter().enumerate() {
            let coord = i as u16 + 1;
            if map.sig() != sig {
                return Err(Error::SignatureMismatch { left: sig, right: map.sig() });
            }
            let pointwise = map
                .terms()
                .all(|(m, _)| m.is_time_free() && m.jet_factors().iter().all(|(v, _)| v.order() == 0));
            if !pointwise {
                return Err(Error::NotPointwise);
            }
            if !map.is_zero() && map.parity_of() != Some(sig.coord_parity(coord)) {
                return Err(Error::ParityMismatch { coord });
            }
        }
        Ok(CoordinateChange { sig, maps })
    }

    /// The identity change.
    pub fn identity(sig: Signature) -> CoordinateChange {
        let maps = sig
            .coord_range()
            .map(|a| Expression::jet(sig, JetVariable::coordinate(a)).expect("in range"))
            .collect();
        CoordinateChange { sig, maps }
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn maps(&self) -> &[Expression] {
        &self.maps
    }

    /// Jacobian entry `∂x^A/∂y^B` (a left partial derivative).
    pub fn jacobian(&self, a: u16, b: u16) -> Expression {
        crate::deriv::partial_deriv(&self.maps[(a - 1) as usize], &JetVariable::coordinate(b))
    }

    /// The same maps over the lifted signature.
    pub fn lifted(&self) -> CoordinateChange {
        CoordinateChange {
            sig: self.sig.lift(),
            maps: self.maps.iter().map(Expression::lifted).collect(),
        }
    }
}

/// Substitutes the jet prolongation of a coordinate change into an
/// expression.
pub fn pullback_expr(e: &Expression, phi: &CoordinateChange) -> Result<Expression> {
    if e.sig() != phi.sig {
        return Err(Error::SignatureMismatch { left: e.sig(), right: phi.sig });
    }
    replace_jets(e, &phi.maps)
}

/// Rewrites a Lagrangian in the new coordinates.
pub fn pullback(l: &Lagrangian, phi: &CoordinateChange) -> Result<Lagrangian> {
    Lagrangian::new(pullback_expr(l.body(), phi)?)
}

/// Checks that variational derivatives transform as covector components:
/// for every new coordinate `B`, the difference between the variational
/// derivative of the pulled-back Lagrangian and the Jacobian-contracted
/// pullback of the original variational derivatives (Jacobian on the left).
/// Every entry must be zero.
pub fn covector_check(l: &Lagrangian, phi: &CoordinateChange) -> Result<Vec<Expression>> {
    let pulled = pullback(l, phi)?;
    let sig = l.sig();
    let mut out = Vec::with_capacity(sig.coords() as usize);
    for b in sig.coord_range() {
        let lhs = var_deriv(&pulled, b)?;
        let mut rhs = Expression::zero(sig);
        for a in sig.coord_range() {
            let jac = phi.jacobian(a, b);
            if jac.is_zero() {
                continue;
            }
            let pulled_component = pullback_expr(&var_deriv(l, a)?, phi)?;
            rhs = rhs.add(&jac.mul(&pulled_component)?)?;
        }
        out.push(lhs.sub(&rhs)?);
    }
    Ok(out)
}

/// Coordinate independence of the differential: `d` commutes with pullback.
/// The returned expression must be zero.
pub fn naturality_check(l: &Lagrangian, phi: &CoordinateChange) -> Result<Expression> {
    let lhs = apply_d(&pullback(l, phi)?)?;
    let rhs = pullback_expr(apply_d(l)?.body(), &phi.lifted())?;
    lhs.body().sub(&rhs)
}

/// Necessary condition for a covector to consist of variational derivatives:
/// the differential of the contraction with a fresh velocity must vanish.
/// Returns the obstruction expression (zero iff the condition holds).
pub fn helmholtz_check(f: &Covector) -> Result<Expression> {
    let sig = f.sig();
    let mut offset: Option<Parity> = None;
    for a in sig.coord_range() {
        let comp = f.component(a);
        if comp.is_zero() {
            continue;
        }
        if !comp.is_time_independent() {
            return Err(Error::TimeDependent);
        }
        let p = comp.parity_of().ok_or(Error::InconsistentParity)?;
        let this = p + sig.coord_parity(a);
        match offset {
            None => offset = Some(this),
            Some(o) if o != this => return Err(Error::InconsistentParity),
            _ => {}
        }
    }

    let lifted_sig = sig.lift();
    let mut body = Expression::zero(lifted_sig);
    for a in sig.coord_range() {
        let comp = f.component(a);
        if comp.is_zero() {
            continue;
        }
        let velocity = Expression::jet(
            lifted_sig,
            JetVariable::velocity(a, sig.r + 1, &lifted_sig),
        )?;
        body = body.add(&velocity.mul(&comp.lifted())?)?;
    }
    Ok(apply_d(&Lagrangian::new(body)?)?.into_body())
}

/// Orders of a Lagrangian and of its differential, and whether the
/// differential preserved the filtration. For first-order Lagrangians the
/// preserved flag is exactly the form-like condition.
pub fn filtration_check(l: &Lagrangian) -> Result<(Option<u32>, Option<u32>, bool)> {
    let before = l.body().order_of();
    let after = apply_d(l)?.body().order_of();
    Ok((before, after, after <= before))
}
