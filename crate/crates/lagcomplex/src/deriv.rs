//! Derivations on jet expressions: partial derivatives with respect to jet
//! variables, total time derivatives, and the variational derivative.
//!
//! Conventions, used consistently across the crate:
//!  * all derivatives are left derivatives: differentiating a factor inside
//!    a monomial picks up the parity of everything to its left;
//!  * `D_F` appends its index at the head of the derivative string, so an
//!    odd `F` flips the sign once per smaller odd index already present;
//!  * the iterated derivative for a multi-index applies the largest index
//!    first (`D_μ = D_{F_1} ∘ … ∘ D_{F_l}` with `F_1 ≤ … ≤ F_l`).

use alloc::vec::Vec;



use crate::error::{Error, Result};
use crate::expr::{Expression, Lagrangian};
use crate::jet::{JetVariable, MultiIndex};
use crate::monomial::Monomial;
use crate::signature::Signature;
use crate::Rat;

/// Left derivative with respect to a jet variable. The derivative of an
/// absent (or out-of-signature) variable is zero.
pub fn partial_deriv(e: &Expression, v: &JetVariable) -> Expression {
    let sig = e.sig();
    let v_odd = v.parity(&sig).is_odd();
    let mut terms: Vec<(Monomial, Rat)> = Vec::new();
    for (m, c) in e.terms() {
        for (k, (jet, exp)) in m.jet_factors().iter().enumerate() {
            if jet != v {
                continue;
            }
            let mut m2 = m.clone();
            if *exp == 1 {
                m2.jets.remove(k);
            } else {
                m2.jets[k].1 -= 1;
            }
            let mut coeff = c * Rat::from_integer((*exp).into());
            if v_odd && m.prefix_parity_at_jet(k, &sig).is_odd() {
                coeff = -coeff;
            }
            terms.push((m2, coeff));
        }
    }
    Expression::from_terms(sig, terms)
}

/// Left derivative with respect to an explicit time variable.
pub fn partial_time(e: &Expression, index: u16) -> Result<Expression> {
    let sig = e.sig();
    sig.check_time(index)?;
    let odd = sig.time_parity(index).is_odd();
    let mut terms: Vec<(Monomial, Rat)> = Vec::new();
    for (m, c) in e.terms() {
        if odd {
            if let Some((m2, flip)) = m.remove_otime(index) {
                terms.push((m2, if flip { -c.clone() } else { c.clone() }));
            }
        } else if let Some((m2, exp)) = m.decrement_etime(index) {
            terms.push((m2, c * Rat::from_integer(exp.into())));
        }
    }
    Ok(Expression::from_terms(sig, terms))
}

/// Total derivative along a time direction: the explicit time derivative
/// plus the jet-prolongation part. A super-derivation of the parity of the
/// time index.
pub fn total_deriv(e: &Expression, index: u16) -> Result<Expression> {
    let sig = e.sig();
    sig.check_time(index)?;
    let f_odd = sig.time_parity(index).is_odd();
    let mut out = partial_time(e, index)?;

    let mut terms: Vec<(Monomial, Rat)> = Vec::new();
    for (m, c) in e.terms() {
        for (k, (jet, exp)) in m.jet_factors().iter().enumerate() {
            let Some((mindex, append_neg)) = jet.mindex.append(index, &sig) else {
                continue;
            };
            let derived = JetVariable::new(jet.coord, mindex);
            let mut negate = append_neg;
            if f_odd && m.prefix_parity_at_jet(k, &sig).is_odd() {
                negate = !negate;
            }
            // Assemble prefix * D(jet) * jet^(exp-1) * suffix; the canonical
            // monomial product supplies the remaining reordering signs.
            let (prefix, suffix) = m.split_at_jet(k);
            let mut mono = prefix;
            let mut alive = true;
            let mut parts: Vec<Monomial> = Vec::new();
            parts.push(Monomial::from_jet(derived));
            if *exp > 1 {
                let mut rest = Monomial::one();
                rest.jets.push((jet.clone(), exp - 1));
                parts.push(rest);
            }
            parts.push(suffix);
            for part in parts {
                match mono.mul(&part, &sig) {
                    Some((m2, neg)) => {
                        mono = m2;
                        negate ^= neg;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                let coeff = c * Rat::from_integer((*exp).into());
                terms.push((mono, if negate { -coeff } else { coeff }));
            }
        }
    }
    out = out.add(&Expression::from_terms(sig, terms))?;
    Ok(out)
}

/// Iterated total derivative over a whole multi-index, largest index applied
/// first.
pub fn total_deriv_multi(e: &Expression, mindex: &MultiIndex) -> Result<Expression> {
    let indices: Vec<u16> = mindex.indices().collect();
    let mut acc = e.clone();
    for &f in indices.iter().rev() {
        acc = total_deriv(&acc, f)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// The variational derivative of a time-independent Lagrangian with respect
/// to one coordinate: the alternating sum of iterated total derivatives of
/// the jet partials, with the extra sign when both the coordinate and the
/// multi-index are odd.
pub fn var_deriv(l: &Lagrangian, coord: u16) -> Result<Expression> {
    let sig = l.sig();
    sig.check_coord(coord)?;
    if !l.body().is_time_independent() {
        return Err(Error::TimeDependent);
    }
    let coord_odd = sig.coord_parity(coord).is_odd();
    let mut out = Expression::zero(sig);
    for v in l.body().jets_of_coord(coord) {
        let inner = partial_deriv(l.body(), &v);
        if inner.is_zero() {
            continue;
        }
        let derived = total_deriv_multi(&inner, &v.mindex)?;
        let mut negate = v.mindex.order() % 2 == 1;
        if coord_odd && v.mindex.parity().is_odd() {
            negate = !negate;
        }
        out = out.add(&if negate { derived.neg() } else { derived })?;
    }
    Ok(out)
}

/// The tuple of all variational derivatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covector {
    sig: Signature,
    components: Vec<Expression>,
}

impl Covector {
    /// One component per coordinate, in coordinate order.
    pub fn new(sig: Signature, components: Vec<Expression>) -> Result<Covector> {
        if components.len() != sig.coords() as usize {
            return Err(Error::UnboundCoordinate { coord: components.len() as u16 + 1 });
        }
        for c in &components {
            if c.sig() != sig {
                return Err(Error::SignatureMismatch { left: sig, right: c.sig() });
            }
        }
        Ok(Covector { sig, components })
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    /// Component for a 1-based coordinate index.
    pub fn component(&self, coord: u16) -> &Expression {
        &self.components[(coord - 1) as usize]
    }
}

pub fn var_deriv_all(l: &Lagrangian) -> Result<Covector> {
    let sig = l.sig();
    let mut components = Vec::with_capacity(sig.coords() as usize);
    for a in sig.coord_range() {
        components.push(var_deriv(l, a)?);
    }
    Covector::new(sig, components)
}

/// Maximal derivative order occurring in an expression; `None` is the
/// order of the zero expression.
pub fn order_of(e: &Expression) -> Option<u32> {
    e.order_of()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use num_traits::One;

    fn sig() -> Signature {
        Signature::new(2, 2, 2, 2)
    }

    fn e(text: &str) -> Expression {
        parse(text, &sig()).unwrap()
    }

    fn lag(text: &str) -> Lagrangian {
        Lagrangian::new(e(text)).unwrap()
    }

    fn jet(text: &str) -> JetVariable {
        let expr = e(text);
        let (m, c) = expr.terms().next().unwrap();
        assert!(c.is_one());
        m.jet_factors()[0].0.clone()
    }

    #[test]
    fn partial_polynomial_rule() {
        assert_eq!(partial_deriv(&e("1/2 * x1[1]^2"), &jet("x1[1]")), e("x1[1]"));
    }

    #[test]
    fn partial_left_odd_rule() {
        // d/dth2 (th1 th2) = -th1: the derivative passes one odd factor.
        assert_eq!(partial_deriv(&e("th1 * th2"), &jet("th2")), e("-th1"));
        assert_eq!(partial_deriv(&e("th1 * th2"), &jet("th1")), e("th2"));
    }

    #[test]
    fn partial_absent_variable() {
        assert!(partial_deriv(&e("x1 * x2"), &jet("th1")).is_zero());
    }

    #[test]
    fn total_deriv_examples() {
        assert_eq!(total_deriv(&e("x1"), 1).unwrap(), e("x1[1]"));
        assert_eq!(total_deriv(&e("1/2 * x1[1]^2"), 1).unwrap(), e("x1[1] * x1[1 1]"));
    }

    #[test]
    fn odd_total_deriv_squares_to_zero() {
        for text in ["th1", "x1 * th1[3]", "th1 * th2 * x1[1]"] {
            let once = total_deriv(&e(text), 3).unwrap();
            let twice = total_deriv(&once, 3).unwrap();
            assert!(twice.is_zero(), "D_3^2 ({text}) = {twice}");
        }
    }

    #[test]
    fn total_deriv_explicit_times() {
        assert_eq!(total_deriv(&e("t1^2"), 1).unwrap(), e("2 * t1"));
        assert_eq!(total_deriv(&e("tau1"), 3).unwrap(), e("1"));
        // Left derivative past the first odd time.
        assert_eq!(total_deriv(&e("tau1 * tau2"), 4).unwrap(), e("-tau1"));
    }

    #[test]
    fn var_deriv_first_order_oracle() {
        // Textbook expansion: dL/dx - D_1 dL/dx[1].
        let l = lag("1/2 * x1[1]^2");
        assert_eq!(var_deriv(&l, 1).unwrap(), e("-x1[1 1]"));
    }

    #[test]
    fn var_deriv_second_order_oracle() {
        // Pins the unordered-multiset convention: + D_1^2 dL/dx[1 1].
        let l = lag("1/2 * x1[1 1]^2");
        assert_eq!(var_deriv(&l, 1).unwrap(), e("x1[1 1 1 1]"));
    }

    #[test]
    fn var_deriv_order_zero() {
        assert_eq!(var_deriv(&lag("x1"), 1).unwrap(), e("1"));
    }

    #[test]
    fn var_deriv_rejects_time_dependence() {
        let l = Lagrangian::new(e("t1 * x1")).unwrap();
        assert!(matches!(var_deriv(&l, 1), Err(Error::TimeDependent)));
    }

    #[test]
    fn var_deriv_all_examples() {
        let l = lag("1/2 * x1[1]^2 + 1/2 * x2[1]^2");
        let cov = var_deriv_all(&l).unwrap();
        assert_eq!(cov.component(1), &e("-x1[1 1]"));
        assert_eq!(cov.component(2), &e("-x2[1 1]"));
        assert!(cov.component(3).is_zero());

        let cov = var_deriv_all(&lag("x1 * x2")).unwrap();
        assert_eq!(cov.component(1), &e("x2"));
        assert_eq!(cov.component(2), &e("x1"));

        let zero = var_deriv_all(&Lagrangian::new(Expression::zero(sig())).unwrap()).unwrap();
        assert!(zero.components().iter().all(Expression::is_zero));
    }

    #[test]
    fn total_derivs_supercommute() {
        let samples = ["x1 * th1[3]", "th1 * th2", "x1[1] * x2 * tau1", "th1[1 3] * x1"];
        for text in samples {
            let v = e(text);
            for f in 1..=4u16 {
                for g in 1..=4u16 {
                    let fg = total_deriv(&total_deriv(&v, g).unwrap(), f).unwrap();
                    let gf = total_deriv(&total_deriv(&v, f).unwrap(), g).unwrap();
                    let both_odd = sig().time_parity(f).is_odd() && sig().time_parity(g).is_odd();
                    let expected = if both_odd { gf.neg() } else { gf };
                    assert_eq!(fg, expected, "D_{f} D_{g} on {text}");
                }
            }
        }
    }
}
