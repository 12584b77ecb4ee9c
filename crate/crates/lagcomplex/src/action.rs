//! Exact action evaluation on polynomial paths, Berezin integration over the
//! odd times, the total-divergence decomposition, and the generalized Stokes
//! identity.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::complex::{apply_d, replace_jets};
use crate::deriv::{partial_deriv, partial_time, total_deriv};
use crate::error::{Error, Result};
use crate::expr::{Expression, Lagrangian};
use crate::jet::JetVariable;
use crate::monomial::Monomial;
use crate::signature::Signature;
use crate::Rat;

/// A polynomial map from the `r|s`-cube into the `n|m`-space: one expression
/// in the time variables per coordinate, parity-consistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    sig: Signature,
    components: Vec<Expression>,
}

impl Path {
    pub fn new(sig: Signature, components: Vec<Expression>) -> Result<Path> {
        if components.len() != sig.coords() as usize {
            return Err(Error::UnboundCoordinate { coord: components.len() as u16 + 1 });
        }
        for (i, comp) in components.iter().enumerate() {
            let coord = i as u16 + 1;
            if comp.sig() != sig {
                return Err(Error::SignatureMismatch { left: sig, right: comp.sig() });
            }
            if comp.has_jets() {
                return Err(Error::JetsPresent);
            }
            if !comp.is_zero() && comp.parity_of() != Some(sig.coord_parity(coord)) {
                return Err(Error::ParityMismatch { coord });
            }
        }
        Ok(Path { sig, components })
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

/// Replaces each jet variable by the matching iterated time derivative of
/// the path component; the result is a polynomial in the time variables.
pub fn substitute(e: &Expression, path: &Path) -> Result<Expression> {
    if e.sig() != path.sig {
        return Err(Error::SignatureMismatch { left: e.sig(), right: path.sig });
    }
    replace_jets(e, &path.components)
}

/// Integrates a pure time polynomial over all odd time variables: extracts
/// the coefficient of the full ascending product of the odd times, with the
/// ascending product integrating to `+1`.
pub fn berezin_integrate(e: &Expression) -> Result<Expression> {
    if e.has_jets() {
        return Err(Error::JetsPresent);
    }
    let sig = e.sig();
    let all_odd: Vec<u16> = (sig.r + 1..=sig.times()).collect();
    let terms = e.terms().filter(|(m, _)| m.odd_times() == all_odd.as_slice()).map(|(m, c)| {
        let stripped = Monomial { etimes: m.even_times().to_vec(), ..Monomial::default() };
        (stripped, c.clone())
    });
    let collected: Vec<_> = terms.collect();
    Ok(Expression::from_terms(sig, collected))
}

/// Exact integral of an even-time polynomial over the unit cube, one factor
/// `1/(k+1)` per power.
fn integrate_unit_cube(e: &Expression) -> Result<Rat> {
    if e.has_jets() {
        return Err(Error::JetsPresent);
    }
    let mut total = Rat::zero();
    for (m, c) in e.terms() {
        debug_assert!(m.odd_times().is_empty());
        let mut value = c.clone();
        for &(_, exp) in m.even_times() {
            value /= Rat::from_integer((exp + 1).into());
        }
        total += value;
    }
    Ok(total)
}

/// The action of a Lagrangian on a path: substitution, Berezin integration
/// over the odd times, then exact integration over the even unit cube.
pub fn action_eval(l: &Lagrangian, path: &Path) -> Result<Rat> {
    let substituted = substitute(l.body(), path)?;
    let reduced = berezin_integrate(&substituted)?;
    integrate_unit_cube(&reduced)
}

/// A one-parameter family of paths, written over the lifted signature: the
/// deformation parameter is the fresh even time `t^{r+1}`, and restricting
/// it to 0 or 1 gives the two endpoint paths over the base signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homotopy {
    base_sig: Signature,
    components: Vec<Expression>,
}

impl Homotopy {
    /// Components are expressions over `base_sig.lift()`.
    pub fn new(base_sig: Signature, components: Vec<Expression>) -> Result<Homotopy> {
        // Path::new over the lifted signature performs all validation.
        let lifted = Path::new(base_sig.lift(), components)?;
        Ok(Homotopy { base_sig, components: lifted.components })
    }

    pub fn base_sig(&self) -> Signature {
        self.base_sig
    }

    /// The whole family viewed as a single path of one dimension more.
    pub fn as_path(&self) -> Path {
        Path { sig: self.base_sig.lift(), components: self.components.clone() }
    }

    /// The endpoint path at parameter value 0 or 1.
    pub fn endpoint(&self, value: u8) -> Path {
        let lifted_sig = self.base_sig.lift();
        let param = self.base_sig.r + 1;
        let value = Expression::from_int(lifted_sig, value as i64);
        let components = self
            .components
            .iter()
            .map(|comp| {
                comp.subst_even_time(param, &value).expect("constant value").lowered()
            })
            .collect();
        Path { sig: self.base_sig, components }
    }

    /// The parameter-dependent part of one component.
    fn deformation(&self, index: usize) -> Expression {
        let lifted_sig = self.base_sig.lift();
        let param = self.base_sig.r + 1;
        let zero = Expression::zero(lifted_sig);
        let comp = &self.components[index];
        let at_zero = comp.subst_even_time(param, &zero).expect("constant value");
        comp.sub(&at_zero).expect("same signature")
    }
}

/// Checks that the parameter-dependent part of every component vanishes to
/// order at least `k_flat` at the endpoints of every base even time.
pub fn check_flatness(h: &Homotopy, k_flat: u32) -> Result<()> {
    let lifted_sig = h.base_sig.lift();
    let zero = Expression::zero(lifted_sig);
    let one = Expression::one(lifted_sig);
    for (i, _) in h.components.iter().enumerate() {
        let coord = i as u16 + 1;
        for f in 1..=h.base_sig.r {
            let mut g = h.deformation(i);
            for _ in 0..k_flat {
                let at0 = g.subst_even_time(f, &zero)?;
                let at1 = g.subst_even_time(f, &one)?;
                if !at0.is_zero() || !at1.is_zero() {
                    return Err(Error::InsufficientFlatness {
                        coord,
                        time: f,
                        required: k_flat,
                    });
                }
                g = partial_time(&g, f)?;
            }
        }
    }
    Ok(())
}

/// Both sides of the generalized Stokes identity: the action difference of
/// the endpoint paths, and the action of the differential on the family.
/// Requires flatness of order twice the Lagrangian order.
pub fn stokes_check(l: &Lagrangian, h: &Homotopy) -> Result<(Rat, Rat)> {
    if l.sig() != h.base_sig {
        return Err(Error::SignatureMismatch { left: l.sig(), right: h.base_sig });
    }
    let k_flat = 2 * l.body().order_of().unwrap_or(0);
    check_flatness(h, k_flat)?;
    let lhs = action_eval(l, &h.endpoint(1))? - action_eval(l, &h.endpoint(0))?;
    let dl = apply_d(l)?;
    let rhs = action_eval(&dl, &h.as_path())?;
    Ok((lhs, rhs))
}

/// Rewrites `dL - D_{r+1} L` as a sum of total derivatives `D_F h^F` over
/// the old time directions by repeated integration by parts, peeling one
/// derivative at a time off the velocity factor.
///
/// Returns the certificates `h^F` (not unique) and the residual
/// `dL - D_{r+1} L - Σ_F D_F h^F`, recomputed through the canonical
/// operations; the residual must be zero.
pub fn divergence_decompose(
    l: &Lagrangian,
) -> Result<(BTreeMap<u16, Expression>, Expression)> {
    let sig = l.sig();
    if !l.body().is_time_independent() {
        return Err(Error::TimeDependent);
    }
    let lifted_sig = sig.lift();
    let new_time = sig.r + 1;
    let mut h: BTreeMap<u16, Expression> = BTreeMap::new();

    for a in sig.coord_range() {
        let a_odd = sig.coord_parity(a).is_odd();
        for v in l.body().jets_of_coord(a) {
            if v.mindex.is_empty() {
                continue;
            }
            let w = partial_deriv(l.body(), &v).lifted();
            if w.is_zero() {
                continue;
            }
            let mu = v.mindex.lifted();
            let rem: Vec<u16> = mu.indices().collect();
            // suffix[i] = the iterated derivative over rem[i..] of w,
            // largest index applied first.
            let mut suffix = alloc::vec![w.clone(); rem.len() + 1];
            for i in (0..rem.len()).rev() {
                suffix[i] = total_deriv(&suffix[i + 1], rem[i])?;
            }

            let mut coeff = Rat::one();
            if (v.mindex.order() % 2 == 1) != (a_odd && v.mindex.parity().is_odd()) {
                coeff = -coeff;
            }
            let mut u = JetVariable::velocity(a, new_time, &lifted_sig);
            for (idx, &f) in rem.iter().enumerate() {
                // coeff * u * D_f(V) with V = suffix[idx + 1]:
                // push D_f outward, leaving u * V under it.
                let mut sign = coeff.clone();
                if lifted_sig.time_parity(f).is_odd() && u.parity(&lifted_sig).is_odd() {
                    sign = -sign;
                }
                let u_expr = Expression::jet(lifted_sig, u.clone())?;
                let contribution = u_expr.mul(&suffix[idx + 1])?.scale(&sign);
                if !contribution.is_zero() {
                    let entry =
                        h.entry(f).or_insert_with(|| Expression::zero(lifted_sig));
                    *entry = entry.add(&contribution)?;
                }
                // Remainder carries -sign * D_f(u) * V.
                let (mindex, append_neg) =
                    u.mindex.append(f, &lifted_sig).expect("fresh index");
                u = JetVariable::new(u.coord, mindex);
                coeff = if append_neg { sign } else { -sign };
            }
        }
    }
    h.retain(|_, e| !e.is_zero());

    let dl = apply_d(l)?;
    let mut residual = dl.body().sub(&total_deriv(&l.body().lifted(), new_time)?)?;
    for (&f, certificate) in &h {
        residual = residual.sub(&total_deriv(certificate, f)?)?;
    }
    Ok((h, residual))
}
