//! Even-case dictionary between polynomial differential forms and
//! multilinear first-order Lagrangians, and a truncated polynomial
//! cohomology computation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::complex::apply_d;
use crate::deriv::partial_deriv;
use crate::error::{Error, Result};
use crate::expr::{Expression, Lagrangian};
use crate::jet::JetVariable;
use crate::signature::Signature;
use crate::Rat;

/// A polynomial differential form on an even space: coefficients indexed by
/// strictly increasing tuples of coordinate indices.
///
/// Coefficient expressions live over [`PolyForm::coeff_sig`], the signature
/// of the Lagrangian the form maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyForm {
    n: u16,
    degree: u16,
    coeffs: BTreeMap<Vec<u16>, Expression>,
}

impl PolyForm {
    /// Signature hosting the coefficients of a degree-`degree` form on `n`
    /// even coordinates.
    pub fn coeff_sig(n: u16, degree: u16) -> Signature {
        Signature::new(n, 0, degree, 0)
    }

    pub fn new(n: u16, degree: u16, coeffs: BTreeMap<Vec<u16>, Expression>) -> Result<PolyForm> {
        if degree > n && !coeffs.is_empty() {
            return Err(Error::DegreeTooLarge { degree, n });
        }
        let sig = PolyForm::coeff_sig(n, degree);
        let mut cleaned = BTreeMap::new();
        for (tuple, coeff) in coeffs {
            if tuple.len() != degree as usize {
                return Err(Error::DegreeTooLarge { degree: tuple.len() as u16, n });
            }
            for pair in tuple.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(Error::CoordOutOfRange { index: pair[1], max: n });
                }
            }
            for &a in &tuple {
                if a == 0 || a > n {
                    return Err(Error::CoordOutOfRange { index: a, max: n });
                }
            }
            if coeff.sig() != sig {
                return Err(Error::SignatureMismatch { left: sig, right: coeff.sig() });
            }
            let pointwise = coeff.terms().all(|(m, _)| {
                m.is_time_free() && m.jet_factors().iter().all(|(v, _)| v.order() == 0)
            });
            if !pointwise {
                return Err(Error::NotPointwise);
            }
            if !coeff.is_zero() {
                cleaned.insert(tuple, coeff);
            }
        }
        Ok(PolyForm { n, degree, coeffs: cleaned })
    }

    pub fn zero(n: u16, degree: u16) -> PolyForm {
        PolyForm { n, degree, coeffs: BTreeMap::new() }
    }

    pub fn n(&self) -> u16 {
        self.n
    }

    pub fn degree(&self) -> u16 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u16>, Expression> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Per-degree sign constant of the dictionary, fixed once so that the
/// correspondence intertwines the two differentials: `(-1)^{r(r-1)/2}`.
fn sign_constant(degree: u16) -> Rat {
    let degree = degree as u32;
    if (degree * degree.wrapping_sub(1) / 2).is_multiple_of(2) {
        Rat::one()
    } else {
        -Rat::one()
    }
}

fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, bool)> {
    fn gen(current: &mut Vec<usize>, remaining: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, bool)>) {
        if remaining.is_empty() {
            let mut inversions = 0usize;
            for i in 0..current.len() {
                for j in (i + 1)..current.len() {
                    if current[i] > current[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((current.clone(), inversions % 2 == 1));
            return;
        }
        for idx in 0..remaining.len() {
            let v = remaining.remove(idx);
            current.push(v);
            gen(current, remaining, out);
            current.pop();
            remaining.insert(idx, v);
        }
    }
    let mut out = Vec::new();
    let mut remaining: Vec<usize> = (0..k).collect();
    gen(&mut Vec::new(), &mut remaining, &mut out);
    out
}

/// The Lagrangian of a form: each coefficient times the velocity determinant
/// of its coordinate tuple, scaled by the per-degree sign constant.
pub fn form_to_lagrangian(form: &PolyForm) -> Result<Lagrangian> {
    let sig = PolyForm::coeff_sig(form.n, form.degree);
    let r = form.degree as usize;
    let perms = permutations_with_sign(r);
    let mut body = Expression::zero(sig);
    for (tuple, coeff) in &form.coeffs {
        for (perm, neg) in &perms {
            let mut product = Expression::one(sig);
            for (i, &col) in perm.iter().enumerate() {
                let vel = JetVariable::velocity(tuple[i], col as u16 + 1, &sig);
                product = product.mul(&Expression::jet(sig, vel)?)?;
            }
            body = body.add(
                &coeff
                    .mul(&product)?
                    .scale(&if *neg { -Rat::one() } else { Rat::one() }),
            )?;
        }
    }
    Lagrangian::new(body.scale(&sign_constant(form.degree)))
}

/// Inverse of the dictionary. Errors on any Lagrangian that is not
/// multilinear first-order alternating with polynomial coefficients.
pub fn lagrangian_to_form(l: &Lagrangian) -> Result<PolyForm> {
    let sig = l.sig();
    let degree = sig.r;
    let n = sig.n;
    if sig.m != 0 || sig.s != 0 {
        return Err(Error::NotFormLike { monomial: "odd signature".to_string() });
    }
    let offending =
        |m: &crate::monomial::Monomial| -> Error {
            Error::NotFormLike {
                monomial: format!("{}", Expression::single(sig, m.clone(), Rat::one())),
            }
        };

    let mut coeffs: BTreeMap<Vec<u16>, Expression> = BTreeMap::new();
    for (m, c) in l.body().terms() {
        if !m.is_time_free() {
            return Err(offending(m));
        }
        let mut velocity_of_time: BTreeMap<u16, u16> = BTreeMap::new();
        let mut point_part = crate::monomial::Monomial::one();
        for (jet, exp) in m.jet_factors() {
            match jet.order() {
                0 => point_part.jets.push((jet.clone(), *exp)),
                1 => {
                    let time = jet.mindex.indices().next().expect("order 1");
                    if *exp != 1 || velocity_of_time.insert(time, jet.coord).is_some() {
                        return Err(offending(m));
                    }
                }
                _ => return Err(offending(m)),
            }
        }
        if velocity_of_time.len() != degree as usize {
            return Err(offending(m));
        }
        // Each determinant expands into one monomial per permutation; read
        // the coefficient off the identity permutation only (velocity
        // coordinates increasing with the time index) and let the final
        // round-trip comparison check the alternating partners.
        let by_time: Vec<u16> = velocity_of_time.values().copied().collect();
        if !by_time.windows(2).all(|w| w[0] < w[1]) {
            continue;
        }
        let value = c * sign_constant(degree).recip();
        let entry = coeffs
            .entry(by_time)
            .or_insert_with(|| Expression::zero(sig));
        *entry = entry.add(&Expression::single(sig, point_part, value))?;
    }
    coeffs.retain(|_, e| !e.is_zero());
    let candidate = PolyForm::new(n, degree, coeffs)?;
    // Alternation check: the reconstruction must reproduce the input.
    let back = form_to_lagrangian(&candidate)?;
    let difference = back.body().sub(l.body())?;
    if let Some((m, _)) = difference.terms().next() {
        return Err(offending(m));
    }
    Ok(candidate)
}

/// The classical exterior derivative on polynomial forms. A top-degree input
/// returns the zero form of one higher degree.
pub fn exterior_deriv(form: &PolyForm) -> Result<PolyForm> {
    let n = form.n;
    let out_degree = form.degree + 1;
    let out_sig = PolyForm::coeff_sig(n, out_degree);
    let mut coeffs: BTreeMap<Vec<u16>, Expression> = BTreeMap::new();
    for (tuple, coeff) in &form.coeffs {
        for b in 1..=n {
            if tuple.binary_search(&b).is_ok() {
                continue;
            }
            let derived = partial_deriv(coeff, &JetVariable::coordinate(b));
            if derived.is_zero() {
                continue;
            }
            let derived = derived.with_signature(out_sig)?;
            let pos = tuple.partition_point(|&a| a < b);
            let mut out_tuple = tuple.clone();
            out_tuple.insert(pos, b);
            let signed = if pos % 2 == 1 { derived.neg() } else { derived };
            let entry = coeffs
                .entry(out_tuple)
                .or_insert_with(|| Expression::zero(out_sig));
            *entry = entry.add(&signed)?;
        }
    }
    coeffs.retain(|_, e| !e.is_zero());
    if out_degree > n {
        debug_assert!(coeffs.is_empty());
        return Ok(PolyForm::zero(n, out_degree));
    }
    PolyForm::new(n, out_degree, coeffs)
}

/// The intertwining defect of the dictionary:
/// `d(L_ω) - L_{dω}`, which must be zero.
pub fn bridge_check(form: &PolyForm) -> Result<Expression> {
    let dl = apply_d(&form_to_lagrangian(form)?)?;
    let l_dw = form_to_lagrangian(&exterior_deriv(form)?)?;
    dl.body().sub(l_dw.body())
}

fn monomials_up_to(n: u16, max_degree: u32) -> Vec<Vec<u32>> {
    fn go(vars_left: u16, budget: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars_left == 0 {
            out.push(current.clone());
            return;
        }
        for d in 0..=budget {
            current.push(d);
            go(vars_left - 1, budget - d, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_degree, &mut Vec::new(), &mut out);
    out
}

fn increasing_tuples(n: u16, k: u16) -> Vec<Vec<u16>> {
    fn go(next: u16, n: u16, k: u16, current: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if k == 0 {
            out.push(current.clone());
            return;
        }
        for a in next..=n {
            current.push(a);
            go(a + 1, n, k - 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn rank(mut matrix: Vec<Vec<Rat>>) -> usize {
    let rows = matrix.len();
    if rows == 0 {
        return 0;
    }
    let cols = matrix[0].len();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&i| !matrix[i][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, pivot);
        let inv = matrix[row][col].clone().recip();
        for v in &mut matrix[row][col..] {
            *v = v.clone() * &inv;
        }
        let pivot_row = matrix[row].clone();
        for (i, r) in matrix.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (c, v) in r.iter_mut().enumerate().skip(col) {
                *v = v.clone() - factor.clone() * &pivot_row[c];
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Dimensions `dim H^k` for `k = 0..=n` of the polynomial form complex
/// truncated by total degree (coefficient degree plus form degree at most
/// `degree_bound`), computed by exact Gaussian elimination on the matrices
/// of [`exterior_deriv`] over the monomial bases.
pub fn cohomology_dims(n: u16, degree_bound: u16) -> Result<Vec<usize>> {
    if n > 4 || degree_bound > 4 {
        return Err(Error::BoundsExceeded);
    }

    // Basis of the degree-k slot: (increasing tuple, coefficient exponent
    // vector) with |exponents| <= degree_bound - k.
    let basis = |k: u16| -> Vec<(Vec<u16>, Vec<u32>)> {
        if k > n || k > degree_bound {
            return Vec::new();
        }
        let mut out = Vec::new();
        for tuple in increasing_tuples(n, k) {
            for mono in monomials_up_to(n, (degree_bound - k) as u32) {
                out.push((tuple.clone(), mono));
            }
        }
        out
    };

    let basis_form = |tuple: &[u16], exps: &[u32], k: u16| -> PolyForm {
        let sig = PolyForm::coeff_sig(n, k);
        let mut coeff = Expression::one(sig);
        for (i, &e) in exps.iter().enumerate() {
            let x = Expression::jet(sig, JetVariable::coordinate(i as u16 + 1)).expect("in range");
            coeff = coeff.mul(&x.pow(e)).expect("same signature");
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(tuple.to_vec(), coeff);
        PolyForm::new(n, k, coeffs).expect("valid basis form")
    };

    // Decompose d(basis element) over the next basis.
    let mut ranks: Vec<usize> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    for k in 0..=n {
        let dom = basis(k);
        dims.push(dom.len());
        let cod = basis(k + 1);
        if dom.is_empty() || cod.is_empty() {
            ranks.push(0);
            continue;
        }
        let index: BTreeMap<(Vec<u16>, Vec<u32>), usize> =
            cod.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        // One matrix row per domain element (the rank is transpose-stable).
        let mut matrix: Vec<Vec<Rat>> = Vec::with_capacity(dom.len());
        for (tuple, exps) in &dom {
            let mut row = alloc::vec![Rat::zero(); cod.len()];
            let image = exterior_deriv(&basis_form(tuple, exps, k))?;
            for (out_tuple, coeff) in image.coeffs() {
                for (m, c) in coeff.terms() {
                    let mut evec = alloc::vec![0u32; n as usize];
                    for (v, e) in m.jet_factors() {
                        evec[(v.coord - 1) as usize] = *e;
                    }
                    let col = index[&(out_tuple.clone(), evec)];
                    row[col] = row[col].clone() + c;
                }
            }
            matrix.push(row);
        }
        ranks.push(rank(matrix));
    }

    let mut out = Vec::with_capacity(n as usize + 1);
    for k in 0..=(n as usize) {
        let kernel = dims[k] - ranks[k];
        let image_before = if k == 0 { 0 } else { ranks[k - 1] };
        out.push(kernel - image_before);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn coeff(text: &str, n: u16, degree: u16) -> Expression {
        parse(text, &PolyForm::coeff_sig(n, degree)).unwrap()
    }

    fn form(n: u16, degree: u16, entries: &[(&[u16], &str)]) -> PolyForm {
        let coeffs = entries
            .iter()
            .map(|(t, c)| (t.to_vec(), coeff(c, n, degree)))
            .collect();
        PolyForm::new(n, degree, coeffs).unwrap()
    }

    #[test]
    fn dictionary_examples() {
        // Degree 0: the coefficient itself.
        let w = form(2, 0, &[(&[], "x1^2 + x2")]);
        let l = form_to_lagrangian(&w).unwrap();
        assert_eq!(l.body(), &coeff("x1^2 + x2", 2, 0));

        // x1 dx2 on n = 2.
        let w = form(2, 1, &[(&[2], "x1")]);
        let l = form_to_lagrangian(&w).unwrap();
        assert_eq!(l.body(), &coeff("x1 * x2[1]", 2, 1));

        // dx1 ^ dx2: the 2x2 velocity determinant with the degree-2 sign.
        let w = form(2, 2, &[(&[1, 2], "1")]);
        let l = form_to_lagrangian(&w).unwrap();
        assert_eq!(l.body(), &coeff("x1[2] * x2[1] - x1[1] * x2[2]", 2, 2));
    }

    #[test]
    fn dictionary_round_trip() {
        let samples = [
            form(2, 0, &[(&[], "x1^2")]),
            form(2, 1, &[(&[2], "x1"), (&[1], "3 * x2^2")]),
            form(2, 2, &[(&[1, 2], "x1 * x2")]),
            form(3, 2, &[(&[1, 3], "x2"), (&[2, 3], "1")]),
            PolyForm::zero(2, 1),
        ];
        for w in samples {
            let l = form_to_lagrangian(&w).unwrap();
            assert_eq!(lagrangian_to_form(&l).unwrap(), w);
        }
    }

    #[test]
    fn non_form_like_rejected() {
        let sig = Signature::new(1, 0, 1, 0);
        let l = Lagrangian::new(parse("1/2 * x1[1]^2", &sig).unwrap()).unwrap();
        assert!(matches!(lagrangian_to_form(&l), Err(Error::NotFormLike { .. })));
        // Symmetric (non-alternating) velocity products are not form-like.
        let sig = Signature::new(2, 0, 2, 0);
        let l = Lagrangian::new(parse("x1[1] * x2[2] + x2[1] * x1[2]", &sig).unwrap()).unwrap();
        assert!(matches!(lagrangian_to_form(&l), Err(Error::NotFormLike { .. })));
        // Higher jets are not form-like.
        let sig = Signature::new(1, 0, 1, 0);
        let l = Lagrangian::new(parse("x1[1 1]", &sig).unwrap()).unwrap();
        assert!(matches!(lagrangian_to_form(&l), Err(Error::NotFormLike { .. })));
    }

    #[test]
    fn exterior_deriv_examples() {
        // d(x1 dx2) = dx1 ^ dx2.
        let w = form(2, 1, &[(&[2], "x1")]);
        assert_eq!(exterior_deriv(&w).unwrap(), form(2, 2, &[(&[1, 2], "1")]));
        // d f = sum of partials.
        let w = form(2, 0, &[(&[], "x1 * x2")]);
        assert_eq!(
            exterior_deriv(&w).unwrap(),
            form(2, 1, &[(&[1], "x2"), (&[2], "x1")])
        );
        // d of a top form is the zero higher form.
        let w = form(2, 2, &[(&[1, 2], "x1")]);
        let dw = exterior_deriv(&w).unwrap();
        assert!(dw.is_zero());
        assert_eq!(dw.degree(), 3);
    }

    #[test]
    fn exterior_deriv_squares_to_zero() {
        let w = form(3, 1, &[(&[1], "x2 * x3"), (&[3], "x1^2")]);
        let ddw = exterior_deriv(&exterior_deriv(&w).unwrap()).unwrap();
        assert!(ddw.is_zero());
    }

    #[test]
    fn bridge_examples() {
        assert!(bridge_check(&form(2, 1, &[(&[2], "x1")])).unwrap().is_zero());
        assert!(bridge_check(&form(3, 0, &[(&[], "x1 * x2^2")])).unwrap().is_zero());
        // A closed 1-form maps to a Lagrangian with vanishing differential.
        let closed = form(2, 1, &[(&[1], "1")]);
        let l = form_to_lagrangian(&closed).unwrap();
        assert!(apply_d(&l).unwrap().body().is_zero());
    }

    #[test]
    fn bridge_pins_the_sign_constants() {
        // Monomial generators of every degree on n = 4 fix the per-degree
        // signs: one wrong constant makes some difference nonzero.
        let n = 4;
        for degree in 0..4u16 {
            for tuple in increasing_tuples(n, degree) {
                for c in 1..=n {
                    let w = form(n, degree, &[(&tuple, &format!("x{c}"))]);
                    let defect = bridge_check(&w).unwrap();
                    assert!(
                        defect.is_zero(),
                        "degree {degree} tuple {tuple:?} coeff x{c}: {defect}"
                    );
                }
            }
        }
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(cohomology_dims(2, 2).unwrap(), alloc::vec![1, 0, 0]);
        assert_eq!(cohomology_dims(1, 3).unwrap(), alloc::vec![1, 0]);
        assert_eq!(cohomology_dims(0, 2).unwrap(), alloc::vec![1]);
        assert!(cohomology_dims(5, 2).is_err());
    }
}
