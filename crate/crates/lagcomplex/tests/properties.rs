//! Property tests for the kernel algebra and the derivation laws.

use lagcomplex::*;
use num_traits::One;
use proptest::prelude::*;

fn sig4() -> Signature {
    Signature::new(2, 2, 2, 2)
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn arb_mindex() -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(1u16..=4, 0..=3).prop_filter_map("odd index repeats", |ix| {
        MultiIndex::from_indices(&ix, &sig4()).map(|(mi, _)| mi)
    })
}

fn arb_jet() -> impl Strategy<Value = JetVariable> {
    (1u16..=4, arb_mindex()).prop_map(|(coord, mindex)| JetVariable::new(coord, mindex))
}

fn arb_factor() -> impl Strategy<Value = RawFactor> {
    prop_oneof![(1u16..=4).prop_map(RawFactor::Time), arb_jet().prop_map(RawFactor::Jet)]
}

fn arb_expr() -> impl Strategy<Value = Expression> {
    proptest::collection::vec(
        (-4i64..=4, proptest::collection::vec(arb_factor(), 0..=4)),
        0..=4,
    )
    .prop_map(|raw| {
        let terms = raw.into_iter().map(|(c, fs)| (rat(c), fs)).collect();
        canonicalize(sig4(), terms).expect("valid indices")
    })
}

/// A homogeneous slice of an arbitrary expression.
fn arb_homogeneous() -> impl Strategy<Value = Expression> {
    (arb_expr(), prop::bool::ANY).prop_map(|(e, odd)| {
        e.homogeneous_part(if odd { Parity::Odd } else { Parity::Even })
    })
}

fn raw_terms(e: &Expression) -> Vec<(Rat, Vec<RawFactor>)> {
    e.terms()
        .map(|(m, c)| {
            let mut fs = Vec::new();
            for &(idx, exp) in m.even_times() {
                for _ in 0..exp {
                    fs.push(RawFactor::Time(idx));
                }
            }
            for &idx in m.odd_times() {
                fs.push(RawFactor::Time(idx));
            }
            for (v, exp) in m.jet_factors() {
                for _ in 0..*exp {
                    fs.push(RawFactor::Jet(v.clone()));
                }
            }
            (c.clone(), fs)
        })
        .collect()
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(e in arb_expr()) {
        let again = canonicalize(sig4(), raw_terms(&e)).unwrap();
        prop_assert_eq!(again, e);
    }

    #[test]
    fn mul_is_super_commutative(a in arb_homogeneous(), b in arb_homogeneous()) {
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        let flip = a.parity_of() == Some(Parity::Odd) && b.parity_of() == Some(Parity::Odd);
        prop_assert_eq!(ab, if flip { ba.neg() } else { ba });
    }

    #[test]
    fn mul_is_associative(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn mul_distributes_over_add(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn repeated_odd_factor_vanishes(v in arb_jet(), e in arb_expr()) {
        prop_assume!(v.parity(&sig4()).is_odd());
        let single = Expression::jet(sig4(), v).unwrap();
        let squared = single.mul(&e).unwrap().mul(&single).unwrap();
        prop_assert!(squared.is_zero());
    }

    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let text = format!("{e}");
        let back = parse(&text, &sig4()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn partial_deriv_satisfies_graded_leibniz(
        p in arb_homogeneous(),
        q in arb_expr(),
        v in arb_jet(),
    ) {
        let product = p.mul(&q).unwrap();
        let lhs = partial_deriv(&product, &v);
        let mut rhs = partial_deriv(&p, &v).mul(&q).unwrap();
        let mut cross = p.mul(&partial_deriv(&q, &v)).unwrap();
        if v.parity(&sig4()).is_odd() && p.parity_of() == Some(Parity::Odd) {
            cross = cross.neg();
        }
        rhs = rhs.add(&cross).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_deriv_satisfies_graded_leibniz(
        p in arb_homogeneous(),
        q in arb_expr(),
        f in 1u16..=4,
    ) {
        let product = p.mul(&q).unwrap();
        let lhs = total_deriv(&product, f).unwrap();
        let mut rhs = total_deriv(&p, f).unwrap().mul(&q).unwrap();
        let mut cross = p.mul(&total_deriv(&q, f).unwrap()).unwrap();
        if sig4().time_parity(f).is_odd() && p.parity_of() == Some(Parity::Odd) {
            cross = cross.neg();
        }
        rhs = rhs.add(&cross).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivs_supercommute(e in arb_expr(), f in 1u16..=4, g in 1u16..=4) {
        let fg = total_deriv(&total_deriv(&e, g).unwrap(), f).unwrap();
        let gf = total_deriv(&total_deriv(&e, f).unwrap(), g).unwrap();
        let both_odd = sig4().time_parity(f).is_odd() && sig4().time_parity(g).is_odd();
        prop_assert_eq!(fg, if both_odd { gf.neg() } else { gf });
    }

    #[test]
    fn parity_rules_on_products(a in arb_homogeneous(), b in arb_homogeneous()) {
        let ab = a.mul(&b).unwrap();
        prop_assume!(!ab.is_zero());
        let expected = match (a.parity_of().unwrap(), b.parity_of().unwrap()) {
            (x, y) if x == y => Parity::Even,
            _ => Parity::Odd,
        };
        prop_assert_eq!(ab.parity_of(), Some(expected));
    }
}

/// Independent textbook expansion of the Euler-Lagrange expression for a
/// one-coordinate, one-even-time signature, orders up to two.
fn textbook_euler_lagrange(l: &Lagrangian) -> Expression {
    let sig = l.sig();
    assert_eq!(sig, Signature::new(1, 0, 1, 0));
    let x = |indices: &[u16]| {
        JetVariable::new(1, MultiIndex::from_indices(indices, &sig).unwrap().0)
    };
    let p0 = partial_deriv(l.body(), &x(&[]));
    let p1 = partial_deriv(l.body(), &x(&[1]));
    let p2 = partial_deriv(l.body(), &x(&[1, 1]));
    let d1 = total_deriv(&p1, 1).unwrap();
    let d2 = total_deriv(&total_deriv(&p2, 1).unwrap(), 1).unwrap();
    p0.sub(&d1).unwrap().add(&d2).unwrap()
}

#[test]
fn var_deriv_matches_textbook_expansion() {
    let sig = Signature::new(1, 0, 1, 0);
    let mut corpus = Corpus::new(2024);
    for _ in 0..300 {
        let l = corpus.lagrangian(sig, 2, 2, 3);
        let expected = textbook_euler_lagrange(&l);
        let got = var_deriv(&l, 1).unwrap();
        assert_eq!(got, expected, "L = {l}");
    }
    // The pinned fourth-order example.
    let l = Lagrangian::new(parse("1/2 * x1[1 1]^2", &sig).unwrap()).unwrap();
    assert_eq!(var_deriv(&l, 1).unwrap(), parse("x1[1 1 1 1]", &sig).unwrap());
    assert_eq!(textbook_euler_lagrange(&l), parse("x1[1 1 1 1]", &sig).unwrap());
}

#[test]
fn var_deriv_is_linear() {
    let sig = Signature::new(2, 1, 2, 1);
    let mut corpus = Corpus::new(5);
    let mut done = 0;
    while done < 40 {
        let l1 = corpus.lagrangian(sig, 2, 1, 3);
        let l2 = corpus.lagrangian(sig, 2, 1, 3);
        if l1.body().parity_of() != l2.body().parity_of() {
            continue;
        }
        let combined = Lagrangian::new(
            l1.body().scale(&rat(3)).add(&l2.body().scale(&Rat::new(7.into(), 2.into()))).unwrap(),
        )
        .unwrap();
        for a in sig.coord_range() {
            let got = var_deriv(&combined, a).unwrap();
            let expected = var_deriv(&l1, a)
                .unwrap()
                .scale(&rat(3))
                .add(&var_deriv(&l2, a).unwrap().scale(&Rat::new(7.into(), 2.into())))
                .unwrap();
            assert_eq!(got, expected);
        }
        done += 1;
    }
}

#[test]
fn var_deriv_order_bound() {
    // Variation at most doubles the derivative order.
    let mut corpus = Corpus::new(99);
    for sig in [Signature::new(1, 0, 1, 0), Signature::new(2, 1, 1, 1), Signature::new(1, 1, 2, 0)]
    {
        for _ in 0..40 {
            let l = corpus.lagrangian(sig, 3, 1, 3);
            let bound = l.body().order_of().map(|k| 2 * k);
            for a in sig.coord_range() {
                let got = var_deriv(&l, a).unwrap().order_of();
                assert!(got <= bound, "order {got:?} > 2*{bound:?} for {l}");
            }
        }
    }
}

#[test]
fn apply_d_is_linear_and_parity_preserving() {
    let sig = Signature::new(2, 1, 1, 1);
    let mut corpus = Corpus::new(31);
    let mut done = 0;
    while done < 30 {
        let l1 = corpus.lagrangian(sig, 2, 1, 2);
        let l2 = corpus.lagrangian(sig, 2, 1, 2);
        if l1.body().parity_of() != l2.body().parity_of() {
            continue;
        }
        let combined =
            Lagrangian::new(l1.body().scale(&rat(2)).add(&l2.body().scale(&rat(-5))).unwrap())
                .unwrap();
        let got = apply_d(&combined).unwrap();
        let expected = apply_d(&l1)
            .unwrap()
            .body()
            .scale(&rat(2))
            .add(&apply_d(&l2).unwrap().body().scale(&rat(-5)))
            .unwrap();
        assert_eq!(got.body(), &expected);
        if !l1.body().is_zero() && !apply_d(&l1).unwrap().body().is_zero() {
            assert_eq!(apply_d(&l1).unwrap().body().parity_of(), l1.body().parity_of());
        }
        done += 1;
    }
}

#[test]
fn d_squared_vanishes_on_random_corpus() {
    // A compact sweep; the acceptance suite runs the full grid.
    let mut failures = Vec::new();
    for (n, m, r, s) in
        [(1, 0, 1, 0), (2, 1, 1, 0), (1, 1, 1, 1), (3, 2, 2, 1), (1, 2, 0, 1), (2, 0, 2, 0)]
    {
        let sig = Signature::new(n, m, r, s);
        let mut corpus = Corpus::new(1000 + n as u64 * 100 + m as u64 * 10 + s as u64);
        for _ in 0..15 {
            let l = corpus.lagrangian(sig, 1, 2, 3);
            let square = d_squared_check(&l).unwrap();
            if !square.is_zero() {
                failures.push(format!("sig {sig}: L = {l}"));
            }
        }
        for _ in 0..5 {
            let l = corpus.lagrangian(sig, 2, 2, 2);
            let square = d_squared_check(&l).unwrap();
            if !square.is_zero() {
                failures.push(format!("sig {sig} order 2: L = {l}"));
            }
        }
    }
    assert!(failures.is_empty(), "d^2 != 0 on:\n{}", failures.join("\n"));
}

#[test]
fn naturality_and_covector_on_random_changes() {
    for (n, m) in [(2, 0), (1, 1), (2, 2)] {
        let sig = Signature::new(n, m, 1, 0);
        let mut corpus = Corpus::new(7_000 + n as u64 * 10 + m as u64);
        for _ in 0..8 {
            let l = corpus.lagrangian(sig, 1, 1, 2);
            let phi = corpus.coordinate_change(sig);
            for entry in covector_check(&l, &phi).unwrap() {
                assert!(entry.is_zero(), "covector defect {entry} for {l}");
            }
            let defect = naturality_check(&l, &phi).unwrap();
            assert!(defect.is_zero(), "naturality defect {defect} for {l}");
        }
    }
}

#[test]
fn helmholtz_accepts_all_variational_covectors() {
    for sig in [Signature::new(1, 0, 1, 0), Signature::new(2, 1, 1, 1), Signature::new(1, 1, 2, 0)]
    {
        let mut corpus = Corpus::new(17 + sig.n as u64);
        for _ in 0..10 {
            let l = corpus.lagrangian(sig, 2, 1, 2);
            let f = var_deriv_all(&l).unwrap();
            let obstruction = helmholtz_check(&f).unwrap();
            assert!(obstruction.is_zero(), "obstruction {obstruction} for {l}");
        }
    }
}

#[test]
fn divergence_residual_vanishes_on_random_corpus() {
    for sig in [Signature::new(1, 0, 1, 0), Signature::new(2, 1, 1, 1), Signature::new(1, 1, 2, 1)]
    {
        let mut corpus = Corpus::new(23 + sig.m as u64 + sig.s as u64);
        for _ in 0..10 {
            let l = corpus.lagrangian(sig, 2, 1, 3);
            let (_, residual) = divergence_decompose(&l).unwrap();
            assert!(residual.is_zero(), "residual {residual} for {l}");
        }
    }
}

#[test]
fn stokes_holds_on_random_homotopies() {
    for sig in [Signature::new(1, 0, 1, 0), Signature::new(2, 0, 1, 0), Signature::new(1, 1, 1, 1)]
    {
        let mut corpus = Corpus::new(400 + sig.coords() as u64);
        for _ in 0..6 {
            let l = corpus.lagrangian(sig, 2, 1, 2);
            let k_flat = 2 * l.body().order_of().unwrap_or(0);
            let h = corpus.homotopy(sig, k_flat);
            let (lhs, rhs) = stokes_check(&l, &h).unwrap();
            assert_eq!(lhs, rhs, "Stokes mismatch for {l}");
        }
    }
}

#[test]
fn form_lagrangians_keep_their_filtration() {
    // First-order Lagrangians coming from forms stay first-order under d;
    // a kinetic term does not.
    let n = 2u16;
    {
        let degree = 1u16;
        let coeff_sig = PolyForm::coeff_sig(n, degree);
        for tuple in [vec![1], vec![2]] {
            for text in ["x1", "x2^2", "x1 * x2"] {
                let mut coeffs = std::collections::BTreeMap::new();
                coeffs.insert(tuple.clone(), parse(text, &coeff_sig).unwrap());
                let form = PolyForm::new(n, degree, coeffs).unwrap();
                let l = form_to_lagrangian(&form).unwrap();
                let (_, _, preserved) = filtration_check(&l).unwrap();
                assert!(preserved, "form-like {text} dx{tuple:?} must keep order");
            }
        }
    }
    let sig = Signature::new(1, 0, 1, 0);
    let kinetic = Lagrangian::new(parse("1/2 * x1[1]^2", &sig).unwrap()).unwrap();
    assert_eq!(filtration_check(&kinetic).unwrap(), (Some(1), Some(2), false));
}

#[test]
fn berezin_drops_incomplete_odd_products() {
    // Anything missing one of the two odd times integrates to zero.
    let sig = Signature::new(1, 0, 1, 2);
    let e = parse("t1 + tau1 + 3 * tau2 * t1", &sig).unwrap();
    assert!(berezin_integrate(&e).unwrap().is_zero());
    let keeps = parse("2 * tau1 * tau2 + tau1", &sig).unwrap();
    assert_eq!(berezin_integrate(&keeps).unwrap(), parse("2", &sig).unwrap());
}

#[test]
fn one_is_multiplicative_identity() {
    let one = Expression::one(sig4());
    let mut corpus = Corpus::new(8);
    for _ in 0..10 {
        let l = corpus.lagrangian(sig4(), 2, 2, 3);
        assert_eq!(&l.body().mul(&one).unwrap(), l.body());
        assert_eq!(&one.mul(l.body()).unwrap(), l.body());
    }
    assert_eq!(one.as_constant(), Some(Rat::one()));
}
