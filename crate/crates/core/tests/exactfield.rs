use redform::exactfield::{coeff_basis, factor, hermite_reduce, q, squarefree_partfrac, Poly, RatFunc, Q};

fn x() -> RatFunc {
    RatFunc::x()
}

fn c(n: i64, d: i64) -> RatFunc {
    RatFunc::constant(q(n, d))
}

fn lin(a: i64) -> RatFunc {
    &x() - &c(a, 1)
}

#[test]
fn normal_form_is_canonical() {
    let a = &(&x() * &x()).checked_div(&(&x() * &lin(1))).unwrap() + &RatFunc::zero();
    assert_eq!(a, x().checked_div(&lin(1)).unwrap());
    assert!(a.den().lc() == q(1, 1));
    let b = RatFunc::new(Poly::from_ints(&[2]), Poly::from_ints(&[0, 4]));
    assert_eq!(b.to_string(), "1/2/x");
}

#[test]
fn arithmetic_agrees_with_pointwise_evaluation() {
    let f = &c(1, 2).checked_div(&x()).unwrap() - &lin(1).inv().unwrap();
    let g = &(&x() * &x()) + &RatFunc::pole(q(3, 1), &q(-1, 1), 2);
    for t in [q(2, 1), q(-3, 1), q(5, 7), q(-2, 3)] {
        let (fv, gv) = (f.eval(&t).unwrap(), g.eval(&t).unwrap());
        assert_eq!((&f + &g).eval(&t).unwrap(), &fv + &gv);
        assert_eq!((&f * &g).eval(&t).unwrap(), &fv * &gv);
        assert_eq!((&f - &g).eval(&t).unwrap(), &fv - &gv);
        assert_eq!(f.checked_div(&g).unwrap().eval(&t).unwrap(), &fv / &gv);
    }
    assert!(f.checked_div(&RatFunc::zero()).is_err());
}

#[test]
fn derivative_matches_difference_quotient_limit() {
    // d/dx (x^3 / (x - 2)) = (2x^3 - 6x^2) / (x - 2)^2
    let f = (&(&x() * &x()) * &x()).checked_div(&lin(2)).unwrap();
    let expect = RatFunc::new(Poly::from_ints(&[0, 0, -6, 2]), Poly::from_ints(&[4, -4, 1]));
    assert_eq!(f.derive(), expect);
}

#[test]
fn gcd_and_factorization() {
    let p = &Poly::from_ints(&[-1, 1]).pow(2) * &Poly::from_ints(&[1, 0, 1]);
    let r = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[2, 1]);
    assert_eq!(p.gcd(&r), Poly::from_ints(&[-1, 1]));
    let f = factor(&p.scale(&q(3, 1)));
    assert_eq!(f.content, q(3, 1));
    assert_eq!(f.factors.len(), 2);
    assert_eq!((f.factors[0].poly.clone(), f.factors[0].multiplicity), (Poly::from_ints(&[-1, 1]), 2));
    assert_eq!(f.factors[1].poly, Poly::from_ints(&[1, 0, 1]));
    assert!(f.factors.iter().all(|t| t.certified));
    assert_eq!(f.expand(), p.scale(&q(3, 1)));
    assert_eq!(Poly::from_ints(&[-6, 1, 1]).rational_roots(), vec![q(-3, 1), q(2, 1)]);
}

#[test]
fn partial_fractions_recombine() {
    let a = &(&RatFunc::pole(q(2, 1), &q(0, 1), 2) + &RatFunc::pole(q(-1, 3), &q(1, 1), 1)) + &x();
    let a = &a + &RatFunc::new(Poly::from_ints(&[1]), Poly::from_ints(&[1, 0, 1]));
    let pf = squarefree_partfrac(&a);
    assert_eq!(pf.recombine(), a);
    assert_eq!(pf.polynomial_part, Poly::x());
    assert!(pf.terms.iter().all(|t| t.numerator.degree().unwrap_or(0) < t.factor.degree().unwrap()));
}

#[test]
fn hermite_splits_rational_and_log_parts() {
    // ∫ (1/x^2 + 1/(x-1)) = -1/x + ln(x-1)
    let a = &RatFunc::pole(q(1, 1), &q(0, 1), 2) + &RatFunc::pole(q(1, 1), &q(1, 1), 1);
    let h = hermite_reduce(&a);
    assert_eq!(h.integral, -&x().inv().unwrap());
    assert_eq!(h.remainder, lin(1).inv().unwrap());
    let p = RatFunc::from_poly(Poly::from_ints(&[1, 2, 3]));
    let h = hermite_reduce(&p);
    assert_eq!(h.integral, RatFunc::from_poly(Poly::from_ints(&[0, 1, 1, 1])));
    assert!(h.remainder.is_zero());
}

#[test]
fn coefficient_basis_is_a_basis() {
    let fs = vec![
        &c(1, 2).checked_div(&x()).unwrap() + &lin(1).inv().unwrap(),
        &c(1, 1).checked_div(&x()).unwrap() + &c(2, 1).checked_div(&lin(1)).unwrap(),
        c(3, 1),
        RatFunc::zero(),
    ];
    let cb = coeff_basis(&fs);
    assert_eq!(cb.basis.len(), 2);
    for (i, f) in fs.iter().enumerate() {
        let back = cb.basis.iter().enumerate().fold(RatFunc::zero(), |acc, (j, b)| &acc + &b.scale(&cb.coords[(i, j)]));
        assert_eq!(&back, f);
    }
    let zero: Q = q(0, 1);
    assert!((0..2).all(|j| cb.coords[(3, j)] == zero));
}
