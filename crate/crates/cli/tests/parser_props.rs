use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use redform::exactfield::{q, Poly, RatFunc};
use redform_cli::expr::{parse_expression, print_expression};

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    let qv = (-9i64..=9, 1i64..=6).prop_map(|(n, d)| q(n, d));
    let poly = prop::collection::vec(qv.clone(), 0..=3).prop_map(Poly::from_coeffs);
    let pole = (qv, -2i64..=2, 1u32..=3);
    (poly, prop::collection::vec(pole, 0..=3), 0u32..=1).prop_map(|(p, poles, quad)| {
        let f = poles.into_iter().fold(RatFunc::from_poly(p), |acc, (c, a, k)| &acc + &RatFunc::pole(c, &q(a, 1), k));
        if quad == 1 {
            &f + &RatFunc::new(Poly::from_ints(&[1, 3]), Poly::from_ints(&[2, 0, 1]))
        } else {
            f
        }
    })
}

proptest! {
    #![proptest_config(Config { cases: 200, rng_seed: RngSeed::Fixed(0x7061_7273), failure_persistence: None, ..Config::default() })]

    #[test]
    fn print_then_parse_is_identity(f in ratfunc(), var in prop::sample::select(vec!["x", "t", "z1"])) {
        let s = print_expression(&f, var);
        prop_assert_eq!(parse_expression(&s, var).unwrap(), f);
    }
}

#[test]
fn documented_forms() {
    let x = RatFunc::x();
    let expect = RatFunc::new(Poly::one(), &Poly::from_ints(&[0, 36]) * &Poly::from_ints(&[-1, 1]));
    assert_eq!(parse_expression("1/36 * 1/(x*(x-1))", "x").unwrap(), expect);
    assert_eq!(parse_expression("−2/3*(1/x + 1/(x−1))", "x").unwrap(), parse_expression("-(4*x - 2)/(3*x^2 - 3*x)", "x").unwrap());
    assert_eq!(parse_expression("(x^2)^(-1)", "x").unwrap(), (&x * &x).inv().unwrap());
}
