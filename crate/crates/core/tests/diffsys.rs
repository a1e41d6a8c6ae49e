use redform::diffsys::{
    augment_with_integrals, check_gauge_identity, companion_of_operator, gauge_transform, matrix_taylor, series_fundamental,
    series_gauge_check, taylor, DiffSystem, GaugeMatrix, Orientation,
};
use redform::exactfield::{q, Poly, RatFunc, Q};
use redform::linalg::RfMatrix;

fn c(n: i64) -> RatFunc {
    RatFunc::constant(q(n, 1))
}

fn factorial(k: i64) -> i64 {
    (1..=k).product()
}

#[test]
fn taylor_of_geometric_series() {
    let f = RatFunc::new(Poly::one(), Poly::from_ints(&[1, -1]));
    assert_eq!(taylor(&f, &q(0, 1), 6).unwrap(), vec![q(1, 1); 6]);
    assert!(taylor(&f, &q(1, 1), 3).is_none());
    // 1/x at 2: (-1)^k / 2^(k+1)
    let g = RatFunc::x().inv().unwrap();
    let t = taylor(&g, &q(2, 1), 4).unwrap();
    assert_eq!(t, vec![q(1, 2), q(-1, 4), q(1, 8), q(-1, 16)]);
}

#[test]
fn fundamental_series_of_exponential() {
    let sys = DiffSystem::full(RfMatrix::from_rows(vec![vec![c(1)]]));
    let u = series_fundamental(&sys, &q(0, 1), 8).unwrap();
    for (k, m) in u.coefficients.iter().enumerate() {
        assert_eq!(m[(0, 0)], q(1, factorial(k as i64)));
    }
    assert!(u.satisfies(&sys).unwrap());
}

#[test]
fn fundamental_series_of_nilpotent_system() {
    // Y' = [[0,0],[1/x,0]] Y at x0 = 1: second entry of first column is ln(x)
    let a = RfMatrix::from_rows(vec![vec![c(0), c(0)], vec![RatFunc::x().inv().unwrap(), c(0)]]);
    let u = series_fundamental(&DiffSystem::full(a), &q(1, 1), 6).unwrap();
    let ln: Vec<Q> = (0..6).map(|k| if k == 0 { q(0, 1) } else { q(if k % 2 == 1 { 1 } else { -1 }, k) }).collect();
    for (k, m) in u.coefficients.iter().enumerate() {
        assert_eq!(m[(1, 0)], ln[k]);
    }
}

#[test]
fn gauge_by_hand() {
    // P = [[1,0],[x,1]], A = 0: P[A] = -P^{-1}P' = [[0,0],[-1,0]]
    let p = GaugeMatrix::new(RfMatrix::from_rows(vec![vec![c(1), c(0)], vec![RatFunc::x(), c(1)]])).unwrap();
    let src = DiffSystem::full(RfMatrix::zeros(2, 2));
    let dst = gauge_transform(&p, &src).unwrap();
    assert_eq!(dst.a(), &RfMatrix::from_rows(vec![vec![c(0), c(0)], vec![c(-1), c(0)]]));
    assert!(check_gauge_identity(&p, &src, &dst));
    assert!(series_gauge_check(&p, &src, &dst, 10).unwrap().1);
    assert_eq!(p.inverse().apply(dst.a()).unwrap(), *src.a());
}

#[test]
fn singular_gauge_is_rejected() {
    let p = RfMatrix::from_rows(vec![vec![RatFunc::x(), c(1)], vec![RatFunc::x(), c(1)]]);
    assert!(GaugeMatrix::new(p).is_err());
}

#[test]
fn orientation_round_trip() {
    let x = RatFunc::x();
    let a = RfMatrix::from_rows(vec![vec![c(1), x.clone(), c(0)], vec![c(0), c(2), x.clone()], vec![c(0), c(0), c(3)]]);
    let up = DiffSystem::new(a.clone(), vec![1, 1, 1], Orientation::Upper, false).unwrap();
    let low = up.to_lower();
    assert_eq!(low.orientation(), Orientation::Lower);
    assert_eq!(low.a()[(2, 0)], c(0));
    assert_eq!(low.a()[(1, 0)], x);
    assert_eq!(low.lower_to(Orientation::Upper).a(), &a);
    assert!(DiffSystem::new(a, vec![1, 1, 1], Orientation::Lower, false).is_err());
}

#[test]
fn companion_and_augmentation() {
    // y'' - y = 0
    let sys = companion_of_operator(&[c(-1), c(0)]);
    assert_eq!(sys.a(), &RfMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(1), c(0)]]));
    let aug = augment_with_integrals(&sys, &[0]).unwrap();
    assert_eq!(aug.dim(), 3);
    assert_eq!(aug.blocks(), &[2, 1]);
    assert_eq!(aug.a()[(2, 0)], c(1));
    assert!(augment_with_integrals(&sys, &[5]).is_err());
    let t = matrix_taylor(aug.a(), &q(0, 1), 2).unwrap();
    assert!(t[1].is_zero());
}
