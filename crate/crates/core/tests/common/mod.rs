#![allow(dead_code)]

use redform::diffsys::{DiffSystem, Orientation};
use redform::exactfield::{q, Poly, RatFunc};
use redform::linalg::{QMatrix, RfMatrix};

/// `Σ c/(x-a)^k` over `(c_num, c_den, a, k)`; `k = 0` is a constant term.
pub fn pf(terms: &[(i64, i64, i64, u32)]) -> RatFunc {
    terms.iter().fold(RatFunc::zero(), |acc, &(n, d, a, k)| {
        let t = if k == 0 { RatFunc::constant(q(n, d)) } else { RatFunc::pole(q(n, d), &q(a, 1), k) };
        &acc + &t
    })
}

pub fn c(n: i64) -> RatFunc {
    RatFunc::constant(q(n, 1))
}

pub fn poly(cs: &[i64]) -> RatFunc {
    RatFunc::from_poly(Poly::from_ints(cs))
}

pub fn qm(rows: &[&[(i64, i64)]]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect())
}

pub fn qi(rows: &[[i64; 4]]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect())
}

pub fn half(rows: &[[i64; 4]]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v, 2)).collect()).collect())
}

/// The 4-dim lower block with `e^x`, `ln x`, `ln(x-1)` and dilog solutions.
pub fn a1_four() -> RfMatrix {
    let z = RatFunc::zero;
    RfMatrix::from_rows(vec![
        vec![c(1), z(), pf(&[(1, 1, 0, 1)]), z()],
        vec![pf(&[(1, 1, 1, 1)]), c(1), z(), pf(&[(-1, 1, 0, 1)])],
        vec![z(), z(), c(1), z()],
        vec![z(), z(), pf(&[(1, 1, 1, 1)]), c(1)],
    ])
}

pub fn eight_dim_coupling() -> RfMatrix {
    RfMatrix::from_rows(vec![
        vec![pf(&[(-3, 4, 0, 1), (1, 1, 0, 2)]), pf(&[(1, 4, 0, 1), (-1, 1, 0, 2)]), pf(&[(-1, 2, 1, 1), (2, 1, 0, 1), (-2, 1, 0, 2)]), pf(&[(-1, 1, 0, 1)])],
        vec![pf(&[(1, 2, 1, 1), (-2, 1, 0, 1), (5, 1, 0, 2)]), pf(&[(1, 4, 0, 1), (-1, 1, 0, 2)]), pf(&[(2, 1, 1, 1), (4, 1, 0, 2)]), pf(&[(1, 2, 1, 1), (2, 1, 0, 1), (-2, 1, 0, 2)])],
        vec![pf(&[(-1, 4, 1, 1)]), RatFunc::zero(), pf(&[(3, 4, 0, 1), (-1, 1, 0, 2)]), pf(&[(1, 4, 0, 1), (1, 1, 0, 2)])],
        vec![pf(&[(-1, 2, 1, 1)]), pf(&[(1, 4, 1, 1)]), pf(&[(1, 2, 1, 1), (2, 1, 0, 1), (-7, 1, 0, 2)]), pf(&[(-1, 4, 0, 1), (1, 1, 0, 2)])],
    ])
}

pub fn two_block(a1: &RfMatrix, s: &RfMatrix, a2: &RfMatrix) -> RfMatrix {
    let (n1, n2) = (a1.rows(), a2.rows());
    let mut a = RfMatrix::zeros(n1 + n2, n1 + n2);
    a.set_submatrix(0, 0, a1);
    a.set_submatrix(n1, 0, s);
    a.set_submatrix(n1, n1, a2);
    a
}

pub fn eight_dim() -> DiffSystem {
    let a1 = a1_four();
    DiffSystem::new(two_block(&a1, &eight_dim_coupling(), &a1), vec![4, 4], Orientation::Lower, true).unwrap()
}

/// Printed reduced coupling: `diag(-1, 1, -1, 1) / (2(x-1))`.
pub fn eight_dim_reduced_coupling() -> RfMatrix {
    let mut s = RfMatrix::zeros(4, 4);
    for i in 0..4 {
        s[(i, i)] = pf(&[(if i % 2 == 0 { -1 } else { 1 }, 2, 1, 1)]);
    }
    s
}

pub fn h1() -> Vec<QMatrix> {
    vec![QMatrix::identity(4)]
}

/// Printed adapted basis `N2..N6`.
pub fn h5() -> Vec<QMatrix> {
    vec![
        qi(&[[0, 0, 0, 0], [2, 0, 0, 0], [0, 0, 0, 0], [0, 0, -2, 0]]),
        qi(&[[0, 0, -2, 0], [0, 0, 0, -2], [0, 0, 0, 0], [0, 0, 0, 0]]),
        qi(&[[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]),
        qi(&[[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]]),
        qi(&[[0, -1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]),
    ]
}

/// Printed adapted basis `N7..N16`.
pub fn h10() -> Vec<QMatrix> {
    vec![
        qi(&[[0, 0, 0, 0], [0, 0, 2, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
        qi(&[[0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, -1, 0]]),
        qi(&[[0, 0, 1, 0], [0, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0]]),
        qi(&[[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]]),
        half(&[[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]),
        half(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]),
        qi(&[[0, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
        half(&[[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, -1, 0, 0]]),
        half(&[[0, -1, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 0, 0]]),
        half(&[[0, 0, 0, 0], [0, 0, 0, 0], [0, -1, 0, 0], [0, 0, 0, 0]]),
    ]
}

/// Printed `Ψ₅` on `N2..N6`.
pub fn psi5() -> RfMatrix {
    let z = RatFunc::zero;
    let u = || pf(&[(1, 1, 1, 1)]);
    let v = || pf(&[(1, 1, 0, 1)]);
    RfMatrix::from_rows(vec![
        vec![z(), z(), u(), z(), z()],
        vec![z(), z(), v(), z(), z()],
        vec![z(), z(), z(), v(), u()],
        vec![z(), z(), z(), z(), z()],
        vec![z(), z(), z(), z(), z()],
    ])
}

/// The 4-dim example after the permutation, upper orientation.
pub fn four_dim_upper(blocks: Vec<usize>) -> DiffSystem {
    let z = RatFunc::zero;
    let a = RfMatrix::from_rows(vec![
        vec![c(1), pf(&[(1, 1, 0, 1)]), pf(&[(1, 1, 1, 1)]), z()],
        vec![z(), c(1), z(), pf(&[(1, 1, 1, 1)])],
        vec![z(), z(), c(1), pf(&[(-1, 1, 0, 1)])],
        vec![z(), z(), z(), c(1)],
    ]);
    DiffSystem::new(a, blocks, Orientation::Upper, true).unwrap()
}

pub fn hypergeometric_a1() -> RfMatrix {
    RfMatrix::from_rows(vec![
        vec![RatFunc::zero(), c(1)],
        vec![pf(&[(-1, 36, 0, 1), (1, 36, 1, 1)]), pf(&[(-7, 12, 0, 1), (-1, 6, 1, 1)])],
    ])
}

pub fn hypergeometric() -> DiffSystem {
    let s = RfMatrix::from_rows(vec![vec![c(1), RatFunc::zero()]]);
    DiffSystem::new(two_block(&hypergeometric_a1(), &s, &RfMatrix::zeros(1, 1)), vec![2, 1], Orientation::Lower, true).unwrap()
}

/// Coefficients `p₀, p₁` of `y'' + p₁ y' + p₀ y`.
pub fn heun_operator() -> (RatFunc, RatFunc) {
    let p0 = pf(&[(-1, 48, 0, 0), (7, 144, 0, 1), (-1, 36, 1, 1)]);
    let p1 = pf(&[(2, 3, 0, 1), (2, 3, 1, 1)]);
    (p0, p1)
}

pub fn heun() -> DiffSystem {
    let (p0, p1) = heun_operator();
    let a1 = RfMatrix::from_rows(vec![vec![RatFunc::zero(), c(1)], vec![-&p0, -&p1]]);
    let s = RfMatrix::from_rows(vec![vec![c(1), RatFunc::zero()]]);
    DiffSystem::new(two_block(&a1, &s, &RfMatrix::zeros(1, 1)), vec![2, 1], Orientation::Lower, true).unwrap()
}
