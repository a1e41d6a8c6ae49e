use redform::diffsys::{DiffSystem, Orientation};
use redform::exactfield::{q, RatFunc};
use redform::liealgebra::{bracket, derived_series_dims, is_bracket_closed, lie_closure, lie_dim, wei_norman};
use redform::linalg::{QMatrix, RfMatrix};

fn qm(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| q(c, 1)).collect()).collect())
}

fn unit(n: usize, i: usize, j: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |a, b| q(i64::from(a == i && b == j), 1))
}

fn four_dim() -> DiffSystem {
    let x = RatFunc::x();
    let one = RatFunc::one();
    let inv = |f: RatFunc| f.inv().unwrap();
    let xm1 = &x - &one;
    let z = RatFunc::zero();
    let a = RfMatrix::from_rows(vec![
        vec![one.clone(), inv(x.clone()), inv(xm1.clone()), z.clone()],
        vec![z.clone(), one.clone(), z.clone(), inv(xm1.clone())],
        vec![z.clone(), z.clone(), one.clone(), -&inv(x.clone())],
        vec![z.clone(), z.clone(), z, one],
    ]);
    DiffSystem::new(a, vec![1, 1, 1, 1], Orientation::Upper, true).unwrap()
}

#[test]
fn bracket_of_matrix_units() {
    // [E_ij, E_jk] = E_ik for i != k
    assert_eq!(bracket(&unit(3, 0, 1), &unit(3, 1, 2)), unit(3, 0, 2));
    assert!(bracket(&unit(3, 0, 1), &unit(3, 0, 2)).is_zero());
}

#[test]
fn closure_of_strict_upper_triangular_generators() {
    // superdiagonal units generate all strictly upper triangular 4x4 matrices
    let gens: Vec<QMatrix> = (0..3).map(|i| unit(4, i, i + 1)).collect();
    let l = lie_closure(&gens);
    assert_eq!(l.dim(), 6);
    assert!(is_bracket_closed(&l.basis));
    assert!(l.envelope_certified);
    assert_eq!(derived_series_dims(&l.basis), vec![6, 3, 0]);
}

#[test]
fn closure_of_gl2_generators() {
    let l = lie_closure(&[qm(&[&[1, 0], &[0, 0]]), qm(&[&[0, 1], &[0, 0]]), qm(&[&[0, 0], &[1, 0]])]);
    assert_eq!(l.dim(), 4);
    assert!(!l.envelope_certified);
}

#[test]
fn wei_norman_reconstructs_the_matrix() {
    let sys = four_dim();
    let wn = wei_norman(&sys);
    assert_eq!(wn.funcs.len(), 3);
    assert_eq!(&wn.reconstruct(4, 4), sys.a());
    assert!(wn.constant_index().is_some());
}

#[test]
fn four_dim_lie_algebra() {
    let l = lie_dim(&four_dim());
    assert_eq!(l.dim, 4);
    assert!(l.basis.envelope_certified);
    assert!(l.basis.contains(&QMatrix::identity(4)));
}
