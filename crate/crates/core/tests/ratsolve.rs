use std::collections::BTreeMap;

use redform::exactfield::{q, Poly, RatFunc};
use redform::ratsolve::{
    apply_operator, param_antiderivative, scalar_rational_solutions, solve_constraints, ConstraintSet, ConstraintSolution, LinearRow, ParamAffine, ParamAlloc,
};

fn x() -> RatFunc {
    RatFunc::x()
}

fn parse_poly(cs: &[i64], den: &[i64]) -> RatFunc {
    RatFunc::new(Poly::from_ints(cs), Poly::from_ints(den))
}

#[test]
fn euler_equation_solutions() {
    // y'' - 2/x^2 y = 0 has x^2 and 1/x
    let op = [parse_poly(&[-2], &[0, 0, 1]), RatFunc::zero(), RatFunc::one()];
    let mut alloc = ParamAlloc::new();
    let space = scalar_rational_solutions(&op, &ParamAffine::zero(), &mut alloc).unwrap();
    assert!(!space.empty);
    assert_eq!(space.free_params().len(), 2);
    for y in [&x() * &x(), x().inv().unwrap()] {
        assert!(apply_operator(&op, &y).is_zero());
    }
    let free = space.free_params();
    for p in &free {
        let assign: BTreeMap<_, _> = free.iter().map(|&r| (r, q(i64::from(r == *p), 1))).collect();
        let y = space.instantiate(&assign);
        assert!(apply_operator(&op, &y[0]).is_zero());
    }
}

#[test]
fn heun_adjoint_has_no_rational_solution() {
    let op = [
        RatFunc::new(Poly::from_ints(&[-96, 185, -179, -9, 3]), &Poly::from_ints(&[0, 0, 144]) * &Poly::from_ints(&[1, -2, 1])),
        RatFunc::new(Poly::from_ints(&[-2, 4]), Poly::from_ints(&[0, -3, 3])),
        RatFunc::constant(q(-1, 1)),
    ];
    let mut alloc = ParamAlloc::new();
    let space = scalar_rational_solutions(&op, &ParamAffine::constant(RatFunc::one()), &mut alloc).unwrap();
    assert!(space.empty);
}

#[test]
fn parametrized_antiderivative_forces_log_cancellation() {
    let mut alloc = ParamAlloc::new();
    let c31 = alloc.fresh("c3,1");
    let c32 = alloc.fresh("c3,2");
    let base = &(&parse_poly(&[1], &[0, 2]) - &parse_poly(&[1], &[-1, 1])) + &parse_poly(&[1], &[0, 0, 1]);
    let rhs = ParamAffine::from_parts(base, [(c31, parse_poly(&[1], &[-1, 1])), (c32, parse_poly(&[1], &[0, 1]))]);
    let space = param_antiderivative(&rhs, &mut alloc);
    assert!(!space.empty);
    let rows: Vec<String> = space.constraints.rows().map(|r| r.display(&alloc)).collect();
    assert_eq!(rows, vec!["c3,1 = 1", "c3,2 = -1/2"]);
    let y = space.instantiate(&BTreeMap::new());
    assert_eq!(y[0].derive(), rhs.eval(&space.constraints.assignment(&BTreeMap::new())));
    assert!((&y[0] + &x().inv().unwrap()).is_constant());
}

#[test]
fn pure_log_has_no_rational_antiderivative() {
    let mut alloc = ParamAlloc::new();
    let space = param_antiderivative(&ParamAffine::constant(x().inv().unwrap()), &mut alloc);
    assert!(space.empty);
}

#[test]
fn constraint_elimination() {
    let mut alloc = ParamAlloc::new();
    let (a, b, c) = (alloc.fresh("a"), alloc.fresh("b"), alloc.fresh("c"));
    let mut cs = ConstraintSet::new();
    cs.add_row(&LinearRow::new([(a, q(1, 1)), (b, q(1, 1))], q(3, 1)));
    cs.add_row(&LinearRow::new([(a, q(1, 1)), (b, q(-1, 1))], q(1, 1)));
    assert!(cs.is_consistent());
    match solve_constraints(&cs, &[a, b, c]) {
        ConstraintSolution::Affine { pivots, free } => {
            assert_eq!(free, vec![c]);
            assert_eq!(pivots.len(), 2);
        }
        ConstraintSolution::Inconsistent => panic!("consistent system reported inconsistent"),
    }
    let assign = cs.assignment(&BTreeMap::from([(c, q(5, 1))]));
    assert_eq!((assign[&a].clone(), assign[&b].clone()), (q(2, 1), q(1, 1)));
    assert!(cs.try_extend(&[LinearRow::new([(a, q(1, 1))], q(7, 1))]).is_none());
}
