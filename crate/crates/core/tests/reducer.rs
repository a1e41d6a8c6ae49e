mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use redform::diffsys::{check_gauge_identity, gauge_transform, DiffSystem, GaugeMatrix, Orientation};
use redform::exactfield::{q, RatFunc};
use redform::liealgebra::{lie_dim, wei_norman_matrix};
use redform::linalg::RfMatrix;
use redform::reducer::*;
use redform::Error;

fn eight_dim_opts() -> ReductionOptions {
    ReductionOptions { summands: Some(vec![h1(), h5(), h10()]), ..Default::default() }
}

fn value(rep: &ReductionReport, name: &str) -> RatFunc {
    rep.direction(name).unwrap_or_else(|| panic!("no direction {name}")).value.clone()
}

#[test]
fn eight_dim_summands_reproduce_printed_form() {
    let sys = eight_dim();
    let rep = reduce_two_block(&sys, &eight_dim_opts()).unwrap();
    assert_eq!(rep.reduced.a().submatrix(4, 0, 4, 4), eight_dim_reduced_coupling());
    assert_eq!(rep.reduced.diag_part(), sys.diag_part());
    assert!(check_gauge_identity(&rep.gauge, &sys, &rep.reduced));
    assert_eq!(rep.lie_dim_after, 5);
    assert_eq!(rep.obstructed, vec!["N11".to_string()]);
    assert_eq!(rep.branch_choices.len(), 1);
    let b = &rep.branch_choices[0];
    assert_eq!((b.kept.as_str(), b.excluded.as_str()), ("N13", "N11"));
    let kept: Vec<String> = b.kept_rows.iter().map(|r| r.display(&rep.params)).collect();
    assert_eq!(kept, vec!["c4,1 = -1"]);
    assert!(rep.series_check.as_ref().is_some_and(|s| s.ok));
    assert!(rep.residual_in_diag_span);
}

#[test]
fn eight_dim_gauge_coefficients() {
    let rep = reduce_two_block(&eight_dim(), &eight_dim_opts()).unwrap();
    let inv_x = pf(&[(1, 1, 0, 1)]);
    let expect = [
        ("N2", inv_x.scale(&q(-3, 1))),
        ("N4", &c(1) - &inv_x),
        ("N5", RatFunc::constant(q(-1, 2))),
        ("N6", &c(1) - &inv_x),
        ("N7", inv_x.scale(&q(-1, 1))),
        ("N8", inv_x.scale(&q(-1, 1))),
        ("N9", c(-1)),
        ("N11", RatFunc::constant(q(-1, 2))),
        ("N13", RatFunc::constant(q(1, 2))),
        ("N14", RatFunc::constant(q(1, 2))),
        ("N15", c(-1)),
        ("N16", RatFunc::constant(q(1, 2))),
    ];
    for (name, v) in expect {
        assert_eq!(value(&rep, name), v, "{name}");
    }
    for name in ["N1", "N3", "N10", "N12"] {
        assert!(value(&rep, name).is_zero(), "{name}");
    }
}

#[test]
fn eight_dim_constraint_log() {
    let rep = reduce_two_block(&eight_dim(), &eight_dim_opts()).unwrap();
    let log = rep.constraint_strings();
    assert_eq!(
        log,
        vec![
            "c3,1 = 1", "c3,2 = -1/2", "c2,1 = 1", "c5,1 = 1/2", "c4,1 = -1", "c4,2 = 1/2", "c3,1 = 1/2", "c3,2 = 0", "c3,3 = -1/2",
            "c3,4 = 0", "c2,1 = -1", "c2,2 = 0"
        ]
    );
}

#[test]
fn eight_dim_full_space_flag() {
    let sys = eight_dim();
    let rep = reduce_two_block(&sys, &ReductionOptions::default()).unwrap();
    assert_eq!(rep.reduced.a().submatrix(4, 0, 4, 4), eight_dim_reduced_coupling());
    assert_eq!(rep.lie_dim_after, 5);
    assert_eq!(rep.obstructed.len(), 1);
    let act = adjoint_action(&sys).unwrap();
    let flag = flag_filtration(&act, &wei_norman_matrix(&sys.diag_part())).unwrap();
    assert_eq!(flag.dim(), 16);
}

#[test]
fn eight_dim_lie_dimension_by_bracket_closure() {
    // Closure of the Wei–Norman generators; the algebraic envelope is not computed.
    let rep = reduce_two_block(&eight_dim(), &eight_dim_opts()).unwrap();
    assert_eq!(rep.lie_dim_before, 9);
    assert!(rep.lie_dim_after <= rep.lie_dim_before);
}

#[test]
fn invariant_summands_and_their_flags() {
    let sys = eight_dim();
    let act = adjoint_action(&sys).unwrap();
    assert_eq!(act.restrict(&h5()).unwrap(), psi5());
    let decomp = wei_norman_matrix(&sys.diag_part());
    let f10 = flag_on_subspace(&act, &decomp, &h10(), 7).unwrap();
    let mut sizes = f10.level_sizes();
    sizes.reverse();
    assert_eq!(sizes, vec![1, 2, 4, 2, 1]);
    let f5 = flag_on_subspace(&act, &decomp, &h5(), 2).unwrap();
    assert_eq!(f5.dim(), 5);
    assert!(act.restrict(&h1()).unwrap().is_zero());
}

#[test]
fn free_constants_do_not_change_the_reduced_form() {
    let sys = eight_dim();
    let a = reduce_two_block(&sys, &ReductionOptions { free_values: FreeValues::Seeded(7), ..eight_dim_opts() }).unwrap();
    let b = reduce_two_block(&sys, &ReductionOptions { free_values: FreeValues::Seeded(1234), ..eight_dim_opts() }).unwrap();
    assert!(!a.free_params.is_empty());
    assert_ne!(a.gauge, b.gauge);
    assert_eq!(a.reduced, b.reduced);
    assert!(check_gauge_identity(&a.gauge, &sys, &a.reduced));
    assert!(check_gauge_identity(&b.gauge, &sys, &b.reduced));
}

#[test]
fn reduction_is_idempotent() {
    for (sys, opts) in [(eight_dim(), eight_dim_opts()), (hypergeometric(), ReductionOptions::default()), (heun(), ReductionOptions::default())] {
        let first = reduce_two_block(&sys, &opts).unwrap();
        let again = reduce_two_block(&first.reduced, &opts).unwrap();
        assert!(again.gauge.is_identity());
        assert_eq!(again.verdict(), "already reduced");
        assert_eq!(again.lie_dim_after, first.lie_dim_after);
        assert_eq!(again.reduced, first.reduced);
    }
}

#[test]
fn hypergeometric_integral_is_removed() {
    let sys = hypergeometric();
    let rep = reduce_two_block(&sys, &ReductionOptions { diag_galois_dim: Some(3), ..Default::default() }).unwrap();
    let p = rep.gauge.matrix();
    assert_eq!(p[(2, 0)], poly(&[-1, 3]).scale(&q(15, 44)));
    assert_eq!(p[(2, 1)], poly(&[0, -1, 1]).scale(&q(-9, 11)));
    assert!(rep.reduced.a().submatrix(2, 0, 1, 2).is_zero());
    assert_eq!((rep.lie_dim_before, rep.lie_dim_after), (6, 4));
    assert_eq!((rep.offdiag_dim_before, rep.offdiag_dim_after), (2, 0));
    let ind = independence_report(&rep);
    assert_eq!(ind.galois_dim, 3);
    let Some(IntegralVerdict::Dependent { relations }) = &ind.integrals else { panic!("expected dependence") };
    assert_eq!(relations[0].coefficients, vec![p[(2, 0)].clone(), p[(2, 1)].clone()]);
    assert!(ind.statements.iter().any(|s| s.starts_with("dependent: ∫ f dx =")));
}

#[test]
fn heun_integrals_are_independent() {
    let sys = heun();
    let rep = reduce_two_block(&sys, &ReductionOptions { diag_galois_dim: Some(3), ..Default::default() }).unwrap();
    assert!(rep.gauge.is_identity());
    assert_eq!(rep.obstructed.len(), 2);
    assert_eq!(rep.offdiag_dim_after, 2);
    let ind = independence_report(&rep);
    assert!(ind.certified);
    assert_eq!(ind.galois_dim, 5);
    assert_eq!(ind.integrals, Some(IntegralVerdict::Independent { count: 2 }));
    assert!(ind.statements.iter().any(|s| s == "both integrals algebraically independent"));
}

#[test]
fn four_dim_splits_are_already_reduced() {
    for groups in [vec![1, 3], vec![2, 2], vec![3, 1]] {
        let sys = four_dim_upper(groups.clone());
        let rep = reduce_two_block(&sys, &ReductionOptions::default()).unwrap();
        assert!(rep.gauge.is_identity(), "{groups:?}");
        assert_eq!(rep.verdict(), "already reduced");
        assert_eq!(rep.lie_dim_after, 4);
    }
    let rep = reduce_multi_block(&four_dim_upper(vec![1, 1, 1, 1]), &ReductionOptions::default()).unwrap();
    assert!(rep.gauge.is_identity());
    assert_eq!(rep.steps.iter().map(|s| s.offset).collect::<Vec<_>>(), vec![2, 1, 0]);
    assert_eq!(rep.lie_dim_after, 4);
    let ind = independence_report(&rep);
    assert_eq!(ind.generators, vec!["e^x", "ln(x)", "ln(x-1)", "dilog(x)"]);
    assert!(ind.statements.iter().any(|s| s == "dilog(x) is algebraically independent of e^x, ln(x), ln(x-1)"));
}

fn random_upper_gauge(rng: &mut ChaCha8Rng) -> GaugeMatrix {
    let mut p = RfMatrix::identity(4);
    for i in 0..4 {
        for j in i + 1..4 {
            let k = rng.gen_range(-3i64..=3);
            p[(i, j)] = match rng.gen_range(0..3) {
                0 => c(k),
                1 => poly(&[0, k]),
                _ => pf(&[(k, 1, 0, 1)]),
            };
        }
    }
    GaugeMatrix::new(p).unwrap()
}

#[test]
fn perturbed_four_dim_is_recovered() {
    let base = four_dim_upper(vec![1, 1, 1, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d1a);
    for _ in 0..4 {
        let g = random_upper_gauge(&mut rng);
        let pert = gauge_transform(&g, &base).unwrap();
        let rep = reduce_multi_block(&pert, &ReductionOptions::default()).unwrap();
        assert!(check_gauge_identity(&rep.gauge, &pert, &rep.reduced));
        assert_eq!(lie_dim(&rep.reduced).dim, 4);
    }
}

#[test]
fn block_diagonal_input_needs_no_gauge() {
    let a = two_block(&a1_four(), &RfMatrix::zeros(4, 4), &a1_four());
    let sys = DiffSystem::new(a, vec![4, 4], Orientation::Lower, true).unwrap();
    let rep = reduce_two_block(&sys, &ReductionOptions::default()).unwrap();
    assert!(rep.gauge.is_identity());
    assert!(rep.removed.is_empty() && rep.obstructed.is_empty());
}

#[test]
fn entry_checks() {
    let sys = eight_dim().with_diag_reduced(false);
    assert!(matches!(reduce_two_block(&sys, &ReductionOptions::default()), Err(Error::Assumption(_))));
    let irr = RatFunc::new(redform::exactfield::Poly::one(), redform::exactfield::Poly::from_ints(&[1, 0, 1]));
    let a = RfMatrix::from_rows(vec![vec![RatFunc::zero(), RatFunc::zero()], vec![irr, RatFunc::zero()]]);
    let sys = DiffSystem::new(a, vec![1, 1], Orientation::Lower, true).unwrap();
    let err = reduce_two_block(&sys, &ReductionOptions::default()).unwrap_err();
    assert!(matches!(&err, Error::Unsupported(m) if m.contains("non-rational singularity")), "{err}");
}
