use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use super::constraints::ConstraintSet;
use super::param::{ParamAffine, ParamAlloc, ParamId};
use super::ParamSolutionSpace;
use crate::error::{Error, Result};
use crate::exactfield::{factor, hermite_reduce, Poly, RatFunc, Q};

/// Hermite split of every component: `(integral, remainder)`.
pub fn hermite_split(rhs: &ParamAffine) -> (ParamAffine, ParamAffine) {
    let hc = hermite_reduce(&rhs.constant);
    let mut integral = ParamAffine::constant(hc.integral);
    let mut rem = ParamAffine::constant(hc.remainder);
    for (p, f) in rhs.terms() {
        let h = hermite_reduce(f);
        integral.add_term(*p, &h.integral);
        rem.add_term(*p, &h.remainder);
    }
    (integral, rem)
}

/// Solutions of `f' = rhs` on top of the constraints in `base`.
pub fn param_antiderivative_in(rhs: &ParamAffine, base: &ConstraintSet, alloc: &mut ParamAlloc, label: &str) -> ParamSolutionSpace {
    let rhs = base.reduce(rhs);
    let (integral, rem) = hermite_split(&rhs);
    let mut cs = base.clone();
    cs.add_rows(&rem.zero_rows());
    let c = alloc.fresh(label);
    let particular = cs.reduce(&integral.add(&ParamAffine::param(c)));
    let empty = !cs.is_consistent();
    let space = ParamSolutionSpace { particular: vec![particular], new_params: vec![c], constraints: cs, empty };
    if !space.empty {
        debug_assert!(space.constraints.reduce(&space.particular[0].derive().sub(&rhs)).is_zero());
    }
    space
}

/// Solutions of `f' = rhs`: Hermite parts plus a fresh integration constant.
pub fn param_antiderivative(rhs: &ParamAffine, alloc: &mut ParamAlloc) -> ParamSolutionSpace {
    param_antiderivative_in(rhs, &ConstraintSet::new(), alloc, "c")
}

fn falling(n: usize) -> Poly {
    (0..n).fold(Poly::one(), |acc, k| &acc * &Poly::linear_root(&Q::from_integer(BigInt::from(k))))
}

fn integer_roots(p: &Poly) -> Vec<i64> {
    p.rational_roots().into_iter().filter(|r| r.is_integer()).map(|r| i64::try_from(r.to_integer()).expect("root fits in i64")).collect()
}

/// Applies `Σ coeffs[i] * y^(i)`.
pub fn apply_operator(coeffs: &[RatFunc], y: &RatFunc) -> RatFunc {
    let mut d = y.clone();
    let mut acc = RatFunc::zero();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            d = d.derive();
        }
        if !c.is_zero() {
            acc = &acc + &(c * &d);
        }
    }
    acc
}

pub fn apply_operator_affine(coeffs: &[RatFunc], y: &ParamAffine) -> ParamAffine {
    let mut d = y.clone();
    let mut acc = ParamAffine::zero();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            d = d.derive();
        }
        if !c.is_zero() {
            acc = acc.add(&d.scale(c));
        }
    }
    acc
}

/// Denominator and numerator-degree bounds for rational solutions of `L y = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBounds {
    /// `(pole, order bound)` for each finite singular point.
    pub poles: Vec<(Q, usize)>,
    /// Bound on `deg y`, `None` if only `y = 0` is possible at infinity.
    pub degree: Option<i64>,
}

impl SolutionBounds {
    pub fn denominator(&self) -> Poly {
        self.poles.iter().fold(Poly::one(), |acc, (a, e)| &acc * &Poly::linear_root(a).pow(*e as u32))
    }
}

pub fn solution_bounds(op: &[RatFunc], rhs: &ParamAffine) -> Result<SolutionBounds> {
    let n = op.len().checked_sub(1).ok_or_else(|| Error::InvalidSystem("empty operator".into()))?;
    if op[n].is_zero() {
        return Err(Error::InvalidSystem("leading operator coefficient is zero".into()));
    }
    let d0 = op.iter().fold(Poly::one(), |acc, f| {
        let g = acc.gcd(f.den());
        &acc * &f.den().exact_div(&g).unwrap()
    });
    let p: Vec<Poly> = op.iter().map(|c| (c.num() * &d0).exact_div(c.den()).unwrap()).collect();
    let rhs = rhs.scale(&RatFunc::from_poly(d0.clone()));
    let rhs_nonzero: Vec<&RatFunc> = rhs.components().into_iter().filter(|f| !f.is_zero()).collect();

    let mut sing: BTreeSet<Q> = BTreeSet::new();
    let mut polys = vec![p[n].clone()];
    polys.extend(rhs_nonzero.iter().map(|f| f.den().clone()));
    for poly in &polys {
        for f in factor(poly).factors {
            if f.poly.degree() != Some(1) {
                return Err(Error::Unsupported(format!("non-rational singularity: irreducible factor {} has no root in Q", f.poly)));
            }
            sing.insert(-f.poly.coeff(0));
        }
    }

    let mut poles = Vec::new();
    for a in sing {
        let vals: Vec<(usize, i64, Q)> = p
            .iter()
            .enumerate()
            .filter(|(_, pi)| !pi.is_zero())
            .map(|(i, pi)| {
                let v = pi.order_at(&a).unwrap();
                (i, v as i64 - i as i64, pi.shift(&a).coeff(v))
            })
            .collect();
        let m = vals.iter().map(|(_, s, _)| *s).min().unwrap();
        let ind = vals
            .iter()
            .filter(|(_, s, _)| *s == m)
            .fold(Poly::zero(), |acc, (i, _, lc)| &acc + &falling(*i).scale(lc));
        let mut e: i64 = 0;
        for r in integer_roots(&ind) {
            e = e.max(-r);
        }
        if let Some(o) = rhs_nonzero.iter().map(|f| f.order_at(&a).unwrap()).min() {
            e = e.max(m - o);
        }
        if e > 0 {
            poles.push((a, e as usize));
        }
    }

    let vals: Vec<(usize, i64, Q)> = p
        .iter()
        .enumerate()
        .filter(|(_, pi)| !pi.is_zero())
        .map(|(i, pi)| (i, pi.degree().unwrap() as i64 - i as i64, pi.lc()))
        .collect();
    let m = vals.iter().map(|(_, s, _)| *s).max().unwrap();
    let ind = vals.iter().filter(|(_, s, _)| *s == m).fold(Poly::zero(), |acc, (i, _, lc)| &acc + &falling(*i).scale(lc));
    let mut degree: Option<i64> = integer_roots(&ind).into_iter().max();
    if let Some(d) = rhs_nonzero.iter().map(|f| f.degree().unwrap()).max() {
        degree = Some(degree.map_or(d - m, |x| x.max(d - m)));
    }
    Ok(SolutionBounds { poles, degree })
}

/// Rational solutions of `Σ op[i] y^(i) = rhs` on top of `base`.
pub fn scalar_rational_solutions_in(
    op: &[RatFunc],
    rhs: &ParamAffine,
    base: &ConstraintSet,
    alloc: &mut ParamAlloc,
) -> Result<ParamSolutionSpace> {
    let rhs = base.reduce(rhs);
    let bounds = solution_bounds(op, &rhs)?;
    let den = bounds.denominator();
    let dden = den.degree().unwrap() as i64;
    let top = bounds.degree.map(|d| d + dden).filter(|&d| d >= 0);
    let mut ansatz = ParamAffine::zero();
    let mut new_params: Vec<ParamId> = Vec::new();
    if let Some(top) = top {
        for j in 0..=top as usize {
            let u = alloc.fresh(format!("u{}", alloc.len()));
            new_params.push(u);
            ansatz.add_term(u, &RatFunc::new(Poly::monomial(Q::one(), j), den.clone()));
        }
    }
    let residual = apply_operator_affine(op, &ansatz).sub(&rhs);
    let mut cs = base.clone();
    cs.add_rows(&residual.zero_rows());
    let empty = !cs.is_consistent();
    let particular = if empty { ParamAffine::zero() } else { cs.reduce(&ansatz) };
    if !empty {
        let check = cs.reduce(&apply_operator_affine(op, &particular).sub(&rhs));
        if !check.is_zero() {
            return Err(Error::Certificate("scalar rational solution failed verification".into()));
        }
    }
    Ok(ParamSolutionSpace { particular: vec![particular], new_params, constraints: cs, empty })
}

pub fn scalar_rational_solutions(op: &[RatFunc], rhs: &ParamAffine, alloc: &mut ParamAlloc) -> Result<ParamSolutionSpace> {
    scalar_rational_solutions_in(op, rhs, &ConstraintSet::new(), alloc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::q;

    #[test]
    fn antiderivative_of_inverse_square() {
        let mut al = ParamAlloc::new();
        let s = param_antiderivative(&ParamAffine::constant(RatFunc::pole(q(1, 1), &q(0, 1), 2)), &mut al);
        assert!(!s.empty);
        assert!(s.constraints.is_empty());
        let c = s.new_params[0];
        assert_eq!(s.particular[0], ParamAffine::from_parts(RatFunc::pole(q(-1, 1), &q(0, 1), 1), [(c, RatFunc::one())]));
    }

    #[test]
    fn constant_solutions_of_derivative() {
        let mut al = ParamAlloc::new();
        let op = [RatFunc::zero(), RatFunc::one()];
        let s = scalar_rational_solutions(&op, &ParamAffine::zero(), &mut al).unwrap();
        assert!(!s.empty);
        assert_eq!(s.particular[0].params().len(), 1);
        assert!(s.particular[0].constant.is_zero());
    }

    #[test]
    fn rejects_irrational_poles() {
        let mut al = ParamAlloc::new();
        let op = [RatFunc::new(Poly::one(), Poly::from_ints(&[1, 0, 1])), RatFunc::one()];
        let e = scalar_rational_solutions(&op, &ParamAffine::zero(), &mut al).unwrap_err();
        assert!(matches!(e, Error::Unsupported(m) if m.contains("x^2 + 1")));
    }

    #[test]
    fn euler_operator_bounds() {
        // x^2 y'' - 2 y = 0 has y = x^2 and y = 1/x
        let mut al = ParamAlloc::new();
        let op = [RatFunc::constant(q(-2, 1)), RatFunc::zero(), RatFunc::from_poly(Poly::from_ints(&[0, 0, 1]))];
        let s = scalar_rational_solutions(&op, &ParamAffine::zero(), &mut al).unwrap();
        let free: Vec<ParamId> = s.particular[0].params();
        assert_eq!(free.len(), 2);
    }
}
