use super::constraints::ConstraintSet;
use super::param::{ParamAffine, ParamAlloc, ParamId};
use super::scalar::{param_antiderivative_in, scalar_rational_solutions_in};
use super::ParamSolutionSpace;
use crate::error::{Error, Result};
use crate::exactfield::RatFunc;
use crate::linalg::RfMatrix;

fn apply_rows(m: &RfMatrix, f: &[ParamAffine], i: usize) -> ParamAffine {
    m.row(i).iter().zip(f).fold(ParamAffine::zero(), |acc, (a, v)| if a.is_zero() { acc } else { acc.add(&v.scale(a)) })
}

/// Residual `F' - M F - rhs` after constraint reduction.
pub fn system_residual(m: &RfMatrix, f: &[ParamAffine], rhs: &[ParamAffine], cs: &ConstraintSet) -> Vec<ParamAffine> {
    (0..f.len()).map(|i| cs.reduce(&f[i].derive().sub(&apply_rows(m, f, i)).sub(&rhs[i]))).collect()
}

/// `F' = M F + rhs` with `M` strictly triangular along `order` (each component
/// depends only on components earlier in `order`).
pub fn triangular_system_rational_solutions_in(
    m: &RfMatrix,
    order: &[usize],
    rhs: &[ParamAffine],
    base: &ConstraintSet,
    alloc: &mut ParamAlloc,
    labels: &dyn Fn(usize) -> String,
) -> Result<ParamSolutionSpace> {
    let n = m.rows();
    if order.len() != n || rhs.len() != n {
        return Err(Error::DimensionMismatch("order and rhs must match the matrix size".into()));
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    for i in 0..n {
        for j in 0..n {
            if !m[(i, j)].is_zero() && pos[j] >= pos[i] {
                return Err(Error::InvalidSystem(format!(
                    "component {} depends on component {} which is not solved earlier",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut cs = base.clone();
    let mut f: Vec<ParamAffine> = vec![ParamAffine::zero(); n];
    let mut new_params: Vec<ParamId> = Vec::new();
    for &i in order {
        let r = rhs[i].add(&apply_rows(m, &f, i));
        let s = param_antiderivative_in(&r, &cs, alloc, &labels(i));
        new_params.extend(&s.new_params);
        cs = s.constraints;
        if s.empty {
            return Ok(ParamSolutionSpace { particular: vec![ParamAffine::zero(); n], new_params, constraints: cs, empty: true });
        }
        f[i] = s.particular.into_iter().next().unwrap();
    }
    let f: Vec<ParamAffine> = f.iter().map(|v| cs.reduce(v)).collect();
    if system_residual(m, &f, rhs, &cs).iter().any(|r| !r.is_zero()) {
        return Err(Error::Certificate("triangular solution failed verification".into()));
    }
    Ok(ParamSolutionSpace { particular: f, new_params, constraints: cs, empty: false })
}

pub fn triangular_system_rational_solutions(
    m: &RfMatrix,
    order: &[usize],
    rhs: &[ParamAffine],
    alloc: &mut ParamAlloc,
) -> Result<ParamSolutionSpace> {
    triangular_system_rational_solutions_in(m, order, rhs, &ConstraintSet::new(), alloc, &|i| format!("c{}", i + 1))
}

/// Scalar equation equivalent to `F' = E F + b` via a cyclic vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicReduction {
    pub cyclic_vector: Vec<RatFunc>,
    /// `op[k]` multiplies `y^(k)`; monic.
    pub op: Vec<RatFunc>,
    pub rhs: ParamAffine,
    /// Rows `L_0, ..., L_{d-1}`.
    pub transform: RfMatrix,
    /// `w_k` with `y^(k) = L_k F + w_k`.
    pub shifts: Vec<ParamAffine>,
}

fn cyclic_candidates(d: usize) -> Vec<Vec<RatFunc>> {
    let mut out: Vec<Vec<RatFunc>> = (0..d)
        .rev()
        .map(|k| (0..d).map(|j| if j == k { RatFunc::one() } else { RatFunc::zero() }).collect())
        .collect();
    let mut xp = RatFunc::one();
    let mut poly = Vec::new();
    for _ in 0..d {
        poly.push(xp.clone());
        xp = &xp * &RatFunc::x();
    }
    out.push(poly);
    out
}

pub fn cyclic_reduction(e: &RfMatrix, b: &[ParamAffine]) -> Result<CyclicReduction> {
    let d = e.rows();
    for l0 in cyclic_candidates(d) {
        let mut ls = vec![l0.clone()];
        let mut ws = vec![ParamAffine::zero()];
        for k in 0..d {
            let lk = &ls[k];
            let next: Vec<RatFunc> = (0..d)
                .map(|j| (0..d).fold(lk[j].derive(), |acc, i| &acc + &(&lk[i] * &e[(i, j)])))
                .collect();
            let lb = lk.iter().zip(b).fold(ParamAffine::zero(), |acc, (l, v)| acc.add(&v.scale(l)));
            ws.push(ws[k].derive().add(&lb));
            ls.push(next);
        }
        let t = RfMatrix::from_rows(ls[..d].to_vec());
        let Ok(tinv) = t.inverse() else { continue };
        // L_d = Σ α_k L_k
        let ld = RfMatrix::from_rows(vec![ls[d].clone()]);
        let alpha = &ld * &tinv;
        let mut op: Vec<RatFunc> = (0..d).map(|k| -&alpha[(0, k)]).collect();
        op.push(RatFunc::one());
        let mut rhs = ws[d].clone();
        for k in 0..d {
            rhs = rhs.sub(&ws[k].scale(&alpha[(0, k)]));
        }
        return Ok(CyclicReduction { cyclic_vector: l0, op, rhs, transform: t, shifts: ws[..d].to_vec() });
    }
    Err(Error::Unsupported("no cyclic vector among the tried candidates".into()))
}

/// `F' = E F + b` for a full (coupled) matrix `E`, through a cyclic vector.
pub fn coupled_system_rational_solutions_in(
    e: &RfMatrix,
    b: &[ParamAffine],
    base: &ConstraintSet,
    alloc: &mut ParamAlloc,
) -> Result<(ParamSolutionSpace, CyclicReduction)> {
    let d = e.rows();
    let b: Vec<ParamAffine> = b.iter().map(|v| base.reduce(v)).collect();
    let cyc = cyclic_reduction(e, &b)?;
    let s = scalar_rational_solutions_in(&cyc.op, &cyc.rhs, base, alloc)?;
    if s.empty {
        let sp = ParamSolutionSpace { particular: vec![ParamAffine::zero(); d], new_params: s.new_params, constraints: s.constraints, empty: true };
        return Ok((sp, cyc));
    }
    let cs = s.constraints;
    let mut derivs = vec![s.particular[0].clone()];
    for k in 1..d {
        derivs.push(derivs[k - 1].derive());
    }
    let v: Vec<ParamAffine> = derivs.iter().zip(&cyc.shifts).map(|(y, w)| y.sub(w)).collect();
    let tinv = cyc.transform.inverse()?;
    let f: Vec<ParamAffine> = (0..d).map(|i| cs.reduce(&apply_rows(&tinv, &v, i))).collect();
    if system_residual(e, &f, &b, &cs).iter().any(|r| !r.is_zero()) {
        return Err(Error::Certificate("coupled solution failed verification".into()));
    }
    Ok((ParamSolutionSpace { particular: f, new_params: s.new_params, constraints: cs, empty: false }, cyc))
}

pub fn coupled_system_rational_solutions(e: &RfMatrix, b: &[ParamAffine], alloc: &mut ParamAlloc) -> Result<ParamSolutionSpace> {
    Ok(coupled_system_rational_solutions_in(e, b, &ConstraintSet::new(), alloc)?.0)
}

/// True if `op2 = c * op1` and `rhs2 = c * rhs1` for one nonzero rational function `c`.
pub fn proportional_equations(op1: &[RatFunc], rhs1: &RatFunc, op2: &[RatFunc], rhs2: &RatFunc) -> bool {
    if op1.len() != op2.len() {
        return false;
    }
    let Some(k) = op1.iter().position(|c| !c.is_zero()) else { return false };
    let Ok(c) = op2[k].checked_div(&op1[k]) else { return false };
    op1.iter().zip(op2).all(|(a, b)| &(a * &c) == b) && &(rhs1 * &c) == rhs2 && !c.is_zero()
}
