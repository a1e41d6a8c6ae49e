use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::adjoint::AdjointAction;
use crate::error::{Error, Result};
use crate::exactfield::{RatFunc, Q};
use crate::liealgebra::WeiNormanDecomp;
use crate::linalg::{QMatrix, RfMatrix, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagLevel {
    /// 1 for the joint kernel, increasing upwards.
    pub index: usize,
    /// Directions outside the kernel chain, solved as one coupled system.
    pub coupled: bool,
    pub start: usize,
    pub len: usize,
}

/// Adapted basis of an off-diagonal Ψ-space, top level first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub n1: usize,
    pub n2: usize,
    pub basis: Vec<QMatrix>,
    pub names: Vec<String>,
    pub levels: Vec<FlagLevel>,
    pub funcs: Vec<RatFunc>,
    pub shifts: Vec<Q>,
    /// Shifted constant parts `Ψᵢ − λᵢ` in the adapted basis.
    pub adapted_parts: Vec<QMatrix>,
    pub adapted_psi: RfMatrix,
}

impl Flag {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len).collect()
    }

    pub fn level_matrices(&self) -> Vec<Vec<QMatrix>> {
        self.levels.iter().map(|l| self.basis[l.start..l.start + l.len].to_vec()).collect()
    }

    /// Position of direction `k` in `levels`.
    pub fn level_of(&self, k: usize) -> usize {
        self.levels.iter().position(|l| k >= l.start && k < l.start + l.len).expect("direction in range")
    }

    /// 1-based position of direction `k` inside its level.
    pub fn position(&self, k: usize) -> usize {
        k - self.levels[self.level_of(k)].start + 1
    }

    pub fn coupled_len(&self) -> usize {
        self.levels.iter().filter(|l| l.coupled).map(|l| l.len).sum()
    }

    /// `Σ aᵢ λᵢ`, the diagonal of `adapted_psi` on nilpotent levels.
    pub fn shift_function(&self) -> RatFunc {
        self.funcs.iter().zip(&self.shifts).fold(RatFunc::zero(), |acc, (f, l)| &acc + &f.scale(l))
    }
}

fn parts_from_decomp(decomp: &WeiNormanDecomp, n1: usize, n2: usize) -> Vec<QMatrix> {
    decomp
        .mats
        .iter()
        .map(|m| {
            let m1 = m.submatrix(0, 0, n1, n1);
            let m2 = m.submatrix(n1, n1, n2, n2);
            &m2.kron(&QMatrix::identity(n1)) - &QMatrix::identity(n2).kron(&m1.transpose())
        })
        .collect()
}

fn checked_parts(psi: &AdjointAction, decomp: &WeiNormanDecomp) -> Result<Vec<QMatrix>> {
    let n = psi.n1 + psi.n2;
    if decomp.mats.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::DimensionMismatch(format!("diagonal decomposition must be {n}x{n}")));
    }
    let parts = parts_from_decomp(decomp, psi.n1, psi.n2);
    let sum = WeiNormanDecomp { funcs: decomp.funcs.clone(), mats: parts.clone() }.reconstruct(psi.dim(), psi.dim());
    if sum != psi.psi {
        return Err(Error::InvalidSystem("decomposition does not reproduce the adjoint action".into()));
    }
    Ok(parts)
}

/// Column-major order over row-stacked `n₂×n₁` coordinates.
fn column_major(n1: usize, n2: usize) -> Vec<usize> {
    (0..n1).flat_map(|c| (0..n2).map(move |r| r * n1 + c)).collect()
}

fn normalize(v: &[Q], order: &[usize]) -> Vec<Q> {
    match order.iter().find(|&&i| !v[i].is_zero()) {
        Some(&i) => {
            let inv = v[i].recip();
            v.iter().map(|c| c * &inv).collect()
        }
        None => v.to_vec(),
    }
}

/// RREF basis of `vs` with pivots taken in `order`.
fn ordered_basis(d: usize, vs: &[Vec<Q>], order: &[usize]) -> Vec<Vec<Q>> {
    let perm: Vec<Vec<Q>> = vs.iter().map(|v| order.iter().map(|&i| v[i].clone()).collect()).collect();
    Span::from_vectors(d, &perm)
        .basis()
        .iter()
        .map(|w| {
            let mut v = vec![Q::zero(); d];
            for (k, &i) in order.iter().enumerate() {
                v[i] = w[k].clone();
            }
            v
        })
        .collect()
}

fn unit(d: usize, i: usize) -> Vec<Q> {
    (0..d).map(|k| if k == i { Q::one() } else { Q::zero() }).collect()
}

/// `K₁ ⊊ K₂ ⊊ …` with `K_{j+1} = {v : Tᵢ v ∈ K_j for all i}`.
fn kernel_chain(ts: &[QMatrix], d: usize) -> Vec<Span> {
    let mut chain: Vec<Span> = Vec::new();
    let mut cur = Span::new(d);
    loop {
        let ann: Vec<Vec<Q>> = if cur.dim() == 0 {
            (0..d).map(|i| unit(d, i)).collect()
        } else {
            QMatrix::from_rows(cur.basis().to_vec()).nullspace()
        };
        if ann.is_empty() {
            break;
        }
        let rows: Vec<Vec<Q>> = ts
            .iter()
            .flat_map(|t| ann.iter().map(move |c| (0..d).map(|j| (0..d).map(|i| &c[i] * &t[(i, j)]).sum()).collect()))
            .collect();
        let next = if rows.is_empty() { (0..d).map(|i| unit(d, i)).collect() } else { QMatrix::from_rows(rows).nullspace() };
        let span = Span::from_vectors(d, &next);
        if span.dim() == cur.dim() {
            break;
        }
        chain.push(span.clone());
        cur = span;
    }
    chain
}

struct Working {
    d: usize,
    funcs: Vec<RatFunc>,
    parts: Vec<QMatrix>,
    /// Columns map working coordinates to row-stacked `vec` coordinates.
    embed: QMatrix,
    order: Vec<usize>,
}

/// Chosen vectors per level, top first, with the coupled flag.
type Levels = Vec<(usize, bool, Vec<Vec<Q>>)>;

fn construct_levels(w: &Working, ts: &[QMatrix], chain: &[Span]) -> Levels {
    let d = w.d;
    let mu = chain.len();
    let mut out: Levels = Vec::new();
    let top = chain.last().map_or(0, |s| s.dim());
    if top < d {
        let mut sel = chain.last().cloned().unwrap_or_else(|| Span::new(d));
        let chosen: Vec<Vec<Q>> = w.order.iter().map(|&i| unit(d, i)).filter(|u| sel.insert(u)).collect();
        out.push((mu + 1, true, chosen));
    }
    let mut above: Vec<Vec<Q>> = Vec::new();
    for j in (0..mu).rev() {
        let kj = &chain[j];
        let mut sel = if j > 0 { chain[j - 1].clone() } else { Span::new(d) };
        let mut cands: Vec<Vec<Q>> = Vec::new();
        for v in &above {
            for t in ts {
                cands.push(normalize(&t.mul_vec(v), &w.order));
            }
        }
        cands.extend(ordered_basis(d, kj.basis(), &w.order));
        cands.extend(w.order.iter().map(|&i| unit(d, i)));
        let mut chosen = Vec::new();
        for c in cands {
            if c.iter().any(|x| !x.is_zero()) && kj.contains(&c) && sel.insert(&c) {
                chosen.push(c);
            }
        }
        above = chosen.clone();
        out.push((j + 1, false, chosen));
    }
    out
}

/// Groups the given working basis by kernel level; descending index inside a level.
fn given_levels(d: usize, chain: &[Span]) -> Result<Levels> {
    let lvl: Vec<usize> = (0..d)
        .map(|l| chain.iter().position(|s| s.contains(&unit(d, l))).map_or(chain.len() + 1, |j| j + 1))
        .collect();
    for (j, s) in chain.iter().enumerate() {
        if lvl.iter().filter(|&&x| x <= j + 1).count() != s.dim() {
            return Err(Error::InvalidSystem(format!("given basis is not adapted to kernel level {}", j + 1)));
        }
    }
    let mut out: Levels = Vec::new();
    for j in (1..=chain.len() + 1).rev() {
        let members: Vec<Vec<Q>> = (0..d).rev().filter(|&l| lvl[l] == j).map(|l| unit(d, l)).collect();
        if !members.is_empty() {
            out.push((j, j == chain.len() + 1, members));
        }
    }
    Ok(out)
}

fn build(psi: &AdjointAction, w: Working, given: bool, first_name: usize, strict: bool) -> Result<Flag> {
    let d = w.d;
    let nq = Q::from_integer(BigInt::from(d.max(1)));
    let shifts: Vec<Q> = w.parts.iter().map(|p| p.trace() / &nq).collect();
    let ts: Vec<QMatrix> = w.parts.iter().zip(&shifts).map(|(p, l)| p - &QMatrix::identity(d).scale(l)).collect();
    let chain = kernel_chain(&ts, d);
    let reached = chain.last().map_or(0, |s| s.dim());
    if strict && reached < d {
        let bad = ts.iter().position(|t| !t.is_nilpotent()).map_or_else(
            || "the joint action".to_string(),
            |i| format!("the part along {}", w.funcs[i]),
        );
        return Err(Error::Unsupported(format!(
            "adjoint action is not nilpotent modulo scalars: {bad} is not nilpotent; {} of {d} directions lie outside the kernel flag",
            d - reached
        )));
    }
    let levels = if given { given_levels(d, &chain)? } else { construct_levels(&w, &ts, &chain) };

    let mut vectors: Vec<Vec<Q>> = Vec::new();
    let mut flag_levels = Vec::new();
    for (index, coupled, vs) in &levels {
        flag_levels.push(FlagLevel { index: *index, coupled: *coupled, start: vectors.len(), len: vs.len() });
        vectors.extend(vs.iter().cloned());
    }
    if vectors.len() != d {
        return Err(Error::Certificate(format!("adapted basis has {} vectors for a {d}-dimensional space", vectors.len())));
    }

    let names: Vec<String> = if given {
        vectors.iter().map(|v| format!("N{}", first_name + v.iter().position(|c| !c.is_zero()).unwrap())).collect()
    } else {
        let mut names = vec![String::new(); d];
        let mut next = first_name;
        for l in flag_levels.iter().rev() {
            for k in (l.start..l.start + l.len).rev() {
                names[k] = format!("N{next}");
                next += 1;
            }
        }
        names
    };

    let b = QMatrix::from_fn(d, d, |i, j| vectors[j][i].clone());
    let binv = b.inverse()?;
    let adapted_parts: Vec<QMatrix> = ts.iter().map(|t| &(&binv * t) * &b).collect();
    let level_pos: Vec<usize> = (0..d).map(|k| flag_levels.iter().position(|l| k >= l.start && k < l.start + l.len).unwrap()).collect();
    for t in &adapted_parts {
        for k in 0..d {
            for l in 0..d {
                let both_coupled = flag_levels[level_pos[k]].coupled && flag_levels[level_pos[l]].coupled;
                if !t[(k, l)].is_zero() && level_pos[k] <= level_pos[l] && !both_coupled {
                    return Err(Error::Certificate("adapted adjoint action is not strictly block-triangular".into()));
                }
            }
        }
    }
    let mut adapted_psi = RfMatrix::zeros(d, d);
    for ((f, t), l) in w.funcs.iter().zip(&adapted_parts).zip(&shifts) {
        adapted_psi = &adapted_psi + &(t + &QMatrix::identity(d).scale(l)).to_rf().scale(f);
    }
    let basis: Vec<QMatrix> = vectors.iter().map(|v| QMatrix::unvec_rows(&w.embed.mul_vec(v), psi.n2, psi.n1)).collect();
    Ok(Flag { n1: psi.n1, n2: psi.n2, basis, names, levels: flag_levels, funcs: w.funcs, shifts, adapted_parts, adapted_psi })
}

fn full_working(psi: &AdjointAction, decomp: &WeiNormanDecomp) -> Result<Working> {
    let parts = checked_parts(psi, decomp)?;
    let n = psi.dim();
    Ok(Working { d: n, funcs: decomp.funcs.clone(), parts, embed: QMatrix::identity(n), order: column_major(psi.n1, psi.n2) })
}

/// Kernel-chain flag of the whole off-diagonal space; rejects a non-nilpotent action.
pub fn flag_filtration(psi: &AdjointAction, decomp: &WeiNormanDecomp) -> Result<Flag> {
    build(psi, full_working(psi, decomp)?, false, 1, true)
}

/// As [`flag_filtration`], but directions outside the kernel chain form a coupled top level.
pub fn flag_filtration_general(psi: &AdjointAction, decomp: &WeiNormanDecomp) -> Result<Flag> {
    build(psi, full_working(psi, decomp)?, false, 1, false)
}

/// Flag of the Ψ-invariant span of `basis`, keeping the given basis; names start at `N{first_name}`.
pub fn flag_on_subspace(psi: &AdjointAction, decomp: &WeiNormanDecomp, basis: &[QMatrix], first_name: usize) -> Result<Flag> {
    checked_parts(psi, decomp)?;
    let parts = psi.restrict_parts(basis)?;
    let d = basis.len();
    let embed = QMatrix::from_fn(psi.dim(), d, |i, j| basis[j].vec_rows()[i].clone());
    let w = Working { d, funcs: psi.funcs.clone(), parts, embed, order: (0..d).collect() };
    build(psi, w, true, first_name, false)
}
