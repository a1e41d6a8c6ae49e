use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::adjoint::{vec_rows_rf, AdjointAction};
use super::flag::{flag_filtration_general, flag_on_subspace, Flag};
use crate::diffsys::{gauge_transform, series_gauge_check, DiffSystem, GaugeMatrix, Orientation};
use crate::error::{Error, Result};
use crate::exactfield::{coeff_basis, factor, RatFunc, Q};
use crate::liealgebra::{lie_dim_matrix, wei_norman_matrix, LieDim};
use crate::linalg::{QMatrix, RfMatrix};
use crate::ratsolve::{
    coupled_system_rational_solutions_in, hermite_split, scalar_rational_solutions_in, ConstraintSet, LinearRow, ParamAffine,
    ParamAlloc, ParamId,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BranchRule {
    /// Remove directions greedily in adapted-basis order.
    #[default]
    Lex,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FreeValues {
    #[default]
    Zero,
    /// Small random rationals from a fixed seed.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOptions {
    pub branch: BranchRule,
    pub free_values: FreeValues,
    /// Ψ-invariant decomposition of the off-diagonal space (south-west blocks, lower orientation).
    pub summands: Option<Vec<Vec<QMatrix>>>,
    /// Summands to reduce; all when `None`.
    pub active: Option<Vec<usize>>,
    /// Series oracle order; 0 skips it.
    pub series_order: usize,
    /// Asserted dimension of the Galois group of the diagonal part.
    pub diag_galois_dim: Option<usize>,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            branch: BranchRule::Lex,
            free_values: FreeValues::Zero,
            summands: None,
            active: None,
            series_order: 12,
            diag_galois_dim: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionStatus {
    /// No coupling along this direction at any stage.
    Absent,
    Removed,
    Obstructed,
    /// In a summand that was not reduced.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionReport {
    pub name: String,
    pub summand: usize,
    /// Flag level, 1 at the bottom.
    pub level: usize,
    pub position: usize,
    pub coupled: bool,
    pub matrix: QMatrix,
    pub status: DirectionStatus,
    /// Coordinate of the original coupling.
    pub coupling: RatFunc,
    /// Gauge coefficient as an affine family in the parameters.
    pub family: ParamAffine,
    pub value: RatFunc,
    pub residual: RatFunc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelLog {
    pub step: usize,
    pub summand: usize,
    pub level: usize,
    pub coupled: bool,
    /// Constraints whose pivot appeared at this level, reduced at the end of the level.
    pub rows: Vec<LinearRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchChoice {
    pub kept: String,
    pub excluded: String,
    /// Rows added when `kept` was removed.
    pub kept_rows: Vec<LinearRow>,
    /// Rows that would have removed `excluded` instead.
    pub alternative_rows: Vec<LinearRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCheck {
    pub point: Q,
    pub order: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerStep {
    /// First row of the corner in lower orientation.
    pub offset: usize,
    pub blocks: (usize, usize),
    pub gauge_is_identity: bool,
    pub removed: Vec<String>,
    pub obstructed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub original: DiffSystem,
    pub reduced: DiffSystem,
    pub gauge: GaugeMatrix,
    pub lie_before: LieDim,
    pub lie_after: LieDim,
    pub lie_dim_before: usize,
    pub lie_dim_after: usize,
    /// `dim(Lie ∩ 𝔥_sub)` before and after.
    pub offdiag_dim_before: usize,
    pub offdiag_dim_after: usize,
    pub diag_lie_dim: usize,
    pub diag_galois_dim: Option<usize>,
    pub params: ParamAlloc,
    pub constraints: ConstraintSet,
    pub free_params: Vec<ParamId>,
    pub assignment: BTreeMap<ParamId, Q>,
    pub constraints_log: Vec<LevelLog>,
    pub directions: Vec<DirectionReport>,
    pub removed: Vec<String>,
    pub obstructed: Vec<String>,
    pub branch_choices: Vec<BranchChoice>,
    pub steps: Vec<CornerStep>,
    pub diag_reduced_assumed: bool,
    pub residual_in_diag_span: bool,
    pub series_check: Option<SeriesCheck>,
}

impl ReductionReport {
    pub fn verdict(&self) -> &'static str {
        if self.gauge.is_identity() {
            "already reduced"
        } else {
            "reduced"
        }
    }

    pub fn direction(&self, name: &str) -> Option<&DirectionReport> {
        self.directions.iter().find(|d| d.name == name)
    }

    /// Logged constraints as text, e.g. `c3,1 = 1`.
    pub fn constraint_strings(&self) -> Vec<String> {
        self.constraints_log.iter().flat_map(|l| l.rows.iter().map(|r| r.display(&self.params))).collect()
    }

    pub fn envelope_certified(&self) -> bool {
        self.lie_before.basis.envelope_certified && self.lie_after.basis.envelope_certified
    }
}

struct DirState {
    rhs: ParamAffine,
    f: ParamAffine,
    r: ParamAffine,
    status: DirectionStatus,
}

struct Cascade {
    flag: Flag,
    summand: usize,
    active: bool,
    coords: Vec<RatFunc>,
    dirs: Vec<DirState>,
}

struct Engine<'a> {
    alloc: &'a mut ParamAlloc,
    cs: ConstraintSet,
    logs: Vec<LevelLog>,
    branches: Vec<BranchChoice>,
    /// Constraint set before each removal that added rows.
    snapshots: Vec<(String, ConstraintSet, Vec<LinearRow>)>,
    prefix: String,
    step: usize,
}

/// Outcome of one level: parametrized gauge coefficients for its directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStep {
    pub level: usize,
    pub coefficients: Vec<(String, ParamAffine)>,
    pub added: Vec<LinearRow>,
}

fn rows_of(rem: &ParamAffine) -> Vec<LinearRow> {
    rem.zero_rows()
}

impl Engine<'_> {
    fn rhs_for(c: &Cascade, k: usize, processed: &[bool]) -> ParamAffine {
        let mut rhs = ParamAffine::constant(c.coords[k].clone());
        for l in 0..c.flag.dim() {
            if l != k && processed[l] {
                let a = &c.flag.adapted_psi[(k, l)];
                if !a.is_zero() {
                    rhs = rhs.add(&c.dirs[l].f.scale(a));
                }
            }
        }
        rhs
    }

    fn reduce_level(&mut self, c: &mut Cascade, li: usize, processed: &mut [bool]) -> Result<LevelStep> {
        let level = c.flag.levels[li].clone();
        let before: BTreeSet<ParamId> = self.cs.rows().filter_map(|r| r.pivot()).collect();
        let range: Vec<usize> = (level.start..level.start + level.len).collect();
        if level.coupled {
            let b: Vec<ParamAffine> = range.iter().map(|&k| Self::rhs_for(c, k, processed)).collect();
            let e = RfMatrix::from_fn(range.len(), range.len(), |i, j| c.flag.adapted_psi[(range[i], range[j])].clone());
            let (space, _) = coupled_system_rational_solutions_in(&e, &b, &self.cs, self.alloc)?;
            for (i, &k) in range.iter().enumerate() {
                let red = self.cs.reduce(&b[i]);
                c.dirs[k].rhs = b[i].clone();
                if space.empty {
                    c.dirs[k].status = DirectionStatus::Obstructed;
                    c.dirs[k].r = red;
                } else {
                    c.dirs[k].status = DirectionStatus::Removed;
                    c.dirs[k].f = space.particular[i].clone();
                }
            }
            if !space.empty {
                self.cs = space.constraints;
            }
        } else {
            let lambda = c.flag.shift_function();
            for &k in &range {
                let rhs = Self::rhs_for(c, k, processed);
                let red = self.cs.reduce(&rhs);
                let name = c.flag.names[k].clone();
                c.dirs[k].rhs = rhs.clone();
                if lambda.is_zero() {
                    let (g, rem) = hermite_split(&red);
                    let rows = rows_of(&rem);
                    match self.cs.try_extend(&rows) {
                        Some((ncs, added)) => {
                            if !added.is_empty() {
                                self.snapshots.push((name.clone(), self.cs.clone(), added));
                            }
                            self.cs = ncs;
                            c.dirs[k].status = DirectionStatus::Removed;
                        }
                        None => {
                            c.dirs[k].status = DirectionStatus::Obstructed;
                            c.dirs[k].r = rem;
                            self.log_branch(&name, &rhs);
                        }
                    }
                    let label = format!("{}c{},{}", self.prefix, level.index, c.flag.position(k));
                    let p = self.alloc.fresh(label);
                    c.dirs[k].f = g.add(&ParamAffine::param(p));
                } else {
                    let op = [-&lambda, RatFunc::one()];
                    let space = scalar_rational_solutions_in(&op, &red, &self.cs, self.alloc)?;
                    if space.empty {
                        c.dirs[k].status = DirectionStatus::Obstructed;
                        c.dirs[k].r = red;
                    } else {
                        c.dirs[k].status = DirectionStatus::Removed;
                        c.dirs[k].f = space.particular[0].clone();
                        self.cs = space.constraints;
                    }
                }
            }
        }
        for &k in &range {
            processed[k] = true;
        }
        let added: Vec<LinearRow> =
            self.cs.rows().filter(|r| r.pivot().is_some_and(|p| !before.contains(&p))).cloned().collect();
        self.logs.push(LevelLog { step: self.step, summand: c.summand, level: level.index, coupled: level.coupled, rows: added.clone() });
        Ok(LevelStep {
            level: level.index,
            coefficients: range.iter().map(|&k| (c.flag.names[k].clone(), c.dirs[k].f.clone())).collect(),
            added,
        })
    }

    fn log_branch(&mut self, excluded: &str, rhs: &ParamAffine) {
        for (kept, snap, kept_rows) in self.snapshots.iter().rev() {
            let (_, rem) = hermite_split(&snap.reduce(rhs));
            if let Some((_, alt)) = snap.try_extend(&rows_of(&rem)) {
                self.branches.push(BranchChoice {
                    kept: kept.clone(),
                    excluded: excluded.to_string(),
                    kept_rows: kept_rows.clone(),
                    alternative_rows: alt,
                });
                return;
            }
        }
    }
}

fn free_assignment(alloc: &ParamAlloc, cs: &ConstraintSet, free: FreeValues) -> (Vec<ParamId>, BTreeMap<ParamId, Q>) {
    let free_ids: Vec<ParamId> = alloc.ids().filter(|p| !cs.is_pivot(*p)).collect();
    let mut vals = BTreeMap::new();
    if let FreeValues::Seeded(seed) = free {
        for p in &free_ids {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (u64::from(p.0) << 32));
            vals.insert(*p, Q::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=6).into()));
        }
    }
    (free_ids, cs.assignment(&vals))
}

struct CoreRun {
    gauge: GaugeMatrix,
    reduced: DiffSystem,
    directions: Vec<DirectionReport>,
}

fn build_cascades(sys: &DiffSystem, psi: &AdjointAction, opts: &ReductionOptions) -> Result<Vec<Cascade>> {
    let n1 = sys.blocks()[0];
    let decomp = wei_norman_matrix(&sys.diag_part());
    let flags: Vec<Flag> = match &opts.summands {
        None => vec![flag_filtration_general(psi, &decomp)?],
        Some(sums) => {
            let mut first = 1;
            let mut out = Vec::new();
            for s in sums {
                if s.iter().any(|m| m.rows() != psi.n2 || m.cols() != psi.n1) {
                    return Err(Error::DimensionMismatch(format!("summand matrices must be {}x{}", psi.n2, psi.n1)));
                }
                out.push(flag_on_subspace(psi, &decomp, s, first)?);
                first += s.len();
            }
            out
        }
    };
    let all: Vec<&QMatrix> = flags.iter().flat_map(|f| f.basis.iter()).collect();
    let n = psi.dim();
    if all.len() != n {
        return Err(Error::InvalidSystem(format!("summands span {} of {n} off-diagonal directions", all.len())));
    }
    let g = QMatrix::from_fn(n, n, |i, j| all[j].vec_rows()[i].clone());
    let ginv = g.inverse().map_err(|_| Error::InvalidSystem("summands are not independent".into()))?;
    let s = sys.a().submatrix(n1, 0, psi.n2, n1);
    let coords = ginv.to_rf().mul_vec(&vec_rows_rf(&s));
    let mut start = 0;
    let mut out = Vec::new();
    for (i, flag) in flags.into_iter().enumerate() {
        let d = flag.dim();
        let active = opts.active.as_ref().is_none_or(|a| a.contains(&i));
        let dirs = (0..d)
            .map(|_| DirState {
                rhs: ParamAffine::zero(),
                f: ParamAffine::zero(),
                r: ParamAffine::zero(),
                status: DirectionStatus::Skipped,
            })
            .collect();
        out.push(Cascade { flag, summand: i, active, coords: coords[start..start + d].to_vec(), dirs });
        start += d;
    }
    Ok(out)
}

fn run_two_block(sys: &DiffSystem, opts: &ReductionOptions, eng: &mut Engine) -> Result<CoreRun> {
    let n1 = sys.blocks()[0];
    let n = sys.dim();
    let psi = AdjointAction::from_blocks(&sys.diag_block(0), &sys.diag_block(1))?;
    let mut cascades = build_cascades(sys, &psi, opts)?;
    for c in cascades.iter_mut().filter(|c| c.active) {
        let mut processed = vec![false; c.flag.dim()];
        for li in 0..c.flag.levels.len() {
            eng.reduce_level(c, li, &mut processed)?;
        }
    }
    let (_, assign) = free_assignment(eng.alloc, &eng.cs, opts.free_values);

    let mut b = RfMatrix::zeros(psi.n2, n1);
    let mut predicted: Vec<RatFunc> = Vec::new();
    let mut directions = Vec::new();
    for c in &cascades {
        for k in 0..c.flag.dim() {
            let st = &c.dirs[k];
            let value = if c.active { st.f.eval(&assign) } else { RatFunc::zero() };
            let residual = if c.active { st.r.eval(&assign) } else { c.coords[k].clone() };
            if !value.is_zero() {
                b = &b + &c.flag.basis[k].to_rf().scale(&value);
            }
            let status = match st.status {
                DirectionStatus::Removed if st.rhs.eval(&assign).is_zero() => DirectionStatus::Absent,
                s => s,
            };
            predicted.push(residual.clone());
            let li = c.flag.level_of(k);
            directions.push(DirectionReport {
                name: format!("{}{}", eng.prefix, c.flag.names[k]),
                summand: c.summand,
                level: c.flag.levels[li].index,
                position: c.flag.position(k),
                coupled: c.flag.levels[li].coupled,
                matrix: c.flag.basis[k].clone(),
                status,
                coupling: c.coords[k].clone(),
                family: eng.cs.reduce(&st.f),
                value,
                residual,
            });
        }
    }
    let mut p = RfMatrix::identity(n);
    p.set_submatrix(n1, 0, &b);
    let gauge = GaugeMatrix::new(p)?;
    let reduced = gauge_transform(&gauge, sys)?;

    let all: Vec<&QMatrix> = cascades.iter().flat_map(|c| c.flag.basis.iter()).collect();
    let nn = psi.dim();
    let g = QMatrix::from_fn(nn, nn, |i, j| all[j].vec_rows()[i].clone());
    let s_new = reduced.a().submatrix(n1, 0, psi.n2, n1);
    let got = g.inverse()?.to_rf().mul_vec(&vec_rows_rf(&s_new));
    if got != predicted {
        return Err(Error::Certificate("reduced coupling differs from the predicted residuals".into()));
    }
    if reduced.diag_part() != sys.diag_part() {
        return Err(Error::Certificate("gauge changed the diagonal blocks".into()));
    }
    Ok(CoreRun { gauge, reduced, directions })
}

fn check_entry(sys: &DiffSystem) -> Result<()> {
    if !sys.diag_reduced_assumed() {
        return Err(Error::Assumption(
            "the diagonal blocks are not asserted to be in reduced form (set diag_reduced or pass --assume-diag-reduced)".into(),
        ));
    }
    for den in sys.denominators() {
        for f in factor(&den).factors {
            if f.poly.degree().is_some_and(|d| d > 1) {
                return Err(Error::Unsupported(format!(
                    "non-rational singularity: denominator factor {} has no rational root",
                    f.poly
                )));
            }
        }
    }
    Ok(())
}

fn below_diagonal_mask(blocks: &[usize]) -> impl Fn(usize, usize) -> bool {
    let mut owner = Vec::new();
    for (k, &b) in blocks.iter().enumerate() {
        owner.extend(std::iter::repeat_n(k, b));
    }
    move |i, j| owner[i] > owner[j]
}

fn residual_in_span(sys: &DiffSystem) -> bool {
    let funcs = wei_norman_matrix(&sys.diag_part()).funcs;
    let base = funcs.len();
    let mask = below_diagonal_mask(sys.blocks());
    let n = sys.dim();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let e = &sys.a()[(i, j)];
            if !mask(i, j) || e.is_zero() {
                return true;
            }
            let mut fs = funcs.clone();
            fs.push(e.clone());
            coeff_basis(&fs).basis.len() == base
        })
    })
}

fn finish(
    original: &DiffSystem,
    low: &DiffSystem,
    gauge_low: GaugeMatrix,
    reduced_low: DiffSystem,
    opts: &ReductionOptions,
    alloc: ParamAlloc,
    eng_out: (ConstraintSet, Vec<LevelLog>, Vec<BranchChoice>),
    directions: Vec<DirectionReport>,
    steps: Vec<CornerStep>,
) -> Result<ReductionReport> {
    let (constraints, constraints_log, branch_choices) = eng_out;
    let (free_params, assignment) = free_assignment(&alloc, &constraints, opts.free_values);
    let series_check = if opts.series_order > 0 {
        let (point, ok) = series_gauge_check(&gauge_low, low, &reduced_low, opts.series_order)?;
        if !ok {
            return Err(Error::Certificate(format!("series oracle rejects the gauge at x = {point}")));
        }
        Some(SeriesCheck { point, order: opts.series_order, ok })
    } else {
        None
    };
    let mask = below_diagonal_mask(low.blocks());
    let lie_before = lie_dim_matrix(low.a());
    let lie_after = lie_dim_matrix(reduced_low.a());
    let diag_lie_dim = lie_dim_matrix(&low.diag_part()).dim;
    let residual_in_diag_span = residual_in_span(&reduced_low);
    let (gauge, reduced) = match original.orientation() {
        Orientation::Lower => (gauge_low, reduced_low),
        Orientation::Upper => (gauge_low.reversed(), reduced_low.lower_to(Orientation::Upper)),
    };
    let removed = directions.iter().filter(|d| d.status == DirectionStatus::Removed).map(|d| d.name.clone()).collect();
    let obstructed = directions.iter().filter(|d| d.status == DirectionStatus::Obstructed).map(|d| d.name.clone()).collect();
    Ok(ReductionReport {
        original: original.clone(),
        reduced,
        gauge,
        lie_dim_before: lie_before.dim,
        lie_dim_after: lie_after.dim,
        offdiag_dim_before: lie_before.basis.dim_with_support(&mask),
        offdiag_dim_after: lie_after.basis.dim_with_support(&mask),
        lie_before,
        lie_after,
        diag_lie_dim,
        diag_galois_dim: opts.diag_galois_dim,
        params: alloc,
        constraints,
        free_params,
        assignment,
        constraints_log,
        directions,
        removed,
        obstructed,
        branch_choices,
        steps,
        diag_reduced_assumed: original.diag_reduced_assumed(),
        residual_in_diag_span,
        series_check,
    })
}

/// Reduces a system with two diagonal blocks.
pub fn reduce_two_block(sys: &DiffSystem, opts: &ReductionOptions) -> Result<ReductionReport> {
    check_entry(sys)?;
    if sys.blocks().len() != 2 {
        return Err(Error::InvalidSystem(format!("expected two diagonal blocks, found {}", sys.blocks().len())));
    }
    let low = sys.to_lower();
    let mut alloc = ParamAlloc::new();
    let mut eng = Engine {
        alloc: &mut alloc,
        cs: ConstraintSet::new(),
        logs: Vec::new(),
        branches: Vec::new(),
        snapshots: Vec::new(),
        prefix: String::new(),
        step: 0,
    };
    let run = run_two_block(&low, opts, &mut eng)?;
    let out = (eng.cs, eng.logs, eng.branches);
    let step = CornerStep {
        offset: 0,
        blocks: (low.blocks()[0], low.blocks()[1]),
        gauge_is_identity: run.gauge.is_identity(),
        removed: run.directions.iter().filter(|d| d.status == DirectionStatus::Removed).map(|d| d.name.clone()).collect(),
        obstructed: run.directions.iter().filter(|d| d.status == DirectionStatus::Obstructed).map(|d| d.name.clone()).collect(),
    };
    finish(sys, &low, run.gauge, run.reduced, opts, alloc, out, run.directions, vec![step])
}

/// Reduces any block-triangular system by nested two-block steps, innermost trailing corner first.
pub fn reduce_multi_block(sys: &DiffSystem, opts: &ReductionOptions) -> Result<ReductionReport> {
    check_entry(sys)?;
    let low = sys.to_lower();
    let kappa = low.blocks().len();
    if kappa == 2 {
        return reduce_two_block(sys, opts);
    }
    let corner_opts = ReductionOptions { summands: None, active: None, ..opts.clone() };
    let n = low.dim();
    let offsets = low.offsets();
    let mut alloc = ParamAlloc::new();
    let mut cur = low.clone();
    let mut gauge = GaugeMatrix::identity(n);
    let mut directions = Vec::new();
    let mut steps = Vec::new();
    let mut cs = ConstraintSet::new();
    let mut logs = Vec::new();
    let mut branches = Vec::new();
    for (t, i) in (0..kappa.saturating_sub(1)).rev().enumerate() {
        let o = offsets[i];
        let m = n - o;
        let sub = DiffSystem::new(cur.a().submatrix(o, o, m, m), vec![low.blocks()[i], m - low.blocks()[i]], Orientation::Lower, true)?;
        let mut eng = Engine {
            alloc: &mut alloc,
            cs: cs.clone(),
            logs: Vec::new(),
            branches: Vec::new(),
            snapshots: Vec::new(),
            prefix: format!("k{}:", t + 1),
            step: t + 1,
        };
        let run = run_two_block(&sub, &corner_opts, &mut eng)?;
        cs = eng.cs;
        logs.extend(eng.logs);
        branches.extend(eng.branches);
        steps.push(CornerStep {
            offset: o,
            blocks: (sub.blocks()[0], sub.blocks()[1]),
            gauge_is_identity: run.gauge.is_identity(),
            removed: run.directions.iter().filter(|d| d.status == DirectionStatus::Removed).map(|d| d.name.clone()).collect(),
            obstructed: run.directions.iter().filter(|d| d.status == DirectionStatus::Obstructed).map(|d| d.name.clone()).collect(),
        });
        directions.extend(run.directions);
        let lifted = run.gauge.lift(o);
        let next = gauge_transform(&lifted, &cur)?;
        cur = DiffSystem::new(next.a().clone(), low.blocks().to_vec(), Orientation::Lower, true)?;
        gauge = gauge.then(&lifted);
    }
    finish(sys, &low, gauge, cur, opts, alloc, (cs, logs, branches), directions, steps)
}
