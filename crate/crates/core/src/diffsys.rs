//! Linear differential systems `Y' = A Y` with block-triangular structure.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactfield::{Poly, RatFunc, Q};
use crate::linalg::{QMatrix, RfMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSystem {
    a: RfMatrix,
    blocks: Vec<usize>,
    orientation: Orientation,
    diag_reduced_assumed: bool,
}

impl DiffSystem {
    pub fn new(a: RfMatrix, blocks: Vec<usize>, orientation: Orientation, diag_reduced_assumed: bool) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidSystem(format!("matrix is {}x{}, not square", a.rows(), a.cols())));
        }
        if blocks.contains(&0) || blocks.iter().sum::<usize>() != a.rows() {
            return Err(Error::InvalidSystem(format!("blocks {:?} do not partition dimension {}", blocks, a.rows())));
        }
        let sys = DiffSystem { a, blocks, orientation, diag_reduced_assumed };
        if let Some((i, j)) = sys.first_violation() {
            return Err(Error::InvalidSystem(format!(
                "entry ({}, {}) is nonzero but lies {} the block diagonal",
                i + 1,
                j + 1,
                if orientation == Orientation::Lower { "above" } else { "below" }
            )));
        }
        Ok(sys)
    }

    /// Single-block system.
    pub fn full(a: RfMatrix) -> Self {
        let n = a.rows();
        DiffSystem::new(a, vec![n], Orientation::Lower, false).expect("square matrix")
    }

    /// Lower system with the finest valid block partition.
    pub fn with_finest_blocks(a: RfMatrix, orientation: Orientation, diag_reduced_assumed: bool) -> Self {
        let blocks = finest_blocks(&a, orientation);
        DiffSystem { a, blocks, orientation, diag_reduced_assumed }
    }

    fn first_violation(&self) -> Option<(usize, usize)> {
        let offs = self.offsets();
        let block_of = |i: usize| offs.partition_point(|&o| o <= i) - 1;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let bad = match self.orientation {
                    Orientation::Lower => block_of(j) > block_of(i),
                    Orientation::Upper => block_of(j) < block_of(i),
                };
                if bad && !self.a[(i, j)].is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn a(&self) -> &RfMatrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn diag_reduced_assumed(&self) -> bool {
        self.diag_reduced_assumed
    }

    pub fn with_diag_reduced(mut self, v: bool) -> Self {
        self.diag_reduced_assumed = v;
        self
    }

    /// Start index of each block, plus a trailing `dim`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut o = vec![0];
        for b in &self.blocks {
            o.push(o.last().unwrap() + b);
        }
        o
    }

    pub fn diag_block(&self, k: usize) -> RfMatrix {
        let o = self.offsets();
        self.a.submatrix(o[k], o[k], self.blocks[k], self.blocks[k])
    }

    /// Block-diagonal part.
    pub fn diag_part(&self) -> RfMatrix {
        let o = self.offsets();
        let mut d = RfMatrix::zeros(self.dim(), self.dim());
        for k in 0..self.blocks.len() {
            d.set_submatrix(o[k], o[k], &self.diag_block(k));
        }
        d
    }

    pub fn is_block_diagonal(&self) -> bool {
        self.a == self.diag_part()
    }

    /// Equivalent lower system; upper inputs are conjugated by the reversal permutation.
    pub fn to_lower(&self) -> DiffSystem {
        match self.orientation {
            Orientation::Lower => self.clone(),
            Orientation::Upper => {
                let n = self.dim();
                let rev: Vec<usize> = (0..n).rev().collect();
                DiffSystem {
                    a: self.a.permute(&rev),
                    blocks: self.blocks.iter().rev().cloned().collect(),
                    orientation: Orientation::Lower,
                    diag_reduced_assumed: self.diag_reduced_assumed,
                }
            }
        }
    }

    /// Maps a lower system back to `orientation` (inverse of [`DiffSystem::to_lower`]).
    pub fn lower_to(&self, orientation: Orientation) -> DiffSystem {
        assert_eq!(self.orientation, Orientation::Lower);
        match orientation {
            Orientation::Lower => self.clone(),
            Orientation::Upper => {
                let n = self.dim();
                let rev: Vec<usize> = (0..n).rev().collect();
                DiffSystem {
                    a: self.a.permute(&rev),
                    blocks: self.blocks.iter().rev().cloned().collect(),
                    orientation,
                    diag_reduced_assumed: self.diag_reduced_assumed,
                }
            }
        }
    }

    /// Same matrix regrouped into coarser blocks; `groups` counts original blocks per new block.
    pub fn regroup(&self, groups: &[usize]) -> Result<DiffSystem> {
        let mut blocks = Vec::new();
        let mut it = self.blocks.iter();
        for &g in groups {
            let s: usize = it.by_ref().take(g).sum();
            blocks.push(s);
        }
        DiffSystem::new(self.a.clone(), blocks, self.orientation, self.diag_reduced_assumed)
    }

    /// Every finite pole of every entry.
    pub fn denominators(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for e in self.a.entries() {
            if !e.den().is_one() && !out.contains(e.den()) {
                out.push(e.den().clone());
            }
        }
        out
    }
}

/// Finest block partition compatible with the given orientation.
pub fn finest_blocks(a: &RfMatrix, orientation: Orientation) -> Vec<usize> {
    let n = a.rows();
    let mut cuts = vec![0];
    for k in 1..n {
        let ok = (0..k).all(|i| {
            (k..n).all(|j| match orientation {
                Orientation::Lower => a[(i, j)].is_zero(),
                Orientation::Upper => a[(j, i)].is_zero(),
            })
        });
        if ok {
            cuts.push(k);
        }
    }
    cuts.push(n);
    cuts.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Invertible matrix over ℚ(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeMatrix {
    p: RfMatrix,
}

impl GaugeMatrix {
    pub fn new(p: RfMatrix) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::DimensionMismatch("gauge matrix must be square".into()));
        }
        if p.det().is_zero() {
            return Err(Error::Singular("gauge determinant vanishes identically".into()));
        }
        Ok(GaugeMatrix { p })
    }

    pub fn identity(n: usize) -> Self {
        GaugeMatrix { p: RfMatrix::identity(n) }
    }

    pub fn matrix(&self) -> &RfMatrix {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.p.is_identity()
    }

    /// Gauge applying `self` first, then `next`.
    pub fn then(&self, next: &GaugeMatrix) -> GaugeMatrix {
        GaugeMatrix { p: &self.p * &next.p }
    }

    pub fn inverse(&self) -> GaugeMatrix {
        GaugeMatrix { p: self.p.inverse().expect("gauge is invertible") }
    }

    /// `P[A] = P^{-1} A P - P^{-1} P'`.
    pub fn apply(&self, a: &RfMatrix) -> Result<RfMatrix> {
        if a.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!("gauge is {}x{}, system is {}x{}", self.dim(), self.dim(), a.rows(), a.rows())));
        }
        let pinv = self.p.inverse()?;
        Ok(&(&(&pinv * a) * &self.p) - &(&pinv * &self.p.derive()))
    }

    /// Same gauge acting on the reversed coordinates.
    pub fn reversed(&self) -> GaugeMatrix {
        let rev: Vec<usize> = (0..self.dim()).rev().collect();
        GaugeMatrix { p: self.p.permute(&rev) }
    }

    /// `diag(Id_k, self)`.
    pub fn lift(&self, k: usize) -> GaugeMatrix {
        let n = self.dim() + k;
        let mut p = RfMatrix::identity(n);
        p.set_submatrix(k, k, &self.p);
        GaugeMatrix { p }
    }
}

/// Gauge transform; keeps the block list if still valid, otherwise recomputes the finest one.
pub fn gauge_transform(p: &GaugeMatrix, sys: &DiffSystem) -> Result<DiffSystem> {
    let a = p.apply(sys.a())?;
    match DiffSystem::new(a.clone(), sys.blocks.clone(), sys.orientation, sys.diag_reduced_assumed) {
        Ok(s) => Ok(s),
        Err(_) => Ok(DiffSystem::with_finest_blocks(a, sys.orientation, sys.diag_reduced_assumed)),
    }
}

/// Structural check `dst.A = P[src.A]`.
pub fn check_gauge_identity(p: &GaugeMatrix, src: &DiffSystem, dst: &DiffSystem) -> bool {
    match p.apply(src.a()) {
        Ok(a) => &a == dst.a(),
        Err(_) => false,
    }
}

/// Appends `select.len()` rows `Y_{n+i}' = Y_{select[i]}` to a lower system.
pub fn augment_with_integrals(sys: &DiffSystem, select: &[usize]) -> Result<DiffSystem> {
    let base = sys.to_lower();
    let n = base.dim();
    if let Some(&bad) = select.iter().find(|&&s| s >= n) {
        return Err(Error::InvalidSystem(format!("selected row {} exceeds dimension {}", bad + 1, n)));
    }
    let m = select.len();
    let mut a = RfMatrix::zeros(n + m, n + m);
    a.set_submatrix(0, 0, base.a());
    for (i, &s) in select.iter().enumerate() {
        a[(n + i, s)] = RatFunc::one();
    }
    let mut blocks = base.blocks.clone();
    if m > 0 {
        blocks.push(m);
    }
    DiffSystem::new(a, blocks, Orientation::Lower, base.diag_reduced_assumed)
}

/// Companion system of `y^(n) + c_{n-1} y^(n-1) + ... + c_0 y`.
pub fn companion_of_operator(coeffs: &[RatFunc]) -> DiffSystem {
    let n = coeffs.len();
    let mut a = RfMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = RatFunc::one();
    }
    for (j, c) in coeffs.iter().enumerate() {
        a[(n - 1, j)] = -c;
    }
    DiffSystem::full(a)
}

/// First `n` Taylor coefficients of `f` at `x0`.
pub fn taylor(f: &RatFunc, x0: &Q, n: usize) -> Option<Vec<Q>> {
    let num = f.num().shift(x0);
    let den = f.den().shift(x0);
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return None;
    }
    let inv = d0.recip();
    let mut out: Vec<Q> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = num.coeff(k);
        for j in 1..=k.min(den.degree().unwrap()) {
            s -= den.coeff(j) * &out[k - j];
        }
        out.push(s * &inv);
    }
    Some(out)
}

/// Taylor coefficient matrices of a matrix of rational functions.
pub fn matrix_taylor(m: &RfMatrix, x0: &Q, n: usize) -> Result<Vec<QMatrix>> {
    let mut out = vec![QMatrix::zeros(m.rows(), m.cols()); n];
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let t = taylor(&m[(i, j)], x0, n).ok_or_else(|| Error::SingularPoint { point: x0.to_string(), row: i + 1, col: j + 1 })?;
            for (k, c) in t.into_iter().enumerate() {
                out[k][(i, j)] = c;
            }
        }
    }
    Ok(out)
}

/// Truncated fundamental matrix `U = Σ_k U_k (x - x0)^k` with `U_0 = Id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    pub expansion_point: Q,
    /// Number of coefficients.
    pub order: usize,
    pub coefficients: Vec<QMatrix>,
}

/// `U_0 = Id`, `(k+1) U_{k+1} = Σ_{j ≤ k} A_j U_{k-j}`; `order` coefficients.
pub fn series_fundamental(sys: &DiffSystem, x0: &Q, order: usize) -> Result<SeriesMatrix> {
    if order == 0 {
        return Err(Error::InvalidSystem("series order must be positive".into()));
    }
    let n = sys.dim();
    let ak = matrix_taylor(sys.a(), x0, order)?;
    let mut u = vec![QMatrix::identity(n)];
    for k in 0..order - 1 {
        let mut s = QMatrix::zeros(n, n);
        for j in 0..=k {
            s = &s + &(&ak[j] * &u[k - j]);
        }
        u.push(s.scale(&Q::from_integer(BigInt::from(k + 1)).recip()));
    }
    Ok(SeriesMatrix { expansion_point: x0.clone(), order, coefficients: u })
}

impl SeriesMatrix {
    /// Coefficients of `Z' - A Z` through `(x - x0)^(order-2)`.
    pub fn residual(z: &[QMatrix], a: &[QMatrix]) -> Vec<QMatrix> {
        let order = z.len();
        (0..order.saturating_sub(1))
            .map(|k| {
                let mut r = z[k + 1].scale(&Q::from_integer(BigInt::from(k + 1)));
                for j in 0..=k {
                    r = &r - &(&a[j] * &z[k - j]);
                }
                r
            })
            .collect()
    }

    pub fn satisfies(&self, sys: &DiffSystem) -> Result<bool> {
        let a = matrix_taylor(sys.a(), &self.expansion_point, self.order)?;
        Ok(SeriesMatrix::residual(&self.coefficients, &a).iter().all(|r| r.is_zero()))
    }
}

/// Truncated product of two matrix series.
pub fn series_mul(a: &[QMatrix], b: &[QMatrix], order: usize) -> Vec<QMatrix> {
    (0..order)
        .map(|k| {
            let mut s = QMatrix::zeros(a[0].rows(), b[0].cols());
            for j in 0..=k {
                if j < a.len() && k - j < b.len() {
                    s = &s + &(&a[j] * &b[k - j]);
                }
            }
            s
        })
        .collect()
}

/// Smallest non-negative integer that is not a pole of any given matrix entry.
pub fn ordinary_point(ms: &[&RfMatrix]) -> Q {
    let mut k = 0i64;
    loop {
        let x = Q::from_integer(BigInt::from(k));
        if ms.iter().all(|m| m.entries().iter().all(|e| !e.den().eval(&x).is_zero())) {
            return x;
        }
        k += 1;
    }
}

/// Series oracle: columns of `P^{-1} U_src` satisfy `Z' = dst Z` modulo `(x - x0)^(order-1)`.
pub fn series_gauge_check(p: &GaugeMatrix, src: &DiffSystem, dst: &DiffSystem, order: usize) -> Result<(Q, bool)> {
    let pinv = p.matrix().inverse()?;
    let x0 = ordinary_point(&[src.a(), dst.a(), p.matrix(), &pinv]);
    let u = series_fundamental(src, &x0, order)?;
    let ps = matrix_taylor(&pinv, &x0, order)?;
    let z = series_mul(&ps, &u.coefficients, order);
    let a = matrix_taylor(dst.a(), &x0, order)?;
    Ok((x0, SeriesMatrix::residual(&z, &a).iter().all(|r| r.is_zero())))
}
