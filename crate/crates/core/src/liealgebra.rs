//! Wei–Norman decomposition and bracket closure of constant matrices.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diffsys::DiffSystem;
use crate::exactfield::{coeff_basis, RatFunc, Q};
use crate::linalg::{QMatrix, RfMatrix, Span};

/// `A = Σ funcs[i] * mats[i]` with `funcs` linearly independent over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeiNormanDecomp {
    pub funcs: Vec<RatFunc>,
    pub mats: Vec<QMatrix>,
}

impl WeiNormanDecomp {
    pub fn reconstruct(&self, rows: usize, cols: usize) -> RfMatrix {
        let mut out = RfMatrix::zeros(rows, cols);
        for (f, m) in self.funcs.iter().zip(&self.mats) {
            out = &out + &m.to_rf().scale(f);
        }
        out
    }

    /// Index of the constant function `1` if present.
    pub fn constant_index(&self) -> Option<usize> {
        self.funcs.iter().position(|f| f.is_one())
    }
}

pub fn wei_norman_matrix(a: &RfMatrix) -> WeiNormanDecomp {
    let cb = coeff_basis(a.entries());
    let (r, c) = (a.rows(), a.cols());
    let mats = (0..cb.basis.len())
        .map(|k| QMatrix::from_fn(r, c, |i, j| cb.coords[(i * c + j, k)].clone()))
        .collect();
    WeiNormanDecomp { funcs: cb.basis, mats }
}

pub fn wei_norman(sys: &DiffSystem) -> WeiNormanDecomp {
    wei_norman_matrix(sys.a())
}

pub fn bracket(m: &QMatrix, n: &QMatrix) -> QMatrix {
    &(m * n) - &(n * m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBasis {
    pub basis: Vec<QMatrix>,
    pub closed: bool,
    /// Closure is `ℚ·Id ⊕ nilpotents`, so it equals the algebraic envelope.
    pub envelope_certified: bool,
}

impl LieBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn span(&self) -> Span {
        let n2 = self.basis.first().map_or(0, |m| m.rows() * m.cols());
        Span::from_vectors(n2, &self.basis.iter().map(|m| m.vec_rows()).collect::<Vec<_>>())
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        self.basis.is_empty() && m.is_zero() || self.span().contains(&m.vec_rows())
    }

    /// Dimension of the intersection with the coordinate subspace where `mask(i, j)` holds.
    pub fn dim_with_support(&self, mask: impl Fn(usize, usize) -> bool) -> usize {
        let Some(m0) = self.basis.first() else { return 0 };
        let (r, c) = (m0.rows(), m0.cols());
        let outside: Vec<Vec<Q>> = self
            .basis
            .iter()
            .map(|m| (0..r * c).map(|k| if mask(k / c, k % c) { Q::zero() } else { m[(k / c, k % c)].clone() }).collect())
            .collect();
        self.dim() - Span::from_vectors(r * c, &outside).dim()
    }
}

/// Smallest bracket-closed subspace containing `gens`.
pub fn lie_closure(gens: &[QMatrix]) -> LieBasis {
    let Some(g0) = gens.first() else {
        return LieBasis { basis: Vec::new(), closed: true, envelope_certified: true };
    };
    let n2 = g0.rows() * g0.cols();
    let mut span = Span::new(n2);
    let mut basis: Vec<QMatrix> = Vec::new();
    for g in gens {
        if span.insert(&g.vec_rows()) {
            basis.push(g.clone());
        }
    }
    let mut done = 0;
    while done < basis.len() {
        let k = done;
        for i in 0..k {
            let b = bracket(&basis[i], &basis[k]);
            if span.insert(&b.vec_rows()) {
                basis.push(b);
            }
        }
        done += 1;
    }
    let envelope_certified = scalar_plus_nilpotent(&basis, &span);
    LieBasis { basis, closed: true, envelope_certified }
}

fn scalar_plus_nilpotent(basis: &[QMatrix], span: &Span) -> bool {
    let Some(b0) = basis.first() else { return true };
    let n = b0.rows();
    let id = QMatrix::identity(n);
    let nq = Q::from_integer(BigInt::from(n));
    let mut has_scalar = false;
    for b in basis {
        let s = b.trace() / &nq;
        if !s.is_zero() {
            has_scalar = true;
        }
        if !(b - &id.scale(&s)).is_nilpotent() {
            return false;
        }
    }
    !has_scalar || span.contains(&id.vec_rows())
}

/// Every pairwise bracket of the basis lies in its span.
pub fn is_bracket_closed(basis: &[QMatrix]) -> bool {
    let Some(b0) = basis.first() else { return true };
    let span = Span::from_vectors(b0.rows() * b0.cols(), &basis.iter().map(|m| m.vec_rows()).collect::<Vec<_>>());
    basis.iter().enumerate().all(|(i, a)| basis[i + 1..].iter().all(|b| span.contains(&bracket(a, b).vec_rows())))
}

/// Dimensions of `L ⊇ [L, L] ⊇ [[L, L], [L, L]] ⊇ ...` until it stabilizes.
pub fn derived_series_dims(basis: &[QMatrix]) -> Vec<usize> {
    let mut cur: Vec<QMatrix> = basis.to_vec();
    let mut dims = vec![cur.len()];
    while !cur.is_empty() {
        let n2 = cur[0].rows() * cur[0].cols();
        let mut span = Span::new(n2);
        let mut next = Vec::new();
        for i in 0..cur.len() {
            for j in i + 1..cur.len() {
                let b = bracket(&cur[i], &cur[j]);
                if span.insert(&b.vec_rows()) {
                    next.push(b);
                }
            }
        }
        if next.len() == cur.len() {
            break;
        }
        dims.push(next.len());
        cur = next;
    }
    dims
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieDim {
    pub dim: usize,
    pub basis: LieBasis,
    pub decomp: WeiNormanDecomp,
}

pub fn lie_dim(sys: &DiffSystem) -> LieDim {
    lie_dim_matrix(sys.a())
}

pub fn lie_dim_matrix(a: &RfMatrix) -> LieDim {
    let decomp = wei_norman_matrix(a);
    let basis = lie_closure(&decomp.mats);
    LieDim { dim: basis.dim(), basis, decomp }
}
