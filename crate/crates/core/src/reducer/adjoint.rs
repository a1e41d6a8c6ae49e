use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffsys::DiffSystem;
use crate::error::{Error, Result};
use crate::exactfield::{RatFunc, Q};
use crate::liealgebra::{wei_norman_matrix, WeiNormanDecomp};
use crate::linalg::{QMatrix, RfMatrix};

const CHECK_SEED: u64 = 0x5eed_ad01;
const CHECKS: usize = 5;

/// Matrix of `X ↦ A₂X − XA₁` on `n₂×n₁` matrices, row-stacking `vec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointAction {
    pub psi: RfMatrix,
    pub n1: usize,
    pub n2: usize,
    /// Function basis of the diagonal and the matching constant parts `Ψᵢ`.
    pub funcs: Vec<RatFunc>,
    pub parts: Vec<QMatrix>,
}

/// `Ψ = A₂ ⊗ Id_{n₁} − Id_{n₂} ⊗ A₁ᵀ`.
pub fn kronecker_psi(a1: &RfMatrix, a2: &RfMatrix) -> RfMatrix {
    let i1 = RfMatrix::identity(a1.rows());
    let i2 = RfMatrix::identity(a2.rows());
    &a2.kron(&i1) - &i2.kron(&a1.transpose())
}

fn kronecker_psi_q(m1: &QMatrix, m2: &QMatrix) -> QMatrix {
    &m2.kron(&QMatrix::identity(m1.rows())) - &QMatrix::identity(m2.rows()).kron(&m1.transpose())
}

pub fn vec_rows_rf(m: &RfMatrix) -> Vec<RatFunc> {
    m.entries().to_vec()
}

pub fn unvec_rows_rf(v: &[RatFunc], rows: usize, cols: usize) -> RfMatrix {
    RfMatrix::from_fn(rows, cols, |i, j| v[i * cols + j].clone())
}

impl AdjointAction {
    pub fn from_blocks(a1: &RfMatrix, a2: &RfMatrix) -> Result<Self> {
        let (n1, n2) = (a1.rows(), a2.rows());
        let mut diag = RfMatrix::zeros(n1 + n2, n1 + n2);
        diag.set_submatrix(0, 0, a1);
        diag.set_submatrix(n1, n1, a2);
        let decomp = wei_norman_matrix(&diag);
        let parts: Vec<QMatrix> = decomp
            .mats
            .iter()
            .map(|m| kronecker_psi_q(&m.submatrix(0, 0, n1, n1), &m.submatrix(n1, n1, n2, n2)))
            .collect();
        let act = AdjointAction { psi: kronecker_psi(a1, a2), n1, n2, funcs: decomp.funcs, parts };
        act.verify(a1, a2)?;
        Ok(act)
    }

    fn verify(&self, a1: &RfMatrix, a2: &RfMatrix) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
        for _ in 0..CHECKS {
            let entries: Vec<RatFunc> = (0..self.dim())
                .map(|_| RatFunc::constant(Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())))
                .collect();
            let beta = unvec_rows_rf(&entries, self.n2, self.n1);
            let lhs = vec_rows_rf(&(&(a2 * &beta) - &(&beta * a1)));
            if lhs != self.psi.mul_vec(&vec_rows_rf(&beta)) {
                return Err(Error::Certificate("adjoint action fails vec(A2 b - b A1) = Psi vec(b)".into()));
            }
        }
        if self.reassemble() != self.psi {
            return Err(Error::Certificate("adjoint action parts do not sum to Psi".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn reassemble(&self) -> RfMatrix {
        WeiNormanDecomp { funcs: self.funcs.clone(), mats: self.parts.clone() }.reconstruct(self.dim(), self.dim())
    }

    /// `Ψ(β)` as an `n₂×n₁` matrix.
    pub fn apply(&self, beta: &RfMatrix) -> RfMatrix {
        unvec_rows_rf(&self.psi.mul_vec(&vec_rows_rf(beta)), self.n2, self.n1)
    }

    /// Constant parts restricted to `span(basis)`; column `l` holds the coordinates of `Ψᵢ(basis[l])`.
    pub fn restrict_parts(&self, basis: &[QMatrix]) -> Result<Vec<QMatrix>> {
        let d = basis.len();
        let v = QMatrix::from_fn(self.dim(), d, |i, j| basis[j].vec_rows()[i].clone());
        if v.rank() != d {
            return Err(Error::InvalidSystem("subspace basis is linearly dependent".into()));
        }
        self.parts
            .iter()
            .map(|p| {
                let img = p * &v;
                let mut r = QMatrix::zeros(d, d);
                for l in 0..d {
                    let c = v.solve(&img.col(l)).ok_or_else(|| {
                        Error::InvalidSystem(format!("subspace is not invariant under the adjoint action (basis element {})", l + 1))
                    })?;
                    for (k, ck) in c.into_iter().enumerate() {
                        r[(k, l)] = ck;
                    }
                }
                Ok(r)
            })
            .collect()
    }

    /// `Ψ` on `span(basis)` with coefficients in ℚ(x).
    pub fn restrict(&self, basis: &[QMatrix]) -> Result<RfMatrix> {
        let parts = self.restrict_parts(basis)?;
        Ok(WeiNormanDecomp { funcs: self.funcs.clone(), mats: parts }.reconstruct(basis.len(), basis.len()))
    }
}

/// Adjoint action of the diagonal of a two-block system, taken in lower orientation.
pub fn adjoint_action(sys: &DiffSystem) -> Result<AdjointAction> {
    let low = sys.to_lower();
    if low.blocks().len() != 2 {
        return Err(Error::InvalidSystem(format!("adjoint action needs two diagonal blocks, found {}", low.blocks().len())));
    }
    AdjointAction::from_blocks(&low.diag_block(0), &low.diag_block(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::q;

    #[test]
    fn zero_blocks_give_zero_psi() {
        let act = AdjointAction::from_blocks(&RfMatrix::zeros(2, 2), &RfMatrix::zeros(3, 3)).unwrap();
        assert!(act.psi.is_zero());
        assert_eq!(act.dim(), 6);
    }

    #[test]
    fn scalar_blocks() {
        let a1 = RfMatrix::from_rows(vec![vec![RatFunc::pole(q(1, 1), &q(0, 1), 1)]]);
        let a2 = RfMatrix::from_rows(vec![vec![RatFunc::one()]]);
        let act = AdjointAction::from_blocks(&a1, &a2).unwrap();
        assert_eq!(act.psi[(0, 0)], &RatFunc::one() - &RatFunc::pole(q(1, 1), &q(0, 1), 1));
    }
}
