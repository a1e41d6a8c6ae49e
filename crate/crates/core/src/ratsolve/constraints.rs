use std::collections::BTreeMap;

use num_traits::Zero;

use super::param::{LinearRow, ParamAffine, ParamId};
use crate::exactfield::{RatFunc, Q};

/// Linear constraints over ℚ in reduced row-echelon form.
///
/// Each row is keyed by its pivot, the largest parameter id it mentions, with
/// pivot coefficient one; no pivot occurs in any other row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    rows: BTreeMap<ParamId, LinearRow>,
    inconsistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintSolution {
    Inconsistent,
    /// `pivot = rhs - Σ coeffs[free] * free` for each pivot row.
    Affine { pivots: Vec<(ParamId, LinearRow)>, free: Vec<ParamId> },
}

impl ConstraintSet {
    pub fn new() -> Self {
        ConstraintSet::default()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rows(&self) -> impl Iterator<Item = &LinearRow> {
        self.rows.values()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, pivot: ParamId) -> Option<&LinearRow> {
        self.rows.get(&pivot)
    }

    pub fn is_pivot(&self, p: ParamId) -> bool {
        self.rows.contains_key(&p)
    }

    /// `row` reduced against the current pivots.
    pub fn reduce_row(&self, row: &LinearRow) -> LinearRow {
        let mut r = row.clone();
        let hits: Vec<ParamId> = r.coeffs.keys().filter(|p| self.rows.contains_key(p)).cloned().collect();
        for p in hits {
            let c = r.coeff(p);
            if !c.is_zero() {
                r = r.sub_scaled(&c, &self.rows[&p]);
            }
        }
        r
    }

    /// Adds a row; returns its reduced, normalized form if it was independent.
    pub fn add_row(&mut self, row: &LinearRow) -> Option<LinearRow> {
        if self.inconsistent {
            return None;
        }
        let r = self.reduce_row(row);
        if r.is_contradiction() {
            self.inconsistent = true;
            return None;
        }
        let p = r.pivot()?;
        let r = r.normalized();
        for other in self.rows.values_mut() {
            let c = other.coeff(p);
            if !c.is_zero() {
                *other = other.sub_scaled(&c, &r);
            }
        }
        self.rows.insert(p, r.clone());
        Some(r)
    }

    /// Adds rows, returning the independent ones as inserted.
    pub fn add_rows(&mut self, rows: &[LinearRow]) -> Vec<LinearRow> {
        rows.iter().filter_map(|r| self.add_row(r)).collect()
    }

    pub fn merge(&mut self, other: &ConstraintSet) {
        if other.inconsistent {
            self.inconsistent = true;
        }
        for r in other.rows.values() {
            self.add_row(r);
        }
    }

    /// A copy extended by `rows`, or `None` if that is inconsistent.
    pub fn try_extend(&self, rows: &[LinearRow]) -> Option<(ConstraintSet, Vec<LinearRow>)> {
        let mut c = self.clone();
        let added = c.add_rows(rows);
        c.is_consistent().then_some((c, added))
    }

    /// Affine expression of each pivot in the free parameters.
    pub fn substitution(&self) -> BTreeMap<ParamId, ParamAffine> {
        self.rows
            .iter()
            .map(|(p, r)| {
                let terms = r.coeffs.iter().filter(|(k, _)| *k != p).map(|(k, c)| (*k, RatFunc::constant(-c)));
                (*p, ParamAffine::from_parts(RatFunc::constant(r.rhs.clone()), terms))
            })
            .collect()
    }

    /// Eliminates pivot parameters from `a`.
    pub fn reduce(&self, a: &ParamAffine) -> ParamAffine {
        if self.rows.is_empty() {
            return a.clone();
        }
        a.substitute(&self.substitution())
    }

    pub fn solve(&self, universe: &[ParamId]) -> ConstraintSolution {
        if self.inconsistent {
            return ConstraintSolution::Inconsistent;
        }
        let mut free: Vec<ParamId> = universe.iter().filter(|p| !self.rows.contains_key(p)).cloned().collect();
        for r in self.rows.values() {
            for p in r.coeffs.keys() {
                if !self.rows.contains_key(p) && !free.contains(p) {
                    free.push(*p);
                }
            }
        }
        free.sort();
        ConstraintSolution::Affine { pivots: self.rows.iter().map(|(p, r)| (*p, r.clone())).collect(), free }
    }

    /// Completes `free_values` to a full satisfying assignment.
    pub fn assignment(&self, free_values: &BTreeMap<ParamId, Q>) -> BTreeMap<ParamId, Q> {
        let mut out = free_values.clone();
        for p in self.rows.keys() {
            out.remove(p);
        }
        let snapshot = out.clone();
        for (p, r) in &self.rows {
            let mut v = r.rhs.clone();
            for (k, c) in &r.coeffs {
                if k != p {
                    v -= c * snapshot.get(k).cloned().unwrap_or_else(Q::zero);
                }
            }
            out.insert(*p, v);
        }
        out
    }

    pub fn holds(&self, assign: &BTreeMap<ParamId, Q>) -> bool {
        !self.inconsistent && self.rows.values().all(|r| r.holds(assign))
    }
}

/// Spec-level entry point: pivot/free split of a constraint set.
pub fn solve_constraints(cs: &ConstraintSet, universe: &[ParamId]) -> ConstraintSolution {
    cs.solve(universe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::q;

    fn row(cs: &[(u32, i64)], rhs: Q) -> LinearRow {
        LinearRow::new(cs.iter().map(|&(p, c)| (ParamId(p), q(c, 1))), rhs)
    }

    #[test]
    fn contradiction_detected() {
        let mut cs = ConstraintSet::new();
        cs.add_row(&row(&[(0, 1)], q(1, 1)));
        assert!(cs.is_consistent());
        cs.add_row(&row(&[(0, 1)], q(0, 1)));
        assert!(!cs.is_consistent());
        assert_eq!(cs.solve(&[]), ConstraintSolution::Inconsistent);
    }

    #[test]
    fn rref_invariant_and_free_params() {
        let mut cs = ConstraintSet::new();
        cs.add_row(&row(&[(0, 1), (1, 1)], q(3, 1)));
        cs.add_row(&row(&[(1, 1), (2, 2)], q(1, 1)));
        for (p, r) in cs.rows.iter() {
            assert_eq!(r.coeff(*p), q(1, 1));
            for (p2, r2) in cs.rows.iter() {
                if p2 != p {
                    assert!(r2.coeff(*p).is_zero());
                }
            }
        }
        match cs.solve(&[ParamId(0), ParamId(1), ParamId(2), ParamId(3)]) {
            ConstraintSolution::Affine { pivots, free } => {
                assert_eq!(pivots.len(), 2);
                assert_eq!(free, vec![ParamId(0), ParamId(3)]);
            }
            _ => panic!(),
        }
        let a = cs.assignment(&[(ParamId(0), q(5, 1))].into_iter().collect());
        assert!(cs.holds(&a));
    }
}
