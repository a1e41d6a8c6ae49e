//! Rational solutions of parametrized linear differential equations.

mod constraints;
mod param;
mod scalar;
mod systems;

pub use constraints::{solve_constraints, ConstraintSet, ConstraintSolution};
pub use param::{LinearRow, ParamAffine, ParamAlloc, ParamId};
pub use scalar::{
    apply_operator, apply_operator_affine, hermite_split, param_antiderivative, param_antiderivative_in,
    scalar_rational_solutions, scalar_rational_solutions_in, solution_bounds, SolutionBounds,
};
pub use systems::{
    coupled_system_rational_solutions, coupled_system_rational_solutions_in, cyclic_reduction, proportional_equations,
    system_residual, triangular_system_rational_solutions, triangular_system_rational_solutions_in, CyclicReduction,
};

use std::collections::BTreeMap;

use crate::exactfield::{RatFunc, Q};

/// Parametrized family of solutions subject to linear constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSolutionSpace {
    pub particular: Vec<ParamAffine>,
    /// Integration constants and ansatz coefficients introduced by the solve.
    pub new_params: Vec<ParamId>,
    pub constraints: ConstraintSet,
    pub empty: bool,
}

impl ParamSolutionSpace {
    /// Parameters still free in the particular solution.
    pub fn free_params(&self) -> Vec<ParamId> {
        let mut ps: Vec<ParamId> = self.particular.iter().flat_map(|p| p.params()).collect();
        ps.sort();
        ps.dedup();
        ps
    }

    /// Solution with the given free values; unspecified free parameters are zero.
    pub fn instantiate(&self, free: &BTreeMap<ParamId, Q>) -> Vec<RatFunc> {
        let assign = self.constraints.assignment(free);
        self.particular.iter().map(|p| p.eval(&assign)).collect()
    }
}
