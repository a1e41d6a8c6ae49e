//! Gauge reduction of block-triangular systems.

mod adjoint;
mod flag;

pub use adjoint::{adjoint_action, kronecker_psi, unvec_rows_rf, vec_rows_rf, AdjointAction};
pub use flag::{flag_filtration, flag_filtration_general, flag_on_subspace, Flag, FlagLevel};
mod reduce;

pub use reduce::{
    reduce_multi_block, reduce_two_block, BranchChoice, BranchRule, CornerStep, DirectionReport, DirectionStatus, FreeValues,
    LevelLog, LevelStep, ReductionOptions, ReductionReport, SeriesCheck,
};
mod report;
pub use report::{independence_report, IndependenceReport, IntegralVerdict, Relation};
