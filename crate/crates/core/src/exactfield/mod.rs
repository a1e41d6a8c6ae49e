//! Exact arithmetic over ℚ and ℚ(x).

mod factor;
mod hermite;
mod partfrac;
mod poly;
mod ratfunc;
mod rational;

pub use factor::{factor, factor_order, interpolate, nonlinear_factors, Factor, Factorization};
pub use hermite::{hermite_reduce, integrate_poly, HermiteSplit};
pub use partfrac::{atom_coordinates, coeff_basis, partfrac_over, squarefree_partfrac, Atom, CoeffBasis, PartialFraction, PfTerm};
pub(crate) use poly::forward_owned;
pub use poly::{divisors, Poly};
pub use ratfunc::RatFunc;
pub use rational::{as_integer, q, qi, Q};
