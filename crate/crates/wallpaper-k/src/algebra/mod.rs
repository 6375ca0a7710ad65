//! Exact arithmetic substrate: rationals, integer matrices, Smith normal
//! form, torus congruences, and abelian-group normal forms. No floating point
//! enters any computation in this crate.

pub mod abgroup;
pub mod congruence;
pub mod lin2;
pub mod mat;
pub mod snf;
pub mod sparse;

pub use abgroup::{abgroup_from_matrices, ComplexError, FinAbGroup};
pub use congruence::{solve_congruence, CongruenceSolutionSet, TorusLine};
pub use lin2::{mod1, primitive, rat, smith2, Mat2, Rat, Vec2};
pub use mat::IntMat;
pub use snf::{invariant_factors, smith_normal_form, Smith};
