//! Exact symbolic-numeric toolkit for divergence-free dynamics on
//! three-dimensional phase space.
//!
//! Coordinates are named `x0, x1, x2` (classically `x, y, z`) and velocities
//! `v0, v1, v2`. The same flow can be written three ways, all of which are
//! available here and checked against each other:
//!
//! * as a plain polynomial vector field, e.g. the linear system `ẋ = A x`;
//! * as a Nambu flow `ẋ_i = {H1, H2, x_i}` generated by two Hamiltonians;
//! * as `ẋ = rot h` for a vector Hamiltonian `h`, recovered from the flow's
//!   closed 2-form by the radial homotopy operator.

pub mod error;
pub mod forms;
pub mod frenet;
pub mod homotopy;
pub mod identities;
pub mod integrate;
pub mod lax;
pub mod mechanics;
pub mod poly;
pub mod random;
mod text;

pub use error::{IntegrateError, Result, SymError};
pub use forms::{
    bivector_interior_product, div, grad, interior_product, lie_derivative, rot, BiVec,
    Convention, Graded, KForm, VecField,
};
pub use homotopy::homotopy_potential;
pub use poly::{int, rat, Alphabet, Poly, Rational, Var};
