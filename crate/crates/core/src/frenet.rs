//! The Frenet-frame system with constant curvature and torsion,
//!
//! ```text
//! ẋ0 = x1,   ẋ1 = x2 − x0,   ẋ2 = −x1,
//! ```
//!
//! together with its Hamiltonian pair, vector Hamiltonian, vector Lagrangian
//! and Lax matrices. These are the reference instance for every check in the
//! crate.

use crate::forms::{KForm, VecField};
use crate::lax::{LaxPair, PolyMatrix, RatMatrix};
use crate::mechanics::{NambuPair, VectorLagrangian};
use crate::poly::{int, rat, Poly};

fn x(i: usize) -> Poly {
    Poly::x(i)
}

/// Coefficient matrix of the linear system.
pub fn matrix() -> RatMatrix {
    let z = || int(0);
    [
        [z(), int(1), z()],
        [int(-1), z(), int(1)],
        [z(), int(-1), z()],
    ]
}

pub fn field() -> VecField {
    VecField::new(x(1), &x(2) - &x(0), -x(1))
}

/// `H1 = x0 + x2`, `H2 = x0 x2 − x1²/2`.
pub fn hamiltonians() -> NambuPair {
    NambuPair {
        h1: &x(0) + &x(2),
        h2: &x(0) * &x(2) - x(1).pow(2).scale(&rat(1, 2)),
    }
}

/// `h = ⅓ (x1² + x2² − x0 x2, −x1 (x0 + x2), x1² + x0² − x0 x2)`.
pub fn vector_hamiltonian() -> VecField {
    let third = rat(1, 3);
    VecField::new(
        (x(1).pow(2) + x(2).pow(2) - &x(0) * &x(2)).scale(&third),
        (-(&x(1) * &(&x(0) + &x(2)))).scale(&third),
        (x(1).pow(2) + x(0).pow(2) - &x(0) * &x(2)).scale(&third),
    )
}

/// `Ψ = x1 dx1∧dx2 + (x2 − x0) dx2∧dx0 − x1 dx0∧dx1`.
pub fn closed_two_form() -> KForm {
    KForm::from_components(
        2,
        [
            (vec![1, 2], x(1)),
            (vec![2, 0], &x(2) - &x(0)),
            (vec![0, 1], -x(1)),
        ],
    )
    .expect("valid indices")
}

/// `L = (x2 v1 − x1 v2 − h1, x0 v2 − x2 v0 − h2, x1 v0 − x0 v1 − h3)`.
pub fn lagrangian() -> VectorLagrangian {
    let v = Poly::v;
    let xe = |i| x(i).lift();
    let h = vector_hamiltonian();
    VectorLagrangian {
        l: [
            &xe(2) * &v(1) - &xe(1) * &v(2) - h[0].lift(),
            &xe(0) * &v(2) - &xe(2) * &v(0) - h[1].lift(),
            &xe(1) * &v(0) - &xe(0) * &v(1) - h[2].lift(),
        ],
    }
}

pub fn lax_pair() -> LaxPair {
    let a: PolyMatrix = [
        [x(0), x(1), x(0)],
        [x(1), x(2).scale(&int(2)), x(1)],
        [x(0), x(1), x(0)],
    ];
    let z = || int(0);
    let b: RatMatrix = [
        [z(), int(1), z()],
        [int(-1), z(), int(-1)],
        [z(), int(1), z()],
    ];
    LaxPair { a, b }
}

/// The listed invariants `I1 = x0 + x2`, `I2 = ½ (x0² + x1² + x2²)`,
/// `I3 = ⅓ (x0³ + (3/2) x1² (x0 + x2) + x2³)`.
pub fn closed_form_invariants() -> [Poly; 3] {
    let i1 = &x(0) + &x(2);
    let i2 = (x(0).pow(2) + x(1).pow(2) + x(2).pow(2)).scale(&rat(1, 2));
    let i3 = (x(0).pow(3) + (x(1).pow(2) * &i1).scale(&rat(3, 2)) + x(2).pow(3))
        .scale(&rat(1, 3));
    [i1, i2, i3]
}

/// Angular frequency `√2` of the oscillating modes.
pub fn frequency() -> f64 {
    std::f64::consts::SQRT_2
}
