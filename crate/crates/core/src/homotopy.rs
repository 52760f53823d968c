//! Radial homotopy operator: explicit potentials for closed polynomial forms.
//!
//! For a closed k-form ω on all of 3-space (star-shaped about the origin),
//!
//! ```text
//! (Hω)(x) = ∫₀¹ t^(k-1) (R ⌋ ω)(t x) dt,      R = Σ x_i ∂/∂x_i,
//! ```
//!
//! and `d(Hω) = ω`. On a monomial coefficient of total degree m the integral
//! evaluates to the weight `1/(m + k)`, so the whole operator stays exact.

use crate::error::{Result, SymError};
use crate::forms::{interior_product, KForm, VecField};
use crate::poly::{Poly, Rational};

/// Radial-gauge potential of a closed form of degree ≥ 1.
pub fn homotopy_potential(form: &KForm) -> Result<KForm> {
    let k = form.degree();
    if k == 0 {
        return Err(SymError::InvalidArgument(
            "a 0-form has no potential".into(),
        ));
    }
    let residual = form.d();
    if !residual.is_zero() {
        return Err(SymError::NotClosed {
            residual: Box::new(residual),
        });
    }
    Ok(radial_homotopy(form))
}

/// The operator itself, without the closedness check. For non-closed input
/// `d(H ω) + H(d ω) = ω` still holds.
pub fn radial_homotopy(form: &KForm) -> KForm {
    let k = form.degree() as u32;
    if k == 0 {
        return KForm::zero(0);
    }
    let weighted = form.map_coefficients(|_, p| weight_by_degree(p, k));
    interior_product(&VecField::radial(), &weighted).value
}

fn weight_by_degree(p: &Poly, k: u32) -> Poly {
    let terms = p.terms().map(|(e, c)| {
        let m: u32 = e.iter().sum();
        let w = Rational::new(1.into(), (m + k).into());
        (e.clone(), c * w)
    });
    Poly::from_terms(p.alphabet(), terms).expect("same exponent layout")
}
