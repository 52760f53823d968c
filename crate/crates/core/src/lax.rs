//! Lax representation `Ȧ = c [A, B]` and its trace invariants.

use crate::error::{Result, SymError};
use crate::forms::VecField;
use crate::frenet;
use crate::mechanics::{Fit, NambuPair};
use crate::poly::{proportionality, rat, Alphabet, Poly, Rational};

pub type PolyMatrix = [[Poly; 3]; 3];
pub type RatMatrix = [[Rational; 3]; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaxPair {
    pub a: PolyMatrix,
    pub b: RatMatrix,
}

pub fn constant_matrix(b: &RatMatrix) -> PolyMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| Poly::constant(Alphabet::Position, b[i][j].clone())))
}

pub fn identity() -> PolyMatrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if i == j {
                Poly::one(Alphabet::Position)
            } else {
                Poly::zero(Alphabet::Position)
            }
        })
    })
}

pub fn matmul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..3).fold(Poly::zero(Alphabet::Position), |acc, k| acc + &a[i][k] * &b[k][j])
        })
    })
}

fn zip_with(a: &PolyMatrix, b: &PolyMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> PolyMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| f(&a[i][j], &b[i][j])))
}

pub fn trace(a: &PolyMatrix) -> Poly {
    &a[0][0] + &a[1][1] + &a[2][2]
}

pub fn is_zero_matrix(a: &PolyMatrix) -> bool {
    a.iter().flatten().all(Poly::is_zero)
}

pub fn flatten(a: &PolyMatrix) -> Vec<Poly> {
    a.iter().flatten().cloned().collect()
}

/// `AB − BA`.
pub fn commutator(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    zip_with(&matmul(a, b), &matmul(b, a), |x, y| x - y)
}

/// Entrywise time derivative of `A` along the motion.
pub fn time_derivative(a: &PolyMatrix, motion: &VecField) -> PolyMatrix {
    std::array::from_fn(|i| std::array::from_fn(|j| motion.apply(&a[i][j])))
}

/// Fits `Ȧ = c [A, B]`; without a fitting constant the residual is the
/// unscaled `Ȧ − [A, B]`.
pub fn lax_fit(pair: &LaxPair, motion: &VecField) -> Fit<PolyMatrix> {
    let rate = time_derivative(&pair.a, motion);
    let comm = commutator(&pair.a, &constant_matrix(&pair.b));
    match proportionality(&flatten(&rate), &flatten(&comm)) {
        Some(c) => Fit::Constant(c),
        None => Fit::Residual(zip_with(&rate, &comm, |x, y| x - y)),
    }
}

/// `Tr(Aᵏ) / k` for `k ≥ 1`.
pub fn trace_invariant(a: &PolyMatrix, k: u32) -> Result<Poly> {
    if k == 0 {
        return Err(SymError::InvalidArgument("trace invariant order must be ≥ 1".into()));
    }
    let mut power = a.clone();
    for _ in 1..k {
        power = matmul(&power, a);
    }
    Ok(trace(&power).scale(&rat(1, k as i64)))
}

pub fn closed_form_invariants() -> [Poly; 3] {
    frenet::closed_form_invariants()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub pass: bool,
    /// `lhs − rhs` of the relation.
    pub residual: Poly,
}

/// Checks `I1 = H1`, `I2 = ½ H1² − H2` and `I3 = ⅓ H1 (H1² − 3 H2)` against
/// the listed invariants.
pub fn hamiltonian_relations(pair: &NambuPair) -> Vec<RelationCheck> {
    hamiltonian_relations_against(pair, &closed_form_invariants())
}

pub fn hamiltonian_relations_against(pair: &NambuPair, invariants: &[Poly; 3]) -> Vec<RelationCheck> {
    let (h1, h2) = (&pair.h1, &pair.h2);
    let h1_sq = h1 * h1;
    let rhs = [
        h1.clone(),
        h1_sq.scale(&rat(1, 2)) - h2,
        (h1 * &(&h1_sq - &h2.scale(&rat(3, 1)))).scale(&rat(1, 3)),
    ];
    let names = ["I1 = H1", "I2 = H1^2/2 - H2", "I3 = H1 (H1^2 - 3 H2)/3"];
    (0..3)
        .map(|i| {
            let residual = &invariants[i] - &rhs[i];
            RelationCheck {
                name: names[i],
                pass: residual.is_zero(),
                residual,
            }
        })
        .collect()
}

/// Ratio `trace_invariant(A, k) / I_k` for `k = 1..3`, when it is a constant.
pub fn trace_proportionality(a: &PolyMatrix) -> [Option<Rational>; 3] {
    let listed = closed_form_invariants();
    std::array::from_fn(|i| {
        let t = trace_invariant(a, i as u32 + 1).expect("k ≥ 1");
        proportionality(&[t], &[listed[i].clone()])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn x(i: usize) -> Poly {
        Poly::x(i)
    }

    #[test]
    fn commutator_trivial_cases() {
        let a = frenet::lax_pair().a;
        assert!(is_zero_matrix(&commutator(&a, &identity())));
        assert!(is_zero_matrix(&commutator(&a, &a)));
    }

    #[test]
    fn commutator_entries() {
        let pair = frenet::lax_pair();
        let c = commutator(&pair.a, &constant_matrix(&pair.b));
        // direct product oracle for entry (1,1): (AB)11 = -x1, (BA)11 = x1
        assert_eq!(c[0][0], x(1).scale(&int(-2)));
    }

    #[test]
    fn frenet_lax_fit_is_minus_half() {
        let fit = lax_fit(&frenet::lax_pair(), &frenet::field());
        assert_eq!(fit, Fit::Constant(rat(-1, 2)));
    }

    #[test]
    fn degenerate_lax_fit() {
        let z = || int(0);
        let pair = LaxPair {
            a: frenet::lax_pair().a,
            b: std::array::from_fn(|_| std::array::from_fn(|_| z())),
        };
        assert_eq!(lax_fit(&pair, &VecField::zero()), Fit::Constant(int(0)));
    }

    #[test]
    fn perturbed_b_gives_residual() {
        let mut pair = frenet::lax_pair();
        pair.b[0][1] = int(2);
        assert!(matches!(lax_fit(&pair, &frenet::field()), Fit::Residual(_)));
    }

    #[test]
    fn trace_invariants() {
        let a = frenet::lax_pair().a;
        assert_eq!(trace_invariant(&a, 1).unwrap(), (&x(0) + &x(2)).scale(&int(2)));
        assert_eq!(
            trace_invariant(&a, 2).unwrap(),
            (x(0).pow(2) + x(1).pow(2) + x(2).pow(2)).scale(&int(2))
        );
        assert_eq!(trace_invariant(&identity(), 1).unwrap(), Poly::constant(Alphabet::Position, int(3)));
        assert!(trace_invariant(&a, 0).is_err());
    }

    #[test]
    fn closed_form_invariants_are_conserved() {
        let motion = frenet::field();
        for inv in closed_form_invariants() {
            assert!(motion.apply(&inv).is_zero(), "{inv}");
        }
        let a = frenet::lax_pair().a;
        for k in 1..=3 {
            assert!(motion.apply(&trace_invariant(&a, k).unwrap()).is_zero());
        }
    }

    #[test]
    fn relations_hold_for_frenet_pair() {
        let checks = hamiltonian_relations(&frenet::hamiltonians());
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }

    #[test]
    fn perturbed_pair_fails_second_relation() {
        let mut pair = frenet::hamiltonians();
        pair.h2 = &pair.h2 + &Poly::one(Alphabet::Position);
        let checks = hamiltonian_relations(&pair);
        assert!(checks[0].pass);
        assert!(!checks[1].pass);
        assert_eq!(checks[1].residual, Poly::one(Alphabet::Position));
    }

    #[test]
    fn zero_pair_against_zero_invariants() {
        let z = Poly::zero(Alphabet::Position);
        let pair = NambuPair { h1: z.clone(), h2: z.clone() };
        let checks = hamiltonian_relations_against(&pair, &[z.clone(), z.clone(), z]);
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn trace_ratios() {
        // Newton's identity p3 = e1³ − 3 e1 e2 + 3 e3 with the elementary
        // symmetric functions read off A's principal minors.
        let a = frenet::lax_pair().a;
        let minor = |i: usize, j: usize| &a[i][i] * &a[j][j] - &a[i][j] * &a[j][i];
        let e1 = trace(&a);
        let e2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
        let e3 = &a[0][0] * &minor(1, 2) - &a[0][1] * &(&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
            + &a[0][2] * &(&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0]);
        let pair = frenet::hamiltonians();
        assert_eq!(e1, pair.h1.scale(&int(2)));
        assert_eq!(e2, pair.h2.scale(&int(4)));
        assert!(e3.is_zero());
        let p3 = e1.pow(3) - (&e1 * &e2).scale(&int(3)) + e3.scale(&int(3));
        assert_eq!(trace_invariant(&a, 3).unwrap(), p3.scale(&rat(1, 3)));

        let ratios = trace_proportionality(&a);
        assert_eq!(ratios, [Some(int(2)), Some(int(4)), Some(int(8))]);
    }
}
