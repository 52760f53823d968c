//! Nambu brackets, vector-Hamiltonian brackets, vector Lagrangians and the
//! on-shell checks that tie them together.
//!
//! Lagrangian components are indexed `L[0..3]` and correspond to the
//! classical `L¹, L², L³`; functions that take Euler-Lagrange indices use the
//! classical 1-based numbering.

use std::collections::BTreeMap;

use crate::error::{Result, SymError};
use crate::forms::{grad, rot, BiVec, Convention, VecField, CYCLIC};
use crate::poly::{proportionality, rat, Alphabet, Poly, Rational, Var};

pub type BracketConvention = Convention;

/// Two Hamiltonians generating a Nambu flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NambuPair {
    pub h1: Poly,
    pub h2: Poly,
}

/// Three Lagrangian densities over `(x0, x1, x2, v0, v1, v2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorLagrangian {
    pub l: [Poly; 3],
}

impl VectorLagrangian {
    pub fn new(l1: Poly, l2: Poly, l3: Poly) -> Self {
        VectorLagrangian {
            l: [l1.lift(), l2.lift(), l3.lift()],
        }
    }

    pub fn zero() -> Self {
        let z = Poly::zero(Alphabet::Extended);
        VectorLagrangian {
            l: [z.clone(), z.clone(), z],
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorLagrangian {
            l: std::array::from_fn(|i| self.l[i].scale(c)),
        }
    }
}

/// Outcome of fitting `lhs = c · rhs` for a rational constant `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fit<R> {
    Constant(Rational),
    /// No constant fits; carries the unscaled residual `lhs − rhs`.
    Residual(R),
}

impl<R> Fit<R> {
    pub fn constant(&self) -> Option<&Rational> {
        match self {
            Fit::Constant(c) => Some(c),
            Fit::Residual(_) => None,
        }
    }
}

/// `{H, F, G}`: the Jacobian determinant `det ∂(H, F, G)/∂(x0, x1, x2)`,
/// halved under [`Convention::Half`].
pub fn nambu_bracket(h: &Poly, f: &Poly, g: &Poly, conv: BracketConvention) -> Poly {
    let (gh, gf, gg) = (grad(h), grad(f), grad(g));
    let cross = VecField(std::array::from_fn(|i| {
        let (j, k) = CYCLIC[i];
        &gf[j] * &gg[k] - &gf[k] * &gg[j]
    }));
    gh.dot(&cross).scale(&conv.factor())
}

pub fn nambu_flow_field(pair: &NambuPair, conv: BracketConvention) -> VecField {
    VecField(std::array::from_fn(|i| {
        nambu_bracket(&pair.h1, &pair.h2, &Poly::x(i), conv)
    }))
}

/// `{h, G} = rot h · grad G`.
pub fn vector_bracket(h: &VecField, g: &Poly) -> Poly {
    rot(h).dot(&grad(g))
}

pub fn vh_flow_field(h: &VecField) -> VecField {
    rot(h)
}

/// Hamiltonian bivector of `H`; its dual vector is `factor · grad H`.
pub fn bivector_field(h: &Poly, conv: BracketConvention) -> BiVec {
    BiVec::from_dual(grad(h).scale(&conv.factor()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conservativity {
    pub conservative: bool,
    /// `div F`
    pub residual: Poly,
}

pub fn is_conservative(field: &VecField) -> Conservativity {
    let residual = crate::forms::div(field);
    Conservativity {
        conservative: residual.is_zero(),
        residual,
    }
}

/// `L = −x × v − h`.
pub fn vector_lagrangian_from_h(h: &VecField) -> VectorLagrangian {
    let xe = |i| Poly::x(i).lift();
    let v = Poly::v;
    VectorLagrangian {
        l: std::array::from_fn(|i| {
            let (j, k) = CYCLIC[i];
            &xe(k) * &v(j) - &xe(j) * &v(k) - h[i].lift()
        }),
    }
}

/// Lagrange multipliers, e.g. `λ¹ = (∂L³/∂v1 − ∂L²/∂v2) / 2` in classical
/// numbering, cyclic in the other two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multipliers(pub [Poly; 3]);

impl Multipliers {
    /// The multipliers as a position-space field, when velocity-free.
    pub fn position_field(&self) -> Option<VecField> {
        VecField::try_new(self.0[0].clone(), self.0[1].clone(), self.0[2].clone()).ok()
    }
}

pub fn lagrange_multipliers(lag: &VectorLagrangian) -> Multipliers {
    let half = rat(1, 2);
    Multipliers(std::array::from_fn(|a| {
        let (b, c) = CYCLIC[a];
        let dc = lag.l[c].partial(Var::v(b)).expect("extended alphabet");
        let db = lag.l[b].partial(Var::v(c)).expect("extended alphabet");
        (dc - db).scale(&half)
    }))
}

fn on_shell_bindings(motion: &VecField) -> BTreeMap<Var, Poly> {
    (0..3).map(|i| (Var::v(i), motion[i].clone())).collect()
}

/// Replaces velocities by the motion field.
pub fn on_shell(p: &Poly, motion: &VecField) -> Poly {
    match p.alphabet() {
        Alphabet::Position => p.clone(),
        Alphabet::Extended => p
            .substitute(&on_shell_bindings(motion))
            .expect("motion field is a position field"),
    }
}

/// Total time derivative along the motion, evaluated on-shell.
///
/// Velocity dependence is handled by the chain rule with acceleration
/// `a = J · motion`, `J` the Jacobian of the motion field.
pub fn total_derivative(p: &Poly, motion: &VecField) -> Poly {
    match p.alphabet() {
        Alphabet::Position => motion.apply(p),
        Alphabet::Extended => {
            let jac = motion.jacobian();
            let accel: [Poly; 3] = std::array::from_fn(|i| {
                (0..3).fold(Poly::zero(Alphabet::Position), |acc, j| {
                    acc + &jac[i][j] * &motion[j]
                })
            });
            let mut out = Poly::zero(Alphabet::Extended);
            for i in 0..3 {
                out += &(p.partial(Var::x(i)).expect("extended") * motion[i].lift());
                out += &(p.partial(Var::v(i)).expect("extended") * accel[i].lift());
            }
            on_shell(&out, motion)
        }
    }
}

/// Fits `λ̇ = s · rot h` along the motion. Without a fitting constant the
/// report carries `λ̇ − rot h`.
pub fn multiplier_flow_report(lambda: &VecField, h: &VecField, motion: &VecField) -> Fit<VecField> {
    let rate = lambda.map(|p| motion.apply(p));
    let target = rot(h);
    match proportionality(&rate.0, &target.0) {
        Some(s) => Fit::Constant(s),
        None => Fit::Residual(&rate - &target),
    }
}

fn check_index(i: usize) -> Result<usize> {
    if (1..=3).contains(&i) {
        Ok(i - 1)
    } else {
        Err(SymError::IndexOutOfRange(i))
    }
}

/// On-shell residual of the vector Euler-Lagrange equation for indices
/// `i, k ∈ {1, 2, 3}`:
///
/// ```text
/// ½ D_t(∂Lⁱ/∂v_k − ∂Lᵏ/∂v_i) − (∂Lᵏ/∂x_i − ∂Lⁱ/∂x_k)
/// ```
pub fn el_residual(lag: &VectorLagrangian, i: usize, k: usize, motion: &VecField) -> Result<Poly> {
    let (i, k) = (check_index(i)?, check_index(k)?);
    let d = |l: usize, var: Var| lag.l[l].partial(var).expect("extended alphabet");
    let momentum = d(i, Var::v(k)) - d(k, Var::v(i));
    let lhs = total_derivative(&momentum, motion).scale(&rat(1, 2));
    let force = d(k, Var::x(i)) - d(i, Var::x(k));
    Ok(lhs - on_shell(&force, motion))
}

/// `rot L + λ̇` on-shell, where `(rot L)ᵃ = ∂Lᶜ/∂x_b − ∂Lᵇ/∂x_c` for cyclic
/// `(a, b, c)` with partials taken at fixed velocity.
pub fn rot_l_check(lag: &VectorLagrangian, lambda: &VecField, motion: &VecField) -> VecField {
    VecField(std::array::from_fn(|a| {
        let (b, c) = CYCLIC[a];
        let curl = lag.l[c].partial(Var::x(b)).expect("extended")
            - lag.l[b].partial(Var::x(c)).expect("extended");
        on_shell(&curl, motion) + motion.apply(&lambda[a])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{bivector_interior_product, KForm};
    use crate::frenet;
    use crate::poly::int;

    fn x(i: usize) -> Poly {
        Poly::x(i)
    }

    /// Cofactor expansion along the first row, written independently of
    /// the cross-product route used by `nambu_bracket`.
    fn det_oracle(h: &Poly, f: &Poly, g: &Poly) -> Poly {
        let m: Vec<Vec<Poly>> = [h, f, g]
            .iter()
            .map(|p| (0..3).map(|j| p.dx(j)).collect())
            .collect();
        let minor = |c0: usize, c1: usize| &m[1][c0] * &m[2][c1] - &m[1][c1] * &m[2][c0];
        &m[0][0] * &minor(1, 2) - &m[0][1] * &minor(0, 2) + &m[0][2] * &minor(0, 1)
    }

    #[test]
    fn bracket_generates_first_component() {
        let p = frenet::hamiltonians();
        let got = nambu_bracket(&p.h1, &p.h2, &x(0), Convention::Unit);
        assert_eq!(got, x(1));
        assert_eq!(got, det_oracle(&p.h1, &p.h2, &x(0)));
    }

    #[test]
    fn bracket_matches_wedge_volume_coefficient() {
        let p = frenet::hamiltonians();
        let w = KForm::scalar(p.h1.clone())
            .d()
            .wedge(&KForm::scalar(p.h2.clone()).d())
            .wedge(&KForm::dx(0));
        assert_eq!(w.component(&[0, 1, 2]), x(1));
    }

    #[test]
    fn repeated_arguments_vanish() {
        let p = frenet::hamiltonians();
        let f = &x(0) * &x(1) + x(2).pow(3);
        assert!(nambu_bracket(&f, &f, &p.h2, Convention::Unit).is_zero());
        assert!(nambu_bracket(&p.h1, &p.h2, &p.h1, Convention::Unit).is_zero());
        assert!(nambu_bracket(&p.h1, &p.h2, &p.h2, Convention::Unit).is_zero());
    }

    #[test]
    fn flow_fields_under_both_conventions() {
        let p = frenet::hamiltonians();
        assert_eq!(nambu_flow_field(&p, Convention::Unit), frenet::field());
        assert_eq!(
            nambu_flow_field(&p, Convention::Half),
            frenet::field().scale(&rat(1, 2))
        );
        let same = NambuPair {
            h1: p.h1.clone(),
            h2: p.h1.clone(),
        };
        assert!(nambu_flow_field(&same, Convention::Unit).is_zero());
    }

    #[test]
    fn vector_bracket_examples() {
        let h = frenet::vector_hamiltonian();
        assert_eq!(vector_bracket(&h, &x(0)), x(1));
        assert!(vector_bracket(&h, &Poly::constant(Alphabet::Position, int(5))).is_zero());
        assert!(vector_bracket(&h, &frenet::hamiltonians().h2).is_zero());
    }

    #[test]
    fn vh_flow_examples() {
        assert_eq!(vh_flow_field(&frenet::vector_hamiltonian()), frenet::field());
        let f = &x(0) * &x(1) * &x(2);
        assert!(vh_flow_field(&grad(&f)).is_zero());
    }

    #[test]
    fn bivector_contraction_reproduces_bracket() {
        let p = frenet::hamiltonians();
        let df_dg = KForm::scalar(p.h2.clone()).d().wedge(&KForm::dx(0));
        for conv in [Convention::Unit, Convention::Half] {
            let b = bivector_field(&p.h1, conv);
            let c = bivector_interior_product(&b, &df_dg, Convention::Unit).value;
            assert_eq!(c, KForm::scalar(nambu_bracket(&p.h1, &p.h2, &x(0), conv)));
        }
        let dual = bivector_field(&p.h1, Convention::Unit).dual;
        let one = Poly::one(Alphabet::Position);
        let zero = Poly::zero(Alphabet::Position);
        assert_eq!(dual, VecField::new(one.clone(), zero, one));
        assert!(bivector_field(&Poly::constant(Alphabet::Position, int(3)), Convention::Unit).is_zero());
    }

    #[test]
    fn conservativity() {
        assert!(is_conservative(&frenet::field()).conservative);
        let z = Poly::zero(Alphabet::Position);
        let c = is_conservative(&VecField::new(x(0), z.clone(), z));
        assert!(!c.conservative);
        assert_eq!(c.residual, Poly::one(Alphabet::Position));
    }

    #[test]
    fn lagrangian_from_frenet_potential() {
        assert_eq!(
            vector_lagrangian_from_h(&frenet::vector_hamiltonian()),
            frenet::lagrangian()
        );
        let kinematic = vector_lagrangian_from_h(&VecField::zero());
        let expected: Poly = "x2*v1 - x1*v2".parse().unwrap();
        assert_eq!(kinematic.l[0], expected);
        for l in &kinematic.l {
            for i in 0..3 {
                let dv = l.partial(Var::v(i)).unwrap();
                assert_eq!(dv.degree_in(Var::V0) + dv.degree_in(Var::V1) + dv.degree_in(Var::V2), 0);
            }
        }
    }

    #[test]
    fn multipliers_of_frenet_lagrangian() {
        let lam = lagrange_multipliers(&frenet::lagrangian());
        let field = lam.position_field().unwrap();
        assert_eq!(field, VecField::radial().scale(&int(-1)));
        let zero = lagrange_multipliers(&VectorLagrangian::zero());
        assert!(zero.position_field().unwrap().is_zero());
        let scaled = lagrange_multipliers(&frenet::lagrangian().scale(&rat(5, 7)));
        assert_eq!(scaled.position_field().unwrap(), field.scale(&rat(5, 7)));
    }

    #[test]
    fn multiplier_flow_fits() {
        let h = frenet::vector_hamiltonian();
        let motion = frenet::field();
        let lam = VecField::radial().scale(&int(-1));
        assert_eq!(multiplier_flow_report(&lam, &h, &motion), Fit::Constant(int(-1)));
        assert_eq!(
            multiplier_flow_report(&VecField::zero(), &h, &motion),
            Fit::Constant(int(0))
        );
        let z = Poly::zero(Alphabet::Position);
        let bad = VecField::new(x(0).pow(2), z.clone(), z);
        match multiplier_flow_report(&bad, &h, &motion) {
            Fit::Residual(r) => assert!(!r.is_zero()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn euler_lagrange_on_shell() {
        let lag = frenet::lagrangian();
        let motion = frenet::field();
        for (i, k) in [(1, 2), (2, 3), (3, 1), (2, 1)] {
            assert!(el_residual(&lag, i, k, &motion).unwrap().is_zero(), "({i},{k})");
        }
        for i in 1..=3 {
            assert!(el_residual(&lag, i, i, &motion).unwrap().is_zero());
            assert!(el_residual(&VectorLagrangian::zero(), i, 1, &motion).unwrap().is_zero());
        }
        assert!(matches!(
            el_residual(&lag, 0, 1, &motion),
            Err(SymError::IndexOutOfRange(0))
        ));
        assert!(el_residual(&lag, 1, 4, &motion).is_err());
    }

    #[test]
    fn euler_lagrange_is_only_on_shell() {
        // off-shell the (1,2) residual is v2-dependent: ½ D_t(2 x2) vs 2 v2 + x1
        let lag = frenet::lagrangian();
        let force = lag.l[1].partial(Var::X0).unwrap() - lag.l[0].partial(Var::X1).unwrap();
        let expected: Poly = "2*v2 + x1".parse().unwrap();
        assert_eq!(force, expected);
    }

    #[test]
    fn total_derivative_handles_velocities() {
        let motion = frenet::field();
        // D_t v0 = a0 = ∂(x1)/∂x · motion = x2 - x0
        assert_eq!(total_derivative(&Poly::v(0), &motion), &x(2) - &x(0));
        assert_eq!(total_derivative(&x(0), &motion), x(1));
    }

    #[test]
    fn rot_l_check_cases() {
        let motion = frenet::field();
        let lag = VectorLagrangian::new("v0*v1".parse().unwrap(), "v2".parse().unwrap(), Poly::zero(Alphabet::Extended));
        assert!(rot_l_check(&lag, &VecField::zero(), &motion).is_zero());

        let l1 = frenet::lagrangian();
        let l2 = vector_lagrangian_from_h(&grad(&x(0).pow(3)));
        let lam = VecField::radial();
        let sum = VectorLagrangian {
            l: std::array::from_fn(|i| &l1.l[i] + &l2.l[i]),
        };
        let lhs = rot_l_check(&sum, &lam, &motion);
        let rhs = &rot_l_check(&l1, &lam, &motion) + &rot_l_check(&l2, &VecField::zero(), &motion);
        assert_eq!(lhs, rhs);
    }
}
