//! Randomized exact identity checks, reproducible from a seed.

use serde::Serialize;

use crate::forms::{bivector_interior_product, div, grad, lie_derivative, rot, Convention, KForm, VecField};
use crate::homotopy::homotopy_potential;
use crate::mechanics::{bivector_field, nambu_bracket, nambu_flow_field, NambuPair};
use crate::poly::Poly;
use crate::random::{self, TestRng};

pub const DEFAULT_CASES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Check = fn(&mut TestRng) -> Option<String>;

fn run(name: &'static str, seed: u64, cases: usize, check: Check) -> IdentityOutcome {
    // each identity gets its own stream so adding one does not reshuffle the rest
    let mut rng = random::rng(seed ^ fxhash(name));
    let mut failures = 0;
    let mut counterexample = None;
    for _ in 0..cases {
        if let Some(msg) = check(&mut rng) {
            failures += 1;
            counterexample.get_or_insert(msg);
        }
    }
    IdentityOutcome {
        name,
        cases,
        failures,
        counterexample,
    }
}

fn fxhash(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn d_squared(rng: &mut TestRng) -> Option<String> {
    for degree in 0..=2 {
        let w = random::form(rng, degree, 4);
        let dd = w.d().d();
        if !dd.is_zero() {
            return Some(format!("d(d({w})) = {dd}"));
        }
    }
    None
}

fn rot_grad(rng: &mut TestRng) -> Option<String> {
    let f = random::poly(rng, 3);
    let r = rot(&grad(&f));
    (!r.is_zero()).then(|| format!("rot(grad({f})) = {r:?}"))
}

fn div_rot(rng: &mut TestRng) -> Option<String> {
    let h = random::field(rng, 3);
    let d = div(&rot(&h));
    (!d.is_zero()).then(|| format!("div(rot({h:?})) = {d}"))
}

fn homotopy_round_trip(rng: &mut TestRng) -> Option<String> {
    for degree in 0..=2 {
        let alpha = random::form(rng, degree, 3);
        let closed = alpha.d();
        match homotopy_potential(&closed) {
            Ok(pot) if pot.d() == closed => {}
            Ok(pot) => return Some(format!("d(H({closed})) = {} ", pot.d())),
            Err(e) => return Some(format!("H({closed}) failed: {e}")),
        }
    }
    None
}

fn nambu_antisymmetry(rng: &mut TestRng) -> Option<String> {
    let (h, f, g) = (random::poly(rng, 3), random::poly(rng, 3), random::poly(rng, 3));
    let b = |a: &Poly, b: &Poly, c: &Poly| nambu_bracket(a, b, c, Convention::Unit);
    let base = b(&h, &f, &g);
    let neg = -&base;
    let swaps = [b(&f, &h, &g), b(&h, &g, &f), b(&g, &f, &h)];
    let cyclic = [b(&f, &g, &h), b(&g, &h, &f)];
    (swaps.iter().any(|s| *s != neg) || cyclic.iter().any(|c| *c != base))
        .then(|| format!("antisymmetry fails for H={h}, F={f}, G={g}"))
}

fn nambu_leibniz(rng: &mut TestRng) -> Option<String> {
    let (h, f) = (random::poly(rng, 2), random::poly(rng, 2));
    let (g1, g2) = (random::poly(rng, 2), random::poly(rng, 2));
    let b = |g: &Poly| nambu_bracket(&h, &f, g, Convention::Unit);
    let lhs = b(&(&g1 * &g2));
    let rhs = &g1 * &b(&g2) + &g2 * &b(&g1);
    (lhs != rhs).then(|| format!("Leibniz fails for H={h}, F={f}, G1={g1}, G2={g2}"))
}

fn nambu_divergence_free(rng: &mut TestRng) -> Option<String> {
    let pair = NambuPair {
        h1: random::poly(rng, 3),
        h2: random::poly(rng, 3),
    };
    for conv in [Convention::Unit, Convention::Half] {
        let d = div(&nambu_flow_field(&pair, conv));
        if !d.is_zero() {
            return Some(format!("div of Nambu field for ({}, {}) = {d}", pair.h1, pair.h2));
        }
    }
    None
}

fn nambu_conservation(rng: &mut TestRng) -> Option<String> {
    let (h1, h2) = (random::poly(rng, 3), random::poly(rng, 3));
    let field = nambu_flow_field(&NambuPair { h1: h1.clone(), h2: h2.clone() }, Convention::Unit);
    let bad = !field.apply(&h1).is_zero() || !field.apply(&h2).is_zero();
    bad.then(|| format!("Hamiltonians ({h1}, {h2}) not conserved"))
}

fn lie_cartan(rng: &mut TestRng) -> Option<String> {
    let x = random::field(rng, 3);
    let lhs = lie_derivative(&x, &KForm::volume());
    let rhs = KForm::volume_with(div(&x));
    (lhs != rhs).then(|| format!("L_X Ω ≠ div X Ω for X = {x:?}"))
}

fn duality(rng: &mut TestRng) -> Option<String> {
    let v = random::field(rng, 3);
    let one = VecField::from_one_form(&v.to_one_form()).ok();
    let two = VecField::from_two_form(&v.to_two_form()).ok();
    (one.as_ref() != Some(&v) || two.as_ref() != Some(&v)).then(|| format!("duality fails for {v:?}"))
}

fn bivector_consistency(rng: &mut TestRng) -> Option<String> {
    let (h, f, g) = (random::poly(rng, 3), random::poly(rng, 3), random::poly(rng, 3));
    let dfdg = KForm::scalar(f.clone()).d().wedge(&KForm::scalar(g.clone()).d());
    for conv in [Convention::Unit, Convention::Half] {
        let c = bivector_interior_product(&bivector_field(&h, conv), &dfdg, Convention::Unit).value;
        if c != KForm::scalar(nambu_bracket(&h, &f, &g, conv)) {
            return Some(format!("bivector contraction ≠ bracket for H={h}, F={f}, G={g}"));
        }
    }
    None
}

fn canonical_form(rng: &mut TestRng) -> Option<String> {
    let (a, b) = (random::poly(rng, 3), random::poly(rng, 3));
    let p = &(&a * &b) - &(&b * &a) + (&a + &(-&a));
    let reparsed: Poly = a.to_string().parse().ok()?;
    let zeros = a.terms().any(|(_, c)| num_traits::Zero::is_zero(c));
    (!p.is_zero() || reparsed != a || zeros).then(|| format!("canonical form broken for {a}"))
}

pub const IDENTITIES: &[(&str, Check)] = &[
    ("d_of_d_is_zero", d_squared),
    ("rot_of_grad_is_zero", rot_grad),
    ("div_of_rot_is_zero", div_rot),
    ("homotopy_round_trip", homotopy_round_trip),
    ("nambu_antisymmetry", nambu_antisymmetry),
    ("nambu_leibniz", nambu_leibniz),
    ("nambu_field_divergence_free", nambu_divergence_free),
    ("nambu_hamiltonians_conserved", nambu_conservation),
    ("lie_derivative_of_volume_is_divergence", lie_cartan),
    ("vector_form_duality", duality),
    ("bivector_contraction_matches_bracket", bivector_consistency),
    ("canonical_form", canonical_form),
];

/// Runs every identity with `cases` random instances each.
pub fn run_all(seed: u64, cases: usize) -> Vec<IdentityOutcome> {
    IDENTITIES
        .iter()
        .map(|&(name, check)| run(name, seed, cases, check))
        .collect()
}

pub fn run_one(name: &str, seed: u64, cases: usize) -> Option<IdentityOutcome> {
    IDENTITIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(n, check)| run(n, seed, cases, check))
}
