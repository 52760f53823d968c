//! The symbolic verification suite behind `nambu verify`.

use serde_json::Value;

use nambu_core::forms::{bivector_interior_product, KForm, VecField};
use nambu_core::identities;
use nambu_core::lax::{self, trace_invariant, trace_proportionality};
use nambu_core::mechanics::{
    bivector_field, el_residual, is_conservative, lagrange_multipliers, multiplier_flow_report,
    nambu_bracket, nambu_flow_field, rot_l_check, vector_lagrangian_from_h, Fit, NambuPair,
};
use nambu_core::poly::proportionality;
use nambu_core::{frenet, homotopy_potential, lie_derivative, rot, Convention, Poly};

use crate::report::{field_json, form_json, matrix_json, poly_json, Property, Status, VerifyReport};
use crate::system::System;

pub const EL_PAIRS: [(usize, usize); 3] = [(1, 2), (2, 3), (3, 1)];

pub fn verify(system: &System, conv: Convention, seed: u64, cases: usize) -> VerifyReport {
    let mut props = Vec::new();

    for outcome in identities::run_all(seed, cases) {
        let name = format!("identity:{}", outcome.name);
        let p = Property::check(name, outcome.passed(), || {
            Value::String(outcome.counterexample.clone().unwrap_or_default())
        });
        props.push(p.with_value(Value::from(format!(
            "{}/{} cases",
            outcome.cases - outcome.failures,
            outcome.cases
        ))));
    }

    let field = &system.field;
    let cons = is_conservative(field);
    props.push(Property::check("field_divergence_free", cons.conservative, || {
        poly_json(&cons.residual)
    }));
    let lie = lie_derivative(field, &KForm::volume());
    props.push(Property::check("volume_form_preserved", lie.is_zero(), || form_json(&lie)));

    let psi = field.to_two_form();
    let reconstructed = match homotopy_potential(&psi) {
        Ok(pot) => {
            let ok = pot.d() == psi;
            props.push(
                Property::check("homotopy_potential_regenerates_two_form", ok, || {
                    form_json(&(&pot.d() - &psi))
                })
                .with_value(form_json(&pot)),
            );
            VecField::from_one_form(&pot).ok()
        }
        Err(e) => {
            props.push(
                Property::new("homotopy_potential_regenerates_two_form", Status::Fail)
                    .with_residual(Value::String(e.to_string())),
            );
            None
        }
    };

    if system.builtin_frenet {
        let listed = frenet::vector_hamiltonian();
        let ok = reconstructed.as_ref() == Some(&listed);
        props.push(Property::check("homotopy_potential_matches_listed_h", ok, || {
            reconstructed.as_ref().map(field_json).unwrap_or(Value::Null)
        }));
    }

    let h = system.vector_hamiltonian.clone().or(reconstructed);
    if let Some(h) = &h {
        let r = rot(h);
        props.push(Property::check("rot_h_generates_field", &r == field, || {
            field_json(&(&r - field))
        }));
    }

    if let Some(pair) = &system.pair {
        props.extend(nambu_checks(pair, field, conv));
    }

    if let Some(h) = &h {
        props.extend(lagrangian_checks(system, h, field));
    }

    if system.builtin_frenet {
        props.extend(lax_checks(field));
    }

    let passed = props.iter().all(|p| p.status != Status::Fail);
    VerifyReport {
        system: system.name.clone(),
        convention: conv.name().to_string(),
        seed,
        cases_per_identity: cases,
        properties: props,
        passed,
    }
}

fn nambu_checks(pair: &NambuPair, field: &VecField, conv: Convention) -> Vec<Property> {
    let mut props = Vec::new();
    let nambu = nambu_flow_field(pair, conv);
    let name = "nambu_field_equals_field";
    if &nambu == field {
        props.push(Property::new(name, Status::Pass));
    } else {
        match proportionality(&nambu.0, &field.0) {
            // the ½ convention only rescales the field; surface it, do not fail
            Some(c) if conv == Convention::Half => props.push(
                Property::new(name, Status::Report)
                    .with_constant(&c)
                    .with_residual(field_json(&(&nambu - field))),
            ),
            _ => props.push(
                Property::new(name, Status::Fail).with_residual(field_json(&(&nambu - field))),
            ),
        }
    }

    let self_brackets = [
        nambu_bracket(&pair.h1, &pair.h2, &pair.h1, conv),
        nambu_bracket(&pair.h1, &pair.h2, &pair.h2, conv),
    ];
    let rates = [field.apply(&pair.h1), field.apply(&pair.h2)];
    let ok = self_brackets.iter().chain(&rates).all(Poly::is_zero);
    props.push(Property::check("hamiltonians_conserved", ok, || {
        Value::Array(rates.iter().map(poly_json).collect())
    }));

    let bivec = bivector_field(&pair.h1, conv);
    let dh2 = KForm::scalar(pair.h2.clone()).d();
    let ok = (0..3).all(|i| {
        let c = bivector_interior_product(&bivec, &dh2.wedge(&KForm::dx(i)), Convention::Unit).value;
        c == KForm::scalar(nambu_bracket(&pair.h1, &pair.h2, &Poly::x(i), conv))
    });
    props.push(Property::check("bivector_contraction_matches_bracket", ok, || Value::Null));
    props
}

fn lagrangian_checks(system: &System, h: &VecField, field: &VecField) -> Vec<Property> {
    let mut props = Vec::new();
    let lag = vector_lagrangian_from_h(h);
    if system.builtin_frenet {
        props.push(Property::check(
            "lagrangian_matches_listed",
            lag == frenet::lagrangian(),
            || Value::Null,
        ));
    }
    for (i, k) in EL_PAIRS {
        let r = el_residual(&lag, i, k, field).expect("indices in range");
        props.push(Property::check(format!("euler_lagrange_on_shell({i},{k})"), r.is_zero(), || {
            poly_json(&r)
        }));
    }

    let lambda = lagrange_multipliers(&lag);
    match lambda.position_field() {
        Some(lambda) => {
            let p = Property::new("multiplier_rate_vs_rot_h", Status::Report).with_value(field_json(&lambda));
            props.push(match multiplier_flow_report(&lambda, h, field) {
                Fit::Constant(s) => p.with_constant(&s),
                Fit::Residual(r) => p.with_residual(field_json(&r)),
            });
            let r = rot_l_check(&lag, &lambda, field);
            props.push(Property::new("rot_l_plus_multiplier_rate", Status::Report).with_residual(field_json(&r)));
        }
        None => props.push(
            Property::new("multiplier_rate_vs_rot_h", Status::Report)
                .with_residual(Value::String("multipliers depend on velocity".into())),
        ),
    }
    props
}

fn lax_checks(field: &VecField) -> Vec<Property> {
    let mut props = Vec::new();
    let pair = frenet::lax_pair();
    let p = Property::new("lax_fit", Status::Report);
    props.push(match lax::lax_fit(&pair, field) {
        Fit::Constant(c) => p.with_constant(&c),
        Fit::Residual(r) => p.with_residual(matrix_json(&r)),
    });

    let rates: Vec<Poly> = (1..=3)
        .map(|k| field.apply(&trace_invariant(&pair.a, k).expect("k ≥ 1")))
        .collect();
    props.push(Property::check(
        "trace_invariants_conserved",
        rates.iter().all(Poly::is_zero),
        || Value::Array(rates.iter().map(poly_json).collect()),
    ));

    let closed = lax::closed_form_invariants();
    let rates: Vec<Poly> = closed.iter().map(|i| field.apply(i)).collect();
    props.push(Property::check(
        "closed_form_invariants_conserved",
        rates.iter().all(Poly::is_zero),
        || Value::Array(rates.iter().map(poly_json).collect()),
    ));

    for (k, ratio) in trace_proportionality(&pair.a).iter().enumerate() {
        let p = Property::new(format!("trace_invariant_ratio(k={})", k + 1), Status::Report);
        props.push(match ratio {
            Some(c) => p.with_constant(c),
            None => p.with_residual(Value::String("not a constant multiple".into())),
        });
    }

    for rel in lax::hamiltonian_relations(&frenet::hamiltonians()) {
        props.push(Property::check(format!("relation:{}", rel.name), rel.pass, || {
            poly_json(&rel.residual)
        }));
    }
    props
}
