use serde::Serialize;
use serde_json::Value;

use nambu_core::forms::{KForm, VecField};
use nambu_core::lax::PolyMatrix;
use nambu_core::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// asserted property holds
    Pass,
    /// asserted property is violated
    Fail,
    /// informational: a fitted constant or residual, never fails the run
    Report,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Property {
    pub property: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_constant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
}

impl Property {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Property {
            property: name.into(),
            status,
            residual: None,
            fitted_constant: None,
            value: None,
        }
    }

    /// Pass when `ok`, otherwise fail with the given residual.
    pub fn check(name: impl Into<String>, ok: bool, residual: impl FnOnce() -> Value) -> Self {
        let mut p = Property::new(name, if ok { Status::Pass } else { Status::Fail });
        if !ok {
            p.residual = Some(residual());
        }
        p
    }

    pub fn with_constant(mut self, c: &Rational) -> Self {
        self.fitted_constant = Some(rational_string(c));
        self
    }

    pub fn with_residual(mut self, r: Value) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn with_value(mut self, v: Value) -> Self {
        self.value = Some(v);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub system: String,
    pub convention: String,
    pub seed: u64,
    pub cases_per_identity: usize,
    pub properties: Vec<Property>,
    pub passed: bool,
}

pub fn rational_string(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn poly_json(p: &Poly) -> Value {
    Value::String(p.to_string())
}

pub fn field_json(v: &VecField) -> Value {
    Value::Array(v.components().iter().map(poly_json).collect())
}

pub fn matrix_json(m: &PolyMatrix) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(poly_json).collect()))
            .collect(),
    )
}

pub fn form_json(f: &KForm) -> Value {
    serde_json::to_value(f).expect("form serializes")
}
