//! Dynamical systems accepted by `--system`: the builtin `frenet` or a JSON
//! file of polynomial strings.
//!
//! ```json
//! {
//!   "field": ["x1", "x2 - x0", "-x1"],
//!   "hamiltonians": ["x0 + x2", "x0*x2 - 1/2*x1^2"],
//!   "vector_hamiltonian": ["...", "...", "..."]
//! }
//! ```
//!
//! Every key is optional but at least one must be present. Without an
//! explicit field, it is generated from the Hamiltonian pair (unit
//! convention) or else as `rot h`.

use std::path::Path;

use serde::Deserialize;

use nambu_core::forms::VecField;
use nambu_core::frenet;
use nambu_core::mechanics::{nambu_flow_field, NambuPair};
use nambu_core::{rot, Alphabet, Convention, Poly};

use crate::CliError;

#[derive(Clone, Debug)]
pub struct System {
    pub name: String,
    pub field: VecField,
    pub pair: Option<NambuPair>,
    pub vector_hamiltonian: Option<VecField>,
    pub builtin_frenet: bool,
}

impl System {
    pub fn frenet() -> Self {
        System {
            name: "frenet".into(),
            field: frenet::field(),
            pair: Some(frenet::hamiltonians()),
            vector_hamiltonian: Some(frenet::vector_hamiltonian()),
            builtin_frenet: true,
        }
    }

    /// Invariants tracked by `simulate`: the listed invariants for the
    /// builtin, else the Hamiltonian pair when one is given.
    pub fn invariants(&self) -> Vec<Poly> {
        if self.builtin_frenet {
            frenet::closed_form_invariants().to_vec()
        } else if let Some(pair) = &self.pair {
            vec![pair.h1.clone(), pair.h2.clone()]
        } else {
            Vec::new()
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    field: Option<[String; 3]>,
    hamiltonians: Option<[String; 2]>,
    vector_hamiltonian: Option<[String; 3]>,
}

fn parse_poly(text: &str, what: &str) -> Result<Poly, CliError> {
    Poly::parse(text, Alphabet::Position).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn parse_field(texts: &[String; 3], what: &str) -> Result<VecField, CliError> {
    let [a, b, c] = texts;
    Ok(VecField::new(
        parse_poly(a, &format!("{what}[0]"))?,
        parse_poly(b, &format!("{what}[1]"))?,
        parse_poly(c, &format!("{what}[2]"))?,
    ))
}

pub fn parse_system(text: &str, name: &str) -> Result<System, CliError> {
    let file: SystemFile =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{name}: {e}")))?;
    let field = file.field.as_ref().map(|f| parse_field(f, "field")).transpose()?;
    let pair = match &file.hamiltonians {
        Some([h1, h2]) => Some(NambuPair {
            h1: parse_poly(h1, "hamiltonians[0]")?,
            h2: parse_poly(h2, "hamiltonians[1]")?,
        }),
        None => None,
    };
    let vector_hamiltonian = file
        .vector_hamiltonian
        .as_ref()
        .map(|h| parse_field(h, "vector_hamiltonian"))
        .transpose()?;
    let field = match (field, &pair, &vector_hamiltonian) {
        (Some(f), _, _) => f,
        (None, Some(p), _) => nambu_flow_field(p, Convention::Unit),
        (None, None, Some(h)) => rot(h),
        (None, None, None) => {
            return Err(CliError::Parse(format!(
                "{name}: need at least one of field, hamiltonians, vector_hamiltonian"
            )))
        }
    };
    Ok(System {
        name: name.to_string(),
        field,
        pair,
        vector_hamiltonian,
        builtin_frenet: false,
    })
}

/// Resolves a `--system` argument.
pub fn load_system(arg: &str) -> Result<System, CliError> {
    if arg == "frenet" {
        return Ok(System::frenet());
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
    parse_system(&text, arg)
}
