//! Library side of the `nambu` command line tool. Every subcommand renders
//! into an [`Outcome`] so it can be tested without spawning a process.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use nambu_core::forms::KForm;
use nambu_core::integrate::{integrate, invariant_drift, volume_drift, write_csv};
use nambu_core::lax::{self, trace_invariant, trace_proportionality};
use nambu_core::mechanics::{nambu_bracket, Fit, NambuPair};
use nambu_core::{frenet, homotopy_potential, Alphabet, Convention, IntegrateError, Poly, SymError};

pub mod report;
pub mod system;
pub mod verify;

use report::{matrix_json, poly_json, rational_string};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NOT_CLOSED: i32 = 4;
pub const EXIT_UNSUPPORTED: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("input form is not closed; d(form) = {residual}")]
    NotClosed { residual: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("integration failed: {0}")]
    Integrate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Io(_) => EXIT_IO,
            CliError::NotClosed { .. } => EXIT_NOT_CLOSED,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Integrate(_) => EXIT_PROPERTY,
        }
    }
}

impl From<SymError> for CliError {
    fn from(e: SymError) -> Self {
        match e {
            SymError::NotClosed { residual } => CliError::NotClosed {
                residual: residual.to_string(),
            },
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<IntegrateError> for CliError {
    fn from(e: IntegrateError) -> Self {
        match e {
            IntegrateError::InvalidStep(_) | IntegrateError::InvalidHorizon { .. } => {
                CliError::Parse(e.to_string())
            }
            IntegrateError::Symbolic(s) => s.into(),
            other => CliError::Integrate(other.to_string()),
        }
    }
}

/// What a subcommand prints and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_PASS }
    }

    fn verdict(stdout: String, ok: bool) -> Self {
        Outcome {
            stdout,
            code: if ok { EXIT_PASS } else { EXIT_PROPERTY },
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_convention(s: &str) -> Result<Convention, CliError> {
    s.parse().map_err(|_| CliError::Parse(format!("unknown convention '{s}' (unit|half)")))
}

pub fn parse_x0(s: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Parse(format!("--x0 needs three comma-separated numbers, got '{s}'")));
    }
    let mut x = [0.0; 3];
    for (slot, part) in x.iter_mut().zip(parts) {
        *slot = part
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Parse(format!("--x0: '{part}' is not a finite number")))?;
    }
    Ok(x)
}

pub fn parse_poly(text: &str, what: &str) -> Result<Poly, CliError> {
    Poly::parse(text, Alphabet::Position).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

pub fn cmd_verify(system: &str, conv: Convention, seed: u64, cases: usize, json: bool) -> Result<Outcome, CliError> {
    let system = system::load_system(system)?;
    let rep = verify::verify(&system, conv, seed, cases);
    let text = if json {
        to_json(&rep)
    } else {
        let mut s = format!("system {} convention {} seed {}\n", rep.system, rep.convention, rep.seed);
        for p in &rep.properties {
            let status = match p.status {
                report::Status::Pass => "pass",
                report::Status::Fail => "FAIL",
                report::Status::Report => "report",
            };
            s.push_str(&format!("{status:>6}  {}", p.property));
            if let Some(c) = &p.fitted_constant {
                s.push_str(&format!("  c = {c}"));
            }
            if p.status == report::Status::Fail {
                if let Some(r) = &p.residual {
                    s.push_str(&format!("  residual {r}"));
                }
            }
            s.push('\n');
        }
        s.push_str(if rep.passed { "verdict: pass\n" } else { "verdict: fail\n" });
        s
    };
    Ok(Outcome::verdict(text, rep.passed))
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulateSummary {
    pub system: String,
    pub x0: [f64; 3],
    pub dt: f64,
    pub horizon: f64,
    pub steps: usize,
    pub invariant_drift: Vec<f64>,
    pub volume_drift: f64,
    pub out: String,
}

pub fn cmd_simulate(
    system: &str,
    x0: [f64; 3],
    dt: f64,
    horizon: f64,
    out: &Path,
    json: bool,
) -> Result<Outcome, CliError> {
    let system = system::load_system(system)?;
    let traj = integrate(&system.field, x0, dt, horizon)?;
    let vol = volume_drift(&system.field, x0, dt, horizon)?;
    let invariants = system.invariants();
    let drift = invariant_drift(&traj, &invariants)?;

    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", out.display()));
    let file = File::create(out).map_err(io)?;
    let mut w = BufWriter::new(file);
    write_csv(&mut w, &traj, &invariants, &vol.determinants).map_err(io)?;
    w.flush().map_err(io)?;

    let summary = SimulateSummary {
        system: system.name,
        x0,
        dt,
        horizon,
        steps: traj.states.len() - 1,
        invariant_drift: drift,
        volume_drift: vol.max_drift,
        out: out.display().to_string(),
    };
    let text = if json {
        to_json(&summary)
    } else {
        let mut s = format!("wrote {} rows to {}\n", traj.states.len(), summary.out);
        for (k, d) in summary.invariant_drift.iter().enumerate() {
            s.push_str(&format!("I{} drift {d:.3e}\n", k + 1));
        }
        s.push_str(&format!("volume drift {:.3e}\n", summary.volume_drift));
        s
    };
    Ok(Outcome::pass(text))
}

fn read_form(path: &Path) -> Result<KForm, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    KForm::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// One line per basis element, e.g. `dx0: 1/3*x1^2 + ...`; zero prints `0`.
pub fn format_form(form: &KForm) -> String {
    if form.is_zero() {
        return "0\n".into();
    }
    let mut s = String::new();
    for (idx, p) in form.components() {
        let basis: Vec<String> = idx.iter().map(|i| format!("dx{i}")).collect();
        let basis = if basis.is_empty() { "1".to_string() } else { basis.join("^") };
        s.push_str(&format!("{basis}: {p}\n"));
    }
    s
}

pub fn cmd_reconstruct(path: &Path, check: bool, json: bool) -> Result<Outcome, CliError> {
    let form = read_form(path)?;
    let pot = homotopy_potential(&form)?;
    let round_trip = if check {
        // re-parse what was printed, not the in-memory value
        let back = KForm::from_json(&pot.to_json())?;
        Some(back.d() == form)
    } else {
        None
    };
    let text = if json {
        let mut v = serde_json::to_value(&pot).expect("form serializes");
        if let Some(ok) = round_trip {
            v["check"] = Value::Bool(ok);
        }
        to_json(&v)
    } else {
        let mut s = format_form(&pot);
        if let Some(ok) = round_trip {
            s.push_str(if ok { "check: pass\n" } else { "check: fail\n" });
        }
        s
    };
    Ok(Outcome::verdict(text, round_trip.unwrap_or(true)))
}

pub fn cmd_bracket(h: &str, f: &str, g: &str, conv: Convention) -> Result<Outcome, CliError> {
    let h = parse_poly(h, "H")?;
    let f = parse_poly(f, "F")?;
    let g = parse_poly(g, "G")?;
    Ok(Outcome::pass(format!("{}\n", nambu_bracket(&h, &f, &g, conv))))
}

#[derive(Clone, Debug, Serialize)]
pub struct LaxReport {
    pub fitted_constant: Option<String>,
    pub residual: Option<Value>,
    pub trace_invariants: Vec<String>,
    pub trace_ratios: Vec<Option<String>>,
    pub closed_form_invariants: Vec<String>,
    pub relations: Vec<Value>,
    pub passed: bool,
}

/// `perturb` shifts H2 by one before checking the relations; it exists so
/// tests can confirm failures are surfaced.
pub fn cmd_lax(system: &str, json: bool, perturb: bool) -> Result<Outcome, CliError> {
    if system != "frenet" {
        return Err(CliError::Unsupported(format!(
            "lax needs the builtin frenet system, got '{system}'"
        )));
    }
    let pair = frenet::lax_pair();
    let field = frenet::field();
    let (fitted, residual) = match lax::lax_fit(&pair, &field) {
        Fit::Constant(c) => (Some(rational_string(&c)), None),
        Fit::Residual(r) => (None, Some(matrix_json(&r))),
    };
    let traces: Vec<Poly> = (1..=3).map(|k| trace_invariant(&pair.a, k).expect("k ≥ 1")).collect();
    let closed = lax::closed_form_invariants();
    let mut hs = frenet::hamiltonians();
    if perturb {
        hs = NambuPair {
            h1: hs.h1,
            h2: &hs.h2 + &Poly::one(Alphabet::Position),
        };
    }
    let relations = lax::hamiltonian_relations(&hs);
    let conserved = traces.iter().chain(closed.iter()).all(|p| field.apply(p).is_zero());
    let passed = conserved && relations.iter().all(|r| r.pass);

    let rep = LaxReport {
        fitted_constant: fitted,
        residual,
        trace_invariants: traces.iter().map(Poly::to_string).collect(),
        trace_ratios: trace_proportionality(&pair.a)
            .iter()
            .map(|c| c.as_ref().map(rational_string))
            .collect(),
        closed_form_invariants: closed.iter().map(Poly::to_string).collect(),
        relations: relations
            .iter()
            .map(|r| json!({"relation": r.name, "status": if r.pass { "pass" } else { "fail" }, "residual": poly_json(&r.residual)}))
            .collect(),
        passed,
    };
    let text = if json {
        to_json(&rep)
    } else {
        let mut s = String::new();
        match &rep.fitted_constant {
            Some(c) => s.push_str(&format!("lax fit: dA/dt = c [A, B] with c = {c}\n")),
            None => s.push_str("lax fit: no constant c\n"),
        }
        for (k, (t, r)) in rep.trace_invariants.iter().zip(&rep.trace_ratios).enumerate() {
            let ratio = r.as_deref().unwrap_or("none");
            s.push_str(&format!("tr A^{}/{} = {t}  (ratio to I{} = {ratio})\n", k + 1, k + 1, k + 1));
        }
        for (k, i) in rep.closed_form_invariants.iter().enumerate() {
            s.push_str(&format!("I{} = {i}\n", k + 1));
        }
        s.push_str(&format!("invariants conserved: {}\n", if conserved { "pass" } else { "fail" }));
        for r in &relations {
            s.push_str(&format!("{}: {}\n", r.name, if r.pass { "pass" } else { "fail" }));
        }
        s
    };
    Ok(Outcome::verdict(text, passed))
}
