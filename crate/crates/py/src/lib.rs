//! Python bindings: exact polynomials, the Nambu bracket, vector calculus,
//! homotopy reconstruction, the Lax fit, RK4 simulation and the verify suite.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nambu_cli::report::rational_string;
use nambu_core::forms::KForm;
use nambu_core::integrate::{integrate, invariant_drift, volume_drift};
use nambu_core::mechanics::{self, Fit, NambuPair};
use nambu_core::random::seed_from_env;
use nambu_core::{frenet, lax, Alphabet, Convention, Poly, SymError, Var, VecField};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cli_error(e: nambu_cli::CliError) -> PyErr {
    match e {
        nambu_cli::CliError::Io(msg) => PyOSError::new_err(msg),
        other => value_error(other),
    }
}

/// Exact polynomial over the rationals in x0, x1, x2 (and v0, v1, v2).
#[pyclass(name = "Poly", module = "nambu", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPoly(Poly);

#[derive(FromPyObject)]
enum PolyLike {
    Poly(PyPoly),
    Text(String),
}

impl PolyLike {
    fn into_poly(self) -> PyResult<Poly> {
        match self {
            PolyLike::Poly(p) => Ok(p.0),
            PolyLike::Text(s) => Poly::parse(&s, Alphabet::Position).map_err(value_error),
        }
    }
}

fn field_of(components: Vec<PolyLike>) -> PyResult<VecField> {
    let [a, b, c]: [PolyLike; 3] = components
        .try_into()
        .map_err(|_| PyValueError::new_err("a vector field needs exactly three components"))?;
    VecField::try_new(a.into_poly()?, b.into_poly()?, c.into_poly()?).map_err(value_error)
}

fn field_out(v: VecField) -> Vec<PyPoly> {
    v.0.into_iter().map(PyPoly).collect()
}

fn convention(name: &str) -> PyResult<Convention> {
    name.parse().map_err(|_: SymError| PyValueError::new_err(format!("unknown convention '{name}'")))
}

fn binary(a: &PyPoly, b: PolyLike, op: fn(&Poly, &Poly) -> nambu_core::Result<Poly>) -> PyResult<PyPoly> {
    let b = match b {
        PolyLike::Poly(p) => p.0,
        PolyLike::Text(s) => Poly::parse(&s, a.0.alphabet()).map_err(value_error)?,
    };
    op(&a.0, &b).map(PyPoly).map_err(value_error)
}

#[pymethods]
impl PyPoly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse::<Poly>().map(PyPoly).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }

    fn __add__(&self, other: PolyLike) -> PyResult<PyPoly> {
        binary(self, other, Poly::checked_add)
    }

    fn __sub__(&self, other: PolyLike) -> PyResult<PyPoly> {
        binary(self, other, Poly::checked_sub)
    }

    fn __mul__(&self, other: PolyLike) -> PyResult<PyPoly> {
        binary(self, other, Poly::checked_mul)
    }

    fn __neg__(&self) -> PyPoly {
        PyPoly(-&self.0)
    }

    fn __pow__(&self, exp: u32, _modulo: Option<u32>) -> PyPoly {
        PyPoly(self.0.pow(exp))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Total degree, `None` for the zero polynomial.
    fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    fn partial(&self, var: &str) -> PyResult<PyPoly> {
        let v = Var::from_name(var).ok_or_else(|| PyValueError::new_err(format!("unknown variable '{var}'")))?;
        self.0.partial(v).map(PyPoly).map_err(value_error)
    }

    fn __call__(&self, point: Vec<f64>) -> PyResult<f64> {
        if point.len() != self.0.alphabet().len() {
            return Err(PyValueError::new_err(format!(
                "expected {} coordinates, got {}",
                self.0.alphabet().len(),
                point.len()
            )));
        }
        Ok(self.0.eval_f64(&point))
    }
}

/// {H, F, G}: the Jacobian determinant, halved under `convention="half"`.
#[pyfunction]
#[pyo3(signature = (h, f, g, convention = "unit"))]
fn nambu_bracket(h: PolyLike, f: PolyLike, g: PolyLike, convention: &str) -> PyResult<PyPoly> {
    let conv = self::convention(convention)?;
    Ok(PyPoly(mechanics::nambu_bracket(&h.into_poly()?, &f.into_poly()?, &g.into_poly()?, conv)))
}

#[pyfunction]
#[pyo3(signature = (h1, h2, convention = "unit"))]
fn nambu_flow_field(h1: PolyLike, h2: PolyLike, convention: &str) -> PyResult<Vec<PyPoly>> {
    let pair = NambuPair {
        h1: h1.into_poly()?,
        h2: h2.into_poly()?,
    };
    Ok(field_out(mechanics::nambu_flow_field(&pair, self::convention(convention)?)))
}

#[pyfunction]
fn grad(f: PolyLike) -> PyResult<Vec<PyPoly>> {
    Ok(field_out(nambu_core::grad(&f.into_poly()?)))
}

#[pyfunction]
fn rot(v: Vec<PolyLike>) -> PyResult<Vec<PyPoly>> {
    Ok(field_out(nambu_core::rot(&field_of(v)?)))
}

#[pyfunction]
fn div(v: Vec<PolyLike>) -> PyResult<PyPoly> {
    Ok(PyPoly(nambu_core::div(&field_of(v)?)))
}

/// Radial-gauge potential of a closed form given as JSON
/// (`{"degree": 2, "components": {"01": "..."}}`); returns the same format.
#[pyfunction]
fn reconstruct(form_json: &str) -> PyResult<String> {
    let form = KForm::from_json(form_json).map_err(value_error)?;
    nambu_core::homotopy_potential(&form)
        .map(|p| p.to_json())
        .map_err(value_error)
}

/// Vector Hamiltonian whose curl is the given field, via the homotopy
/// operator on its dual 2-form.
#[pyfunction]
fn vector_hamiltonian(field: Vec<PolyLike>) -> PyResult<Vec<PyPoly>> {
    let psi = field_of(field)?.to_two_form();
    let pot = nambu_core::homotopy_potential(&psi).map_err(value_error)?;
    VecField::from_one_form(&pot).map(field_out).map_err(value_error)
}

/// Constant `c` with `dA/dt = c [A, B]` for the builtin Lax pair, as a
/// string such as `"-1/2"`.
#[pyfunction]
fn lax_fit() -> Option<String> {
    match lax::lax_fit(&frenet::lax_pair(), &frenet::field()) {
        Fit::Constant(c) => Some(rational_string(&c)),
        Fit::Residual(_) => None,
    }
}

/// RK4 run. Returns a dict with `t`, `x`, `invariant_drift` and
/// `volume_drift`.
#[pyfunction]
#[pyo3(signature = (x0, dt, horizon, system = "frenet"))]
fn simulate<'py>(
    py: Python<'py>,
    x0: [f64; 3],
    dt: f64,
    horizon: f64,
    system: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let sys = nambu_cli::system::load_system(system).map_err(cli_error)?;
    let (traj, vol, drift) = py
        .detach(|| -> Result<_, nambu_core::IntegrateError> {
            let traj = integrate(&sys.field, x0, dt, horizon)?;
            let vol = volume_drift(&sys.field, x0, dt, horizon)?;
            let drift = invariant_drift(&traj, &sys.invariants())?;
            Ok((traj, vol, drift))
        })
        .map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("t", traj.states.iter().map(|s| s.t).collect::<Vec<_>>())?;
    out.set_item("x", traj.states.iter().map(|s| s.x.to_vec()).collect::<Vec<_>>())?;
    out.set_item("invariant_drift", drift)?;
    out.set_item("volume_drift", vol.max_drift)?;
    Ok(out)
}

/// Runs the verify suite and returns the JSON report. `seed` defaults to
/// `NAMBU_SEED` or the built-in default.
#[pyfunction]
#[pyo3(signature = (system = "frenet", convention = "unit", seed = None, cases = 100))]
fn verify(system: &str, convention: &str, seed: Option<u64>, cases: usize) -> PyResult<String> {
    let conv = self::convention(convention)?;
    let sys = nambu_cli::system::load_system(system).map_err(cli_error)?;
    let rep = nambu_cli::verify::verify(&sys, conv, seed.unwrap_or_else(seed_from_env), cases);
    serde_json::to_string(&rep).map_err(value_error)
}

#[pymodule]
fn nambu(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_function(wrap_pyfunction!(nambu_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(nambu_flow_field, m)?)?;
    m.add_function(wrap_pyfunction!(grad, m)?)?;
    m.add_function(wrap_pyfunction!(rot, m)?)?;
    m.add_function(wrap_pyfunction!(div, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(vector_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(lax_fit, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
