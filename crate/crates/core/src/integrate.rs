//! Fixed-step RK4 integration of polynomial vector fields, with invariant
//! and phase-volume drift monitors.
//!
//! Fields are converted once to floating point. Every polynomial is evaluated
//! term by term in ascending exponent order, so runs are reproducible given
//! the same inputs.

use std::io::Write;

use crate::error::IntegrateError;
use crate::forms::VecField;
use crate::lax::RatMatrix;
use crate::poly::{monomial_f64, proportionality, rational_to_f64, Alphabet, Poly};

type Result<T> = std::result::Result<T, IntegrateError>;

#[derive(Clone, Debug)]
struct FloatPoly {
    terms: Vec<(f64, Vec<u32>)>,
}

impl FloatPoly {
    fn new(p: &Poly) -> Self {
        FloatPoly {
            terms: p
                .terms()
                .map(|(e, c)| (rational_to_f64(c), e.clone()))
                .collect(),
        }
    }

    fn eval(&self, x: &[f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * monomial_f64(e, x))
            .sum()
    }
}

/// A polynomial field and its Jacobian, ready for float evaluation.
#[derive(Clone, Debug)]
pub struct FlowField {
    components: [FloatPoly; 3],
    jacobian: [[FloatPoly; 3]; 3],
    description: String,
}

impl FlowField {
    pub fn new(field: &VecField) -> Self {
        let jac = field.jacobian();
        FlowField {
            components: std::array::from_fn(|i| FloatPoly::new(&field[i])),
            jacobian: std::array::from_fn(|i| std::array::from_fn(|j| FloatPoly::new(&jac[i][j]))),
            description: format!("({}, {}, {})", field[0], field[1], field[2]),
        }
    }

    pub fn eval(&self, x: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.components[i].eval(x))
    }

    pub fn eval_jacobian(&self, x: &[f64; 3]) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.jacobian[i][j].eval(x)))
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl From<&VecField> for FlowField {
    fn from(field: &VecField) -> Self {
        FlowField::new(field)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub x: [f64; 3],
}

impl PhaseState {
    pub fn new(t: f64, x: [f64; 3]) -> Result<Self> {
        if !t.is_finite() || x.iter().any(|v| !v.is_finite()) {
            return Err(IntegrateError::NonFinite {
                step: 0,
                t,
                state: x.to_vec(),
            });
        }
        Ok(PhaseState { t, x })
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<PhaseState>,
    pub field: String,
    pub dt: f64,
    pub method: &'static str,
}

fn axpy(x: &[f64; 3], a: f64, k: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| x[i] + a * k[i])
}

fn check_finite(step: usize, t: f64, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(IntegrateError::NonFinite {
            step,
            t,
            state: values.to_vec(),
        })
    }
}

fn check_step(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(IntegrateError::InvalidStep(dt))
    }
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step(field: &FlowField, s: &PhaseState, dt: f64) -> Result<PhaseState> {
    check_step(dt)?;
    check_finite(0, s.t, &s.x)?;
    let k1 = field.eval(&s.x);
    let k2 = field.eval(&axpy(&s.x, dt / 2.0, &k1));
    let k3 = field.eval(&axpy(&s.x, dt / 2.0, &k2));
    let k4 = field.eval(&axpy(&s.x, dt, &k3));
    for k in [&k1, &k2, &k3, &k4] {
        check_finite(0, s.t, k)?;
    }
    let x = std::array::from_fn(|i| s.x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    check_finite(0, s.t + dt, &x)?;
    Ok(PhaseState { t: s.t + dt, x })
}

/// Number of uniform steps covering `[0, horizon]`: `⌈horizon/dt⌉`, with
/// ratios within 1e-9 of an integer rounded to it.
pub fn step_count(horizon: f64, dt: f64) -> usize {
    let ratio = horizon / dt;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.ceil() as usize
    }
}

fn check_horizon(horizon: f64, dt: f64) -> Result<usize> {
    check_step(dt)?;
    if !horizon.is_finite() || horizon < dt * (1.0 - 1e-9) {
        return Err(IntegrateError::InvalidHorizon { horizon, dt });
    }
    Ok(step_count(horizon, dt))
}

fn with_step(err: IntegrateError, step: usize) -> IntegrateError {
    match err {
        IntegrateError::NonFinite { t, state, .. } => IntegrateError::NonFinite { step, t, state },
        other => other,
    }
}

/// Integrates from `t = 0` with `⌈horizon/dt⌉` RK4 steps, recording every state.
pub fn integrate(field: &VecField, x0: [f64; 3], dt: f64, horizon: f64) -> Result<Trajectory> {
    integrate_flow(&FlowField::new(field), x0, dt, horizon)
}

pub fn integrate_flow(field: &FlowField, x0: [f64; 3], dt: f64, horizon: f64) -> Result<Trajectory> {
    let n = check_horizon(horizon, dt)?;
    let mut states = Vec::with_capacity(n + 1);
    let mut s = PhaseState::new(0.0, x0)?;
    states.push(s);
    for step in 1..=n {
        let next = rk4_step(field, &s, dt).map_err(|e| with_step(e, step))?;
        // uniform grid without accumulated rounding in t
        s = PhaseState {
            t: step as f64 * dt,
            x: next.x,
        };
        states.push(s);
    }
    Ok(Trajectory {
        states,
        field: field.description().to_string(),
        dt,
        method: "rk4",
    })
}

/// Per invariant, `max_t |I(x(t)) − I(x0)| / max(|I(x0)|, 1)`.
pub fn invariant_drift(traj: &Trajectory, invariants: &[Poly]) -> Result<Vec<f64>> {
    let first = traj.states.first().ok_or(IntegrateError::EmptyTrajectory)?;
    Ok(invariants
        .iter()
        .map(|inv| {
            let f = FloatPoly::new(inv);
            let initial = f.eval(&first.x);
            let scale = initial.abs().max(1.0);
            traj.states
                .iter()
                .map(|s| (f.eval(&s.x) - initial).abs() / scale)
                .fold(0.0, f64::max)
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct VolumeReport {
    /// `det J(t)` at every recorded step, starting with 1 at `t = 0`.
    pub determinants: Vec<f64>,
    /// `max_t |det J(t) − 1|`
    pub max_drift: f64,
}

type Mat3 = [[f64; 3]; 3];

fn matmul3(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn mat_axpy(m: &Mat3, a: f64, k: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[i][j] + a * k[i][j]))
}

/// Integrates the state together with its variational equation
/// `J̇ = DF(x) J`, `J(0) = I`, and tracks `det J`.
pub fn volume_drift(field: &VecField, x0: [f64; 3], dt: f64, horizon: f64) -> Result<VolumeReport> {
    volume_drift_flow(&FlowField::new(field), x0, dt, horizon)
}

pub fn volume_drift_flow(field: &FlowField, x0: [f64; 3], dt: f64, horizon: f64) -> Result<VolumeReport> {
    let n = check_horizon(horizon, dt)?;
    PhaseState::new(0.0, x0)?;
    let mut x = x0;
    let mut jac: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut dets = Vec::with_capacity(n + 1);
    dets.push(1.0);
    let rhs = |x: &[f64; 3], j: &Mat3| (field.eval(x), matmul3(&field.eval_jacobian(x), j));
    for step in 1..=n {
        let (k1, m1) = rhs(&x, &jac);
        let (k2, m2) = rhs(&axpy(&x, dt / 2.0, &k1), &mat_axpy(&jac, dt / 2.0, &m1));
        let (k3, m3) = rhs(&axpy(&x, dt / 2.0, &k2), &mat_axpy(&jac, dt / 2.0, &m2));
        let (k4, m4) = rhs(&axpy(&x, dt, &k3), &mat_axpy(&jac, dt, &m3));
        x = std::array::from_fn(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        jac = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                jac[i][j] + dt / 6.0 * (m1[i][j] + 2.0 * m2[i][j] + 2.0 * m3[i][j] + m4[i][j])
            })
        });
        let det = det3(&jac);
        let mut probe = x.to_vec();
        probe.push(det);
        check_finite(step, step as f64 * dt, &probe)?;
        dets.push(det);
    }
    let max_drift = dets.iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
    Ok(VolumeReport {
        determinants: dets,
        max_drift,
    })
}

fn rat_matrix_poly(a: &RatMatrix) -> crate::lax::PolyMatrix {
    crate::lax::constant_matrix(a)
}

fn to_f64(m: &crate::lax::PolyMatrix) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| rational_to_f64(&m[i][j].constant_term())))
}

/// `exp(A t) x0` for a constant 3×3 rational matrix.
///
/// When `A³ = s A` (exactly, in rationals) the closed form
/// `I + f(t) A + g(t) A²` is used: trigonometric for `s < 0` (e.g. the
/// Frenet matrix, `s = −2`), polynomial for `s = 0`, hyperbolic for `s > 0`.
/// Other matrices use scaling and squaring of a 20-term Taylor series with
/// `‖A t‖∞ / 2^k ≤ 1/2`, whose truncation error is below `2⁻²¹ / 21!`
/// relative to the scaled exponential before squaring.
pub fn exact_linear_flow(a: &RatMatrix, x0: [f64; 3], t: f64) -> [f64; 3] {
    let ap = rat_matrix_poly(a);
    let a2 = crate::lax::matmul(&ap, &ap);
    let a3 = crate::lax::matmul(&a2, &ap);
    let flat = |m: &crate::lax::PolyMatrix| crate::lax::flatten(m);
    let propagator = match proportionality(&flat(&a3), &flat(&ap)) {
        Some(s) if !crate::lax::is_zero_matrix(&ap) => {
            let s = rational_to_f64(&s);
            let (f, g) = if s < 0.0 {
                let w = (-s).sqrt();
                ((w * t).sin() / w, (1.0 - (w * t).cos()) / (w * w))
            } else if s > 0.0 {
                let w = s.sqrt();
                ((w * t).sinh() / w, ((w * t).cosh() - 1.0) / (w * w))
            } else {
                (t, t * t / 2.0)
            };
            let (a1, a2) = (to_f64(&ap), to_f64(&a2));
            std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 } + f * a1[i][j] + g * a2[i][j])
            })
        }
        _ if crate::lax::is_zero_matrix(&ap) => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        _ => series_exp(&to_f64(&ap), t),
    };
    std::array::from_fn(|i| (0..3).map(|j| propagator[i][j] * x0[j]).sum())
}

fn series_exp(a: &Mat3, t: f64) -> Mat3 {
    let norm = a
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        * t.abs();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale /= 2.0;
        squarings += 1;
    }
    let m: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] * t * scale));
    let mut result: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut term = result;
    for k in 1..=20 {
        term = matmul3(&term, &m);
        term = term.map(|r| r.map(|v| v / k as f64));
        result = std::array::from_fn(|i| std::array::from_fn(|j| result[i][j] + term[i][j]));
    }
    for _ in 0..squarings {
        result = matmul3(&result, &result);
    }
    result
}

pub const CSV_HEADER: &str = "t,x0,x1,x2,I1,I2,I3,divJ";

/// Writes the trajectory as CSV. Missing invariants (fewer than three) are
/// written as `NaN`; the `divJ` column holds `det J − 1` from the matching
/// volume run. Floats carry 17 significant digits.
pub fn write_csv<W: Write>(
    out: &mut W,
    traj: &Trajectory,
    invariants: &[Poly],
    determinants: &[f64],
) -> std::io::Result<()> {
    let inv: Vec<FloatPoly> = invariants.iter().take(3).map(FloatPoly::new).collect();
    writeln!(out, "{CSV_HEADER}")?;
    for (n, s) in traj.states.iter().enumerate() {
        let mut row = vec![s.t, s.x[0], s.x[1], s.x[2]];
        for k in 0..3 {
            row.push(inv.get(k).map_or(f64::NAN, |p| p.eval(&s.x)));
        }
        row.push(determinants.get(n).map_or(f64::NAN, |d| d - 1.0));
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Float evaluation of a position polynomial.
pub fn eval_poly(p: &Poly, x: &[f64; 3]) -> f64 {
    debug_assert_eq!(p.alphabet(), Alphabet::Position);
    FloatPoly::new(p).eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frenet;
    use crate::poly::int;

    fn constant_field() -> VecField {
        let z = Poly::zero(Alphabet::Position);
        VecField::new(Poly::one(Alphabet::Position), z.clone(), z)
    }

    #[test]
    fn zero_field_keeps_state() {
        let f = FlowField::new(&VecField::zero());
        let s = PhaseState::new(0.0, [1.0, -2.0, 3.0]).unwrap();
        assert_eq!(rk4_step(&f, &s, 0.1).unwrap().x, s.x);
    }

    #[test]
    fn constant_field_is_exact() {
        let f = FlowField::new(&constant_field());
        let s = PhaseState::new(0.0, [0.25, 0.0, 0.0]).unwrap();
        let next = rk4_step(&f, &s, 0.5).unwrap();
        assert_eq!(next.x, [0.75, 0.0, 0.0]);
        assert_eq!(next.t, 0.5);
    }

    #[test]
    fn invalid_inputs() {
        let f = FlowField::new(&frenet::field());
        let s = PhaseState::new(0.0, [1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(rk4_step(&f, &s, 0.0), Err(IntegrateError::InvalidStep(_))));
        assert!(matches!(rk4_step(&f, &s, -1.0), Err(IntegrateError::InvalidStep(_))));
        assert!(PhaseState::new(0.0, [f64::NAN, 0.0, 0.0]).is_err());
        assert!(integrate(&frenet::field(), [1.0, 0.0, 0.0], 0.1, 0.01).is_err());
    }

    #[test]
    fn blow_up_reports_step() {
        // ẋ0 = x0³ blows up at t = 1/(2 x0²)
        let z = Poly::zero(Alphabet::Position);
        let field = VecField::new(Poly::x(0).pow(3), z.clone(), z);
        match integrate(&field, [10.0, 0.0, 0.0], 0.01, 10.0) {
            Err(IntegrateError::NonFinite { step, .. }) => assert!(step > 0),
            other => panic!("{other:?}"),
        }
    }

    fn max_diff(a: &[f64; 3], b: &[f64; 3]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn one_step_matches_exact_solution() {
        let f = FlowField::new(&frenet::field());
        let s = PhaseState::new(0.0, [1.0, 0.0, 0.0]).unwrap();
        let got = rk4_step(&f, &s, 1e-3).unwrap();
        let exact = exact_linear_flow(&frenet::matrix(), [1.0, 0.0, 0.0], 1e-3);
        assert!(max_diff(&got.x, &exact) <= 1e-12, "{:?} vs {exact:?}", got.x);
    }

    #[test]
    fn exact_flow_trivial_cases() {
        let x0 = [0.3, -1.0, 2.0];
        assert_eq!(exact_linear_flow(&frenet::matrix(), x0, 0.0), x0);
        let zero: RatMatrix = std::array::from_fn(|_| std::array::from_fn(|_| int(0)));
        assert_eq!(exact_linear_flow(&zero, x0, 7.5), x0);
    }

    #[test]
    fn exact_flow_full_period() {
        let period = 2.0 * std::f64::consts::PI / frenet::frequency();
        let x0 = [1.0, 0.0, 0.0];
        let end = exact_linear_flow(&frenet::matrix(), x0, period);
        let [i1, i2, _] = frenet::closed_form_invariants();
        assert!((eval_poly(&i1, &end) - eval_poly(&i1, &x0)).abs() < 1e-14);
        assert!((eval_poly(&i2, &end) - eval_poly(&i2, &x0)).abs() < 1e-14);

        let traj = integrate(&frenet::field(), x0, 1e-4, period).unwrap();
        let rk = traj.states.last().unwrap();
        // last grid point sits at n * dt, within one step of the period
        let at = exact_linear_flow(&frenet::matrix(), x0, rk.t);
        assert!(max_diff(&rk.x, &at) < 1e-12);
    }

    #[test]
    fn series_branch_agrees_with_closed_form() {
        // generic matrix with A³ ≠ s A
        let a: RatMatrix = [
            [int(0), int(1), int(2)],
            [int(-1), int(1), int(0)],
            [int(1), int(0), int(-1)],
        ];
        let field = VecField::linear(&a);
        let x0 = [0.5, -0.25, 1.0];
        let traj = integrate(&field, x0, 1e-4, 1.0).unwrap();
        let end = traj.states.last().unwrap();
        let exact = exact_linear_flow(&a, x0, end.t);
        assert!(max_diff(&end.x, &exact) < 1e-10);
        // nilpotent and hyperbolic branches
        let nil: RatMatrix = [[int(0), int(1), int(0)], [int(0), int(0), int(1)], [int(0), int(0), int(0)]];
        let got = exact_linear_flow(&nil, [0.0, 0.0, 1.0], 2.0);
        assert_eq!(got, [2.0, 2.0, 1.0]);
        let hyp: RatMatrix = [[int(0), int(1), int(0)], [int(1), int(0), int(0)], [int(0), int(0), int(0)]];
        let got = exact_linear_flow(&hyp, [1.0, 0.0, 0.0], 1.0);
        assert!((got[0] - 1f64.cosh()).abs() < 1e-14 && (got[1] - 1f64.sinh()).abs() < 1e-14);
    }

    #[test]
    fn grid_and_counts() {
        let traj = integrate(&VecField::zero(), [1.0, 2.0, 3.0], 0.1, 0.1).unwrap();
        assert_eq!(traj.states.len(), 2);
        assert!(traj.states.iter().all(|s| s.x == [1.0, 2.0, 3.0]));
        assert_eq!(step_count(100.0, 1e-3), 100_000);
        assert_eq!(step_count(1.05, 0.1), 11);
        let d = invariant_drift(&traj, &frenet::closed_form_invariants()).unwrap();
        assert_eq!(d, vec![0.0; 3]);
    }

    #[test]
    fn non_invariant_drifts() {
        let traj = integrate(&frenet::field(), [1.0, 0.0, 0.0], 1e-2, 10.0).unwrap();
        let d = invariant_drift(&traj, &[Poly::x(0)]).unwrap();
        assert!(d[0] > 0.1);
    }

    #[test]
    fn expanding_field_volume() {
        let z = Poly::zero(Alphabet::Position);
        let field = VecField::new(Poly::x(0), z.clone(), z);
        let rep = volume_drift(&field, [1.0, 1.0, 1.0], 1e-3, 1.0).unwrap();
        let last = *rep.determinants.last().unwrap();
        assert!((last - 1f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn csv_layout() {
        let traj = integrate(&frenet::field(), [1.0, 0.0, 0.0], 0.5, 0.5).unwrap();
        let vol = volume_drift(&frenet::field(), [1.0, 0.0, 0.0], 0.5, 0.5).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &traj, &frenet::closed_form_invariants(), &vol.determinants).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].split(',').count(), 8);
        assert!(lines[1].starts_with("0.0000000000000000e0,1.0000000000000000e0,"));
    }
}
