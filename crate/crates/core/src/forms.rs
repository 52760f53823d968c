//! Differential forms, vector fields and bivectors on three-dimensional
//! phase space, with polynomial coefficients over the position alphabet.
//!
//! A k-form is stored as a map from strictly increasing index tuples to
//! coefficients, e.g. `x1 dx1∧dx2` is `{[1, 2]: x1}`. Vector fields and
//! 2-forms are identified through the area elements
//! `dS0 = dx1∧dx2`, `dS1 = dx2∧dx0`, `dS2 = dx0∧dx1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SymError};
use crate::poly::{rat, Alphabet, Poly, Rational};

pub const DIM: usize = 3;

/// Cyclic successor pairs: component `i` of a vector sits on `dx_j∧dx_k`.
pub const CYCLIC: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

/// Prefactor applied when a bivector is contracted or a Nambu bracket is
/// formed. `Unit` is the plain Jacobian determinant; `Half` carries the
/// extra ½ antisymmetrization factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Unit,
    Half,
}

impl Convention {
    pub fn factor(self) -> Rational {
        match self {
            Convention::Unit => rat(1, 1),
            Convention::Half => rat(1, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Unit => "unit",
            Convention::Half => "half",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Convention::Unit),
            "half" => Ok(Convention::Half),
            other => Err(SymError::InvalidArgument(format!(
                "unknown convention '{other}' (expected unit or half)"
            ))),
        }
    }
}

/// Result of an operation that may leave the supported degree range.
///
/// Degenerate results are zero forms: `d` of a 3-form, a wedge whose
/// degrees sum past 3, or a contraction of a form of too low degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graded<T> {
    pub value: T,
    pub degenerate: bool,
}

impl<T> Graded<T> {
    fn ok(value: T) -> Self {
        Graded {
            value,
            degenerate: false,
        }
    }

    fn degenerate(value: T) -> Self {
        Graded {
            value,
            degenerate: true,
        }
    }
}

/// Sorts `indices` in place and returns the permutation sign, or `None` if
/// an index repeats.
fn sort_with_sign(indices: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

fn expect_position(p: Poly) -> Poly {
    p.project()
        .unwrap_or_else(|e| panic!("form coefficients live on position space: {e}"))
}

#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    degree: usize,
    components: BTreeMap<Vec<usize>, Poly>,
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "form degree {degree} exceeds {DIM}");
        KForm {
            degree,
            components: BTreeMap::new(),
        }
    }

    /// Builds a form from possibly unsorted index tuples. Each tuple is
    /// sorted with the sign of its permutation; tuples with a repeated index
    /// vanish.
    pub fn from_components<I>(degree: usize, components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Poly)>,
    {
        if degree > DIM {
            return Err(SymError::InvalidArgument(format!(
                "form degree {degree} exceeds {DIM}"
            )));
        }
        let mut form = KForm::zero(degree);
        for (mut idx, p) in components {
            if idx.len() != degree || idx.iter().any(|&i| i >= DIM) {
                return Err(SymError::InvalidArgument(format!(
                    "index tuple {idx:?} invalid for a {degree}-form"
                )));
            }
            let p = p.project()?;
            if let Some(sign) = sort_with_sign(&mut idx) {
                let p = if sign < 0 { -p } else { p };
                form.accumulate(idx, &p);
            }
        }
        Ok(form)
    }

    /// 0-form. Panics if `p` depends on velocities.
    pub fn scalar(p: Poly) -> Self {
        let mut form = KForm::zero(0);
        form.accumulate(vec![], &expect_position(p));
        form
    }

    pub fn dx(i: usize) -> Self {
        assert!(i < DIM);
        let mut form = KForm::zero(1);
        form.accumulate(vec![i], &Poly::one(Alphabet::Position));
        form
    }

    /// The volume form `dx0∧dx1∧dx2`.
    pub fn volume() -> Self {
        Self::volume_with(Poly::one(Alphabet::Position))
    }

    pub fn volume_with(density: Poly) -> Self {
        let mut form = KForm::zero(3);
        form.accumulate(vec![0, 1, 2], &expect_position(density));
        form
    }

    /// Unit area element `dS_i = dx_j∧dx_k` with `(i, j, k)` cyclic.
    pub fn area_element(i: usize) -> Self {
        let (j, k) = CYCLIC[i];
        KForm::from_components(2, [(vec![j, k], Poly::one(Alphabet::Position))])
            .expect("valid indices")
    }

    fn accumulate(&mut self, idx: Vec<usize>, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self
            .components
            .entry(idx)
            .or_insert_with(|| Poly::zero(Alphabet::Position));
        *entry += p;
        self.components.retain(|_, c| !c.is_zero());
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Coefficient on the sorted tuple `idx` (zero if absent).
    pub fn component(&self, idx: &[usize]) -> Poly {
        self.components
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Poly::zero(Alphabet::Position))
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.components.iter()
    }

    pub fn checked_add(&self, other: &KForm) -> Result<KForm> {
        if self.degree != other.degree {
            return Err(SymError::InvalidArgument(format!(
                "cannot add a {}-form and a {}-form",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (idx, p) in &other.components {
            out.accumulate(idx.clone(), p);
        }
        Ok(out)
    }

    /// Multiplies every coefficient by the function `f`.
    pub fn times(&self, f: &Poly) -> KForm {
        let f = expect_position(f.clone());
        let mut out = KForm::zero(self.degree);
        for (idx, p) in &self.components {
            out.accumulate(idx.clone(), &(p * &f));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> KForm {
        let mut out = KForm::zero(self.degree);
        for (idx, p) in &self.components {
            out.accumulate(idx.clone(), &p.scale(c));
        }
        out
    }

    /// Applies `f` to every coefficient, keeping the index structure.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Vec<usize>, &Poly) -> Poly) -> KForm {
        let mut out = KForm::zero(self.degree);
        for (idx, p) in &self.components {
            out.accumulate(idx.clone(), &expect_position(f(idx, p)));
        }
        out
    }

    pub fn exterior_derivative(&self) -> Graded<KForm> {
        if self.degree == DIM {
            return Graded::degenerate(KForm::zero(DIM));
        }
        let mut out = KForm::zero(self.degree + 1);
        for (idx, p) in &self.components {
            for j in 0..DIM {
                let dp = p.dx(j);
                if dp.is_zero() {
                    continue;
                }
                let mut key = Vec::with_capacity(idx.len() + 1);
                key.push(j);
                key.extend_from_slice(idx);
                if let Some(sign) = sort_with_sign(&mut key) {
                    let dp = if sign < 0 { -dp } else { dp };
                    out.accumulate(key, &dp);
                }
            }
        }
        Graded::ok(out)
    }

    /// Exterior derivative; a 3-form maps to the zero 3-form.
    pub fn d(&self) -> KForm {
        self.exterior_derivative().value
    }

    pub fn wedge_graded(&self, other: &KForm) -> Graded<KForm> {
        let degree = self.degree + other.degree;
        if degree > DIM {
            return Graded::degenerate(KForm::zero(DIM));
        }
        let mut out = KForm::zero(degree);
        for (ia, pa) in &self.components {
            for (ib, pb) in &other.components {
                let mut key = ia.clone();
                key.extend_from_slice(ib);
                if let Some(sign) = sort_with_sign(&mut key) {
                    let prod = pa * pb;
                    let prod = if sign < 0 { -prod } else { prod };
                    out.accumulate(key, &prod);
                }
            }
        }
        Graded::ok(out)
    }

    pub fn wedge(&self, other: &KForm) -> KForm {
        self.wedge_graded(other).value
    }

    /// Contraction with the coordinate vector `∂/∂x_i`.
    fn contract_basis(&self, i: usize) -> Graded<KForm> {
        if self.degree == 0 {
            return Graded::degenerate(KForm::zero(0));
        }
        let mut out = KForm::zero(self.degree - 1);
        for (idx, p) in &self.components {
            if let Some(r) = idx.iter().position(|&j| j == i) {
                let mut key = idx.clone();
                key.remove(r);
                let term = if r % 2 == 1 { -p } else { p.clone() };
                out.accumulate(key, &term);
            }
        }
        Graded::ok(out)
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm<{}>({})", self.degree, self)
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        for (n, (idx, p)) in self.components.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let basis: Vec<String> = idx.iter().map(|i| format!("dx{i}")).collect();
            if basis.is_empty() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p}) {}", basis.join("^"))?;
            }
        }
        Ok(())
    }
}

impl Add<&KForm> for &KForm {
    type Output = KForm;
    /// Panics on a degree mismatch.
    fn add(self, rhs: &KForm) -> KForm {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.scale(&rat(-1, 1))
    }
}

impl Sub<&KForm> for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        self + &(-rhs)
    }
}

/// Wire format: `{"degree": 2, "components": {"12": "x1", ...}}`.
#[derive(Serialize, Deserialize)]
struct FormWire {
    degree: usize,
    components: BTreeMap<String, String>,
}

impl Serialize for KForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let components = self
            .components
            .iter()
            .map(|(idx, p)| {
                let key: String = idx.iter().map(|i| i.to_string()).collect();
                (key, p.to_string())
            })
            .collect();
        FormWire {
            degree: self.degree,
            components,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = FormWire::deserialize(d)?;
        KForm::try_from(wire).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<FormWire> for KForm {
    type Error = SymError;
    fn try_from(wire: FormWire) -> Result<Self> {
        let mut comps = Vec::with_capacity(wire.components.len());
        for (key, text) in wire.components {
            let idx = key
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| SymError::InvalidArgument(format!("bad component key '{key}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            comps.push((idx, Poly::parse(&text, Alphabet::Position)?));
        }
        KForm::from_components(wire.degree, comps)
    }
}

impl KForm {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("form serializes")
    }

    pub fn from_json(text: &str) -> Result<KForm> {
        let wire: FormWire = serde_json::from_str(text).map_err(|e| SymError::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })?;
        KForm::try_from(wire)
    }
}

/// A vector field `c0 ∂/∂x0 + c1 ∂/∂x1 + c2 ∂/∂x2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecField(pub [Poly; 3]);

impl VecField {
    /// Panics if any component depends on velocities.
    pub fn new(c0: Poly, c1: Poly, c2: Poly) -> Self {
        VecField([expect_position(c0), expect_position(c1), expect_position(c2)])
    }

    pub fn try_new(c0: Poly, c1: Poly, c2: Poly) -> Result<Self> {
        Ok(VecField([c0.project()?, c1.project()?, c2.project()?]))
    }

    pub fn zero() -> Self {
        let z = Poly::zero(Alphabet::Position);
        VecField([z.clone(), z.clone(), z])
    }

    /// The radial (Euler) field `x0 ∂0 + x1 ∂1 + x2 ∂2`.
    pub fn radial() -> Self {
        VecField([Poly::x(0), Poly::x(1), Poly::x(2)])
    }

    /// The linear field `x ↦ A x`.
    pub fn linear(a: &[[Rational; 3]; 3]) -> Self {
        let row = |r: &[Rational; 3]| {
            (0..3).fold(Poly::zero(Alphabet::Position), |acc, j| {
                acc + Poly::x(j).scale(&r[j])
            })
        };
        VecField([row(&a[0]), row(&a[1]), row(&a[2])])
    }

    pub fn components(&self) -> &[Poly; 3] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    pub fn map(&self, mut f: impl FnMut(&Poly) -> Poly) -> VecField {
        VecField::new(f(&self.0[0]), f(&self.0[1]), f(&self.0[2]))
    }

    pub fn scale(&self, c: &Rational) -> VecField {
        self.map(|p| p.scale(c))
    }

    pub fn dot(&self, other: &VecField) -> Poly {
        (0..3).fold(Poly::zero(Alphabet::Position), |acc, i| {
            acc + &self.0[i] * &other.0[i]
        })
    }

    /// `J[i][j] = ∂c_i/∂x_j`.
    pub fn jacobian(&self) -> [[Poly; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.0[i].dx(j)))
    }

    /// Directional derivative `X(f) = Σ c_i ∂f/∂x_i`.
    pub fn apply(&self, f: &Poly) -> Poly {
        self.dot(&grad(f))
    }

    pub fn eval_f64(&self, x: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.0[i].eval_f64(x))
    }

    /// Index lowering: `c_i ↦ c_i dx_i`.
    pub fn to_one_form(&self) -> KForm {
        let comps = (0..3).map(|i| (vec![i], self.0[i].clone()));
        KForm::from_components(1, comps).expect("valid indices")
    }

    pub fn from_one_form(form: &KForm) -> Result<VecField> {
        if form.degree() != 1 {
            return Err(SymError::InvalidArgument(format!(
                "expected a 1-form, got degree {}",
                form.degree()
            )));
        }
        Ok(VecField(std::array::from_fn(|i| form.component(&[i]))))
    }

    /// `c_i ↦ Σ c_i dS_i`.
    pub fn to_two_form(&self) -> KForm {
        let comps = (0..3).map(|i| {
            let (j, k) = CYCLIC[i];
            (vec![j, k], self.0[i].clone())
        });
        KForm::from_components(2, comps).expect("valid indices")
    }

    pub fn from_two_form(form: &KForm) -> Result<VecField> {
        if form.degree() != 2 {
            return Err(SymError::InvalidArgument(format!(
                "expected a 2-form, got degree {}",
                form.degree()
            )));
        }
        Ok(VecField(std::array::from_fn(|i| {
            let (j, k) = CYCLIC[i];
            if j < k {
                form.component(&[j, k])
            } else {
                -form.component(&[k, j])
            }
        })))
    }
}

impl Index<usize> for VecField {
    type Output = Poly;
    fn index(&self, i: usize) -> &Poly {
        &self.0[i]
    }
}

impl Add<&VecField> for &VecField {
    type Output = VecField;
    fn add(self, rhs: &VecField) -> VecField {
        VecField(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub<&VecField> for &VecField {
    type Output = VecField;
    fn sub(self, rhs: &VecField) -> VecField {
        VecField(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }
}

impl Neg for &VecField {
    type Output = VecField;
    fn neg(self) -> VecField {
        VecField(std::array::from_fn(|i| -&self.0[i]))
    }
}

/// A bivector `b0 ∂1∧∂2 + b1 ∂2∧∂0 + b2 ∂0∧∂1`, stored as its dual vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiVec {
    pub dual: VecField,
}

impl BiVec {
    pub fn from_dual(dual: VecField) -> Self {
        BiVec { dual }
    }

    pub fn is_zero(&self) -> bool {
        self.dual.is_zero()
    }
}

/// `X ⌋ ω`. Contracting a 0-form yields a degenerate zero 0-form.
pub fn interior_product(x: &VecField, form: &KForm) -> Graded<KForm> {
    if form.degree() == 0 {
        return Graded::degenerate(KForm::zero(0));
    }
    let mut out = KForm::zero(form.degree() - 1);
    for i in 0..DIM {
        if x[i].is_zero() {
            continue;
        }
        let part = form.contract_basis(i).value.times(&x[i]);
        out = &out + &part;
    }
    Graded::ok(out)
}

/// `B ⌋ ω` with `(∂_j∧∂_k) ⌋ ω = ι_{∂_k} ι_{∂_j} ω`, scaled by the
/// convention factor. Forms of degree below 2 give a degenerate zero 0-form.
pub fn bivector_interior_product(b: &BiVec, form: &KForm, conv: Convention) -> Graded<KForm> {
    if form.degree() < 2 {
        return Graded::degenerate(KForm::zero(0));
    }
    let mut out = KForm::zero(form.degree() - 2);
    for (i, &(j, k)) in CYCLIC.iter().enumerate() {
        let coef = &b.dual[i];
        if coef.is_zero() {
            continue;
        }
        let inner = form.contract_basis(j).value.contract_basis(k).value;
        out = &out + &inner.times(coef);
    }
    Graded::ok(out.scale(&conv.factor()))
}

/// Cartan formula `L_X ω = X⌋dω + d(X⌋ω)`.
pub fn lie_derivative(x: &VecField, form: &KForm) -> KForm {
    match form.degree() {
        0 => interior_product(x, &form.d()).value,
        DIM => interior_product(x, form).value.d(),
        _ => &interior_product(x, &form.d()).value + &interior_product(x, form).value.d(),
    }
}

pub fn grad(f: &Poly) -> VecField {
    let f = expect_position(f.clone());
    VecField([f.dx(0), f.dx(1), f.dx(2)])
}

pub fn rot(v: &VecField) -> VecField {
    VecField(std::array::from_fn(|i| {
        let (j, k) = CYCLIC[i];
        v[k].dx(j) - v[j].dx(k)
    }))
}

pub fn div(v: &VecField) -> Poly {
    v[0].dx(0) + v[1].dx(1) + v[2].dx(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn x(i: usize) -> Poly {
        Poly::x(i)
    }

    fn frenet() -> VecField {
        VecField::new(x(1), &x(2) - &x(0), -x(1))
    }

    #[test]
    fn unsorted_components_pick_up_sign() {
        let f = KForm::from_components(2, [(vec![1, 0], x(2))]).unwrap();
        assert_eq!(f.component(&[0, 1]), -x(2));
        let g = KForm::from_components(2, [(vec![1, 1], x(2))]).unwrap();
        assert!(g.is_zero());
        assert!(KForm::from_components(2, [(vec![0], x(2))]).is_err());
        assert!(KForm::from_components(4, []).is_err());
    }

    #[test]
    fn wedge_basics() {
        let a = KForm::dx(0).wedge(&KForm::dx(1));
        assert_eq!(a.degree(), 2);
        assert_eq!(a.component(&[0, 1]), Poly::one(Alphabet::Position));
        assert!(KForm::dx(0).wedge(&KForm::dx(0)).is_zero());
        let over = KForm::volume().wedge_graded(&KForm::dx(1));
        assert!(over.degenerate && over.value.is_zero());
    }

    #[test]
    fn gradient_of_quadratic() {
        let h2 = &x(0) * &x(2) - x(1).pow(2).scale(&rat(1, 2));
        let d = KForm::scalar(h2).d();
        let expected = VecField::new(x(2), -x(1), x(0)).to_one_form();
        assert_eq!(d, expected);
    }

    #[test]
    fn d_of_three_form_is_degenerate() {
        let g = KForm::volume_with(x(0)).exterior_derivative();
        assert!(g.degenerate);
        assert!(g.value.is_zero());
        assert_eq!(g.value.degree(), 3);
    }

    #[test]
    fn frenet_two_form_is_closed() {
        let psi = frenet().to_two_form();
        let d = psi.exterior_derivative();
        assert!(!d.degenerate);
        assert_eq!(d.value.degree(), 3);
        assert!(d.value.is_zero());
    }

    #[test]
    fn contraction_examples() {
        let e0 = VecField::new(Poly::one(Alphabet::Position), Poly::zero(Alphabet::Position), Poly::zero(Alphabet::Position));
        let c = interior_product(&e0, &KForm::dx(0).wedge(&KForm::dx(1)));
        assert_eq!(c.value, KForm::dx(1));

        let psi = interior_product(&frenet(), &KForm::volume()).value;
        assert_eq!(psi, frenet().to_two_form());
        // written out as in the worked example
        let expected = KForm::from_components(
            2,
            [
                (vec![1, 2], x(1)),
                (vec![2, 0], &x(2) - &x(0)),
                (vec![0, 1], -x(1)),
            ],
        )
        .unwrap();
        assert_eq!(psi, expected);

        let twice = interior_product(&frenet(), &psi).value;
        assert!(interior_product(&frenet(), &twice).value.is_zero());

        let low = interior_product(&frenet(), &KForm::scalar(x(0)));
        assert!(low.degenerate);
    }

    #[test]
    fn lie_derivative_of_volume() {
        assert!(lie_derivative(&frenet(), &KForm::volume()).is_zero());
        let stretch = VecField::new(x(0), Poly::zero(Alphabet::Position), Poly::zero(Alphabet::Position));
        assert_eq!(lie_derivative(&stretch, &KForm::volume()), KForm::volume());
    }

    #[test]
    fn lie_derivative_of_function_is_directional_derivative() {
        let f = &x(0) * &x(1);
        let l = lie_derivative(&frenet(), &KForm::scalar(f.clone()));
        assert_eq!(l, KForm::scalar(frenet().apply(&f)));
    }

    #[test]
    fn vector_calculus_on_frenet_potential() {
        let third = rat(1, 3);
        let h = VecField::new(
            (x(1).pow(2) + x(2).pow(2) - &x(0) * &x(2)).scale(&third),
            (-(&x(1) * &(&x(0) + &x(2)))).scale(&third),
            (x(1).pow(2) + x(0).pow(2) - &x(0) * &x(2)).scale(&third),
        );
        assert_eq!(rot(&h), frenet());
        assert!(div(&frenet()).is_zero());
    }

    #[test]
    fn duality_round_trips() {
        let v = VecField::new(&x(0) * &x(1), x(2).scale(&int(3)), -x(0));
        assert_eq!(VecField::from_one_form(&v.to_one_form()).unwrap(), v);
        assert_eq!(VecField::from_two_form(&v.to_two_form()).unwrap(), v);
        assert!(VecField::from_two_form(&v.to_one_form()).is_err());
    }

    #[test]
    fn area_elements_match_two_form_embedding() {
        for i in 0..3 {
            let mut c: [Poly; 3] = std::array::from_fn(|_| Poly::zero(Alphabet::Position));
            c[i] = Poly::one(Alphabet::Position);
            let [a, b, d] = c;
            assert_eq!(VecField::new(a, b, d).to_two_form(), KForm::area_element(i));
        }
    }

    #[test]
    fn bivector_contraction_is_triple_product() {
        let b = BiVec::from_dual(VecField::new(x(0), x(1), x(2)));
        let f = KForm::dx(1).wedge(&KForm::dx(2));
        let got = bivector_interior_product(&b, &f, Convention::Unit).value;
        assert_eq!(got, KForm::scalar(x(0)));
        let half = bivector_interior_product(&b, &f, Convention::Half).value;
        assert_eq!(half, KForm::scalar(x(0).scale(&rat(1, 2))));
        assert!(bivector_interior_product(&b, &KForm::dx(0), Convention::Unit).degenerate);
    }

    #[test]
    fn json_round_trip() {
        let psi = frenet().to_two_form();
        let text = psi.to_json();
        assert_eq!(KForm::from_json(&text).unwrap(), psi);
        let parsed = KForm::from_json(r#"{"degree":2,"components":{"01":"1"}}"#).unwrap();
        assert_eq!(parsed, KForm::dx(0).wedge(&KForm::dx(1)));
        assert!(KForm::from_json(r#"{"degree":2,"components":{"01":"x0 +"}}"#).is_err());
        assert!(KForm::from_json(r#"{"degree":2,"components":{"0a":"1"}}"#).is_err());
    }
}
