//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Two alphabets are supported: the position alphabet `(x0, x1, x2)` and the
//! extended alphabet `(x0, x1, x2, v0, v1, v2)` used for Lagrangians that
//! depend on velocities. The classical names map as `x ↔ x0`, `y ↔ x1`,
//! `z ↔ x2`, and `ẋ ↔ v0` and so on.
//!
//! A `Poly` is always kept canonical: no stored coefficient is zero, so
//! structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, SymError};

pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X0,
    X1,
    X2,
    V0,
    V1,
    V2,
}

impl Var {
    pub const POSITION: [Var; 3] = [Var::X0, Var::X1, Var::X2];
    pub const VELOCITY: [Var; 3] = [Var::V0, Var::V1, Var::V2];

    /// Slot of this variable in an exponent vector.
    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn x(i: usize) -> Var {
        Var::POSITION[i]
    }

    pub fn v(i: usize) -> Var {
        Var::VELOCITY[i]
    }

    pub fn is_velocity(self) -> bool {
        self.slot() >= 3
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X0 => "x0",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::V0 => "v0",
            Var::V1 => "v1",
            Var::V2 => "v2",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Some(match name {
            "x0" => Var::X0,
            "x1" => Var::X1,
            "x2" => Var::X2,
            "v0" => Var::V0,
            "v1" => Var::V1,
            "v2" => Var::V2,
            _ => return None,
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `(x0, x1, x2)`
    Position,
    /// `(x0, x1, x2, v0, v1, v2)`
    Extended,
}

impl Alphabet {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        match self {
            Alphabet::Position => 3,
            Alphabet::Extended => 6,
        }
    }

    pub fn contains(self, var: Var) -> bool {
        var.slot() < self.len()
    }

    pub fn vars(self) -> &'static [Var] {
        const ALL: [Var; 6] = [Var::X0, Var::X1, Var::X2, Var::V0, Var::V1, Var::V2];
        &ALL[..self.len()]
    }

    fn check(self, var: Var) -> Result<()> {
        if self.contains(var) {
            Ok(())
        } else {
            Err(SymError::UnknownVariable {
                var,
                alphabet: self,
            })
        }
    }
}

/// Exponent vector, one entry per variable of the alphabet.
pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    alphabet: Alphabet,
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero(alphabet: Alphabet) -> Self {
        Poly {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(alphabet: Alphabet, c: Rational) -> Self {
        Self::monomial(alphabet, vec![0; alphabet.len()], c)
    }

    pub fn one(alphabet: Alphabet) -> Self {
        Self::constant(alphabet, Rational::one())
    }

    /// A single variable over the smallest alphabet containing it.
    pub fn var(var: Var) -> Self {
        let alphabet = if var.is_velocity() {
            Alphabet::Extended
        } else {
            Alphabet::Position
        };
        Self::var_in(alphabet, var).expect("alphabet chosen to contain var")
    }

    pub fn var_in(alphabet: Alphabet, var: Var) -> Result<Self> {
        alphabet.check(var)?;
        let mut exps = vec![0; alphabet.len()];
        exps[var.slot()] = 1;
        Ok(Self::monomial(alphabet, exps, Rational::one()))
    }

    /// Position coordinate `x_i`.
    pub fn x(i: usize) -> Self {
        Self::var(Var::x(i))
    }

    /// Velocity coordinate `v_i` (extended alphabet).
    pub fn v(i: usize) -> Self {
        Self::var(Var::v(i))
    }

    pub fn monomial(alphabet: Alphabet, exps: Exponents, coef: Rational) -> Self {
        assert_eq!(exps.len(), alphabet.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exps, coef);
        }
        Poly { alphabet, terms }
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(alphabet: Alphabet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Poly::zero(alphabet);
        for (exps, c) in terms {
            if exps.len() != alphabet.len() {
                return Err(SymError::InvalidArgument(format!(
                    "exponent vector of length {} for {:?} alphabet",
                    exps.len(),
                    alphabet
                )));
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.alphabet.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: Var) -> u32 {
        if !self.alphabet.contains(var) {
            return 0;
        }
        self.terms.keys().map(|e| e[var.slot()]).max().unwrap_or(0)
    }

    pub fn is_velocity_free(&self) -> bool {
        Var::VELOCITY.iter().all(|&v| self.degree_in(v) == 0)
    }

    /// Re-expresses the polynomial over another alphabet. Narrowing to the
    /// position alphabet fails if a velocity variable occurs.
    pub fn to_alphabet(&self, target: Alphabet) -> Result<Poly> {
        if target == self.alphabet {
            return Ok(self.clone());
        }
        if target == Alphabet::Position {
            if let Some(&v) = Var::VELOCITY.iter().find(|&&v| self.degree_in(v) > 0) {
                return Err(SymError::UnknownVariable {
                    var: v,
                    alphabet: target,
                });
            }
        }
        let n = target.len();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut exps = e.clone();
                exps.resize(n, 0);
                (exps, c.clone())
            })
            .collect();
        Ok(Poly {
            alphabet: target,
            terms,
        })
    }

    pub fn lift(&self) -> Poly {
        self.to_alphabet(Alphabet::Extended)
            .expect("widening never fails")
    }

    pub fn project(&self) -> Result<Poly> {
        self.to_alphabet(Alphabet::Position)
    }

    fn same_alphabet(&self, other: &Poly) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(SymError::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            })
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.same_alphabet(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_alphabet(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_alphabet(other)?;
        let mut out = Poly::zero(self.alphabet);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.alphabet);
        }
        Poly {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(self.alphabet);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn partial(&self, var: Var) -> Result<Poly> {
        self.alphabet.check(var)?;
        let slot = var.slot();
        let mut out = Poly::zero(self.alphabet);
        for (e, c) in &self.terms {
            let k = e[slot];
            if k == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[slot] = k - 1;
            out.add_term(exps, c * Rational::from_integer(BigInt::from(k)));
        }
        Ok(out)
    }

    /// Partial derivative with respect to position coordinate `x_i`.
    pub fn dx(&self, i: usize) -> Poly {
        self.partial(Var::x(i)).expect("position variables are in every alphabet")
    }

    /// Substitutes polynomials for variables.
    ///
    /// The result lives in the alphabet of the bound values (all of which must
    /// agree), or in `self`'s alphabet when nothing is bound. Unbound
    /// variables are carried over and must exist in the target alphabet.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Poly>) -> Result<Poly> {
        let mut values = bindings.values();
        let target = match values.next() {
            Some(first) => {
                for p in values {
                    first.same_alphabet(p)?;
                }
                first.alphabet
            }
            None => return Ok(self.clone()),
        };
        for var in bindings.keys() {
            self.alphabet.check(*var)?;
        }

        let mut images = Vec::with_capacity(self.alphabet.len());
        for &var in self.alphabet.vars() {
            let image = match bindings.get(&var) {
                Some(p) => p.clone(),
                None if self.degree_in(var) == 0 => Poly::zero(target),
                None => Poly::var_in(target, var)?,
            };
            images.push(image);
        }

        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (image, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = &term * &image.pow(k);
                }
            }
            out += &term;
        }
        Ok(out)
    }

    /// Evaluates at a floating-point point (one entry per alphabet variable),
    /// summing terms in ascending exponent order.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.alphabet.len(), "evaluation point arity");
        self.terms
            .iter()
            .map(|(e, c)| rational_to_f64(c) * monomial_f64(e, point))
            .sum()
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.alphabet.len(), "evaluation point arity");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            acc += m;
        }
        acc
    }

    /// Leading term in the descending graded order used for printing.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms_graded().into_iter().next()
    }

    /// Terms sorted by descending total degree, then descending exponents.
    pub fn terms_graded(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub(crate) fn monomial_f64(exps: &[u32], point: &[f64]) -> f64 {
    exps.iter()
        .zip(point)
        .fold(1.0, |acc, (&k, &x)| acc * x.powi(k as i32))
}

/// Finds `s` with `lhs[i] = s * rhs[i]` for every `i`, if such a rational exists.
///
/// When every entry on both sides is zero the constant is reported as 0.
pub fn proportionality(lhs: &[Poly], rhs: &[Poly]) -> Option<Rational> {
    assert_eq!(lhs.len(), rhs.len(), "proportionality arity");
    let candidate = lhs.iter().zip(rhs).find_map(|(l, r)| {
        let (e, rc) = r.leading_term()?;
        let lc = l.terms.get(e).cloned().unwrap_or_else(Rational::zero);
        Some(lc / rc)
    });
    let s = match candidate {
        Some(s) => s,
        None => {
            // every rhs entry is zero
            return lhs.iter().all(Poly::is_zero).then(Rational::zero);
        }
    };
    lhs.iter()
        .zip(rhs)
        .all(|(l, r)| *l == r.scale(&s))
        .then_some(s)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{:?}]({})", self.alphabet, self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            /// Panics if the alphabets differ; use the `checked_*` form to
            /// get an error instead.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.same_alphabet(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.same_alphabet(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            alphabet: self.alphabet,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul<&Rational> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Rational) -> Poly {
        self.scale(rhs)
    }
}

/// Sign helper for printing.
pub(crate) fn is_negative(c: &Rational) -> bool {
    c.is_negative()
}
