//! Plain-text polynomial format.
//!
//! ```text
//! poly   := [sign] term (sign term)*
//! term   := factor ([*] factor)*
//! factor := integer ['/' integer] | var ['^' integer]
//! var    := x0 | x1 | x2 | v0 | v1 | v2
//! ```
//!
//! Whitespace is ignored everywhere, e.g. `1/3*x1^2 + 1/3*x2^2 - 1/3*x0*x2`.
//! Output lists terms in descending graded order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, SymError};
use crate::poly::{is_negative, Alphabet, Exponents, Poly, Rational, Var};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type RawTerm = (Rational, [u32; 6]);

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(SymError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit run parses"))
    }

    fn exponent(&mut self) -> Result<u32> {
        let at = self.pos;
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| SymError::Parse {
            pos: at,
            msg: "exponent too large".into(),
        })
    }

    fn factor(&mut self, coef: &mut Rational, exps: &mut [u32; 6]) -> Result<()> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let num = self.integer()?;
                let value = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(SymError::Parse {
                            pos: at,
                            msg: "zero denominator".into(),
                        });
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                *coef *= value;
                Ok(())
            }
            Some(b'x' | b'v') => {
                let start = self.pos;
                let name = self
                    .src
                    .get(start..start + 2)
                    .and_then(|s| std::str::from_utf8(s).ok())
                    .unwrap_or("");
                let Some(var) = Var::from_name(name) else {
                    return self.err(format!("unknown variable starting at '{}'", name));
                };
                self.pos += 2;
                let k = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                exps[var.slot()] += k;
                Ok(())
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self, negative: bool) -> Result<RawTerm> {
        let mut coef = if negative {
            -Rational::one()
        } else {
            Rational::one()
        };
        let mut exps = [0u32; 6];
        self.factor(&mut coef, &mut exps)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.factor(&mut coef, &mut exps)?;
                }
                Some(b'0'..=b'9' | b'x' | b'v') => self.factor(&mut coef, &mut exps)?,
                _ => return Ok((coef, exps)),
            }
        }
    }

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return self.err("empty polynomial"),
            _ => false,
        };
        loop {
            terms.push(self.term(negative)?);
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                None => return Ok(terms),
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
            self.pos += 1;
        }
    }
}

fn parse_raw(src: &str) -> Result<Vec<RawTerm>> {
    Parser {
        src: src.as_bytes(),
        pos: 0,
    }
    .poly()
}

impl Poly {
    /// Parses over an explicit alphabet; velocity variables are rejected for
    /// the position alphabet.
    pub fn parse(src: &str, alphabet: Alphabet) -> Result<Poly> {
        let raw = parse_raw(src)?;
        build(raw, alphabet)
    }
}

fn build(raw: Vec<RawTerm>, alphabet: Alphabet) -> Result<Poly> {
    let n = alphabet.len();
    let mut terms: Vec<(Exponents, Rational)> = Vec::with_capacity(raw.len());
    for (c, e) in raw {
        if let Some(slot) = e[n..].iter().position(|&k| k > 0) {
            return Err(SymError::UnknownVariable {
                var: Var::v(slot),
                alphabet,
            });
        }
        terms.push((e[..n].to_vec(), c));
    }
    Poly::from_terms(alphabet, terms)
}

impl FromStr for Poly {
    type Err = SymError;

    /// Infers the alphabet: extended if any velocity variable occurs.
    fn from_str(s: &str) -> Result<Poly> {
        let raw = parse_raw(s)?;
        let alphabet = if raw.iter().any(|(_, e)| e[3..].iter().any(|&k| k > 0)) {
            Alphabet::Extended
        } else {
            Alphabet::Position
        };
        build(raw, alphabet)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms_graded();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, c)) in terms.into_iter().enumerate() {
            let neg = is_negative(c);
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let vars: Vec<String> = self
                .alphabet()
                .vars()
                .iter()
                .zip(exps)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        v.name().to_string()
                    } else {
                        format!("{}^{}", v.name(), k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write_rational(f, &mag)?;
            } else {
                if !mag.is_one() {
                    write_rational(f, &mag)?;
                    f.write_str("*")?;
                }
                f.write_str(&vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn parses_documented_example() {
        let p: Poly = "1/3*x1^2 + 1/3*x2^2 - 1/3*x0*x2".parse().unwrap();
        let x = Poly::x;
        let expected = (x(1).pow(2) + x(2).pow(2) - &x(0) * &x(2)).scale(&rat(1, 3));
        assert_eq!(p, expected);
        assert_eq!(p.alphabet(), Alphabet::Position);
    }

    #[test]
    fn whitespace_and_implicit_products() {
        let a: Poly = " 2x0 x1 -x2^ 2 ".parse().unwrap();
        let b: Poly = "2*x0*x1 - x2^2".parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn velocity_infers_extended() {
        let p: Poly = "x2*v1 - x1*v2".parse().unwrap();
        assert_eq!(p.alphabet(), Alphabet::Extended);
        assert!(Poly::parse("v0", Alphabet::Position).is_err());
    }

    #[test]
    fn zero_and_constants() {
        assert!("0".parse::<Poly>().unwrap().is_zero());
        assert!("x0 - x0".parse::<Poly>().unwrap().is_zero());
        assert_eq!("-3/6".parse::<Poly>().unwrap().to_string(), "-1/2");
    }

    #[test]
    fn errors_carry_position() {
        for bad in ["", "x3", "x0 +", "1/0", "x0 ** x1", "x0^", "(x0)"] {
            match bad.parse::<Poly>() {
                Err(SymError::Parse { .. }) => {}
                other => panic!("{bad:?} gave {other:?}"),
            }
        }
        match "x0 + y".parse::<Poly>() {
            Err(SymError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "x1",
            "-x1",
            "x2 - x0",
            "-1/3*x0*x1 - 1/3*x1*x2",
            "1/2*x0^2 + 1/2*x1^2 + 1/2*x2^2",
            "x2*v1 - x1*v2 - 7",
        ] {
            let p: Poly = s.parse().unwrap();
            let printed = p.to_string();
            assert_eq!(printed.parse::<Poly>().unwrap(), p, "{s} -> {printed}");
        }
        assert_eq!("x2 - x0".parse::<Poly>().unwrap().to_string(), "-x0 + x2");
    }
}
