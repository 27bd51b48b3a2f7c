//! Text grammar for scalars and field descriptors.
//!
//! Rationals are `p`, `p/q` or exact decimals (`-0.125`, `3e-4`). Number-field
//! elements are polynomials in the field variable, e.g. `1/2*t^3 - t + 2`.
//! Complex values are sums of real and imaginary parts, e.g. `1.5-2i`,
//! `-i`, `1/3+2/7*i`. Literals are converted exactly and rounded once.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{BigComplex, NfElem, NumberField, Rational, Scalar, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// Coefficient field of a curve, as written in curve-spec files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldDescriptor {
    Rational,
    NumberField {
        minimal_polynomial: String,
        #[serde(default = "default_var")]
        variable: String,
    },
    Complex {
        #[serde(default = "default_precision")]
        precision_bits: usize,
    },
}

fn default_var() -> String {
    "t".to_string()
}

fn default_precision() -> usize {
    DEFAULT_PRECISION
}

/// A field descriptor resolved into the context needed to parse scalars.
#[derive(Debug, Clone)]
pub enum FieldContext {
    Rational,
    NumberField(Arc<NumberField>),
    Complex(usize),
}

impl FieldDescriptor {
    pub fn number_field(minimal_polynomial: &str) -> Self {
        FieldDescriptor::NumberField {
            minimal_polynomial: minimal_polynomial.to_string(),
            variable: default_var(),
        }
    }

    pub fn complex(precision_bits: usize) -> Self {
        FieldDescriptor::Complex { precision_bits }
    }

    pub fn resolve(&self) -> Result<FieldContext> {
        match self {
            FieldDescriptor::Rational => Ok(FieldContext::Rational),
            FieldDescriptor::NumberField {
                minimal_polynomial,
                variable,
            } => {
                let m = parse_qpoly(minimal_polynomial, variable)?;
                Ok(FieldContext::NumberField(NumberField::new(m, variable)?))
            }
            FieldDescriptor::Complex { precision_bits } => {
                if *precision_bits < 64 {
                    return Err(Error::parse(
                        "field.precision_bits",
                        "precision must be at least 64 bits",
                    ));
                }
                Ok(FieldContext::Complex(*precision_bits))
            }
        }
    }
}

impl FieldContext {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldContext::Rational => FieldDescriptor::Rational,
            FieldContext::NumberField(k) => FieldDescriptor::NumberField {
                minimal_polynomial: k.render_modulus(),
                variable: k.var().to_string(),
            },
            FieldContext::Complex(p) => FieldDescriptor::Complex { precision_bits: *p },
        }
    }

    pub fn parse(&self, s: &str) -> Result<Scalar> {
        match self {
            FieldContext::Rational => parse_rational(s).map(|q| Scalar::Rational(Rational(q))),
            FieldContext::NumberField(k) => parse_nf(s, k).map(Scalar::NumberField),
            FieldContext::Complex(p) => parse_complex(s, *p).map(Scalar::Complex),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Scalar {
        match self {
            FieldContext::Rational => Scalar::Rational(Rational(q.clone())),
            FieldContext::NumberField(k) => Scalar::NumberField(k.from_rational(q.clone())),
            FieldContext::Complex(p) => Scalar::Complex(BigComplex::from_rational(q, *p)),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_rational(&BigRational::from_integer(n.into()))
    }
}

/// Polynomial in one variable with Gaussian-rational coefficients; the
/// common intermediate form of every grammar.
#[derive(Clone, Debug)]
struct Expr(Vec<(BigRational, BigRational)>);

impl Expr {
    fn constant(re: BigRational, im: BigRational) -> Expr {
        Expr(vec![(re, im)])
    }

    fn var() -> Expr {
        Expr(vec![
            (BigRational::zero(), BigRational::zero()),
            (BigRational::one(), BigRational::zero()),
        ])
    }

    fn add(&self, o: &Expr) -> Expr {
        let n = self.0.len().max(o.0.len());
        let z = (BigRational::zero(), BigRational::zero());
        Expr(
            (0..n)
                .map(|k| {
                    let a = self.0.get(k).unwrap_or(&z);
                    let b = o.0.get(k).unwrap_or(&z);
                    (&a.0 + &b.0, &a.1 + &b.1)
                })
                .collect(),
        )
    }

    fn neg(&self) -> Expr {
        Expr(self.0.iter().map(|(a, b)| (-a, -b)).collect())
    }

    fn mul(&self, o: &Expr) -> Expr {
        let mut out = vec![(BigRational::zero(), BigRational::zero()); self.0.len() + o.0.len() - 1];
        for (i, (a, b)) in self.0.iter().enumerate() {
            for (j, (c, d)) in o.0.iter().enumerate() {
                out[i + j].0 += a * c - b * d;
                out[i + j].1 += a * d + b * c;
            }
        }
        Expr(out)
    }

    fn as_constant(&self) -> Option<(BigRational, BigRational)> {
        self.0[1..]
            .iter()
            .all(|(a, b)| a.is_zero() && b.is_zero())
            .then(|| self.0[0].clone())
    }

    fn is_real(&self) -> bool {
        self.0.iter().all(|(_, b)| b.is_zero())
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    var: Option<&'a str>,
    allow_i: bool,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(format!("'{}' at offset {}", self.src, self.pos), msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = if self.eat(b'-') {
            self.term()?.neg()
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat(b'/') {
                let d = self.power()?;
                let (re, im) = d
                    .as_constant()
                    .ok_or_else(|| self.err("division by a non-constant"))?;
                let n2 = &re * &re + &im * &im;
                if n2.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.mul(&Expr::constant(&re / &n2, -&im / &n2));
            } else if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'(') {
                // implicit product: "2i", "3t^2", "2(t+1)"
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.err("expected a nonnegative integer exponent"))?;
            if e > 4096 {
                return Err(self.err("exponent too large"));
            }
            let mut out = Expr::constant(BigRational::one(), BigRational::zero());
            for _ in 0..e {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let q = self.number()?;
                Ok(Expr::constant(q, BigRational::zero()))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                if Some(name) == self.var {
                    Ok(Expr::var())
                } else if name == "i" && self.allow_i {
                    Ok(Expr::constant(BigRational::zero(), BigRational::one()))
                } else {
                    self.pos = start;
                    Err(self.err(&format!("unknown symbol '{name}'")))
                }
            }
            _ => Err(self.err("expected a number, symbol or '('")),
        }
    }

    fn number(&mut self) -> Result<BigRational> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.bytes.len() && p.bytes[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            &p.src[s..p.pos]
        };
        let int_part = digits(self).to_string();
        let mut frac_part = String::new();
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_part = digits(self).to_string();
        }
        if int_part.is_empty() && frac_part.is_empty() {
            self.pos = start;
            return Err(self.err("malformed number"));
        }
        let mut exp: i64 = 0;
        if matches!(self.bytes.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            let neg = match self.bytes.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let e = digits(self);
            if e.is_empty() {
                self.pos = save;
            } else {
                let v: i64 = e.parse().map_err(|_| self.err("exponent out of range"))?;
                if v > 100_000 {
                    return Err(self.err("exponent out of range"));
                }
                exp = if neg { -v } else { v };
            }
        }
        let mantissa: BigInt = format!("{int_part}{frac_part}")
            .parse()
            .map_err(|_| self.err("malformed number"))?;
        let shift = exp - frac_part.len() as i64;
        let ten = BigInt::from(10);
        Ok(if shift >= 0 {
            BigRational::from_integer(mantissa * num_traits::pow(ten, shift as usize))
        } else {
            BigRational::new(mantissa, num_traits::pow(ten, (-shift) as usize))
        })
    }
}

fn parse_expr(s: &str, var: Option<&str>, allow_i: bool) -> Result<Expr> {
    let mut p = Parser {
        src: s,
        bytes: s.as_bytes(),
        pos: 0,
        var,
        allow_i,
    };
    if p.peek().is_none() {
        return Err(Error::parse(format!("'{s}'"), "empty input"));
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Exact rational from `p`, `p/q` or a decimal literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let e = parse_expr(s, None, false)?;
    e.as_constant()
        .map(|(re, _)| re)
        .ok_or_else(|| Error::parse(format!("'{s}'"), "expected a rational constant"))
}

/// Polynomial with rational coefficients in the variable `var`.
pub fn parse_qpoly(s: &str, var: &str) -> Result<UniPoly<Rational>> {
    let e = parse_expr(s, Some(var), false)?;
    debug_assert!(e.is_real());
    Ok(UniPoly::new(e.0.into_iter().map(|(re, _)| Rational(re)).collect()))
}

/// Number-field element written as a polynomial in the field variable.
pub fn parse_nf(s: &str, field: &Arc<NumberField>) -> Result<NfElem> {
    let e = parse_expr(s, Some(field.var()), false)?;
    Ok(field.element(e.0.into_iter().map(|(re, _)| re).collect()))
}

/// Complex value `a+bi` at `prec` bits, each part rounded once from its exact
/// rational value.
pub fn parse_complex(s: &str, prec: usize) -> Result<BigComplex> {
    let e = parse_expr(s, None, true)?;
    let (re, im) = e
        .as_constant()
        .ok_or_else(|| Error::parse(format!("'{s}'"), "expected a complex constant"))?;
    Ok(BigComplex::from_rationals(&re, &im, prec))
}
