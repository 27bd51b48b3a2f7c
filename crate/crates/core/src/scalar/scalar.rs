use std::fmt;

use num_rational::BigRational;

use super::{Backend, BigComplex, Field, NfElem, Rational, RootIsolation};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// Runtime-tagged scalar used by file formats and the command line.
///
/// Rationals mix freely with either other backend (they are lifted); mixing a
/// number-field element with a complex float is a programming error and
/// panics. Public entry points reject mixed inputs with
/// [`Error::BackendMismatch`] before any arithmetic happens.
#[derive(Clone, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    NumberField(NfElem),
    Complex(BigComplex),
}

impl Scalar {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_number_field(&self) -> Option<&NfElem> {
        match self {
            Scalar::NumberField(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_complex(&self) -> Option<&BigComplex> {
        match self {
            Scalar::Complex(z) => Some(z),
            _ => None,
        }
    }

    /// Text form accepted back by the scalar grammar of the same field.
    pub fn to_exact_string(&self) -> String {
        match self {
            Scalar::Rational(q) => q.to_string(),
            Scalar::NumberField(a) => a.to_string(),
            Scalar::Complex(z) => z.to_exact_string(),
        }
    }

    /// `Ok` if both operands may be combined.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::BackendMismatch {
                left: self.backend(),
                right: other.backend(),
            })
        }
    }

    fn lift(&self, like: &Scalar) -> Scalar {
        match (self, like) {
            (Scalar::Rational(q), Scalar::NumberField(a)) => {
                Scalar::NumberField(a.from_rational_like(&q.0))
            }
            (Scalar::Rational(q), Scalar::Complex(z)) => Scalar::Complex(z.from_rational_like(&q.0)),
            _ => self.clone(),
        }
    }

    fn binary(
        &self,
        rhs: &Self,
        fq: impl Fn(&Rational, &Rational) -> Rational,
        fk: impl Fn(&NfElem, &NfElem) -> NfElem,
        fc: impl Fn(&BigComplex, &BigComplex) -> BigComplex,
    ) -> Self {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(fq(a, b)),
            (Scalar::NumberField(a), Scalar::NumberField(b)) => Scalar::NumberField(fk(a, b)),
            (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(fc(a, b)),
            (Scalar::Rational(_), _) => self.lift(rhs).binary(rhs, fq, fk, fc),
            (_, Scalar::Rational(_)) => self.binary(&rhs.lift(self), fq, fk, fc),
            _ => panic!(
                "scalar backend mismatch: {:?} vs {:?}",
                self.backend(),
                rhs.backend()
            ),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::NumberField(a) => write!(f, "{a}"),
            Scalar::Complex(z) => write!(f, "{z}"),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<NfElem> for Scalar {
    fn from(a: NfElem) -> Self {
        Scalar::NumberField(a)
    }
}

impl From<BigComplex> for Scalar {
    fn from(z: BigComplex) -> Self {
        Scalar::Complex(z)
    }
}

fn unwrap_poly<G: Field>(p: &UniPoly<Scalar>, f: impl Fn(&Scalar) -> Option<G>) -> Option<UniPoly<G>> {
    let coeffs: Option<Vec<G>> = p.coeffs().iter().map(f).collect();
    coeffs.map(UniPoly::new)
}

fn wrap_isolation<G: Field>(iso: RootIsolation<G>, f: impl Fn(G) -> Scalar) -> RootIsolation<Scalar> {
    RootIsolation {
        roots: iso.roots.into_iter().map(|(r, m)| (f(r), m)).collect(),
        residual: iso
            .residual
            .into_iter()
            .map(|(p, m)| (UniPoly::new(p.into_coeffs().into_iter().map(&f).collect()), m))
            .collect(),
    }
}

impl Field for Scalar {
    fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::NumberField(_) => Backend::NumberField,
            Scalar::Complex(_) => Backend::Complex,
        }
    }

    fn compatible(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => true,
            (Scalar::NumberField(a), Scalar::NumberField(b)) => a.compatible(b),
            (Scalar::Complex(a), Scalar::Complex(b)) => a.compatible(b),
            _ => false,
        }
    }

    fn zero_like(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.zero_like()),
            Scalar::NumberField(a) => Scalar::NumberField(a.zero_like()),
            Scalar::Complex(z) => Scalar::Complex(z.zero_like()),
        }
    }

    fn one_like(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.one_like()),
            Scalar::NumberField(a) => Scalar::NumberField(a.one_like()),
            Scalar::Complex(z) => Scalar::Complex(z.one_like()),
        }
    }

    fn from_i64_like(&self, n: i64) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.from_i64_like(n)),
            Scalar::NumberField(a) => Scalar::NumberField(a.from_i64_like(n)),
            Scalar::Complex(z) => Scalar::Complex(z.from_i64_like(n)),
        }
    }

    fn from_rational_like(&self, r: &BigRational) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.from_rational_like(r)),
            Scalar::NumberField(a) => Scalar::NumberField(a.from_rational_like(r)),
            Scalar::Complex(z) => Scalar::Complex(z.from_rational_like(r)),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        self.binary(rhs, Field::add, Field::add, Field::add)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.binary(rhs, Field::sub, Field::sub, Field::sub)
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.binary(rhs, Field::mul, Field::mul, Field::mul)
    }

    fn neg(&self) -> Self {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.neg()),
            Scalar::NumberField(a) => Scalar::NumberField(a.neg()),
            Scalar::Complex(z) => Scalar::Complex(z.neg()),
        }
    }

    fn inv(&self) -> Option<Self> {
        match self {
            Scalar::Rational(q) => q.inv().map(Scalar::Rational),
            Scalar::NumberField(a) => a.inv().map(Scalar::NumberField),
            Scalar::Complex(z) => z.inv().map(Scalar::Complex),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::NumberField(a) => a.is_zero(),
            Scalar::Complex(z) => z.is_zero(),
        }
    }

    fn log2_abs(&self) -> f64 {
        match self {
            Scalar::Rational(q) => q.log2_abs(),
            Scalar::NumberField(a) => a.log2_abs(),
            Scalar::Complex(z) => z.log2_abs(),
        }
    }

    fn precision_bits(&self) -> Option<usize> {
        match self {
            Scalar::Complex(z) => z.precision_bits(),
            _ => None,
        }
    }

    fn unit_root_like(&self, k: i64, n: i64) -> Option<Self> {
        match self {
            Scalar::Complex(z) => z.unit_root_like(k, n).map(Scalar::Complex),
            _ => None,
        }
    }

    fn rational_value(&self) -> Option<BigRational> {
        match self {
            Scalar::Rational(q) => q.rational_value(),
            Scalar::NumberField(a) => a.rational_value(),
            Scalar::Complex(_) => None,
        }
    }

    fn to_complex(&self, prec: usize) -> Option<BigComplex> {
        match self {
            Scalar::Rational(q) => q.to_complex(prec),
            Scalar::NumberField(a) => a.to_complex(prec),
            Scalar::Complex(z) => z.to_complex(prec),
        }
    }

    fn isolate_roots(p: &UniPoly<Scalar>) -> Result<RootIsolation<Scalar>> {
        let Some(first) = p.coeffs().iter().find(|c| !matches!(c, Scalar::Rational(_))).cloned()
        else {
            let q = unwrap_poly(p, |c| c.as_rational().cloned()).expect("all rational");
            return Ok(wrap_isolation(Rational::isolate_roots(&q)?, Scalar::Rational));
        };
        for c in p.coeffs() {
            if !matches!(c, Scalar::Rational(_)) {
                first.check_compatible(c)?;
            }
        }
        let lifted = UniPoly::new(p.coeffs().iter().map(|c| c.lift(&first)).collect());
        match first {
            Scalar::NumberField(_) => {
                let k = unwrap_poly(&lifted, |c| c.as_number_field().cloned()).expect("uniform");
                Ok(wrap_isolation(NfElem::isolate_roots(&k)?, Scalar::NumberField))
            }
            Scalar::Complex(_) => {
                let z = unwrap_poly(&lifted, |c| c.as_complex().cloned()).expect("uniform");
                Ok(wrap_isolation(BigComplex::isolate_roots(&z)?, Scalar::Complex))
            }
            Scalar::Rational(_) => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_lift_into_complex() {
        let a = Scalar::Rational(Rational::new(1, 2));
        let b = Scalar::Complex(BigComplex::from_i64(2, 64));
        let s = a.add(&b);
        assert_eq!(s.backend(), Backend::Complex);
        assert_eq!(s, Scalar::Complex(BigComplex::from_rational(&Rational::new(5, 2).0, 64)));
    }

    #[test]
    fn incompatible_backends_reported() {
        let a = Scalar::Rational(Rational::from_int(1));
        let b = Scalar::Complex(BigComplex::from_i64(1, 64));
        assert!(matches!(
            a.check_compatible(&b),
            Err(Error::BackendMismatch { .. })
        ));
    }

    #[test]
    fn isolate_rational_scalars() {
        let p = UniPoly::new(vec![
            Scalar::Rational(Rational::from_int(-1)),
            Scalar::Rational(Rational::from_int(0)),
            Scalar::Rational(Rational::from_int(1)),
        ]);
        let iso = Scalar::isolate_roots(&p).unwrap();
        assert_eq!(iso.total_multiplicity(), 2);
    }
}
