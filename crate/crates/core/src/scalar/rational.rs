use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{roots, BigComplex, Backend, Field, RootIsolation};
use crate::error::Result;
use crate::poly::UniPoly;

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational(q)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn rational_log2(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = q.numer().abs();
    let d = q.denom();
    let shift_n = n.bits().saturating_sub(60);
    let shift_d = d.bits().saturating_sub(60);
    let nf = num_traits::ToPrimitive::to_f64(&(n >> shift_n)).unwrap_or(1.0);
    let df = num_traits::ToPrimitive::to_f64(&(d >> shift_d)).unwrap_or(1.0);
    nf.log2() - df.log2() + shift_n as f64 - shift_d as f64
}

impl Field for Rational {
    fn backend(&self) -> Backend {
        Backend::Rational
    }

    fn compatible(&self, _other: &Self) -> bool {
        true
    }

    fn zero_like(&self) -> Self {
        Rational(BigRational::zero())
    }

    fn one_like(&self) -> Self {
        Rational(BigRational::one())
    }

    fn from_i64_like(&self, n: i64) -> Self {
        Rational::from_int(n)
    }

    fn from_rational_like(&self, q: &BigRational) -> Self {
        Rational(q.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }

    fn neg(&self) -> Self {
        Rational(-&self.0)
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn log2_abs(&self) -> f64 {
        rational_log2(&self.0)
    }

    fn precision_bits(&self) -> Option<usize> {
        None
    }

    fn unit_root_like(&self, _k: i64, _n: i64) -> Option<Self> {
        None
    }

    fn rational_value(&self) -> Option<BigRational> {
        Some(self.0.clone())
    }

    fn to_complex(&self, prec: usize) -> Option<BigComplex> {
        Some(BigComplex::from_rational(&self.0, prec))
    }

    fn isolate_roots(p: &UniPoly<Self>) -> Result<RootIsolation<Self>> {
        roots::isolate_rational(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_positive_denominator() {
        let q = Rational::new(6, -4);
        assert_eq!(q.0.numer(), &BigInt::from(-3));
        assert_eq!(q.0.denom(), &BigInt::from(2));
    }

    #[test]
    fn log2_estimate() {
        assert!((Rational::new(1, 1024).log2_abs() + 10.0).abs() < 1e-9);
        assert!((Rational::from_int(3).log2_abs() - 3f64.log2()).abs() < 1e-9);
        assert_eq!(Rational::from_int(0).log2_abs(), f64::NEG_INFINITY);
    }
}
