use std::fmt;

use dashu_float::ops::EstimatedLog2;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::ops::UnsignedAbs;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{roots, Backend, Field, RootIsolation};
use crate::error::Result;
use crate::poly::UniPoly;

/// Binary arbitrary-precision float used for both parts of [`BigComplex`].
pub type Real = FBig<HalfEven, 2>;

/// Default working precision of the complex backend, in bits.
pub const DEFAULT_PRECISION: usize = 256;

pub(crate) fn ibig_from_bigint(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub(crate) fn bigint_from_ibig(n: &IBig) -> BigInt {
    let neg = n < &IBig::ZERO;
    let mag: UBig = n.unsigned_abs();
    let v = BigInt::from_bytes_le(Sign::Plus, &mag.to_le_bytes());
    if neg {
        -v
    } else {
        v
    }
}

pub(crate) fn real_is_zero(x: &Real) -> bool {
    *x.repr().significand() == IBig::ZERO
}

pub(crate) fn real_zero(prec: usize) -> Real {
    Real::ZERO.with_precision(prec).value()
}

pub(crate) fn real_from_i64(n: i64, prec: usize) -> Real {
    Real::from(n).with_precision(prec).value()
}

pub(crate) fn real_from_bigint(n: &BigInt, prec: usize) -> Real {
    Real::from(ibig_from_bigint(n)).with_precision(prec).value()
}

pub(crate) fn real_from_rational(q: &BigRational, prec: usize) -> Real {
    let num = real_from_bigint(q.numer(), prec + 8);
    let den = real_from_bigint(q.denom(), prec + 8);
    (num / den).with_precision(prec).value()
}

/// Exact value of a binary float as a rational.
pub(crate) fn real_to_rational(x: &Real) -> BigRational {
    let repr = x.repr();
    let sig = bigint_from_ibig(repr.significand());
    let exp = repr.exponent();
    if exp >= 0 {
        BigRational::from_integer(sig << exp as usize)
    } else {
        BigRational::new(sig, BigInt::from(1) << (-exp) as usize)
    }
}

pub(crate) fn real_log2(x: &Real) -> f64 {
    if real_is_zero(&x) {
        f64::NEG_INFINITY
    } else {
        x.log2_est() as f64
    }
}

pub(crate) fn real_to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

/// Exact decimal expansion of a binary float.
pub(crate) fn real_exact_decimal(x: &Real) -> String {
    let repr = x.repr();
    let sig = bigint_from_ibig(repr.significand());
    let exp = repr.exponent();
    if sig.is_zero() {
        return "0".to_string();
    }
    if exp >= 0 {
        return (sig << exp as usize).to_string();
    }
    let k = (-exp) as usize;
    let scaled = sig.abs() * num_traits::pow(BigInt::from(5), k);
    let mut digits = scaled.to_string();
    if digits.len() <= k {
        digits = "0".repeat(k + 1 - digits.len()) + &digits;
    }
    let (int_part, frac_part) = digits.split_at(digits.len() - k);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if sig.is_negative() { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Rounded decimal rendering with `digits` significant digits.
pub(crate) fn real_decimal(x: &Real, digits: usize) -> String {
    if real_is_zero(&x) {
        return "0".to_string();
    }
    let d = x.clone().with_base_and_precision::<10>(digits).value();
    let l = real_log2(x);
    if (-14.0..50.0).contains(&l) {
        format!("{d}")
    } else {
        format!("{d:e}")
    }
}

/// Complex number with two [`Real`] parts at a fixed precision.
#[derive(Clone)]
pub struct BigComplex {
    re: Real,
    im: Real,
    prec: usize,
}

impl PartialEq for BigComplex {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.re == other.re && self.im == other.im
    }
}

impl BigComplex {
    pub fn new(re: Real, im: Real, prec: usize) -> Self {
        BigComplex {
            re: re.with_precision(prec).value(),
            im: im.with_precision(prec).value(),
            prec,
        }
    }

    pub fn zero(prec: usize) -> Self {
        BigComplex {
            re: real_zero(prec),
            im: real_zero(prec),
            prec,
        }
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        BigComplex {
            re: real_from_i64(n, prec),
            im: real_zero(prec),
            prec,
        }
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        BigComplex {
            re: real_from_rational(q, prec),
            im: real_zero(prec),
            prec,
        }
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: usize) -> Self {
        BigComplex {
            re: real_from_rational(re, prec),
            im: real_from_rational(im, prec),
            prec,
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        let conv = |v: f64| {
            Real::try_from(v)
                .map(|r| r.with_precision(prec).value())
                .unwrap_or_else(|_| real_zero(prec))
        };
        BigComplex {
            re: conv(re),
            im: conv(im),
            prec,
        }
    }

    pub fn i(prec: usize) -> Self {
        BigComplex {
            re: real_zero(prec),
            im: real_from_i64(1, prec),
            prec,
        }
    }

    /// `exp(2 pi i k / n)`.
    pub fn unit_root(k: i64, n: i64, prec: usize) -> Self {
        let guard = prec + 16;
        let frac = real_from_i64(2 * k, guard) / real_from_i64(n, guard);
        let (s, c) = frac.sin_cos_pi();
        BigComplex::new(c, s, prec)
    }

    pub fn re(&self) -> &Real {
        &self.re
    }

    pub fn im(&self) -> &Real {
        &self.im
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        BigComplex::new(self.re.clone(), self.im.clone(), prec)
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
            prec: self.prec,
        }
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (real_to_f64(&self.re), real_to_f64(&self.im))
    }

    pub fn mul_real(&self, r: &Real) -> Self {
        BigComplex {
            re: &self.re * r,
            im: &self.im * r,
            prec: self.prec,
        }
    }

    /// `log2 |self - other|`.
    pub fn distance_log2(&self, other: &Self) -> f64 {
        Field::sub(self, other).log2_abs()
    }

    /// Rendering with `digits` significant decimal digits per part.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let re_zero = real_is_zero(&self.re);
        let im_zero = real_is_zero(&self.im);
        let re = real_decimal(&self.re, digits);
        let im = real_decimal(&self.im, digits);
        match (re_zero, im_zero) {
            (_, true) => re,
            (true, false) => format!("{im}i"),
            (false, false) => {
                if im.starts_with('-') {
                    format!("{re}{im}i")
                } else {
                    format!("{re}+{im}i")
                }
            }
        }
    }

    /// Exact decimal rendering; parses back to the same value at the same
    /// precision.
    pub fn to_exact_string(&self) -> String {
        let re = real_exact_decimal(&self.re);
        let im = real_exact_decimal(&self.im);
        if real_is_zero(&self.im) {
            re
        } else if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }

    fn display_digits(&self) -> usize {
        ((self.prec as f64 * 0.30103) as usize).clamp(6, 40)
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(self.display_digits()))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(self.display_digits()))
    }
}

impl Field for BigComplex {
    fn backend(&self) -> Backend {
        Backend::Complex
    }

    fn compatible(&self, other: &Self) -> bool {
        self.prec == other.prec
    }

    fn zero_like(&self) -> Self {
        BigComplex::zero(self.prec)
    }

    fn one_like(&self) -> Self {
        BigComplex::from_i64(1, self.prec)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        BigComplex::from_i64(n, self.prec)
    }

    fn from_rational_like(&self, q: &BigRational) -> Self {
        BigComplex::from_rational(q, self.prec)
    }

    fn add(&self, rhs: &Self) -> Self {
        BigComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
            prec: self.prec,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        BigComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
            prec: self.prec,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        BigComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
            prec: self.prec,
        }
    }

    fn neg(&self) -> Self {
        BigComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
            prec: self.prec,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(BigComplex {
            re: &self.re / &d,
            im: -(&self.im / &d),
            prec: self.prec,
        })
    }

    fn is_zero(&self) -> bool {
        real_is_zero(&self.re) && real_is_zero(&self.im)
    }

    fn log2_abs(&self) -> f64 {
        let lr = real_log2(&self.re);
        let li = real_log2(&self.im);
        let hi = lr.max(li);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        let lo = lr.min(li);
        if lo == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2()
    }

    fn precision_bits(&self) -> Option<usize> {
        Some(self.prec)
    }

    fn unit_root_like(&self, k: i64, n: i64) -> Option<Self> {
        Some(BigComplex::unit_root(k, n, self.precision()))
    }

    fn rational_value(&self) -> Option<BigRational> {
        None
    }

    fn to_complex(&self, prec: usize) -> Option<BigComplex> {
        Some(self.with_precision(prec))
    }

    fn isolate_roots(p: &UniPoly<Self>) -> Result<RootIsolation<Self>> {
        roots::isolate_complex(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_identities() {
        let p = 128;
        let a = BigComplex::from_f64(1.5, -2.0, p);
        let b = BigComplex::from_f64(0.25, 3.0, p);
        let prod = a.mul(&b);
        let back = prod.mul(&b.inv().unwrap());
        assert!(back.distance_log2(&a) < -120.0);
        assert_eq!(a.sub(&a), BigComplex::zero(p));
    }

    #[test]
    fn unit_roots_have_modulus_one() {
        let p = 256;
        for k in 0..12 {
            let w = BigComplex::unit_root(k, 12, p);
            let one = BigComplex::from_i64(1, p);
            let err = w.pow(12).distance_log2(&one);
            assert!(err < -240.0, "k={k} err={err}");
        }
    }

    #[test]
    fn exact_decimal_round_trips() {
        let p = 200;
        let x = BigComplex::from_rationals(
            &BigRational::new(1.into(), 3.into()),
            &BigRational::new((-7).into(), 5.into()),
            p,
        );
        let s = x.to_exact_string();
        let y = super::super::parse::parse_complex(&s, p).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn log2_of_components() {
        let z = BigComplex::from_f64(3.0, 4.0, 64);
        assert!((z.log2_abs() - 5f64.log2()).abs() < 1e-3);
    }
}
