//! Coefficient backends.
//!
//! Every algorithm in the crate is generic over [`Field`]. Three backends
//! implement it: exact rationals, exact number fields `Q[t]/(m)`, and
//! arbitrary-precision complex floats. [`Scalar`] wraps all three behind one
//! runtime-tagged type for file formats and the command line.

mod complex;
pub mod matrix;
mod number_field;
mod parse;
mod rational;
pub mod roots;
#[allow(clippy::module_inception)]
mod scalar;

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::UniPoly;

pub use complex::{BigComplex, Real, DEFAULT_PRECISION};
pub use matrix::{Echelon, Matrix, ScalarMatrix};
pub use number_field::{NfElem, NumberField, MAX_MODULUS_DEGREE};
pub use parse::{parse_complex, parse_nf, parse_qpoly, parse_rational, FieldContext, FieldDescriptor};
pub use rational::Rational;
pub use roots::RootIsolation;
pub use scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Rational,
    NumberField,
    Complex,
}

/// Field arithmetic shared by all backends.
///
/// Elements carry their own context (number-field modulus, float precision),
/// so constants are produced from an existing element with the `*_like`
/// constructors. Binary operations assume [`Field::compatible`] operands;
/// public entry points check compatibility before doing arithmetic.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn backend(&self) -> Backend;

    /// Same backend and same context (modulus, precision).
    fn compatible(&self, other: &Self) -> bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn from_rational_like(&self, q: &BigRational) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Structural zero. For the complex backend this is an exact bit test;
    /// tolerance-aware tests go through [`Field::negligible`].
    fn is_zero(&self) -> bool;

    /// Approximate `log2 |self|`; `-inf` for zero.
    fn log2_abs(&self) -> f64;

    /// Working precision in bits; `None` for exact backends.
    fn precision_bits(&self) -> Option<usize>;

    /// Conversion to a complex float at `prec` bits, if the backend has a
    /// canonical embedding (rationals and complex floats do; number-field
    /// elements need an explicit embedding and return `None`).
    fn to_complex(&self, prec: usize) -> Option<BigComplex>;

    /// `exp(2 pi i k / n)` at this element's precision; `None` for exact
    /// backends.
    fn unit_root_like(&self, k: i64, n: i64) -> Option<Self>;

    /// The element as a rational number, when it is one exactly.
    fn rational_value(&self) -> Option<BigRational>;

    /// Roots of `p` representable in this backend.
    fn isolate_roots(p: &UniPoly<Self>) -> Result<RootIsolation<Self>>;

    fn is_exact(&self) -> bool {
        self.precision_bits().is_none()
    }

    /// Bits of relative tolerance used for zero tests: half the working
    /// precision for the complex backend, unused for exact backends.
    fn tolerance_bits(&self) -> f64 {
        self.precision_bits().map_or(f64::INFINITY, |p| p as f64 / 2.0)
    }

    /// Zero test relative to a magnitude `2^scale_log2`.
    fn negligible(&self, scale_log2: f64) -> bool {
        if self.is_exact() {
            self.is_zero()
        } else {
            self.is_zero() || self.log2_abs() <= scale_log2 - self.tolerance_bits()
        }
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Scale-aware zero testing for series coefficients: coefficient `n` is
/// compared against `2^(base + n * growth)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub base_log2: f64,
    pub growth_log2: f64,
}

impl Tolerance {
    pub const UNIT: Tolerance = Tolerance {
        base_log2: 0.0,
        growth_log2: 0.0,
    };

    pub fn new(base_log2: f64, growth_log2: f64) -> Self {
        let base_log2 = if base_log2.is_finite() { base_log2 } else { 0.0 };
        let growth_log2 = if growth_log2.is_finite() {
            growth_log2.max(0.0)
        } else {
            0.0
        };
        Tolerance {
            base_log2,
            growth_log2,
        }
    }

    pub fn scale_at(&self, n: usize) -> f64 {
        self.base_log2 + n as f64 * self.growth_log2
    }

    pub fn negligible<F: Field>(&self, c: &F, n: usize) -> bool {
        c.negligible(self.scale_at(n))
    }
}
