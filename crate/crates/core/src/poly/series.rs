use std::fmt;

use crate::scalar::{Field, Tolerance};

/// Power series truncated after the coefficient of `s^order`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Series<F> {
    /// Series with the given coefficients, padded or cut to `order + 1` terms.
    pub fn new(mut coeffs: Vec<F>, order: usize, like: &F) -> Self {
        coeffs.resize(order + 1, like.zero_like());
        Series { coeffs }
    }

    pub fn constant(c: F, order: usize) -> Self {
        let z = c.zero_like();
        Series::new(vec![c], order, &z)
    }

    /// `c0 + s`.
    pub fn shifted_variable(c0: F, order: usize) -> Self {
        let one = c0.one_like();
        let z = c0.zero_like();
        Series::new(vec![c0, one], order, &z)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &F {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let z = self.coeffs[0].zero_like();
        Series::new(self.coeffs[..=order.min(self.order())].to_vec(), order, &z)
    }

    pub fn add(&self, o: &Self) -> Self {
        Series {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Series {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![self.coeffs[0].zero_like(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Series { coeffs: out }
    }

    /// `sum_k c_k * lambda^k s^k`: the series in the variable `s / lambda`.
    pub fn rescale(&self, lambda: &F) -> Self {
        let mut p = lambda.one_like();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.mul(&p));
            p = p.mul(lambda);
        }
        Series { coeffs: out }
    }

    /// Hasse derivative `D^(j)`: coefficient `n` becomes `C(n+j, j) c_{n+j}`.
    /// The result is truncated at `order - j`.
    pub fn hasse_derivative(&self, j: usize) -> Self {
        let n = self.coeffs.len();
        let z = self.coeffs[0].zero_like();
        if j >= n {
            return Series::new(Vec::new(), 0, &z);
        }
        let mut out = Vec::with_capacity(n - j);
        for k in j..n {
            out.push(self.coeffs[k].mul(&z.from_i64_like(binomial(k as u64, j as u64) as i64)));
        }
        Series { coeffs: out }
    }

    /// Index of the first coefficient that is not negligible under `tol`, or
    /// `None` if every coefficient through the truncation order vanishes.
    pub fn valuation(&self, tol: &Tolerance) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(k, c)| !tol.negligible(*c, *k))
            .map(|(k, _)| k)
    }

    /// `max_k log2|c_k| / k` over `k >= 1`, clamped at zero: the exponential
    /// growth rate of the coefficients.
    pub fn growth_log2(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.log2_abs() / k as f64)
            .fold(0.0, f64::max)
    }

    /// Render as `c0 + c1*x + ...` in the variable `var`, skipping zeros.
    pub fn render(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("({c})*{var}"),
                _ => format!("({c})*{var}^{k}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        format!("{} + O({var}^{})", parts.join(" + "), self.order() + 1)
    }
}

impl<F: Field> fmt::Display for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn s(v: &[i64], order: usize) -> Series<Rational> {
        let z = Rational::from_int(0);
        Series::new(v.iter().map(|&c| Rational::from_int(c)).collect(), order, &z)
    }

    #[test]
    fn truncated_product() {
        // (1 + s)^2 = 1 + 2s + s^2
        let a = s(&[1, 1], 3);
        assert_eq!(a.mul(&a), s(&[1, 2, 1], 3));
        let b = s(&[1, 1], 1);
        assert_eq!(b.mul(&b), s(&[1, 2], 1));
    }

    #[test]
    fn hasse_derivatives() {
        // s^3: D^(1) = 3 s^2, D^(2) = 3 s, D^(3) = 1
        let a = s(&[0, 0, 0, 1], 5);
        assert_eq!(a.hasse_derivative(1).coeffs()[2], Rational::from_int(3));
        assert_eq!(a.hasse_derivative(2).coeffs()[1], Rational::from_int(3));
        assert_eq!(a.hasse_derivative(3).coeffs()[0], Rational::from_int(1));
        assert_eq!(a.hasse_derivative(3).order(), 2);
    }

    #[test]
    fn valuation_and_growth() {
        let a = s(&[0, 0, 5, 0, 16], 4);
        assert_eq!(a.valuation(&Tolerance::UNIT), Some(2));
        assert!((a.growth_log2() - 1.160964).abs() < 1e-4);
        assert_eq!(s(&[0, 0], 3).valuation(&Tolerance::UNIT), None);
        assert_eq!(binomial(10, 3), 120);
    }
}
