use std::fmt;

use crate::scalar::Field;

/// Dense univariate polynomial, lowest degree first. Trailing structural
/// zeros are trimmed, so the leading coefficient is nonzero unless the
/// polynomial is zero (empty coefficient list).
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        UniPoly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); k];
        coeffs.push(c);
        UniPoly::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: &F) -> Self {
        UniPoly::new(vec![r.neg(), r.one_like()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Coefficient of `x^k`, or `None` past the degree.
    pub fn coeff(&self, k: usize) -> Option<&F> {
        self.coeffs.get(k)
    }

    pub fn sample(&self) -> Option<&F> {
        self.coeffs.first()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&c.from_i64_like(k as i64)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UniPoly::new(out)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(Field::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let one = match self.sample() {
            Some(c) => UniPoly::constant(c.one_like()),
            None => return if e == 0 { UniPoly::zero() } else { self.clone() },
        };
        (0..e).fold(one, |acc, _| acc.mul(self))
    }

    /// Euclidean division. `None` if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dlead_inv = divisor.leading()?.inv()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((UniPoly::zero(), self.clone()));
        }
        let zero = dlead_inv.zero_like();
        let mut quot = vec![zero; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&dlead_inv);
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&c.mul(d));
                }
            }
            // exact cancellation of the leading term, also for floats
            rem[k + dd] = c.zero_like();
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Exact quotient; `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(Field::inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor. Meant for exact backends.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let sample = self
            .sample()
            .or_else(|| other.sample())
            .expect("ext_gcd of two zero polynomials")
            .clone();
        let one = UniPoly::constant(sample.one_like());
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.leading().and_then(Field::inv).expect("nonzero gcd");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Yun's square-free decomposition over a field of characteristic zero:
    /// monic factors `a_i` (pairwise coprime, square-free) with
    /// `self = lc * prod a_i^i`. Only factors of positive degree are returned.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let c = df.exact_div(&a0).expect("gcd divides derivative");
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let b_next = b.exact_div(&a).expect("gcd divides");
            let c_next = d.exact_div(&a).expect("gcd divides");
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            d = c_next.sub(&b_next.derivative());
            b = b_next;
            i += 1;
        }
        out
    }

    /// Drop leading coefficients that are negligible relative to the largest
    /// coefficient. Identity for exact backends.
    pub fn trim_negligible(&self) -> Self {
        let Some(first) = self.sample() else {
            return self.clone();
        };
        if first.is_exact() {
            return self.clone();
        }
        let scale = self
            .coeffs
            .iter()
            .map(Field::log2_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.negligible(scale)) {
            coeffs.pop();
        }
        UniPoly::new(coeffs)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Render with variable name `var`, lowest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match k {
                0 => format!("{c}"),
                1 => format!("({c})*{var}"),
                _ => format!("({c})*{var}^{k}"),
            };
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&term);
        }
        out
    }
}

impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}
