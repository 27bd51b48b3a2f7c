//! Exact arithmetic in `Q[t]/(m)`.
//!
//! A declared modulus must be monic and square-free. When it is reducible
//! over `Q` the quotient ring is a product of fields; arithmetic then takes
//! place in the factor of largest degree, so `t` still satisfies the declared
//! relation and the ring is a field. For `t^6 + 1 = (t^2 + 1)(t^4 - t^2 + 1)`
//! this is the twelfth cyclotomic field, which contains every sixth root of
//! `-1`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::complex::{real_log2, real_to_rational};
use super::rational::rational_log2;
use super::roots::{aberth, best_rational, candidate_precision, RootIsolation};
use super::{Backend, BigComplex, Field, Rational};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// Largest declared modulus degree accepted; factoring and root recovery
/// enumerate subsets of embeddings.
pub const MAX_MODULUS_DEGREE: usize = 16;

/// Cap on the embedding tuples tried when recovering roots in the field.
const MAX_ROOT_TUPLES: usize = 1 << 18;

const EMBEDDING_PRECISION: usize = 512;

#[derive(Debug)]
pub struct NumberField {
    var: String,
    declared: UniPoly<Rational>,
    modulus: UniPoly<Rational>,
    factors: Vec<UniPoly<Rational>>,
    embeddings: Vec<BigComplex>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.modulus == other.modulus
    }
}

impl NumberField {
    /// Validate `declared` (monic, square-free, degree at most
    /// [`MAX_MODULUS_DEGREE`]) and build the field.
    pub fn new(declared: UniPoly<Rational>, var: &str) -> Result<Arc<NumberField>> {
        let deg = declared
            .degree()
            .ok_or_else(|| Error::InvalidModulus("zero polynomial".into()))?;
        if deg == 0 {
            return Err(Error::InvalidModulus("constant polynomial".into()));
        }
        if deg > MAX_MODULUS_DEGREE {
            return Err(Error::InvalidModulus(format!(
                "degree {deg} exceeds the supported maximum {MAX_MODULUS_DEGREE}"
            )));
        }
        if !declared.leading().is_some_and(|c| c.0.is_one()) {
            return Err(Error::InvalidModulus("minimal polynomial must be monic".into()));
        }
        if declared.gcd(&declared.derivative()).degree() != Some(0) {
            return Err(Error::InvalidModulus(
                "minimal polynomial is not square-free".into(),
            ));
        }
        let factors = factor_over_q(&declared);
        let modulus = factors
            .iter()
            .max_by_key(|f| f.degree())
            .expect("at least one factor")
            .clone();
        let embeddings = complex_roots_of(&modulus, EMBEDDING_PRECISION);
        Ok(Arc::new(NumberField {
            var: var.to_string(),
            declared,
            modulus,
            factors,
            embeddings,
        }))
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("nonzero modulus")
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// The modulus as written by the user.
    pub fn declared(&self) -> &UniPoly<Rational> {
        &self.declared
    }

    /// The irreducible factor actually used.
    pub fn modulus(&self) -> &UniPoly<Rational> {
        &self.modulus
    }

    /// Irreducible factorization of the declared modulus over `Q`.
    pub fn factors(&self) -> &[UniPoly<Rational>] {
        &self.factors
    }

    pub fn is_reduced(&self) -> bool {
        self.factors.len() > 1
    }

    /// Complex roots of the modulus at 512 bits, one per embedding.
    pub fn embeddings(&self) -> &[BigComplex] {
        &self.embeddings
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<BigRational>) -> NfElem {
        NfElem::reduce(self.clone(), coeffs)
    }

    pub fn generator(self: &Arc<Self>) -> NfElem {
        self.element(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_rational(self: &Arc<Self>, q: BigRational) -> NfElem {
        self.element(vec![q])
    }

    pub fn render_modulus(&self) -> String {
        render_qpoly(self.declared.coeffs(), &self.var)
    }
}

fn render_qpoly(coeffs: &[Rational], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.0.is_zero() {
            continue;
        }
        let neg = c.0.is_negative();
        let abs = c.0.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn complex_roots_of(p: &UniPoly<Rational>, prec: usize) -> Vec<BigComplex> {
    let coeffs: Vec<BigComplex> = p
        .coeffs()
        .iter()
        .map(|c| BigComplex::from_rational(&c.0, prec))
        .collect();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut out = vec![BigComplex::zero(prec); zeros];
    out.extend(aberth(&coeffs[zeros..]));
    out
}

/// Group roots into conjugation classes: real roots alone, complex roots with
/// their conjugates.
fn conjugation_units(roots: &[BigComplex]) -> Vec<Vec<usize>> {
    let prec = roots.first().map_or(64, |r| r.precision());
    let tol = -(prec as f64) / 4.0;
    let mut used = vec![false; roots.len()];
    let mut units = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let scale = roots[i].log2_abs().max(0.0);
        if real_log2(roots[i].im()) <= tol + scale {
            units.push(vec![i]);
            continue;
        }
        let conj = roots[i].conj();
        let partner = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                roots[a]
                    .distance_log2(&conj)
                    .total_cmp(&roots[b].distance_log2(&conj))
            });
        match partner {
            Some(j) => {
                used[j] = true;
                units.push(vec![i, j]);
            }
            None => units.push(vec![i]),
        }
    }
    units
}

fn rationalize(z: &BigComplex, max_den: &BigInt) -> Option<BigRational> {
    let prec = z.precision();
    let scale = z.log2_abs().max(0.0);
    if real_log2(z.im()) > scale - prec as f64 / 4.0 {
        return None;
    }
    Some(best_rational(&real_to_rational(z.re()), max_den))
}

/// Irreducible factors of a square-free monic polynomial over `Q`, found by
/// searching products of conjugation classes of its complex roots and
/// verifying each candidate by exact division.
fn factor_over_q(m: &UniPoly<Rational>) -> Vec<UniPoly<Rational>> {
    let deg = m.degree().unwrap_or(0);
    if deg <= 1 {
        return vec![m.clone()];
    }
    let prec = EMBEDDING_PRECISION;
    let roots = complex_roots_of(m, prec);
    let mut units = conjugation_units(&roots);
    let max_den = BigInt::one() << 64;
    let mut remaining = m.clone();
    let mut factors = Vec::new();
    'outer: while remaining.degree().unwrap_or(0) > 1 && units.len() > 1 {
        let n = units.len();
        let mut masks: Vec<u32> = (1..(1u32 << n) - 1).collect();
        masks.sort_by_key(|mask| {
            let d: usize = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| units[i].len())
                .sum();
            (d, *mask)
        });
        for mask in masks {
            let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let d: usize = members.iter().map(|&i| units[i].len()).sum();
            if 2 * d > remaining.degree().unwrap_or(0) {
                break;
            }
            let one = BigComplex::from_i64(1, prec);
            let mut prod = UniPoly::constant(one);
            for &u in &members {
                for &r in &units[u] {
                    prod = prod.mul(&UniPoly::linear_root(&roots[r]));
                }
            }
            let coeffs: Option<Vec<Rational>> = prod
                .coeffs()
                .iter()
                .map(|c| rationalize(c, &max_den).map(Rational))
                .collect();
            let Some(coeffs) = coeffs else { continue };
            let candidate = UniPoly::new(coeffs);
            if let Some(q) = remaining.exact_div(&candidate) {
                factors.push(candidate);
                remaining = q;
                let mut keep = Vec::new();
                for (i, u) in units.into_iter().enumerate() {
                    if mask & (1 << i) == 0 {
                        keep.push(u);
                    }
                }
                units = keep;
                continue 'outer;
            }
        }
        break;
    }
    factors.push(remaining);
    factors.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| format!("{a}").cmp(&format!("{b}")))
    });
    factors
}

/// Element of a [`NumberField`], stored as a dense coefficient vector of
/// length equal to the field degree (powers of the generator, lowest first).
#[derive(Clone)]
pub struct NfElem {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other) && self.coeffs == other.coeffs
    }
}

impl NfElem {
    fn reduce(field: Arc<NumberField>, coeffs: Vec<BigRational>) -> NfElem {
        let d = field.degree();
        let m = field.modulus.coeffs();
        let mut c = coeffs;
        // t^d = -(m_0 + ... + m_{d-1} t^{d-1})
        while c.len() > d {
            let top = c.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - d;
            for (j, mj) in m.iter().take(d).enumerate() {
                c[shift + j] -= &top * &mj.0;
            }
        }
        c.resize(d, BigRational::zero());
        NfElem { field, coeffs: c }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn as_qpoly(&self) -> UniPoly<Rational> {
        UniPoly::new(self.coeffs.iter().cloned().map(Rational).collect())
    }

    /// Image under the embedding sending the generator to `theta`.
    pub fn embed(&self, theta: &BigComplex) -> BigComplex {
        let prec = theta.precision();
        let mut acc = BigComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(theta).add(&BigComplex::from_rational(c, prec));
        }
        acc
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<Rational> = self.coeffs.iter().cloned().map(Rational).collect();
        write!(f, "{}", render_qpoly(&coeffs, &self.field.var))
    }
}

impl Field for NfElem {
    fn backend(&self) -> Backend {
        Backend::NumberField
    }

    fn compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn zero_like(&self) -> Self {
        NfElem {
            field: self.field.clone(),
            coeffs: vec![BigRational::zero(); self.field.degree()],
        }
    }

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        self.field.element(vec![BigRational::from_integer(n.into())])
    }

    fn from_rational_like(&self, q: &BigRational) -> Self {
        self.field.element(vec![q.clone()])
    }

    fn add(&self, rhs: &Self) -> Self {
        NfElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        NfElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let d = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        NfElem::reduce(self.field.clone(), prod)
    }

    fn neg(&self) -> Self {
        NfElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // the modulus is irreducible, so the gcd is 1
        let (g, s, _) = self.as_qpoly().ext_gcd(&self.field.modulus);
        debug_assert_eq!(g.degree(), Some(0));
        Some(NfElem::reduce(
            self.field.clone(),
            s.coeffs().iter().map(|c| c.0.clone()).collect(),
        ))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn log2_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .map(rational_log2)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn precision_bits(&self) -> Option<usize> {
        None
    }

    fn unit_root_like(&self, _k: i64, _n: i64) -> Option<Self> {
        None
    }

    fn rational_value(&self) -> Option<BigRational> {
        self.as_rational()
    }

    fn to_complex(&self, _prec: usize) -> Option<BigComplex> {
        None
    }

    fn isolate_roots(p: &UniPoly<Self>) -> Result<RootIsolation<Self>> {
        isolate_in_field(p)
    }
}

/// Roots of a square-free `g` lying in the field: numerical roots of every
/// embedded image are combined (respecting complex conjugation), mapped back
/// through the inverse Vandermonde matrix of the embeddings, rationalized and
/// verified exactly.
fn field_roots_of_square_free(g: &UniPoly<NfElem>) -> Vec<NfElem> {
    let sample = g.sample().expect("nonzero").clone();
    let field = sample.field().clone();
    let d = field.degree();
    let n = g.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        let r = g.coeffs()[0]
            .neg()
            .div(&g.coeffs()[1])
            .expect("leading coefficient");
        return vec![r];
    }
    let bits = g
        .coeffs()
        .iter()
        .flat_map(|c| c.coeffs().iter())
        .map(|q| q.numer().bits().max(q.denom().bits()))
        .max()
        .unwrap_or(1);
    let prec = candidate_precision(bits, n * d).max(EMBEDDING_PRECISION);
    let thetas: Vec<BigComplex> = if prec <= EMBEDDING_PRECISION {
        field.embeddings().to_vec()
    } else {
        complex_roots_of(&field.modulus, prec)
    };
    let thetas: Vec<BigComplex> = thetas.iter().map(|t| t.with_precision(prec)).collect();
    let units = conjugation_units(&thetas);

    let mut per_unit: Vec<Vec<BigComplex>> = Vec::new();
    for unit in &units {
        let theta = &thetas[unit[0]];
        let coeffs: Vec<BigComplex> = g.coeffs().iter().map(|c| c.embed(theta)).collect();
        let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        let mut rts = vec![BigComplex::zero(prec); zeros];
        rts.extend(aberth(&coeffs[zeros..]));
        if unit.len() == 1 {
            // a real embedding maps field elements to real numbers
            rts.retain(|z| {
                let scale = z.log2_abs().max(0.0);
                real_log2(z.im()) <= scale - prec as f64 / 4.0
            });
        }
        per_unit.push(rts);
    }
    let tuples: usize = per_unit
        .iter()
        .map(Vec::len)
        .try_fold(1usize, |acc, k| acc.checked_mul(k))
        .unwrap_or(usize::MAX);
    if tuples == 0 || tuples > MAX_ROOT_TUPLES {
        return Vec::new();
    }

    // inverse Vandermonde: coefficient_j = sum_k W[j][k] * sigma_k(r)
    let vandermonde: Vec<Vec<BigComplex>> = thetas
        .iter()
        .map(|t| (0..d as u32).map(|j| t.pow(j)).collect())
        .collect();
    let Some(w) = invert_complex(&vandermonde) else {
        return Vec::new();
    };

    let max_den = BigInt::one() << (prec / 4);
    let mut found: Vec<NfElem> = Vec::new();
    let mut idx = vec![0usize; units.len()];
    'tuples: loop {
        let mut images = vec![BigComplex::zero(prec); d];
        for (u, unit) in units.iter().enumerate() {
            let v = &per_unit[u][idx[u]];
            images[unit[0]] = v.clone();
            if unit.len() == 2 {
                images[unit[1]] = v.conj();
            }
        }
        let mut coeffs = Vec::with_capacity(d);
        let mut ok = true;
        for row in &w {
            let c = row
                .iter()
                .zip(&images)
                .fold(BigComplex::zero(prec), |acc, (a, b)| acc.add(&a.mul(b)));
            match rationalize(&c, &max_den) {
                Some(q) => coeffs.push(q),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let cand = field.element(coeffs);
            if !found.contains(&cand) && g.eval(&cand).is_zero() {
                found.push(cand);
                if found.len() == n {
                    break 'tuples;
                }
            }
        }
        // odometer increment
        let mut u = 0;
        loop {
            if u == idx.len() {
                break 'tuples;
            }
            idx[u] += 1;
            if idx[u] < per_unit[u].len() {
                break;
            }
            idx[u] = 0;
            u += 1;
        }
    }
    found
}

fn invert_complex(m: &[Vec<BigComplex>]) -> Option<Vec<Vec<BigComplex>>> {
    let n = m.len();
    let prec = m[0][0].precision();
    let mut a: Vec<Vec<BigComplex>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(BigComplex::from_i64(i64::from(i == j), prec));
            }
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].log2_abs().total_cmp(&a[y][col].log2_abs()))?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        let inv = a[col][col].inv()?;
        for v in a[col].iter_mut() {
            *v = v.mul(&inv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = a[col][c].mul(&f);
                    a[r][c] = a[r][c].sub(&t);
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub(crate) fn isolate_in_field(p: &UniPoly<NfElem>) -> Result<RootIsolation<NfElem>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    let mut residual = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        let mut rest = factor.clone();
        for r in field_roots_of_square_free(&factor) {
            rest = rest
                .exact_div(&UniPoly::linear_root(&r))
                .expect("verified root divides");
            roots.push((r, mult));
        }
        if rest.degree().unwrap_or(0) > 0 {
            residual.push((rest, mult));
        }
    }
    roots.sort_by_key(|(r, _)| r.to_string());
    Ok(RootIsolation { roots, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpoly(v: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(v.iter().map(|&c| Rational::from_int(c)).collect())
    }

    fn sextic_field() -> Arc<NumberField> {
        NumberField::new(qpoly(&[1, 0, 0, 0, 0, 0, 1]), "t").unwrap()
    }

    #[test]
    fn reducible_modulus_uses_largest_factor() {
        let k = sextic_field();
        assert_eq!(k.factors().len(), 2);
        assert_eq!(k.modulus(), &qpoly(&[1, 0, -1, 0, 1]));
        assert_eq!(k.degree(), 4);
        let t = k.generator();
        assert_eq!(t.pow(6).add(&t.one_like()), t.zero_like());
        assert_eq!(k.render_modulus(), "t^6 + 1");
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(NumberField::new(qpoly(&[1, 2, 1]), "t").is_err());
        assert!(NumberField::new(qpoly(&[1, 0, 2]), "t").is_err());
        assert!(NumberField::new(qpoly(&[3]), "t").is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let k = sextic_field();
        let t = k.generator();
        let a = t.pow(3).add(&t.from_i64_like(2));
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b), a.one_like());
    }

    #[test]
    fn sixth_roots_of_minus_one() {
        let k = sextic_field();
        let t = k.generator();
        let mut coeffs = vec![t.one_like()];
        coeffs.extend(std::iter::repeat(t.zero_like()).take(5));
        coeffs.push(t.one_like());
        let p = UniPoly::new(coeffs);
        let iso = NfElem::isolate_roots(&p).unwrap();
        assert_eq!(iso.roots.len(), 6);
        assert!(iso.residual.is_empty());
        for (r, m) in &iso.roots {
            assert_eq!(*m, 1);
            assert!(p.eval(r).is_zero());
        }
        assert!(iso.roots.iter().any(|(r, _)| *r == t));
    }

    #[test]
    fn irreducible_quadratic_stays() {
        let k = NumberField::new(qpoly(&[-2, 0, 1]), "s").unwrap();
        assert!(!k.is_reduced());
        let s = k.generator();
        assert_eq!(s.to_string(), "s");
        assert_eq!(s.mul(&s).to_string(), "2");
    }
}
