//! Univariate root isolation.
//!
//! Complex roots come from simultaneous Aberth–Ehrlich iteration, first at
//! 64 bits and then at the working precision. Approximations that belong to
//! one multiple root are merged into a cluster whose centroid is reported
//! with the cluster size as multiplicity. Exact backends use the complex
//! approximations only as candidates: every reported root is verified by
//! exact evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::complex::{real_log2, real_to_rational};
use super::{BigComplex, Field, Rational};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// Roots found in the backend, plus the part of the polynomial whose roots
/// are not representable there, as square-free factors with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootIsolation<F> {
    pub roots: Vec<(F, usize)>,
    pub residual: Vec<(UniPoly<F>, usize)>,
}

impl<F: Field> RootIsolation<F> {
    /// Sum of root multiplicities plus residual degrees; equals the degree of
    /// the input polynomial.
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum::<usize>()
            + self
                .residual
                .iter()
                .map(|(f, m)| f.degree().unwrap_or(0) * m)
                .sum::<usize>()
    }

    pub fn residual_degrees(&self) -> Vec<usize> {
        self.residual
            .iter()
            .map(|(f, _)| f.degree().unwrap_or(0))
            .collect()
    }
}

fn horner(coeffs: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let n = coeffs.len();
    let mut p = coeffs[n - 1].clone();
    let mut dp = z.zero_like();
    for c in coeffs[..n - 1].iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(i, log2 |a_i|)`.
fn initial_guesses(coeffs: &[BigComplex], prec: usize) -> Vec<BigComplex> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.log2_abs()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (i1, l1) = hull[hull.len() - 2];
            let (i2, l2) = hull[hull.len() - 1];
            // drop the middle point if it lies on or below the chord
            let cross = (i2 as f64 - i1 as f64) * (p.1 - l1) - (l2 - l1) * (p.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(coeffs.len() - 1);
    for (e, w) in hull.windows(2).enumerate() {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let k = j - i;
        let log_r = (li - lj) / k as f64;
        let offset = 0.4 + 0.9 * e as f64;
        for t in 0..k {
            let theta = offset + std::f64::consts::TAU * t as f64 / k as f64;
            let unit = BigComplex::from_f64(theta.cos(), theta.sin(), prec);
            // 2^log_r split into integer and fractional parts to stay in range
            let ip = log_r.floor();
            let frac = super::Real::try_from((log_r - ip).exp2())
                .unwrap_or(super::Real::ONE)
                .with_precision(prec)
                .value();
            let r = super::Real::from_parts(dashu_int::IBig::ONE, ip as isize) * frac;
            out.push(unit.mul_real(&r));
        }
    }
    out
}

fn aberth_stage(coeffs: &[BigComplex], z: &mut [BigComplex], prec: usize, max_iter: usize) {
    let n = z.len();
    let mut done = vec![false; n];
    let tol = -(prec as f64) + 12.0;
    for _ in 0..max_iter {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp) = horner(coeffs, &z[k]);
            if p.is_zero() {
                done[k] = true;
                continue;
            }
            let Some(newton) = p.div(&dp) else {
                // stationary point: nudge and retry next sweep
                let nudge = BigComplex::from_f64(1e-3, 7e-4, prec);
                z[k] = z[k].add(&nudge);
                all_done = false;
                continue;
            };
            let mut sum = z[k].zero_like();
            for j in 0..n {
                if j != k {
                    if let Some(inv) = z[k].sub(&z[j]).inv() {
                        sum = sum.add(&inv);
                    }
                }
            }
            let denom = z[k].one_like().sub(&newton.mul(&sum));
            let step = newton.div(&denom).unwrap_or(newton);
            z[k] = z[k].sub(&step);
            let scale = z[k].log2_abs().max(0.0);
            if step.log2_abs() <= tol + scale {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
}

/// Approximations of all roots of a polynomial with nonzero leading and
/// constant coefficients, at the precision of the coefficients.
pub(crate) fn aberth(coeffs: &[BigComplex]) -> Vec<BigComplex> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let prec = coeffs[0].precision();
    if n == 1 {
        return vec![coeffs[0].neg().div(&coeffs[1]).expect("leading coefficient")];
    }
    let low = prec.min(64);
    let low_coeffs: Vec<BigComplex> = coeffs.iter().map(|c| c.with_precision(low)).collect();
    let mut z = initial_guesses(&low_coeffs, low);
    aberth_stage(&low_coeffs, &mut z, low, 400);
    if prec > low {
        let mut z_hi: Vec<BigComplex> = z.iter().map(|c| c.with_precision(prec)).collect();
        aberth_stage(coeffs, &mut z_hi, prec, 200);
        z = z_hi;
    }
    z
}

/// First `k` Taylor coefficients `p^(j)(z)/j!` by repeated synthetic
/// division.
fn taylor_at(coeffs: &[BigComplex], z: &BigComplex, k: usize) -> Vec<BigComplex> {
    let mut work: Vec<BigComplex> = coeffs.to_vec();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k.min(coeffs.len()) {
        let len = work.len();
        let mut acc = work[len - 1].clone();
        let mut quotient = vec![acc.clone(); len - 1];
        for i in (0..len - 1).rev() {
            if i + 1 < len - 1 {
                quotient[i] = acc.clone();
            }
            acc = acc.mul(z).add(&work[i]);
        }
        out.push(acc);
        work = quotient;
        if work.is_empty() {
            break;
        }
    }
    out
}

/// `log2 sum 2^x_i`, ignoring `-inf` terms.
fn log2_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.filter(|x| x.is_finite()).collect();
    let Some(m) = v.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    m + v.iter().map(|x| (x - m).exp2()).sum::<f64>().log2()
}

/// Merge approximations into clusters. Two approximations join when they are
/// within `2^rho_log2` (relative to their magnitude) or when their
/// pseudo-zero discs overlap. The disc of `z` has radius
/// `min_k ((|p(z)| + eps S(z)) / |p^(k)(z)/k!|)^(1/k)` with
/// `S(z) = sum |a_k| |z|^k` and `eps = 2^(-prec/2)`: roots that move together
/// under coefficient perturbations of relative size `eps` form one cluster.
pub(crate) fn cluster(
    coeffs: &[BigComplex],
    approx: &[BigComplex],
    rho_log2: f64,
) -> Vec<(BigComplex, usize)> {
    let n = approx.len();
    let eps_log2 = -(coeffs[0].precision() as f64) / 2.0;
    let coeff_log2: Vec<f64> = coeffs.iter().map(Field::log2_abs).collect();
    let max_k = n.min(32);
    let radius: Vec<f64> = approx
        .iter()
        .map(|z| {
            let lz = z.log2_abs();
            let size = log2_sum(
                coeff_log2
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.is_finite())
                    .map(|(k, c)| if k == 0 { *c } else { c + k as f64 * lz }),
            );
            let taylor = taylor_at(coeffs, z, max_k + 1);
            let num = log2_sum([taylor[0].log2_abs(), eps_log2 + size].into_iter());
            (1..taylor.len())
                .filter(|&k| !taylor[k].is_zero())
                .map(|k| (num - taylor[k].log2_abs()) / k as f64)
                .fold(f64::INFINITY, f64::min)
                + 1.0
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = approx[i].distance_log2(&approx[j]);
            let scale = approx[i].log2_abs().max(approx[j].log2_abs()).max(0.0);
            let inclusion = radius[i].max(radius[j]);
            if d <= rho_log2 + scale || d <= inclusion {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    let mut out: Vec<(BigComplex, usize)> = groups
        .into_iter()
        .map(|(_, members)| {
            let m = members.len();
            let sum = members
                .iter()
                .fold(approx[members[0]].zero_like(), |acc, &i| acc.add(&approx[i]));
            let centroid = sum.div(&sum.from_i64_like(m as i64)).expect("nonzero count");
            let spread = members
                .iter()
                .map(|&i| approx[i].distance_log2(&centroid))
                .fold(rho_log2, f64::max);
            (refine_cluster(coeffs, centroid, m, spread), m)
        })
        .collect();
    sort_complex_roots(&mut out);
    out
}

/// Newton iteration on the `(m-1)`-th derivative, whose root near an
/// `m`-fold cluster is simple. The result is kept only if it stays within
/// the cluster's spread of the centroid.
fn refine_cluster(
    coeffs: &[BigComplex],
    centroid: BigComplex,
    m: usize,
    spread_log2: f64,
) -> BigComplex {
    if m == 1 {
        return centroid;
    }
    let mut d: Vec<BigComplex> = coeffs.to_vec();
    for _ in 1..m {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&c.from_i64_like(k as i64)))
            .collect();
    }
    if d.len() < 2 {
        return centroid;
    }
    let prec = centroid.precision() as f64;
    let mut z = centroid.clone();
    for _ in 0..100 {
        let (p, dp) = horner(&d, &z);
        let Some(step) = p.div(&dp) else { break };
        z = z.sub(&step);
        if step.is_zero() || step.log2_abs() < z.log2_abs().max(0.0) - prec + 4.0 {
            break;
        }
    }
    if z.distance_log2(&centroid) <= spread_log2 + 1.0 {
        z
    } else {
        centroid
    }
}

pub(crate) fn sort_complex_roots(roots: &mut [(BigComplex, usize)]) {
    roots.sort_by(|(a, ma), (b, mb)| {
        let (ar, ai) = a.to_f64_pair();
        let (br, bi) = b.to_f64_pair();
        ar.total_cmp(&br)
            .then(ai.total_cmp(&bi))
            .then(ma.cmp(mb))
    });
}

/// All complex roots with multiplicities, clustered at radius
/// `2^(-precision/3)`.
pub fn isolate_complex(p: &UniPoly<BigComplex>) -> Result<RootIsolation<BigComplex>> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(RootIsolation {
            roots: Vec::new(),
            residual: Vec::new(),
        });
    }
    let prec = p.coeffs()[0].precision();
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let rest = &p.coeffs()[zeros..];
    let approx = aberth(rest);
    let mut roots = if rest.len() > 1 {
        cluster(rest, &approx, -(prec as f64) / 3.0)
    } else {
        Vec::new()
    };
    if zeros > 0 {
        roots.push((BigComplex::zero(prec), zeros));
        sort_complex_roots(&mut roots);
    }
    Ok(RootIsolation {
        roots,
        residual: Vec::new(),
    })
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents).
pub(crate) fn best_rational(x: &BigRational, max_den: &BigInt) -> BigRational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    loop {
        let (a, r) = num.div_mod_floor(&den);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_den {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        if r.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, r);
    }
    if k1.is_zero() {
        return BigRational::from_integer(x.floor().to_integer());
    }
    BigRational::new(h1, k1)
}

/// Working precision for numeric candidate generation from an exact
/// polynomial whose coefficients have at most `bits` bits.
pub(crate) fn candidate_precision(bits: u64, degree: usize) -> usize {
    (256 + 2 * bits as usize + 4 * degree).min(8192)
}

fn integer_coefficients(p: &UniPoly<Rational>) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.0.denom()));
    p.coeffs()
        .iter()
        .map(|c| (&c.0 * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}

fn rational_roots_of_square_free(g: &UniPoly<Rational>) -> Vec<Rational> {
    let ints = integer_coefficients(g);
    let lead = ints.last().expect("nonzero").abs();
    let bits = ints.iter().map(|c| c.bits()).max().unwrap_or(1);
    let deg = g.degree().unwrap_or(0);
    let prec = candidate_precision(bits, deg);
    let complex: Vec<BigComplex> = ints
        .iter()
        .map(|c| BigComplex::from_rational(&BigRational::from_integer(c.clone()), prec))
        .collect();
    let zeros = complex.iter().take_while(|c| c.is_zero()).count();
    let mut found: Vec<Rational> = Vec::new();
    if zeros > 0 {
        found.push(Rational::from_int(0));
    }
    let rest = &complex[zeros..];
    if rest.len() <= 1 {
        return found;
    }
    let lead_real = BigRational::from_integer(lead.clone());
    for z in aberth(rest) {
        let scale = z.log2_abs().max(0.0);
        if real_log2(z.im()) > scale - prec as f64 / 4.0 {
            continue;
        }
        // a rational root of a primitive integer polynomial has denominator
        // dividing the leading coefficient
        let scaled = real_to_rational(z.re()) * &lead_real;
        let candidate = Rational(BigRational::new(scaled.round().to_integer(), lead.clone()));
        if !found.contains(&candidate) && g.eval(&candidate).is_zero() {
            found.push(candidate);
        }
    }
    found
}

/// Rational roots exactly; the irrational part as square-free factors.
pub fn isolate_rational(p: &UniPoly<Rational>) -> Result<RootIsolation<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    let mut residual = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        let mut rest = factor.clone();
        for r in rational_roots_of_square_free(&factor) {
            rest = rest
                .exact_div(&UniPoly::linear_root(&r))
                .expect("verified root divides");
            roots.push((r, mult));
        }
        if rest.degree().unwrap_or(0) > 0 {
            residual.push((rest, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(RootIsolation { roots, residual })
}
