//! Shared fixtures: seeded random sextics over the complex backend and
//! points sampled on them by intersecting with random lines.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wlab_core::curve::{Curve, ProjectivePoint};
use wlab_core::poly::{HomogeneousPoly, Monomial, UniPoly};
use wlab_core::scalar::roots::isolate_complex;
use wlab_core::scalar::{BigComplex, Field};

pub const PREC: usize = 256;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=9)))
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> BigComplex {
    BigComplex::from_rationals(&small_rational(rng), &small_rational(rng), PREC)
}

/// Dense sextic with small random Gaussian-rational coefficients.
pub fn random_sextic(rng: &mut ChaCha8Rng) -> Curve<BigComplex> {
    let terms: Vec<_> = Monomial::all_of_degree(6)
        .into_iter()
        .map(|m| (m, random_complex(rng)))
        .collect();
    Curve::sextic(HomogeneousPoly::new(6, terms).unwrap()).unwrap()
}

/// Random line `a0 X + a1 Y + a2 Z` with `a2 != 0`.
pub fn random_line(rng: &mut ChaCha8Rng) -> [BigComplex; 3] {
    loop {
        let l = [random_complex(rng), random_complex(rng), random_complex(rng)];
        if !l[2].is_zero() {
            return l;
        }
    }
}

/// Points of `C` on the line `a . X = 0` with their multiplicities as roots
/// of `F` restricted to the line.
pub fn line_section(curve: &Curve<BigComplex>, a: &[BigComplex; 3]) -> Vec<(ProjectivePoint<BigComplex>, usize)> {
    let zero = BigComplex::zero(PREC);
    let one = BigComplex::from_i64(1, PREC);
    let inv = a[2].inv().unwrap().neg();
    let p0 = [one.clone(), zero.clone(), a[0].mul(&inv)];
    let p1 = [zero.clone(), one.clone(), a[1].mul(&inv)];
    let coord: Vec<UniPoly<BigComplex>> = (0..3)
        .map(|i| UniPoly::new(vec![p0[i].clone(), p1[i].clone()]))
        .collect();
    let mut g = UniPoly::zero();
    for (m, c) in curve.poly().terms() {
        let mut t = UniPoly::constant(c.clone());
        for i in 0..3 {
            t = t.mul(&coord[i].pow(m.0[i]));
        }
        g = g.add(&t);
    }
    let iso = isolate_complex(&g).unwrap();
    let mut out: Vec<_> = iso
        .roots
        .iter()
        .map(|(t, m)| {
            let c = [0, 1, 2].map(|i| p0[i].add(&t.mul(&p1[i])));
            (ProjectivePoint::new(c).unwrap(), *m)
        })
        .collect();
    let deg = g.degree().unwrap_or(0);
    if deg < 6 {
        out.push((ProjectivePoint::new(p1.clone()).unwrap(), 6 - deg));
    }
    out
}

/// `count` points of `C` taken from sections by random lines.
pub fn random_points(curve: &Curve<BigComplex>, rng: &mut ChaCha8Rng, count: usize) -> Vec<ProjectivePoint<BigComplex>> {
    let mut out = Vec::new();
    while out.len() < count {
        let l = random_line(rng);
        for (p, _) in line_section(curve, &l) {
            if out.len() < count {
                out.push(p);
            }
        }
    }
    out
}

pub fn linear(a: &[BigComplex; 3]) -> HomogeneousPoly<BigComplex> {
    HomogeneousPoly::linear(a.clone())
}
