//! Global point discovery: the flex locus `C ∩ Hess(C)` by elimination,
//! batch classification of supplied points and total-weight accounting.

use serde::Serialize;

use crate::classify::{classify, Finding, PointClassification, TOTAL_WEIGHT};
use crate::curve::{Curve, ProjectivePoint};
use crate::error::{Error, Result};
use crate::local::{branch_series, tangent_line, Multiplicity, DEFAULT_ORDER};
use crate::poly::{HomogeneousPoly, UniPoly, Var};
use crate::scalar::{Field, Matrix, Rational};

/// Bezout number of a sextic and its Hessian.
pub const HESSIAN_BEZOUT: usize = 72;

/// A located flex with its tangent contact and its intersection
/// multiplicity with the Hessian.
#[derive(Clone)]
pub struct FlexPoint<F> {
    pub point: ProjectivePoint<F>,
    pub contact: Multiplicity,
    pub hessian_multiplicity: Multiplicity,
}

/// Output of [`flex_locus`].
#[derive(Clone)]
pub struct FlexLocus<F> {
    pub points: Vec<FlexPoint<F>>,
    /// Coordinate eliminated by the resultant.
    pub eliminated: Var,
    /// Degrees of square-free factors whose roots are not in the field.
    pub residual_degrees: Vec<usize>,
}

impl<F: Field> FlexLocus<F> {
    /// `sum I(C, Hess; p)` over the located points.
    pub fn hessian_total(&self) -> usize {
        self.points
            .iter()
            .map(|f| f.hessian_multiplicity.lower_bound())
            .sum()
    }

    /// All 72 intersections accounted for.
    pub fn complete(&self) -> bool {
        self.residual_degrees.is_empty() && self.hessian_total() == HESSIAN_BEZOUT
    }
}

/// All flexes of `C`: eliminate `z` from `F` and its Hessian (falling back to
/// `y`, then `x`), lift the roots and attach contacts.
pub fn flex_locus<F: Field>(curve: &Curve<F>) -> Result<FlexLocus<F>> {
    flex_locus_permuted(curve, [0, 1, 2])
}

/// [`flex_locus`] computed on the curve with permuted coordinates and mapped
/// back; the result is the same set for every permutation.
pub fn flex_locus_permuted<F: Field>(curve: &Curve<F>, perm: [usize; 3]) -> Result<FlexLocus<F>> {
    if curve.degree() != 6 {
        return Err(Error::WrongDegree {
            expected: 6,
            found: curve.degree(),
        });
    }
    let hess = curve.poly().hessian()?;
    if hess.is_zero() {
        return Err(Error::DegenerateHessian);
    }
    let mut inverse = [0; 3];
    for i in 0..3 {
        inverse[perm[i]] = i;
    }
    let f = curve.poly().permute(perm);
    let h = hess.permute(perm);
    // eliminate z, then y, then x (in the permuted frame)
    for (var, swap) in [(Var::Z, [0, 1, 2]), (Var::Y, [0, 2, 1]), (Var::X, [2, 1, 0])] {
        let Some((cands, residual_degrees)) = locate(&f.permute(swap), &h.permute(swap))? else {
            continue;
        };
        let mut points: Vec<ProjectivePoint<F>> = Vec::new();
        for c in cands {
            let p = c.permute(swap).permute(inverse);
            let p = verify(curve, &hess, p)?;
            if let Some(p) = p {
                if !points.iter().any(|q| q.same_as(&p, dedup_tolerance(&p))) {
                    points.push(p);
                }
            }
        }
        let points = points
            .into_iter()
            .map(|p| attach_contacts(curve, &hess, p))
            .collect::<Result<Vec<_>>>()?;
        return Ok(FlexLocus {
            points,
            eliminated: Var::from_index(perm.iter().position(|&j| j == var.index()).unwrap_or(2)),
            residual_degrees,
        });
    }
    Err(Error::EliminationFailed)
}

fn dedup_tolerance<F: Field>(p: &ProjectivePoint<F>) -> f64 {
    p.coords()[0]
        .precision_bits()
        .map_or(0.0, |b| -(b as f64) / 3.0)
}

fn attach_contacts<F: Field>(
    curve: &Curve<F>,
    hess: &HomogeneousPoly<F>,
    point: ProjectivePoint<F>,
) -> Result<FlexPoint<F>> {
    let b = branch_series(curve, &point, DEFAULT_ORDER)?;
    let contact = b.multiplicity(&tangent_line(curve, &point)?);
    let hessian_multiplicity = b.multiplicity(hess);
    Ok(FlexPoint {
        point,
        contact,
        hessian_multiplicity,
    })
}

/// Zero test for `poly(p)` at a normalized point, with the looser
/// `precision/3` threshold for located (polished) points.
fn vanishes<F: Field>(poly: &HomogeneousPoly<F>, p: &ProjectivePoint<F>) -> Result<bool> {
    let v = poly.evaluate(p.coords())?;
    Ok(match v.precision_bits() {
        None => v.is_zero(),
        Some(bits) => {
            v.is_zero()
                || v.log2_abs()
                    <= poly.max_log2() + (poly.num_terms() as f64).log2() - bits as f64 / 3.0
        }
    })
}

/// Polish (complex), test `F = H = 0` and smoothness.
fn verify<F: Field>(
    curve: &Curve<F>,
    hess: &HomogeneousPoly<F>,
    p: ProjectivePoint<F>,
) -> Result<Option<ProjectivePoint<F>>> {
    let p = if p.coords()[0].is_exact() {
        p
    } else {
        polish(curve, hess, p)
    };
    if !vanishes(curve.poly(), &p)? || !vanishes(hess, &p)? {
        return Ok(None);
    }
    curve.gradient_at(&p)?;
    Ok(Some(p))
}

/// Newton iteration for `F = H = 0` in the affine chart of the point's
/// largest coordinate. Stops (keeping the input) when the Jacobian is
/// numerically singular or a step diverges.
fn polish<F: Field>(curve: &Curve<F>, hess: &HomogeneousPoly<F>, p: ProjectivePoint<F>) -> ProjectivePoint<F> {
    let bits = p.coords()[0].precision_bits().unwrap_or(0) as f64;
    let a = p.pivot();
    let (u, v) = match a {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let hgrad = hess.gradient();
    let fgrad = curve.gradient();
    let mut c = p.coords().clone();
    for _ in 0..60 {
        let ev = |q: &HomogeneousPoly<F>| q.evaluate(&c).expect("uniform backend");
        let (f, h) = (ev(curve.poly()), ev(hess));
        let (fu, fv, hu, hv) = (ev(&fgrad[u]), ev(&fgrad[v]), ev(&hgrad[u]), ev(&hgrad[v]));
        let det = fu.mul(&hv).sub(&fv.mul(&hu));
        let size = (fu.log2_abs() + hv.log2_abs()).max(fv.log2_abs() + hu.log2_abs());
        if det.is_zero() || det.log2_abs() < size - bits / 4.0 {
            break;
        }
        let inv = det.inv().expect("nonzero determinant");
        let du = f.mul(&hv).sub(&h.mul(&fv)).mul(&inv);
        let dv = fu.mul(&h).sub(&hu.mul(&f)).mul(&inv);
        let step = du.log2_abs().max(dv.log2_abs());
        if step > -8.0 {
            return p;
        }
        c[u] = c[u].sub(&du);
        c[v] = c[v].sub(&dv);
        if step < -(bits - 16.0) {
            break;
        }
    }
    ProjectivePoint::new(c).unwrap_or(p)
}

type Located<F> = (Vec<ProjectivePoint<F>>, Vec<usize>);

/// Candidates for `F = H = 0` via `Res_z`; `None` when the resultant
/// vanishes identically.
fn locate<F: Field>(f: &HomogeneousPoly<F>, h: &HomogeneousPoly<F>) -> Result<Option<Located<F>>> {
    let like = f.sample().ok_or(Error::ZeroPolynomial)?.clone();
    let one = like.one_like();
    let zero = like.zero_like();
    // coefficients of z^k as polynomials in x, on the chart y = 1
    let fz = coeffs_in_z(f, &one);
    let hz = coeffs_in_z(h, &one);
    let r = drop_negligible(&resultant_in_x(&fz, &hz, f.degree() as usize, h.degree() as usize, &like)?);
    if r.is_zero() {
        return Ok(None);
    }
    let mut cands = Vec::new();
    let mut residual = Vec::new();
    let iso = F::isolate_roots(&r)?;
    residual.extend(iso.residual_degrees());
    for (x0, _) in &iso.roots {
        let fx = UniPoly::new(fz.iter().map(|c| c.eval(x0)).collect());
        let hx = UniPoly::new(hz.iter().map(|c| c.eval(x0)).collect());
        let (zs, res) = common_roots(&fx, &hx)?;
        residual.extend(res);
        for z in zs {
            cands.push(ProjectivePoint::new([x0.clone(), one.clone(), z])?);
        }
    }
    // the line y = 0 in the chart z = 1, and the point (1 : 0 : 0)
    let fl = on_line(f, &zero, &one);
    let hl = on_line(h, &zero, &one);
    if !fl.is_zero() || !hl.is_zero() {
        let (xs, res) = common_roots(&fl, &hl)?;
        residual.extend(res);
        for x in xs {
            cands.push(ProjectivePoint::new([x, zero.clone(), one.clone()])?);
        }
    }
    let corner = ProjectivePoint::new([one.clone(), zero.clone(), zero.clone()])?;
    if vanishes(f, &corner)? && vanishes(h, &corner)? {
        cands.push(corner);
    }
    Ok(Some((cands, residual)))
}

/// Interpolation noise set to exact zeros (complex backend), so that exact
/// factors such as `x^k` survive as exact multiple roots.
fn drop_negligible<F: Field>(r: &UniPoly<F>) -> UniPoly<F> {
    let scale = r.coeffs().iter().map(Field::log2_abs).fold(f64::NEG_INFINITY, f64::max);
    UniPoly::new(
        r.coeffs()
            .iter()
            .map(|c| if c.negligible(scale) { c.zero_like() } else { c.clone() })
            .collect(),
    )
}

/// `F(x, 1, z) = sum_k c_k(x) z^k`.
fn coeffs_in_z<F: Field>(f: &HomogeneousPoly<F>, one: &F) -> Vec<UniPoly<F>> {
    f.specialize(Var::Y, one, Var::Z)
}

/// `F(x, 0, 1)` as a polynomial in `x`.
fn on_line<F: Field>(f: &HomogeneousPoly<F>, zero: &F, one: &F) -> UniPoly<F> {
    UniPoly::new(
        f.specialize(Var::Y, zero, Var::X)
            .iter()
            .map(|c| c.eval(one))
            .collect(),
    )
}

/// Roots shared by two univariates: exact gcd for exact backends; roots of
/// `f` where `g` is small for the complex backend.
fn common_roots<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>) -> Result<(Vec<F>, Vec<usize>)> {
    let Some(sample) = f.sample().or(g.sample()) else {
        return Err(Error::EliminationFailed);
    };
    if sample.is_exact() {
        let d = f.gcd(g);
        if d.degree().unwrap_or(0) == 0 {
            return Ok((Vec::new(), Vec::new()));
        }
        let iso = F::isolate_roots(&d)?;
        let residual = iso.residual_degrees();
        return Ok((iso.roots.into_iter().map(|(r, _)| r).collect(), residual));
    }
    let f = drop_negligible(f);
    if f.degree().unwrap_or(0) == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let iso = F::isolate_roots(&f)?;
    // the final zero test happens on polished points; keep every root here
    Ok((iso.roots.into_iter().map(|(r, _)| r).collect(), Vec::new()))
}

/// Formal Sylvester matrix of `sum a_k z^k` (formal degree `m`) and
/// `sum b_k z^k` (formal degree `n`), leading coefficients first.
fn formal_sylvester<G: Field>(a: &[G], m: usize, b: &[G], n: usize, zero: &G) -> Matrix<G> {
    let size = m + n;
    let coeff = |v: &[G], k: usize| v.get(k).cloned().unwrap_or_else(|| zero.clone());
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for k in 0..=m {
            row[i + k] = coeff(a, m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for k in 0..=n {
            row[i + k] = coeff(b, n - k);
        }
        rows.push(row);
    }
    Matrix::from_rows(rows, size).expect("square Sylvester matrix")
}

/// `Res_z` of two forms (given as `z`-coefficient lists) as a polynomial in
/// `x`, by evaluation and interpolation. Curves with rational coefficients
/// are eliminated over Q.
fn resultant_in_x<F: Field>(fz: &[UniPoly<F>], hz: &[UniPoly<F>], m: usize, n: usize, like: &F) -> Result<UniPoly<F>> {
    let rational = |v: &[UniPoly<F>]| -> Option<Vec<UniPoly<Rational>>> {
        v.iter()
            .map(|p| {
                p.coeffs()
                    .iter()
                    .map(|c| c.rational_value().map(Rational))
                    .collect::<Option<Vec<_>>>()
                    .map(UniPoly::new)
            })
            .collect()
    };
    if like.is_exact() {
        if let (Some(fq), Some(hq)) = (rational(fz), rational(hz)) {
            let r = interpolate_exact(&fq, &hq, m, n, &Rational::from_int(0))?;
            return Ok(r.map(|c| like.from_rational_like(&c.0)));
        }
        return interpolate_exact(fz, hz, m, n, like);
    }
    interpolate_unit_circle(fz, hz, m, n, like)
}

fn resultant_at<G: Field>(fz: &[UniPoly<G>], hz: &[UniPoly<G>], m: usize, n: usize, x: &G) -> Result<G> {
    let a: Vec<G> = fz.iter().map(|c| c.eval(x)).collect();
    let b: Vec<G> = hz.iter().map(|c| c.eval(x)).collect();
    formal_sylvester(&a, m, &b, n, &x.zero_like()).determinant()
}

/// Newton interpolation at the integer nodes `0..=m n`.
fn interpolate_exact<G: Field>(fz: &[UniPoly<G>], hz: &[UniPoly<G>], m: usize, n: usize, like: &G) -> Result<UniPoly<G>> {
    let count = m * n + 1;
    let nodes: Vec<G> = (0..count as i64).map(|i| like.from_i64_like(i)).collect();
    let mut c: Vec<G> = nodes
        .iter()
        .map(|x| resultant_at(fz, hz, m, n, x))
        .collect::<Result<_>>()?;
    for j in 1..count {
        let inv = like.from_i64_like(j as i64).inv().expect("nonzero node gap");
        for i in (j..count).rev() {
            c[i] = c[i].sub(&c[i - 1]).mul(&inv);
        }
    }
    let mut p = UniPoly::constant(c[count - 1].clone());
    for i in (0..count - 1).rev() {
        p = p
            .mul(&UniPoly::new(vec![nodes[i].neg(), like.one_like()]))
            .add(&UniPoly::constant(c[i].clone()));
    }
    Ok(p)
}

/// Interpolation at roots of unity (inverse DFT).
fn interpolate_unit_circle<G: Field>(fz: &[UniPoly<G>], hz: &[UniPoly<G>], m: usize, n: usize, like: &G) -> Result<UniPoly<G>> {
    let count = (m * n + 1) as i64;
    let root = |k: i64| like.unit_root_like(k.rem_euclid(count), count).expect("complex backend");
    let values: Vec<G> = (0..count)
        .map(|k| resultant_at(fz, hz, m, n, &root(k)))
        .collect::<Result<_>>()?;
    let scale = like.from_i64_like(count).inv().expect("nonzero count");
    let twiddle: Vec<G> = (0..count).map(|k| root(-k)).collect();
    let coeffs = (0..count)
        .map(|j| {
            let mut acc = like.zero_like();
            for (k, v) in values.iter().enumerate() {
                acc = acc.add(&v.mul(&twiddle[((j * k as i64) % count) as usize]));
            }
            acc.mul(&scale)
        })
        .collect();
    Ok(UniPoly::new(coeffs))
}

/// Classify every point, preserving order; failures stay per item.
pub fn classify_batch<F: Field>(
    curve: &Curve<F>,
    points: &[ProjectivePoint<F>],
) -> Vec<Result<PointClassification<F>>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(|p| classify(curve, p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(|p| classify(curve, p)).collect()
    }
}

/// Weight accounting against the total of 990.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightAccounting {
    pub accumulated: u64,
    pub target: u64,
    pub deficit: i64,
    pub complete: bool,
    /// Distinct points of positive weight among the inputs.
    pub weierstrass_points: usize,
}

impl WeightAccounting {
    /// A negative deficit means more weight than the curve carries.
    pub fn is_consistent(&self) -> bool {
        self.deficit >= 0
    }

    /// Reported checks: negative deficit, and for complete accountings the
    /// lower bound of `2g + 6 = 26` Weierstrass points.
    pub fn findings(&self) -> Vec<Finding> {
        let mut out = Vec::new();
        if !self.is_consistent() {
            out.push(Finding::new(
                "negative-deficit",
                format!("accumulated weight {} exceeds {}", self.accumulated, self.target),
            ));
        }
        if self.complete && self.weierstrass_points < 26 {
            out.push(Finding::new(
                "point-count",
                format!("only {} Weierstrass points in a complete accounting", self.weierstrass_points),
            ));
        }
        out
    }
}

/// Sum the gap-based weights of distinct classified points.
pub fn verify_total_weight<F: Field>(classifications: &[PointClassification<F>]) -> Result<WeightAccounting> {
    for (i, a) in classifications.iter().enumerate() {
        for b in &classifications[..i] {
            if a.point.same_as(&b.point, dedup_tolerance(&a.point)) {
                return Err(Error::DuplicatePoint(a.point.to_string()));
            }
        }
    }
    let accumulated: u64 = classifications.iter().map(|c| u64::from(c.weight.gap_weight)).sum();
    let target = u64::from(TOTAL_WEIGHT);
    let deficit = target as i64 - accumulated as i64;
    Ok(WeightAccounting {
        accumulated,
        target,
        deficit,
        complete: deficit == 0,
        weierstrass_points: classifications.iter().filter(|c| c.weight.gap_weight > 0).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn formal_resultant_of_linear_forms() {
        // Res_z(z - x, z - 2) = x - 2 up to sign
        let fz = vec![UniPoly::new(vec![q(0), q(-1)]), UniPoly::constant(q(1))];
        let hz = vec![UniPoly::constant(q(-2)), UniPoly::constant(q(1))];
        let r = interpolate_exact(&fz, &hz, 1, 1, &q(0)).unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!(r.eval(&q(2)).is_zero());
    }

    #[test]
    fn rational_hyperflexes() {
        // x^6 + y^6 - z^6: Hessian is a multiple of (xyz)^4; the rational
        // flexes are (0 : +-1 : 1) and (+-1 : 0 : 1)
        let f = HomogeneousPoly::new(
            6,
            [(Monomial([6, 0, 0]), q(1)), (Monomial([0, 6, 0]), q(1)), (Monomial([0, 0, 6]), q(-1))],
        )
        .unwrap();
        let c = Curve::sextic(f).unwrap();
        let locus = flex_locus(&c).unwrap();
        assert_eq!(locus.points.len(), 4);
        for fp in &locus.points {
            assert_eq!(fp.contact, Multiplicity::Exact(6));
            assert_eq!(fp.hessian_multiplicity, Multiplicity::Exact(4));
        }
        assert!(!locus.residual_degrees.is_empty());
        assert!(!locus.complete());
    }

    #[test]
    fn empty_accounting() {
        let a = verify_total_weight::<Rational>(&[]).unwrap();
        assert_eq!((a.accumulated, a.deficit, a.complete), (0, 990, false));
        assert!(a.findings().is_empty());
    }
}
