//! Local analytic data at a smooth point: chart choice, branch series,
//! tangent line and intersection multiplicities.
//!
//! In a chart the curve is `f(u, w) = 0` with the chart coordinate set to 1,
//! `u` the transverse coordinate and `w` the dependent one. The branch through
//! `p = (u0, w0)` is `w = w0 + v(s)` with `u = u0 + s`, found order by order:
//! writing `g(s, v) = f(u0 + s, w0 + v) = sum g_ij s^i v^j`, the coefficient
//! of `s^n` in `g(s, v(s))` is `g_01 c_n + e_n` where `e_n` only involves
//! earlier coefficients, so `c_n = -e_n / g_01`.
//!
//! For the complex backend the series is also kept in the rescaled parameter
//! `s' = s / lambda` with `lambda = 2^-k` chosen so that the coefficients stay
//! bounded; valuations are unchanged by this rescaling and zero tests become
//! uniform across orders.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::curve::{Curve, ProjectivePoint};
use crate::error::{Error, Result};
use crate::poly::{HomogeneousPoly, Series, Var};
use crate::scalar::{Field, Tolerance};

/// Default truncation order of branch series.
pub const DEFAULT_ORDER: usize = 24;

/// Affine chart and parametrization roles of the three coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chart {
    /// Coordinate set to 1.
    pub affine: Var,
    /// Coordinate serving as local parameter (offset by its value at p).
    pub transverse: Var,
    /// Coordinate expanded as a series in the parameter.
    pub dependent: Var,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}=1, parameter {}, series {}",
            self.affine, self.transverse, self.dependent
        )
    }
}

/// Intersection multiplicity, possibly only bounded below by the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Exact(usize),
    /// Every computed coefficient vanished: the true value is at least this.
    AtLeast(usize),
}

impl Multiplicity {
    pub fn exact(self) -> Option<usize> {
        match self {
            Multiplicity::Exact(n) => Some(n),
            Multiplicity::AtLeast(_) => None,
        }
    }

    /// The exact value or the lower bound.
    pub fn lower_bound(self) -> usize {
        match self {
            Multiplicity::Exact(n) | Multiplicity::AtLeast(n) => n,
        }
    }

    pub fn is_saturated(self) -> bool {
        matches!(self, Multiplicity::AtLeast(_))
    }

    /// Exact value, or a saturation error.
    pub fn require(self) -> Result<usize> {
        match self {
            Multiplicity::Exact(n) => Ok(n),
            Multiplicity::AtLeast(n) => Err(Error::Saturated { order: n - 1 }),
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Exact(n) => write!(f, "{n}"),
            Multiplicity::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Exact(n) => s.serialize_u64(*n as u64),
            Multiplicity::AtLeast(n) => s.serialize_str(&format!(">={n}")),
        }
    }
}

/// Truncated parametrization of the branch of a curve at a smooth point.
#[derive(Clone)]
pub struct BranchSeries<F> {
    chart: Chart,
    point: ProjectivePoint<F>,
    /// Point coordinates rescaled so the chart coordinate equals 1.
    base: [F; 3],
    /// Dependent coordinate as a series in `s = transverse - base`.
    series: Series<F>,
    /// Rescaling exponent `k`, `lambda = 2^-k` (0 for exact backends).
    shift: u32,
    /// The three coordinates as series in the rescaled parameter.
    coords: [Series<F>; 3],
}

impl<F: Field> BranchSeries<F> {
    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn point(&self) -> &ProjectivePoint<F> {
        &self.point
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Dependent coordinate `y(x)` as a series in the offset `x - x(p)` of
    /// the transverse coordinate.
    pub fn series(&self) -> &Series<F> {
        &self.series
    }

    /// Chart coordinates of the point (chart coordinate equal to 1).
    pub fn base(&self) -> &[F; 3] {
        &self.base
    }

    /// Rescaling exponent of the parameter used for numeric zero tests.
    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// The three coordinates as series in the (rescaled) local parameter.
    pub fn coordinate_series(&self) -> &[Series<F>; 3] {
        &self.coords
    }

    /// `D` restricted to the branch, in the rescaled parameter.
    pub fn compose(&self, d: &HomogeneousPoly<F>) -> Series<F> {
        d.compose(&self.coords)
    }

    /// Zero-test profile for `D` composed with the branch.
    pub fn tolerance_for(&self, d: &HomogeneousPoly<F>) -> Tolerance {
        let coord = self
            .base
            .iter()
            .map(Field::log2_abs)
            .fold(0.0, f64::max);
        let base = d.max_log2() + (d.num_terms().max(1) as f64).log2() + f64::from(d.degree()) * (coord + 1.0);
        Tolerance::new(base, 0.0)
    }

    /// Valuation of `D` along the branch.
    pub fn multiplicity(&self, d: &HomogeneousPoly<F>) -> Multiplicity {
        if d.is_zero() {
            return Multiplicity::AtLeast(self.order() + 1);
        }
        let s = self.compose(d);
        match s.valuation(&self.tolerance_for(d)) {
            Some(v) => Multiplicity::Exact(v),
            None => Multiplicity::AtLeast(self.order() + 1),
        }
    }

    /// Largest `log2 |coefficient|` of `F` composed with the branch, relative
    /// to the largest coefficient of `F`; `-inf` when it vanishes exactly.
    pub fn residual_log2(&self, curve: &Curve<F>) -> f64 {
        let r = self.compose(curve.poly());
        r.coeffs()
            .iter()
            .map(Field::log2_abs)
            .fold(f64::NEG_INFINITY, f64::max)
            - curve.poly().max_log2()
    }
}

impl<F: Field> fmt::Debug for BranchSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BranchSeries[{}] at {}: {}", self.chart, self.point, self.series)
    }
}

/// Charts usable at `p`: chart coordinate nonzero, dependent partial nonzero.
/// Ordered by preference (the first is the default choice).
pub fn admissible_charts<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>) -> Result<Vec<Chart>> {
    curve.check_contains(p)?;
    let grad = curve.gradient_at(p)?;
    let c = p.coords();
    let exact = c[0].is_exact();
    let gscale = grad
        .iter()
        .map(Field::log2_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    let nonzero = |x: &F, scale: f64| if exact { !x.is_zero() } else { !x.negligible(scale) };
    let default = choose_chart(curve, p)?;
    let mut out = vec![default];
    for a in 0..3 {
        if !nonzero(&c[a], 0.0) {
            continue;
        }
        let free: Vec<usize> = (0..3).filter(|&i| i != a).collect();
        for (t, d) in [(free[0], free[1]), (free[1], free[0])] {
            let scaled = grad[d].div(&c[a]).expect("nonzero chart coordinate");
            if nonzero(&scaled, gscale - c[a].log2_abs()) {
                let ch = Chart {
                    affine: Var::from_index(a),
                    transverse: Var::from_index(t),
                    dependent: Var::from_index(d),
                };
                if !out.contains(&ch) {
                    out.push(ch);
                }
            }
        }
    }
    Ok(out)
}

/// Default chart: exact points use their normalizing (last nonzero)
/// coordinate; complex points their largest coordinate. The dependent
/// coordinate has a nonzero (exact) or the larger (complex) partial; ties
/// prefer the earlier coordinate as parameter.
pub fn choose_chart<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>) -> Result<Chart> {
    let grad = curve.gradient_at(p)?;
    let a = p.pivot();
    let free: Vec<usize> = (0..3).filter(|&i| i != a).collect();
    let (i, j) = (free[0], free[1]);
    let dependent_j = if grad[0].is_exact() {
        !grad[j].is_zero()
    } else {
        grad[j].log2_abs() >= grad[i].log2_abs()
    };
    let (t, d) = if dependent_j { (i, j) } else { (j, i) };
    Ok(Chart {
        affine: Var::from_index(a),
        transverse: Var::from_index(t),
        dependent: Var::from_index(d),
    })
}

/// Tangent line `(dF/dx)(p) x + (dF/dy)(p) y + (dF/dz)(p) z`.
pub fn tangent_line<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>) -> Result<HomogeneousPoly<F>> {
    curve.check_contains(p)?;
    let g = curve.gradient_at(p)?;
    Ok(HomogeneousPoly::linear(g))
}

/// Branch series at `p` in the default chart, truncated at order `n`.
pub fn branch_series<F: Field>(
    curve: &Curve<F>,
    p: &ProjectivePoint<F>,
    n: usize,
) -> Result<BranchSeries<F>> {
    curve.check_contains(p)?;
    let chart = choose_chart(curve, p)?;
    expand(curve, p, chart, n)
}

/// Branch series at `p` in a prescribed chart.
pub fn branch_series_in<F: Field>(
    curve: &Curve<F>,
    p: &ProjectivePoint<F>,
    chart: Chart,
    n: usize,
) -> Result<BranchSeries<F>> {
    curve.check_contains(p)?;
    curve.gradient_at(p)?;
    let roles = [chart.affine, chart.transverse, chart.dependent];
    if roles.iter().collect::<std::collections::BTreeSet<_>>().len() != 3 {
        return Err(Error::Invalid(format!("chart roles must be distinct: {chart}")));
    }
    if p.coords()[chart.affine.index()].is_zero() {
        return Err(Error::Invalid(format!(
            "chart coordinate {} vanishes at the point",
            chart.affine
        )));
    }
    expand(curve, p, chart, n)
}

fn expand<F: Field>(
    curve: &Curve<F>,
    p: &ProjectivePoint<F>,
    chart: Chart,
    n: usize,
) -> Result<BranchSeries<F>> {
    if n == 0 {
        return Err(Error::Invalid("truncation order must be at least 1".into()));
    }
    let (a, t, d) = (chart.affine.index(), chart.transverse.index(), chart.dependent.index());
    let inv = p.coords()[a].inv().expect("nonzero chart coordinate");
    let base: [F; 3] = p.coords().clone().map(|c| c.mul(&inv));
    let (u0, w0) = (&base[t], &base[d]);
    let like = u0.zero_like();
    let deg = curve.degree() as usize;

    // Taylor shift g(s, v) = f(u0 + s, w0 + v)
    let mut g = vec![vec![like.clone(); deg + 1]; deg + 1];
    let binom = binomial_table(deg);
    for (m, c) in curve.poly().terms() {
        let (ea, eb) = (m.0[t] as usize, m.0[d] as usize);
        for i in 0..=ea {
            let ui = c
                .mul(&u0.pow((ea - i) as u32))
                .mul(&like.from_i64_like(binom[ea][i]));
            for j in 0..=eb {
                let wj = w0.pow((eb - j) as u32).mul(&like.from_i64_like(binom[eb][j]));
                g[i][j] = g[i][j].add(&ui.mul(&wj));
            }
        }
    }
    let g01_inv = g[0][1].inv().ok_or(Error::SingularPoint)?;
    let scale = curve.poly().max_log2() + f64::from(curve.degree()).log2() + 4.0;
    if g[0][1].negligible(scale) {
        return Err(Error::SingularPoint);
    }

    // pw[j][k]: coefficient of s^k in v(s)^j for the partial series
    let mut c = vec![like.clone(); n + 1];
    let mut pw = vec![vec![like.clone(); n + 1]; deg + 1];
    pw[0][0] = like.one_like();
    for k in 1..=n {
        for j in 2..=deg {
            let mut acc = like.clone();
            for mm in 1..k {
                if !c[mm].is_zero() && !pw[j - 1][k - mm].is_zero() {
                    acc = acc.add(&c[mm].mul(&pw[j - 1][k - mm]));
                }
            }
            pw[j][k] = acc;
        }
        let mut e = like.clone();
        for (i, row) in g.iter().enumerate().take(k + 1) {
            for (j, gij) in row.iter().enumerate() {
                if (i, j) == (0, 1) || gij.is_zero() {
                    continue;
                }
                let term = &pw[j][k - i];
                if !term.is_zero() {
                    e = e.add(&gij.mul(term));
                }
            }
        }
        c[k] = e.mul(&g01_inv).neg();
        pw[1][k] = c[k].clone();
    }
    let mut sc = c.clone();
    sc[0] = w0.clone();
    let series = Series::new(sc, n, &like);

    // parameter rescaling for numeric backends
    let v = Series::new(c, n, &like);
    let shift = if like.is_exact() {
        0
    } else {
        v.growth_log2().ceil().clamp(0.0, 4096.0) as u32
    };
    let lambda = pow2_inv(&like, shift);
    let mut coords: [Series<F>; 3] = [
        Series::constant(like.clone(), n),
        Series::constant(like.clone(), n),
        Series::constant(like.clone(), n),
    ];
    coords[a] = Series::constant(like.one_like(), n);
    coords[t] = Series::shifted_variable(like.zero_like(), n)
        .rescale(&lambda)
        .add(&Series::constant(u0.clone(), n));
    coords[d] = series.rescale(&lambda);
    Ok(BranchSeries {
        chart,
        point: p.clone(),
        base,
        series,
        shift,
        coords,
    })
}

fn pow2_inv<F: Field>(like: &F, k: u32) -> F {
    let two = like.from_i64_like(2);
    two.pow(k).inv().expect("nonzero power of two")
}

fn binomial_table(n: usize) -> Vec<Vec<i64>> {
    let mut t = vec![vec![0i64; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 };
        }
    }
    t
}

/// Intersection multiplicity `I(C, D; p)` from a fresh branch of order `n`.
pub fn intersection_multiplicity<F: Field>(
    curve: &Curve<F>,
    d: &HomogeneousPoly<F>,
    p: &ProjectivePoint<F>,
    n: usize,
) -> Result<Multiplicity> {
    if d.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let b = branch_series(curve, p, n)?;
    Ok(b.multiplicity(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::{BigComplex, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn parabola() -> Curve<Rational> {
        // y z - x^2, affine y = x^2 in the chart z = 1
        let f = HomogeneousPoly::new(
            2,
            [(Monomial([0, 1, 1]), q(1)), (Monomial([2, 0, 0]), q(-1))],
        )
        .unwrap();
        Curve::any_degree(f).unwrap()
    }

    #[test]
    fn parabola_branch_is_exact() {
        let c = parabola();
        let p = ProjectivePoint::new([q(0), q(0), q(1)]).unwrap();
        let b = branch_series(&c, &p, 8).unwrap();
        assert_eq!(b.chart().dependent, Var::Y);
        let coeffs = b.series().coeffs();
        assert_eq!(coeffs[2], q(1));
        assert!(coeffs.iter().enumerate().all(|(k, x)| k == 2 || x.is_zero()));
        assert_eq!(b.residual_log2(&c), f64::NEG_INFINITY);
    }

    #[test]
    fn first_order_is_implicit_derivative() {
        let c = parabola();
        // (1 : 1 : 1): y = x^2, slope 2
        let p = ProjectivePoint::new([q(1), q(1), q(1)]).unwrap();
        let b = branch_series(&c, &p, 1).unwrap();
        assert_eq!(b.series().coeffs(), &[q(1), q(2)]);
    }

    #[test]
    fn tangent_of_high_contact_branch() {
        // y z^5 - x^6: tangent at (0:0:1) is y, contact 6
        let f = HomogeneousPoly::new(
            6,
            [(Monomial([0, 1, 5]), q(1)), (Monomial([6, 0, 0]), q(-1))],
        )
        .unwrap();
        let c = Curve::sextic(f).unwrap();
        let p = ProjectivePoint::new([q(0), q(0), q(1)]).unwrap();
        let l = tangent_line(&c, &p).unwrap();
        assert_eq!(l.to_string(), "1*y");
        let m = intersection_multiplicity(&c, &l, &p, 24).unwrap();
        assert_eq!(m, Multiplicity::Exact(6));
        let off = ProjectivePoint::new([q(1), q(0), q(1)]).unwrap();
        assert!(matches!(tangent_line(&c, &off), Err(Error::NotOnCurve { .. })));
    }

    #[test]
    fn saturation_is_reported() {
        let c = parabola();
        let p = ProjectivePoint::new([q(0), q(0), q(1)]).unwrap();
        let b = branch_series(&c, &p, 6).unwrap();
        // the conic itself vanishes identically on its branch
        assert_eq!(b.multiplicity(c.poly()), Multiplicity::AtLeast(7));
        assert!(b.multiplicity(c.poly()).require().is_err());
    }

    #[test]
    fn complex_branch_residual() {
        let prec = 256;
        let cx = |re: f64, im: f64| BigComplex::from_f64(re, im, prec);
        // x^6 + y^6 + z^6 at (0 : e^{i pi/6} : 1)
        let f = HomogeneousPoly::new(
            6,
            [
                (Monomial([6, 0, 0]), cx(1.0, 0.0)),
                (Monomial([0, 6, 0]), cx(1.0, 0.0)),
                (Monomial([0, 0, 6]), cx(1.0, 0.0)),
            ],
        )
        .unwrap();
        let c = Curve::sextic(f).unwrap();
        let zeta = BigComplex::unit_root(1, 12, prec);
        let p = ProjectivePoint::new([cx(0.0, 0.0), zeta, cx(1.0, 0.0)]).unwrap();
        let b = branch_series(&c, &p, 24).unwrap();
        assert!(b.residual_log2(&c) < -128.0);
        let l = tangent_line(&c, &p).unwrap();
        assert_eq!(b.multiplicity(&l), Multiplicity::Exact(6));
    }
}
