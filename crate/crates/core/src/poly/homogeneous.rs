use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Series, UniPoly};
use crate::error::{Error, Result};
use crate::scalar::{Field, Matrix};

/// Coordinate of the projective plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z"][self.index()]
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent triple `x^a y^b z^c`. Ordered graded-lexicographically with
/// `x > y > z`, largest first, so maps iterate in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// All monomials of degree `d` in canonical order.
    pub fn all_of_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                out.push(Monomial([a, b, d - a - b]));
            }
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (v, &e) in Var::ALL.iter().zip(&self.0) {
            match e {
                0 => {}
                1 => parts.push(v.name().to_string()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Homogeneous polynomial in `x, y, z` stored as a sparse term map. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct HomogeneousPoly<F> {
    degree: u32,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> HomogeneousPoly<F> {
    /// Build from terms, summing repeated monomials. Every exponent triple
    /// must sum to `degree`; all coefficients must share one backend.
    pub fn new(degree: u32, terms: impl IntoIterator<Item = (Monomial, F)>) -> Result<Self> {
        let mut map: BTreeMap<Monomial, F> = BTreeMap::new();
        let mut first: Option<F> = None;
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::Invalid(format!(
                    "monomial {m} has degree {}, expected {degree}",
                    m.degree()
                )));
            }
            match &first {
                Some(f) if !f.compatible(&c) => {
                    return Err(Error::BackendMismatch {
                        left: f.backend(),
                        right: c.backend(),
                    })
                }
                None => first = Some(c.clone()),
                _ => {}
            }
            let v = match map.remove(&m) {
                Some(old) => old.add(&c),
                None => c,
            };
            if !v.is_zero() {
                map.insert(m, v);
            }
        }
        Ok(HomogeneousPoly { degree, terms: map })
    }

    pub fn zero(degree: u32) -> Self {
        HomogeneousPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Linear form `a x + b y + c z`.
    pub fn linear(coeffs: [F; 3]) -> Self {
        let [a, b, c] = coeffs;
        HomogeneousPoly::new(
            1,
            [
                (Monomial([1, 0, 0]), a),
                (Monomial([0, 1, 0]), b),
                (Monomial([0, 0, 1]), c),
            ],
        )
        .expect("degree-one monomials")
    }

    /// Linear combination of all monomials of degree `d` in canonical order.
    pub fn from_dense(d: u32, coeffs: &[F]) -> Self {
        HomogeneousPoly::new(
            d,
            Monomial::all_of_degree(d).into_iter().zip(coeffs.iter().cloned()),
        )
        .expect("canonical monomials")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&F> {
        self.terms.get(m)
    }

    pub fn sample(&self) -> Option<&F> {
        self.terms.values().next()
    }

    /// Dense coefficient vector over [`Monomial::all_of_degree`].
    pub fn to_dense(&self, like: &F) -> Vec<F> {
        Monomial::all_of_degree(self.degree)
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(|| like.zero_like()))
            .collect()
    }

    /// `log2` of the largest coefficient magnitude; `-inf` for zero.
    pub fn max_log2(&self) -> f64 {
        self.terms
            .values()
            .map(Field::log2_abs)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value at a coordinate triple.
    pub fn evaluate(&self, p: &[F; 3]) -> Result<F> {
        let zero = p[0].zero_like();
        if let Some(c) = self.sample() {
            for x in p {
                if !c.compatible(x) {
                    return Err(Error::BackendMismatch {
                        left: c.backend(),
                        right: x.backend(),
                    });
                }
            }
        }
        let d = self.degree as usize;
        let powers: Vec<Vec<F>> = p
            .iter()
            .map(|x| {
                let mut v = vec![x.one_like()];
                for k in 1..=d {
                    v.push(v[k - 1].mul(x));
                }
                v
            })
            .collect();
        let mut acc = zero;
        for (m, c) in &self.terms {
            let t = powers[0][m.0[0] as usize]
                .mul(&powers[1][m.0[1] as usize])
                .mul(&powers[2][m.0[2] as usize]);
            acc = acc.add(&c.mul(&t));
        }
        Ok(acc)
    }

    pub fn partial(&self, v: Var) -> Self {
        if self.degree == 0 {
            return HomogeneousPoly::zero(0);
        }
        let i = v.index();
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0;
            let k = e[i];
            e[i] -= 1;
            (Monomial(e), c.mul(&c.from_i64_like(i64::from(k))))
        });
        HomogeneousPoly::new(self.degree - 1, terms).expect("degree drops by one")
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.partial(Var::X), self.partial(Var::Y), self.partial(Var::Z)]
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "adding forms of different degrees");
        HomogeneousPoly::new(
            self.degree,
            self.terms
                .iter()
                .chain(o.terms.iter())
                .map(|(m, c)| (*m, c.clone())),
        )
        .expect("same degree")
    }

    pub fn neg(&self) -> Self {
        HomogeneousPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        HomogeneousPoly::new(self.degree, self.terms.iter().map(|(m, c)| (*m, c.mul(s))))
            .expect("same degree")
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let e = [m1.0[0] + m2.0[0], m1.0[1] + m2.0[1], m1.0[2] + m2.0[2]];
                terms.push((Monomial(e), c1.mul(c2)));
            }
        }
        HomogeneousPoly::new(self.degree + o.degree, terms).expect("degrees add")
    }

    /// Determinant of the matrix of second partials; degree `3(d - 2)`.
    pub fn hessian(&self) -> Result<Self> {
        if self.degree < 2 {
            return Err(Error::Invalid("Hessian needs degree at least 2".into()));
        }
        let g = self.gradient();
        let h: Vec<Vec<Self>> = g.iter().map(|p| p.gradient().to_vec()).collect();
        let minor = |a: usize, b: usize, c: usize, d: usize| h[1][a].mul(&h[2][b]).sub(&h[1][c].mul(&h[2][d]));
        let det = h[0][0]
            .mul(&minor(1, 2, 2, 1))
            .sub(&h[0][1].mul(&minor(0, 2, 2, 0)))
            .add(&h[0][2].mul(&minor(0, 1, 1, 0)));
        Ok(det)
    }

    /// Substitute coordinate series (all truncated at the same order).
    pub fn compose(&self, coords: &[Series<F>; 3]) -> Series<F> {
        let order = coords[0].order();
        let like = coords[0].coeff(0).clone();
        let d = self.degree as usize;
        let powers: Vec<Vec<Series<F>>> = coords
            .iter()
            .map(|s| {
                let mut v = vec![Series::constant(like.one_like(), order)];
                for k in 1..=d {
                    let next = v[k - 1].mul(s);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Series::constant(like.zero_like(), order);
        for (m, c) in &self.terms {
            let t = powers[0][m.0[0] as usize]
                .mul(&powers[1][m.0[1] as usize])
                .mul(&powers[2][m.0[2] as usize]);
            acc = acc.add(&t.scale(c));
        }
        acc
    }

    /// Permute coordinates: the result has `(x, y, z)` replaced by
    /// `(X[perm[0]], X[perm[1]], X[perm[2]])`.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = [0u32; 3];
            for i in 0..3 {
                e[perm[i]] += m.0[i];
            }
            (Monomial(e), c.clone())
        });
        HomogeneousPoly::new(self.degree, terms).expect("permutation keeps degree")
    }

    /// Restrict to `var = value` and read the result as a univariate
    /// polynomial in `main` whose coefficients are univariate polynomials in
    /// the remaining coordinate. Entry `k` of the outer vector is the
    /// coefficient of `main^k`.
    pub fn specialize(&self, var: Var, value: &F, main: Var) -> Vec<UniPoly<F>> {
        let other = Var::ALL
            .into_iter()
            .find(|v| *v != var && *v != main)
            .expect("three distinct coordinates");
        let d = self.degree as usize;
        let zero = value.zero_like();
        let mut grid = vec![vec![zero.clone(); d + 1]; d + 1];
        for (m, c) in &self.terms {
            let t = c.mul(&value.pow(m.0[var.index()]));
            let (i, j) = (m.0[main.index()] as usize, m.0[other.index()] as usize);
            grid[i][j] = grid[i][j].add(&t);
        }
        let mut out: Vec<UniPoly<F>> = grid.into_iter().map(UniPoly::new).collect();
        while out.last().is_some_and(UniPoly::is_zero) {
            out.pop();
        }
        out
    }

    /// The 3x3 symmetric coefficient matrix of a conic
    /// `a x^2 + b xy + c xz + d y^2 + e yz + f z^2`, scaled by 2 to stay
    /// integral: `[[2a, b, c], [b, 2d, e], [c, e, 2f]]`.
    pub fn conic_matrix(&self) -> Result<Matrix<F>> {
        if self.degree != 2 {
            return Err(Error::Invalid("conic matrix of a non-conic".into()));
        }
        let like = self
            .sample()
            .ok_or(Error::ZeroPolynomial)?
            .clone();
        let c = |e: [u32; 3]| {
            self.terms
                .get(&Monomial(e))
                .cloned()
                .unwrap_or_else(|| like.zero_like())
        };
        let two = like.from_i64_like(2);
        let rows = vec![
            vec![c([2, 0, 0]).mul(&two), c([1, 1, 0]), c([1, 0, 1])],
            vec![c([1, 1, 0]), c([0, 2, 0]).mul(&two), c([0, 1, 1])],
            vec![c([1, 0, 1]), c([0, 1, 1]), c([0, 0, 2]).mul(&two)],
        ];
        Matrix::from_rows(rows, 3)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> HomogeneousPoly<G> {
        HomogeneousPoly::new(self.degree, self.terms.iter().map(|(m, c)| (*m, f(c))))
            .expect("same degree")
    }
}

fn render_coeff<F: Field>(c: &F) -> (bool, String) {
    let s = c.to_string();
    let simple = !s[1..].contains(['+', '-', ' ']);
    if let Some(rest) = s.strip_prefix('-') {
        if simple {
            return (true, rest.to_string());
        }
    }
    if simple {
        (false, s)
    } else {
        (false, format!("({s})"))
    }
}

impl<F: Field> fmt::Display for HomogeneousPoly<F> {
    /// Signed sum of `coef*x^a*y^b*z^c` terms in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, body) = render_coeff(c);
            let sep = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            if m.degree() == 0 {
                write!(f, "{sep}{body}")?;
            } else {
                write!(f, "{sep}{body}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for HomogeneousPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogeneousPoly[{}]({self})", self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn fermat() -> HomogeneousPoly<Rational> {
        HomogeneousPoly::new(
            6,
            [
                (Monomial([6, 0, 0]), q(1)),
                (Monomial([0, 6, 0]), q(1)),
                (Monomial([0, 0, 6]), q(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn canonical_order() {
        let ms = Monomial::all_of_degree(3);
        let names: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(
            names,
            ["x^3", "x^2*y", "x^2*z", "x*y^2", "x*y*z", "x*z^2", "y^3", "y^2*z", "y*z^2", "z^3"]
        );
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(sorted, ms);
    }

    #[test]
    fn evaluation() {
        let f = fermat();
        assert_eq!(f.evaluate(&[q(1), q(0), q(0)]).unwrap(), q(1));
        let xyz = HomogeneousPoly::new(3, [(Monomial([1, 1, 1]), q(1))]).unwrap();
        assert_eq!(xyz.evaluate(&[q(1), q(2), q(3)]).unwrap(), q(6));
    }

    #[test]
    fn partials() {
        let x6 = HomogeneousPoly::new(6, [(Monomial([6, 0, 0]), q(1))]).unwrap();
        assert_eq!(x6.partial(Var::X).to_string(), "6*x^5");
        assert!(x6.partial(Var::Y).is_zero());
        let x3z3 = HomogeneousPoly::new(6, [(Monomial([3, 0, 3]), q(1))]).unwrap();
        assert_eq!(x3z3.partial(Var::Z).to_string(), "3*x^3*z^2");
    }

    #[test]
    fn hessians() {
        let sphere = HomogeneousPoly::new(
            2,
            [
                (Monomial([2, 0, 0]), q(1)),
                (Monomial([0, 2, 0]), q(1)),
                (Monomial([0, 0, 2]), q(1)),
            ],
        )
        .unwrap();
        assert_eq!(sphere.hessian().unwrap().to_string(), "8");
        assert_eq!(fermat().hessian().unwrap().to_string(), "27000*x^4*y^4*z^4");
        let xyz = HomogeneousPoly::new(3, [(Monomial([1, 1, 1]), q(1))]).unwrap();
        assert_eq!(xyz.hessian().unwrap().to_string(), "2*x*y*z");
    }

    #[test]
    fn rejects_wrong_degree() {
        assert!(HomogeneousPoly::new(6, [(Monomial([5, 0, 0]), q(1))]).is_err());
    }

    #[test]
    fn display_signs() {
        let f = HomogeneousPoly::new(
            2,
            [
                (Monomial([2, 0, 0]), q(-1)),
                (Monomial([0, 1, 1]), Rational::new(1, 2)),
                (Monomial([0, 0, 2]), q(-3)),
            ],
        )
        .unwrap();
        assert_eq!(f.to_string(), "-1*x^2 + 1/2*y*z - 3*z^2");
    }

    #[test]
    fn specialization() {
        // F(x, 1, z) for x^6 + y^6 + z^6 as a polynomial in z
        let f = fermat();
        let cols = f.specialize(Var::Y, &q(1), Var::Z);
        assert_eq!(cols.len(), 7);
        assert_eq!(cols[0], UniPoly::new(vec![q(1), q(0), q(0), q(0), q(0), q(0), q(1)]));
        assert_eq!(cols[6], UniPoly::constant(q(1)));
    }
}
