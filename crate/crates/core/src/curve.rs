//! Plane curves and projective points.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::HomogeneousPoly;
use crate::scalar::Field;

/// Degree of the curves in scope.
pub const SEXTIC: u32 = 6;

/// A plane curve `F = 0` with its gradient precomputed.
#[derive(Clone)]
pub struct Curve<F> {
    poly: HomogeneousPoly<F>,
    gradient: [HomogeneousPoly<F>; 3],
    label: Option<String>,
}

impl<F: Field> Curve<F> {
    /// A smooth-sextic candidate: `F` must have degree 6.
    pub fn sextic(poly: HomogeneousPoly<F>) -> Result<Self> {
        if poly.degree() != SEXTIC {
            return Err(Error::WrongDegree {
                expected: SEXTIC,
                found: poly.degree(),
            });
        }
        Curve::any_degree(poly)
    }

    /// A curve of any positive degree; used by tests and local computations.
    pub fn any_degree(poly: HomogeneousPoly<F>) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if poly.degree() == 0 {
            return Err(Error::Invalid("curve of degree 0".into()));
        }
        let gradient = poly.gradient();
        Ok(Curve {
            poly,
            gradient,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn poly(&self) -> &HomogeneousPoly<F> {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    /// Arithmetic genus `(d-1)(d-2)/2`; 10 for sextics.
    pub fn genus(&self) -> u32 {
        let d = self.degree();
        (d - 1) * (d.max(2) - 2) / 2
    }

    pub fn gradient(&self) -> &[HomogeneousPoly<F>; 3] {
        &self.gradient
    }

    pub fn sample(&self) -> &F {
        self.poly.sample().expect("nonzero curve")
    }

    /// Magnitude scale for zero tests of values of `F` at normalized points.
    fn value_scale(&self) -> f64 {
        self.poly.max_log2() + (self.poly.num_terms() as f64).log2()
    }

    /// `Ok` if `F(p) = 0` (exactly, or within tolerance for complex points).
    pub fn check_contains(&self, p: &ProjectivePoint<F>) -> Result<()> {
        let v = self.poly.evaluate(p.coords())?;
        if v.negligible(self.value_scale()) {
            Ok(())
        } else {
            Err(Error::NotOnCurve {
                residual: v.to_string(),
            })
        }
    }

    /// Gradient at `p`; errors if it vanishes (singular point).
    pub fn gradient_at(&self, p: &ProjectivePoint<F>) -> Result<[F; 3]> {
        let g: Vec<F> = self
            .gradient
            .iter()
            .map(|d| d.evaluate(p.coords()))
            .collect::<Result<_>>()?;
        let scale = self.value_scale() + f64::from(self.degree()).log2();
        if g.iter().all(|x| x.negligible(scale)) {
            return Err(Error::SingularPoint);
        }
        Ok([g[0].clone(), g[1].clone(), g[2].clone()])
    }
}

impl<F: Field> fmt::Debug for Curve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({})", self.poly)
    }
}

impl<F: Field> fmt::Display for Curve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Point of the projective plane in normalized coordinates: exact points
/// have their last nonzero coordinate equal to 1; complex points have their
/// largest coordinate (the last one among equals) equal to 1.
#[derive(Clone, PartialEq)]
pub struct ProjectivePoint<F> {
    coords: [F; 3],
}

impl<F: Field> ProjectivePoint<F> {
    pub fn new(coords: [F; 3]) -> Result<Self> {
        for c in &coords[1..] {
            if !coords[0].compatible(c) {
                return Err(Error::BackendMismatch {
                    left: coords[0].backend(),
                    right: c.backend(),
                });
            }
        }
        let pivot = if coords[0].is_exact() {
            (0..3).rev().find(|&i| !coords[i].is_zero())
        } else {
            (0..3)
                .filter(|&i| !coords[i].is_zero())
                .max_by(|&a, &b| coords[a].log2_abs().total_cmp(&coords[b].log2_abs()))
        };
        let pivot = pivot.ok_or_else(|| Error::Invalid("all coordinates are zero".into()))?;
        let inv = coords[pivot].inv().expect("nonzero pivot");
        let mut out = coords.map(|c| c.mul(&inv));
        out[pivot] = out[pivot].one_like();
        Ok(ProjectivePoint { coords: out })
    }

    pub fn coords(&self) -> &[F; 3] {
        &self.coords
    }

    /// Index of the coordinate equal to 1 in the normalized form.
    pub fn pivot(&self) -> usize {
        if self.coords[0].is_exact() {
            (0..3)
                .rev()
                .find(|&i| !self.coords[i].is_zero())
                .expect("normalized point")
        } else {
            (0..3)
                .rev()
                .find(|&i| self.coords[i] == self.coords[i].one_like())
                .expect("normalized point")
        }
    }

    /// Same projective point: exact equality for exact backends, all 2x2
    /// minors below `2^tol_log2` for complex points.
    pub fn same_as(&self, other: &Self, tol_log2: f64) -> bool {
        if self.coords[0].is_exact() {
            return self == other;
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let m = self.coords[i]
                    .mul(&other.coords[j])
                    .sub(&self.coords[j].mul(&other.coords[i]));
                if !m.is_zero() && m.log2_abs() > tol_log2 {
                    return false;
                }
            }
        }
        true
    }

    /// Apply a coordinate permutation: coordinate `i` moves to `perm[i]`.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        let mut c = self.coords.clone();
        for i in 0..3 {
            c[perm[i]] = self.coords[i].clone();
        }
        ProjectivePoint::new(c).expect("permutation of a valid point")
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Result<ProjectivePoint<G>> {
        ProjectivePoint::new([f(&self.coords[0]), f(&self.coords[1]), f(&self.coords[2])])
    }
}

impl<F: Field> fmt::Display for ProjectivePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl<F: Field> fmt::Debug for ProjectivePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
