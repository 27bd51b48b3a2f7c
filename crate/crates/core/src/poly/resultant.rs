use super::UniPoly;
use crate::error::{Error, Result};
use crate::scalar::{Field, Matrix};

/// Sylvester matrix of `f` (degree m) and `g` (degree n): n shifted rows of
/// `f`'s coefficients followed by m shifted rows of `g`'s, highest degree
/// first.
pub fn sylvester_matrix<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>) -> Result<Matrix<F>> {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let size = m + n;
    let zero = f.coeffs()[0].zero_like();
    let mut rows = Vec::with_capacity(size);
    for (p, d, count) in [(f, m, n), (g, n, m)] {
        for shift in 0..count {
            let mut row = vec![zero.clone(); size];
            for k in 0..=d {
                row[shift + k] = p.coeffs()[d - k].clone();
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(rows, size)
}

/// Resultant as the Sylvester determinant. With `f = x - a`, `g = x - b` this
/// is `a - b` under the standard convention.
pub fn resultant<F: Field>(f: &UniPoly<F>, g: &UniPoly<F>) -> Result<F> {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    if let (Some(a), Some(b)) = (f.sample(), g.sample()) {
        if !a.compatible(b) {
            return Err(Error::BackendMismatch {
                left: a.backend(),
                right: b.backend(),
            });
        }
    }
    match (m, n) {
        (0, 0) => Err(Error::ConstantPolynomials),
        (0, _) => Ok(f.coeffs()[0].pow(n as u32)),
        (_, 0) => Ok(g.coeffs()[0].pow(m as u32)),
        _ => sylvester_matrix(f, g)?.determinant(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(v: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(v.iter().map(|&c| Rational::from_int(c)).collect())
    }

    #[test]
    fn linear_factors() {
        // x - 3 and x - 5: det [[1,-3],[1,-5]] = -5 + 3 = -2 = a - b
        assert_eq!(resultant(&q(&[-3, 1]), &q(&[-5, 1])).unwrap(), Rational::from_int(-2));
    }

    #[test]
    fn quadratics() {
        assert_eq!(resultant(&q(&[1, 0, 1]), &q(&[-1, 0, 1])).unwrap(), Rational::from_int(4));
        assert_eq!(resultant(&q(&[-1, 0, 1]), &q(&[-1, 1])).unwrap(), Rational::from_int(0));
    }

    #[test]
    fn constants() {
        assert!(matches!(
            resultant(&q(&[2]), &q(&[3])),
            Err(Error::ConstantPolynomials)
        ));
        assert_eq!(resultant(&q(&[2]), &q(&[1, 1, 1])).unwrap(), Rational::from_int(4));
    }
}
