//! Dense matrices over any [`Field`].
//!
//! Exact backends use fraction-free (Bareiss) elimination for rank and
//! determinant. The complex backend uses complete pivoting and stops at the
//! first pivot below `2^(-prec/2)` times the largest entry.

use std::fmt;

use super::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Matrix of runtime-tagged scalars.
pub type ScalarMatrix = Matrix<Scalar>;

impl<F: Field> Matrix<F> {
    /// Build from row vectors. Every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Invalid(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn filled(rows: usize, cols: usize, value: F) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn identity(n: usize, like: &F) -> Self {
        let mut m = Matrix::filled(n, n, like.zero_like());
        for i in 0..n {
            m.data[i * n + i] = like.one_like();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The first `n` rows.
    pub fn top_rows(&self, n: usize) -> Self {
        let n = n.min(self.rows);
        Matrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(v[0].zero_like(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// Error unless all entries share one backend context.
    pub fn check_uniform(&self) -> Result<()> {
        if let Some(first) = self.data.first() {
            for x in &self.data {
                if !first.compatible(x) {
                    return Err(Error::BackendMismatch {
                        left: first.backend(),
                        right: x.backend(),
                    });
                }
            }
        }
        Ok(())
    }

    fn is_exact(&self) -> bool {
        self.data.first().is_none_or(Field::is_exact)
    }

    fn max_log2(&self) -> f64 {
        self.data
            .iter()
            .map(Field::log2_abs)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rank over the field; numerical rank for the complex backend.
    pub fn rank(&self) -> Result<usize> {
        self.check_uniform()?;
        if self.data.is_empty() {
            return Ok(0);
        }
        Ok(if self.is_exact() {
            self.bareiss().0
        } else {
            self.echelon().pivots.len()
        })
    }

    /// Fraction-free elimination; returns the rank and, for square input,
    /// the determinant (last pivot, sign-corrected).
    fn bareiss(&self) -> (usize, F) {
        let mut a: Vec<Vec<F>> = self.to_rows();
        let zero = self.data[0].zero_like();
        let mut prev = zero.one_like();
        let mut rank = 0;
        let mut sign = false;
        let mut det = zero.clone();
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            if p != rank {
                a.swap(p, rank);
                sign = !sign;
            }
            let piv = a[rank][col].clone();
            let inv_prev = prev.inv().expect("nonzero previous pivot");
            for r in rank + 1..self.rows {
                for c in col + 1..self.cols {
                    let v = piv.mul(&a[r][c]).sub(&a[r][col].mul(&a[rank][c]));
                    a[r][c] = v.mul(&inv_prev);
                }
                a[r][col] = zero.clone();
            }
            prev = piv;
            rank += 1;
        }
        if self.rows == self.cols && rank == self.rows {
            det = if sign { prev.neg() } else { prev };
        }
        (rank, det)
    }

    /// Gauss-Jordan reduction to reduced row echelon form. Exact backends
    /// pivot on any nonzero entry; the complex backend uses complete pivoting
    /// within the remaining submatrix and treats entries below the tolerance
    /// (relative to the largest input entry) as zero.
    pub fn echelon(&self) -> Echelon<F> {
        let mut a: Vec<Vec<F>> = self.to_rows();
        let exact = self.is_exact();
        let cutoff = if exact {
            f64::NEG_INFINITY
        } else {
            self.max_log2() - self.data.first().map_or(0.0, Field::tolerance_bits)
        };
        let mut col_order: Vec<usize> = (0..self.cols).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        while r < self.rows {
            // choose pivot among remaining columns
            let mut best: Option<(usize, usize, f64)> = None;
            for (ci, &c) in col_order.iter().enumerate().skip(r) {
                for (row, arow) in a.iter().enumerate().skip(r) {
                    let v = &arow[c];
                    if v.is_zero() {
                        continue;
                    }
                    let l = v.log2_abs();
                    if exact {
                        // leftmost column first, keeps the echelon form standard
                        if best.is_none() {
                            best = Some((row, ci, l));
                        }
                    } else if best.is_none_or(|b| l > b.2) {
                        best = Some((row, ci, l));
                    }
                }
                if exact && best.is_some() {
                    break;
                }
            }
            let Some((pr, pci, l)) = best else { break };
            if l <= cutoff {
                break;
            }
            a.swap(r, pr);
            col_order.swap(r, pci);
            let c = col_order[r];
            let inv = a[r][c].inv().expect("nonzero pivot");
            for v in a[r].iter_mut() {
                *v = v.mul(&inv);
            }
            for rr in 0..self.rows {
                if rr != r && !a[rr][c].is_zero() {
                    let f = a[rr][c].clone();
                    for cc in 0..self.cols {
                        let t = a[r][cc].mul(&f);
                        a[rr][cc] = a[rr][cc].sub(&t);
                    }
                    a[rr][c] = f.zero_like();
                }
            }
            pivots.push(c);
            r += 1;
        }
        // zero out numerically negligible remainder rows
        for row in a.iter_mut().skip(r) {
            for v in row.iter_mut() {
                *v = v.zero_like();
            }
        }
        Echelon { rows: a, pivots }
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn nullspace(&self) -> Result<Vec<Vec<F>>> {
        self.check_uniform()?;
        let Some(first) = self.data.first() else {
            return Ok(Vec::new());
        };
        let ech = self.echelon();
        let zero = first.zero_like();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !ech.pivots.contains(c)) {
            let mut v = vec![zero.clone(); self.cols];
            v[free] = zero.one_like();
            for (i, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = ech.rows[i][free].neg();
            }
            basis.push(v);
        }
        Ok(basis)
    }

    pub fn determinant(&self) -> Result<F> {
        self.check_uniform()?;
        if self.rows != self.cols {
            return Err(Error::Invalid(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let Some(first) = self.data.first() else {
            return Err(Error::Invalid("determinant of an empty matrix".into()));
        };
        if self.is_exact() {
            return Ok(self.bareiss().1);
        }
        // partial pivoting LU for the complex backend
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = first.one_like();
        for col in 0..n {
            let p = (col..n)
                .max_by(|&x, &y| a[x][col].log2_abs().total_cmp(&a[y][col].log2_abs()))
                .expect("nonempty range");
            if a[p][col].is_zero() {
                return Ok(first.zero_like());
            }
            if p != col {
                a.swap(p, col);
                det = det.neg();
            }
            det = det.mul(&a[col][col]);
            let inv = a[col][col].inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].mul(&inv);
                for c in col + 1..n {
                    let t = f.mul(&a[col][c]);
                    a[r][c] = a[r][c].sub(&t);
                }
            }
        }
        Ok(det)
    }
}

/// Reduced row echelon form with pivot columns in pivot order.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{BigComplex, Rational};

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn identity_and_zero_ranks() {
        let one = Rational::from_int(1);
        assert_eq!(Matrix::identity(10, &one).rank().unwrap(), 10);
        assert_eq!(
            Matrix::filled(5, 8, Rational::from_int(0)).rank().unwrap(),
            0
        );
    }

    #[test]
    fn dependent_rows() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank().unwrap(), 2);
        assert_eq!(m.determinant().unwrap(), Rational::from_int(0));
        let ker = m.nullspace().unwrap();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).iter().all(Field::is_zero));
    }

    #[test]
    fn determinant_sign() {
        let m = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant().unwrap(), Rational::from_int(-1));
        let m = qm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.determinant().unwrap(), Rational::from_int(18));
    }

    #[test]
    fn complex_rank_matches_exact() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let c: Vec<Vec<BigComplex>> = m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|q| BigComplex::from_rational(&q.0, 256)).collect())
            .collect();
        let mc = Matrix::from_rows(c, 3).unwrap();
        assert_eq!(mc.rank().unwrap(), 2);
        let det = mc.determinant().unwrap();
        assert!(det.log2_abs() < -200.0 || det.is_zero());
    }

    #[test]
    fn mixed_backends_rejected() {
        let m = Matrix::from_rows(
            vec![vec![
                Scalar::Rational(Rational::from_int(1)),
                Scalar::Complex(BigComplex::from_i64(1, 64)),
            ]],
            2,
        )
        .unwrap();
        assert!(matches!(m.rank(), Err(Error::BackendMismatch { .. })));
    }
}
