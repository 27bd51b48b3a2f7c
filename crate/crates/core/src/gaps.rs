//! The canonical system of a smooth plane sextic (cubics, a g^9_18), gap
//! sequences by rank increments, weights, the Wronskian oracle and the count
//! formula for q-Weierstrass points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, ProjectivePoint};
use crate::error::{Error, Result};
use crate::local::{branch_series, BranchSeries, DEFAULT_ORDER};
use crate::poly::{HomogeneousPoly, Monomial, Series};
use crate::scalar::{Field, Matrix};

/// Dimension of the canonical system (number of gaps).
pub const CANONICAL_DIMENSION: usize = 10;
/// Largest possible gap for genus 10.
pub const MAX_GAP: u32 = 19;
/// Smallest truncation order accepted by the Wronskian oracle.
pub const WRONSKIAN_MIN_ORDER: usize = 28;
const WRONSKIAN_MAX_ORDER: usize = 92;

/// The ten cubic monomials in canonical order:
/// `x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3`.
#[derive(Clone)]
pub struct CanonicalSystem<F> {
    basis: Vec<HomogeneousPoly<F>>,
}

impl<F: Field> CanonicalSystem<F> {
    pub fn new(like: &F) -> Self {
        CanonicalSystem {
            basis: Monomial::all_of_degree(3)
                .into_iter()
                .map(|m| HomogeneousPoly::new(3, [(m, like.one_like())]).expect("cubic monomial"))
                .collect(),
        }
    }

    pub fn basis(&self) -> &[HomogeneousPoly<F>] {
        &self.basis
    }

    /// Projective dimension of the system.
    pub fn projective_dimension(&self) -> usize {
        self.basis.len() - 1
    }

    /// Degree of the divisors cut on a sextic: 3 * 6.
    pub fn divisor_degree(&self) -> u32 {
        18
    }

    /// Basis elements restricted to a branch, in the rescaled parameter.
    pub fn restrict(&self, branch: &BranchSeries<F>) -> Vec<Series<F>> {
        self.basis.iter().map(|b| branch.compose(b)).collect()
    }
}

/// Gaps `n_1 < ... < n_10` of the canonical system at a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct GapSequence(Vec<u32>);

impl GapSequence {
    /// Validates: ten strictly increasing entries in `1..=19` starting at 1.
    pub fn new(gaps: Vec<u32>) -> Result<Self> {
        if gaps.len() != CANONICAL_DIMENSION {
            return Err(Error::Invalid(format!(
                "a gap sequence has {CANONICAL_DIMENSION} entries, got {}",
                gaps.len()
            )));
        }
        if gaps[0] != 1 {
            return Err(Error::Invalid("the first gap must be 1".into()));
        }
        if gaps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("gaps must be strictly increasing".into()));
        }
        if gaps[CANONICAL_DIMENSION - 1] > MAX_GAP {
            return Err(Error::Invalid(format!("gaps must not exceed {MAX_GAP}")));
        }
        Ok(GapSequence(gaps))
    }

    /// `{1, ..., 10}`.
    pub fn generic() -> Self {
        GapSequence((1..=CANONICAL_DIMENSION as u32).collect())
    }

    pub fn gaps(&self) -> &[u32] {
        &self.0
    }

    /// `sum_r (n_r - r)`.
    pub fn weight(&self) -> u32 {
        weight(self)
    }

    /// Indices `r >= 2` with `n_r > 2r - 2`.
    pub fn bound_violations(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &n)| (i + 1, n))
            .filter(|&(r, n)| r >= 2 && n as usize > 2 * r - 2)
            .map(|(r, _)| r)
            .collect()
    }

    /// Vanishing orders of the system: `n_r - 1`.
    pub fn vanishing_orders(&self) -> Vec<u32> {
        self.0.iter().map(|n| n - 1).collect()
    }
}

impl TryFrom<Vec<u32>> for GapSequence {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        GapSequence::new(v)
    }
}

impl From<GapSequence> for Vec<u32> {
    fn from(g: GapSequence) -> Self {
        g.0
    }
}

impl fmt::Display for GapSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `sum_r (n_r - r)`.
pub fn weight(g: &GapSequence) -> u32 {
    g.0.iter()
        .enumerate()
        .map(|(i, &n)| n - (i as u32 + 1))
        .sum()
}

/// Gap-based weight, Wronskian valuation and their agreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub gap_weight: u32,
    pub wronskian_weight: u32,
    pub agree: bool,
}

impl WeightReport {
    pub fn new(gap_weight: u32, wronskian_weight: u32) -> Self {
        WeightReport {
            gap_weight,
            wronskian_weight,
            agree: gap_weight == wronskian_weight,
        }
    }
}

fn ensure_sextic<F: Field>(curve: &Curve<F>) -> Result<()> {
    if curve.degree() != 6 {
        return Err(Error::WrongDegree {
            expected: 6,
            found: curve.degree(),
        });
    }
    Ok(())
}

/// Matrix of the first `rows` coefficients of every basis cubic along the
/// branch (entry `(j, k)` is the coefficient of `s^j` in cubic `k`).
pub fn condition_matrix_from<F: Field>(branch: &BranchSeries<F>, rows: usize) -> Result<Matrix<F>> {
    if rows > branch.order() {
        return Err(Error::OrderTooLarge {
            requested: rows,
            truncation: branch.order(),
        });
    }
    let like = branch.base()[0].zero_like();
    let sys = CanonicalSystem::new(&like);
    let restricted = sys.restrict(branch);
    let data: Vec<Vec<F>> = (0..rows)
        .map(|j| restricted.iter().map(|s| s.coeff(j).clone()).collect())
        .collect();
    Matrix::from_rows(data, CANONICAL_DIMENSION)
}

/// `l x 10` condition matrix at `p`; its rank is `10 - dim Q(-l p)`.
pub fn condition_matrix<F: Field>(
    curve: &Curve<F>,
    p: &ProjectivePoint<F>,
    l: usize,
) -> Result<Matrix<F>> {
    ensure_sextic(curve)?;
    let n = DEFAULT_ORDER.max(l);
    let b = branch_series(curve, p, n)?;
    condition_matrix_from(&b, l)
}

/// Ranks of the top `l` rows for `l = 0..=19`.
pub fn rank_staircase<F: Field>(branch: &BranchSeries<F>) -> Result<Vec<usize>> {
    let m = condition_matrix_from(branch, MAX_GAP as usize)?;
    let mut ranks = vec![0];
    for l in 1..=MAX_GAP as usize {
        ranks.push(m.top_rows(l).rank()?);
    }
    Ok(ranks)
}

/// Gap sequence from a branch: `l` is a gap iff the rank rises at row `l`.
pub fn gap_sequence_from<F: Field>(branch: &BranchSeries<F>) -> Result<GapSequence> {
    let ranks = rank_staircase(branch)?;
    let mut gaps = Vec::new();
    for l in 1..ranks.len() {
        if ranks[l] > ranks[l - 1] {
            gaps.push(l as u32);
        }
        if gaps.len() == CANONICAL_DIMENSION {
            break;
        }
    }
    if gaps.len() != CANONICAL_DIMENSION || ranks.windows(2).any(|w| w[1] < w[0] || w[1] > w[0] + 1) {
        return Err(Error::GapInconsistency {
            found: gaps.len(),
            limit: MAX_GAP as usize,
        });
    }
    GapSequence::new(gaps)
}

pub fn gap_sequence<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>) -> Result<GapSequence> {
    ensure_sextic(curve)?;
    let b = branch_series(curve, p, DEFAULT_ORDER)?;
    gap_sequence_from(&b)
}

/// Entry of the Wronskian matrix: a series known modulo `s^prec`.
#[derive(Clone)]
struct Entry<F> {
    coeffs: Vec<F>,
    prec: usize,
}

impl<F: Field> Entry<F> {
    /// First non-negligible coefficient, or `None` if zero to precision.
    fn valuation(&self, cutoff: f64) -> Option<usize> {
        self.coeffs
            .iter()
            .take(self.prec)
            .position(|c| !c.negligible(cutoff))
    }

    fn coeff(&self, k: usize) -> F {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.coeffs[0].zero_like())
    }
}

/// Valuation of the Wronskian determinant `det[D^(j) b_k]` along the branch
/// by elimination in the power-series ring. `None` when the truncation does
/// not determine it.
///
/// Entries are first cut to a small precision, doubled until every pivot is
/// determined; at ordinary points the determinant is a unit and two terms
/// suffice.
pub fn wronskian_valuation<F: Field>(branch: &BranchSeries<F>) -> Option<usize> {
    let like = branch.base()[0].zero_like();
    let restricted = CanonicalSystem::new(&like).restrict(branch);
    let n = branch.order() + 1;
    let full: Vec<Vec<Entry<F>>> = (0..CANONICAL_DIMENSION)
        .map(|j| {
            restricted
                .iter()
                .map(|s| Entry {
                    coeffs: s.hasse_derivative(j).coeffs().to_vec(),
                    prec: n - j,
                })
                .collect()
        })
        .collect();
    // zero tests relative to the largest initial entry
    let cutoff = full
        .iter()
        .flatten()
        .flat_map(|e| e.coeffs.iter().map(Field::log2_abs))
        .fold(0.0, f64::max)
        + 4.0;
    let mut cap = 2;
    loop {
        let w: Vec<Vec<Entry<F>>> = full
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let prec = e.prec.min(cap);
                        Entry {
                            coeffs: e.coeffs.iter().take(prec).cloned().collect(),
                            prec,
                        }
                    })
                    .collect()
            })
            .collect();
        match eliminate(w, cutoff) {
            Some(v) => return Some(v),
            None if cap < n => cap = (2 * cap).min(n),
            None => return None,
        }
    }
}

/// Valuation of the determinant of a matrix of truncated series, or `None`
/// if the precisions do not determine it.
fn eliminate<F: Field>(mut w: Vec<Vec<Entry<F>>>, cutoff: f64) -> Option<usize> {
    let dim = w.len();
    let mut rows: Vec<usize> = (0..dim).collect();
    let mut cols: Vec<usize> = (0..dim).collect();
    let mut total = 0;
    while !rows.is_empty() {
        let mut best: Option<(usize, usize, usize)> = None;
        let mut undetermined = usize::MAX;
        for &r in &rows {
            for &c in &cols {
                match w[r][c].valuation(cutoff) {
                    Some(v) if best.is_none_or(|b| v < b.2) => best = Some((r, c, v)),
                    Some(_) => {}
                    None => undetermined = undetermined.min(w[r][c].prec),
                }
            }
        }
        let (pr, pc, v) = best?;
        if v > undetermined {
            return None;
        }
        total += v;
        let pivot = w[pr][pc].clone();
        let unit: Vec<F> = (v..pivot.prec).map(|k| pivot.coeff(k)).collect();
        for &r in rows.iter().filter(|&&r| r != pr) {
            let a = &w[r][pc];
            // q = (a / s^v) / unit, known modulo s^qprec
            let qprec = a.prec.min(pivot.prec).saturating_sub(v);
            if qprec == 0 {
                continue;
            }
            let num: Vec<F> = (v..v + qprec).map(|k| a.coeff(k)).collect();
            let q = series_div(&num, &unit, qprec);
            let vq = q
                .iter()
                .position(|c| !c.negligible(cutoff))
                .unwrap_or(qprec);
            for &c in cols.iter().filter(|&&c| c != pc) {
                let b = w[pr][c].clone();
                let vb = b.valuation(cutoff).unwrap_or(b.prec);
                let prod_prec = (qprec + vb).min(b.prec + vq);
                let target = &mut w[r][c];
                let new_prec = target.prec.min(prod_prec);
                let mut coeffs: Vec<F> = (0..new_prec).map(|k| target.coeff(k)).collect();
                for (i, qi) in q.iter().enumerate() {
                    if qi.is_zero() {
                        continue;
                    }
                    for (k, bk) in b.coeffs.iter().enumerate().take(b.prec) {
                        if i + k >= new_prec {
                            break;
                        }
                        if !bk.is_zero() {
                            coeffs[i + k] = coeffs[i + k].sub(&qi.mul(bk));
                        }
                    }
                }
                *target = Entry {
                    coeffs,
                    prec: new_prec,
                };
            }
        }
        rows.retain(|&r| r != pr);
        cols.retain(|&c| c != pc);
    }
    Some(total)
}

/// `num / den` as power series modulo `s^prec`; `den[0]` must be nonzero.
fn series_div<F: Field>(num: &[F], den: &[F], prec: usize) -> Vec<F> {
    let inv0 = den[0].inv().expect("unit leading coefficient");
    let zero = den[0].zero_like();
    let mut q: Vec<F> = Vec::with_capacity(prec);
    for k in 0..prec {
        let mut acc = num.get(k).cloned().unwrap_or_else(|| zero.clone());
        for i in 0..k {
            if let Some(d) = den.get(k - i) {
                acc = acc.sub(&q[i].mul(d));
            }
        }
        q.push(acc.mul(&inv0));
    }
    q
}

/// Weight from the Wronskian valuation, re-expanding at higher order when the
/// truncation is insufficient.
pub fn wronskian_weight<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>, n: usize) -> Result<u32> {
    ensure_sextic(curve)?;
    if n < WRONSKIAN_MIN_ORDER {
        return Err(Error::Invalid(format!(
            "the Wronskian oracle needs truncation order at least {WRONSKIAN_MIN_ORDER}"
        )));
    }
    let mut order = n;
    loop {
        let b = branch_series(curve, p, order)?;
        match wronskian_valuation(&b) {
            Some(v) if v + 9 < order => return Ok(v as u32),
            _ if order + 8 <= WRONSKIAN_MAX_ORDER => order += 8,
            _ => return Err(Error::Saturated { order }),
        }
    }
}

/// Both weights at `p`.
pub fn weight_report<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>) -> Result<(GapSequence, WeightReport)> {
    let g = gap_sequence(curve, p)?;
    let w = wronskian_weight(curve, p, WRONSKIAN_MIN_ORDER)?;
    Ok((g.clone(), WeightReport::new(g.weight(), w)))
}

/// Number of q-Weierstrass points counted with weight on a curve of genus
/// `g`: `g(g^2 - 1)` for `q = 1`, `(2q - 1)^2 (g - 1)^2 g` otherwise.
pub fn weierstrass_count(g: u64, q: u64) -> Result<u64> {
    if g < 2 || q < 1 {
        return Err(Error::Invalid(format!(
            "count formula needs genus >= 2 and q >= 1 (got g = {g}, q = {q})"
        )));
    }
    let out = if q == 1 {
        g.checked_mul(g * g - 1)
    } else {
        (2 * q - 1)
            .checked_pow(2)
            .and_then(|a| a.checked_mul((g - 1) * (g - 1)))
            .and_then(|a| a.checked_mul(g))
    };
    out.ok_or_else(|| Error::Invalid("count overflows 64 bits".into()))
}
