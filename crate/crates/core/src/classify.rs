//! Point classification (ordinary, flex, sextactic, tentactic), osculating
//! witnesses, the expected gap tables and the maximal-count tables.

use std::fmt;

use serde::Serialize;

use crate::curve::{Curve, ProjectivePoint};
use crate::error::{Error, Result};
use crate::gaps::{gap_sequence_from, wronskian_weight, GapSequence, WeightReport, WRONSKIAN_MIN_ORDER};
use crate::local::{branch_series, tangent_line, BranchSeries, DEFAULT_ORDER};
use crate::poly::{HomogeneousPoly, Monomial};
use crate::scalar::{Field, Matrix};

/// Total count of 1-Weierstrass points on a smooth plane sextic.
pub const TOTAL_WEIGHT: u32 = 990;
/// Upper bound for a single weight, `(g-1)(g-2)/2` with `g = 10`.
pub const WEIGHT_CAP: u32 = 36;

/// Classification with its contact order `mu`; the order is `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PointKind {
    Ordinary,
    Flex { order: u32, contact: u32 },
    Sextactic { order: u32, contact: u32 },
    Tentactic { order: u32, contact: u32 },
}

impl PointKind {
    pub fn flex(contact: u32) -> Self {
        PointKind::Flex {
            order: contact - 2,
            contact,
        }
    }

    pub fn sextactic(contact: u32) -> Self {
        PointKind::Sextactic {
            order: contact - 5,
            contact,
        }
    }

    pub fn tentactic(contact: u32) -> Self {
        PointKind::Tentactic {
            order: contact - 9,
            contact,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PointKind::Ordinary => "ordinary",
            PointKind::Flex { .. } => "flex",
            PointKind::Sextactic { .. } => "sextactic",
            PointKind::Tentactic { .. } => "tentactic",
        }
    }

    pub fn order(&self) -> Option<u32> {
        match *self {
            PointKind::Ordinary => None,
            PointKind::Flex { order, .. }
            | PointKind::Sextactic { order, .. }
            | PointKind::Tentactic { order, .. } => Some(order),
        }
    }

    pub fn contact(&self) -> Option<u32> {
        match *self {
            PointKind::Ordinary => None,
            PointKind::Flex { contact, .. }
            | PointKind::Sextactic { contact, .. }
            | PointKind::Tentactic { contact, .. } => Some(contact),
        }
    }
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointKind::Ordinary => write!(f, "ordinary"),
            k => write!(
                f,
                "{}-{} (contact {})",
                k.order().unwrap_or(0),
                k.name(),
                k.contact().unwrap_or(0)
            ),
        }
    }
}

/// Computed gaps against the tabulated expected sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableConsistency {
    MatchesPaper,
    OutsidePaperRange,
    Mismatch,
}

impl fmt::Display for TableConsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableConsistency::MatchesPaper => "matches-paper",
            TableConsistency::OutsidePaperRange => "outside-paper-range",
            TableConsistency::Mismatch => "mismatch",
        })
    }
}

/// Contact ranges covered by the reference tables.
pub fn in_paper_range(kind: PointKind) -> bool {
    match kind {
        PointKind::Ordinary => true,
        PointKind::Flex { contact, .. } => (3..=5).contains(&contact),
        PointKind::Sextactic { contact, .. } => (8..=12).contains(&contact),
        PointKind::Tentactic { contact, .. } => (10..=17).contains(&contact),
    }
}

/// The tabulated gap sequence for `kind`, or `None` outside its range.
pub fn expected_gap_sequence(kind: PointKind) -> Option<GapSequence> {
    if !in_paper_range(kind) {
        return None;
    }
    let gaps: Vec<u32> = match kind {
        PointKind::Ordinary => (1..=10).collect(),
        PointKind::Flex { contact: m, .. } => {
            vec![1, 2, 3, 1 + m, 2 + m, 3 + m, 2 * m + 1, 2 * m + 2, 3 * m + 1, 3 * m + 2]
        }
        PointKind::Sextactic { contact: m, .. } => (1..=7).chain([m + 1, m + 2, m + 3]).collect(),
        PointKind::Tentactic { contact: m, .. } => (1..=9).chain([m + 1]).collect(),
    };
    Some(GapSequence::new(gaps).expect("table sequences are valid"))
}

/// The tabulated weight formula: `13 mu - 37`, `3 mu - 21`, `mu - 9`.
pub fn weight_formula(kind: PointKind) -> Option<u32> {
    if !in_paper_range(kind) {
        return None;
    }
    Some(match kind {
        PointKind::Ordinary => 0,
        PointKind::Flex { contact, .. } => 13 * contact - 37,
        PointKind::Sextactic { contact, .. } => 3 * contact - 21,
        PointKind::Tentactic { contact, .. } => contact - 9,
    })
}

/// One row of a maximal-count table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub order: u32,
    pub contact: u32,
    pub weight: Option<u32>,
    pub expected_gaps: Option<GapSequence>,
    pub bound: u32,
    pub annotation: Option<String>,
}

/// Upper bounds for the number of `i`-flexes, `i`-sextactic and
/// `i`-tentactic points: `floor(990 / weight)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundTables {
    pub flex: Vec<BoundEntry>,
    pub sextactic: Vec<BoundEntry>,
    pub tentactic: Vec<BoundEntry>,
}

impl BoundTables {
    pub fn bounds(rows: &[BoundEntry]) -> Vec<u32> {
        rows.iter().map(|e| e.bound).collect()
    }
}

fn bound_rows(orders: std::ops::RangeInclusive<u32>, kind: impl Fn(u32) -> PointKind) -> Vec<BoundEntry> {
    orders
        .map(|i| {
            let k = kind(i);
            let weight = weight_formula(k);
            BoundEntry {
                order: i,
                contact: k.contact().unwrap_or(0),
                weight,
                expected_gaps: expected_gap_sequence(k),
                bound: weight.filter(|&w| w > 0).map_or(0, |w| TOTAL_WEIGHT / w),
                annotation: weight.is_none().then(|| "excluded by paper".to_string()),
            }
        })
        .collect()
}

pub fn max_count_tables() -> BoundTables {
    BoundTables {
        flex: bound_rows(1..=4, |i| PointKind::flex(i + 2)),
        sextactic: bound_rows(1..=7, |i| PointKind::sextactic(i + 5)),
        tentactic: bound_rows(1..=9, |i| PointKind::tentactic(i + 9)),
    }
}

/// Coefficients of the curves of degree `d` vanishing on the branch to order
/// `conditions` (kernel of the `conditions x #monomials` matrix).
fn kernel_curves<F: Field>(
    branch: &BranchSeries<F>,
    d: u32,
    conditions: usize,
) -> Result<(Vec<Monomial>, Vec<Vec<F>>)> {
    let like = branch.base()[0].zero_like();
    let monos = Monomial::all_of_degree(d);
    let composed: Vec<_> = monos
        .iter()
        .map(|m| branch.compose(&HomogeneousPoly::new(d, [(*m, like.one_like())]).expect("monomial")))
        .collect();
    let rows: Vec<Vec<F>> = (0..conditions)
        .map(|j| composed.iter().map(|s| s.coeff(j).clone()).collect())
        .collect();
    let m = Matrix::from_rows(rows, monos.len())?;
    Ok((monos, m.nullspace()?))
}

fn curve_from<F: Field>(d: u32, monos: &[Monomial], coeffs: &[F]) -> Result<HomogeneousPoly<F>> {
    HomogeneousPoly::new(
        d,
        monos
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (*m, c.clone())),
    )
}

/// Osculating conic with the irreducibility verdict.
#[derive(Clone)]
pub struct ConicWitness<F> {
    pub conic: HomogeneousPoly<F>,
    pub irreducible: bool,
}

/// Osculating cubic, the dimension of the contact-9 cubic space and the
/// (maximal) contact achieved.
#[derive(Clone)]
pub struct CubicWitness<F> {
    pub cubic: HomogeneousPoly<F>,
    pub kernel_dimension: usize,
    pub contact: u32,
}

fn flex_contact<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>, b: &BranchSeries<F>) -> Result<(HomogeneousPoly<F>, u32)> {
    let l = tangent_line(curve, p)?;
    let mu = b.multiplicity(&l).require()? as u32;
    Ok((l, mu))
}

fn conic_of_branch<F: Field>(b: &BranchSeries<F>) -> Result<ConicWitness<F>> {
    let (monos, kernel) = kernel_curves(b, 2, 5)?;
    if kernel.len() != 1 {
        return Err(Error::RankAnomaly {
            rows: 5,
            cols: 6,
            dimension: kernel.len(),
            expected: 1,
        });
    }
    let conic = curve_from(2, &monos, &kernel[0])?;
    let det = conic.conic_matrix()?.determinant()?;
    let irreducible = !det.negligible(3.0 * conic.max_log2() + 3.0);
    Ok(ConicWitness { conic, irreducible })
}

/// The unique conic with contact at least 5 at a non-flex point.
pub fn osculating_conic<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>) -> Result<ConicWitness<F>> {
    let b = branch_series(curve, p, DEFAULT_ORDER)?;
    let (_, mu_f) = flex_contact(curve, p, &b)?;
    if mu_f >= 3 {
        return Err(Error::FlexPoint);
    }
    conic_of_branch(&b)
}

fn cubic_of_branch<F: Field>(b: &BranchSeries<F>) -> Result<CubicWitness<F>> {
    let (monos, kernel) = kernel_curves(b, 3, 9)?;
    let kernel_dimension = kernel.len();
    if kernel_dimension == 0 {
        return Err(Error::RankAnomaly {
            rows: 9,
            cols: 10,
            dimension: 0,
            expected: 1,
        });
    }
    let cubics: Vec<HomogeneousPoly<F>> = kernel
        .iter()
        .map(|v| curve_from(3, &monos, v))
        .collect::<Result<_>>()?;
    let cubic = if kernel_dimension == 1 {
        cubics[0].clone()
    } else {
        max_contact_combination(b, &cubics)?
    };
    let contact = b.multiplicity(&cubic).require()? as u32;
    Ok(CubicWitness {
        cubic,
        kernel_dimension,
        contact,
    })
}

/// Inside the span of `cubics`, a member of maximal contact: add vanishing
/// conditions one order at a time while the kernel stays nonzero.
fn max_contact_combination<F: Field>(
    b: &BranchSeries<F>,
    cubics: &[HomogeneousPoly<F>],
) -> Result<HomogeneousPoly<F>> {
    let composed: Vec<_> = cubics.iter().map(|c| b.compose(c)).collect();
    let mut best = cubics[0].clone();
    for m in 9..=b.order() {
        let rows: Vec<Vec<F>> = (0..m)
            .map(|j| composed.iter().map(|s| s.coeff(j).clone()).collect())
            .collect();
        let kernel = Matrix::from_rows(rows, cubics.len())?.nullspace()?;
        let Some(v) = kernel.first() else { break };
        let mut acc = HomogeneousPoly::zero(3);
        for (c, k) in cubics.iter().zip(v) {
            if !k.is_zero() {
                acc = acc.add(&c.scale(k));
            }
        }
        if acc.is_zero() {
            break;
        }
        best = acc;
    }
    Ok(best)
}

/// A cubic with contact at least 9 at a point that is neither a flex nor
/// sextactic.
pub fn osculating_cubic<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>) -> Result<CubicWitness<F>> {
    let b = branch_series(curve, p, DEFAULT_ORDER)?;
    let (_, mu_f) = flex_contact(curve, p, &b)?;
    if mu_f >= 3 {
        return Err(Error::FlexPoint);
    }
    let conic = conic_of_branch(&b)?;
    if b.multiplicity(&conic.conic).require()? >= 6 {
        return Err(Error::Invalid("the point is sextactic".into()));
    }
    cubic_of_branch(&b)
}

/// A deviation from the reference tables or a reported invariant check.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub code: String,
    pub message: String,
}

impl Finding {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        Finding {
            code: code.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)
    }
}

/// Full classification of a point.
#[derive(Clone)]
pub struct PointClassification<F> {
    pub point: ProjectivePoint<F>,
    pub kind: PointKind,
    /// Tangent line, osculating conic or osculating cubic.
    pub witness: HomogeneousPoly<F>,
    pub flex_contact: u32,
    pub sextactic_contact: Option<u32>,
    pub tentactic_contact: Option<u32>,
    pub conic_irreducible: Option<bool>,
    pub cubic_kernel_dimension: Option<usize>,
    pub gaps: GapSequence,
    pub weight: WeightReport,
    pub consistency: TableConsistency,
    pub expected: Option<GapSequence>,
}

impl<F: Field> PointClassification<F> {
    /// Findings against the reference tables: table mismatches, excluded
    /// contacts and the reported bounds.
    pub fn findings(&self) -> Vec<Finding> {
        let mut out = Vec::new();
        match self.consistency {
            TableConsistency::MatchesPaper => {}
            TableConsistency::OutsidePaperRange => out.push(Finding::new(
                "outside-paper-range",
                format!("{} at {} is outside the tabulated range", self.kind, self.point),
            )),
            TableConsistency::Mismatch => out.push(Finding::new(
                "table-mismatch",
                format!(
                    "{} at {}: computed gaps {} differ from the tabulated {}",
                    self.kind,
                    self.point,
                    self.gaps,
                    self.expected.as_ref().map_or_else(String::new, |g| g.to_string())
                ),
            )),
        }
        let v = self.gaps.bound_violations();
        if !v.is_empty() {
            out.push(Finding::new(
                "gap-bound",
                format!(
                    "gaps {} at {} exceed n_r <= 2r-2 for r in {:?}",
                    self.gaps, self.point, v
                ),
            ));
        }
        if self.weight.gap_weight > WEIGHT_CAP {
            out.push(Finding::new(
                "weight-cap",
                format!("weight {} at {} exceeds {WEIGHT_CAP}", self.weight.gap_weight, self.point),
            ));
        }
        if self.conic_irreducible == Some(false) {
            out.push(Finding::new(
                "reducible-conic",
                format!("the osculating conic at {} is reducible", self.point),
            ));
        }
        if let Some(d) = self.cubic_kernel_dimension.filter(|&d| d > 1) {
            out.push(Finding::new(
                "cubic-kernel",
                format!("contact-9 cubics at {} form a space of dimension {d}", self.point),
            ));
        }
        out
    }
}

/// Classify `p` by the precedence flex, sextactic, tentactic, ordinary and
/// attach both weight computations.
pub fn classify<F: Field>(curve: &Curve<F>, p: &ProjectivePoint<F>) -> Result<PointClassification<F>> {
    if curve.degree() != 6 {
        return Err(Error::WrongDegree {
            expected: 6,
            found: curve.degree(),
        });
    }
    let b = branch_series(curve, p, DEFAULT_ORDER)?;
    let (line, mu_f) = flex_contact(curve, p, &b)?;
    let mut sextactic_contact = None;
    let mut tentactic_contact = None;
    let mut conic_irreducible = None;
    let mut cubic_kernel_dimension = None;
    let (kind, witness) = if mu_f >= 3 {
        (PointKind::flex(mu_f), line)
    } else {
        let conic = conic_of_branch(&b)?;
        let mu_s = b.multiplicity(&conic.conic).require()? as u32;
        sextactic_contact = Some(mu_s);
        conic_irreducible = Some(conic.irreducible);
        if mu_s >= 6 {
            (PointKind::sextactic(mu_s), conic.conic)
        } else {
            let cubic = cubic_of_branch(&b)?;
            tentactic_contact = Some(cubic.contact);
            cubic_kernel_dimension = Some(cubic.kernel_dimension);
            if cubic.contact >= 10 {
                (PointKind::tentactic(cubic.contact), cubic.cubic)
            } else {
                (PointKind::Ordinary, cubic.cubic)
            }
        }
    };
    let gaps = gap_sequence_from(&b)?;
    let w = wronskian_weight(curve, p, WRONSKIAN_MIN_ORDER)?;
    let expected = expected_gap_sequence(kind);
    let consistency = match &expected {
        None => TableConsistency::OutsidePaperRange,
        Some(e) if *e == gaps => TableConsistency::MatchesPaper,
        Some(_) => TableConsistency::Mismatch,
    };
    Ok(PointClassification {
        point: p.clone(),
        kind,
        witness,
        flex_contact: mu_f,
        sextactic_contact,
        tentactic_contact,
        conic_irreducible,
        cubic_kernel_dimension,
        weight: WeightReport::new(gaps.weight(), w),
        gaps,
        consistency,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn gaps(k: PointKind) -> Vec<u32> {
        expected_gap_sequence(k).unwrap().gaps().to_vec()
    }

    #[test]
    fn flex_rows() {
        assert_eq!(gaps(PointKind::flex(3)), vec![1, 2, 3, 4, 5, 6, 7, 8, 10, 11]);
        assert_eq!(gaps(PointKind::flex(4)), vec![1, 2, 3, 5, 6, 7, 9, 10, 13, 14]);
        assert_eq!(gaps(PointKind::flex(5)), vec![1, 2, 3, 6, 7, 8, 11, 12, 16, 17]);
        assert_eq!(expected_gap_sequence(PointKind::flex(6)), None);
        let w: Vec<_> = (3..=5).map(|m| weight_formula(PointKind::flex(m)).unwrap()).collect();
        assert_eq!(w, vec![2, 15, 28]);
    }

    #[test]
    fn sextactic_and_tentactic_rows() {
        assert_eq!(gaps(PointKind::sextactic(8)), vec![1, 2, 3, 4, 5, 6, 7, 9, 10, 11]);
        assert_eq!(gaps(PointKind::sextactic(12)), vec![1, 2, 3, 4, 5, 6, 7, 13, 14, 15]);
        assert_eq!(weight_formula(PointKind::sextactic(10)), Some(9));
        assert_eq!(gaps(PointKind::tentactic(10)), vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 11]);
        assert_eq!(weight_formula(PointKind::tentactic(17)), Some(8));
        assert_eq!(weight_formula(PointKind::tentactic(18)), None);
    }

    #[test]
    fn formulas_match_sequences() {
        let kinds = (3..=5)
            .map(PointKind::flex)
            .chain((8..=12).map(PointKind::sextactic))
            .chain((10..=17).map(PointKind::tentactic));
        for k in kinds {
            assert_eq!(expected_gap_sequence(k).unwrap().weight(), weight_formula(k).unwrap(), "{k}");
        }
    }

    #[test]
    fn count_tables() {
        let t = max_count_tables();
        assert_eq!(BoundTables::bounds(&t.flex), vec![495, 66, 35, 0]);
        assert_eq!(BoundTables::bounds(&t.sextactic), vec![0, 0, 330, 165, 110, 82, 66]);
        assert_eq!(
            BoundTables::bounds(&t.tentactic),
            vec![990, 495, 330, 247, 198, 165, 141, 123, 0]
        );
        assert_eq!(t.flex[3].annotation.as_deref(), Some("excluded by paper"));
        assert!(t.flex[0].annotation.is_none());
    }

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn sextic(terms: &[([u32; 3], i64)]) -> Curve<Rational> {
        let f = HomogeneousPoly::new(6, terms.iter().map(|&(m, c)| (Monomial(m), q(c)))).unwrap();
        Curve::sextic(f).unwrap()
    }

    #[test]
    fn hyperflex_is_outside_range() {
        let c = sextic(&[([6, 0, 0], 1), ([0, 6, 0], 1), ([0, 0, 6], -1)]);
        let p = ProjectivePoint::new([q(0), q(1), q(1)]).unwrap();
        let r = classify(&c, &p).unwrap();
        assert_eq!(r.kind, PointKind::flex(6));
        assert_eq!(r.consistency, TableConsistency::OutsidePaperRange);
        assert_eq!(r.weight, WeightReport::new(25, 25));
        assert!(matches!(osculating_conic(&c, &p), Err(Error::FlexPoint)));
        let codes: Vec<_> = r.findings().into_iter().map(|f| f.code).collect();
        assert_eq!(codes, vec!["outside-paper-range", "gap-bound"]);
    }

    #[test]
    fn generic_point_is_ordinary() {
        let c = sextic(&[([6, 0, 0], 1), ([0, 6, 0], 2), ([0, 0, 6], 3), ([2, 3, 1], 1), ([1, 1, 4], -7)]);
        let p = ProjectivePoint::new([q(1), q(1), q(1)]).unwrap();
        let r = classify(&c, &p).unwrap();
        assert_eq!(r.kind, PointKind::Ordinary);
        assert_eq!(r.flex_contact, 2);
        assert_eq!(r.sextactic_contact, Some(5));
        assert_eq!(r.tentactic_contact, Some(9));
        assert_eq!(r.cubic_kernel_dimension, Some(1));
        assert_eq!(r.consistency, TableConsistency::MatchesPaper);
        let conic = osculating_conic(&c, &p).unwrap();
        assert!(conic.irreducible);
        let cubic = osculating_cubic(&c, &p).unwrap();
        assert_eq!(cubic.contact, 9);
    }
}
