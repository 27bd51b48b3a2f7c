//! Curve-spec and point files, report documents and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::{max_count_tables, BoundEntry, BoundTables, Finding, PointClassification};
use crate::curve::{Curve, ProjectivePoint};
use crate::error::{Error, Result};
use crate::gaps::{gap_sequence_from, weierstrass_count, wronskian_weight, WRONSKIAN_MIN_ORDER};
use crate::local::{branch_series, Multiplicity};
use crate::locus::{classify_batch, flex_locus, verify_total_weight, FlexLocus, WeightAccounting};
use crate::poly::{HomogeneousPoly, Monomial};
use crate::scalar::{Field, FieldContext, FieldDescriptor, Scalar, DEFAULT_PRECISION};

pub const TOOL_NAME: &str = "wlab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Environment variable overriding the complex-backend precision.
pub const PRECISION_ENV: &str = "WLAB_PRECISION_BITS";

/// Complex precision from the environment, or the built-in default.
pub fn precision_from_env() -> Result<usize> {
    match std::env::var(PRECISION_ENV) {
        Err(_) => Ok(DEFAULT_PRECISION),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(p) if p >= 64 => Ok(p),
            _ => Err(Error::parse(PRECISION_ENV, format!("expected an integer >= 64, got {v:?}"))),
        },
    }
}

/// One coefficient of a curve-spec file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub exponents: [u32; 3],
    pub value: String,
}

/// The JSON curve-spec file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpecFile {
    pub degree: u32,
    pub field: FieldDescriptor,
    pub coefficients: Vec<CoefficientEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A validated curve with the field its scalars live in.
#[derive(Clone)]
pub struct CurveSpec {
    pub field: FieldContext,
    pub curve: Curve<Scalar>,
}

impl PartialEq for CurveSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field.descriptor() == other.field.descriptor()
            && self.curve.poly() == other.curve.poly()
            && self.curve.label() == other.curve.label()
    }
}

impl std::fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CurveSpec({:?}, {})", self.field.descriptor(), self.curve)
    }
}

impl CurveSpec {
    pub fn label(&self) -> Option<&str> {
        self.curve.label()
    }

    /// Parse a point written as `a : b : c` (or `a, b, c`, optionally in
    /// parentheses) in this curve's field.
    pub fn parse_point(&self, s: &str) -> Result<ProjectivePoint<Scalar>> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = if t.contains(':') {
            t.split(':').collect()
        } else {
            t.split(',').collect()
        };
        if parts.len() != 3 {
            return Err(Error::parse("point", format!("expected three coordinates in {s:?}")));
        }
        self.point_from(&[parts[0], parts[1], parts[2]], "point")
    }

    fn point_from(&self, coords: &[&str; 3], ctx: &str) -> Result<ProjectivePoint<Scalar>> {
        let mut out = Vec::with_capacity(3);
        for (i, c) in coords.iter().enumerate() {
            out.push(
                self.field
                    .parse(c.trim())
                    .map_err(|e| Error::parse(format!("{ctx}[{i}]"), e.to_string()))?,
            );
        }
        let [a, b, c]: [Scalar; 3] = out.try_into().expect("three coordinates");
        let lift = |s: Scalar| self.lift(s);
        ProjectivePoint::new([lift(a), lift(b), lift(c)])
    }

    /// Rational scalars are promoted into the curve's field.
    fn lift(&self, s: Scalar) -> Scalar {
        match (&s, &self.field) {
            (Scalar::Rational(q), FieldContext::NumberField(_) | FieldContext::Complex(_)) => {
                self.field.from_rational(&q.0)
            }
            _ => s,
        }
    }

    /// Points file: a JSON list of coordinate triples as scalar strings.
    pub fn parse_points(&self, json: &str) -> Result<Vec<ProjectivePoint<Scalar>>> {
        let raw: Vec<[String; 3]> =
            serde_json::from_str(json).map_err(|e| Error::parse("points file", e.to_string()))?;
        raw.iter()
            .enumerate()
            .map(|(i, t)| self.point_from(&[&t[0], &t[1], &t[2]], &format!("points[{i}]")))
            .collect()
    }
}

impl CurveSpecFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse("curve spec", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable spec")
    }

    /// Validate and build the curve.
    pub fn build(&self) -> Result<CurveSpec> {
        if self.degree != 6 {
            return Err(Error::WrongDegree {
                expected: 6,
                found: self.degree,
            });
        }
        let field = self
            .field
            .resolve()
            .map_err(|e| Error::parse("field", e.to_string()))?;
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (i, c) in self.coefficients.iter().enumerate() {
            let ctx = format!("coefficients[{i}]");
            let sum: u32 = c.exponents.iter().sum();
            if sum != self.degree {
                return Err(Error::parse(
                    format!("{ctx}.exponents"),
                    format!("exponents {:?} sum to {sum}, not {}", c.exponents, self.degree),
                ));
            }
            let v = field
                .parse(&c.value)
                .map_err(|e| Error::parse(format!("{ctx}.value"), e.to_string()))?;
            let m = Monomial(c.exponents);
            if terms.insert(m, v).is_some() {
                return Err(Error::parse(ctx, format!("duplicate monomial {m}")));
            }
        }
        let spec = CurveSpec {
            curve: Curve::sextic(HomogeneousPoly::new(self.degree, terms)?)
                .map_err(|e| match e {
                    Error::ZeroPolynomial => Error::parse("coefficients", "all coefficients are zero"),
                    e => e,
                })?,
            field,
        };
        Ok(match &self.label {
            Some(l) => CurveSpec {
                curve: spec.curve.with_label(l.clone()),
                ..spec
            },
            None => spec,
        })
    }

    /// Inverse of [`CurveSpecFile::build`].
    pub fn from_spec(spec: &CurveSpec) -> Self {
        CurveSpecFile {
            degree: spec.curve.degree(),
            field: spec.field.descriptor(),
            coefficients: spec
                .curve
                .poly()
                .terms()
                .map(|(m, c)| CoefficientEntry {
                    exponents: m.0,
                    value: c.to_exact_string(),
                })
                .collect(),
            label: spec.label().map(str::to_string),
        }
    }

    /// `x^6 + y^6 + z^6`.
    pub fn fermat(field: FieldDescriptor) -> Self {
        Self::kuribayashi("0", "0", "0", field).with_label("fermat")
    }

    /// `X^6 + Y^6 + Z^6 + a X^3Y^3 + b X^3Z^3 + c Y^3Z^3`; zero parameters
    /// are omitted.
    pub fn kuribayashi(a: &str, b: &str, c: &str, field: FieldDescriptor) -> Self {
        let mut coefficients: Vec<CoefficientEntry> = [[6, 0, 0], [0, 6, 0], [0, 0, 6]]
            .into_iter()
            .map(|e| CoefficientEntry {
                exponents: e,
                value: "1".into(),
            })
            .collect();
        for (e, v) in [([3, 3, 0], a), ([3, 0, 3], b), ([0, 3, 3], c)] {
            if !is_zero_literal(v) {
                coefficients.push(CoefficientEntry {
                    exponents: e,
                    value: v.trim().to_string(),
                });
            }
        }
        CurveSpecFile {
            degree: 6,
            field,
            coefficients,
            label: Some(format!("kuribayashi(a={}, b={}, c={})", a.trim(), b.trim(), c.trim())),
        }
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }
}

fn is_zero_literal(v: &str) -> bool {
    crate::scalar::parse_rational(v).is_ok_and(|q| q == num_rational::BigRational::from_integer(0.into()))
}

/// One point of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub coordinates: [String; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contact: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flex_contact: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hessian_multiplicity: Option<Multiplicity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaps: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wronskian_weight: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_consistency: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_gaps: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PointRecord {
    fn empty(p: &ProjectivePoint<Scalar>) -> Self {
        let c = p.coords();
        PointRecord {
            coordinates: [c[0].to_string(), c[1].to_string(), c[2].to_string()],
            kind: None,
            order: None,
            contact: None,
            flex_contact: None,
            hessian_multiplicity: None,
            gaps: None,
            weight: None,
            wronskian_weight: None,
            weights_agree: None,
            table_consistency: None,
            expected_gaps: None,
            witness: None,
            error: None,
        }
    }

    pub fn from_error(p: &ProjectivePoint<Scalar>, e: &Error) -> Self {
        PointRecord {
            error: Some(e.to_string()),
            ..Self::empty(p)
        }
    }

    pub fn from_classification(c: &PointClassification<Scalar>) -> Self {
        PointRecord {
            kind: Some(c.kind.name().to_string()),
            order: c.kind.order(),
            contact: c.kind.contact(),
            flex_contact: Some(c.flex_contact),
            gaps: Some(c.gaps.gaps().to_vec()),
            weight: Some(c.weight.gap_weight),
            wronskian_weight: Some(c.weight.wronskian_weight),
            weights_agree: Some(c.weight.agree),
            table_consistency: Some(c.consistency.to_string()),
            expected_gaps: c.expected.as_ref().map(|g| g.gaps().to_vec()),
            witness: Some(c.witness.to_string()),
            ..Self::empty(&c.point)
        }
    }
}

/// Summary of a flex-locus computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusSummary {
    pub points: usize,
    pub hessian_total: usize,
    pub complete: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residual_degrees: Vec<usize>,
}

impl LocusSummary {
    pub fn of(l: &FlexLocus<Scalar>) -> Self {
        LocusSummary {
            points: l.points.len(),
            hessian_total: l.hessian_total(),
            complete: l.complete(),
            residual_degrees: l.residual_degrees.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountRecord {
    pub genus: u64,
    pub q: u64,
    pub count: u64,
}

/// Flex statistics at one parameter point of a family scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyRecord {
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flexes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hessian_total: Option<usize>,
    /// Number of flexes per tangent contact.
    pub contacts: BTreeMap<u32, usize>,
    /// Number of flexes per weight.
    pub weights: BTreeMap<u32, usize>,
    pub flex_weight: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Deterministic output of every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDescriptor>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flex_locus: Option<LocusSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accounting: Option<WeightAccounting>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<BoundTables>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<CountRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub family: Vec<FamilyRecord>,
    pub findings: Vec<Finding>,
    /// Internal disagreements; any entry means exit code 2.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inconsistencies: Vec<String>,
}

impl ReportDocument {
    pub fn new(command: &str, spec: Option<&CurveSpec>) -> Self {
        ReportDocument {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            curve: spec.map(|s| s.label().map_or_else(|| s.curve.to_string(), str::to_string)),
            field: spec.map(|s| s.field.descriptor()),
            points: Vec::new(),
            flex_locus: None,
            accounting: None,
            tables: None,
            count: None,
            family: Vec::new(),
            findings: Vec::new(),
            inconsistencies: Vec::new(),
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }

    /// Record an oracle disagreement or other internal inconsistency.
    pub fn flag(&mut self, msg: impl Into<String>) {
        self.inconsistencies.push(msg.into());
    }

    fn add_classification(&mut self, c: &PointClassification<Scalar>) {
        if !c.weight.agree {
            self.flag(format!(
                "gap weight {} differs from Wronskian weight {} at {}",
                c.weight.gap_weight, c.weight.wronskian_weight, c.point
            ));
        }
        self.findings.extend(c.findings());
        self.points.push(PointRecord::from_classification(c));
    }

    fn finish(mut self) -> Self {
        self.findings.sort();
        self.findings.dedup();
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        render_text(self)
    }
}

/// `gaps`: gap sequence at one point and both weights.
pub fn gaps_report(spec: &CurveSpec, p: &ProjectivePoint<Scalar>, order: usize) -> Result<ReportDocument> {
    let mut doc = ReportDocument::new("gaps", Some(spec));
    let b = branch_series(&spec.curve, p, order)?;
    let g = gap_sequence_from(&b)?;
    let w = wronskian_weight(&spec.curve, p, order.max(WRONSKIAN_MIN_ORDER))?;
    let mut rec = PointRecord::empty(p);
    rec.gaps = Some(g.gaps().to_vec());
    rec.weight = Some(g.weight());
    rec.wronskian_weight = Some(w);
    rec.weights_agree = Some(g.weight() == w);
    if g.weight() != w {
        doc.flag(format!("gap weight {} differs from Wronskian weight {w} at {p}", g.weight()));
    }
    let v = g.bound_violations();
    if !v.is_empty() {
        doc.findings.push(Finding::new(
            "gap-bound",
            format!("gaps {g} at {p} exceed n_r <= 2r-2 for r in {v:?}"),
        ));
    }
    doc.points.push(rec);
    Ok(doc.finish())
}

/// `classify`: one record per point; per-point failures stay in the record.
pub fn classify_report(spec: &CurveSpec, points: &[ProjectivePoint<Scalar>]) -> ReportDocument {
    let mut doc = ReportDocument::new("classify", Some(spec));
    for (p, r) in points.iter().zip(classify_batch(&spec.curve, points)) {
        match r {
            Ok(c) => doc.add_classification(&c),
            Err(e) => doc.points.push(PointRecord::from_error(p, &e)),
        }
    }
    doc.finish()
}

fn locus_findings(doc: &mut ReportDocument, l: &FlexLocus<Scalar>, field: &FieldContext) {
    let summary = LocusSummary::of(l);
    if matches!(field, FieldContext::Complex(_)) && summary.hessian_total != 72 {
        doc.flag(format!(
            "flex locus accounts for {} of 72 intersections with the Hessian",
            summary.hessian_total
        ));
    } else if !summary.complete {
        doc.findings.push(Finding::new(
            "locus-incomplete",
            format!(
                "{} of 72 Hessian intersections located in the field (residual factor degrees {:?})",
                summary.hessian_total, summary.residual_degrees
            ),
        ));
    }
    for fp in &l.points {
        if fp.contact.lower_bound() < 3 {
            doc.flag(format!("located point {} has tangent contact {}", fp.point, fp.contact));
        }
    }
    doc.flex_locus = Some(summary);
}

/// `flexes`: the flex locus with a classification per point.
pub fn flexes_report(spec: &CurveSpec) -> Result<ReportDocument> {
    Ok(flexes_inner(spec)?.0)
}

fn flexes_inner(spec: &CurveSpec) -> Result<(ReportDocument, Vec<PointClassification<Scalar>>)> {
    let mut doc = ReportDocument::new("flexes", Some(spec));
    let l = flex_locus(&spec.curve)?;
    locus_findings(&mut doc, &l, &spec.field);
    let pts: Vec<_> = l.points.iter().map(|f| f.point.clone()).collect();
    let mut classified = Vec::new();
    for (fp, r) in l.points.iter().zip(classify_batch(&spec.curve, &pts)) {
        match r {
            Ok(c) => {
                doc.add_classification(&c);
                doc.points.last_mut().expect("just pushed").hessian_multiplicity = Some(fp.hessian_multiplicity);
                classified.push(c);
            }
            Err(e) => {
                doc.flag(format!("classification failed at located flex {}: {e}", fp.point));
                doc.points.push(PointRecord::from_error(&fp.point, &e));
            }
        }
    }
    Ok((doc.finish(), classified))
}

/// `verify`: flexes plus supplied points, classified and accounted.
pub fn verify_report(spec: &CurveSpec, extra: &[ProjectivePoint<Scalar>]) -> Result<ReportDocument> {
    let (mut doc, mut classified) = flexes_inner(spec)?;
    doc.command = "verify".into();
    let mut fresh: Vec<ProjectivePoint<Scalar>> = Vec::new();
    for p in extra {
        let tol = p.coords()[0].precision_bits().map_or(0.0, |b| -(b as f64) / 3.0);
        let known = classified.iter().map(|c| &c.point).chain(&fresh).any(|q| q.same_as(p, tol));
        if !known {
            fresh.push(p.clone());
        }
    }
    for (p, r) in fresh.iter().zip(classify_batch(&spec.curve, &fresh)) {
        let c = r.map_err(|e| match e {
            e if e.is_internal() => e,
            e => Error::Invalid(format!("supplied point {p}: {e}")),
        })?;
        doc.add_classification(&c);
        classified.push(c);
    }
    let acc = verify_total_weight(&classified)?;
    if !acc.is_consistent() {
        doc.flag(format!("negative deficit {}", acc.deficit));
    }
    doc.findings.extend(acc.findings());
    doc.accounting = Some(acc);
    Ok(doc.finish())
}

/// `tables`: the maximal-count tables with the expected gap sequences.
pub fn tables_report() -> ReportDocument {
    let mut doc = ReportDocument::new("tables", None);
    doc.tables = Some(max_count_tables());
    doc.finish()
}

/// `count`: number of q-Weierstrass points with weight.
pub fn count_report(genus: u64, q: u64) -> Result<ReportDocument> {
    let mut doc = ReportDocument::new("count", None);
    doc.count = Some(CountRecord {
        genus,
        q,
        count: weierstrass_count(genus, q)?,
    });
    Ok(doc.finish())
}

/// Parameter grid `a=v1,v2;b=...;c=...`; omitted parameters are 0.
pub fn parse_grid(s: &str) -> Result<Vec<[String; 3]>> {
    let mut values: [Vec<String>; 3] = [vec!["0".into()], vec!["0".into()], vec!["0".into()]];
    let mut seen = [false; 3];
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, list) = part
            .split_once('=')
            .ok_or_else(|| Error::parse("grid", format!("expected name=values in {part:?}")))?;
        let idx = match name.trim() {
            "a" => 0,
            "b" => 1,
            "c" => 2,
            other => return Err(Error::parse("grid", format!("unknown parameter {other:?}"))),
        };
        if seen[idx] {
            return Err(Error::parse("grid", format!("parameter {name} given twice")));
        }
        seen[idx] = true;
        let vs: Vec<String> = list.split(',').map(|v| v.trim().to_string()).collect();
        if vs.iter().any(String::is_empty) {
            return Err(Error::parse("grid", format!("empty value in {part:?}")));
        }
        values[idx] = vs;
    }
    let mut out = Vec::new();
    for a in &values[0] {
        for b in &values[1] {
            for c in &values[2] {
                out.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    Ok(out)
}

/// Flex statistics for one member of the Kuribayashi family.
pub fn family_member(a: &str, b: &str, c: &str, field: &FieldDescriptor) -> Result<(FamilyRecord, Vec<Finding>, Vec<String>)> {
    let parameters: BTreeMap<String, String> = [("a", a), ("b", b), ("c", c)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let spec = CurveSpecFile::kuribayashi(a, b, c, field.clone()).build()?;
    let mut rec = FamilyRecord {
        parameters,
        flexes: None,
        hessian_total: None,
        contacts: BTreeMap::new(),
        weights: BTreeMap::new(),
        flex_weight: 0,
        error: None,
    };
    match flexes_report(&spec) {
        Ok(doc) => {
            let summary = doc.flex_locus.as_ref().expect("flexes report has a locus");
            rec.flexes = Some(summary.points);
            rec.hessian_total = Some(summary.hessian_total);
            for p in &doc.points {
                if let Some(c) = p.contact {
                    *rec.contacts.entry(c).or_default() += 1;
                }
                if let Some(w) = p.weight {
                    *rec.weights.entry(w).or_default() += 1;
                    rec.flex_weight += u64::from(w);
                }
            }
            Ok((rec, doc.findings, doc.inconsistencies))
        }
        Err(e) if !e.is_internal() => {
            rec.error = Some(e.to_string());
            Ok((rec, Vec::new(), Vec::new()))
        }
        Err(e) => Err(e),
    }
}

/// `family-scan`: flex statistics over a parameter grid.
pub fn family_scan_report(grid: &str, field: &FieldDescriptor) -> Result<ReportDocument> {
    let mut doc = ReportDocument::new("family-scan", None);
    doc.curve = Some("X^6 + Y^6 + Z^6 + a*X^3*Y^3 + b*X^3*Z^3 + c*Y^3*Z^3".into());
    doc.field = Some(field.clone());
    for [a, b, c] in parse_grid(grid)? {
        let (rec, findings, bad) = family_member(&a, &b, &c, field)?;
        doc.family.push(rec);
        doc.findings.extend(findings);
        doc.inconsistencies.extend(bad);
    }
    Ok(doc.finish())
}

fn join(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(header.iter().map(|h| h.to_string()).collect()));
    let _ = writeln!(out, "{}", line(width.iter().map(|w| "-".repeat(*w)).collect()));
    for r in rows {
        let _ = writeln!(out, "{}", line(r.clone()));
    }
}

fn bound_rows(rows: &[BoundEntry]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|e| {
            vec![
                e.order.to_string(),
                e.contact.to_string(),
                e.weight.map_or("-".into(), |w| w.to_string()),
                e.bound.to_string(),
                e.expected_gaps.as_ref().map_or("-".into(), |g| g.to_string()),
                e.annotation.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", doc.tool, doc.version, doc.command);
    if let Some(c) = &doc.curve {
        let _ = writeln!(out, "curve: {c}");
    }
    if let Some(f) = &doc.field {
        let _ = writeln!(out, "field: {}", serde_json::to_string(f).expect("descriptor"));
    }
    if let Some(c) = &doc.count {
        let _ = writeln!(out, "count(genus={}, q={}) = {}", c.genus, c.q, c.count);
    }
    if let Some(t) = &doc.tables {
        let header = ["i", "contact", "weight", "bound", "expected gaps", "note"];
        for (name, rows) in [("flex (NF_i)", &t.flex), ("sextactic (NS_i)", &t.sextactic), ("tentactic (NT_i)", &t.tentactic)] {
            let _ = writeln!(out, "\n{name}");
            table(&mut out, &header, &bound_rows(rows));
        }
    }
    if let Some(l) = &doc.flex_locus {
        let _ = writeln!(
            out,
            "flex locus: {} points, Hessian intersections {} of 72{}",
            l.points,
            l.hessian_total,
            if l.residual_degrees.is_empty() {
                String::new()
            } else {
                format!(", residual factor degrees {:?}", l.residual_degrees)
            }
        );
    }
    if !doc.points.is_empty() {
        let _ = writeln!(out);
        let rows: Vec<Vec<String>> = doc
            .points
            .iter()
            .map(|p| {
                let point = format!("({} : {} : {})", p.coordinates[0], p.coordinates[1], p.coordinates[2]);
                if let Some(e) = &p.error {
                    return vec![point, "error".into(), String::new(), String::new(), String::new(), String::new(), e.clone()];
                }
                vec![
                    point,
                    match (&p.kind, p.order) {
                        (Some(k), Some(i)) => format!("{i}-{k}"),
                        (Some(k), None) => k.clone(),
                        _ => "-".into(),
                    },
                    p.contact.map_or("-".into(), |c| c.to_string()),
                    p.gaps.as_deref().map_or("-".into(), join),
                    p.weight.map_or("-".into(), |w| w.to_string()),
                    p.wronskian_weight.map_or("-".into(), |w| w.to_string()),
                    p.table_consistency.clone().unwrap_or_else(|| "-".into()),
                ]
            })
            .collect();
        table(&mut out, &["point", "kind", "contact", "gaps", "weight", "wronskian", "table"], &rows);
    }
    if !doc.family.is_empty() {
        let _ = writeln!(out);
        let rows: Vec<Vec<String>> = doc
            .family
            .iter()
            .map(|r| {
                let hist = |m: &BTreeMap<u32, usize>| {
                    m.iter().map(|(k, v)| format!("{k}x{v}")).collect::<Vec<_>>().join(" ")
                };
                vec![
                    r.parameters["a"].clone(),
                    r.parameters["b"].clone(),
                    r.parameters["c"].clone(),
                    r.flexes.map_or("-".into(), |n| n.to_string()),
                    r.hessian_total.map_or("-".into(), |n| n.to_string()),
                    hist(&r.contacts),
                    hist(&r.weights),
                    r.flex_weight.to_string(),
                    r.error.clone().unwrap_or_default(),
                ]
            })
            .collect();
        table(
            &mut out,
            &["a", "b", "c", "flexes", "hessian", "contact x count", "weight x count", "flex weight", "error"],
            &rows,
        );
    }
    if let Some(a) = &doc.accounting {
        let _ = writeln!(
            out,
            "\naccounting: accumulated {}, target {}, deficit {}, complete {}",
            a.accumulated, a.target, a.deficit, a.complete
        );
    }
    if !doc.findings.is_empty() {
        let _ = writeln!(out, "\nfindings:");
        for f in &doc.findings {
            let _ = writeln!(out, "  {f}");
        }
    }
    if !doc.inconsistencies.is_empty() {
        let _ = writeln!(out, "\ninconsistencies:");
        for f in &doc.inconsistencies {
            let _ = writeln!(out, "  {f}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_spec_round_trip() {
        let f = CurveSpecFile::fermat(FieldDescriptor::Rational);
        let spec = f.build().unwrap();
        let back = CurveSpecFile::from_json(&CurveSpecFile::from_spec(&spec).to_json())
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(back, spec);
        assert_eq!(spec.curve.poly().num_terms(), 3);
    }

    #[test]
    fn kuribayashi_omits_zero_terms() {
        let f = CurveSpecFile::kuribayashi("1/2", "0", "-3", FieldDescriptor::Rational);
        assert_eq!(f.coefficients.len(), 5);
        assert!(f.build().is_ok());
    }

    #[test]
    fn malformed_specs() {
        let mut f = CurveSpecFile::fermat(FieldDescriptor::Rational);
        f.coefficients[0].exponents = [5, 0, 0];
        let e = f.build().unwrap_err();
        assert!(e.to_string().contains("coefficients[0].exponents"), "{e}");
        let mut g = CurveSpecFile::fermat(FieldDescriptor::Rational);
        g.coefficients[1].value = "1/0".into();
        assert!(g.build().unwrap_err().to_string().contains("coefficients[1].value"));
        let mut h = CurveSpecFile::fermat(FieldDescriptor::number_field("t^2+2*t+1"));
        h.label = None;
        assert!(h.build().is_err());
        let mut d = CurveSpecFile::fermat(FieldDescriptor::Rational);
        d.degree = 5;
        assert!(matches!(d.build(), Err(Error::WrongDegree { .. })));
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("a=0,1;c=-3").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[1], ["1".to_string(), "0".into(), "-3".into()]);
        assert!(parse_grid("d=1").is_err());
        assert!(parse_grid("a=1;a=2").is_err());
    }

    #[test]
    fn points_file() {
        let spec = CurveSpecFile::fermat(FieldDescriptor::number_field("t^6+1")).build().unwrap();
        let pts = spec.parse_points(r#"[["0","t","1"],["1","0","t"]]"#).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(spec.parse_points(r#"[["0","1"]]"#).is_err());
        assert!(spec.parse_point("0 : t : 1").is_ok());
    }

    #[test]
    fn tables_text() {
        let t = tables_report().to_text();
        assert!(t.contains("495"));
        assert!(t.contains("excluded by paper"));
    }
}
