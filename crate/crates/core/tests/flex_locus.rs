use wlab_core::classify::{classify, PointKind};
use wlab_core::local::Multiplicity;
use wlab_core::locus::{flex_locus, flex_locus_permuted, verify_total_weight};
use wlab_core::report::CurveSpecFile;
use wlab_core::scalar::FieldDescriptor;

#[test]
fn fermat_over_cyclotomic_field() {
    let spec = CurveSpecFile::fermat(FieldDescriptor::number_field("t^6+1")).build().unwrap();
    let locus = flex_locus(&spec.curve).unwrap();
    assert_eq!(locus.points.len(), 18);
    assert!(locus.points.iter().all(|f| f.contact == Multiplicity::Exact(6)));
    assert_eq!(locus.hessian_total(), 72);
    assert!(locus.complete());
    let c = classify(&spec.curve, &locus.points[0].point).unwrap();
    assert_eq!(c.kind, PointKind::flex(6));
    assert_eq!(c.gaps.gaps(), &[1, 2, 3, 4, 7, 8, 9, 13, 14, 19]);
    assert!(c.weight.agree && c.weight.gap_weight == 25);
}

#[test]
fn complex_fermat_and_permutations() {
    let spec = CurveSpecFile::fermat(FieldDescriptor::complex(256)).build().unwrap();
    let locus = flex_locus(&spec.curve).unwrap();
    assert_eq!(locus.points.len(), 18);
    assert_eq!(locus.hessian_total(), 72);
    let other = flex_locus_permuted(&spec.curve, [2, 0, 1]).unwrap();
    assert_eq!(other.points.len(), 18);
    for p in &locus.points {
        assert!(other.points.iter().any(|q| q.point.same_as(&p.point, -80.0)));
    }
}

#[test]
fn perturbed_fermat_generic_flexes() {
    let mut f = CurveSpecFile::kuribayashi("1/3", "-2/7", "5/11", FieldDescriptor::complex(256));
    f.coefficients.push(wlab_core::report::CoefficientEntry { exponents: [1, 2, 3], value: "3/13".into() });
    f.coefficients.push(wlab_core::report::CoefficientEntry { exponents: [4, 1, 1], value: "-1/5".into() });
    let spec = f.build().unwrap();
    let locus = flex_locus(&spec.curve).unwrap();
    assert_eq!(locus.points.len(), 72);
    assert_eq!(locus.hessian_total(), 72);
    assert!(locus.points.iter().all(|f| f.contact == Multiplicity::Exact(3)));
    let c = classify(&spec.curve, &locus.points[0].point).unwrap();
    let acc = verify_total_weight(&[c]).unwrap();
    assert!(acc.deficit <= 990);
}
