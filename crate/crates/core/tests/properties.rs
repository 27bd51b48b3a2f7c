//! Invariant suites under fixed seeds.

mod common;

use common::*;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use wlab_core::classify::osculating_conic;
use wlab_core::gaps::{gap_sequence_from, rank_staircase, GapSequence};
use wlab_core::local::{admissible_charts, branch_series, branch_series_in, intersection_multiplicity, tangent_line, Multiplicity, DEFAULT_ORDER};
use wlab_core::report::{CurveSpecFile, CurveSpec};
use wlab_core::scalar::{FieldDescriptor, Field};

const CURVES: u64 = 5;

fn sample(seed: u64, per_curve: usize) -> Vec<(wlab_core::curve::Curve<wlab_core::scalar::BigComplex>, Vec<wlab_core::curve::ProjectivePoint<wlab_core::scalar::BigComplex>>)> {
    (0..CURVES)
        .map(|k| {
            let mut r = rng(seed + k);
            let c = random_sextic(&mut r);
            let pts = random_points(&c, &mut r, per_curve);
            (c, pts)
        })
        .collect()
}

#[test]
fn rank_staircase_steps_are_0_or_1() {
    for (c, pts) in sample(100, 4) {
        for p in &pts {
            let ranks = rank_staircase(&branch_series(&c, p, DEFAULT_ORDER).unwrap()).unwrap();
            assert_eq!(ranks[0], 0);
            for w in ranks.windows(2) {
                assert!(w[1] - w[0] <= 1, "rank jump {ranks:?} at {p}");
            }
            assert_eq!(*ranks.last().unwrap(), 10);
        }
    }
}

#[test]
fn branch_residual_below_2_pow_minus_128() {
    for (c, pts) in sample(200, 4) {
        for p in &pts {
            let b = branch_series(&c, p, DEFAULT_ORDER).unwrap();
            let r = b.residual_log2(&c);
            assert!(r <= -128.0, "residual 2^{r} at {p}");
        }
    }
}

#[test]
fn multiplicities_do_not_depend_on_the_chart() {
    for (c, pts) in sample(300, 3) {
        let mut r = rng(301);
        for p in &pts {
            let tangent = tangent_line(&c, p).unwrap();
            let other = linear(&random_line(&mut r));
            let mut seen = Vec::new();
            for chart in admissible_charts(&c, p).unwrap() {
                let b = branch_series_in(&c, p, chart, DEFAULT_ORDER).unwrap();
                seen.push((b.multiplicity(&tangent), b.multiplicity(&other), gap_sequence_from(&b).unwrap()));
            }
            assert!(seen.len() >= 2, "only {} admissible chart(s) at {p}", seen.len());
            assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?} at {p}");
            assert!(seen[0].0.lower_bound() >= 2);
            assert_eq!(seen[0].1, Multiplicity::Exact(0));
        }
    }
}

#[test]
fn line_sections_sum_to_six() {
    let mut r = rng(400);
    let curves: Vec<_> = (0..CURVES).map(|_| random_sextic(&mut r)).collect();
    for k in 0..20 {
        let c = &curves[k % curves.len()];
        let l = random_line(&mut r);
        let line = linear(&l);
        let total: usize = line_section(c, &l)
            .iter()
            .map(|(p, _)| intersection_multiplicity(c, &line, p, DEFAULT_ORDER).unwrap().require().unwrap())
            .sum();
        assert_eq!(total, 6, "line {k}");
    }
}

#[test]
fn tangent_sections_sum_to_six() {
    for (c, pts) in sample(450, 2) {
        for p in &pts {
            let t = tangent_line(&c, p).unwrap();
            let coeffs: Vec<_> = ["X", "Y", "Z"]
                .iter()
                .enumerate()
                .map(|(i, _)| {
                    let mut e = [0u32; 3];
                    e[i] = 1;
                    t.coeff(&wlab_core::poly::Monomial(e)).cloned().unwrap_or_else(|| c.sample().zero_like())
                })
                .collect();
            let a = [coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone()];
            if a[2].is_zero() {
                continue;
            }
            let total: usize = line_section(&c, &a)
                .iter()
                .map(|(q, _)| intersection_multiplicity(&c, &t, q, DEFAULT_ORDER).unwrap().require().unwrap())
                .sum();
            assert_eq!(total, 6);
            assert_eq!(intersection_multiplicity(&c, &t, p, DEFAULT_ORDER).unwrap(), Multiplicity::Exact(2));
        }
    }
}

#[test]
fn osculating_conic_kernel_has_dimension_one() {
    let mut checked = 0;
    for (c, pts) in sample(500, 10) {
        for p in &pts {
            let w = osculating_conic(&c, p).unwrap();
            let mu = intersection_multiplicity(&c, &w.conic, p, DEFAULT_ORDER).unwrap();
            assert!(mu.lower_bound() >= 5, "conic contact {mu:?} at {p}");
            checked += 1;
        }
    }
    assert_eq!(checked, 50);
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        rng_seed: RngSeed::Fixed(0x5e71c),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn weight_is_sum_of_excess(steps in proptest::collection::vec(1u32..=3, 9)) {
        let mut gaps = vec![1u32];
        for s in &steps {
            gaps.push(gaps.last().unwrap() + s);
        }
        prop_assume!(*gaps.last().unwrap() <= 19);
        let g = GapSequence::new(gaps.clone()).unwrap();
        let expected: u32 = gaps.iter().enumerate().map(|(r, n)| n - (r as u32 + 1)).sum();
        prop_assert_eq!(g.weight(), expected);
        prop_assert_eq!(g.vanishing_orders(), gaps.iter().map(|n| n - 1).collect::<Vec<_>>());
    }

    #[test]
    fn curve_spec_round_trips(coeffs in proptest::collection::vec((0u32..=6, 0u32..=6, -50i64..=50, 1i64..=12), 1..10)) {
        let entries: Vec<_> = coeffs
            .iter()
            .filter(|(a, b, n, _)| a + b <= 6 && *n != 0)
            .map(|(a, b, n, d)| (a, b, format!("{n}/{d}")))
            .collect();
        prop_assume!(!entries.is_empty());
        let mut seen = std::collections::BTreeSet::new();
        let json = serde_json::json!({
            "degree": 6,
            "field": { "kind": "rational" },
            "coefficients": entries
                .iter()
                .filter(|(a, b, _)| seen.insert((**a, **b)))
                .map(|(a, b, v)| serde_json::json!({ "exponents": [a, b, 6 - *a - *b], "value": v }))
                .collect::<Vec<_>>(),
            "label": "random",
        });
        let spec: CurveSpec = CurveSpecFile::from_json(&json.to_string()).unwrap().build().unwrap();
        let again = CurveSpecFile::from_json(&CurveSpecFile::from_spec(&spec).to_json()).unwrap().build().unwrap();
        prop_assert_eq!(&spec, &again);
        let file = CurveSpecFile::from_spec(&spec);
        prop_assert_eq!(CurveSpecFile::from_json(&file.to_json()).unwrap(), file);
    }

    #[test]
    fn complex_spec_round_trips(re in -1000i64..1000, im in -1000i64..1000, d in 1i64..64) {
        let value = format!("{re}/{d}{}{}/{d}*i", if im < 0 { "-" } else { "+" }, im.abs());
        let file = CurveSpecFile::kuribayashi(&value, "0", "1", FieldDescriptor::Complex { precision_bits: 128 });
        let spec = file.build().unwrap();
        let again = CurveSpecFile::from_json(&CurveSpecFile::from_spec(&spec).to_json()).unwrap().build().unwrap();
        prop_assert_eq!(spec, again);
    }
}
