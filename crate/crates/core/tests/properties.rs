use std::sync::Arc;

use proptest::prelude::*;

use nframes_core::certify::{certify_with, CertifyConfig, Kernel};
use nframes_core::testkit::{gen_sized_frame, gen_vector, GenConfig};
use nframes_core::{
    analysis, canonical_dual, n_inner, optimal_bounds, project, AmbientVector, AnchorSet,
    FrameSystem, InducedSpace, Result,
};

fn coords(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, d)
}

fn vector(c: &[f64]) -> AmbientVector {
    AmbientVector::new(c.to_vec()).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cofactor expansion of the 3×3 bordered Gram determinant for two anchors.
fn cofactor_inner(x: &[f64], y: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let m = [
        [dot(x, y), dot(x, a), dot(x, b)],
        [dot(a, y), dot(a, a), dot(a, b)],
        [dot(b, y), dot(b, a), dot(b, b)],
    ];
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn anchor_pair(a: &[f64], b: &[f64]) -> Option<AnchorSet> {
    AnchorSet::new(vec![vector(a), vector(b)])
        .ok()
        .filter(|s| s.gamma() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn determinant_matches_cofactor_expansion(x in coords(4), y in coords(4), a in coords(4), b in coords(4)) {
        let anchors = anchor_pair(&a, &b);
        prop_assume!(anchors.is_some());
        let anchors = anchors.unwrap();
        let got = n_inner(&vector(&x), &vector(&y), &anchors).unwrap();
        let want = cofactor_inner(&x, &y, &a, &b);
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()), "{got} vs {want}");
    }

    #[test]
    fn gram_determinant_equals_projected_inner(x in coords(5), y in coords(5), a in coords(5), b in coords(5)) {
        let anchors = anchor_pair(&a, &b);
        prop_assume!(anchors.is_some());
        let space = InducedSpace::new(anchors.unwrap()).unwrap();
        let (xv, yv) = (vector(&x), vector(&y));
        let v = n_inner(&xv, &yv, space.anchors()).unwrap();
        let w = space.gamma() * project(&xv, &space).unwrap().coords().dot(project(&yv, &space).unwrap().coords());
        prop_assert!((v - w).abs() <= 1e-9 * (1.0 + v.abs()));
    }

    #[test]
    fn anchor_order_and_scale(x in coords(4), y in coords(4), a in coords(4), b in coords(4), t in 0.1f64..10.0) {
        let anchors = anchor_pair(&a, &b);
        prop_assume!(anchors.is_some());
        let anchors = anchors.unwrap();
        let (xv, yv) = (vector(&x), vector(&y));
        let v = n_inner(&xv, &yv, &anchors).unwrap();
        let swapped = n_inner(&xv, &yv, &anchors.permuted(&[1, 0]).unwrap()).unwrap();
        prop_assert!((v - swapped).abs() <= 1e-12 * (1.0 + v.abs()));
        let scaled = n_inner(&(&xv * t), &yv, &anchors).unwrap();
        prop_assert!((scaled - t * v).abs() <= 1e-12 * (1.0 + (t * v).abs()));
        prop_assert!((n_inner(&yv, &xv, &anchors).unwrap() - v).abs() <= 1e-12 * (1.0 + v.abs()));
    }

    #[test]
    fn projection_ignores_anchor_span(x in coords(4), a in coords(4), b in coords(4), s in -3.0f64..3.0, r in -3.0f64..3.0) {
        let anchors = anchor_pair(&a, &b);
        prop_assume!(anchors.is_some());
        let space = InducedSpace::new(anchors.unwrap()).unwrap();
        let xv = vector(&x);
        let shifted = &(&xv + &(&vector(&a) * s)) + &(&vector(&b) * r);
        let d = project(&shifted, &space).unwrap().coords() - project(&xv, &space).unwrap().coords();
        prop_assert!(d.amax() <= 1e-12 * (1.0 + s.abs() + r.abs()));
    }

    #[test]
    fn frame_ratios_lie_within_optimal_bounds(seed in any::<u64>(), probe in any::<u64>()) {
        let fs = gen_sized_frame(&GenConfig::with_seed(seed)).unwrap();
        let f = gen_vector(&GenConfig::with_seed(probe), fs.space().dim());
        let norm2 = n_inner(&f, &f, fs.space().anchors()).unwrap();
        prop_assume!(norm2 > 1e-6);
        let sum = analysis(&f, &fs).unwrap().norm_squared();
        let b = optimal_bounds(&fs);
        prop_assert!(sum >= (b.lower - 1e-9) * norm2 && sum <= (b.upper + 1e-9) * norm2);
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>()) {
        let a = gen_sized_frame(&GenConfig::with_seed(seed)).unwrap();
        let b = gen_sized_frame(&GenConfig::with_seed(seed)).unwrap();
        prop_assert_eq!(a.phi(), b.phi());
    }
}

#[test]
fn dual_of_dual_is_the_original_frame() -> Result<()> {
    let fs = gen_sized_frame(&GenConfig::with_seed(3))?;
    let back = canonical_dual(&canonical_dual(&fs)?)?;
    assert!((back.phi() - fs.phi()).amax() < 1e-10);
    Ok(())
}

#[test]
fn fixture_dual_matches_hand_inverse() -> Result<()> {
    // S = [[2,1],[1,2]] has inverse [[2,-1],[-1,2]]/3, so the dual rows are
    // the frame rows times that matrix.
    let space = Arc::new(InducedSpace::new(AnchorSet::new(vec![vector(&[
        0.0, 0.0, 1.0,
    ])])?)?);
    let rows = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
    let fs = FrameSystem::new(
        space,
        rows.iter().map(|r| vector(&[r[0], r[1], 0.0])).collect(),
    )?;
    let dual = canonical_dual(&fs)?;
    for (r, got) in rows.iter().zip(dual.vectors()) {
        let want = [(2.0 * r[0] - r[1]) / 3.0, (2.0 * r[1] - r[0]) / 3.0, 0.0];
        for (g, w) in got.as_slice().iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }
    Ok(())
}

fn flipped(x: &AmbientVector, y: &AmbientVector, a: &AnchorSet) -> Result<f64> {
    n_inner(x, y, a).map(|v| -v)
}

fn flipped_off_diagonal(x: &AmbientVector, y: &AmbientVector, a: &AnchorSet) -> Result<f64> {
    let v = n_inner(x, y, a)?;
    Ok(if x.as_slice() == y.as_slice() { v } else { -v })
}

#[test]
fn harness_catches_broken_kernels() {
    let cfg = CertifyConfig {
        trials: 20,
        sup_samples: 50,
        oracle_samples: 50,
        ..CertifyConfig::default()
    };
    let report = certify_with(
        &cfg,
        &Kernel {
            name: "flipped",
            n_inner: flipped,
        },
    )
    .unwrap();
    assert!(!report.suite("cauchy_schwarz").unwrap().ok());
    assert!(!report.all_passed());
    let report = certify_with(
        &cfg,
        &Kernel {
            name: "off-diagonal",
            n_inner: flipped_off_diagonal,
        },
    )
    .unwrap();
    let pol = report.suite("polarization").unwrap();
    assert!(!pol.ok());
    assert!(pol
        .counterexample
        .as_ref()
        .unwrap()
        .instance
        .build()
        .is_ok());
}
