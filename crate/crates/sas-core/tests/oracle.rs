//! Production implementations against the brute-force oracles.

use sas_core::clicks::{initial_click, next_click, NextClick};
use sas_core::metrics::nsd;
use sas_core::raster::{
    connected_components, distance_transform, interior_depth, resize_nearest, resized_dims,
    BinaryMask, Connectivity,
};
use sas_core::stream::derive_stream;
use sas_testkit as testkit;

fn nonempty_blob(w: usize, h: usize, rng: &mut sas_core::stream::ChaCha8Rng) -> BinaryMask {
    loop {
        let m = testkit::random_blob_mask(w, h, rng);
        if m.foreground_area() > 0 {
            return m;
        }
    }
}

#[test]
fn distance_transform_matches_brute_force() {
    let mut rng = derive_stream(0xD1, 0);
    let mut report = testkit::OracleReport::new(1e-9);
    for case in 0..300 {
        let w = 1 + (case % 32);
        let h = 1 + ((case * 7) % 32);
        let mask = nonempty_blob(w, h, &mut rng);
        let fast = distance_transform(&mask).unwrap();
        let slow = testkit::brute_force_distance_transform(&mask).unwrap();
        let err = fast
            .data()
            .iter()
            .zip(slow.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.record(format!("case {case}"), err);
    }
    assert!(
        report.passed(),
        "max error {} in {:?}",
        report.max_abs_error(),
        report.failures()
    );
}

#[test]
fn nsd_matches_brute_force_across_tolerances() {
    let mut rng = derive_stream(0xD2, 0);
    let mut report = testkit::OracleReport::new(1e-9);
    for case in 0..300 {
        let w = 2 + (case % 30);
        let h = 2 + ((case * 5) % 30);
        let pred = testkit::random_blob_mask(w, h, &mut rng);
        let rs = testkit::random_blob_mask(w, h, &mut rng);
        for tau in [0.0, 1.0, 2.0, 5.0] {
            let fast = nsd(&pred, &rs, tau).unwrap();
            let slow = testkit::brute_force_nsd(&pred, &rs, tau).unwrap();
            report.record(format!("case {case} tau {tau}"), (fast - slow).abs());
        }
    }
    assert!(
        report.passed(),
        "max error {} in {:?}",
        report.max_abs_error(),
        report.failures()
    );
}

#[test]
fn component_count_matches_flood_fill() {
    let mut rng = derive_stream(0xD3, 0);
    for case in 0..200 {
        let mask = testkit::random_mask(16, 16, 0.4, &mut rng);
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let fast = connected_components(&mask, conn).count();
            let slow = testkit::flood_fill_component_count(&mask, conn);
            assert_eq!(fast, slow, "case {case} {conn:?}");
        }
    }
}

#[test]
fn interior_depth_matches_brute_force() {
    let mut rng = derive_stream(0xD4, 0);
    for case in 0..200 {
        let mask = nonempty_blob(12, 12, &mut rng);
        let fast = interior_depth(&mask);
        let slow = testkit::brute_force_interior_depth(&mask);
        for (a, b) in fast.data().iter().zip(&slow) {
            assert!((a - b).abs() <= 1e-9, "case {case}");
        }
    }
}

#[test]
fn initial_click_stays_in_the_oracle_candidate_set() {
    let mut rng = derive_stream(0xD5, 0);
    for case in 0..200 {
        let rs = nonempty_blob(16, 16, &mut rng);
        let candidates = testkit::brute_force_initial_candidates(&rs);
        let click = initial_click(&rs, &mut rng).unwrap();
        assert!(
            candidates.contains(&(click.x, click.y)),
            "case {case}: click ({}, {}) outside candidate set",
            click.x,
            click.y
        );
        assert!(rs.at(click.x, click.y));
    }
}

#[test]
fn next_click_lands_on_errors_with_matching_labels() {
    let mut rng = derive_stream(0xD6, 0);
    for case in 0..200 {
        let rs = nonempty_blob(16, 16, &mut rng);
        let pred = testkit::random_blob_mask(16, 16, &mut rng);
        match next_click(&rs, &pred, 2).unwrap() {
            NextClick::Converged => assert_eq!(rs, pred, "case {case}"),
            NextClick::Click(c) => {
                assert_ne!(rs.at(c.x, c.y), pred.at(c.x, c.y), "case {case}: not an error pixel");
                let positive = c.label == sas_core::clicks::ClickLabel::Positive;
                assert_eq!(positive, rs.at(c.x, c.y), "case {case}: label mismatch");
            }
        }
    }
}

#[test]
fn nearest_resize_agrees_with_center_sampling_oracle() {
    let mut rng = derive_stream(0xD7, 0);
    for case in 0..100 {
        let w = 4 + (case % 24);
        let h = 4 + ((case * 3) % 24);
        let mask = testkit::random_mask(w, h, 0.3, &mut rng);
        let target = 4 + (case % 40);
        let fast = resize_nearest(&mask, target).unwrap();

        let (ow, oh) = resized_dims(w, h, target);
        assert_eq!((fast.width(), fast.height()), (ow, oh));
        for yo in 0..oh {
            for xo in 0..ow {
                let sx = (((xo as f64 + 0.5) * w as f64 / ow as f64).floor() as usize).min(w - 1);
                let sy = (((yo as f64 + 0.5) * h as f64 / oh as f64).floor() as usize).min(h - 1);
                assert_eq!(fast.at(xo, yo), mask.at(sx, sy), "case {case} ({xo},{yo})");
            }
        }
    }
}

#[test]
fn single_pixel_island_survival_matches_the_oracle() {
    // A 1-pixel island survives or vanishes under resize exactly when the
    // oracle's sampled center hits it.
    for (w, h, px, py, target) in [(9usize, 9usize, 4usize, 4usize, 3usize), (8, 8, 0, 0, 4), (10, 6, 9, 5, 5)] {
        let mut mask = BinaryMask::filled(w, h, false);
        mask.set(px, py, true);
        let out = resize_nearest(&mask, target).unwrap();
        let (ow, oh) = resized_dims(w, h, target);
        let mut expected = 0;
        for yo in 0..oh {
            for xo in 0..ow {
                let sx = (((xo as f64 + 0.5) * w as f64 / ow as f64).floor() as usize).min(w - 1);
                let sy = (((yo as f64 + 0.5) * h as f64 / oh as f64).floor() as usize).min(h - 1);
                if (sx, sy) == (px, py) {
                    expected += 1;
                }
            }
        }
        assert_eq!(out.foreground_area(), expected);
    }
}
