//! End-to-end pipeline checks: raw sRGB in, labels out, with the engine
//! consistency invariants verified after every iteration.

use flic_core::colorspace::srgb_to_feature_image;
use flic_core::flic::{self, enforce_connectivity};
use flic_core::imagecore::{
    FeatureImage, LabelMap, RawImage, SegmentationConfig, SuperpixelState, UpdateMode,
};
use flic_core::{metrics, segment, slic};

fn checkerboard_image(width: usize, height: usize, cell: usize) -> RawImage {
    let mut data = Vec::with_capacity(width * height * 3);
    for y in 0..height {
        for x in 0..width {
            if (x / cell + y / cell).is_multiple_of(2) {
                data.extend_from_slice(&[200, 40, 40]);
            } else {
                data.extend_from_slice(&[40, 40, 200]);
            }
        }
    }
    RawImage::new(width, height, data).unwrap()
}

/// From-scratch recomputation of every superpixel aggregate, independent of
/// the engine's incremental bookkeeping.
fn recompute_states(features: &FeatureImage, labels: &LabelMap, k: usize) -> Vec<(f64, f64, f64, f64, f64, usize)> {
    let mut sums = vec![(0.0, 0.0, 0.0, 0.0, 0.0, 0usize); k];
    for (i, &l) in labels.labels().iter().enumerate() {
        let f = features.feature(i % features.width(), i / features.width());
        let s = &mut sums[l as usize];
        s.0 += f.l;
        s.1 += f.a;
        s.2 += f.b;
        s.3 += f.x;
        s.4 += f.y;
        s.5 += 1;
    }
    sums
}

fn assert_states_consistent(
    features: &FeatureImage,
    labels: &LabelMap,
    states: &[SuperpixelState],
    context: &str,
) {
    let fresh = recompute_states(features, labels, states.len());
    let n: usize = states.iter().map(|s| s.count).sum();
    assert_eq!(n, labels.len(), "{context}: counts must partition the image");
    for (k, state) in states.iter().enumerate() {
        let (l, a, b, x, y, count) = fresh[k];
        assert!(state.count >= 1, "{context}: superpixel {k} is empty");
        assert_eq!(state.count, count, "{context}: count of superpixel {k}");
        assert_eq!(state.sum_x, x, "{context}: x sum of superpixel {k}");
        assert_eq!(state.sum_y, y, "{context}: y sum of superpixel {k}");
        for (have, want, name) in
            [(state.sum_l, l, "l"), (state.sum_a, a, "a"), (state.sum_b, b, "b")]
        {
            let tol = 1e-9 * want.abs().max(1.0);
            assert!((have - want).abs() <= tol, "{context}: {name} sum of superpixel {k}");
        }
    }
    // Bounding boxes never under-cover.
    for (i, &l) in labels.labels().iter().enumerate() {
        let (x, y) = (i % labels.width(), i / labels.width());
        assert!(
            states[l as usize].bbox.contains(x, y),
            "{context}: pixel ({x}, {y}) escapes bbox of superpixel {l}"
        );
    }
}

#[test]
fn flic_pipeline_keeps_state_invariants() {
    let img = checkerboard_image(32, 24, 5);
    let features = srgb_to_feature_image(&img);
    for update_mode in [UpdateMode::Joint, UpdateMode::Separate] {
        let mut config = SegmentationConfig::flic(12);
        config.update_mode = update_mode;
        let mut engine = flic::Engine::new(features.clone(), config).unwrap();
        for iteration in 1..=3 {
            engine.iterate();
            assert_states_consistent(
                engine.features(),
                engine.labels(),
                engine.superpixels(),
                &format!("flic {update_mode:?} iteration {iteration}"),
            );
        }
    }
}

#[test]
fn slic_pipeline_keeps_state_invariants() {
    let img = checkerboard_image(30, 30, 7);
    let features = srgb_to_feature_image(&img);
    let mut config = SegmentationConfig::slic(9);
    config.iterations = 4;
    let mut engine = slic::Engine::new(features.clone(), config).unwrap();
    for iteration in 1..=4 {
        engine.iterate();
        assert_states_consistent(
            &features,
            engine.labels(),
            engine.superpixels(),
            &format!("slic iteration {iteration}"),
        );
    }
}

#[test]
fn segment_dispatches_on_algorithm() {
    let img = checkerboard_image(24, 24, 6);
    let features = srgb_to_feature_image(&img);
    let flic_result = segment(&features, &SegmentationConfig::flic(8)).unwrap();
    let slic_result = segment(&features, &SegmentationConfig::slic(8)).unwrap();
    // 24x24 with K=8 realizes a 3x3 grid.
    assert_eq!(flic_result.k_actual, 9);
    assert_eq!(slic_result.k_actual, 9);
    assert_eq!(flic_result.iterations_run, 2);
    assert_eq!(slic_result.iterations_run, 10);
}

#[test]
fn connectivity_post_step_yields_single_components() {
    let img = checkerboard_image(32, 32, 3);
    let features = srgb_to_feature_image(&img);
    let mut config = SegmentationConfig::flic(10);
    config.compactness = 1.0; // low compactness invites ragged regions
    config.enforce_connectivity = true;
    let result = segment(&features, &config).unwrap();
    // Every label present must form one 4-connected component.
    let labels = &result.labels;
    let enforced_again = enforce_connectivity(labels, result.k_actual);
    assert_eq!(labels, &enforced_again, "already-enforced maps are fixed points");
    assert_eq!(labels.distinct_labels(), result.k_actual, "no label may vanish");
}

#[test]
fn label_changes_always_adopt_a_neighbor_label() {
    // Color split at x = 9, grid cell boundary at x = 12: the pixels in
    // between must migrate across the cell border.
    let (w, h) = (24usize, 20usize);
    let mut data = Vec::with_capacity(w * h * 3);
    for _y in 0..h {
        for x in 0..w {
            data.extend_from_slice(if x < 9 { &[200, 40, 40] } else { &[40, 40, 200] });
        }
    }
    let img = RawImage::new(w, h, data).unwrap();
    let features = srgb_to_feature_image(&img);
    let mut engine = flic::Engine::new(features, SegmentationConfig::flic(4)).unwrap();
    // Drive the assignment loop by hand so each change can be inspected the
    // moment it happens.
    let mut changes = 0;
    for _ in 0..2 {
        for index in 0..w * h {
            let before = engine.labels().labels()[index];
            if let flic::AssignOutcome::Changed { from, to } = engine.assign_pixel(index) {
                assert_eq!(from, before);
                let (x, y) = (index % w, index / w);
                let mut neighbor_has_new_label = false;
                for (dx, dy) in [(0i64, -1i64), (-1, 0), (1, 0), (0, 1)] {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h {
                        neighbor_has_new_label |=
                            engine.labels().label(nx as usize, ny as usize) == to;
                    }
                }
                assert!(neighbor_has_new_label, "pixel {index} adopted a non-neighbor label");
                changes += 1;
            }
        }
    }
    assert!(changes > 0, "the scenario must exercise label changes");
}

#[test]
fn perfect_segmentation_scores_perfectly() {
    let img = checkerboard_image(20, 20, 5);
    let features = srgb_to_feature_image(&img);
    let result = segment(&features, &SegmentationConfig::flic(16)).unwrap();
    let report = metrics::evaluate(&result.labels, &result.labels, 2.0).unwrap();
    assert_eq!(report.br, 1.0);
    assert_eq!(report.ue, 0.0);
    assert_eq!(report.asa, 1.0);
}
