//! Independent oracles for the acceptance suite. Everything here recomputes
//! results from first principles, without touching the production code paths
//! it is used to check.

#![allow(dead_code)]

use flic_core::imagecore::{FeatureImage, LabelMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Boundary pixels by direct 4-neighbor comparison.
pub fn boundary_pixels(labels: &LabelMap) -> Vec<(usize, usize)> {
    let (w, h) = (labels.width(), labels.height());
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let l = labels.label(x, y);
            let differs = (x > 0 && labels.label(x - 1, y) != l)
                || (x + 1 < w && labels.label(x + 1, y) != l)
                || (y > 0 && labels.label(x, y - 1) != l)
                || (y + 1 < h && labels.label(x, y + 1) != l);
            if differs {
                out.push((x, y));
            }
        }
    }
    out
}

/// Brute-force boundary recall: exhaustive pairwise distances, exact integer
/// arithmetic.
pub fn brute_force_br(seg: &LabelMap, gt: &LabelMap, epsilon: f64) -> f64 {
    let gt_boundary = boundary_pixels(gt);
    let seg_boundary = boundary_pixels(seg);
    assert!(!gt_boundary.is_empty(), "oracle needs a non-trivial ground truth");
    let eps_sq = epsilon * epsilon;
    let hits = gt_boundary
        .iter()
        .filter(|&&(px, py)| {
            seg_boundary.iter().any(|&(qx, qy)| {
                let dx = px as i64 - qx as i64;
                let dy = py as i64 - qy as i64;
                ((dx * dx + dy * dy) as f64) < eps_sq
            })
        })
        .count();
    hits as f64 / gt_boundary.len() as f64
}

fn label_values(map: &LabelMap) -> Vec<u32> {
    let mut values: Vec<u32> = map.labels().to_vec();
    values.sort_unstable();
    values.dedup();
    values
}

/// Naive undersegmentation error: one full-image scan per (segment,
/// superpixel) pair.
pub fn naive_ue(seg: &LabelMap, gt: &LabelMap) -> f64 {
    let n = seg.len() as f64;
    let mut total = 0u64;
    for g in label_values(gt) {
        for s in label_values(seg) {
            let s_in = seg
                .labels()
                .iter()
                .zip(gt.labels())
                .filter(|&(&sv, &gv)| sv == s && gv == g)
                .count() as u64;
            if s_in == 0 {
                continue;
            }
            let s_total =
                seg.labels().iter().filter(|&&sv| sv == s).count() as u64;
            total += s_in.min(s_total - s_in);
        }
    }
    total as f64 / n
}

/// Naive achievable segmentation accuracy.
pub fn naive_asa(seg: &LabelMap, gt: &LabelMap) -> f64 {
    let n = seg.len() as f64;
    let mut total = 0u64;
    for s in label_values(seg) {
        let mut best = 0u64;
        for g in label_values(gt) {
            let overlap = seg
                .labels()
                .iter()
                .zip(gt.labels())
                .filter(|&(&sv, &gv)| sv == s && gv == g)
                .count() as u64;
            best = best.max(overlap);
        }
        total += best;
    }
    total as f64 / n
}

/// From-scratch recomputation of per-superpixel aggregates.
pub struct FreshState {
    pub sum_l: f64,
    pub sum_a: f64,
    pub sum_b: f64,
    pub sum_x: f64,
    pub sum_y: f64,
    pub count: usize,
}

pub fn recompute_states(features: &FeatureImage, labels: &LabelMap, k: usize) -> Vec<FreshState> {
    let mut out: Vec<FreshState> = (0..k)
        .map(|_| FreshState { sum_l: 0.0, sum_a: 0.0, sum_b: 0.0, sum_x: 0.0, sum_y: 0.0, count: 0 })
        .collect();
    let w = features.width();
    for (i, &l) in labels.labels().iter().enumerate() {
        let f = features.feature(i % w, i / w);
        let s = &mut out[l as usize];
        s.sum_l += f.l;
        s.sum_a += f.a;
        s.sum_b += f.b;
        s.sum_x += f.x;
        s.sum_y += f.y;
        s.count += 1;
    }
    out
}

/// Random label map; `blocky` draws a coarse block partition instead of
/// per-pixel noise.
pub fn random_label_map(rng: &mut ChaCha8Rng, w: usize, h: usize, labels: u32, blocky: bool) -> LabelMap {
    let data: Vec<u32> = if blocky {
        let bw = rng.gen_range(2..=(w / 2).max(2));
        let bh = rng.gen_range(2..=(h / 2).max(2));
        let cols = w.div_ceil(bw);
        (0..w * h)
            .map(|i| {
                let (x, y) = (i % w, i / w);
                let cell = (y / bh) * cols + x / bw;
                (cell as u32).wrapping_mul(2654435761) % labels
            })
            .collect()
    } else {
        (0..w * h).map(|_| rng.gen_range(0..labels)).collect()
    };
    LabelMap::new(w, h, data).unwrap()
}

/// First-occurrence normalization, for comparing partitions up to label
/// permutation.
pub fn normalize_partition(labels: &[u32]) -> Vec<u32> {
    let mut map = std::collections::HashMap::new();
    let mut next = 0u32;
    labels
        .iter()
        .map(|&l| {
            *map.entry(l).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}

/// Brute-force k-means in the weighted five-dimensional feature space:
/// multi-restart Lloyd iteration, keeping the lowest-energy partition.
pub fn kmeans_best_partition(
    features: &FeatureImage,
    k: usize,
    compactness: f64,
    n_s: f64,
    restarts: u64,
) -> Vec<u32> {
    let scale = compactness / n_s;
    let points: Vec<[f64; 5]> = features
        .features()
        .iter()
        .map(|f| [f.l, f.a, f.b, f.x * scale, f.y * scale])
        .collect();
    let n = points.len();
    let dist_sq = |p: &[f64; 5], q: &[f64; 5]| -> f64 {
        p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
    };

    let mut best: Option<(f64, Vec<u32>)> = None;
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(restart);
        let mut centers: Vec<[f64; 5]> = Vec::new();
        while centers.len() < k {
            let candidate = points[rng.gen_range(0..n)];
            if !centers.iter().any(|c| dist_sq(c, &candidate) == 0.0) {
                centers.push(candidate);
            }
        }
        let mut assign = vec![0u32; n];
        for _ in 0..100 {
            let mut changed = false;
            for (i, p) in points.iter().enumerate() {
                let mut best_c = assign[i];
                let mut best_d = dist_sq(p, &centers[best_c as usize]);
                for (c, center) in centers.iter().enumerate() {
                    let d = dist_sq(p, center);
                    if d < best_d {
                        best_d = d;
                        best_c = c as u32;
                    }
                }
                if best_c != assign[i] {
                    assign[i] = best_c;
                    changed = true;
                }
            }
            let mut sums = vec![[0.0; 5]; k];
            let mut counts = vec![0usize; k];
            for (i, p) in points.iter().enumerate() {
                let c = assign[i] as usize;
                for d in 0..5 {
                    sums[c][d] += p[d];
                }
                counts[c] += 1;
            }
            for c in 0..k {
                if counts[c] > 0 {
                    for d in 0..5 {
                        centers[c][d] = sums[c][d] / counts[c] as f64;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let energy: f64 = points
            .iter()
            .zip(&assign)
            .map(|(p, &c)| dist_sq(p, &centers[c as usize]))
            .sum();
        if best.as_ref().is_none_or(|(e, _)| energy < *e) {
            best = Some((energy, assign));
        }
    }
    best.expect("at least one restart").1
}
