//! SLIC baseline: windowed nearest-seed assignment with separate centroid
//! updates, used as the comparison point for the convergence ablations.

use std::time::{Duration, Instant};

use crate::flic::{distance, enforce_connectivity, perturb_superpixel_seeds, SegmentationResult};
use crate::imagecore::{
    grid_init, init_superpixel_states, Feature, FeatureImage, GridSpec, LabelMap,
    SegmentationConfig, SuperpixelState,
};
use crate::Result;

/// Stepwise SLIC engine. Each iteration assigns every pixel to the nearest
/// seed among those whose 2T×2T search window covers it (ties to the lowest
/// seed index), then recomputes all seeds as the exact centroids of their
/// regions.
#[derive(Debug, Clone)]
pub struct Engine {
    features: FeatureImage,
    labels: LabelMap,
    superpixels: Vec<SuperpixelState>,
    config: SegmentationConfig,
    grid: GridSpec,
    n_s: f64,
    change_counts: Vec<usize>,
}

impl Engine {
    pub fn new(features: FeatureImage, config: SegmentationConfig) -> Result<Self> {
        config.validate()?;
        let (grid, labels) = grid_init(features.width(), features.height(), config.k_requested)?;
        let n_s = (features.len() as f64 / config.k_requested as f64).sqrt();
        let mut superpixels = init_superpixel_states(&features, &labels, grid.k_actual)?;
        perturb_superpixel_seeds(&features, &mut superpixels);
        // Working seeds start as exact member centroids, as in the FLIC
        // engine; the first update step would recompute them anyway.
        let superpixels = init_superpixel_states(&features, &labels, grid.k_actual)?;
        Ok(Self { features, labels, superpixels, config, grid, n_s, change_counts: Vec::new() })
    }

    pub fn labels(&self) -> &LabelMap {
        &self.labels
    }

    pub fn superpixels(&self) -> &[SuperpixelState] {
        &self.superpixels
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn n_s(&self) -> f64 {
        self.n_s
    }

    pub fn change_counts(&self) -> &[usize] {
        &self.change_counts
    }

    /// One Lloyd iteration: windowed assignment, centroid update, and the
    /// empty-cluster guard. Returns the number of label changes.
    pub fn iterate(&mut self) -> usize {
        let (w, h) = (self.features.width(), self.features.height());
        let m = self.config.compactness;
        let t = self.n_s;
        let seeds: Vec<Feature> = self.superpixels.iter().map(|s| s.mean()).collect();

        let mut best = vec![f64::INFINITY; w * h];
        let mut new_labels = self.labels.labels().to_vec();
        for (k, seed) in seeds.iter().enumerate() {
            let x0 = (seed.x - t).floor().max(0.0) as usize;
            let x1 = ((seed.x + t).ceil() as usize).min(w - 1);
            let y0 = (seed.y - t).floor().max(0.0) as usize;
            let y1 = ((seed.y + t).ceil() as usize).min(h - 1);
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let i = y * w + x;
                    let d = distance(self.features.feature(x, y), seed, m, t);
                    // Strict improvement with ascending k: ties keep the
                    // lowest seed index.
                    if d < best[i] {
                        best[i] = d;
                        new_labels[i] = k as u32;
                    }
                }
            }
        }
        // A pixel no window covered keeps its previous label.
        let changes = new_labels
            .iter()
            .zip(self.labels.labels())
            .filter(|(a, b)| a != b)
            .count();
        self.labels = LabelMap::new(w, h, new_labels).expect("dimensions preserved");

        self.superpixels =
            init_superpixel_states(&self.features, &self.labels, self.grid.k_actual)
                .expect("labels stay in range");
        self.rescue_empty_clusters(&seeds);

        self.change_counts.push(changes);
        changes
    }

    /// Number of pixels not covered by any search window (0 on sane grids).
    pub fn uncovered_pixels(&self) -> usize {
        let (w, h) = (self.features.width(), self.features.height());
        let t = self.n_s;
        let mut covered = vec![false; w * h];
        for state in &self.superpixels {
            let seed = state.mean();
            let x0 = (seed.x - t).floor().max(0.0) as usize;
            let x1 = ((seed.x + t).ceil() as usize).min(w - 1);
            let y0 = (seed.y - t).floor().max(0.0) as usize;
            let y1 = ((seed.y + t).ceil() as usize).min(h - 1);
            for y in y0..=y1 {
                covered[y * w + x0..=y * w + x1].fill(true);
            }
        }
        covered.iter().filter(|&&c| !c).count()
    }

    /// Reassigns one donor pixel to every cluster the assignment step left
    /// empty: the pixel nearest the cluster's previous seed, among pixels
    /// whose current cluster keeps at least two members. Deterministic; ties
    /// go to the smallest pixel index.
    fn rescue_empty_clusters(&mut self, previous_seeds: &[Feature]) {
        let w = self.features.width();
        let m = self.config.compactness;
        for (k, prev_seed) in previous_seeds.iter().enumerate() {
            if self.superpixels[k].count > 0 {
                continue;
            }
            let mut donor: Option<(usize, f64)> = None;
            for (i, f) in self.features.features().iter().enumerate() {
                let owner = self.labels.labels()[i] as usize;
                if self.superpixels[owner].count < 2 {
                    continue;
                }
                let d = distance(f, prev_seed, m, self.n_s);
                if donor.is_none_or(|(_, best)| d < best) {
                    donor = Some((i, d));
                }
            }
            let (i, _) = donor.expect("an image with k <= n/4 has a donor pixel");
            let f = *self.features.feature(i % w, i / w);
            let owner = self.labels.labels()[i] as usize;
            self.superpixels[owner].remove_pixel(&f);
            self.superpixels[k].add_pixel(&f);
            self.labels.set_index(i, k as u32);
        }
    }

    fn into_result(self, wall_time: Duration) -> SegmentationResult {
        let k_actual = self.grid.k_actual;
        let iterations_run = self.change_counts.len();
        let mut labels = self.labels;
        if self.config.enforce_connectivity {
            labels = enforce_connectivity(&labels, k_actual);
        }
        SegmentationResult {
            labels,
            k_actual,
            iterations_run,
            change_counts: self.change_counts,
            wall_time,
        }
    }
}

/// Runs the SLIC baseline for `config.iterations` Lloyd iterations.
pub fn run_slic(features: &FeatureImage, config: &SegmentationConfig) -> Result<SegmentationResult> {
    let start = Instant::now();
    let mut engine = Engine::new(features.clone(), config.clone())?;
    for _ in 0..config.iterations {
        engine.iterate();
    }
    Ok(engine.into_result(start.elapsed()))
}
