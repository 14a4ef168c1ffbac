//! The FLIC engine: active-search label decisions, joint seed updates and
//! back-and-forth bounding-box traversal.
//!
//! Unlike seed-centric schemes that sweep a fixed window around every seed,
//! each pixel here actively picks among the seeds of its own and its
//! neighbors' labels. Label changes feed back into the seeds immediately
//! (joint mode), so pixels visited later in the same pass see fresher seeds.

mod connectivity;

pub use connectivity::enforce_connectivity;

use std::time::{Duration, Instant};

use crate::imagecore::{
    grid_init, init_superpixel_states, Feature, FeatureImage, GridSpec, LabelMap, Neighborhood,
    ScanMode, SegmentationConfig, SuperpixelState, UpdateMode,
};
use crate::Result;

/// Weighted five-dimensional distance between a pixel and a seed:
/// `sqrt(d_c^2 + (d_s * m / n_s)^2)` with Euclidean color and spatial parts.
pub fn distance(pixel: &Feature, seed: &Feature, compactness: f64, n_s: f64) -> f64 {
    debug_assert!(n_s > 0.0);
    let w = compactness / n_s;
    (pixel.color_dist_sq(seed) + pixel.spatial_dist_sq(seed) * (w * w)).sqrt()
}

/// Squared Lab gradient at `(x, y)` from central differences, clamped at the
/// image border.
fn color_gradient(features: &FeatureImage, x: usize, y: usize) -> f64 {
    let (w, h) = (features.width(), features.height());
    let left = features.feature(x.saturating_sub(1), y);
    let right = features.feature((x + 1).min(w - 1), y);
    let up = features.feature(x, y.saturating_sub(1));
    let down = features.feature(x, (y + 1).min(h - 1));
    right.color_dist_sq(left) + down.color_dist_sq(up)
}

/// Moves each seed to the lowest-gradient position in the 3×3 window around
/// its rounded centroid; the seed takes that pixel's color and position.
/// The incumbent center wins ties; challengers are scanned in (y, x) order
/// with strict improvement, so equal minima keep the earliest position.
pub fn perturb_superpixel_seeds(features: &FeatureImage, superpixels: &mut [SuperpixelState]) {
    let (w, h) = (features.width(), features.height());
    for state in superpixels.iter_mut().filter(|s| s.count > 0) {
        let mean = state.mean();
        let cx = (mean.x.round() as usize).min(w - 1);
        let cy = (mean.y.round() as usize).min(h - 1);
        let mut best = (cx, cy);
        let mut best_gradient = color_gradient(features, cx, cy);
        for y in cy.saturating_sub(1)..=(cy + 1).min(h - 1) {
            for x in cx.saturating_sub(1)..=(cx + 1).min(w - 1) {
                if (x, y) == (cx, cy) {
                    continue;
                }
                let g = color_gradient(features, x, y);
                if g < best_gradient {
                    best_gradient = g;
                    best = (x, y);
                }
            }
        }
        state.set_mean(features.feature(best.0, best.1));
    }
}

/// Outcome of one label decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignOutcome {
    Unchanged,
    Changed { from: u32, to: u32 },
}

/// Scan direction over a superpixel's bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Diagnostics and final labels of one segmentation run.
#[derive(Debug, Clone)]
pub struct SegmentationResult {
    pub labels: LabelMap,
    pub k_actual: usize,
    pub iterations_run: usize,
    /// Label changes per iteration, in order.
    pub change_counts: Vec<usize>,
    /// Wall time of the clustering only (no I/O, no color conversion).
    pub wall_time: Duration,
}

// Neighbor order: up, left, right, down, then NW, NE, SW, SE for 8-N.
const NEIGHBOR_ORDER: [(isize, isize); 8] =
    [(0, -1), (-1, 0), (1, 0), (0, 1), (-1, -1), (1, -1), (-1, 1), (1, 1)];

/// The FLIC engine state: features, evolving labels, per-superpixel
/// aggregates and the fixed grid geometry. Strictly sequential within one
/// image — later assignments read state mutated by earlier ones.
#[derive(Debug, Clone)]
pub struct Engine {
    features: FeatureImage,
    labels: LabelMap,
    superpixels: Vec<SuperpixelState>,
    config: SegmentationConfig,
    grid: GridSpec,
    n_s: f64,
    /// Seed snapshot used for distances in separate-update mode; refreshed at
    /// the start of every iteration.
    iteration_seeds: Vec<Feature>,
    change_counts: Vec<usize>,
}

impl Engine {
    pub fn new(features: FeatureImage, config: SegmentationConfig) -> Result<Self> {
        config.validate()?;
        let (grid, labels) = grid_init(features.width(), features.height(), config.k_requested)?;
        let n_s = (features.len() as f64 / config.k_requested as f64).sqrt();
        let mut superpixels = init_superpixel_states(&features, &labels, grid.k_actual)?;
        perturb_superpixel_seeds(&features, &mut superpixels);
        // Working seeds are initialized from member sums after the
        // perturbation pass; the incremental updates assume member-exact sums.
        let superpixels = init_superpixel_states(&features, &labels, grid.k_actual)?;
        Ok(Self {
            features,
            labels,
            superpixels,
            config,
            grid,
            n_s,
            iteration_seeds: Vec::new(),
            change_counts: Vec::new(),
        })
    }

    pub fn features(&self) -> &FeatureImage {
        &self.features
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

    pub fn config(&self) -> &SegmentationConfig {
        &self.config
    }

    pub fn n_s(&self) -> f64 {
        self.n_s
    }

    pub fn change_counts(&self) -> &[usize] {
        &self.change_counts
    }

    /// Seed used for distance computations: the live mean in joint mode, the
    /// iteration-start snapshot in separate mode.
    pub fn seed(&self, k: usize) -> Feature {
        match self.config.update_mode {
            UpdateMode::Joint => self.superpixels[k].mean(),
            UpdateMode::Separate if !self.iteration_seeds.is_empty() => self.iteration_seeds[k],
            UpdateMode::Separate => self.superpixels[k].mean(),
        }
    }

    /// Applies the low-gradient seed perturbation to the current state.
    pub fn perturb_seeds(&mut self) {
        perturb_superpixel_seeds(&self.features, &mut self.superpixels);
    }

    /// Decides pixel `index`'s label among its own seed and the seeds of its
    /// (4- or 8-) neighbors' labels. Strict improvement only, so the running
    /// label wins all ties. On a change the losing and gaining aggregates are
    /// updated immediately and the gaining bounding box grows; a change that
    /// would empty the losing superpixel is rejected.
    pub fn assign_pixel(&mut self, index: usize) -> AssignOutcome {
        let w = self.features.width();
        let h = self.features.height();
        let x = index % w;
        let y = index / w;
        let current = self.labels.labels()[index];

        let mut neighbors = [0u32; 8];
        let mut n_count = 0;
        let mut any_differs = false;
        let order = match self.config.neighborhood {
            Neighborhood::Four => &NEIGHBOR_ORDER[..4],
            Neighborhood::Eight => &NEIGHBOR_ORDER[..],
        };
        // Interior pixels (every neighbor shares the label) need no distance
        // work at all.
        for &(dx, dy) in order {
            let nx = x as isize + dx;
            let ny = y as isize + dy;
            if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                continue;
            }
            let label = self.labels.labels()[ny as usize * w + nx as usize];
            neighbors[n_count] = label;
            n_count += 1;
            any_differs |= label != current;
        }
        if !any_differs {
            return AssignOutcome::Unchanged;
        }

        let f = *self.features.feature(x, y);
        let m = self.config.compactness;
        let mut best_label = current;
        let mut best_dist = distance(&f, &self.seed(current as usize), m, self.n_s);
        for &label in &neighbors[..n_count] {
            if label != best_label {
                let d = distance(&f, &self.seed(label as usize), m, self.n_s);
                if d < best_dist {
                    best_dist = d;
                    best_label = label;
                }
            }
        }
        if best_label == current {
            return AssignOutcome::Unchanged;
        }
        if self.superpixels[current as usize].count == 1 {
            // Losing superpixel would become empty; keep the label.
            return AssignOutcome::Unchanged;
        }
        self.superpixels[current as usize].remove_pixel(&f);
        self.superpixels[best_label as usize].add_pixel(&f);
        self.labels.set_index(index, best_label);
        AssignOutcome::Changed { from: current, to: best_label }
    }

    /// Scans superpixel `k`'s bounding box row-major (or in exact reverse),
    /// deciding labels only for pixels currently carrying `k`. Returns the
    /// number of label changes.
    pub fn traverse_superpixel(&mut self, k: usize, direction: Direction) -> usize {
        let bbox = self.superpixels[k].bbox;
        if bbox.is_empty() {
            return 0;
        }
        let w = self.features.width();
        let span = bbox.x_max - bbox.x_min + 1;
        let area = span * (bbox.y_max - bbox.y_min + 1);
        let target = k as u32;
        let mut changes = 0;
        for t in 0..area {
            let u = match direction {
                Direction::Forward => t,
                Direction::Backward => area - 1 - t,
            };
            let px = bbox.x_min + u % span;
            let py = bbox.y_min + u / span;
            let index = py * w + px;
            if self.labels.labels()[index] == target
                && matches!(self.assign_pixel(index), AssignOutcome::Changed { .. })
            {
                changes += 1;
            }
        }
        changes
    }

    /// One full iteration: exact bounding boxes are rebuilt, then every
    /// superpixel is traversed in index order — forward and (in back-and-forth
    /// mode) backward. Returns the number of label changes.
    pub fn iterate(&mut self) -> usize {
        self.recompute_bboxes();
        if self.config.update_mode == UpdateMode::Separate {
            self.iteration_seeds = (0..self.superpixels.len())
                .map(|k| self.superpixels[k].mean())
                .collect();
        }
        let mut changes = 0;
        for k in 0..self.grid.k_actual {
            changes += self.traverse_superpixel(k, Direction::Forward);
            if self.config.scan_mode == ScanMode::BackAndForth {
                changes += self.traverse_superpixel(k, Direction::Backward);
            }
        }
        self.change_counts.push(changes);
        changes
    }

    /// Shrinks every bounding box back to the minimum box of its members.
    fn recompute_bboxes(&mut self) {
        for state in &mut self.superpixels {
            state.bbox = crate::imagecore::BoundingBox::empty();
        }
        let w = self.features.width();
        for (i, &label) in self.labels.labels().iter().enumerate() {
            self.superpixels[label as usize].bbox.grow(i % w, i / w);
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

/// Runs the full FLIC pipeline: grid init, seed perturbation, seed init, then
/// `config.iterations` iterations (plus the optional connectivity post-step).
pub fn run(features: &FeatureImage, config: &SegmentationConfig) -> Result<SegmentationResult> {
    let start = Instant::now();
    let mut engine = Engine::new(features.clone(), config.clone())?;
    for _ in 0..config.iterations {
        engine.iterate();
    }
    Ok(engine.into_result(start.elapsed()))
}
