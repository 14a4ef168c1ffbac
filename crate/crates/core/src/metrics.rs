//! Segmentation quality metrics: boundary recall, undersegmentation error and
//! achievable segmentation accuracy.

use std::time::Instant;

use crate::imagecore::LabelMap;
use crate::{Error, Result};

/// Per-pixel boundary flags: true where a pixel has at least one 4-neighbor
/// with a different label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMask {
    width: usize,
    height: usize,
    pub mask: Vec<bool>,
}

impl BoundaryMask {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }
}

/// BR/UE/ASA for one (segmentation, ground truth) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub br: f64,
    pub ue: f64,
    pub asa: f64,
    /// BR distance threshold, in pixels.
    pub epsilon: f64,
    /// Metric evaluation time.
    pub seconds: f64,
}

pub fn boundary_mask(labels: &LabelMap) -> BoundaryMask {
    let (w, h) = (labels.width(), labels.height());
    let data = labels.labels();
    let mut mask = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let l = data[i];
            mask[i] = (x > 0 && data[i - 1] != l)
                || (x + 1 < w && data[i + 1] != l)
                || (y > 0 && data[i - w] != l)
                || (y + 1 < h && data[i + w] != l);
        }
    }
    BoundaryMask { width: w, height: h, mask }
}

fn check_dims(seg: &LabelMap, gt: &LabelMap) -> Result<()> {
    if seg.width() != gt.width() || seg.height() != gt.height() {
        return Err(Error::DimensionMismatch(format!(
            "segmentation is {}x{} but ground truth is {}x{}",
            seg.width(),
            seg.height(),
            gt.width(),
            gt.height()
        )));
    }
    Ok(())
}

/// Fraction of ground-truth boundary pixels whose Euclidean distance to the
/// nearest segmentation boundary pixel is strictly below `epsilon`.
///
/// Only offsets with `dx^2 + dy^2 < epsilon^2` can produce a hit, so the
/// search scans a window of radius `ceil(epsilon)` around each ground-truth
/// boundary pixel; distances stay in exact integer arithmetic.
pub fn boundary_recall(seg: &LabelMap, gt: &LabelMap, epsilon: f64) -> Result<f64> {
    check_dims(seg, gt)?;
    let gt_mask = boundary_mask(gt);
    let total = gt_mask.count();
    if total == 0 {
        return Err(Error::UndefinedMetric(
            "ground truth has no boundary pixels (single label)".into(),
        ));
    }
    let seg_mask = boundary_mask(seg);
    let (w, h) = (seg.width(), seg.height());
    let eps_sq = epsilon * epsilon;
    let radius = epsilon.ceil().max(0.0).min((w + h) as f64) as isize;
    let mut hits = 0usize;
    for y in 0..h as isize {
        for x in 0..w as isize {
            if !gt_mask.mask[y as usize * w + x as usize] {
                continue;
            }
            'search: for dy in -radius..=radius {
                let ny = y + dy;
                if ny < 0 || ny >= h as isize {
                    continue;
                }
                for dx in -radius..=radius {
                    let nx = x + dx;
                    if nx < 0 || nx >= w as isize {
                        continue;
                    }
                    if ((dx * dx + dy * dy) as f64) < eps_sq
                        && seg_mask.mask[ny as usize * w + nx as usize]
                    {
                        hits += 1;
                        break 'search;
                    }
                }
            }
        }
    }
    Ok(hits as f64 / total as f64)
}

/// Maps arbitrary label values to dense ids in first-occurrence order.
fn compact_ids(labels: &LabelMap) -> (Vec<u32>, usize) {
    let mut ids = vec![0u32; labels.len()];
    let mut map = std::collections::HashMap::new();
    let mut next = 0u32;
    for (i, &l) in labels.labels().iter().enumerate() {
        let id = *map.entry(l).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        ids[i] = id;
    }
    (ids, next as usize)
}

fn overlap_table(seg: &LabelMap, gt: &LabelMap) -> (Vec<u64>, usize, usize) {
    let (sid, ns) = compact_ids(seg);
    let (gid, ng) = compact_ids(gt);
    let mut table = vec![0u64; ns * ng];
    for (s, g) in sid.iter().zip(&gid) {
        table[*s as usize * ng + *g as usize] += 1;
    }
    (table, ns, ng)
}

/// Undersegmentation error: for every ground-truth segment, each overlapping
/// superpixel contributes `min(in, out)`; the sum is normalized by the pixel
/// count.
pub fn undersegmentation_error(seg: &LabelMap, gt: &LabelMap) -> Result<f64> {
    check_dims(seg, gt)?;
    let (table, ns, ng) = overlap_table(seg, gt);
    let sizes: Vec<u64> =
        (0..ns).map(|s| table[s * ng..(s + 1) * ng].iter().sum()).collect();
    let mut total = 0u64;
    for s in 0..ns {
        for g in 0..ng {
            let overlap = table[s * ng + g];
            if overlap > 0 {
                total += overlap.min(sizes[s] - overlap);
            }
        }
    }
    Ok(total as f64 / seg.len() as f64)
}

/// Achievable segmentation accuracy: every superpixel counts its largest
/// ground-truth overlap; the sum is normalized by the pixel count.
pub fn achievable_segmentation_accuracy(seg: &LabelMap, gt: &LabelMap) -> Result<f64> {
    check_dims(seg, gt)?;
    let (table, ns, ng) = overlap_table(seg, gt);
    let total: u64 =
        (0..ns).map(|s| table[s * ng..(s + 1) * ng].iter().copied().max().unwrap_or(0)).sum();
    Ok(total as f64 / seg.len() as f64)
}

/// Computes all three metrics and times the evaluation.
pub fn evaluate(seg: &LabelMap, gt: &LabelMap, epsilon: f64) -> Result<MetricReport> {
    let start = Instant::now();
    let br = boundary_recall(seg, gt, epsilon)?;
    let ue = undersegmentation_error(seg, gt)?;
    let asa = achievable_segmentation_accuracy(seg, gt)?;
    Ok(MetricReport { br, ue, asa, epsilon, seconds: start.elapsed().as_secs_f64() })
}
