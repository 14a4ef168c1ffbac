//! Deterministic synthetic imagery with known ground truth, used by the test
//! suites and for dataset-free benchmark runs.

use flic_core::imagecore::{LabelMap, RawImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generated image plus the partition it was built from.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub id: String,
    pub image: RawImage,
    pub ground_truth: LabelMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    VerticalSplit,
    HorizontalSplit,
    DiagonalSplit,
    /// Grid of colored blocks with per-pixel noise.
    Blocks,
    /// Smooth luminance ramp with one hard vertical step.
    GradientStep,
}

const PALETTE: [[u8; 3]; 8] = [
    [200, 40, 40],
    [40, 40, 200],
    [40, 180, 60],
    [230, 200, 40],
    [150, 40, 180],
    [40, 200, 200],
    [250, 120, 30],
    [245, 245, 245],
];

fn noisy(channel: u8, amp: i16, rng: &mut ChaCha8Rng) -> u8 {
    if amp == 0 {
        return channel;
    }
    (i16::from(channel) + rng.gen_range(-amp..=amp)).clamp(0, 255) as u8
}

/// Uniform random noise in all channels; no meaningful ground truth.
pub fn noise_image(width: usize, height: usize, seed: u64) -> RawImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..width * height * 3).map(|_| rng.gen()).collect();
    RawImage::new(width, height, data).unwrap()
}

/// Generates one image of the given kind together with its ground truth.
pub fn generate(kind: SynthKind, width: usize, height: usize, seed: u64) -> CorpusItem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ca = PALETTE[rng.gen_range(0..PALETTE.len())];
    let mut cb = PALETTE[rng.gen_range(0..PALETTE.len())];
    while cb == ca {
        cb = PALETTE[rng.gen_range(0..PALETTE.len())];
    }
    let mut data = Vec::with_capacity(width * height * 3);
    let mut gt = Vec::with_capacity(width * height);
    let name;
    match kind {
        SynthKind::VerticalSplit => {
            name = "vsplit";
            let split = rng.gen_range(width / 3..=2 * width / 3);
            for y in 0..height {
                let _ = y;
                for x in 0..width {
                    let left = x < split;
                    gt.push(u32::from(!left));
                    let c = if left { ca } else { cb };
                    data.extend(c.iter().map(|&v| noisy(v, 6, &mut rng)));
                }
            }
        }
        SynthKind::HorizontalSplit => {
            name = "hsplit";
            let split = rng.gen_range(height / 3..=2 * height / 3);
            for y in 0..height {
                for _x in 0..width {
                    let top = y < split;
                    gt.push(u32::from(!top));
                    let c = if top { ca } else { cb };
                    data.extend(c.iter().map(|&v| noisy(v, 6, &mut rng)));
                }
            }
        }
        SynthKind::DiagonalSplit => {
            name = "diag";
            for y in 0..height {
                for x in 0..width {
                    let upper = x * height + y * width < width * height;
                    gt.push(u32::from(!upper));
                    let c = if upper { ca } else { cb };
                    data.extend(c.iter().map(|&v| noisy(v, 6, &mut rng)));
                }
            }
        }
        SynthKind::Blocks => {
            name = "blocks";
            let cols = rng.gen_range(2..=4usize);
            let rows = rng.gen_range(2..=4usize);
            for y in 0..height {
                for x in 0..width {
                    let bx = (x * cols / width).min(cols - 1);
                    let by = (y * rows / height).min(rows - 1);
                    gt.push((by * cols + bx) as u32);
                    // Neighbors differ: +1 horizontally, +2 vertically mod 5.
                    let c = PALETTE[(bx + 2 * by) % 5];
                    data.extend(c.iter().map(|&v| noisy(v, 10, &mut rng)));
                }
            }
        }
        SynthKind::GradientStep => {
            name = "gradstep";
            let split = rng.gen_range(width / 3..=2 * width / 3);
            for y in 0..height {
                let _ = y;
                for x in 0..width {
                    let left = x < split;
                    gt.push(u32::from(!left));
                    let ramp = (x * 60 / width.max(1)) as i16;
                    let base = if left { ca } else { cb };
                    data.extend(
                        base.iter()
                            .map(|&v| (i16::from(v) / 2 + 60 + ramp).clamp(0, 255) as u8),
                    );
                }
            }
        }
    }
    CorpusItem {
        id: format!("{name}_{width}x{height}_s{seed}"),
        image: RawImage::new(width, height, data).unwrap(),
        ground_truth: LabelMap::new(width, height, gt).unwrap(),
    }
}

const ALL_KINDS: [SynthKind; 5] = [
    SynthKind::VerticalSplit,
    SynthKind::HorizontalSplit,
    SynthKind::DiagonalSplit,
    SynthKind::Blocks,
    SynthKind::GradientStep,
];

/// The fixed corpus the acceptance suite evaluates convergence on.
pub fn acceptance_corpus() -> Vec<CorpusItem> {
    let mut items = Vec::new();
    let mut seed = 900;
    for &side in &[64usize, 96, 128] {
        for &kind in &ALL_KINDS {
            items.push(generate(kind, side, side, seed));
            seed += 1;
        }
    }
    items
}

/// Random kinds and sizes in `[min_side, max_side]`, deterministic in `seed`.
pub fn random_corpus(seed: u64, count: usize, min_side: usize, max_side: usize) -> Vec<CorpusItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let kind = ALL_KINDS[rng.gen_range(0..ALL_KINDS.len())];
            let w = rng.gen_range(min_side..=max_side);
            let h = rng.gen_range(min_side..=max_side);
            generate(kind, w, h, seed.wrapping_add(1000 + i as u64))
        })
        .collect()
}
