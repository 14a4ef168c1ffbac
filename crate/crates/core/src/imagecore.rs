//! Core domain types shared by every other module, plus grid initialization
//! of labels and seeds.

use crate::{Error, Result};

/// 8-bit sRGB image, row-major RGB triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RawImage {
    /// Any non-degenerate size decodes; segmentation itself requires at
    /// least 3×3 (checked by `grid_init` for the gradient windows).
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height * 3 {
            return Err(Error::InvalidImage(format!(
                "pixel buffer holds {} bytes, expected {} for {width}x{height} RGB",
                data.len(),
                width * height * 3
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn rgb(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

/// One pixel (or seed) in the five-dimensional clustering space:
/// CIELAB color plus image-plane position.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Feature {
    pub l: f64,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub y: f64,
}

impl Feature {
    pub fn color_dist_sq(&self, other: &Feature) -> f64 {
        let dl = self.l - other.l;
        let da = self.a - other.a;
        let db = self.b - other.b;
        dl * dl + da * da + db * db
    }

    pub fn spatial_dist_sq(&self, other: &Feature) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Per-pixel feature grid; `x`/`y` of each entry equal its column/row.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureImage {
    width: usize,
    height: usize,
    features: Vec<Feature>,
}

impl FeatureImage {
    pub fn new(width: usize, height: usize, features: Vec<Feature>) -> Result<Self> {
        if features.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "feature buffer holds {} entries, expected {}",
                features.len(),
                width * height
            )));
        }
        for (i, f) in features.iter().enumerate() {
            let (x, y) = (i % width, i / width);
            if f.x != x as f64 || f.y != y as f64 {
                return Err(Error::InvalidImage(format!(
                    "feature at index {i} carries position ({}, {}), expected ({x}, {y})",
                    f.x, f.y
                )));
            }
        }
        Ok(Self { width, height, features })
    }

    /// Builds a feature image from a per-pixel Lab function. Positions are
    /// filled in automatically.
    pub fn from_lab_fn(
        width: usize,
        height: usize,
        mut lab: impl FnMut(usize, usize) -> (f64, f64, f64),
    ) -> Self {
        let mut features = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let (l, a, b) = lab(x, y);
                features.push(Feature { l, a, b, x: x as f64, y: y as f64 });
            }
        }
        Self { width, height, features }
    }

    pub(crate) fn from_parts(width: usize, height: usize, features: Vec<Feature>) -> Self {
        debug_assert_eq!(features.len(), width * height);
        Self { width, height, features }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn feature(&self, x: usize, y: usize) -> &Feature {
        &self.features[y * self.width + x]
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }
}

/// Per-pixel superpixel labels, the evolving partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
}

impl LabelMap {
    pub fn new(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != width * height {
            return Err(Error::CorruptLabels(format!(
                "label buffer holds {} entries, expected {}",
                labels.len(),
                width * height
            )));
        }
        Ok(Self { width, height, labels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub(crate) fn set_index(&mut self, index: usize, label: u32) {
        self.labels[index] = label;
    }

    /// Number of distinct label values present.
    pub fn distinct_labels(&self) -> usize {
        let mut seen: Vec<u32> = self.labels.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Inclusive pixel bounds of a superpixel. May over-cover, never under-covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub x_min: usize,
    pub y_min: usize,
    pub x_max: usize,
    pub y_max: usize,
}

impl BoundingBox {
    pub fn empty() -> Self {
        Self { x_min: usize::MAX, y_min: usize::MAX, x_max: 0, y_max: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.x_min > self.x_max || self.y_min > self.y_max
    }

    pub fn grow(&mut self, x: usize, y: usize) {
        self.x_min = self.x_min.min(x);
        self.y_min = self.y_min.min(y);
        self.x_max = self.x_max.max(x);
        self.y_max = self.y_max.max(y);
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

/// Running per-superpixel aggregates. The seed is the derived mean; sums are
/// maintained incrementally and means computed on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpixelState {
    pub sum_l: f64,
    pub sum_a: f64,
    pub sum_b: f64,
    pub sum_x: f64,
    pub sum_y: f64,
    pub count: usize,
    pub bbox: BoundingBox,
}

impl SuperpixelState {
    pub fn empty() -> Self {
        Self {
            sum_l: 0.0,
            sum_a: 0.0,
            sum_b: 0.0,
            sum_x: 0.0,
            sum_y: 0.0,
            count: 0,
            bbox: BoundingBox::empty(),
        }
    }

    /// Adds a member pixel: sums, count and bounding box all absorb it.
    pub fn add_pixel(&mut self, f: &Feature) {
        self.sum_l += f.l;
        self.sum_a += f.a;
        self.sum_b += f.b;
        self.sum_x += f.x;
        self.sum_y += f.y;
        self.count += 1;
        self.bbox.grow(f.x as usize, f.y as usize);
    }

    /// Removes a member pixel. The bounding box is left as-is; it may
    /// over-cover afterwards, which traversal tolerates.
    pub fn remove_pixel(&mut self, f: &Feature) {
        self.sum_l -= f.l;
        self.sum_a -= f.a;
        self.sum_b -= f.b;
        self.sum_x -= f.x;
        self.sum_y -= f.y;
        self.count -= 1;
    }

    /// The seed: mean feature over member pixels. Requires `count >= 1`.
    pub fn mean(&self) -> Feature {
        debug_assert!(self.count >= 1);
        let n = self.count as f64;
        Feature {
            l: self.sum_l / n,
            a: self.sum_a / n,
            b: self.sum_b / n,
            x: self.sum_x / n,
            y: self.sum_y / n,
        }
    }

    /// Overrides the seed mean, keeping the member count.
    pub fn set_mean(&mut self, f: &Feature) {
        let n = self.count as f64;
        self.sum_l = f.l * n;
        self.sum_a = f.a * n;
        self.sum_b = f.b * n;
        self.sum_x = f.x * n;
        self.sum_y = f.y * n;
    }
}

/// Neighborhood size used by the label decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighborhood {
    Four,
    Eight,
}

impl Neighborhood {
    pub fn size(self) -> u8 {
        match self {
            Neighborhood::Four => 4,
            Neighborhood::Eight => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    BackAndForth,
    ForwardOnly,
}

impl ScanMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanMode::BackAndForth => "bf",
            ScanMode::ForwardOnly => "forward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMode {
    Joint,
    Separate,
}

impl UpdateMode {
    pub fn as_str(self) -> &'static str {
        match self {
            UpdateMode::Joint => "joint",
            UpdateMode::Separate => "separate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Flic,
    Slic,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Flic => "flic",
            Algorithm::Slic => "slic",
        }
    }
}

/// Full segmentation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationConfig {
    pub k_requested: usize,
    /// Spatial distance weight `m`.
    pub compactness: f64,
    pub iterations: usize,
    pub neighborhood: Neighborhood,
    pub scan_mode: ScanMode,
    pub update_mode: UpdateMode,
    pub algorithm: Algorithm,
    pub enforce_connectivity: bool,
}

impl SegmentationConfig {
    /// FLIC defaults: m = 5, two iterations, 4-neighborhood, back-and-forth
    /// scan, joint updates, no connectivity post-step.
    pub fn flic(k_requested: usize) -> Self {
        Self {
            k_requested,
            compactness: 5.0,
            iterations: 2,
            neighborhood: Neighborhood::Four,
            scan_mode: ScanMode::BackAndForth,
            update_mode: UpdateMode::Joint,
            algorithm: Algorithm::Flic,
            enforce_connectivity: false,
        }
    }

    /// SLIC defaults: ten Lloyd iterations and connectivity enforcement.
    pub fn slic(k_requested: usize) -> Self {
        Self {
            iterations: 10,
            algorithm: Algorithm::Slic,
            enforce_connectivity: true,
            ..Self::flic(k_requested)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_requested < 1 {
            return Err(Error::InvalidConfiguration(
                "superpixel count must be at least 1".into(),
            ));
        }
        if !self.compactness.is_finite() || self.compactness <= 0.0 {
            return Err(Error::InvalidConfiguration(format!(
                "compactness must be a positive finite number, got {}",
                self.compactness
            )));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidConfiguration(
                "iteration count must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Geometry of the initial regular grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Step length υ = sqrt(N/K), in fractional pixels.
    pub step: f64,
    pub cols: usize,
    pub rows: usize,
    pub k_actual: usize,
}

impl GridSpec {
    /// Start column of grid column `i` under the floor partition.
    pub fn col_start(&self, i: usize, width: usize) -> usize {
        i * width / self.cols
    }

    /// Start row of grid row `j` under the floor partition.
    pub fn row_start(&self, j: usize, height: usize) -> usize {
        j * height / self.rows
    }
}

/// Divides the image into a regular grid and labels every pixel with its cell
/// index in row-major cell order. `k_actual = cols * rows` may differ from
/// `k_requested` and is authoritative from here on.
pub fn grid_init(width: usize, height: usize, k_requested: usize) -> Result<(GridSpec, LabelMap)> {
    if width < 3 || height < 3 {
        return Err(Error::InvalidConfiguration(format!(
            "image must be at least 3x3 pixels, got {width}x{height}"
        )));
    }
    let n = width * height;
    if k_requested < 1 || 4 * k_requested > n {
        return Err(Error::InvalidConfiguration(format!(
            "superpixel count must satisfy 1 <= k <= {} (n/4), got {k_requested}",
            n / 4
        )));
    }
    let step = (n as f64 / k_requested as f64).sqrt();
    let rows = ((height as f64 / step).round() as usize).clamp(1, height);
    let cols = ((k_requested as f64 / rows as f64).round() as usize).clamp(1, width);
    let k_actual = cols * rows;

    let mut labels = vec![0u32; n];
    for j in 0..rows {
        let y0 = j * height / rows;
        let y1 = (j + 1) * height / rows;
        for i in 0..cols {
            let x0 = i * width / cols;
            let x1 = (i + 1) * width / cols;
            let label = (j * cols + i) as u32;
            for y in y0..y1 {
                let row = y * width;
                labels[row + x0..row + x1].fill(label);
            }
        }
    }

    let grid = GridSpec { step, cols, rows, k_actual };
    Ok((grid, LabelMap::new(width, height, labels)?))
}

/// Builds per-superpixel aggregates over exactly the pixels carrying each
/// label. The derived mean of state `k` is the centroid of its members.
pub fn init_superpixel_states(
    features: &FeatureImage,
    labels: &LabelMap,
    k_actual: usize,
) -> Result<Vec<SuperpixelState>> {
    if features.width() != labels.width() || features.height() != labels.height() {
        return Err(Error::DimensionMismatch(format!(
            "features are {}x{} but labels are {}x{}",
            features.width(),
            features.height(),
            labels.width(),
            labels.height()
        )));
    }
    let mut states = vec![SuperpixelState::empty(); k_actual];
    for (f, &label) in features.features().iter().zip(labels.labels()) {
        let k = label as usize;
        if k >= k_actual {
            return Err(Error::CorruptLabels(format!(
                "label {label} at pixel ({}, {}) is out of range (k_actual = {k_actual})",
                f.x, f.y
            )));
        }
        states[k].add_pixel(f);
    }
    Ok(states)
}
