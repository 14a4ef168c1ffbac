//! Boundary-overlay rendering for qualitative inspection.

use flic_core::imagecore::{LabelMap, RawImage};
use flic_core::metrics::boundary_mask;
use flic_core::{Error, Result};

/// Copies the image and paints every superpixel-boundary pixel with `color`.
pub fn render_overlay(img: &RawImage, labels: &LabelMap, color: [u8; 3]) -> Result<RawImage> {
    if img.width() != labels.width() || img.height() != labels.height() {
        return Err(Error::DimensionMismatch(format!(
            "image is {}x{} but labels are {}x{}",
            img.width(),
            img.height(),
            labels.width(),
            labels.height()
        )));
    }
    let mask = boundary_mask(labels);
    let mut data = img.data().to_vec();
    for (i, &on) in mask.mask.iter().enumerate() {
        if on {
            data[i * 3..i * 3 + 3].copy_from_slice(&color);
        }
    }
    RawImage::new(img.width(), img.height(), data)
}
