//! FLIC superpixel over-segmentation with a SLIC baseline and quality metrics.
//!
//! The pipeline runs in stages: an 8-bit sRGB image ([`imagecore::RawImage`])
//! is converted to a CIELAB+position feature grid ([`colorspace`]), clustered
//! into superpixels by the FLIC engine ([`flic`]) or the SLIC baseline
//! ([`slic`]), and the resulting label maps are scored against ground truth
//! ([`metrics`]).

pub mod colorspace;
pub mod flic;
pub mod imagecore;
pub mod metrics;
pub mod slic;

use imagecore::{Algorithm, FeatureImage, SegmentationConfig};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("corrupt labels: {0}")]
    CorruptLabels(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),
    #[error("invalid image: {0}")]
    InvalidImage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Runs the algorithm selected by `config.algorithm`.
pub fn segment(
    features: &FeatureImage,
    config: &SegmentationConfig,
) -> Result<flic::SegmentationResult> {
    match config.algorithm {
        Algorithm::Flic => flic::run(features, config),
        Algorithm::Slic => slic::run_slic(features, config),
    }
}
