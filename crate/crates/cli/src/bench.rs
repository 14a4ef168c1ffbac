//! Benchmark harness: cartesian parameter sweeps over an image directory,
//! one CSV row per (image, configuration) pair.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use flic_core::colorspace::srgb_to_feature_image;
use flic_core::imagecore::{
    Algorithm, LabelMap, Neighborhood, ScanMode, SegmentationConfig, UpdateMode,
};
use flic_core::{metrics, segment};
use serde::Serialize;

use crate::labels::read_label_map;
use crate::pnm::read_ppm;

/// One benchmark result row. Fields without a value (e.g. algorithm settings
/// when scoring a pre-computed label file) serialize as empty cells.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub image: String,
    pub algorithm: Option<String>,
    pub k_requested: Option<usize>,
    pub k_actual: usize,
    pub m: Option<f64>,
    pub iterations: Option<usize>,
    pub neighborhood: Option<u8>,
    pub scan: Option<String>,
    pub update: Option<String>,
    pub br: f64,
    pub ue: f64,
    pub asa: f64,
    pub time_s: Option<f64>,
}

pub fn write_rows(path: &Path, rows: &[BenchRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// The parameter grid swept by `bench`.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub k_list: Vec<usize>,
    pub m_list: Vec<f64>,
    pub iter_list: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub neighborhood_list: Vec<Neighborhood>,
    pub scan_list: Vec<ScanMode>,
    pub update_list: Vec<UpdateMode>,
    pub epsilon: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            k_list: vec![200],
            m_list: vec![5.0],
            iter_list: vec![2],
            algorithms: vec![Algorithm::Flic],
            neighborhood_list: vec![Neighborhood::Four],
            scan_list: vec![ScanMode::BackAndForth],
            update_list: vec![UpdateMode::Joint],
            epsilon: 2.0,
        }
    }
}

impl SweepSpec {
    pub fn combinations(&self) -> usize {
        self.algorithms.len()
            * self.k_list.len()
            * self.m_list.len()
            * self.iter_list.len()
            * self.neighborhood_list.len()
            * self.scan_list.len()
            * self.update_list.len()
    }
}

fn ppm_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("ppm"))
        .collect();
    paths.sort();
    Ok(paths)
}

fn ground_truth_for(gt_dir: &Path, stem: &str) -> Result<LabelMap> {
    for ext in ["pgm", "csv"] {
        let candidate = gt_dir.join(format!("{stem}.{ext}"));
        if candidate.exists() {
            return Ok(read_label_map(&candidate)?);
        }
    }
    bail!("no ground truth ({stem}.pgm or {stem}.csv) in {}", gt_dir.display())
}

/// Runs the sweep over every `.ppm` in `input_dir`, scoring against the
/// same-stem label map in `gt_dir`. Rows come back in deterministic order:
/// images sorted by path, then the nested parameter loops.
pub fn run_sweep(input_dir: &Path, gt_dir: &Path, spec: &SweepSpec) -> Result<Vec<BenchRow>> {
    let paths = ppm_paths(input_dir)?;
    if paths.is_empty() {
        bail!("no .ppm images in {}", input_dir.display());
    }
    let mut rows = Vec::with_capacity(paths.len() * spec.combinations());
    for path in &paths {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("image")
            .to_string();
        let img = read_ppm(path)?;
        let features = srgb_to_feature_image(&img);
        let gt = ground_truth_for(gt_dir, &stem)?;
        for &algorithm in &spec.algorithms {
            for &k in &spec.k_list {
                for &m in &spec.m_list {
                    for &iterations in &spec.iter_list {
                        for &neighborhood in &spec.neighborhood_list {
                            for &scan_mode in &spec.scan_list {
                                for &update_mode in &spec.update_list {
                                    let config = SegmentationConfig {
                                        k_requested: k,
                                        compactness: m,
                                        iterations,
                                        neighborhood,
                                        scan_mode,
                                        update_mode,
                                        algorithm,
                                        enforce_connectivity: algorithm == Algorithm::Slic,
                                    };
                                    let result = segment(&features, &config)?;
                                    let report = metrics::evaluate(
                                        &result.labels,
                                        &gt,
                                        spec.epsilon,
                                    )?;
                                    rows.push(BenchRow {
                                        image: stem.clone(),
                                        algorithm: Some(algorithm.as_str().into()),
                                        k_requested: Some(k),
                                        k_actual: result.k_actual,
                                        m: Some(m),
                                        iterations: Some(iterations),
                                        neighborhood: Some(neighborhood.size()),
                                        scan: Some(scan_mode.as_str().into()),
                                        update: Some(update_mode.as_str().into()),
                                        br: report.br,
                                        ue: report.ue,
                                        asa: report.asa,
                                        time_s: Some(result.wall_time.as_secs_f64()),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}
