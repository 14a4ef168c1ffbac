//! The `flic` command line: segment, eval and bench subcommands.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flic_core::colorspace::srgb_to_feature_image;
use flic_core::imagecore::{
    Algorithm, Neighborhood, ScanMode, SegmentationConfig, UpdateMode,
};
use flic_core::{metrics, segment};

use crate::bench::{run_sweep, write_rows, BenchRow, SweepSpec};
use crate::labels::{format_for_path, read_label_map, write_label_map};
use crate::overlay::render_overlay;
use crate::pnm::{read_ppm, write_ppm};

#[derive(Debug, Parser)]
#[command(name = "flic", version, about = "FLIC/SLIC superpixel segmentation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment a PPM image into superpixels.
    Segment(SegmentArgs),
    /// Score a label map against a ground-truth label map.
    Eval(EvalArgs),
    /// Sweep parameter combinations over an image directory.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Flic,
    Slic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanArg {
    Bf,
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UpdateArg {
    Joint,
    Separate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Flic => Algorithm::Flic,
            AlgorithmArg::Slic => Algorithm::Slic,
        }
    }
}

impl From<ScanArg> for ScanMode {
    fn from(s: ScanArg) -> Self {
        match s {
            ScanArg::Bf => ScanMode::BackAndForth,
            ScanArg::Forward => ScanMode::ForwardOnly,
        }
    }
}

impl From<UpdateArg> for UpdateMode {
    fn from(u: UpdateArg) -> Self {
        match u {
            UpdateArg::Joint => UpdateMode::Joint,
            UpdateArg::Separate => UpdateMode::Separate,
        }
    }
}

fn parse_neighborhood(value: &str) -> Result<Neighborhood, String> {
    match value {
        "4" => Ok(Neighborhood::Four),
        "8" => Ok(Neighborhood::Eight),
        other => Err(format!("neighborhood must be 4 or 8, got {other}")),
    }
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Input image (binary PPM, P6 maxval 255).
    #[arg(long)]
    pub input: PathBuf,
    /// Desired superpixel count K.
    #[arg(long)]
    pub superpixels: usize,
    /// Spatial distance weight m.
    #[arg(long, default_value_t = 5.0)]
    pub compactness: f64,
    /// Iteration count [default: 2 for flic, 10 for slic].
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long, value_parser = parse_neighborhood, default_value = "4")]
    pub neighborhood: Neighborhood,
    #[arg(long, value_enum, default_value_t = ScanArg::Bf)]
    pub scan: ScanArg,
    #[arg(long, value_enum, default_value_t = UpdateArg::Joint)]
    pub update: UpdateArg,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Flic)]
    pub algorithm: AlgorithmArg,
    /// Connectivity post-step [default: off for flic, on for slic].
    #[arg(long, value_enum)]
    pub enforce_connectivity: Option<OnOff>,
    /// Output label map; .csv writes CSV, anything else 16-bit PGM.
    #[arg(long)]
    pub labels_out: PathBuf,
    /// Optional boundary-overlay PPM.
    #[arg(long)]
    pub overlay_out: Option<PathBuf>,
    /// Optional run-diagnostics CSV.
    #[arg(long)]
    pub stats_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Segmentation label map (16-bit PGM or CSV).
    #[arg(long)]
    pub labels: PathBuf,
    /// Ground-truth label map (16-bit PGM or CSV).
    #[arg(long)]
    pub ground_truth: PathBuf,
    /// Boundary-recall distance threshold, in pixels.
    #[arg(long, default_value_t = 2.0)]
    pub epsilon: f64,
    /// Output CSV (one metric row).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of .ppm inputs.
    #[arg(long)]
    pub input_dir: PathBuf,
    /// Directory of same-stem .pgm/.csv ground-truth label maps.
    #[arg(long)]
    pub gt_dir: PathBuf,
    /// Superpixel counts to sweep.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k_list: Vec<usize>,
    /// Compactness values to sweep.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub m_list: Vec<f64>,
    /// Iteration counts to sweep.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub iter_list: Vec<usize>,
    /// Algorithms to sweep.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "flic")]
    pub algorithms: Vec<AlgorithmArg>,
    /// Neighborhood sizes to sweep.
    #[arg(long, value_parser = parse_neighborhood, value_delimiter = ',', default_value = "4")]
    pub neighborhood_list: Vec<Neighborhood>,
    /// Scan orders to sweep.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bf")]
    pub scan_list: Vec<ScanArg>,
    /// Update modes to sweep.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "joint")]
    pub update_list: Vec<UpdateArg>,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Segment(args) => run_segment(args),
        Command::Eval(args) => run_eval(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn run_segment(args: SegmentArgs) -> Result<()> {
    let algorithm: Algorithm = args.algorithm.into();
    let config = SegmentationConfig {
        k_requested: args.superpixels,
        compactness: args.compactness,
        iterations: args.iterations.unwrap_or(match algorithm {
            Algorithm::Flic => 2,
            Algorithm::Slic => 10,
        }),
        neighborhood: args.neighborhood,
        scan_mode: args.scan.into(),
        update_mode: args.update.into(),
        algorithm,
        enforce_connectivity: match args.enforce_connectivity {
            Some(flag) => flag == OnOff::On,
            None => algorithm == Algorithm::Slic,
        },
    };
    let img = read_ppm(&args.input)?;
    let features = srgb_to_feature_image(&img);
    let result = segment(&features, &config)?;
    write_label_map(&result.labels, &args.labels_out, format_for_path(&args.labels_out))?;
    if let Some(path) = &args.overlay_out {
        let overlay = render_overlay(&img, &result.labels, [255, 0, 0])?;
        write_ppm(path, &overlay)?;
    }
    if let Some(path) = &args.stats_out {
        let mut out = String::from("key,value\n");
        out.push_str(&format!("k_requested,{}\n", config.k_requested));
        out.push_str(&format!("k_actual,{}\n", result.k_actual));
        out.push_str(&format!("iterations_run,{}\n", result.iterations_run));
        out.push_str(&format!("wall_time_s,{}\n", result.wall_time.as_secs_f64()));
        for (i, changes) in result.change_counts.iter().enumerate() {
            out.push_str(&format!("label_changes_iteration_{},{}\n", i + 1, changes));
        }
        std::fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn run_eval(args: EvalArgs) -> Result<()> {
    let seg = read_label_map(&args.labels)?;
    let gt = read_label_map(&args.ground_truth)?;
    let report = metrics::evaluate(&seg, &gt, args.epsilon)?;
    let row = BenchRow {
        image: args
            .labels
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("labels")
            .to_string(),
        algorithm: None,
        k_requested: None,
        k_actual: seg.distinct_labels(),
        m: None,
        iterations: None,
        neighborhood: None,
        scan: None,
        update: None,
        br: report.br,
        ue: report.ue,
        asa: report.asa,
        time_s: None,
    };
    write_rows(&args.out, &[row])
}

fn run_bench(args: BenchArgs) -> Result<()> {
    if args.k_list.is_empty() {
        bail!("--k-list must name at least one superpixel count");
    }
    let spec = SweepSpec {
        k_list: args.k_list,
        m_list: args.m_list,
        iter_list: args.iter_list,
        algorithms: args.algorithms.into_iter().map(Into::into).collect(),
        neighborhood_list: args.neighborhood_list,
        scan_list: args.scan_list.into_iter().map(Into::into).collect(),
        update_list: args.update_list.into_iter().map(Into::into).collect(),
        epsilon: 2.0,
    };
    let rows = run_sweep(&args.input_dir, &args.gt_dir, &spec)?;
    write_rows(&args.out, &rows)
}
