//! Label-map serialization: 16-bit PGM or CSV (one row of comma-separated
//! ids per image row).

use std::fs;
use std::path::Path;

use flic_core::imagecore::LabelMap;

use crate::pnm::{self, PnmError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelFormat {
    Pgm16,
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum LabelIoError {
    #[error(transparent)]
    Pnm(#[from] PnmError),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("label {label} does not fit a 16-bit PGM sample")]
    LabelOverflow { label: u32 },
    #[error("dimension mismatch in CSV at line {line}: row has {found} ids, expected {expected}")]
    CsvShape { line: usize, expected: usize, found: usize },
    #[error("malformed CSV at line {line}: {what}")]
    CsvToken { line: usize, what: String },
    #[error("empty label file")]
    Empty,
    #[error("invalid label map: {0}")]
    Core(String),
}

pub fn encode_csv(labels: &LabelMap) -> String {
    let w = labels.width();
    let mut out = String::new();
    for row in labels.labels().chunks(w) {
        for (i, l) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&l.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn write_label_map(
    labels: &LabelMap,
    path: &Path,
    format: LabelFormat,
) -> Result<(), LabelIoError> {
    let bytes = match format {
        LabelFormat::Pgm16 => {
            let mut samples = Vec::with_capacity(labels.len());
            for &l in labels.labels() {
                if l > u32::from(u16::MAX) {
                    return Err(LabelIoError::LabelOverflow { label: l });
                }
                samples.push(l as u16);
            }
            pnm::encode_pgm16(labels.width(), labels.height(), &samples)
        }
        LabelFormat::Csv => encode_csv(labels).into_bytes(),
    };
    fs::write(path, bytes)
        .map_err(|source| LabelIoError::Write { path: path.display().to_string(), source })
}

pub fn decode_csv(text: &str) -> Result<LabelMap, LabelIoError> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for token in line.split(',') {
            let value = token.trim().parse::<u32>().map_err(|_| LabelIoError::CsvToken {
                line: line_idx + 1,
                what: format!("'{token}' is not a label id"),
            })?;
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(LabelIoError::CsvShape {
                    line: line_idx + 1,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    let height = rows.len();
    if height == 0 {
        return Err(LabelIoError::Empty);
    }
    let width = rows[0].len();
    let labels = rows.into_iter().flatten().collect();
    LabelMap::new(width, height, labels).map_err(|e| LabelIoError::Core(e.to_string()))
}

/// Reads a label map, sniffing the format from the content (P5 magic → PGM16,
/// anything else → CSV).
pub fn read_label_map(path: &Path) -> Result<LabelMap, LabelIoError> {
    let bytes = fs::read(path)
        .map_err(|source| LabelIoError::Read { path: path.display().to_string(), source })?;
    if bytes.starts_with(b"P5") {
        let (w, h, samples) = pnm::decode_pgm16(&bytes)?;
        let labels = samples.into_iter().map(u32::from).collect();
        LabelMap::new(w, h, labels).map_err(|e| LabelIoError::Core(e.to_string()))
    } else {
        let text = String::from_utf8_lossy(&bytes);
        decode_csv(&text)
    }
}

/// Picks the on-disk format from the file extension: `.csv` → CSV, anything
/// else → 16-bit PGM.
pub fn format_for_path(path: &Path) -> LabelFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => LabelFormat::Csv,
        _ => LabelFormat::Pgm16,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use tempfile::tempdir;

    fn map(w: usize, h: usize, labels: Vec<u32>) -> LabelMap {
        LabelMap::new(w, h, labels).unwrap()
    }

    #[test]
    fn csv_body_is_exact() {
        let labels = map(2, 2, vec![0, 1, 2, 3]);
        assert_eq!(encode_csv(&labels), "0,1\n2,3\n");
    }

    #[test]
    fn csv_round_trips_via_disk() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        let labels = map(3, 2, vec![5, 0, 2, 2, 1, 7]);
        write_label_map(&labels, &path, LabelFormat::Csv).unwrap();
        assert_eq!(read_label_map(&path).unwrap(), labels);
    }

    #[test]
    fn pgm16_round_trips_via_disk() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("labels.pgm");
        let labels = map(4, 3, (0..12).map(|i| i * 999).collect());
        write_label_map(&labels, &path, LabelFormat::Pgm16).unwrap();
        assert_eq!(read_label_map(&path).unwrap(), labels);
    }

    #[test]
    fn pgm16_rejects_wide_labels() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("labels.pgm");
        let labels = map(2, 1, vec![0, 70_000]);
        match write_label_map(&labels, &path, LabelFormat::Pgm16) {
            Err(LabelIoError::LabelOverflow { label: 70_000 }) => {}
            other => panic!("expected LabelOverflow, got {other:?}"),
        }
    }

    #[test]
    fn truncated_csv_reports_dimension_mismatch() {
        match decode_csv("0,1,2\n3,4\n") {
            Err(LabelIoError::CsvShape { line: 2, expected: 3, found: 2 }) => {}
            other => panic!("expected CsvShape, got {other:?}"),
        }
    }

    #[test]
    fn format_is_inferred_from_extension() {
        assert_eq!(format_for_path(Path::new("a.csv")), LabelFormat::Csv);
        assert_eq!(format_for_path(Path::new("a.CSV")), LabelFormat::Csv);
        assert_eq!(format_for_path(Path::new("a.pgm")), LabelFormat::Pgm16);
        assert_eq!(format_for_path(Path::new("a")), LabelFormat::Pgm16);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn both_formats_round_trip(
            (w, h) in (1usize..12, 1usize..12),
            seed in 0u32..1000,
        ) {
            let labels = map(w, h, (0..w * h).map(|i| (i as u32 * 31 + seed) % 65536).collect());
            let dir = tempdir().unwrap();
            for (name, format) in [("l.pgm", LabelFormat::Pgm16), ("l.csv", LabelFormat::Csv)] {
                let path = dir.path().join(name);
                write_label_map(&labels, &path, format).unwrap();
                prop_assert_eq!(&read_label_map(&path).unwrap(), &labels);
            }
        }
    }
}
