//! Binary Netpbm codecs: PPM (P6, maxval 255) and 16-bit PGM (P5, maxval
//! 65535). Parse errors report the byte offset they occurred at.

use std::fs;
use std::path::Path;

use flic_core::imagecore::RawImage;

#[derive(Debug, thiserror::Error)]
pub enum PnmError {
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
    #[error("bad magic number at byte offset 0: expected {expected}")]
    Magic { expected: &'static str },
    #[error("malformed header at byte offset {offset}: {what}")]
    Header { offset: usize, what: String },
    #[error("unsupported maxval {maxval} at byte offset {offset}: only {expected} is supported")]
    UnsupportedMaxval { offset: usize, maxval: u64, expected: u16 },
    #[error(
        "truncated pixel data at byte offset {offset}: expected {expected} bytes, found {found}"
    )]
    Truncated { offset: usize, expected: usize, found: usize },
    #[error("invalid image: {0}")]
    Image(String),
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    /// Skips whitespace and `#` comments, which the header allows between
    /// tokens.
    fn skip_separators(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn unsigned(&mut self, what: &str) -> Result<(u64, usize), PnmError> {
        self.skip_separators();
        let start = self.pos;
        let mut value: u64 = 0;
        let mut digits = 0;
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_digit() {
                value = value
                    .saturating_mul(10)
                    .saturating_add(u64::from(b - b'0'));
                digits += 1;
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits == 0 {
            return Err(PnmError::Header {
                offset: start,
                what: format!("expected {what}, found no digits"),
            });
        }
        Ok((value, start))
    }

    /// The single whitespace byte separating the header from pixel data.
    fn expect_single_whitespace(&mut self) -> Result<(), PnmError> {
        match self.data.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(PnmError::Header {
                offset: self.pos,
                what: "expected single whitespace byte before pixel data".into(),
            }),
        }
    }
}

fn parse_header<'a>(
    data: &'a [u8],
    magic: &'static str,
    maxval_expected: u16,
) -> Result<(usize, usize, Cursor<'a>), PnmError> {
    if data.len() < 2 || &data[..2] != magic.as_bytes() {
        return Err(PnmError::Magic { expected: magic });
    }
    let mut cursor = Cursor::new(data);
    cursor.pos = 2;
    let (width, woff) = cursor.unsigned("width")?;
    let (height, hoff) = cursor.unsigned("height")?;
    let (maxval, moff) = cursor.unsigned("maxval")?;
    if width == 0 {
        return Err(PnmError::Header { offset: woff, what: "width is zero".into() });
    }
    if height == 0 {
        return Err(PnmError::Header { offset: hoff, what: "height is zero".into() });
    }
    if maxval != u64::from(maxval_expected) {
        return Err(PnmError::UnsupportedMaxval {
            offset: moff,
            maxval,
            expected: maxval_expected,
        });
    }
    cursor.expect_single_whitespace()?;
    Ok((width as usize, height as usize, cursor))
}

/// Decodes a binary P6 PPM with maxval 255.
pub fn decode_ppm(data: &[u8]) -> Result<RawImage, PnmError> {
    let (width, height, cursor) = parse_header(data, "P6", 255)?;
    let expected = width * height * 3;
    let payload = &data[cursor.pos..];
    if payload.len() < expected {
        return Err(PnmError::Truncated {
            offset: cursor.pos,
            expected,
            found: payload.len(),
        });
    }
    RawImage::new(width, height, payload[..expected].to_vec())
        .map_err(|e| PnmError::Image(e.to_string()))
}

pub fn read_ppm(path: &Path) -> Result<RawImage, PnmError> {
    let data = fs::read(path)
        .map_err(|source| PnmError::Read { path: path.display().to_string(), source })?;
    decode_ppm(&data)
}

pub fn encode_ppm(img: &RawImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

pub fn write_ppm(path: &Path, img: &RawImage) -> Result<(), PnmError> {
    fs::write(path, encode_ppm(img))
        .map_err(|source| PnmError::Write { path: path.display().to_string(), source })
}

/// Decodes a binary P5 PGM with maxval 65535 (big-endian 16-bit samples).
pub fn decode_pgm16(data: &[u8]) -> Result<(usize, usize, Vec<u16>), PnmError> {
    let (width, height, cursor) = parse_header(data, "P5", 65535)?;
    let expected = width * height * 2;
    let payload = &data[cursor.pos..];
    if payload.len() < expected {
        return Err(PnmError::Truncated {
            offset: cursor.pos,
            expected,
            found: payload.len(),
        });
    }
    let samples = payload[..expected]
        .chunks_exact(2)
        .map(|pair| u16::from_be_bytes([pair[0], pair[1]]))
        .collect();
    Ok((width, height, samples))
}

pub fn encode_pgm16(width: usize, height: usize, samples: &[u16]) -> Vec<u8> {
    debug_assert_eq!(samples.len(), width * height);
    let mut out = format!("P5\n{width} {height}\n65535\n").into_bytes();
    for &s in samples {
        out.extend_from_slice(&s.to_be_bytes());
    }
    out
}
