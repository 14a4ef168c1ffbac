//! sRGB → CIELAB conversion (standard transfer function, D65 white).

use crate::imagecore::{Feature, FeatureImage, RawImage};

// sRGB (linear) → XYZ, D65 reference white.
const M: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];
const WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];

// Lab components are snapped to multiples of 2^-20 so that superpixel sums —
// bounded by count * 2^8 / 2^-20 < 2^53 — stay exact under add/remove.
const QUANT: f64 = 1024.0 * 1024.0;

fn srgb_to_linear(c: u8) -> f64 {
    let c = c as f64 / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA_CUBED: f64 = 216.0 / 24389.0; // (6/29)^3
    if t > DELTA_CUBED {
        t.cbrt()
    } else {
        t * (841.0 / 108.0) + 4.0 / 29.0
    }
}

fn quantize(v: f64) -> f64 {
    (v * QUANT).round() / QUANT
}

/// Converts one sRGB triple to CIELAB with L in [0, 100].
pub fn srgb_to_lab(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let (lr, lg, lb) = (srgb_to_linear(r), srgb_to_linear(g), srgb_to_linear(b));
    let x = M[0][0] * lr + M[0][1] * lg + M[0][2] * lb;
    let y = M[1][0] * lr + M[1][1] * lg + M[1][2] * lb;
    let z = M[2][0] * lr + M[2][1] * lg + M[2][2] * lb;
    let fx = lab_f(x / WHITE[0]);
    let fy = lab_f(y / WHITE[1]);
    let fz = lab_f(z / WHITE[2]);
    let l = (116.0 * fy - 16.0).clamp(0.0, 100.0);
    (quantize(l), quantize(500.0 * (fx - fy)), quantize(200.0 * (fy - fz)))
}

/// Converts a raw sRGB image into the five-dimensional feature grid the
/// clustering operates in.
pub fn srgb_to_feature_image(img: &RawImage) -> FeatureImage {
    let (width, height) = (img.width(), img.height());
    let mut features = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let [r, g, b] = img.rgb(x, y);
            let (l, a, bb) = srgb_to_lab(r, g, b);
            features.push(Feature { l, a, b: bb, x: x as f64, y: y as f64 });
        }
    }
    FeatureImage::from_parts(width, height, features)
}
