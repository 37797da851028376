//! Minimal PNG renderings of CSV outputs. These are previews, not figures.

use super::RunnerError;
use image::{Rgb, RgbImage};
use std::path::Path;

const WIDTH: u32 = 640;
const HEIGHT: u32 = 400;
const MARGIN: u32 = 30;
const PALETTE: [[u8; 3]; 6] = [[31, 119, 180], [255, 127, 14], [44, 160, 44], [214, 39, 40], [148, 103, 189], [23, 190, 207]];

fn finite_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        return None;
    }
    if hi == lo { Some((lo - 0.5, hi + 0.5)) } else { Some((lo, hi)) }
}

fn save(img: &RgbImage, path: &Path) -> Result<(), RunnerError> {
    img.save(path).map_err(|e| RunnerError::Io(format!("{}: {e}", path.display())))
}

/// Line plot of one or more (x, y) curves sharing axes.
pub fn line_plot(path: &Path, curves: &[(&[f64], &[f64])]) -> Result<(), RunnerError> {
    let mut img = RgbImage::from_pixel(WIDTH, HEIGHT, Rgb([255, 255, 255]));
    let xs = finite_range(curves.iter().flat_map(|c| c.0.iter().copied()));
    let ys = finite_range(curves.iter().flat_map(|c| c.1.iter().copied()));
    let (Some((x0, x1)), Some((y0, y1))) = (xs, ys) else {
        return save(&img, path);
    };
    let (w, h) = ((WIDTH - 2 * MARGIN) as f64, (HEIGHT - 2 * MARGIN) as f64);
    let px = |x: f64| MARGIN as f64 + (x - x0) / (x1 - x0) * w;
    let py = |y: f64| (HEIGHT - MARGIN) as f64 - (y - y0) / (y1 - y0) * h;
    for x in MARGIN..=WIDTH - MARGIN {
        img.put_pixel(x, HEIGHT - MARGIN, Rgb([0, 0, 0]));
        img.put_pixel(x, MARGIN, Rgb([0, 0, 0]));
    }
    for y in MARGIN..=HEIGHT - MARGIN {
        img.put_pixel(MARGIN, y, Rgb([0, 0, 0]));
        img.put_pixel(WIDTH - MARGIN, y, Rgb([0, 0, 0]));
    }
    for (k, (x, y)) in curves.iter().enumerate() {
        let color = Rgb(PALETTE[k % PALETTE.len()]);
        let pts: Vec<(f64, f64)> =
            x.iter().zip(y.iter()).filter(|(a, b)| a.is_finite() && b.is_finite()).map(|(&a, &b)| (px(a), py(b))).collect();
        for seg in pts.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let n = ((b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil() as usize).max(1);
            for s in 0..=n {
                let f = s as f64 / n as f64;
                let (u, v) = (a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1));
                if u >= 0.0 && v >= 0.0 && (u as u32) < WIDTH && (v as u32) < HEIGHT {
                    img.put_pixel(u as u32, v as u32, color);
                }
            }
        }
    }
    save(&img, path)
}

/// Heat map of a row-major `rows × cols` grid; row 0 at the bottom.
/// With `diverging`, zero is white, positive red and negative blue.
pub fn heat_map(path: &Path, values: &[f64], rows: usize, cols: usize, diverging: bool) -> Result<(), RunnerError> {
    if rows == 0 || cols == 0 || values.len() != rows * cols {
        return Err(RunnerError::Io(format!("heat map needs {rows}×{cols} values, got {}", values.len())));
    }
    let (lo, hi) = finite_range(values.iter().copied()).unwrap_or((0.0, 1.0));
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let color = |v: f64| -> Rgb<u8> {
        if !v.is_finite() {
            return Rgb([0, 0, 0]);
        }
        if diverging {
            let f = (v / scale).clamp(-1.0, 1.0);
            let fade = (255.0 * (1.0 - f.abs())) as u8;
            if f >= 0.0 { Rgb([255, fade, fade]) } else { Rgb([fade, fade, 255]) }
        } else {
            let f = ((v - lo) / (hi - lo).max(f64::MIN_POSITIVE)).clamp(0.0, 1.0);
            Rgb([(255.0 * f) as u8, (255.0 * (1.0 - (2.0 * f - 1.0).abs())) as u8, (255.0 * (1.0 - f)) as u8])
        }
    };
    let img = RgbImage::from_fn(WIDTH, HEIGHT, |x, y| {
        let c = ((x as usize * cols) / WIDTH as usize).min(cols - 1);
        let r = (((HEIGHT - 1 - y) as usize * rows) / HEIGHT as usize).min(rows - 1);
        color(values[r * cols + c])
    });
    save(&img, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_pngs() {
        let dir = tempfile::tempdir().unwrap();
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        line_plot(&dir.path().join("l.png"), &[(&x, &y), (&x, &x)]).unwrap();
        heat_map(&dir.path().join("h.png"), &y[..48], 6, 8, true).unwrap();
        let img = image::open(dir.path().join("h.png")).unwrap();
        assert_eq!((img.width(), img.height()), (WIDTH, HEIGHT));
        assert!(heat_map(&dir.path().join("bad.png"), &y, 6, 8, false).is_err());
    }
}
