//! Escape-time images written as binary PGM.

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use sflab::{Rect64, SfFunction64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Palette {
    Grayscale,
    LogIteration,
}

#[derive(Clone, Copy, Debug)]
pub struct RenderConfig {
    pub window: Rect64,
    pub width: usize,
    pub height: usize,
    pub max_iter: usize,
    pub escape_radius: f64,
    pub palette: Palette,
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.window.x0 < self.window.x1 && self.window.y0 < self.window.y1) {
            return Err("window needs x0 < x1 and y0 < y1".into());
        }
        if self.width == 0 || self.height == 0 {
            return Err("resolution must be at least 1x1".into());
        }
        if self.max_iter == 0 {
            return Err("max-iter must be at least 1".into());
        }
        if !(self.escape_radius > 0.0) {
            return Err("escape radius must be positive".into());
        }
        Ok(())
    }

    /// Center of pixel `(col, row)`; row 0 is the top edge `y1`.
    pub fn pixel_center(&self, col: usize, row: usize) -> Complex64 {
        let w = &self.window;
        let x = w.x0 + (col as f64 + 0.5) * (w.x1 - w.x0) / self.width as f64;
        let y = w.y1 - (row as f64 + 0.5) * (w.y1 - w.y0) / self.height as f64;
        Complex64::new(x, y)
    }
}

/// First `k <= max_iter` with `|f^k(z)| > escape_radius`. A failed evaluation
/// (overflow) counts as escaping at that step.
pub fn escape_index(f: &SfFunction64, z0: Complex64, max_iter: usize, escape_radius: f64) -> Option<usize> {
    let mut z = z0;
    for k in 0..=max_iter {
        if !(z.norm() <= escape_radius) {
            return Some(k);
        }
        if k == max_iter {
            break;
        }
        match f.evaluate(z) {
            Ok(w) => z = w,
            Err(_) => return Some(k + 1),
        }
    }
    None
}

/// Gray level for an escape index: 255 at `k = 0` down to 1 at `k = max_iter`.
pub fn shade(k: usize, max_iter: usize, palette: Palette) -> u8 {
    let k = k.min(max_iter);
    let level = match palette {
        Palette::Grayscale => 1 + 254 * (max_iter - k) / max_iter,
        Palette::LogIteration => {
            let t = ((1 + k) as f64).ln() / ((1 + max_iter) as f64).ln();
            1 + (254.0 * (1.0 - t)).round() as usize
        }
    };
    level as u8
}

/// Row-major 8-bit image; pixels whose orbit stays bounded are 0.
pub fn render_escape(f: &SfFunction64, cfg: &RenderConfig) -> Vec<u8> {
    let mut pixels = vec![0u8; cfg.width * cfg.height];
    pixels.par_chunks_mut(cfg.width).enumerate().for_each(|(row, line)| {
        for (col, px) in line.iter_mut().enumerate() {
            let z = cfg.pixel_center(col, row);
            *px = match escape_index(f, z, cfg.max_iter, cfg.escape_radius) {
                Some(k) => shade(k, cfg.max_iter, cfg.palette),
                None => 0,
            };
        }
    });
    pixels
}

pub fn write_pgm<W: Write>(mut out: W, width: usize, height: usize, pixels: &[u8]) -> io::Result<()> {
    write!(out, "P5\n{width} {height}\n255\n")?;
    out.write_all(pixels)?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shade_is_monotone() {
        for palette in [Palette::Grayscale, Palette::LogIteration] {
            let levels: Vec<u8> = (0..=100).map(|k| shade(k, 100, palette)).collect();
            assert_eq!(levels[0], 255);
            assert_eq!(levels[100], 1);
            assert!(levels.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn pixel_centers() {
        let cfg = RenderConfig {
            window: Rect64 { x0: -2.0, x1: 2.0, y0: -1.0, y1: 1.0 },
            width: 4,
            height: 2,
            max_iter: 10,
            escape_radius: 10.0,
            palette: Palette::Grayscale,
        };
        assert_eq!(cfg.pixel_center(0, 0), Complex64::new(-1.5, 0.5));
        assert_eq!(cfg.pixel_center(3, 1), Complex64::new(1.5, -0.5));
    }

    #[test]
    fn pgm_header() {
        let mut buf = Vec::new();
        write_pgm(&mut buf, 2, 1, &[0, 255]).unwrap();
        assert_eq!(buf, b"P5\n2 1\n255\n\x00\xff");
    }
}
