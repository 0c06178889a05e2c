//! Minimal standalone SVG plots: polylines in data coordinates, optional
//! square and ball overlays, axes along the data bounding box.

use std::fmt::Write;

use anyhow::{bail, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 40.0;
/// Polylines longer than this are thinned by keeping extrema per pixel column.
const MAX_POINTS: usize = 20_000;

#[derive(Debug, Clone, Default)]
pub struct Overlay {
    /// `(x, y, side)` of the lower-left corner.
    pub squares: Vec<(f64, f64, f64)>,
    /// `(cx, cy, r)`.
    pub balls: Vec<(f64, f64, f64)>,
}

struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) * self.sx
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) * self.sy
    }
}

fn thin(series: &[(f64, f64)], x0: f64, x1: f64) -> Vec<(f64, f64)> {
    if series.len() <= MAX_POINTS {
        return series.to_vec();
    }
    let cols = (WIDTH - 2.0 * MARGIN) as usize * 2;
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(cols * 4);
    let mut i = 0;
    while i < series.len() {
        let col = (((series[i].0 - x0) / (x1 - x0).max(f64::MIN_POSITIVE)) * cols as f64) as i64;
        let start = i;
        let (mut lo, mut hi) = (i, i);
        while i < series.len() && (((series[i].0 - x0) / (x1 - x0).max(f64::MIN_POSITIVE)) * cols as f64) as i64 == col {
            if series[i].1 < series[lo].1 {
                lo = i;
            }
            if series[i].1 > series[hi].1 {
                hi = i;
            }
            i += 1;
        }
        let mut keep = vec![start, lo, hi, i - 1];
        keep.sort_unstable();
        keep.dedup();
        out.extend(keep.into_iter().map(|k| series[k]));
    }
    out
}

pub fn render_svg(series: &[Vec<(f64, f64)>], overlay: &Overlay) -> Result<String> {
    if series.iter().all(|s| s.is_empty()) {
        bail!("nothing to plot");
    }
    let mut xs: Vec<f64> = series.iter().flatten().map(|p| p.0).collect();
    let mut ys: Vec<f64> = series.iter().flatten().map(|p| p.1).collect();
    for &(x, y, s) in &overlay.squares {
        xs.extend([x, x + s]);
        ys.extend([y, y + s]);
    }
    for &(x, y, r) in &overlay.balls {
        xs.extend([x - r, x + r]);
        ys.extend([y - r, y + r]);
    }
    if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
        bail!("non-finite coordinates");
    }
    let (x0, x1) = (xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = (ys.iter().copied().fold(f64::INFINITY, f64::min), ys.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let span_x = (x1 - x0).max(1e-12);
    let span_y = (y1 - y0).max(1e-12);
    let f = Frame {
        x0,
        y0,
        sx: (WIDTH - 2.0 * MARGIN) / span_x,
        sy: (HEIGHT - 2.0 * MARGIN) / span_y,
    };
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" style="background:white">"#)?;
    let (bx, by) = (f.px(x0), f.py(y0));
    writeln!(s, r#"<line class="axis" x1="{bx:.3}" y1="{by:.3}" x2="{:.3}" y2="{by:.3}" stroke="black"/>"#, f.px(x1))?;
    writeln!(s, r#"<line class="axis" x1="{bx:.3}" y1="{by:.3}" x2="{bx:.3}" y2="{:.3}" stroke="black"/>"#, f.py(y1))?;
    writeln!(s, r#"<text x="{bx:.3}" y="{:.3}" font-size="12">{x0:.4}</text>"#, by + 16.0)?;
    writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="12" text-anchor="end">{x1:.4}</text>"#, f.px(x1), by + 16.0)?;
    writeln!(s, r#"<text x="{:.3}" y="{by:.3}" font-size="12" text-anchor="end">{y0:.4}</text>"#, bx - 4.0)?;
    writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="12" text-anchor="end">{y1:.4}</text>"#, bx - 4.0, f.py(y1) + 4.0)?;
    for pts in series.iter().filter(|p| !p.is_empty()) {
        let mut attr = String::new();
        for (i, &(x, y)) in thin(pts, x0, x1).iter().enumerate() {
            if i > 0 {
                attr.push(' ');
            }
            write!(attr, "{:.3},{:.3}", f.px(x), f.py(y))?;
        }
        writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points="{attr}"/>"#)?;
    }
    for &(x, y, side) in &overlay.squares {
        writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="orange" fill-opacity="0.4" stroke="darkorange"/>"#,
            f.px(x),
            f.py(y + side),
            side * f.sx,
            side * f.sy
        )?;
    }
    for &(x, y, r) in &overlay.balls {
        writeln!(
            s,
            r#"<ellipse cx="{:.3}" cy="{:.3}" rx="{:.3}" ry="{:.3}" fill="none" stroke="crimson"/>"#,
            f.px(x),
            f.py(y),
            r * f.sx,
            r * f.sy
        )?;
    }
    s.push_str("</svg>\n");
    Ok(s)
}
