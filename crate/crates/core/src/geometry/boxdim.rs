//! Box-counting dimension of planar samples over dyadic grids.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::pl::PlFunction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDimension {
    pub slope: f64,
    /// `(side, occupied boxes)` from coarse to fine.
    pub counts: Vec<(f64, usize)>,
}

pub fn box_count(samples: &[(f64, f64)], side: f64) -> usize {
    samples
        .iter()
        .map(|&(x, y)| ((x / side).floor() as i64, (y / side).floor() as i64))
        .collect::<HashSet<_>>()
        .len()
}

/// Least-squares slope of `log N(s)` against `log(1/s)` for the dyadic sides
/// `s = 2^{-k}` within `[side_min, side_max]`.
pub fn box_dimension(samples: &[(f64, f64)], side_min: f64, side_max: f64) -> Result<BoxDimension> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    if !(side_min > 0.0 && side_min <= side_max) {
        return Err(Error::DegenerateScales(format!("[{side_min}, {side_max}]")));
    }
    let k_lo = (-side_max.log2()).ceil() as i32;
    let k_hi = (-side_min.log2()).floor() as i32;
    if k_hi - k_lo < 1 {
        return Err(Error::DegenerateScales(format!(
            "fewer than two dyadic sides in [{side_min}, {side_max}]"
        )));
    }
    let counts: Vec<(f64, usize)> = (k_lo..=k_hi)
        .map(|k| {
            let s = 2f64.powi(-k);
            (s, box_count(samples, s))
        })
        .collect();
    let pts: Vec<(f64, f64)> = counts.iter().map(|&(s, n)| (-s.ln(), (n as f64).ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(BoxDimension {
        slope: sxy / sxx,
        counts,
    })
}

/// Points along the graph with consecutive gaps at most `spacing`
/// (breakpoints included).
pub fn sample_graph(f: &PlFunction, spacing: f64) -> Vec<(f64, f64)> {
    let pts = f.to_f64_points();
    let mut out = Vec::with_capacity(pts.len());
    for w in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
        let n = ((len / spacing).ceil() as usize).max(1);
        for i in 0..n {
            let t = i as f64 / n as f64;
            out.push((x0 + t * (x1 - x0), y0 + t * (y1 - y0)));
        }
    }
    if let Some(&last) = pts.last() {
        out.push(last);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_and_square() {
        let seg: Vec<(f64, f64)> = (0..=100_000).map(|i| (i as f64 / 1e5 * 0.8, 0.3 + 0.4 * i as f64 / 1e5)).collect();
        let d = box_dimension(&seg, 1.0 / 1024.0, 0.25).unwrap();
        assert!((0.95..=1.05).contains(&d.slope), "{}", d.slope);
        let sq: Vec<(f64, f64)> = (0..400)
            .flat_map(|i| (0..400).map(move |j| (i as f64 / 400.0 + 1e-4, j as f64 / 400.0 + 1e-4)))
            .collect();
        let d = box_dimension(&sq, 1.0 / 128.0, 0.25).unwrap();
        assert!((1.9..=2.1).contains(&d.slope), "{}", d.slope);
    }

    #[test]
    fn degenerate_ranges() {
        let s = vec![(0.0, 0.0)];
        assert!(matches!(box_dimension(&s, 0.3, 0.4), Err(Error::DegenerateScales(_))));
        assert!(box_dimension(&s, 0.0, 1.0).is_err());
    }

    #[test]
    fn union_counts_dominate_parts() {
        let a: Vec<(f64, f64)> = (0..500).map(|i| (i as f64 / 500.0, 0.1)).collect();
        let b: Vec<(f64, f64)> = (0..500).map(|i| (0.5, i as f64 / 500.0)).collect();
        let u: Vec<(f64, f64)> = a.iter().chain(&b).copied().collect();
        for k in 1..8 {
            let s = 2f64.powi(-k);
            assert!(box_count(&u, s) >= box_count(&a, s).max(box_count(&b, s)));
        }
    }
}
