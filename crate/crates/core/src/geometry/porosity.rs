//! Strong-porosity estimate for sampled planar sets: for a centre `x` and
//! radius `r`, the largest `q` such that some `B(y, q r) ⊆ B(x, r)` stays
//! farther than the sample resolution from every sample.

use rayon::prelude::*;
use rstar::RTree;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const POROSITY_CAP: f64 = 0.5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PorosityConfig {
    /// Grid points per axis for the initial search over `y`.
    pub grid: u32,
    /// Pattern-search rounds after the grid.
    pub refine: u32,
    /// Upper bound on the distance from any point of the set to the nearest sample.
    pub resolution: f64,
    /// Also probe centres shifted by `r/2` along the axes.
    pub perturb: bool,
}

impl Default for PorosityConfig {
    fn default() -> Self {
        PorosityConfig {
            grid: 24,
            refine: 24,
            resolution: 0.0,
            perturb: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmptyBall {
    pub center: (f64, f64),
    pub r: f64,
    /// Centre and ratio of the empty sub-ball.
    pub y: (f64, f64),
    pub q: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PorosityReport {
    pub radii: Vec<f64>,
    /// Worst (smallest) `q` per radius.
    pub per_scale: Vec<f64>,
    pub p: f64,
    pub resolution: f64,
    pub rows: Vec<EmptyBall>,
}

struct Index {
    tree: RTree<[f64; 2]>,
}

impl Index {
    fn dist(&self, p: (f64, f64)) -> f64 {
        self.tree
            .nearest_neighbor(&[p.0, p.1])
            .map(|s| ((s[0] - p.0).powi(2) + (s[1] - p.1).powi(2)).sqrt())
            .unwrap_or(f64::INFINITY)
    }
}

fn q_at(idx: &Index, x: (f64, f64), r: f64, rho: f64, y: (f64, f64)) -> f64 {
    let off = ((y.0 - x.0).powi(2) + (y.1 - x.1).powi(2)).sqrt();
    ((r - off).min(idx.dist(y) - rho) / r).min(POROSITY_CAP)
}

fn best_ball(idx: &Index, x: (f64, f64), r: f64, cfg: &PorosityConfig) -> EmptyBall {
    let g = cfg.grid.max(2) as i64;
    let rho = cfg.resolution;
    let mut cands: Vec<(f64, (f64, f64))> = Vec::with_capacity((g * g) as usize);
    for i in 0..=g {
        for j in 0..=g {
            let y = (x.0 - r + 2.0 * r * i as f64 / g as f64, x.1 - r + 2.0 * r * j as f64 / g as f64);
            cands.push((q_at(idx, x, r, rho, y), y));
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = cands[0];
    for &(q0, y0) in cands.iter().take(4) {
        let (mut q, mut y) = (q0, y0);
        let mut step = r / g as f64;
        for _ in 0..cfg.refine {
            let mut moved = false;
            for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (0.7, 0.7), (-0.7, 0.7), (0.7, -0.7), (-0.7, -0.7)] {
                let t = (y.0 + dx * step, y.1 + dy * step);
                let qt = q_at(idx, x, r, rho, t);
                if qt > q {
                    q = qt;
                    y = t;
                    moved = true;
                }
            }
            if !moved {
                step /= 2.0;
            }
        }
        if q > best.0 {
            best = (q, y);
        }
    }
    EmptyBall {
        center: x,
        r,
        y: best.1,
        q: best.0.max(0.0),
    }
}

pub fn porosity_estimate(
    samples: &[(f64, f64)],
    centers: &[(f64, f64)],
    radii: &[f64],
    cfg: &PorosityConfig,
) -> Result<PorosityReport> {
    if samples.is_empty() || centers.is_empty() || radii.is_empty() {
        return Err(Error::InvalidArgument("samples, centres and radii must be nonempty".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidArgument("radii must be positive".into()));
    }
    let idx = Index {
        tree: RTree::bulk_load(samples.iter().map(|&(x, y)| [x, y]).collect()),
    };
    let mut probes: Vec<(usize, (f64, f64))> = Vec::new();
    for (ri, &r) in radii.iter().enumerate() {
        for &c in centers {
            probes.push((ri, c));
            if cfg.perturb {
                for (dx, dy) in [(0.5, 0.0), (-0.5, 0.0), (0.0, 0.5), (0.0, -0.5)] {
                    probes.push((ri, (c.0 + dx * r, c.1 + dy * r)));
                }
            }
        }
    }
    let rows: Vec<EmptyBall> = probes
        .par_iter()
        .map(|&(ri, c)| best_ball(&idx, c, radii[ri], cfg))
        .collect();
    let per_scale: Vec<f64> = radii
        .iter()
        .map(|&r| {
            rows.iter()
                .filter(|b| b.r == r)
                .map(|b| b.q)
                .fold(POROSITY_CAP, f64::min)
        })
        .collect();
    let p = per_scale.iter().copied().fold(POROSITY_CAP, f64::min);
    Ok(PorosityReport {
        radii: radii.to_vec(),
        per_scale,
        p,
        resolution: cfg.resolution,
        rows,
    })
}

/// Brute-force re-check of a reported ball against every sample.
pub fn verify_empty_ball(samples: &[(f64, f64)], ball: &EmptyBall, resolution: f64) -> bool {
    let rad = ball.q * ball.r;
    let off = ((ball.y.0 - ball.center.0).powi(2) + (ball.y.1 - ball.center.1).powi(2)).sqrt();
    off + rad <= ball.r * (1.0 + 1e-12)
        && samples
            .iter()
            .all(|s| ((s.0 - ball.y.0).powi(2) + (s.1 - ball.y.1).powi(2)).sqrt() >= rad + resolution - 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Vec<(f64, f64)> {
        (0..=n).map(|i| (i as f64 / n as f64, 0.0)).collect()
    }

    #[test]
    fn horizontal_segment_is_half_porous() {
        let s = line(20_000);
        let cfg = PorosityConfig {
            resolution: 0.5 / 20_000.0,
            ..Default::default()
        };
        let rep = porosity_estimate(&s, &[(0.5, 0.0), (0.25, 0.0)], &[0.1, 0.01], &cfg).unwrap();
        assert!(rep.p > 0.49 && rep.p <= 0.5, "{}", rep.p);
        for b in &rep.rows {
            assert!(verify_empty_ball(&s, b, cfg.resolution));
        }
    }

    #[test]
    fn filled_disk_is_not_porous() {
        let rho = 0.01;
        let mut s = Vec::new();
        for i in -100..=100 {
            for j in -100..=100 {
                let p = (i as f64 * rho, j as f64 * rho);
                if p.0 * p.0 + p.1 * p.1 <= 1.0 {
                    s.push(p);
                }
            }
        }
        let cfg = PorosityConfig {
            resolution: rho * 0.75,
            ..Default::default()
        };
        let rep = porosity_estimate(&s, &[(0.0, 0.0), (0.3, 0.1)], &[0.5], &cfg).unwrap();
        assert!(rep.p < 0.02, "{}", rep.p);
    }

    #[test]
    fn perturbed_centres_are_probed() {
        let s = line(1000);
        let cfg = PorosityConfig {
            resolution: 0.0005,
            perturb: true,
            ..Default::default()
        };
        let rep = porosity_estimate(&s, &[(0.5, 0.0)], &[0.1], &cfg).unwrap();
        assert_eq!(rep.rows.len(), 5);
        assert!(rep.p > 0.45);
    }
}
