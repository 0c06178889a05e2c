//! Certified square margins for the 5:3 rectangle family.
//!
//! For a graph `G` and `eps > 0` we want `δ > 0` such that every rectangle
//! `R` with `ℓ(R) ∈ [eps, 5]` whose centre lies within the bounding box of `G`
//! inflated by 5 has one of its 15 squares at distance `≥ δ` from `G`.
//!
//! The search runs over boxes of rectangle parameters (centre x, centre y,
//! base). For a parameter box, the union of all positions of a given square
//! is an axis-aligned hull, and `dist(hull, G)` bounds `dist(S, G)` from below
//! for every rectangle in the box. A box is settled once some square's hull
//! is at distance `≥ δ`; otherwise it is split. Hull distances are screened in
//! `f64` and every settling verdict is re-checked in exact rationals.
//!
//! Targets are tried on the fixed ladder `(3/4)^k`, so the result is a
//! certified lower bound on the optimal margin, not the optimum itself.

use num_traits::{One, Zero};

use super::super::geometry::rect::{box_graph_dist_sq, FloatGraph};
use crate::error::{Error, Result};
use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, Copy)]
pub struct MarginConfig {
    /// Maximum number of halvings per parameter.
    pub max_depth: u32,
    /// Work limit per target, in parameter boxes.
    pub max_boxes: usize,
    /// Smallest ladder target tried before giving up.
    pub min_exponent: u32,
}

impl MarginConfig {
    pub fn from_grid(grid: u32) -> Self {
        MarginConfig {
            max_depth: grid,
            max_boxes: 300_000,
            min_exponent: 120,
        }
    }
}

pub fn peak_margin(g: &PlFunction, eps: &Rational, grid: u32) -> Result<Rational> {
    peak_margin_with(g, eps, &MarginConfig::from_grid(grid))
}

#[derive(Clone)]
struct ParamBox {
    lo: [Rational; 3],
    hi: [Rational; 3],
    flo: [f64; 3],
    fhi: [f64; 3],
    depth: [u32; 3],
}

struct Search<'a> {
    g: &'a PlFunction,
    fg: FloatGraph,
    eps: Rational,
    feps: f64,
    // (left coefficient, right coefficient) per column and per row, relative to the centre
    col: Vec<(Rational, Rational)>,
    row: Vec<(Rational, Rational)>,
}

impl<'a> Search<'a> {
    fn new(g: &'a PlFunction, eps: &Rational) -> Self {
        let col = (0..5)
            .map(|i| (ratio(i, 5) - ratio(1, 2), ratio(i + 1, 5) - ratio(1, 2)))
            .collect();
        let row = (0..3)
            .map(|j| (ratio(j, 5) - ratio(3, 10), ratio(j + 1, 5) - ratio(3, 10)))
            .collect();
        Search {
            g,
            fg: FloatGraph::new(g),
            eps: eps.clone(),
            feps: rational::to_f64(eps),
            col,
            row,
        }
    }

    fn base_range_f64(&self, b: &ParamBox) -> Option<(f64, f64)> {
        let l0 = b.flo[2].max(self.feps);
        let l1 = b.fhi[2];
        (l1 >= self.feps).then_some((l0, l1))
    }

    fn hull_f64(c0: f64, c1: f64, l0: f64, l1: f64, k0: f64, k1: f64) -> (f64, f64) {
        (c0 + (k0 * l0).min(k0 * l1), c1 + (k1 * l0).max(k1 * l1))
    }

    fn hull_exact(
        c0: &Rational,
        c1: &Rational,
        l0: &Rational,
        l1: &Rational,
        k0: &Rational,
        k1: &Rational,
    ) -> (Rational, Rational) {
        let a = rational::min(&(k0 * l0), &(k0 * l1));
        let b = rational::max(&(k1 * l0), &(k1 * l1));
        (c0 + a, c1 + b)
    }

    /// Best square of the box in `f64`: `(index, distance)`.
    fn best_square(&self, b: &ParamBox, l0: f64, l1: f64) -> (usize, f64) {
        let mut best = (0, -1.0);
        for (j, (r0, r1)) in self.row.iter().enumerate() {
            let (k0, k1) = (rational::to_f64(r0), rational::to_f64(r1));
            let (y0, y1) = Self::hull_f64(b.flo[1], b.fhi[1], l0, l1, k0, k1);
            for (i, (c0, c1)) in self.col.iter().enumerate() {
                let (k0, k1) = (rational::to_f64(c0), rational::to_f64(c1));
                let (x0, x1) = Self::hull_f64(b.flo[0], b.fhi[0], l0, l1, k0, k1);
                let d = self.fg.box_dist(x0, x1, y0, y1);
                if d > best.1 {
                    best = (j * 5 + i, d);
                }
            }
        }
        best
    }

    fn confirm(&self, b: &ParamBox, square: usize, target_sq: &Rational) -> bool {
        let l0 = rational::max(&b.lo[2], &self.eps);
        let l1 = &b.hi[2];
        let (c0, c1) = &self.col[square % 5];
        let (r0, r1) = &self.row[square / 5];
        let (x0, x1) = Self::hull_exact(&b.lo[0], &b.hi[0], &l0, l1, c0, c1);
        let (y0, y1) = Self::hull_exact(&b.lo[1], &b.hi[1], &l0, l1, r0, r1);
        &box_graph_dist_sq(self.g, &x0, &x1, &y0, &y1) >= target_sq
    }

    fn certify(&self, root: &ParamBox, target: &Rational, cfg: &MarginConfig) -> bool {
        let t = rational::to_f64(target);
        let target_sq = target * target;
        let mut stack = vec![root.clone()];
        let mut work = 0usize;
        while let Some(b) = stack.pop() {
            work += 1;
            if work > cfg.max_boxes {
                return false;
            }
            let Some((l0, l1)) = self.base_range_f64(&b) else {
                continue;
            };
            let (sq, d) = self.best_square(&b, l0, l1);
            if d >= t * (1.0 + 1e-9) && self.confirm(&b, sq, &target_sq) {
                continue;
            }
            // split the widest parameter that still has depth left
            let widths = [
                b.fhi[0] - b.flo[0],
                b.fhi[1] - b.flo[1],
                (l1 - l0) * 0.8,
            ];
            let dim = (0..3)
                .filter(|&k| b.depth[k] < cfg.max_depth)
                .max_by(|&p, &q| widths[p].total_cmp(&widths[q]));
            let Some(dim) = dim else {
                return false;
            };
            let mid = (&b.lo[dim] + &b.hi[dim]) / int(2);
            let fmid = rational::to_f64(&mid);
            let mut left = b.clone();
            left.hi[dim] = mid.clone();
            left.fhi[dim] = fmid;
            left.depth[dim] += 1;
            let mut right = b;
            right.lo[dim] = mid;
            right.flo[dim] = fmid;
            right.depth[dim] += 1;
            stack.push(right);
            stack.push(left);
        }
        true
    }

    /// Minimum over a fixed sample of rectangles of the largest square distance;
    /// an upper bound on the optimal margin.
    fn sampled_upper_bound(&self, root: &ParamBox) -> f64 {
        let mut bases = Vec::new();
        let mut l = self.feps;
        while l <= 5.0 && bases.len() < 8 {
            bases.push(l);
            l *= 2.0;
        }
        let (gx0, gx1) = (root.flo[0] + 5.0, root.fhi[0] - 5.0);
        let (gy0, gy1) = (root.flo[1] + 5.0, root.fhi[1] - 5.0);
        let mut best = f64::INFINITY;
        for &l in &bases {
            let nx = 40usize;
            let ny = 24usize;
            for ix in 0..=nx {
                let cx = gx0 - l / 2.0 + (gx1 - gx0 + l) * ix as f64 / nx as f64;
                for iy in 0..=ny {
                    let cy = gy0 - l / 2.0 + (gy1 - gy0 + l) * iy as f64 / ny as f64;
                    let pb = ParamBox {
                        lo: root.lo.clone(),
                        hi: root.hi.clone(),
                        flo: [cx, cy, l],
                        fhi: [cx, cy, l],
                        depth: [0; 3],
                    };
                    let (_, d) = self.best_square(&pb, l, l);
                    best = best.min(d);
                }
            }
        }
        best
    }
}

pub fn peak_margin_with(g: &PlFunction, eps: &Rational, cfg: &MarginConfig) -> Result<Rational> {
    if eps <= &Rational::zero() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let five = int(5);
    if eps > &five {
        return Err(Error::InvalidArgument("eps must not exceed 5".into()));
    }
    let search = Search::new(g, eps);
    let (x0, x1) = g.domain();
    let lo = [x0 - &five, g.min_value() - &five, Rational::zero()];
    let hi = [x1 + &five, g.max_value() + &five, five.clone()];
    let root = ParamBox {
        flo: [
            rational::to_f64(&lo[0]),
            rational::to_f64(&lo[1]),
            rational::to_f64(&lo[2]),
        ],
        fhi: [
            rational::to_f64(&hi[0]),
            rational::to_f64(&hi[1]),
            rational::to_f64(&hi[2]),
        ],
        lo,
        hi,
        depth: [0; 3],
    };
    let upper = search.sampled_upper_bound(&root);
    let step = ratio(3, 4);
    let mut target = Rational::one();
    for _ in 0..=cfg.min_exponent {
        if rational::to_f64(&target) <= upper * (1.0 + 1e-9) && search.certify(&root, &target, cfg)
        {
            return Ok(target);
        }
        target *= &step;
    }
    Err(Error::MarginNotCertified(format!(
        "no target down to (3/4)^{} certified at depth {}",
        cfg.min_exponent, cfg.max_depth
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_line_margin_is_between_ladder_step_and_optimum() {
        // optimum for the segment y = 0 on [0,1] and l >= 1 is 1/10
        let g = PlFunction::constant(int(0), int(1), int(0)).unwrap();
        let d = peak_margin(&g, &int(1), 12).unwrap();
        assert!(d <= ratio(1, 10), "certified {d} exceeds the optimum");
        assert!(d >= ratio(1, 20), "certified {d} is too weak");
    }

    #[test]
    fn rejects_bad_eps() {
        let g = PlFunction::constant(int(0), int(1), int(0)).unwrap();
        assert!(peak_margin(&g, &int(0), 8).is_err());
    }
}
