//! Rectangles of aspect ratio 5:3, their 15 squares, and exact distances
//! between axis-aligned boxes and piecewise-linear graphs.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, ratio, Rational};

/// `[left, left + base] × [bottom, bottom + 3/5·base]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect53 {
    #[serde(with = "rational::serde_pq")]
    pub left: Rational,
    #[serde(with = "rational::serde_pq")]
    pub bottom: Rational,
    #[serde(with = "rational::serde_pq")]
    pub base: Rational,
}

/// Closed axis-aligned square `[x, x + side] × [y, y + side]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub y: Rational,
    #[serde(with = "rational::serde_pq")]
    pub side: Rational,
}

impl Rect53 {
    pub fn new(left: Rational, bottom: Rational, base: Rational) -> Result<Self> {
        if base <= Rational::zero() {
            return Err(Error::InvalidArgument("rectangle base must be positive".into()));
        }
        Ok(Rect53 { left, bottom, base })
    }

    pub fn height(&self) -> Rational {
        &self.base * ratio(3, 5)
    }

    pub fn right(&self) -> Rational {
        &self.left + &self.base
    }

    pub fn top(&self) -> Rational {
        &self.bottom + self.height()
    }

    pub fn area(&self) -> Rational {
        &self.base * self.height()
    }
}

impl Square {
    pub fn x1(&self) -> Rational {
        &self.x + &self.side
    }

    pub fn y1(&self) -> Rational {
        &self.y + &self.side
    }
}

/// The 15 squares, indexed `row * 5 + column` from the bottom-left corner.
pub fn squares_of_rect(r: &Rect53) -> Vec<Square> {
    let side = &r.base / Rational::from_integer(5.into());
    let mut out = Vec::with_capacity(15);
    for row in 0..3i64 {
        for col in 0..5i64 {
            out.push(Square {
                x: &r.left + &side * Rational::from_integer(col.into()),
                y: &r.bottom + &side * Rational::from_integer(row.into()),
                side: side.clone(),
            });
        }
    }
    out
}

/// Whether the graph of `g` meets the open square `(x0,x1) × (y0,y1)`.
pub fn graph_meets_open_box(
    g: &PlFunction,
    x0: &Rational,
    x1: &Rational,
    y0: &Rational,
    y1: &Rational,
) -> bool {
    let (d0, d1) = g.domain();
    let lo = rational::max(x0, d0);
    let hi = rational::min(x1, d1);
    if lo >= hi {
        return false;
    }
    let xs = g.breakpoints();
    let first = g.segment_of(&lo).unwrap();
    for seg in first..g.segments() {
        if &xs[seg] >= &hi {
            break;
        }
        let a = rational::max(&xs[seg], &lo);
        let b = rational::min(&xs[seg + 1], &hi);
        if a >= b {
            continue;
        }
        let ya = g.eval(&a).unwrap();
        let yb = g.eval(&b).unwrap();
        // values over the open x-interval (a, b)
        let (mn, mx) = if ya <= yb { (ya, yb) } else { (yb, ya) };
        let hit = if mn == mx {
            &mn > y0 && &mn < y1
        } else {
            &mn < y1 && &mx > y0
        };
        if hit {
            return true;
        }
    }
    false
}

/// Lowest index of a square whose interior misses the graph of `g`.
pub fn square_avoidance(g: &PlFunction, r: &Rect53) -> Option<usize> {
    squares_of_rect(r)
        .iter()
        .position(|s| !graph_meets_open_box(g, &s.x, &s.x1(), &s.y, &s.y1()))
}

/// Exact squared distance from the closed box to the graph of `g`.
pub fn box_graph_dist_sq(
    g: &PlFunction,
    x0: &Rational,
    x1: &Rational,
    y0: &Rational,
    y1: &Rational,
) -> Rational {
    let xs = g.breakpoints();
    let ys = g.values();
    let mut best: Option<Rational> = None;
    for seg in 0..g.segments() {
        // horizontal gap bounds the distance from below
        let gap = if &xs[seg + 1] < x0 {
            x0 - &xs[seg + 1]
        } else if &xs[seg] > x1 {
            &xs[seg] - x1
        } else {
            Rational::zero()
        };
        if let Some(b) = &best {
            if &(&gap * &gap) >= b {
                continue;
            }
        }
        let d = segment_box_dist_sq(
            (&xs[seg], &ys[seg]),
            (&xs[seg + 1], &ys[seg + 1]),
            x0,
            x1,
            y0,
            y1,
        );
        if d.is_zero() {
            return d;
        }
        best = Some(match best {
            Some(b) if b <= d => b,
            _ => d,
        });
    }
    best.unwrap_or_else(Rational::zero)
}

fn point_box_dist_sq(
    p: (&Rational, &Rational),
    x0: &Rational,
    x1: &Rational,
    y0: &Rational,
    y1: &Rational,
) -> Rational {
    let dx = if p.0 < x0 {
        x0 - p.0
    } else if p.0 > x1 {
        p.0 - x1
    } else {
        Rational::zero()
    };
    let dy = if p.1 < y0 {
        y0 - p.1
    } else if p.1 > y1 {
        p.1 - y1
    } else {
        Rational::zero()
    };
    &dx * &dx + &dy * &dy
}

fn point_segment_dist_sq(
    p: (&Rational, &Rational),
    a: (&Rational, &Rational),
    b: (&Rational, &Rational),
) -> Rational {
    let (ux, uy) = (b.0 - a.0, b.1 - a.1);
    let (wx, wy) = (p.0 - a.0, p.1 - a.1);
    let len2 = &ux * &ux + &uy * &uy;
    let mut t = (&wx * &ux + &wy * &uy) / &len2;
    if t < Rational::zero() {
        t = Rational::zero();
    } else if t > Rational::one() {
        t = Rational::one();
    }
    let dx = &wx - &t * &ux;
    let dy = &wy - &t * &uy;
    &dx * &dx + &dy * &dy
}

/// Squared distance between a graph segment (`a.x < b.x`) and a closed box.
pub fn segment_box_dist_sq(
    a: (&Rational, &Rational),
    b: (&Rational, &Rational),
    x0: &Rational,
    x1: &Rational,
    y0: &Rational,
    y1: &Rational,
) -> Rational {
    let lo = rational::max(a.0, x0);
    let hi = rational::min(b.0, x1);
    if lo <= hi {
        let at = |x: &Rational| a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0);
        let (ya, yb) = (at(&lo), at(&hi));
        let (mn, mx) = if ya <= yb { (ya, yb) } else { (yb, ya) };
        if &mn <= y1 && &mx >= y0 {
            return Rational::zero();
        }
    }
    let mut best = point_box_dist_sq(a, x0, x1, y0, y1);
    let d = point_box_dist_sq(b, x0, x1, y0, y1);
    if d < best {
        best = d;
    }
    for cx in [x0, x1] {
        for cy in [y0, y1] {
            let d = point_segment_dist_sq((cx, cy), a, b);
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// Float mirror of the graph used for fast screening.
#[derive(Debug, Clone)]
pub struct FloatGraph {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl FloatGraph {
    pub fn new(g: &PlFunction) -> Self {
        FloatGraph {
            xs: g.breakpoints().iter().map(rational::to_f64).collect(),
            ys: g.values().iter().map(rational::to_f64).collect(),
        }
    }

    /// Distance from the closed box to the graph (not squared).
    pub fn box_dist(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
        let mut best = f64::INFINITY;
        // segments are sorted by x; start near the box
        let start = self.xs.partition_point(|&x| x < x0).saturating_sub(1);
        let n = self.xs.len();
        // scan right
        for s in start..n - 1 {
            let gap = self.xs[s] - x1;
            if gap > 0.0 && gap >= best {
                break;
            }
            best = best.min(seg_box_dist_f64(
                (self.xs[s], self.ys[s]),
                (self.xs[s + 1], self.ys[s + 1]),
                x0,
                x1,
                y0,
                y1,
            ));
            if best == 0.0 {
                return 0.0;
            }
        }
        // scan left
        for s in (0..start).rev() {
            let gap = x0 - self.xs[s + 1];
            if gap > 0.0 && gap >= best {
                break;
            }
            best = best.min(seg_box_dist_f64(
                (self.xs[s], self.ys[s]),
                (self.xs[s + 1], self.ys[s + 1]),
                x0,
                x1,
                y0,
                y1,
            ));
            if best == 0.0 {
                return 0.0;
            }
        }
        best
    }
}

fn seg_box_dist_f64(a: (f64, f64), b: (f64, f64), x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let lo = a.0.max(x0);
    let hi = b.0.min(x1);
    if lo <= hi {
        let at = |x: f64| a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0);
        let (ya, yb) = (at(lo), at(hi));
        if ya.min(yb) <= y1 && ya.max(yb) >= y0 {
            return 0.0;
        }
    }
    let pb = |p: (f64, f64)| {
        let dx = (x0 - p.0).max(p.0 - x1).max(0.0);
        let dy = (y0 - p.1).max(p.1 - y1).max(0.0);
        dx.hypot(dy)
    };
    let ps = |p: (f64, f64)| {
        let (ux, uy) = (b.0 - a.0, b.1 - a.1);
        let (wx, wy) = (p.0 - a.0, p.1 - a.1);
        let t = ((wx * ux + wy * uy) / (ux * ux + uy * uy)).clamp(0.0, 1.0);
        (wx - t * ux).hypot(wy - t * uy)
    };
    let mut best = pb(a).min(pb(b));
    for cx in [x0, x1] {
        for cy in [y0, y1] {
            best = best.min(ps((cx, cy)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn unit_rect() -> Rect53 {
        Rect53::new(int(0), int(0), int(5)).unwrap()
    }

    #[test]
    fn squares_tile_the_rectangle() {
        let r = unit_rect();
        let sq = squares_of_rect(&r);
        assert_eq!(sq.len(), 15);
        for (k, s) in sq.iter().enumerate() {
            assert_eq!(s.side, int(1));
            assert_eq!(s.x, int((k % 5) as i64));
            assert_eq!(s.y, int((k / 5) as i64));
        }
        let odd = Rect53::new(ratio(-1, 7), ratio(2, 3), ratio(11, 13)).unwrap();
        let sq = squares_of_rect(&odd);
        assert_eq!(sq.len(), 15);
        let area: Rational = sq.iter().map(|s| &s.side * &s.side).sum();
        assert_eq!(area, odd.area());
        // pairwise interiors disjoint
        for i in 0..15 {
            for j in i + 1..15 {
                let (a, b) = (&sq[i], &sq[j]);
                let overlap_x = rational::min(&a.x1(), &b.x1()) > rational::max(&a.x, &b.x);
                let overlap_y = rational::min(&a.y1(), &b.y1()) > rational::max(&a.y, &b.y);
                assert!(!(overlap_x && overlap_y));
            }
        }
    }

    #[test]
    fn avoidance_above_graph() {
        let g = PlFunction::constant(int(0), int(1), int(0)).unwrap();
        let r = Rect53::new(int(0), int(1), int(1)).unwrap();
        assert_eq!(square_avoidance(&g, &r), Some(0));
    }

    #[test]
    fn touching_boundary_counts_as_avoided() {
        let g = PlFunction::constant(int(0), int(5), int(1)).unwrap();
        // line y = 1 runs along the top of row 0 and the bottom of row 1
        let r = unit_rect();
        assert_eq!(square_avoidance(&g, &r), Some(0));
        let g = PlFunction::constant(int(0), int(5), ratio(1, 2)).unwrap();
        assert_eq!(square_avoidance(&g, &r), Some(5));
    }

    #[test]
    fn sawtooth_hits_every_square() {
        // zigzag with period 1/2 across the unit-side rectangle [0,5]x[0,3]
        let mut pts = Vec::new();
        for k in 0..=10 {
            let y = if k % 2 == 0 { int(-1) } else { int(4) };
            pts.push((ratio(k, 2), y));
        }
        let g = PlFunction::from_points(pts).unwrap();
        assert_eq!(square_avoidance(&g, &unit_rect()), None);
        // dense sampling agrees: every square has a sample strictly inside
        for s in squares_of_rect(&unit_rect()) {
            let hit = (1..2000).any(|k| {
                let x = &s.x + &s.side * ratio(k, 2000);
                let y = g.eval(&x).unwrap();
                y > s.y && y < s.y1()
            });
            assert!(hit);
        }
    }

    #[test]
    fn exact_distance_matches_float() {
        let g = PlFunction::new(
            vec![int(0), ratio(1, 2), int(1)],
            vec![int(0), ratio(1, 2), int(0)],
        )
        .unwrap();
        let fg = FloatGraph::new(&g);
        let cases = [
            (ratio(2, 5), ratio(3, 5), int(1), ratio(6, 5)),
            (int(2), int(3), int(0), int(1)),
            (ratio(-1, 2), ratio(-1, 4), ratio(1, 4), ratio(1, 2)),
            (ratio(1, 4), ratio(3, 4), ratio(1, 10), ratio(1, 5)),
        ];
        for (x0, x1, y0, y1) in cases {
            let exact = rational::to_f64(&box_graph_dist_sq(&g, &x0, &x1, &y0, &y1)).sqrt();
            let float = fg.box_dist(
                rational::to_f64(&x0),
                rational::to_f64(&x1),
                rational::to_f64(&y0),
                rational::to_f64(&y1),
            );
            assert!((exact - float).abs() < 1e-12, "{exact} vs {float}");
        }
    }
}
