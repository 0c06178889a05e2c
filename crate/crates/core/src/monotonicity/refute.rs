//! Witness search for the three-point inequalities
//! `|ψ(x) - ψ(y)| ≤ c |ψ(x) - ψ(z)|` (side L11) and
//! `|ψ(z) - ψ(y)| ≤ c |ψ(x) - ψ(z)|` (side L12), `x < y < z`, `ψ(t) = (t, f(t))`.
//!
//! All triples of breakpoints are screened in floating point with an `O(r²)`
//! running-max scan; candidates are confirmed in exact arithmetic on squared
//! distances. Near-violations are then refined by local bisection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, ratio, Rational};

pub const DEFAULT_BUDGET: u32 = 16;

const SQRT_BITS: u32 = 40;
const CANDIDATES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    L11,
    L12,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTriple {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub y: Rational,
    #[serde(with = "rational::serde_pq")]
    pub z: Rational,
    pub side: Side,
    /// Exact squared ratio.
    #[serde(with = "rational::serde_pq")]
    pub ratio_sq: Rational,
    /// Rational lower bound of the ratio itself.
    #[serde(with = "rational::serde_pq")]
    pub achieved_ratio: Rational,
}

impl WitnessTriple {
    fn new(f: &PlFunction, x: Rational, y: Rational, z: Rational, side: Side) -> Option<Self> {
        let ratio_sq = triple_ratio_sq(f, &x, &y, &z, side)?;
        let achieved_ratio = rational::sqrt_floor(&ratio_sq, SQRT_BITS);
        Some(WitnessTriple {
            x,
            y,
            z,
            side,
            ratio_sq,
            achieved_ratio,
        })
    }

    /// Recomputes the squared ratio from `f` and compares it with `c²`.
    pub fn refutes(&self, f: &PlFunction, c: &Rational) -> bool {
        triple_ratio_sq(f, &self.x, &self.y, &self.z, self.side)
            .is_some_and(|r| r == self.ratio_sq && r > c * c)
    }
}

fn dist_sq(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> Rational {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    &dx * &dx + &dy * &dy
}

/// Exact squared ratio of a triple; `None` unless `x < y < z` lie in the domain.
pub fn triple_ratio_sq(
    f: &PlFunction,
    x: &Rational,
    y: &Rational,
    z: &Rational,
    side: Side,
) -> Option<Rational> {
    if !(x < y && y < z) {
        return None;
    }
    let (fx, fy, fz) = (f.eval(x).ok()?, f.eval(y).ok()?, f.eval(z).ok()?);
    let base = dist_sq((x, &fx), (z, &fz));
    let num = match side {
        Side::L11 => dist_sq((x, &fx), (y, &fy)),
        Side::L12 => dist_sq((z, &fz), (y, &fy)),
    };
    Some(num / base)
}

#[derive(Clone, Copy)]
struct Cand {
    ratio_sq: f64,
    i: usize,
    j: usize,
    k: usize,
    side: Side,
}

/// Best floating-point triples per anchor: for each left anchor `i` the best
/// L11 triple, for each right anchor `k` the best L12 triple.
fn screen(xs: &[f64], ys: &[f64]) -> Vec<Cand> {
    let n = xs.len();
    let d2 = |a: usize, b: usize| {
        let (dx, dy) = (xs[a] - xs[b], ys[a] - ys[b]);
        dx * dx + dy * dy
    };
    let l11 = (0..n).into_par_iter().filter_map(|i| {
        let mut run: Option<(f64, usize)> = None;
        let mut best: Option<Cand> = None;
        for k in i + 1..n {
            if let Some((m, j)) = run {
                let r = m / d2(i, k);
                if best.is_none_or(|b| r > b.ratio_sq) {
                    best = Some(Cand { ratio_sq: r, i, j, k, side: Side::L11 });
                }
            }
            let d = d2(i, k);
            if run.is_none_or(|(m, _)| d > m) {
                run = Some((d, k));
            }
        }
        best
    });
    let l12 = (0..n).into_par_iter().filter_map(|k| {
        let mut run: Option<(f64, usize)> = None;
        let mut best: Option<Cand> = None;
        for i in (0..k).rev() {
            if let Some((m, j)) = run {
                let r = m / d2(i, k);
                if best.is_none_or(|b| r > b.ratio_sq) {
                    best = Some(Cand { ratio_sq: r, i, j, k, side: Side::L12 });
                }
            }
            let d = d2(i, k);
            if run.is_none_or(|(m, _)| d > m) {
                run = Some((d, i));
            }
        }
        best
    });
    let mut all: Vec<Cand> = l11.chain(l12).collect();
    all.sort_by(|a, b| {
        b.ratio_sq
            .total_cmp(&a.ratio_sq)
            .then((a.i, a.j, a.k).cmp(&(b.i, b.j, b.k)))
    });
    all
}

fn better(a: &WitnessTriple, b: &Option<WitnessTriple>) -> bool {
    b.as_ref().is_none_or(|b| a.ratio_sq > b.ratio_sq)
}

/// Hill-climb: move one coordinate halfway toward a neighbour, keep the move
/// when the exact ratio grows, halve the step when nothing improves.
fn refine(f: &PlFunction, start: WitnessTriple, budget: u32) -> WitnessTriple {
    let xs = f.breakpoints();
    let (lo, hi) = (xs[0].clone(), xs[xs.len() - 1].clone());
    let span = &hi - &lo;
    let mut step = span / Rational::from_integer((xs.len() as i64 * 4).into());
    let mut cur = start;
    for _ in 0..budget {
        let mut improved = false;
        for coord in 0..3 {
            for sign in [-1i64, 1] {
                let delta = &step * ratio(sign, 1);
                let mut p = [cur.x.clone(), cur.y.clone(), cur.z.clone()];
                p[coord] = &p[coord] + &delta;
                if p[coord] < lo || p[coord] > hi {
                    continue;
                }
                let [x, y, z] = p;
                if let Some(t) = WitnessTriple::new(f, x, y, z, cur.side) {
                    if t.ratio_sq > cur.ratio_sq {
                        cur = t;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step = step * ratio(1, 2);
        }
    }
    cur
}

/// Largest-ratio triple found: exact over the screened breakpoint triples,
/// then refined for `budget` rounds.
pub fn best_triple(f: &PlFunction, budget: u32) -> Option<WitnessTriple> {
    best_triples(f, budget).into_iter().next()
}

fn best_triples(f: &PlFunction, budget: u32) -> Vec<WitnessTriple> {
    let pts = f.to_f64_points();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let cands = screen(&xs, &ys);
    let bx = f.breakpoints();
    let mut exact: Vec<WitnessTriple> = cands
        .par_iter()
        .take(CANDIDATES)
        .filter_map(|c| {
            WitnessTriple::new(f, bx[c.i].clone(), bx[c.j].clone(), bx[c.k].clone(), c.side)
        })
        .map(|t| if budget > 0 { refine(f, t, budget) } else { t })
        .collect();
    exact.sort_by(|a, b| b.ratio_sq.cmp(&a.ratio_sq));
    exact
}

/// A triple refuting `c`-monotonicity of the graph on one of the two sides.
/// Breakpoint triples are preferred; refinement only runs when none of them
/// violates. `None` is not a proof of monotonicity.
pub fn refute_monotone(f: &PlFunction, c: &Rational, budget: u32) -> Option<WitnessTriple> {
    let c2 = c * c;
    let plain = best_triples(f, 0);
    if let Some(t) = plain.first().filter(|t| t.ratio_sq > c2) {
        return Some(t.clone());
    }
    if budget == 0 {
        return None;
    }
    let mut best: Option<WitnessTriple> = None;
    for t in plain {
        let r = refine(f, t, budget);
        if better(&r, &best) {
            best = Some(r);
        }
    }
    best.filter(|t| t.ratio_sq > c2)
}
