//! Exact decision of the oscillation condition
//! `max_{x≤t≤y} |f(x) - f(t)| ≤ c (y - x)` whenever `f(x) = f(y)`.
//!
//! For an upward excursion the worst pairs sit on a local-max plateau at
//! height `w`: for a level `v < w` take the nearest crossings `x(v) < t* < y(v)`.
//! Walking away from the plateau, each new strict running minimum starts a
//! cell of levels on which `x(v)` (resp. `y(v)`) is affine in `v`, so the
//! ratio `(w - v)/(y(v) - x(v))` is linear-fractional on every merged cell
//! and its supremum sits at a cell end. Downward excursions are the same
//! sweep on `-f`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PcOutcome {
    Pass,
    Fail,
}

/// `x < t < y` with `f(x) = f(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcWitness {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub t: Rational,
    #[serde(with = "rational::serde_pq")]
    pub y: Rational,
}

impl PcWitness {
    /// `|f(x) - f(t)| / (y - x)`; `None` if the triple is not a valid
    /// equal-level configuration for `f`.
    pub fn ratio(&self, f: &PlFunction) -> Option<Rational> {
        if !(self.x < self.t && self.t < self.y) {
            return None;
        }
        let fx = f.eval(&self.x).ok()?;
        let fy = f.eval(&self.y).ok()?;
        let ft = f.eval(&self.t).ok()?;
        if fx != fy {
            return None;
        }
        Some((fx - ft).abs() / (&self.y - &self.x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcCertificate {
    #[serde(with = "rational::serde_pq")]
    pub c: Rational,
    pub outcome: PcOutcome,
    pub witness: Option<PcWitness>,
}

impl PcCertificate {
    /// Re-checks a Fail witness directly. A Pass carries no evidence and
    /// verifies trivially.
    pub fn verify(&self, f: &PlFunction) -> bool {
        match (&self.outcome, &self.witness) {
            (PcOutcome::Pass, None) => true,
            (PcOutcome::Fail, Some(w)) => w.ratio(f).is_some_and(|r| r > self.c),
            _ => false,
        }
    }
}

/// Maximal runs `[i, j]` of equal values whose neighbours on both sides exist
/// and are strictly lower.
fn local_max_plateaus(ys: &[Rational]) -> Vec<(usize, usize)> {
    let n = ys.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        let mut j = i;
        while j + 1 < n && ys[j + 1] == ys[i] {
            j += 1;
        }
        if j + 1 < n && ys[i - 1] < ys[i] && ys[j + 1] < ys[i] {
            out.push((i, j));
        }
        i = j + 1;
    }
    out
}

/// A cell of one side: levels `[level, ..)` cross on segment `seg..seg+1`.
struct Piece {
    level: Rational,
    seg: usize,
}

fn side_pieces(ys: &[Rational], start: usize, left: bool) -> Vec<Piece> {
    let mut cur = ys[start].clone();
    let mut out = Vec::new();
    let mut k = start;
    loop {
        let next = if left {
            if k == 0 {
                break;
            }
            k - 1
        } else {
            if k + 1 == ys.len() {
                break;
            }
            k + 1
        };
        if ys[next] < cur {
            cur = ys[next].clone();
            out.push(Piece {
                level: cur.clone(),
                seg: if left { next } else { next - 1 },
            });
        }
        k = next;
    }
    out
}

/// Abscissa on segment `seg` where the PL function takes the value `v`.
fn cross(xs: &[Rational], ys: &[Rational], seg: usize, v: &Rational) -> Rational {
    let (x0, x1, y0, y1) = (&xs[seg], &xs[seg + 1], &ys[seg], &ys[seg + 1]);
    x0 + (v - y0) * (x1 - x0) / (y1 - y0)
}

struct Best {
    ratio: Rational,
    witness: Option<PcWitness>,
}

/// Sweeps the excursion above plateau `(i, j)`. With `stop_above = Some(c)`
/// returns as soon as a ratio `> c` is found; the running best otherwise.
fn sweep_plateau(
    xs: &[Rational],
    ys: &[Rational],
    plateau: (usize, usize),
    fmin: &Rational,
    best: &mut Best,
    stop_above: Option<&Rational>,
) -> bool {
    let (i, j) = plateau;
    let w = &ys[i];
    let lp = side_pieces(ys, i, true);
    let rp = side_pieces(ys, j, false);
    if lp.is_empty() || rp.is_empty() {
        return false;
    }
    let (mut li, mut ri) = (0usize, 0usize);
    let mut v_hi = w.clone();
    let mut at_top = true;
    loop {
        let (l, r) = (&lp[li], &rp[ri]);
        let v_lo = rational::max(&l.level, &r.level);
        for (v, is_top) in [(&v_hi, at_top), (&v_lo, false)] {
            if is_top {
                continue;
            }
            let x = cross(xs, ys, l.seg, v);
            let y = cross(xs, ys, r.seg, v);
            let width = &y - &x;
            if width.is_zero() {
                continue;
            }
            let ratio = (w - v) / &width;
            if ratio > best.ratio {
                best.ratio = ratio;
                best.witness = Some(PcWitness {
                    x,
                    t: xs[i].clone(),
                    y,
                });
                if stop_above.is_some_and(|c| &best.ratio > c) {
                    return true;
                }
            }
        }
        // Lower levels only widen the bracket; the numerator is capped by the
        // global minimum.
        let x = cross(xs, ys, l.seg, &v_lo);
        let y = cross(xs, ys, r.seg, &v_lo);
        let bound_ref = stop_above.unwrap_or(&best.ratio);
        if (w - fmin) <= bound_ref * (&y - &x) {
            return false;
        }
        if l.level == v_lo {
            li += 1;
        }
        if r.level == v_lo {
            ri += 1;
        }
        if li == lp.len() || ri == rp.len() {
            return false;
        }
        v_hi = v_lo;
        at_top = false;
    }
}

fn sweep_all(f: &PlFunction, stop_above: Option<&Rational>) -> Best {
    let mut best = Best {
        ratio: Rational::zero(),
        witness: None,
    };
    for g in [f.clone(), f.neg()] {
        let (xs, ys) = (g.breakpoints(), g.values());
        let fmin = g.min_value().clone();
        for p in local_max_plateaus(ys) {
            if sweep_plateau(xs, ys, p, &fmin, &mut best, stop_above) {
                return best;
            }
        }
    }
    best
}

/// Exact decision of the oscillation condition with constant `c`.
pub fn check_pc(f: &PlFunction, c: &Rational) -> PcCertificate {
    let best = sweep_all(f, Some(c));
    if &best.ratio > c {
        PcCertificate {
            c: c.clone(),
            outcome: PcOutcome::Fail,
            witness: best.witness,
        }
    } else {
        PcCertificate {
            c: c.clone(),
            outcome: PcOutcome::Pass,
            witness: None,
        }
    }
}

/// The least constant for which the condition holds, with a triple attaining
/// it (`None` for functions without interior excursions).
pub fn least_pc_with_witness(f: &PlFunction) -> (Rational, Option<PcWitness>) {
    let best = sweep_all(f, None);
    (best.ratio, best.witness)
}

pub fn least_pc(f: &PlFunction) -> Rational {
    least_pc_with_witness(f).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fivefold::approximant;
    use crate::exact::rational::{int, ratio};
    use proptest::prelude::*;

    fn tent() -> PlFunction {
        PlFunction::new(vec![int(0), ratio(1, 2), int(1)], vec![int(0), ratio(1, 2), int(0)]).unwrap()
    }

    /// Dense oracle: pairs of crossings of every level on a grid of levels
    /// plus all breakpoint values, checked against every breakpoint between.
    fn oracle_ratio(f: &PlFunction, levels: usize) -> Rational {
        let mut vs: Vec<Rational> = f.values().to_vec();
        let (lo, hi) = (f.min_value().clone(), f.max_value().clone());
        for k in 0..=levels {
            vs.push(&lo + (&hi - &lo) * ratio(k as i64, levels as i64));
        }
        let mut best = Rational::zero();
        for v in vs {
            let pts: Vec<Rational> = f
                .level_crossings(&v)
                .into_iter()
                .flat_map(|c| [c.start().clone(), c.end().clone()])
                .collect();
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    let (x, y) = (&pts[a], &pts[b]);
                    if x >= y {
                        continue;
                    }
                    let osc = f
                        .breakpoints()
                        .iter()
                        .zip(f.values())
                        .filter(|(t, _)| *t > x && *t < y)
                        .map(|(_, ft)| (ft - &v).abs())
                        .max()
                        .unwrap_or_else(Rational::zero);
                    best = best.max(osc / (y - x));
                }
            }
        }
        best
    }

    #[test]
    fn tent_threshold() {
        let f = tent();
        let fail = check_pc(&f, &ratio(1, 3));
        assert_eq!(fail.outcome, PcOutcome::Fail);
        let w = fail.witness.clone().unwrap();
        assert!(fail.verify(&f));
        assert_eq!(w.t, ratio(1, 2));
        assert_eq!(check_pc(&f, &ratio(1, 2)).outcome, PcOutcome::Pass);
        assert_eq!(least_pc(&f), ratio(1, 2));
    }

    #[test]
    fn monotone_functions_pass() {
        let f = PlFunction::new(
            vec![int(0), int(1), int(2), int(3)],
            vec![int(0), int(1), int(1), int(5)],
        )
        .unwrap();
        assert_eq!(least_pc(&f), int(0));
        assert_eq!(check_pc(&f, &ratio(1, 100)).outcome, PcOutcome::Pass);
    }

    #[test]
    fn level_one_and_two() {
        for n in 1..=3 {
            let f = approximant(n).unwrap().function;
            let c = least_pc(&f);
            assert!(c <= int(1), "level {n}: {c}");
            assert_eq!(check_pc(&f, &int(1)).outcome, PcOutcome::Pass);
        }
        // Level 1: the plateau [2/5, 3/5] at 1/6 over crossings 1/5, 4/5.
        assert_eq!(least_pc(&approximant(1).unwrap().function), ratio(5, 18));
    }

    #[test]
    fn valley_counts_too() {
        let f = tent().neg();
        assert_eq!(least_pc(&f), ratio(1, 2));
        let w = check_pc(&f, &ratio(1, 4));
        assert!(w.verify(&f));
    }

    fn arb_pl() -> impl Strategy<Value = PlFunction> {
        prop::collection::vec(-6i64..=6, 3..9).prop_map(|ys| {
            let xs = (0..ys.len() as i64).map(int).collect();
            PlFunction::new(xs, ys.into_iter().map(int).collect()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matches_dense_oracle(f in arb_pl()) {
            let exact = least_pc(&f);
            let oracle = oracle_ratio(&f, 24);
            prop_assert!(oracle <= exact.clone());
            let cert = check_pc(&f, &exact);
            prop_assert_eq!(cert.outcome, PcOutcome::Pass);
            if exact > Rational::zero() {
                let below = &exact * ratio(999, 1000);
                let cert = check_pc(&f, &below);
                prop_assert!(cert.verify(&f));
                prop_assert_eq!(cert.outcome, PcOutcome::Fail);
            }
        }
    }
}
