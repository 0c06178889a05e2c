//! Structural invariants of the five-point refinement, checked exactly on
//! the approximants. Each check returns the violations it found (empty when
//! the property holds).

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fivefold::FivefoldLevel;
use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, int, pow2, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub item: String,
    pub level: u32,
    pub index: usize,
    pub detail: String,
}

fn v(item: &str, level: u32, index: usize, detail: String) -> Violation {
    Violation {
        item: item.into(),
        level,
        index,
        detail,
    }
}

fn lengths(f: &PlFunction) -> Vec<Rational> {
    f.breakpoints().windows(2).map(|w| &w[1] - &w[0]).collect()
}

/// Neighbouring blocks: `|I_{k-1}| ≤ 3|I_k| ≤ 9|I_{k-1}|`.
pub fn adjacent_lengths(l: &FivefoldLevel) -> Vec<Violation> {
    let ls = lengths(&l.function);
    let three = int(3);
    let nine = int(9);
    (1..ls.len())
        .filter(|&k| !(ls[k - 1] <= &three * &ls[k] && &three * &ls[k] <= &nine * &ls[k - 1]))
        .map(|k| v("adjacent-lengths", l.level, k, format!("{} vs {}", ls[k - 1], ls[k])))
        .collect()
}

/// `|I| ≤ (3/25)^m` at level `2m`, `≤ (1/5)(3/25)^m` at level `2m+1`, and
/// `|I| ≥ 5^{-n}`.
pub fn length_bounds(l: &FivefoldLevel) -> Vec<Violation> {
    let n = l.level;
    let m = n / 2;
    let mut upper = rational::pow(&ratio(3, 25), m);
    if n % 2 == 1 {
        upper *= ratio(1, 5);
    }
    let lower = rational::pow(&ratio(1, 5), n);
    lengths(&l.function)
        .iter()
        .enumerate()
        .filter(|(_, len)| **len > upper || **len < lower)
        .map(|(k, len)| v("length-bounds", n, k, format!("{len} outside [{lower}, {upper}]")))
        .collect()
}

/// Values at level-`n` breakpoints survive every later level.
pub fn values_preserved(coarse: &FivefoldLevel, fine: &FivefoldLevel) -> Vec<Violation> {
    let got = fine.function.eval_sorted(coarse.function.breakpoints());
    got.iter()
        .zip(coarse.function.values())
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(k, (a, b))| v("values-preserved", fine.level, k, format!("{a} != {b}")))
        .collect()
}

/// `|f_n(a^{k+1}) - f_n(a^k)| ≤ factor · 2^{-n}`. The sharp factor is 1/3:
/// the level-1 bump of 1/6 is halved once per level along sloped blocks.
pub fn value_steps(l: &FivefoldLevel, factor: &Rational) -> Vec<Violation> {
    let cap = factor * pow2(-(l.level as i64));
    l.function
        .values()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (&w[1] - &w[0]).abs() > cap)
        .map(|(k, w)| v("value-steps", l.level, k, format!("step {}", &w[1] - &w[0])))
        .collect()
}

/// Every slope is 0 or at least 5/6 in absolute value.
pub fn slope_gap(l: &FivefoldLevel) -> Vec<Violation> {
    let min = ratio(5, 6);
    (0..l.function.segments())
        .filter_map(|k| {
            let s = l.function.slope(k).abs();
            (!s.is_zero() && s < min).then(|| v("slope-gap", l.level, k, format!("slope {s}")))
        })
        .collect()
}

/// Range inside `[0, 1]`.
pub fn unit_range(l: &FivefoldLevel) -> Vec<Violation> {
    let (lo, hi) = (l.function.min_value(), l.function.max_value());
    if lo.is_negative() || hi > &Rational::one() {
        vec![v("unit-range", l.level, 0, format!("[{lo}, {hi}]"))]
    } else {
        Vec::new()
    }
}

/// Constant in the upper sandwich bound after `i` further levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SandwichConstant {
    /// `Σ_{j=1}^{i} 6^{-j}`.
    Geometric6,
    /// `(1/6) Σ_{j=0}^{i-1} 5^{-j}`, the exact supremum over flat blocks.
    Sharp,
}

impl SandwichConstant {
    pub fn value(self, i: u32) -> Rational {
        (0..i)
            .map(|j| match self {
                SandwichConstant::Geometric6 => rational::pow(&ratio(1, 6), j + 1),
                SandwichConstant::Sharp => ratio(1, 6) * rational::pow(&ratio(1, 5), j),
            })
            .sum()
    }
}

/// Breakpoints of `fine` grouped by the `coarse` block containing them
/// (block endpoints included in both neighbours).
fn per_block<'a>(coarse: &'a PlFunction, fine: &'a PlFunction) -> Vec<(usize, Vec<(&'a Rational, &'a Rational)>)> {
    let (cx, fx, fy) = (coarse.breakpoints(), fine.breakpoints(), fine.values());
    let mut out = Vec::with_capacity(coarse.segments());
    let mut j = 0;
    for k in 0..coarse.segments() {
        while fx[j] < cx[k] {
            j += 1;
        }
        let mut pts = Vec::new();
        let mut t = j;
        while t < fx.len() && fx[t] <= cx[k + 1] {
            pts.push((&fx[t], &fy[t]));
            t += 1;
        }
        out.push((k, pts));
    }
    out
}

/// `min(f_n(a), f_n(b)) ≤ f_{n+i} ≤ max(f_n(a), f_n(b)) + |b - a| C_i` on
/// every level-`n` block.
pub fn sandwich(coarse: &FivefoldLevel, fine: &FivefoldLevel, constant: SandwichConstant) -> Vec<Violation> {
    let i = fine.level - coarse.level;
    let c = constant.value(i);
    let (cx, cy) = (coarse.function.breakpoints(), coarse.function.values());
    let mut out = Vec::new();
    for (k, pts) in per_block(&coarse.function, &fine.function) {
        let lo = rational::min(&cy[k], &cy[k + 1]);
        let hi = rational::max(&cy[k], &cy[k + 1]) + (&cx[k + 1] - &cx[k]) * &c;
        for (x, y) in pts {
            if y < &lo || y > &hi {
                out.push(v(
                    "sandwich",
                    coarse.level,
                    k,
                    format!("f_{}({x}) = {y} outside [{lo}, {hi}]", fine.level),
                ));
            }
        }
    }
    out
}

/// On sloped level-`n` blocks, later levels stay strictly below the larger
/// endpoint value in the open interior.
pub fn sloped_interior(coarse: &FivefoldLevel, fine: &FivefoldLevel) -> Vec<Violation> {
    let (cx, cy) = (coarse.function.breakpoints(), coarse.function.values());
    let mut out = Vec::new();
    for (k, pts) in per_block(&coarse.function, &fine.function) {
        if cy[k] == cy[k + 1] {
            continue;
        }
        let hi = rational::max(&cy[k], &cy[k + 1]);
        for (x, y) in pts {
            if x > &cx[k] && x < &cx[k + 1] && y >= &hi {
                out.push(v("sloped-interior", coarse.level, k, format!("f({x}) = {y} ≥ {hi}")));
            }
        }
    }
    out
}

/// `sup |f_{n+1} - f_n| ≤ 2^{-n}`.
pub fn uniform_cauchy(l: &FivefoldLevel, next: &FivefoldLevel) -> Vec<Violation> {
    let d = l.function.sup_diff(&next.function).expect("same domain");
    if d > pow2(-(l.level as i64)) {
        vec![v("uniform-cauchy", l.level, 0, format!("sup diff {d}"))]
    } else {
        Vec::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fivefold::all_levels;

    #[test]
    fn small_levels_hold() {
        let ls = all_levels(5).unwrap();
        for l in &ls {
            assert!(adjacent_lengths(l).is_empty());
            assert!(length_bounds(l).is_empty(), "{:?}", length_bounds(l));
            assert!(value_steps(l, &ratio(1, 3)).is_empty());
            assert!(slope_gap(l).is_empty());
            assert!(unit_range(l).is_empty());
        }
        for n in 0..5 {
            assert!(values_preserved(&ls[n], &ls[n + 1]).is_empty());
            assert!(uniform_cauchy(&ls[n], &ls[n + 1]).is_empty());
        }
    }

    #[test]
    fn sixth_step_bound_is_too_tight() {
        let ls = all_levels(4).unwrap();
        for l in &ls[1..] {
            let bad = value_steps(l, &ratio(1, 6));
            assert_eq!(bad.len(), 1 << l.level);
        }
    }

    #[test]
    fn sandwich_constants() {
        assert_eq!(SandwichConstant::Sharp.value(1), ratio(1, 6));
        assert_eq!(SandwichConstant::Sharp.value(2), ratio(1, 5));
        assert_eq!(SandwichConstant::Geometric6.value(2), ratio(7, 36));
        let ls = all_levels(3).unwrap();
        assert!(sandwich(&ls[0], &ls[1], SandwichConstant::Geometric6).is_empty());
        assert!(sandwich(&ls[0], &ls[3], SandwichConstant::Sharp).is_empty());
        let bad = sandwich(&ls[0], &ls[2], SandwichConstant::Geometric6);
        assert!(bad.iter().any(|b| b.detail.contains("12/25")));
        assert!(sloped_interior(&ls[1], &ls[3]).is_empty());
    }
}
