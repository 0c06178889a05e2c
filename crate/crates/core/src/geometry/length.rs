//! Polyline length of a PL graph with rational lower/upper bounds.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthBounds {
    #[serde(with = "rational::serde_pq")]
    pub lower: Rational,
    #[serde(with = "rational::serde_pq")]
    pub upper: Rational,
    pub bits: u32,
}

/// `Σ √(Δx² + Δy²)` bracketed on the fixed-point grid `2^{-bits}`; exact
/// segments contribute equal bounds.
pub fn graph_length(f: &PlFunction, bits: u32) -> LengthBounds {
    let scale = BigInt::one() << (2 * bits as usize);
    let mut lo = BigInt::zero();
    let mut inexact = 0u64;
    let xs = f.breakpoints();
    let ys = f.values();
    for k in 0..f.segments() {
        let dx = &xs[k + 1] - &xs[k];
        let dy = &ys[k + 1] - &ys[k];
        let s = &dx * &dx + &dy * &dy;
        let num = s.numer() * &scale;
        let (q, r) = (&num / s.denom(), &num % s.denom());
        let root = q.sqrt();
        if !(r.is_zero() && &root * &root == q) {
            inexact += 1;
        }
        lo += root;
    }
    let unit = rational::pow2(-(bits as i64));
    let lower = Rational::from_integer(lo) * &unit;
    let upper = &lower + Rational::from_integer(inexact.into()) * &unit;
    LengthBounds { lower, upper, bits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fivefold::all_levels;
    use crate::exact::rational::{int, ratio};

    #[test]
    fn pythagorean_and_flat() {
        let f = PlFunction::new(vec![int(0), int(3)], vec![int(0), int(4)]).unwrap();
        let l = graph_length(&f, 20);
        assert_eq!((l.lower, l.upper), (int(5), int(5)));
        let c = PlFunction::constant(int(0), int(1), ratio(1, 3)).unwrap();
        let l = graph_length(&c, 8);
        assert_eq!((l.lower, l.upper), (int(1), int(1)));
    }

    #[test]
    fn brackets_tighten() {
        let f = PlFunction::new(vec![int(0), int(1), int(2)], vec![int(0), int(1), int(0)]).unwrap();
        let mut last_gap = None;
        for bits in [4, 8, 16, 32] {
            let l = graph_length(&f, bits);
            let two_sqrt2 = 2.0 * 2f64.sqrt();
            assert!(rational::to_f64(&l.lower) <= two_sqrt2 && two_sqrt2 <= rational::to_f64(&l.upper));
            let gap = &l.upper - &l.lower;
            if let Some(g) = last_gap {
                assert!(gap <= g);
            }
            last_gap = Some(gap);
        }
    }

    #[test]
    fn levels_get_longer() {
        let levels = all_levels(5).unwrap();
        for w in levels.windows(2) {
            let a = graph_length(&w[0].function, 24);
            let b = graph_length(&w[1].function, 24);
            assert!(b.lower > a.upper);
        }
    }
}
