//! Truncated lacunary series with rational tail bounds.
//!
//! * no-M-point series: `Σ_k 2^{-k} ‖2^{k²} y‖`
//! * Takagi: `Σ_n 2^{-n} ‖2^n x‖`
//!
//! with `‖t‖ = dist(t, Z)`. Partial sums of rational arguments are exact;
//! the large powers of two are reduced modulo the denominator.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::{CertifiedFn, Enclosure};
use crate::exact::rational::{self, dist_to_int, pow2, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    NoMPoint,
    Takagi,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesEvaluator {
    pub kind: SeriesKind,
    pub truncation: u32,
    #[serde(with = "rational::serde_pq")]
    pub tail_bound: Rational,
}

impl SeriesEvaluator {
    pub fn no_m_point(truncation: u32) -> Self {
        SeriesEvaluator {
            kind: SeriesKind::NoMPoint,
            truncation,
            tail_bound: pow2(-(truncation as i64) - 1),
        }
    }

    pub fn takagi(truncation: u32) -> Self {
        SeriesEvaluator {
            kind: SeriesKind::Takagi,
            truncation,
            tail_bound: pow2(-(truncation as i64)),
        }
    }

    pub fn eval(&self, x: &Rational) -> Enclosure {
        match self.kind {
            SeriesKind::NoMPoint => nomp_eval(x, self.truncation),
            SeriesKind::Takagi => takagi_eval(x, self.truncation),
        }
    }
}

impl CertifiedFn for SeriesEvaluator {
    fn enclose(&self, x: &Rational) -> Result<Enclosure> {
        Ok(self.eval(x))
    }
}

/// Partial sum over `k ≤ truncation`; the discarded tail is at most `2^{-K-1}`.
pub fn nomp_eval(y: &Rational, truncation: u32) -> Enclosure {
    let mut value = Rational::zero();
    for k in 0..=truncation as u64 {
        let term = rational::dist_to_int_scaled_pow2(y, k * k);
        if !term.is_zero() {
            value += term * pow2(-(k as i64));
        }
    }
    Enclosure {
        value,
        err: pow2(-(truncation as i64) - 1),
    }
}

/// Partial sum over `n ≤ truncation` with tail bound `2^{-K}`, tightened to 0
/// for dyadic `x = p/2^m` once every discarded term vanishes (`K + 1 ≥ m`).
pub fn takagi_eval(x: &Rational, truncation: u32) -> Enclosure {
    let mut value = Rational::zero();
    for n in 0..=truncation as u64 {
        let term = rational::dist_to_int_scaled_pow2(x, n);
        if !term.is_zero() {
            value += term * pow2(-(n as i64));
        }
    }
    let err = match rational::dyadic_exponent(x) {
        Some(m) if truncation as u64 + 1 >= m => Rational::zero(),
        _ => pow2(-(truncation as i64)),
    };
    Enclosure { value, err }
}

/// Witness pair `x < y < z` against pointwise monotonicity at `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NompWitness {
    pub n: u32,
    /// Which of the two quarter shifts was used (1 or 3).
    pub shift: u32,
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub z: Rational,
    #[serde(with = "rational::serde_pq")]
    pub ratio_lb: Rational,
}

/// Closed-form lower bound on `|f(y)-f(x)| / (|f(x)-f(z)| + |z-x|)` for the
/// witness at scale `n`:
/// `(2^{-n-2} - n·2^{2-3n}) / (n·2^{2-3n} + 2^{-n²})`.
pub fn nomp_ratio_bound(n: u32) -> Rational {
    let n_i = n as i64;
    let lower_terms = Rational::from_integer(n_i.into()) * pow2(2 - 3 * n_i);
    (pow2(-n_i - 2) - &lower_terms) / (&lower_terms + pow2(-n_i * n_i))
}

/// Picks `i ∈ {1, 3}` with `|‖2^{n²}y‖ - ‖2^{n²}y - i/4‖| ≥ 1/4` and returns
/// `x = y - (i/4)2^{-n²}`, `z = x + 2^{-n²}`.
pub fn nomp_witness(y: &Rational, n: u32) -> NompWitness {
    let e = (n as u64) * (n as u64);
    let at_y = rational::dist_to_int_scaled_pow2(y, e);
    // fractional part of 2^{n²} y
    let q = y.denom().clone();
    let p = num_integer::Integer::mod_floor(y.numer(), &q);
    let m = num_bigint::BigInt::from(2u32).modpow(&num_bigint::BigInt::from(e), &q);
    let frac = Rational::new(num_integer::Integer::mod_floor(&(p * m), &q), q);
    let quarter = ratio(1, 4);
    let shift = [1u32, 3]
        .into_iter()
        .find(|&i| {
            let shifted = dist_to_int(&(&frac - ratio(i as i64, 4)));
            (&at_y - shifted).abs() >= quarter
        })
        .expect("one of the two quarter shifts always separates by 1/4");
    let h = pow2(-(e as i64));
    let x = y - ratio(shift as i64, 4) * &h;
    let z = &x + &h;
    NompWitness {
        n,
        shift,
        x,
        z,
        ratio_lb: nomp_ratio_bound(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn nomp_values() {
        for k in 0..8 {
            let e = nomp_eval(&int(0), k);
            assert_eq!(e.value, int(0));
            assert_eq!(e.err, pow2(-(k as i64) - 1));
        }
        for k in 1..8 {
            assert_eq!(nomp_eval(&ratio(1, 2), k).value, ratio(1, 2));
        }
        // every term is at most 2^{-k}/2
        let y = ratio(3, 7);
        for k in 0..12u32 {
            let d = &nomp_eval(&y, k + 1).value - &nomp_eval(&y, k).value;
            assert!(d <= pow2(-(k as i64) - 2));
        }
    }

    #[test]
    fn takagi_dyadic_exact() {
        assert_eq!(takagi_eval(&int(0), 0), Enclosure::exact(int(0)));
        for k in 1..6 {
            assert_eq!(takagi_eval(&ratio(1, 2), k), Enclosure::exact(ratio(1, 2)));
        }
        for k in 2..6 {
            assert_eq!(takagi_eval(&ratio(1, 4), k), Enclosure::exact(ratio(1, 2)));
        }
        let e = takagi_eval(&ratio(1, 3), 10);
        assert_eq!(e.err, pow2(-10));
        // T(1/3) = 2/3
        assert!((&e.value - ratio(2, 3)).abs() <= e.err);
    }

    #[test]
    fn two_truncations_are_consistent() {
        for (p, q) in [(1, 3), (2, 7), (5, 11), (13, 64)] {
            let y = ratio(p, q);
            for ev in [SeriesEvaluator::no_m_point(3), SeriesEvaluator::takagi(5)] {
                let coarse = ev.eval(&y);
                let fine = SeriesEvaluator {
                    truncation: ev.truncation + 7,
                    ..ev.clone()
                }
                .eval(&y);
                assert!((&fine.value - &coarse.value).abs() <= coarse.err);
            }
        }
    }

    #[test]
    fn witness_bound_at_five() {
        let b = nomp_ratio_bound(5);
        assert!(b > int(10));
        assert!(b < int(12));
        // grows with n past the first few
        for n in 5..12 {
            assert!(nomp_ratio_bound(n + 1) > nomp_ratio_bound(n));
        }
    }

    #[test]
    fn witness_satisfies_quarter_separation() {
        for (p, q) in [(0, 1), (1, 3), (7, 100), (1, 2), (99, 100)] {
            let y = ratio(p, q);
            for n in 2..6 {
                let w = nomp_witness(&y, n);
                let h = pow2(-((n * n) as i64));
                assert_eq!(&w.z - &w.x, h);
                assert!(w.x < y && y < w.z);
                let e = (n * n) as u64;
                let sep = rational::dist_to_int_scaled_pow2(&y, e)
                    - rational::dist_to_int_scaled_pow2(&w.x, e);
                assert!(sep.abs() >= ratio(1, 4));
            }
        }
    }
}
