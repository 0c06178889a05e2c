//! Sums of narrow peaks `Σ a_n ‖(x - q_n)/b_n‖` with `‖t‖ = max(0, 1 - |t|)`.
//!
//! Heights and slopes are chosen recursively: `a_n ≤ 2^{-n}/n`,
//! `s_n = a_n/b_n > 2^n Σ_{i<n} s_i`, and `a_n` below a certified square
//! margin `δ_n` of the previous partial sum, which keeps one square of every
//! 5:3 rectangle clear of the graph.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::margin::peak_margin;
use crate::error::{Error, Result};
use crate::eval::{CertifiedFn, Enclosure};
use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, int, pow2, ratio, Rational};

/// Peak parameters for `n = 0..=N`. `delta[0]` and `epsilon[0]` are zero:
/// the first peak has no margin constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakSumModel {
    #[serde(rename = "N")]
    pub last: usize,
    #[serde(with = "rational::serde_pq::vec")]
    pub q: Vec<Rational>,
    #[serde(with = "rational::serde_pq::vec")]
    pub a: Vec<Rational>,
    #[serde(with = "rational::serde_pq::vec")]
    pub b: Vec<Rational>,
    #[serde(with = "rational::serde_pq::vec")]
    pub s: Vec<Rational>,
    #[serde(with = "rational::serde_pq::vec")]
    pub delta: Vec<Rational>,
    #[serde(with = "rational::serde_pq::vec")]
    pub epsilon: Vec<Rational>,
}

/// Rationals of `[0, 1]`: `0`, then the Calkin–Wilf sequence restricted to `(0, 1]`.
pub fn unit_rationals() -> impl Iterator<Item = Rational> {
    let cw = std::iter::successors(Some(int(1)), |x: &Rational| {
        let fl = x.floor();
        Some(Rational::one() / (int(2) * fl - x + int(1)))
    });
    std::iter::once(int(0)).chain(cw.filter(|x| x <= &int(1)))
}

/// `max(0, 1 - |t|)`, the distance from `t` to the complement of `[-1, 1]`.
pub fn peak_norm(t: &Rational) -> Rational {
    let v = Rational::one() - t.abs();
    if v.is_positive() {
        v
    } else {
        Rational::zero()
    }
}

pub fn min_pairwise_distance(points: &[Rational]) -> Rational {
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(Rational::zero)
}

/// `Σ_{n>N} 2^{-n}/n ≤ 2^{-N}/(N+1)`.
pub fn analytic_tail(last: usize) -> Rational {
    pow2(-(last as i64)) / int(last as i64 + 1)
}

impl PeakSumModel {
    pub fn peaks(&self) -> usize {
        self.last + 1
    }

    /// `f_n(x)` for the single peak `n`.
    pub fn peak(&self, n: usize, x: &Rational) -> Rational {
        &self.a[n] * peak_norm(&((x - &self.q[n]) / &self.b[n]))
    }

    /// Exact partial sum `g_upto(x)`.
    pub fn partial_sum(&self, x: &Rational, upto: usize) -> Rational {
        (0..=upto.min(self.last)).map(|n| self.peak(n, x)).sum()
    }

    /// Bound on `f - g_upto`: the remaining model heights plus the analytic tail.
    pub fn remainder_bound(&self, upto: usize) -> Rational {
        let inside: Rational = self.a[upto.min(self.last) + 1..].iter().sum();
        inside + analytic_tail(self.last)
    }

    /// `g_upto(x)` with the enclosure of the infinite sum.
    pub fn eval(&self, x: &Rational, upto: usize) -> Result<Enclosure> {
        if upto > self.last {
            return Err(Error::InvalidArgument(format!(
                "upto = {upto} exceeds N = {}",
                self.last
            )));
        }
        Ok(Enclosure {
            value: self.partial_sum(x, upto),
            err: self.remainder_bound(upto),
        })
    }

    /// `g_upto` as an exact piecewise-linear function on `[0, 1]`.
    pub fn partial_sum_pl(&self, upto: usize) -> PlFunction {
        let (zero, one) = (int(0), int(1));
        let mut xs = vec![zero.clone(), one.clone()];
        for n in 0..=upto.min(self.last) {
            for x in [&self.q[n] - &self.b[n], self.q[n].clone(), &self.q[n] + &self.b[n]] {
                if x > zero && x < one {
                    xs.push(x);
                }
            }
        }
        xs.sort();
        xs.dedup();
        let ys = xs.iter().map(|x| self.partial_sum(x, upto)).collect();
        PlFunction::new(xs, ys).unwrap()
    }

    /// Re-checks every structural constraint; returns the violations.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.last + 1;
        for (name, v) in [
            ("q", &self.q),
            ("a", &self.a),
            ("b", &self.b),
            ("s", &self.s),
            ("delta", &self.delta),
            ("epsilon", &self.epsilon),
        ] {
            if v.len() != n {
                out.push(format!("{name} has {} entries, expected {n}", v.len()));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for i in 0..n {
            if self.q[i].is_negative() || self.q[i] > int(1) {
                out.push(format!("q_{i} = {} outside [0,1]", self.q[i]));
            }
            if !self.a[i].is_positive() || !self.b[i].is_positive() {
                out.push(format!("a_{i} and b_{i} must be positive"));
                continue;
            }
            if self.s[i] != &self.a[i] / &self.b[i] {
                out.push(format!("s_{i} != a_{i}/b_{i}"));
            }
        }
        let mut qs = self.q.clone();
        qs.sort();
        if qs.windows(2).any(|w| w[0] == w[1]) {
            out.push("q values are not distinct".into());
        }
        if self.s[0] <= int(3) {
            out.push(format!("s_0 = {} must exceed 3", self.s[0]));
        }
        let mut slope_sum = self.s[0].clone();
        for i in 1..n {
            let cap = pow2(-(i as i64)) / int(i as i64);
            if self.a[i] > cap {
                out.push(format!("a_{i} = {} exceeds 2^-{i}/{i}", self.a[i]));
            }
            if self.s[i] <= pow2(i as i64) * &slope_sum {
                out.push(format!("s_{i} does not dominate 2^{i} times earlier slopes"));
            }
            if self.a[i] >= self.delta[i] {
                out.push(format!("a_{i} is not below delta_{i}"));
            }
            if self.epsilon[i] != min_pairwise_distance(&self.q[..=i]) {
                out.push(format!("epsilon_{i} is not the minimal gap of q_0..q_{i}"));
            }
            slope_sum += &self.s[i];
        }
        out
    }

    /// `m` and `δ` for the absolute-continuity recipe at tolerance `eps`:
    /// the smallest `m` whose remainder is `≤ eps`, and `δ = eps / Σ_{n≤m} s_n`.
    pub fn continuity_modulus(&self, eps: &Rational) -> Result<ContinuityModulus> {
        for m in 0..=self.last {
            let rem = self.remainder_bound(m);
            if &rem <= eps {
                let slopes: Rational = self.s[..=m].iter().sum();
                return Ok(ContinuityModulus {
                    m,
                    delta: eps / slopes,
                    remainder: rem,
                });
            }
        }
        Err(Error::InvalidArgument(format!(
            "remainder of the {}-peak model never drops below {eps}",
            self.peaks()
        )))
    }

    /// The triple `q_m - b_m < q_m < q_m + b_m` and the lower bound
    /// `(1 - η)/(2(1/s_m + η))` on its graph-distance ratio for `g_upto`,
    /// where `η = (Σ_{m<n≤upto} a_n + b_m Σ_{n<m} s_n) / a_m`.
    pub fn peak_witness(&self, m: usize, upto: usize) -> PeakWitness {
        let later: Rational = self.a[m + 1..=upto].iter().sum();
        let earlier: Rational = self.s[..m].iter().sum();
        let eta = (later + &self.b[m] * earlier) / &self.a[m];
        let bound = (Rational::one() - &eta)
            / (int(2) * (Rational::one() / &self.s[m] + &eta));
        PeakWitness {
            x: &self.q[m] - &self.b[m],
            y: self.q[m].clone(),
            z: &self.q[m] + &self.b[m],
            eta,
            bound,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuityModulus {
    pub m: usize,
    #[serde(with = "rational::serde_pq")]
    pub delta: Rational,
    #[serde(with = "rational::serde_pq")]
    pub remainder: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeakWitness {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub y: Rational,
    #[serde(with = "rational::serde_pq")]
    pub z: Rational,
    #[serde(with = "rational::serde_pq")]
    pub eta: Rational,
    #[serde(with = "rational::serde_pq")]
    pub bound: Rational,
}

/// Builds peaks `0..=last` with certified margins at the given search depth.
pub fn peak_build(last: usize, grid: u32) -> Result<PeakSumModel> {
    if last < 1 {
        return Err(Error::InvalidArgument("need N >= 1".into()));
    }
    let q: Vec<Rational> = unit_rationals().take(last + 1).collect();
    let mut model = PeakSumModel {
        last: 0,
        q: vec![q[0].clone()],
        a: vec![ratio(1, 4)],
        b: vec![ratio(1, 16)],
        s: vec![int(4)],
        delta: vec![int(0)],
        epsilon: vec![int(0)],
    };
    for n in 1..=last {
        let g_prev = model.partial_sum_pl(n - 1);
        let eps = min_pairwise_distance(&q[..=n]);
        let delta = peak_margin(&g_prev, &eps, grid)?;
        let cap = pow2(-(n as i64)) / int(n as i64);
        let a = rational::min(&cap, &(&delta / int(2)));
        let slope_sum: Rational = model.s.iter().sum();
        let s = int(2) * pow2(n as i64) * slope_sum;
        let b = &a / &s;
        model.q.push(q[n].clone());
        model.a.push(a);
        model.b.push(b);
        model.s.push(s);
        model.delta.push(delta);
        model.epsilon.push(eps);
        model.last = n;
    }
    Ok(model)
}

/// The peak sum as a certified evaluator, truncated after peak `upto`.
pub struct PeakSumFn<'a> {
    pub model: &'a PeakSumModel,
    pub upto: usize,
}

impl CertifiedFn for PeakSumFn<'_> {
    fn enclose(&self, x: &Rational) -> Result<Enclosure> {
        self.model.eval(x, self.upto)
    }

    fn domain(&self) -> Option<(Rational, Rational)> {
        Some((int(0), int(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_model() -> PeakSumModel {
        PeakSumModel {
            last: 1,
            q: vec![int(0), int(1)],
            a: vec![ratio(1, 4), ratio(1, 40)],
            b: vec![ratio(1, 16), ratio(1, 640)],
            s: vec![int(4), int(16)],
            delta: vec![int(0), ratio(1, 10)],
            epsilon: vec![int(0), int(1)],
        }
    }

    #[test]
    fn calkin_wilf_prefix() {
        let q: Vec<_> = unit_rationals().take(9).collect();
        assert_eq!(
            q,
            vec![
                int(0),
                int(1),
                ratio(1, 2),
                ratio(1, 3),
                ratio(2, 3),
                ratio(1, 4),
                ratio(3, 5),
                ratio(2, 5),
                ratio(3, 4)
            ]
        );
    }

    #[test]
    fn peak_shape() {
        let m = toy_model();
        assert_eq!(m.eval(&int(0), 0).unwrap().value, ratio(1, 4));
        assert_eq!(m.peak(0, &ratio(1, 32)), ratio(1, 8));
        assert_eq!(m.partial_sum(&ratio(1, 2), 1), int(0));
        assert!(m.eval(&int(0), 2).is_err());
    }

    #[test]
    fn toy_model_is_valid_and_tail_is_small() {
        let m = toy_model();
        assert!(m.violations().is_empty(), "{:?}", m.violations());
        for n in 1..20 {
            assert!(analytic_tail(n) <= pow2(-(n as i64)));
        }
        let mut bad = m.clone();
        bad.s[0] = int(3);
        bad.b[0] = ratio(1, 12);
        assert!(!bad.violations().is_empty());
    }

    #[test]
    fn partial_sum_pl_matches_pointwise() {
        let m = toy_model();
        let g = m.partial_sum_pl(1);
        for k in 0..=200 {
            let x = ratio(k, 200);
            assert_eq!(g.eval(&x).unwrap(), m.partial_sum(&x, 1));
        }
    }

    #[test]
    fn build_one_peak() {
        let m = peak_build(1, 12).unwrap();
        assert!(m.violations().is_empty(), "{:?}", m.violations());
        assert!(m.a[1] < m.delta[1]);
        assert_eq!(m.epsilon[1], int(1));
    }
}
