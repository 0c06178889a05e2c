//! Knot-point evidence: all four one-sided quotients beyond `±T`, plus the
//! two structural quotient patterns of the five-point construction.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::classify::{mzv_point_class, PointStatus};
use super::dini::{dini_estimate, Quotient, QuotientSide};
use crate::constructions::fivefold::{Block, FivefoldLimit};
use crate::error::{Error, Result};
use crate::eval::CertifiedFn;
use crate::exact::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotEvidence {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub threshold: Rational,
    /// Quotient certified `≥ T` on the right.
    pub upper_right: Option<Quotient>,
    /// Quotient certified `≤ -T` on the right.
    pub lower_right: Option<Quotient>,
    pub upper_left: Option<Quotient>,
    pub lower_left: Option<Quotient>,
}

impl KnotEvidence {
    pub fn complete(&self) -> bool {
        self.upper_right.is_some()
            && self.lower_right.is_some()
            && self.upper_left.is_some()
            && self.lower_left.is_some()
    }

    /// Recomputes every recorded quotient from `f`.
    pub fn verify<F: CertifiedFn + ?Sized>(&self, f: &F) -> bool {
        let t = &self.threshold;
        let check = |q: &Option<Quotient>, up: bool| {
            q.as_ref().is_none_or(|q| {
                Quotient::compute(f, &self.x, &q.h, q.side).is_ok_and(|r| {
                    &r == q && if up { &r.lo() >= t } else { r.hi() <= -t }
                })
            })
        };
        check(&self.upper_right, true)
            && check(&self.lower_right, false)
            && check(&self.upper_left, true)
            && check(&self.lower_left, false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnotReport {
    /// All four sides exceed the threshold at some probed scale.
    Evidence(KnotEvidence),
    /// The sides that did reach the threshold; the rest is the obstruction.
    NoEvidence(KnotEvidence),
}

impl KnotReport {
    pub fn evidence(&self) -> &KnotEvidence {
        match self {
            KnotReport::Evidence(e) | KnotReport::NoEvidence(e) => e,
        }
    }
}

/// Probes `h = h_min 2^i`, `i < levels`, with `h_min = 2^{-levels}`, keeping
/// the largest-scale certified quotient for each of the four bounds.
pub fn knot_report<F: CertifiedFn + ?Sized>(
    f: &F,
    x: &Rational,
    threshold: &Rational,
    levels: u32,
) -> Result<KnotReport> {
    let h_min = rational::pow2(-(levels as i64));
    let est = dini_estimate(f, x, &h_min, levels)?;
    let t = threshold;
    let pick = |side: QuotientSide, up: bool| -> Option<Quotient> {
        est.quotients_on(side)
            .filter(|q| if up { &q.lo() >= t } else { q.hi() <= -t })
            .max_by(|a, b| a.h.cmp(&b.h))
            .cloned()
    };
    let ev = KnotEvidence {
        x: x.clone(),
        threshold: t.clone(),
        upper_right: pick(QuotientSide::Right, true),
        lower_right: pick(QuotientSide::Right, false),
        upper_left: pick(QuotientSide::Left, true),
        lower_left: pick(QuotientSide::Left, false),
    };
    Ok(if ev.complete() {
        KnotReport::Evidence(ev)
    } else {
        KnotReport::NoEvidence(ev)
    })
}

/// Two right quotients of the limit function at `x` whose difference is
/// certified `≥ 1/30`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillationPair {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    /// Flat block `[a, b]` used for the construction.
    #[serde(with = "rational::serde_pq")]
    pub a: Rational,
    #[serde(with = "rational::serde_pq")]
    pub b: Rational,
    /// Breakpoint on the raised part and its neighbour at the base value.
    #[serde(with = "rational::serde_pq")]
    pub top: Rational,
    #[serde(with = "rational::serde_pq")]
    pub base: Rational,
    /// Certified lower bound of `Q(top) - Q(base)`.
    #[serde(with = "rational::serde_pq")]
    pub gap_lb: Rational,
}

/// For `x` inside a flat block `[a, b]` (value `v`, length `L`) let the last
/// fifth `[b - L/5, b]` be refined once more: `base = b - L/5 + L/25` keeps
/// the value `v` and `top = base + L/25` is raised to `v + L/30`. With
/// `d = f(x) - v ≥ 0`, `s = base - x > 0` and `t = top - x ≤ L`,
/// `Q(top) - Q(base) = L/(30 t) + d (1/s - 1/t) ≥ 1/30`.
/// If `x` is not left of `base`, the last fifth is itself a flat block
/// containing `x` and the argument is repeated there.
pub fn vas33_oscillation(x: &Rational, depth: u32, eval_depth: u32) -> Result<Option<OscillationPair>> {
    let class = mzv_point_class(x, depth)?;
    let PointStatus::NotInB { block, .. } = class.status else {
        return Ok(None);
    };
    let (mut a, b, v) = (block.a, block.b, block.value);
    let f = FivefoldLimit::new(eval_depth);
    let one = int(1);
    loop {
        let len = &b - &a;
        let base = &b - &len * ratio(4, 25);
        if x >= &base {
            a = &b - &len * ratio(1, 5);
            continue;
        }
        let top = &b - &len * ratio(3, 25);
        let (s, t) = (&base - x, &top - x);
        let d_lo = rational::max(&(f.enclose(x)?.lo() - &v), &int(0));
        let gap_lb = &len * ratio(1, 30) / &t + d_lo * (&one / &s - &one / &t);
        if gap_lb < ratio(1, 30) {
            return Err(Error::MarginNotCertified(format!("oscillation at {x}")));
        }
        return Ok(Some(OscillationPair {
            x: x.clone(),
            a,
            b,
            top,
            base,
            gap_lb,
        }));
    }
}

/// Chain of sloped blocks below a flat block: the rising second child, then
/// repeatedly the first child. The `i`-th entry has slope `(5/6)(5/2)^{i-1}`.
pub fn slope_chain(flat: &Block, steps: u32) -> Result<Vec<(Block, Rational)>> {
    if !flat.is_flat() {
        return Err(Error::InvalidArgument("slope chain starts at a flat block".into()));
    }
    let mut out = Vec::with_capacity(steps as usize);
    let mut cur = flat.children()[1].clone();
    for _ in 0..steps {
        let q = ((&cur.fb - &cur.fa) / cur.len()).abs();
        out.push((cur.clone(), q));
        cur = cur.children()[0].clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fivefold::locate;
    use crate::constructions::series::SeriesEvaluator;
    use crate::exact::pl::PlFunction;

    #[test]
    fn affine_has_no_evidence() {
        let f = PlFunction::new(vec![int(-1), int(2)], vec![int(0), int(3)]).unwrap();
        let r = knot_report(&f, &ratio(1, 2), &int(10), 20).unwrap();
        assert!(matches!(r, KnotReport::NoEvidence(_)));
    }

    #[test]
    fn slope_law_up_to_six() {
        for depth in 0..3 {
            for blk in locate(&ratio(7, 13), depth).unwrap() {
                if !blk.is_flat() {
                    continue;
                }
                let chain = slope_chain(&blk, 6).unwrap();
                for (i, (_, q)) in chain.iter().enumerate() {
                    let want = ratio(5, 6) * rational::pow(&ratio(5, 2), i as u32);
                    assert_eq!(q, &want);
                }
            }
        }
    }

    #[test]
    fn oscillation_at_not_in_b_points() {
        for x in [ratio(1, 2), ratio(3, 10), ratio(59, 100), ratio(1, 97)] {
            let p = vas33_oscillation(&x, 6, 12).unwrap().expect("NotInB point");
            assert!(p.gap_lb >= ratio(1, 30));
            let f = FivefoldLimit::new(12);
            let qt = Quotient::compute(&f, &x, &(&p.top - &x), QuotientSide::Right).unwrap();
            let qb = Quotient::compute(&f, &x, &(&p.base - &x), QuotientSide::Right).unwrap();
            assert!(qt.value - qb.value >= ratio(1, 30) - qt.err - qb.err);
        }
        assert!(vas33_oscillation(&ratio(1, 5), 5, 10).unwrap().is_none());
    }

    #[test]
    fn no_m_point_series_is_knotted() {
        let f = SeriesEvaluator::no_m_point(12);
        let r = knot_report(&f, &ratio(1, 3), &int(10), 40).unwrap();
        assert!(r.evidence().verify(&f));
    }
}
