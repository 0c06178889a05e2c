//! One-sided difference quotients over dyadic scale ladders.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::CertifiedFn;
use crate::exact::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientSide {
    Right,
    Left,
}

/// `(f(x+h) - f(x))/h` or `(f(x) - f(x-h))/h` with its error radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotient {
    pub side: QuotientSide,
    #[serde(with = "rational::serde_pq")]
    pub h: Rational,
    #[serde(with = "rational::serde_pq")]
    pub value: Rational,
    #[serde(with = "rational::serde_pq")]
    pub err: Rational,
}

impl Quotient {
    pub fn compute<F: CertifiedFn + ?Sized>(
        f: &F,
        x: &Rational,
        h: &Rational,
        side: QuotientSide,
    ) -> Result<Self> {
        let ex = f.enclose(x)?;
        let (value, err) = match side {
            QuotientSide::Right => {
                let e = f.enclose(&(x + h))?;
                ((&e.value - &ex.value) / h, (&e.err + &ex.err) / h)
            }
            QuotientSide::Left => {
                let e = f.enclose(&(x - h))?;
                ((&ex.value - &e.value) / h, (&e.err + &ex.err) / h)
            }
        };
        Ok(Quotient {
            side,
            h: h.clone(),
            value,
            err,
        })
    }

    pub fn lo(&self) -> Rational {
        &self.value - &self.err
    }

    pub fn hi(&self) -> Rational {
        &self.value + &self.err
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiniEstimate {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub h_min: Rational,
    #[serde(with = "rational::serde_pq")]
    pub h_max: Rational,
    #[serde(with = "rational::serde_pq::option")]
    pub upper_right: Option<Rational>,
    #[serde(with = "rational::serde_pq::option")]
    pub lower_right: Option<Rational>,
    #[serde(with = "rational::serde_pq::option")]
    pub upper_left: Option<Rational>,
    #[serde(with = "rational::serde_pq::option")]
    pub lower_left: Option<Rational>,
    pub certified_right: bool,
    pub certified_left: bool,
    pub quotients: Vec<Quotient>,
}

/// Every error radius is zero or at most 1% of the side's largest quotient.
fn dominated(qs: &[&Quotient]) -> bool {
    let scale = qs.iter().map(|q| q.value.abs()).max().unwrap_or_else(Rational::zero);
    qs.iter().all(|q| q.err.is_zero() || &q.err * int(100) <= scale)
}

impl DiniEstimate {
    fn from_quotients(x: Rational, h_min: Rational, h_max: Rational, quotients: Vec<Quotient>) -> Self {
        let side = |s: QuotientSide| -> Vec<&Quotient> { quotients.iter().filter(|q| q.side == s).collect() };
        let (r, l) = (side(QuotientSide::Right), side(QuotientSide::Left));
        let ext = |qs: &[&Quotient], up: bool| -> Option<Rational> {
            let it = qs.iter().map(|q| q.value.clone());
            if up {
                it.max()
            } else {
                it.min()
            }
        };
        DiniEstimate {
            upper_right: ext(&r, true),
            lower_right: ext(&r, false),
            upper_left: ext(&l, true),
            lower_left: ext(&l, false),
            certified_right: !r.is_empty() && dominated(&r),
            certified_left: !l.is_empty() && dominated(&l),
            x,
            h_min,
            h_max,
            quotients,
        }
    }

    pub fn quotients_on(&self, side: QuotientSide) -> impl Iterator<Item = &Quotient> {
        self.quotients.iter().filter(move |q| q.side == side)
    }
}

/// Quotients at `h = h_min 2^i`, `i < levels`, on every side where `x ± h`
/// stays in the domain.
pub fn dini_estimate<F: CertifiedFn + ?Sized>(
    f: &F,
    x: &Rational,
    h_min: &Rational,
    levels: u32,
) -> Result<DiniEstimate> {
    if !h_min.is_positive() {
        return Err(crate::Error::InvalidArgument("h_min must be positive".into()));
    }
    let scales: Vec<Rational> = (0..levels as i64).map(|i| h_min * rational::pow2(i)).collect();
    dini_estimate_at(f, x, &scales)
}

/// Same as [`dini_estimate`] on an explicit scale set.
pub fn dini_estimate_at<F: CertifiedFn + ?Sized>(
    f: &F,
    x: &Rational,
    scales: &[Rational],
) -> Result<DiniEstimate> {
    let mut quotients = Vec::new();
    for h in scales {
        for side in [QuotientSide::Right, QuotientSide::Left] {
            let probe = match side {
                QuotientSide::Right => x + h,
                QuotientSide::Left => x - h,
            };
            if f.contains(&probe) {
                quotients.push(Quotient::compute(f, x, h, side)?);
            }
        }
    }
    let h_min = scales.iter().min().cloned().unwrap_or_else(Rational::zero);
    let h_max = scales.iter().max().cloned().unwrap_or_else(Rational::zero);
    Ok(DiniEstimate::from_quotients(x.clone(), h_min, h_max, quotients))
}

fn right_mesh_quotients<F: CertifiedFn + ?Sized>(
    f: &F,
    x: &Rational,
    delta: &Rational,
    mesh: u32,
) -> Result<Vec<f64>> {
    let fx = f.enclose(x)?.value;
    let mut out = Vec::with_capacity(mesh as usize);
    for k in 1..=mesh as i64 {
        let h = delta * rational::ratio(k, mesh as i64 + 1);
        let y = x + &h;
        if !f.contains(&y) {
            continue;
        }
        let q = (f.enclose(&y)?.value - &fx) / h;
        out.push(rational::to_f64(&q));
    }
    Ok(out)
}

/// Fraction of the `mesh` equally spaced points `y ∈ (x, x + δ)` whose
/// right quotient is `≤ t`: a mesh surrogate for the density used in the
/// approximate upper right derivative.
pub fn approx_dini_estimate<F: CertifiedFn + ?Sized>(
    f: &F,
    x: &Rational,
    t: f64,
    delta: &Rational,
    mesh: u32,
) -> Result<f64> {
    let qs = right_mesh_quotients(f, x, delta, mesh)?;
    if qs.is_empty() {
        return Ok(0.0);
    }
    Ok(qs.iter().filter(|&&q| q <= t).count() as f64 / qs.len() as f64)
}

/// Smallest `t` whose fraction reaches `level` on the same mesh.
pub fn approx_upper_right<F: CertifiedFn + ?Sized>(
    f: &F,
    x: &Rational,
    delta: &Rational,
    mesh: u32,
    level: f64,
) -> Result<Option<f64>> {
    let mut qs = right_mesh_quotients(f, x, delta, mesh)?;
    if qs.is_empty() {
        return Ok(None);
    }
    qs.sort_by(f64::total_cmp);
    let need = ((level * qs.len() as f64).ceil() as usize).clamp(1, qs.len());
    Ok(Some(qs[need - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::series::SeriesEvaluator;
    use crate::exact::pl::PlFunction;
    use crate::exact::rational::{pow2, ratio};

    fn affine(s: i64) -> PlFunction {
        PlFunction::new(vec![int(-2), int(2)], vec![int(-2 * s), int(2 * s)]).unwrap()
    }

    #[test]
    fn affine_estimates_are_the_slope() {
        let f = affine(3);
        let d = dini_estimate(&f, &ratio(1, 3), &pow2(-10), 8).unwrap();
        for e in [&d.upper_right, &d.lower_right, &d.upper_left, &d.lower_left] {
            assert_eq!(e.clone(), Some(int(3)));
        }
        assert!(d.certified_left && d.certified_right);
        assert_eq!(approx_dini_estimate(&f, &int(0), 3.5, &ratio(1, 2), 50).unwrap(), 1.0);
        assert_eq!(approx_dini_estimate(&f, &int(0), 2.5, &ratio(1, 2), 50).unwrap(), 0.0);
    }

    #[test]
    fn boundary_probes_one_side() {
        let f = PlFunction::new(vec![int(0), int(1)], vec![int(0), int(1)]).unwrap();
        let d = dini_estimate(&f, &int(0), &pow2(-4), 3).unwrap();
        assert!(d.upper_left.is_none() && d.upper_right.is_some());
        assert!(!d.certified_left);
    }

    #[test]
    fn pl_slopes_below_breakpoint_gap() {
        let f = PlFunction::new(
            vec![int(0), ratio(1, 2), int(1)],
            vec![int(0), int(1), ratio(1, 4)],
        )
        .unwrap();
        let d = dini_estimate(&f, &ratio(1, 2), &pow2(-12), 6).unwrap();
        assert_eq!(d.upper_left, Some(int(2)));
        assert_eq!(d.lower_left, Some(int(2)));
        assert_eq!(d.upper_right, Some(ratio(-3, 2)));
    }

    #[test]
    fn takagi_right_quotient_blows_up_at_quarter() {
        let t = SeriesEvaluator::takagi(70);
        let x = ratio(1, 4);
        let d = dini_estimate(&t, &x, &pow2(-60), 61).unwrap();
        let big = d
            .quotients_on(QuotientSide::Right)
            .find(|q| q.lo() > int(10))
            .expect("some scale above 10");
        assert!(big.h >= pow2(-60));
        assert!(d.certified_right);
    }

    #[test]
    fn approx_fraction_is_monotone_in_t() {
        let t = SeriesEvaluator::takagi(30);
        let x = ratio(1, 3);
        let mut last = 0.0;
        for k in -20..20 {
            let fr = approx_dini_estimate(&t, &x, k as f64 * 0.5, &ratio(1, 64), 64).unwrap();
            assert!(fr >= last);
            last = fr;
        }
        let u = approx_upper_right(&t, &x, &ratio(1, 64), 64, 1.0).unwrap().unwrap();
        assert_eq!(approx_dini_estimate(&t, &x, u, &ratio(1, 64), 64).unwrap(), 1.0);
    }

    #[test]
    fn adding_scales_widens_extremes() {
        let t = SeriesEvaluator::takagi(40);
        let x = ratio(2, 7);
        let few = dini_estimate(&t, &x, &pow2(-12), 4).unwrap();
        let more = dini_estimate(&t, &x, &pow2(-16), 8).unwrap();
        assert!(more.upper_right >= few.upper_right);
        assert!(more.lower_right <= few.lower_right);
        assert!(more.upper_left >= few.upper_left);
        assert!(more.lower_left <= few.lower_left);
    }
}
