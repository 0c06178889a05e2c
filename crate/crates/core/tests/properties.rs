//! Randomised checks of the cross-module invariants.

use graphmono::constructions::series::SeriesEvaluator;
use graphmono::differentiation::classify::{mzv_point_class, PointStatus};
use graphmono::differentiation::dini::dini_estimate;
use graphmono::eval::Negated;
use graphmono::exact::rational::{int, parse_pq, pow2, ratio, sqrt_floor, to_pq};
use graphmono::geometry::boxdim::box_count;
use graphmono::geometry::length::graph_length;
use graphmono::geometry::porosity::{porosity_estimate, verify_empty_ball, PorosityConfig};
use graphmono::geometry::rect::{square_avoidance, squares_of_rect, Rect53};
use graphmono::monotonicity::bracket::monotonicity_bracket;
use graphmono::monotonicity::mpoint::refutes;
use graphmono::monotonicity::pc::{check_pc, least_pc, PcOutcome};
use graphmono::monotonicity::refute::{triple_ratio_sq, Side};
use graphmono::{CertifiedFn, PlFunction, Rational};
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn arb_pl() -> impl Strategy<Value = PlFunction> {
    prop::collection::vec(-6i64..=6, 3..9).prop_map(|ys| {
        let xs = (0..ys.len() as i64).map(int).collect();
        PlFunction::new(xs, ys.into_iter().map(int).collect()).unwrap()
    })
}

/// Uneven meshes on [0, 1] with small rational values.
fn arb_unit_pl() -> impl Strategy<Value = PlFunction> {
    prop::collection::vec((1i64..=4, -4i64..=4), 2..8).prop_map(|steps| {
        let total: i64 = steps.iter().map(|s| s.0).sum();
        let mut xs = vec![int(0)];
        let mut ys = vec![int(0)];
        let mut acc = 0;
        for (dx, y) in steps {
            acc += dx;
            xs.push(ratio(acc, total));
            ys.push(ratio(y, 8));
        }
        PlFunction::new(xs, ys).unwrap()
    })
}

fn in_lowest_terms(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_stay_reduced(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let (x, y) = (ratio(a, b), ratio(c, d));
        for r in [&x + &y, &x - &y, &x * &y] {
            prop_assert!(in_lowest_terms(&r));
            prop_assert_eq!(parse_pq(&to_pq(&r)).unwrap(), r);
        }
    }

    #[test]
    fn bracket_is_ordered(f in arb_pl()) {
        let b = monotonicity_bracket(&f, 4);
        prop_assert!(b.c_lo <= b.c_hi);
        prop_assert_eq!(&b.c_hi, &(least_pc(&f) + int(1)));
        if let Some(w) = &b.witness {
            prop_assert!(w.achieved_ratio <= b.c_hi);
        }
    }

    /// Equal-level triples: the ratio R of a triple with f(x) = f(z) forces
    /// the oscillation condition to fail below sqrt(R² - 1).
    #[test]
    fn equal_level_triples_fail_pc(f in arb_pl()) {
        let xs = f.breakpoints();
        let ys = f.values();
        for i in 0..xs.len() {
            for k in i + 2..xs.len() {
                if ys[i] != ys[k] {
                    continue;
                }
                for j in i + 1..k {
                    for side in [Side::L11, Side::L12] {
                        let r2 = triple_ratio_sq(&f, &xs[i], &xs[j], &xs[k], side).unwrap();
                        if r2 <= int(1) {
                            continue;
                        }
                        let c = sqrt_floor(&(r2 - int(1)), 24) - pow2(-30);
                        if c.is_positive() {
                            let cert = check_pc(&f, &c);
                            prop_assert_eq!(cert.outcome, PcOutcome::Fail);
                            prop_assert!(cert.verify(&f));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mpoint_refutation_survives_negation(f in arb_pl(), num in 1i64..64, c in 1i64..4) {
        let (_, hi) = f.domain();
        let y = hi * ratio(num, 64);
        let c = int(c);
        let eps = ratio(1, 2);
        prop_assert_eq!(refutes(&f, &y, &c, &eps, 8), refutes(&Negated(&f), &y, &c, &eps, 8));
    }

    #[test]
    fn dini_upper_dominates_lower(f in arb_unit_pl(), num in 1i64..32) {
        let x = ratio(num, 32);
        let d = dini_estimate(&f, &x, &pow2(-12), 10).unwrap();
        for (u, l) in [(&d.upper_right, &d.lower_right), (&d.upper_left, &d.lower_left)] {
            if let (Some(u), Some(l)) = (u, l) {
                prop_assert!(u >= l);
            }
        }
    }

    /// Below the smallest breakpoint gap every quotient is a segment slope.
    #[test]
    fn dini_on_pl_is_the_adjacent_slope(f in arb_pl(), k in 1usize..7) {
        let k = k.min(f.len() - 2);
        let x = f.breakpoints()[k].clone();
        let d = dini_estimate(&f, &x, &pow2(-8), 4).unwrap();
        let right = f.slope(k);
        let left = f.slope(k - 1);
        prop_assert_eq!(d.upper_right.as_ref(), Some(&right));
        prop_assert_eq!(d.lower_right.as_ref(), Some(&right));
        prop_assert_eq!(d.upper_left.as_ref(), Some(&left));
        prop_assert_eq!(d.lower_left.as_ref(), Some(&left));
    }

    #[test]
    fn classification_is_stable_under_depth(p in 0i64..=997, d in 1u32..5) {
        let x = ratio(p, 997);
        let shallow = mzv_point_class(&x, d).unwrap();
        let deep = mzv_point_class(&x, d + 2).unwrap();
        if let PointStatus::NotInB { level, .. } = shallow.status {
            let kept = matches!(deep.status, PointStatus::NotInB { level: l, .. } if l == level);
            prop_assert!(kept);
        }
    }

    #[test]
    fn series_truncations_agree(num in 0i64..1024, k in 4u32..14, extra in 1u32..6) {
        let x = ratio(num, 1024);
        for (a, b) in [
            (SeriesEvaluator::no_m_point(k), SeriesEvaluator::no_m_point(k + extra)),
            (SeriesEvaluator::takagi(k), SeriesEvaluator::takagi(k + extra)),
        ] {
            let (ea, eb) = (a.enclose(&x).unwrap(), b.enclose(&x).unwrap());
            prop_assert!((&ea.value - &eb.value).abs() <= &ea.err + &eb.err);
        }
    }

    #[test]
    fn squares_tile_the_rectangle(l in -20i64..20, b in -20i64..20, base in 1i64..40, den in 1i64..12) {
        let r = Rect53::new(ratio(l, den), ratio(b, den), ratio(base, den)).unwrap();
        let sq = squares_of_rect(&r);
        prop_assert_eq!(sq.len(), 15);
        let area: Rational = sq.iter().map(|s| &s.side * &s.side).sum();
        prop_assert_eq!(area, r.area());
    }

    /// Every square reported as avoided passes a dense-sampling oracle.
    #[test]
    fn avoided_squares_pass_sampling(f in arb_unit_pl(), l in 0i64..16, b in -8i64..8, base in 1i64..16) {
        let r = Rect53::new(ratio(l, 16), ratio(b, 16), ratio(base, 16)).unwrap();
        if let Some(i) = square_avoidance(&f, &r) {
            let s = &squares_of_rect(&r)[i];
            let (lo, hi) = f.domain();
            for k in 1..200i64 {
                let x = &s.x + &s.side * ratio(k, 200);
                if &x < lo || &x > hi {
                    continue;
                }
                let y = f.eval(&x).unwrap();
                prop_assert!(!(y > s.y && y < s.y1()), "graph enters square {i} at x = {x}");
            }
        }
    }

    #[test]
    fn empty_balls_contain_no_sample(pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 20..200)) {
        let centers: Vec<(f64, f64)> = pts.iter().step_by(7).copied().collect();
        let cfg = PorosityConfig { grid: 8, ..PorosityConfig::default() };
        let rep = porosity_estimate(&pts, &centers, &[0.25, 0.1], &cfg).unwrap();
        prop_assert!(rep.p >= 0.0 && rep.p <= 0.5);
        for ball in &rep.rows {
            if ball.q > 0.0 {
                prop_assert!(verify_empty_ball(&pts, ball, rep.resolution));
            }
        }
    }

    #[test]
    fn box_counts_of_unions_dominate(
        a in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..100),
        b in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..100),
    ) {
        let u: Vec<(f64, f64)> = a.iter().chain(&b).copied().collect();
        for k in 1..7 {
            let s = 2f64.powi(-k);
            prop_assert!(box_count(&u, s) >= box_count(&a, s).max(box_count(&b, s)));
        }
    }

    #[test]
    fn length_brackets_shrink(f in arb_unit_pl()) {
        let mut last: Option<Rational> = None;
        for bits in [4, 8, 16, 32] {
            let l = graph_length(&f, bits);
            prop_assert!(l.lower <= l.upper);
            let gap = &l.upper - &l.lower;
            if let Some(g) = &last {
                prop_assert!(&gap <= g);
            }
            last = Some(gap);
        }
    }
}
