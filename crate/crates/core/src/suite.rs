//! Reproducible acceptance suite. Each criterion produces a table and a
//! pass/fail verdict; randomness is drawn from a ChaCha stream per criterion
//! so tables depend only on the seed.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::fivefold::{all_levels, approximant, locate};
use crate::constructions::invariants::{self, SandwichConstant};
use crate::constructions::peaks::{analytic_tail, peak_build, PeakSumModel};
use crate::constructions::series::{nomp_ratio_bound, nomp_witness, takagi_eval, SeriesEvaluator};
use crate::differentiation::classify::{mzv_point_class, PointStatus};
use crate::differentiation::dini::{Quotient, QuotientSide};
use crate::differentiation::knot::{slope_chain, vas33_oscillation};
use crate::error::Result;
use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, int, pow2, ratio, to_f64, to_pq, Rational};
use crate::geometry::boxdim::{box_dimension, sample_graph};
use crate::geometry::porosity::{porosity_estimate, verify_empty_ball, PorosityConfig};
use crate::geometry::rect::{square_avoidance, Rect53};
use crate::monotonicity::bracket::monotonicity_bracket;
use crate::monotonicity::cover::{cover_2r, verify_cover, Ball};
use crate::monotonicity::mpoint::{certify_triple, mpoint_refute};
use crate::monotonicity::pc::{check_pc, PcOutcome};
use crate::monotonicity::refute::{refute_monotone, triple_ratio_sq, Side, DEFAULT_BUDGET};

pub const CRITERIA: u32 = 14;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }
}

/// One named sub-check of a criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub checks: Vec<Check>,
    pub table: Table,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `criterion N: PASS|FAIL title [failing checks]`.
    pub fn line(&self) -> String {
        let failing: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        if failing.is_empty() {
            format!("criterion {}: PASS {}", self.id, self.title)
        } else {
            format!("criterion {}: FAIL {}; failing: {}", self.id, self.title, failing.join("; "))
        }
    }
}

struct Builder {
    report: CriterionReport,
}

impl Builder {
    fn new(id: u32, title: &str, headers: &[&str]) -> Self {
        Builder {
            report: CriterionReport {
                id,
                title: title.into(),
                checks: Vec::new(),
                table: Table::new(headers),
            },
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.report.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.report.table.push(row);
    }

    fn done(self) -> CriterionReport {
        self.report
    }
}

fn rng_for(seed: u64, id: u32) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(id as u64);
    r
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: u32, seed: u64) -> Result<CriterionReport> {
    match id {
        1 => refinement_invariants(),
        2 => condition_p1(),
        3 => uniform_cauchy(),
        4 => monotonicity_of_limit(),
        5 => variation_growth(),
        6 => no_m_points(),
        7 => slope_law(seed),
        8 => sloped_fraction(seed),
        9 => peak_model(),
        10 => continuity_modulus(seed),
        11 => takagi(),
        12 => dimension(),
        13 => covering(seed),
        14 => seeded_reruns(seed),
        _ => Err(crate::Error::InvalidArgument(format!("no criterion {id}"))),
    }
}

pub fn run_all(seed: u64) -> Result<Vec<CriterionReport>> {
    (1..=CRITERIA).map(|i| run_criterion(i, seed)).collect()
}

fn refinement_invariants() -> Result<CriterionReport> {
    let mut b = Builder::new(
        1,
        "refinement invariants (i)-(x) exact, n <= 8; sandwich i <= 3 on n <= 5",
        &["item", "level", "depth", "violations", "example"],
    );
    let ls = all_levels(8)?;
    let third = ratio(1, 3);
    let sixth = ratio(1, 6);
    let mut totals = [0usize; 8];
    let mut record = |b: &mut Builder, slot: usize, item: &str, n: u32, i: u32, v: Vec<invariants::Violation>| {
        totals[slot] += v.len();
        let example = v.first().map(|x| x.detail.clone()).unwrap_or_default();
        b.row([item.to_string(), n.to_string(), i.to_string(), v.len().to_string(), example]);
    };
    for l in &ls {
        let n = l.level;
        record(&mut b, 0, "(i) adjacent lengths", n, 0, invariants::adjacent_lengths(l));
        record(&mut b, 1, "(ii)-(iv) length bounds", n, 0, invariants::length_bounds(l));
        if n > 0 {
            record(&mut b, 2, "(v) values preserved", n, 0, invariants::values_preserved(&ls[n as usize - 1], l));
        }
        record(&mut b, 3, "(vi) value step <= 2^-n/6", n, 0, invariants::value_steps(l, &sixth));
        record(&mut b, 4, "(vi') value step <= 2^-n/3", n, 0, invariants::value_steps(l, &third));
        record(&mut b, 5, "(vii) slope gap", n, 0, invariants::slope_gap(l));
        record(&mut b, 5, "(x) unit range", n, 0, invariants::unit_range(l));
    }
    for n in 0..=5usize {
        for i in 1..=3usize {
            let (c, f) = (&ls[n], &ls[n + i]);
            record(&mut b, 6, "(viii) sandwich, sum 6^-j", n as u32, i as u32, invariants::sandwich(c, f, SandwichConstant::Geometric6));
            record(&mut b, 7, "(viii') sandwich, sharp", n as u32, i as u32, invariants::sandwich(c, f, SandwichConstant::Sharp));
            record(&mut b, 7, "(ix) sloped interior", n as u32, i as u32, invariants::sloped_interior(c, f));
        }
    }
    b.check("(i)", totals[0] == 0, format!("{} violations", totals[0]));
    b.check("(ii)-(iv)", totals[1] == 0, format!("{} violations", totals[1]));
    b.check("(v)", totals[2] == 0, format!("{} violations", totals[2]));
    b.check("(vi)", totals[3] == 0, format!("{} violations; sharp factor 1/3 gives {}", totals[3], totals[4]));
    b.check("(vii),(x)", totals[5] == 0, format!("{} violations", totals[5]));
    b.check("(viii)", totals[6] == 0, format!("{} violations; sharp constant gives {}", totals[6], totals[7]));
    b.check("(viii'),(ix)", totals[7] == 0, format!("{} violations", totals[7]));
    Ok(b.done())
}

fn condition_p1() -> Result<CriterionReport> {
    let mut b = Builder::new(2, "check_pc(f_n, 1) = Pass for n <= 5", &["n", "outcome", "certificate_verifies"]);
    for n in 0..=5 {
        let f = approximant(n)?.function;
        let cert = check_pc(&f, &int(1));
        let ok = cert.verify(&f);
        b.check(&format!("n={n}"), cert.outcome == PcOutcome::Pass && ok, format!("{:?}", cert.outcome));
        b.row([n.to_string(), format!("{:?}", cert.outcome), ok.to_string()]);
    }
    Ok(b.done())
}

fn uniform_cauchy() -> Result<CriterionReport> {
    let mut b = Builder::new(3, "sup |f_{n+1} - f_n| <= 2^-n for n <= 7", &["n", "sup_diff", "bound"]);
    let ls = all_levels(8)?;
    for n in 0..=7usize {
        let d = ls[n].function.sup_diff(&ls[n + 1].function)?;
        let bound = pow2(-(n as i64));
        b.check(&format!("n={n}"), d <= bound, to_pq(&d));
        b.row([n.to_string(), to_pq(&d), to_pq(&bound)]);
    }
    Ok(b.done())
}

fn monotonicity_of_limit() -> Result<CriterionReport> {
    let mut b = Builder::new(4, "f_5: bracket c_hi <= 2, no refutation at c = 2", &["quantity", "value"]);
    let f = approximant(5)?.function;
    let br = monotonicity_bracket(&f, DEFAULT_BUDGET);
    let refuted = refute_monotone(&f, &int(2), DEFAULT_BUDGET);
    b.row(["least_pc".into(), to_pq(&br.least_pc)]);
    b.row(["c_hi".into(), to_pq(&br.c_hi)]);
    b.row(["c_lo".into(), to_pq(&br.c_lo)]);
    b.row(["refutation_at_2".into(), refuted.as_ref().map_or("none".into(), |w| format!("{} {} {}", w.x, w.y, w.z))]);
    b.check("least_pc <= 1", br.least_pc <= Rational::one(), to_pq(&br.least_pc));
    b.check("c_hi <= 2", br.c_hi <= int(2), to_pq(&br.c_hi));
    b.check("no witness at c = 2", refuted.is_none(), "refute_monotone");
    Ok(b.done())
}

fn variation_growth() -> Result<CriterionReport> {
    let mut b = Builder::new(5, "Var(f_n) strictly increasing, Var(f_8) > 3 Var(f_4)", &["n", "variation", "length_lower"]);
    let ls = all_levels(8)?;
    let vars: Vec<Rational> = ls.iter().map(|l| l.function.total_variation()).collect();
    for l in &ls {
        let len = crate::geometry::length::graph_length(&l.function, 24);
        b.row([l.level.to_string(), to_pq(&vars[l.level as usize]), f6(to_f64(&len.lower))]);
    }
    let increasing = (2..=8).all(|n| vars[n] > vars[n - 1]);
    b.check("strictly increasing", increasing, "n = 2..8");
    let three4 = int(3) * &vars[4];
    b.check(
        "Var(f_8) > 3 Var(f_4)",
        vars[8] > three4,
        format!("{} vs {}", to_pq(&vars[8]), to_pq(&three4)),
    );
    Ok(b.done())
}

fn no_m_points() -> Result<CriterionReport> {
    let mut b = Builder::new(
        6,
        "series without M-points: certified refutation at 100 grid points, c = 10",
        &["y", "x", "z", "quotient_lb", "witness_quotient_lb"],
    );
    let f = SeriesEvaluator::no_m_point(12);
    let c = int(10);
    let bound = nomp_ratio_bound(5);
    b.check("bound(5) > 10", bound > c, to_pq(&bound));
    let (mut refuted, mut witnessed) = (0, 0);
    for k in 0..100i64 {
        let y = ratio(k, 100);
        let r = mpoint_refute(&f, &y, &c, &ratio(1, 100), 30)?;
        let w = nomp_witness(&y, 5);
        let wq = match certify_triple(&f, &w.x, &y, &w.z, &c)? {
            Ok(Some(q)) => q,
            _ => int(0),
        };
        if r.as_ref().is_some_and(|r| r.verify(&f) && r.quotient_lb > c) {
            refuted += 1;
        }
        if wq > bound {
            witnessed += 1;
        }
        b.row([
            to_pq(&y),
            r.as_ref().map_or("-".into(), |r| to_pq(&r.x)),
            r.as_ref().map_or("-".into(), |r| to_pq(&r.z)),
            r.as_ref().map_or("-".into(), |r| f6(to_f64(&r.quotient_lb))),
            f6(to_f64(&wq)),
        ]);
    }
    b.check("mesh refutations", refuted == 100, format!("{refuted}/100"));
    b.check("n = 5 witness beats bound", witnessed == 100, format!("{witnessed}/100"));
    Ok(b.done())
}

fn random_unit_rational(rng: &mut ChaCha8Rng) -> Rational {
    let den: i64 = rng.gen_range(2..100_000);
    Rational::new(rng.gen_range(1..den).into(), den.into())
}

fn slope_law(seed: u64) -> Result<CriterionReport> {
    let mut b = Builder::new(
        7,
        "slope law (5/6)(5/2)^(i-1) for i <= 6; oscillation >= 1/30 at 50 points outside B",
        &["kind", "point_or_block", "i_or_depth", "value"],
    );
    let mut law_ok = true;
    for x in [ratio(1, 2), ratio(7, 13), ratio(3, 10)] {
        for blk in locate(&x, 2)?.into_iter().filter(|b| b.is_flat()) {
            for (i, (sb, q)) in slope_chain(&blk, 6)?.iter().enumerate() {
                let want = ratio(5, 6) * rational::pow(&ratio(5, 2), i as u32);
                law_ok &= q == &want;
                b.row(["slope".into(), format!("[{}, {}]", sb.a, sb.b), (i + 1).to_string(), to_pq(q)]);
            }
        }
    }
    b.check("slope law", law_ok, "exact");
    let mut rng = rng_for(seed, 7);
    let (mut certified, mut tried) = (0, 0);
    let f = crate::constructions::fivefold::FivefoldLimit::new(14);
    while certified < 50 && tried < 10_000 {
        tried += 1;
        let x = random_unit_rational(&mut rng);
        let Some(p) = vas33_oscillation(&x, 8, 14)? else { continue };
        let qt = Quotient::compute(&f, &x, &(&p.top - &x), QuotientSide::Right)?;
        let qb = Quotient::compute(&f, &x, &(&p.base - &x), QuotientSide::Right)?;
        let direct = qt.lo() - qb.hi();
        if p.gap_lb >= ratio(1, 30) && direct >= ratio(1, 30) {
            certified += 1;
        }
        b.row(["oscillation".into(), to_pq(&x), "8".into(), f6(to_f64(&direct))]);
    }
    b.check("oscillation points", certified >= 50, format!("{certified} certified of {tried} draws"));
    Ok(b.done())
}

fn sloped_fraction(seed: u64) -> Result<CriterionReport> {
    let mut b = Builder::new(8, "fraction in B_1..B_d nonincreasing in d, < 0.35 at d = 8", &["d", "fraction"]);
    let mut rng = rng_for(seed, 8);
    let pts: Vec<Rational> = (0..10_000).map(|_| random_unit_rational(&mut rng)).collect();
    let mut in_b = [0usize; 9];
    for x in &pts {
        let c = mzv_point_class(x, 8)?;
        let last = match c.status {
            PointStatus::InBUpTo(_) => 8,
            PointStatus::NotInB { level, .. } => level - 1,
        };
        for slot in in_b.iter_mut().take(last as usize + 1).skip(2) {
            *slot += 1;
        }
    }
    let frac: Vec<f64> = in_b.iter().map(|&c| c as f64 / pts.len() as f64).collect();
    for (d, fr) in frac.iter().enumerate().skip(2) {
        b.row([d.to_string(), f6(*fr)]);
    }
    b.check("nonincreasing", (3..=8).all(|d| frac[d] <= frac[d - 1]), "d = 2..8");
    b.check("< 0.35 at d = 8", frac[8] < 0.35, f6(frac[8]));
    Ok(b.done())
}

pub const PEAKS: usize = 6;
pub const PEAK_GRID: u32 = 12;

fn peak_model() -> Result<CriterionReport> {
    let mut b = Builder::new(9, "peak-sum model, N = 6", &["part", "key", "value"]);
    let model = peak_build(PEAKS, PEAK_GRID)?;
    let viol = model.violations();
    b.check("(a) invariants", viol.is_empty(), viol.join("; "));
    for n in 0..=PEAKS {
        b.row(["model".into(), format!("peak {n}"), format!("q={} a={:.3e} s={:.3e}", model.q[n], to_f64(&model.a[n]), to_f64(&model.s[n]))]);
    }
    let g = model.partial_sum_pl(PEAKS);
    let (avoided, total) = avoidance_grid(&g, &model.epsilon[PEAKS]);
    b.row(["avoidance".into(), "rectangles".into(), format!("{avoided}/{total}")]);
    b.check("(b) square avoidance", avoided == total, format!("{avoided}/{total}"));

    let wit = model.peak_witness(PEAKS, PEAKS);
    let at_triple = triple_ratio_sq(&g, &wit.x, &wit.y, &wit.z, Side::L11).unwrap_or_else(Rational::zero);
    let found = refute_monotone(&g, &int(5), DEFAULT_BUDGET);
    b.row(["witness".into(), "predicted bound".into(), f6(to_f64(&wit.bound))]);
    b.row(["witness".into(), "ratio at predicted triple".into(), f6(to_f64(&at_triple).sqrt())]);
    b.row(["witness".into(), "refute_monotone ratio".into(), found.as_ref().map_or("none".into(), |w| f6(to_f64(&w.achieved_ratio)))]);
    let pass = at_triple >= int(25)
        && at_triple >= &wit.bound * &wit.bound
        && found.as_ref().is_some_and(|w| w.achieved_ratio >= int(5) && w.refutes(&g, &int(5)));
    b.check("(c) witness ratio >= 5", pass, f6(to_f64(&at_triple).sqrt()));

    let (p, scales, verified) = peak_porosity(&g)?;
    for (r, q) in &scales {
        b.row(["porosity".into(), format!("r={r}"), f6(*q)]);
    }
    b.check("(d) porosity >= 1/6 - 0.02", p >= 1.0 / 6.0 - 0.02 && verified, format!("p = {}", f6(p)));
    Ok(b.done())
}

/// 20 × 20 × 5 rectangles with base at least `eps`, covering the graph region.
pub fn avoidance_grid(g: &PlFunction, eps: &Rational) -> (usize, usize) {
    let bases = [eps.clone(), eps * int(2), ratio(1, 4), ratio(1, 2), int(1)];
    let top = g.max_value().clone();
    let mut rects = Vec::new();
    for base in &bases {
        for i in 0..20i64 {
            let left = ratio(-1, 10) - base / int(2) + ratio(6, 5) * ratio(i, 19);
            for j in 0..20i64 {
                let bottom = ratio(-1, 10) - base * ratio(3, 10) + (&top + ratio(1, 5)) * ratio(j, 19);
                rects.push(Rect53::new(left.clone(), bottom, base.clone()).expect("positive base"));
            }
        }
    }
    let avoided = rects.iter().filter(|r| square_avoidance(g, r).is_some()).count();
    (avoided, rects.len())
}

const POROSITY_SAMPLES: f64 = 1e5;

/// Porosity at four dyadic radii, centres on every 500th sample.
fn peak_porosity(g: &PlFunction) -> Result<(f64, Vec<(f64, f64)>, bool)> {
    let length = to_f64(&crate::geometry::length::graph_length(g, 24).upper);
    let spacing = length / POROSITY_SAMPLES;
    let samples = sample_graph(g, spacing);
    let centers: Vec<(f64, f64)> = samples.iter().step_by(500).copied().collect();
    let radii = [0.125, 0.0625, 0.03125, 0.015625];
    let cfg = PorosityConfig {
        resolution: spacing / 2.0,
        ..PorosityConfig::default()
    };
    let rep = porosity_estimate(&samples, &centers, &radii, &cfg)?;
    let verified = rep.rows.iter().all(|ball| verify_empty_ball(&samples, ball, cfg.resolution));
    Ok((rep.p, radii.iter().copied().zip(rep.per_scale.iter().copied()).collect(), verified))
}

fn continuity_modulus(seed: u64) -> Result<CriterionReport> {
    let mut b = Builder::new(10, "modulus of continuity: sum |df| <= 3 eps on families of length < delta", &["family", "intervals", "total_length", "sum_abs_diff_plus_tail"]);
    let model = peak_build(PEAKS, PEAK_GRID)?;
    let eps = ratio(1, 100);
    let cm = model.continuity_modulus(&eps)?;
    let g = model.partial_sum_pl(PEAKS);
    let tail2 = int(2) * analytic_tail(PEAKS);
    let cap = int(3) * &eps;
    let mut rng = rng_for(seed, 10);
    let mut worst = Rational::zero();
    let mut all_ok = true;
    for fam in 0..1000 {
        let ivs = random_family(&mut rng, &cm.delta, &model, fam % 2 == 0);
        let total: Rational = ivs.iter().map(|(a, z)| z - a).sum();
        let mut sum = tail2.clone();
        for (a, z) in &ivs {
            sum += (g.eval(z)? - g.eval(a)?).abs();
        }
        all_ok &= total < cm.delta && sum <= cap;
        if sum > worst {
            worst = sum.clone();
        }
        if fam < 50 {
            b.row([fam.to_string(), ivs.len().to_string(), format!("{:.3e}", to_f64(&total)), format!("{:.6e}", to_f64(&sum))]);
        }
    }
    b.check("m and delta", cm.remainder <= eps, format!("m = {}, delta = {:.3e}", cm.m, to_f64(&cm.delta)));
    b.check("all families", all_ok, format!("worst {:.6e} vs {}", to_f64(&worst), to_pq(&cap)));
    Ok(b.done())
}

/// Disjoint intervals of total length below `delta`; with `near_peaks` the
/// intervals are placed on peak flanks.
fn random_family(rng: &mut ChaCha8Rng, delta: &Rational, model: &PeakSumModel, near_peaks: bool) -> Vec<(Rational, Rational)> {
    const GRID: i64 = 1 << 40;
    let k: usize = rng.gen_range(1..=20);
    let budget = to_f64(delta) * rng.gen_range(0.05..0.999);
    let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
    let wsum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w *= budget / wsum);
    let mut starts: Vec<f64> = (0..k)
        .map(|i| {
            if near_peaks {
                let n = i % (model.last + 1);
                let q = to_f64(&model.q[n]);
                (q - rng.gen_range(0.0..2.0) * to_f64(&model.b[n])).clamp(0.0, 1.0 - budget)
            } else {
                rng.gen_range(0.0..1.0 - budget)
            }
        })
        .collect();
    starts.sort_by(f64::total_cmp);
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(k);
    for (s, w) in starts.iter().zip(&weights) {
        let lo = out.last().map_or(0, |(_, z)| (to_f64(z) * GRID as f64).ceil() as i64);
        let a = ((s * GRID as f64).floor() as i64).max(lo);
        let z = a + ((w * GRID as f64).floor() as i64);
        if z <= a || z > GRID {
            continue;
        }
        out.push((Rational::new(a.into(), GRID.into()), Rational::new(z.into(), GRID.into())));
    }
    if out.is_empty() {
        out.push((int(0), Rational::new(1.into(), GRID.into())));
    }
    out
}

fn takagi() -> Result<CriterionReport> {
    let mut b = Builder::new(11, "Takagi: exact dyadic values, right quotient at 1/4 exceeds 10", &["quantity", "value"]);
    let t_half = takagi_eval(&ratio(1, 2), 70);
    let t_quarter = takagi_eval(&ratio(1, 4), 70);
    b.check("T(1/2) = T(1/4) = 1/2", t_half.value == ratio(1, 2) && t_half.err.is_zero() && t_quarter.value == ratio(1, 2) && t_quarter.err.is_zero(), format!("{} {}", t_half.value, t_quarter.value));
    let f = SeriesEvaluator::takagi(70);
    let x = ratio(1, 4);
    let mut best: Option<(u32, Rational)> = None;
    for k in 3..=60u32 {
        let q = Quotient::compute(&f, &x, &pow2(-(k as i64)), QuotientSide::Right)?;
        let lo = q.lo();
        b.row([format!("Q(2^-{k})"), f6(to_f64(&q.value))]);
        if lo > int(10) && best.is_none() {
            best = Some((k, lo));
        }
    }
    b.check("quotient > 10", best.is_some(), best.map_or("none".into(), |(k, lo)| format!("2^-{k}: {}", f6(to_f64(&lo)))));
    Ok(b.done())
}

fn dimension() -> Result<CriterionReport> {
    let mut b = Builder::new(12, "box-counting slopes", &["set", "side", "count"]);
    let f8 = approximant(8)?.function;
    let s8 = sample_graph(&f8, 1.0 / 16384.0);
    let d8 = box_dimension(&s8, 1.0 / 4096.0, 1.0 / 8.0)?;
    let seg: Vec<(f64, f64)> = (0..=100_000).map(|i| (i as f64 / 1e5 * 0.8, 0.3 + 0.4 * i as f64 / 1e5)).collect();
    let dseg = box_dimension(&seg, 1.0 / 1024.0, 0.25)?;
    let sq: Vec<(f64, f64)> = (0..400)
        .flat_map(|i| (0..400).map(move |j| (i as f64 / 400.0 + 1e-4, j as f64 / 400.0 + 1e-4)))
        .collect();
    let dsq = box_dimension(&sq, 1.0 / 256.0, 0.25)?;
    for (name, d) in [("f_8", &d8), ("segment", &dseg), ("square", &dsq)] {
        for (side, count) in &d.counts {
            b.row([name.into(), format!("{side:e}"), count.to_string()]);
        }
    }
    b.check("f_8 in [0.9, 1.15]", (0.9..=1.15).contains(&d8.slope), f6(d8.slope));
    b.check("segment in [0.95, 1.05]", (0.95..=1.05).contains(&dseg.slope), f6(dseg.slope));
    b.check("square in [1.9, 2.1]", (1.9..=2.1).contains(&dsq.slope), f6(dsq.slope));
    Ok(b.done())
}

fn covering(seed: u64) -> Result<CriterionReport> {
    let mut b = Builder::new(13, "greedy cover on 1000 random families, delta = 2.5", &["family", "balls", "chosen", "ok"]);
    let mut rng = rng_for(seed, 13);
    let mut bad = 0;
    for fam in 0..1000 {
        let k: usize = rng.gen_range(1..=50);
        let balls: Vec<Ball> = (0..k)
            .map(|_| Ball::new(vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)], rng.gen_range(0.001..0.2)))
            .collect();
        let chosen = cover_2r(&balls, 2.5)?;
        let ok = verify_cover(&balls, &chosen, 2.5);
        if !ok {
            bad += 1;
        }
        if fam < 50 {
            b.row([fam.to_string(), k.to_string(), chosen.len().to_string(), ok.to_string()]);
        }
    }
    b.check("disjoint and covering", bad == 0, format!("{bad} bad families"));
    Ok(b.done())
}

/// Byte-identical reproduction is checked by rerunning the suite; here the
/// report records that the seed alone drives every table.
fn seeded_reruns(seed: u64) -> Result<CriterionReport> {
    let mut b = Builder::new(14, "seeded tables are reproducible", &["criterion", "identical"]);
    let mut same = true;
    for id in [8u32, 13] {
        let a = run_criterion(id, seed)?;
        let c = run_criterion(id, seed)?;
        let eq = a == c;
        same &= eq;
        b.row([id.to_string(), eq.to_string()]);
    }
    b.check("identical reruns", same, "criteria 8 and 13");
    Ok(b.done())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_line_names_checks() {
        let mut b = Builder::new(3, "t", &["h"]);
        b.check("ok", true, "");
        b.check("bad", false, "why");
        let r = b.done();
        assert!(!r.pass());
        assert_eq!(r.line(), "criterion 3: FAIL t; failing: bad (why)");
    }
}
