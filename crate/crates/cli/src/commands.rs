use std::path::Path;

use anyhow::{bail, Context, Result};
use graphmono::differentiation::{d_set_membership, dini_estimate, knot_report, mzv_point_class, vas33_oscillation, KnotReport};
use graphmono::exact::rational::{pow2, to_f64, to_pq};
use graphmono::geometry::rect::squares_of_rect;
use graphmono::geometry::{box_dimension, graph_length, porosity_estimate, sample_graph, square_avoidance, PorosityConfig, Rect53};
use graphmono::monotonicity::{check_pc, monotonicity_bracket, mpoint_refute, refute_monotone, PcOutcome};
use graphmono::suite::{self, CriterionReport};
use graphmono::{Error, PlFunction};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use crate::args::*;
use crate::certificate::{extract, Certificate, Claim};
use crate::output::{emit_json, json_string, write_atomic, write_csv};
use crate::source::Source;
use crate::svg::{render_svg, Overlay};

/// Result of a successful run: whether the checked property held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    CheckFailed,
}

impl Outcome {
    fn failed_if(cond: bool) -> Self {
        if cond {
            Outcome::CheckFailed
        } else {
            Outcome::Success
        }
    }
}

pub fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::CheckPc(a) => check_pc_cmd(a),
        Command::Refute(a) => refute(a),
        Command::Bracket(a) => bracket(a),
        Command::Mpoint(a) => mpoint(a),
        Command::Dini(a) => dini(a),
        Command::Classify(a) => classify(a),
        Command::Avoid(a) => avoid(a),
        Command::Porosity(a) => porosity(a),
        Command::Boxdim(a) => boxdim(a),
        Command::Length(a) => length(a),
        Command::Plot(a) => plot(a),
        Command::Reproduce(a) => reproduce(a),
        Command::Verify(a) => verify(a),
    }
}

fn points_csv(f: &PlFunction) -> Vec<[String; 2]> {
    f.breakpoints().iter().zip(f.values()).map(|(x, y)| [to_pq(x), to_pq(y)]).collect()
}

fn construct(a: ConstructArgs) -> Result<Outcome> {
    let src = Source::build(a.kind, a.level, a.grid, a.truncation, a.sample_bits)?;
    let doc = src.constructed()?;
    if let Some(p) = &a.csv {
        write_csv(p, &["x", "y"], points_csv(&doc.function))?;
    }
    emit_json(a.out.out.as_deref(), &doc)?;
    Ok(Outcome::Success)
}

fn check_pc_cmd(a: CheckPcArgs) -> Result<Outcome> {
    let src = Source::from_args(&a.source)?;
    let f = src.pl()?;
    let cert = check_pc(&f, &a.c.0);
    let failed = cert.outcome == PcOutcome::Fail;
    eprintln!("{:?}", cert.outcome);
    let doc = Certificate {
        source: src.clone(),
        claim: Claim::Pc(cert),
    };
    emit_json(a.out.out.as_deref(), &doc)?;
    Ok(Outcome::failed_if(failed))
}

fn refute(a: RefuteArgs) -> Result<Outcome> {
    let src = Source::from_args(&a.source)?;
    let f = src.pl()?;
    match refute_monotone(&f, &a.c.0, a.budget) {
        Some(w) => {
            eprintln!("refuted: ratio >= {}", to_f64(&w.achieved_ratio));
            let doc = Certificate {
                source: src.clone(),
                claim: Claim::Triple { c: a.c.0.clone(), witness: w },
            };
            emit_json(a.out.out.as_deref(), &doc)?;
            Ok(Outcome::CheckFailed)
        }
        None => {
            eprintln!("no witness found");
            emit_json(a.out.out.as_deref(), &json!({ "c": to_pq(&a.c.0), "witness": null }))?;
            Ok(Outcome::Success)
        }
    }
}

fn bracket(a: BracketArgs) -> Result<Outcome> {
    let src = Source::from_args(&a.source)?;
    let f = src.pl()?;
    let b = monotonicity_bracket(&f, a.budget);
    let cert = b.witness.clone().map(|w| Certificate {
        source: src.clone(),
        claim: Claim::Triple {
            c: b.c_lo.clone() - pow2(-40),
            witness: w,
        },
    });
    emit_json(a.out.out.as_deref(), &json!({ "bracket": b, "certificate": cert }))?;
    Ok(Outcome::Success)
}

fn mpoint(a: MpointArgs) -> Result<Outcome> {
    let src = Source::from_args(&a.source)?.certified(a.depth);
    let f = src.evaluator()?;
    match mpoint_refute(&f, &a.y.0, &a.c.0, &a.eps.0, a.mesh) {
        Ok(Some(r)) => {
            let doc = Certificate {
                source: src,
                claim: Claim::Mpoint(r),
            };
            emit_json(a.out.out.as_deref(), &doc)?;
            Ok(Outcome::CheckFailed)
        }
        Ok(None) => {
            emit_json(a.out.out.as_deref(), &json!({ "y": to_pq(&a.y.0), "status": "not-refuted" }))?;
            Ok(Outcome::Success)
        }
        Err(Error::Inconclusive(msg)) => {
            emit_json(a.out.out.as_deref(), &json!({ "y": to_pq(&a.y.0), "status": "inconclusive", "detail": msg }))?;
            Ok(Outcome::Success)
        }
        Err(e) => Err(e.into()),
    }
}

fn dini(a: DiniArgs) -> Result<Outcome> {
    let src = Source::from_args(&a.source)?.certified(a.depth);
    let f = src.evaluator()?;
    let est = dini_estimate(&f, &a.x.0, &pow2(-(a.levels as i64)), a.levels)?;
    if let Some(p) = &a.csv {
        let rows: Vec<[String; 5]> = est
            .quotients
            .iter()
            .map(|q| [format!("{:?}", q.side), to_pq(&q.h), to_pq(&q.value), to_pq(&q.err), format!("{:.9e}", to_f64(&q.value))])
            .collect();
        write_csv(p, &["side", "h", "value", "err", "value_f64"], rows)?;
    }
    let (knot, cert) = match &a.threshold {
        Some(t) => {
            let r = knot_report(&f, &a.x.0, &t.0, a.levels)?;
            let cert = match &r {
                KnotReport::Evidence(ev) => Some(Certificate {
                    source: src.clone(),
                    claim: Claim::Knot(ev.clone()),
                }),
                KnotReport::NoEvidence(_) => None,
            };
            (Some(r), cert)
        }
        None => (None, None),
    };
    emit_json(a.out.out.as_deref(), &json!({ "estimate": est, "knot": knot, "certificate": cert }))?;
    Ok(Outcome::Success)
}

fn classify(a: ClassifyArgs) -> Result<Outcome> {
    let class = mzv_point_class(&a.x.0, a.depth)?;
    let d = d_set_membership(&a.x.0, a.max_steps);
    let osc = if a.oscillation {
        vas33_oscillation(&a.x.0, a.depth, a.depth + 6)?
    } else {
        None
    };
    emit_json(a.out.out.as_deref(), &json!({ "class": class, "d_membership": d, "oscillation": osc }))?;
    Ok(Outcome::Success)
}

fn parse_rect(s: &str) -> Result<Rect53> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        bail!("rectangle {s:?} must be left,bottom,base");
    }
    let q = |t: &str| t.parse::<Q>().map(|q| q.0).map_err(anyhow::Error::msg);
    Ok(Rect53::new(q(parts[0])?, q(parts[1])?, q(parts[2])?)?)
}

fn avoid(a: AvoidArgs) -> Result<Outcome> {
    let src = Source::from_args(&a.source)?;
    let g = src.pl()?;
    let rects: Vec<Rect53> = a.rects.iter().map(|s| parse_rect(s)).collect::<Result<_>>()?;
    let found: Vec<Option<usize>> = rects.par_iter().map(|r| square_avoidance(&g, r)).collect();
    let results: Vec<_> = rects.iter().zip(&found).map(|(r, s)| json!({ "rect": r, "square": s })).collect();
    let certs: Vec<Certificate> = rects
        .iter()
        .zip(&found)
        .filter_map(|(r, s)| {
            s.map(|square| Certificate {
                source: src.clone(),
                claim: Claim::Avoid { rect: r.clone(), square },
            })
        })
        .collect();
    if let Some(p) = &a.svg {
        let svg = render_svg(&[g.to_f64_points()], &avoided_overlay(&rects, &found))?;
        write_atomic(p, svg.as_bytes())?;
    }
    emit_json(a.out.out.as_deref(), &json!({ "results": results, "certificates": certs }))?;
    Ok(Outcome::failed_if(found.iter().any(Option::is_none)))
}

fn avoided_overlay(rects: &[Rect53], found: &[Option<usize>]) -> Overlay {
    let squares = rects
        .iter()
        .zip(found)
        .filter_map(|(r, s)| s.map(|i| squares_of_rect(r).swap_remove(i)))
        .map(|s| (to_f64(&s.x), to_f64(&s.y), to_f64(&s.side)))
        .collect();
    Overlay { squares, balls: Vec::new() }
}

fn porosity(a: PorosityArgs) -> Result<Outcome> {
    if a.samples == 0 || a.center_step == 0 {
        bail!("--samples and --center-step must be positive");
    }
    let g = Source::from_args(&a.source)?.pl()?;
    let length = to_f64(&graph_length(&g, 24).upper);
    let spacing = length / a.samples as f64;
    let samples = sample_graph(&g, spacing);
    let centers: Vec<(f64, f64)> = samples.iter().step_by(a.center_step).copied().collect();
    let cfg = PorosityConfig {
        grid: a.search_grid,
        resolution: spacing / 2.0,
        perturb: a.perturb,
        ..PorosityConfig::default()
    };
    let rep = porosity_estimate(&samples, &centers, &a.radii, &cfg)?;
    if let Some(p) = &a.csv {
        let rows: Vec<[String; 6]> = rep
            .rows
            .iter()
            .map(|b| [b.center.0, b.center.1, b.r, b.y.0, b.y.1, b.q].map(|v| format!("{v:.9}")))
            .collect();
        write_csv(p, &["cx", "cy", "r", "yx", "yy", "q"], rows)?;
    }
    if let Some(p) = &a.svg {
        let balls = a
            .radii
            .iter()
            .filter_map(|&r| rep.rows.iter().filter(|b| b.r == r).min_by(|x, y| x.q.total_cmp(&y.q)))
            .flat_map(|b| [(b.center.0, b.center.1, b.r), (b.y.0, b.y.1, b.q * b.r)])
            .collect();
        let svg = render_svg(&[g.to_f64_points()], &Overlay { squares: Vec::new(), balls })?;
        write_atomic(p, svg.as_bytes())?;
    }
    emit_json(
        a.out.out.as_deref(),
        &json!({ "estimate": "sampled", "p": rep.p, "radii": rep.radii, "per_scale": rep.per_scale, "resolution": rep.resolution, "samples": samples.len(), "centers": centers.len() }),
    )?;
    Ok(Outcome::Success)
}

fn boxdim(a: BoxdimArgs) -> Result<Outcome> {
    let g = Source::from_args(&a.source)?.pl()?;
    let samples = sample_graph(&g, a.spacing);
    let d = box_dimension(&samples, a.side_min, a.side_max)?;
    if let Some(p) = &a.csv {
        let rows: Vec<[String; 2]> = d.counts.iter().map(|(s, c)| [format!("{s:e}"), c.to_string()]).collect();
        write_csv(p, &["side", "count"], rows)?;
    }
    emit_json(a.out.out.as_deref(), &json!({ "estimate": "sampled", "slope": d.slope, "counts": d.counts, "samples": samples.len() }))?;
    Ok(Outcome::Success)
}

fn length(a: LengthArgs) -> Result<Outcome> {
    let g = Source::from_args(&a.source)?.pl()?;
    emit_json(a.out.out.as_deref(), &graph_length(&g, a.bits))?;
    Ok(Outcome::Success)
}

fn plot(a: PlotArgs) -> Result<Outcome> {
    let g = Source::from_args(&a.source)?.pl()?;
    let rects: Vec<Rect53> = a.rects.iter().map(|s| parse_rect(s)).collect::<Result<_>>()?;
    let found: Vec<Option<usize>> = rects.iter().map(|r| square_avoidance(&g, r)).collect();
    let svg = render_svg(&[g.to_f64_points()], &avoided_overlay(&rects, &found))?;
    write_atomic(&a.out, svg.as_bytes())?;
    Ok(Outcome::Success)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    seed: Option<u64>,
    criteria: Option<Vec<u32>>,
}

fn write_report(dir: &Path, r: &CriterionReport) -> Result<()> {
    let stem = format!("criterion_{:02}", r.id);
    write_atomic(&dir.join(format!("{stem}.json")), json_string(r)?.as_bytes())?;
    let headers: Vec<&str> = r.table.headers.iter().map(String::as_str).collect();
    write_csv(&dir.join(format!("{stem}.csv")), &headers, &r.table.rows)
}

fn figures(dir: &Path) -> Result<()> {
    let f3 = Source::Mzv { level: 3 }.pl()?;
    let rect = Rect53::new(graphmono::exact::rational::ratio(2, 5), graphmono::Rational::from_integer(0.into()), graphmono::exact::rational::ratio(1, 5))?;
    let found = [square_avoidance(&f3, &rect)];
    let svg = render_svg(&[f3.to_f64_points()], &avoided_overlay(&[rect], &found))?;
    write_atomic(&dir.join("figures").join("mzv_level3.svg"), svg.as_bytes())?;
    let t = Source::Takagi { truncation: 20, sample_bits: 10 }.pl()?;
    write_atomic(&dir.join("figures").join("takagi.svg"), render_svg(&[t.to_f64_points()], &Overlay::default())?.as_bytes())?;
    Ok(())
}

fn reproduce(a: ReproduceArgs) -> Result<Outcome> {
    let Suite::Acceptance = a.suite;
    let cfg: RunConfig = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("bad run configuration {}", p.display()))?
        }
        None => RunConfig::default(),
    };
    let seed = a.seed.or(cfg.seed).unwrap_or(suite::DEFAULT_SEED);
    let ids = cfg.criteria.unwrap_or_else(|| (1..=suite::CRITERIA).collect());
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > suite::CRITERIA) {
        bail!("no criterion {bad}");
    }
    let reports: Vec<CriterionReport> = ids
        .par_iter()
        .map(|&id| suite::run_criterion(id, seed))
        .collect::<graphmono::Result<_>>()?;
    let mut summary = format!("seed {seed}\n");
    for r in &reports {
        write_report(&a.out, r)?;
        summary.push_str(&r.line());
        summary.push('\n');
    }
    figures(&a.out)?;
    write_atomic(&a.out.join("summary.txt"), summary.as_bytes())?;
    print!("{summary}");
    Ok(Outcome::failed_if(a.strict && reports.iter().any(|r| !r.pass())))
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.cert).with_context(|| format!("cannot read {}", a.cert.display()))?;
    let doc: serde_json::Value = serde_json::from_str(&text).context("certificate is not JSON")?;
    let certs = extract(&doc)?;
    let mut ok = true;
    for (i, c) in certs.iter().enumerate() {
        let v = c.verify()?;
        println!("certificate {i}: {}", if v { "verified" } else { "REJECTED" });
        ok &= v;
    }
    Ok(Outcome::failed_if(!ok))
}
