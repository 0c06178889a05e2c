//! Acceptance suite: one pass/fail line per criterion on stdout. Criteria 1
//! and 5 contain clauses that are false for the construction; their tests
//! assert that exactly those clauses fail, with the counterexamples below.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::Command;

use graphmono::constructions::fivefold::approximant;
use graphmono::constructions::series::nomp_ratio_bound;
use graphmono::exact::rational::{int, pow2, ratio};
use graphmono::suite::{run_criterion, CriterionReport, DEFAULT_SEED};
use graphmono::Rational;
use num_traits::Signed;

fn line(s: &str) {
    // Bypasses the test harness capture so the verdicts land in the log.
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}").unwrap();
}

fn run(id: u32) -> CriterionReport {
    let r = run_criterion(id, DEFAULT_SEED).unwrap();
    line(&r.line());
    r
}

fn failing(r: &CriterionReport) -> Vec<&str> {
    r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
}

#[test]
fn criterion_01_refinement_invariants() {
    let r = run(1);
    assert_eq!(failing(&r), ["(vi)", "(viii)"]);
    // Sandwich with Σ_{j≤2} 6^{-j}: the level-0 block [0, 1] has value 0 at
    // both ends, but the flat rule applied twice lifts 12/25 to 1/6 + 1/30.
    let f2 = approximant(2).unwrap().function;
    assert_eq!(f2.eval(&ratio(12, 25)).unwrap(), ratio(1, 5));
    assert!(ratio(1, 5) > ratio(1, 6) + ratio(1, 36));
    // Value steps: the level-1 bump 1/6 is halved on sloped blocks, so
    // level n has 2^n steps of (1/3)2^{-n}, twice the stated cap.
    for n in 1..=6u32 {
        let f = approximant(n).unwrap().function;
        let steps: Vec<Rational> = f.values().windows(2).map(|w| (&w[1] - &w[0]).abs()).collect();
        let max = steps.iter().max().unwrap();
        assert_eq!(max, &(ratio(1, 3) * pow2(-(n as i64))));
        let over = steps.iter().filter(|s| **s > ratio(1, 6) * pow2(-(n as i64))).count();
        assert_eq!(over, 1 << n);
    }
}

#[test]
fn criterion_02_condition_p1() {
    assert!(run(2).pass());
}

#[test]
fn criterion_03_uniform_cauchy() {
    let r = run(3);
    assert!(r.pass());
    // sup |f_{n+1} - f_n| is attained at a breakpoint of f_{n+1}.
    for n in 0..5u32 {
        let (a, b) = (approximant(n).unwrap().function, approximant(n + 1).unwrap().function);
        let sup = b
            .breakpoints()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (y - a.eval(x).unwrap()).abs())
            .max()
            .unwrap();
        assert_eq!(r.table.rows[n as usize][1], graphmono::exact::rational::to_pq(&sup));
    }
}

#[test]
fn criterion_04_monotonicity_of_limit() {
    let r = run(4);
    assert!(r.pass());
    assert_eq!(r.table.rows[0], ["least_pc", "937/2100"]);
}

#[test]
fn criterion_05_variation_growth() {
    let r = run(5);
    assert_eq!(failing(&r), ["Var(f_8) > 3 Var(f_4)"]);
    // The flat part of every level has length 3/5, so each refinement adds
    // exactly 1/5 of variation: Var(f_n) = 1/3 + (n - 1)/5 for n ≥ 1.
    for n in 1..=8u32 {
        let f = approximant(n).unwrap().function;
        let var: Rational = f.values().windows(2).map(|w| (&w[1] - &w[0]).abs()).sum();
        assert_eq!(var, ratio(1, 3) + ratio(n as i64 - 1, 5));
        assert_eq!(r.table.rows[n as usize][1], graphmono::exact::rational::to_pq(&var));
    }
    assert!(ratio(26, 15) < int(3) * ratio(14, 15));
}

#[test]
fn criterion_06_no_m_points() {
    let r = run(6);
    assert!(r.pass());
    let n = int(5);
    let lower = &n * pow2(2 - 15);
    let direct = (pow2(-7) - &lower) / (&lower + pow2(-25));
    assert_eq!(nomp_ratio_bound(5), direct);
    assert!(direct > int(10));
}

#[test]
fn criterion_07_slope_law() {
    assert!(run(7).pass());
}

#[test]
fn criterion_08_sloped_fraction() {
    let r = run(8);
    assert!(r.pass());
    // B_1 ∩ B_2 has measure 4/25: the two sloped children of each sloped block.
    let d2: f64 = r.table.rows[0][1].parse().unwrap();
    assert!((d2 - 0.16).abs() < 0.012, "{d2}");
}

#[test]
fn criterion_09_peak_model() {
    assert!(run(9).pass());
}

#[test]
fn criterion_10_continuity_modulus() {
    assert!(run(10).pass());
}

#[test]
fn criterion_11_takagi() {
    assert!(run(11).pass());
}

#[test]
fn criterion_12_dimension() {
    assert!(run(12).pass());
}

#[test]
fn criterion_13_covering() {
    assert!(run(13).pass());
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_14_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_graphmono");
    let mut trees = Vec::new();
    for name in ["a", "b"] {
        let dir = tmp.path().join(name);
        let st = Command::new(bin)
            .args(["reproduce", "--suite", "acceptance", "--seed", "11", "--out"])
            .arg(&dir)
            .output()
            .unwrap();
        assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
        trees.push(tree(&dir));
    }
    let same = trees[0] == trees[1];
    let files = trees[0].len();
    line(&format!(
        "criterion 14: {} reproduce twice under one seed gives byte-identical trees ({files} files)",
        if same { "PASS" } else { "FAIL" }
    ));
    assert!(same);
    assert_eq!(files, 14 * 2 + 3);
}
