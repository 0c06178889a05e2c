//! Recursive five-point refinement.
//!
//! Level 0 is `f ≡ 0` on `{0, 1}`. Every block `[a, b]` of level `n` is cut at
//! `x_l = a + l(b - a)/5`:
//!
//! * flat block (`f(a) = f(b)`): all of `x_1..x_5` are kept, `x_2` and `x_3`
//!   are raised by `(b - a)/6`;
//! * sloped block: only `x_1, x_4` are inserted, both at the midvalue.
//!
//! Refinement of a block depends only on its endpoints, so single blocks can
//! be refined far deeper than the global level cap (see [`Block`]).

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{CertifiedFn, Enclosure};
use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, int, pow2, ratio, Rational};

pub const DEFAULT_LEVEL_CAP: u32 = 8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FivefoldLevel {
    pub level: u32,
    #[serde(rename = "fn")]
    pub function: PlFunction,
}

impl FivefoldLevel {
    pub fn base() -> Self {
        FivefoldLevel {
            level: 0,
            function: PlFunction::constant(int(0), int(1), int(0)).unwrap(),
        }
    }

    /// `r_n`, the number of blocks.
    pub fn blocks(&self) -> usize {
        self.function.segments()
    }

    pub fn block(&self, k: usize) -> Block {
        let xs = self.function.breakpoints();
        let ys = self.function.values();
        Block {
            level: self.level,
            a: xs[k].clone(),
            b: xs[k + 1].clone(),
            fa: ys[k].clone(),
            fb: ys[k + 1].clone(),
        }
    }
}

/// One block `[a, b]` of some level with its endpoint values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub level: u32,
    pub a: Rational,
    pub b: Rational,
    pub fa: Rational,
    pub fb: Rational,
}

impl Block {
    pub fn root() -> Self {
        Block {
            level: 0,
            a: int(0),
            b: int(1),
            fa: int(0),
            fb: int(0),
        }
    }

    pub fn is_flat(&self) -> bool {
        self.fa == self.fb
    }

    pub fn len(&self) -> Rational {
        &self.b - &self.a
    }

    pub fn slope(&self) -> Rational {
        (&self.fb - &self.fa) / self.len()
    }

    /// Points of the refined block, both endpoints included.
    pub fn refined_points(&self) -> Vec<(Rational, Rational)> {
        let len = self.len();
        let x = |l: i64| &self.a + &len * ratio(l, 5);
        if self.is_flat() {
            let bump = &self.fa + &len * ratio(1, 6);
            vec![
                (self.a.clone(), self.fa.clone()),
                (x(1), self.fa.clone()),
                (x(2), bump.clone()),
                (x(3), bump),
                (x(4), self.fa.clone()),
                (self.b.clone(), self.fb.clone()),
            ]
        } else {
            let mid = (&self.fa + &self.fb) * ratio(1, 2);
            vec![
                (self.a.clone(), self.fa.clone()),
                (x(1), mid.clone()),
                (x(4), mid),
                (self.b.clone(), self.fb.clone()),
            ]
        }
    }

    pub fn children(&self) -> Vec<Block> {
        self.refined_points()
            .windows(2)
            .map(|w| Block {
                level: self.level + 1,
                a: w[0].0.clone(),
                b: w[1].0.clone(),
                fa: w[0].1.clone(),
                fb: w[1].1.clone(),
            })
            .collect()
    }

    /// Child containing `x` under the half-open convention `[a, b)`; the
    /// right endpoint of the parent belongs to its last child.
    pub fn child_containing(&self, x: &Rational) -> Block {
        let kids = self.children();
        let n = kids.len();
        kids.into_iter()
            .enumerate()
            .find(|(i, c)| &c.a <= x && (x < &c.b || *i == n - 1))
            .map(|(_, c)| c)
            .unwrap()
    }

    pub fn eval_linear(&self, x: &Rational) -> Rational {
        &self.fa + (&self.fb - &self.fa) * (x - &self.a) / self.len()
    }

    /// Enclosure of the limit function on this block: every later level stays
    /// within `[min, max + 5 len/24]`. The constant is the fixed point of
    /// `c = 1/6 + c/5` (the raised middle fifth is again a flat block), and it
    /// is attained by the chain of middle sub-blocks.
    pub fn limit_range(&self) -> (Rational, Rational) {
        let lo = rational::min(&self.fa, &self.fb);
        let hi = rational::max(&self.fa, &self.fb) + self.len() * ratio(5, 24);
        (lo, hi)
    }
}

/// Blocks containing `x` at levels `0..=depth`.
pub fn locate(x: &Rational, depth: u32) -> Result<Vec<Block>> {
    if x < &int(0) || x > &int(1) {
        return Err(Error::OutOfDomain {
            x: x.clone(),
            lo: int(0),
            hi: int(1),
        });
    }
    let mut path = Vec::with_capacity(depth as usize + 1);
    let mut b = Block::root();
    path.push(b.clone());
    for _ in 0..depth {
        b = b.child_containing(x);
        path.push(b.clone());
    }
    Ok(path)
}

pub fn refine(level: &FivefoldLevel) -> FivefoldLevel {
    let f = &level.function;
    let xs = f.breakpoints();
    let ys = f.values();
    let mut nx = Vec::with_capacity(xs.len() * 5);
    let mut ny = Vec::with_capacity(xs.len() * 5);
    nx.push(xs[0].clone());
    ny.push(ys[0].clone());
    for k in 0..f.segments() {
        let block = Block {
            level: level.level,
            a: xs[k].clone(),
            b: xs[k + 1].clone(),
            fa: ys[k].clone(),
            fb: ys[k + 1].clone(),
        };
        for (x, y) in block.refined_points().into_iter().skip(1) {
            nx.push(x);
            ny.push(y);
        }
    }
    FivefoldLevel {
        level: level.level + 1,
        function: PlFunction::new(nx, ny).expect("refinement keeps breakpoints increasing"),
    }
}

pub fn approximant(n: u32) -> Result<FivefoldLevel> {
    approximant_with_cap(n, DEFAULT_LEVEL_CAP)
}

pub fn approximant_with_cap(n: u32, cap: u32) -> Result<FivefoldLevel> {
    if n > cap {
        return Err(Error::ResourceLimit {
            requested: n,
            limit: cap,
        });
    }
    Ok(all_levels_with_cap(n, cap)?.pop().unwrap())
}

/// `f_0, …, f_n`.
pub fn all_levels(n: u32) -> Result<Vec<FivefoldLevel>> {
    all_levels_with_cap(n, DEFAULT_LEVEL_CAP)
}

fn all_levels_with_cap(n: u32, cap: u32) -> Result<Vec<FivefoldLevel>> {
    if n > cap {
        return Err(Error::ResourceLimit {
            requested: n,
            limit: cap,
        });
    }
    let mut out = vec![FivefoldLevel::base()];
    for _ in 0..n {
        let next = refine(out.last().unwrap());
        out.push(next);
    }
    Ok(out)
}

/// `f_n(x)` with the uniform bound `|f(x) - f_n(x)| ≤ 2^{1-n}`.
pub fn eval_with_bound(x: &Rational, n: u32) -> Result<Enclosure> {
    let block = locate(x, n)?.pop().unwrap();
    Ok(Enclosure {
        value: block.eval_linear(x),
        err: pow2(1 - n as i64),
    })
}

/// The limit function, evaluated through the block containing `x` at a fixed
/// depth. The enclosure is the intersection of the uniform Cauchy bound with
/// the block-local range; it is exact at breakpoints of that depth.
#[derive(Debug, Clone, Copy)]
pub struct FivefoldLimit {
    pub depth: u32,
}

impl FivefoldLimit {
    pub fn new(depth: u32) -> Self {
        FivefoldLimit { depth }
    }
}

impl CertifiedFn for FivefoldLimit {
    fn enclose(&self, x: &Rational) -> Result<Enclosure> {
        let block = locate(x, self.depth)?.pop().unwrap();
        if x == &block.a {
            return Ok(Enclosure::exact(block.fa));
        }
        if x == &block.b {
            return Ok(Enclosure::exact(block.fb));
        }
        let v = block.eval_linear(x);
        let cauchy = pow2(1 - self.depth as i64);
        let (lo, hi) = block.limit_range();
        let lo = rational::max(&lo, &(&v - &cauchy));
        let hi = rational::min(&hi, &(&v + &cauchy));
        let two = int(2);
        Ok(Enclosure {
            value: (&lo + &hi) / &two,
            err: (&hi - &lo) / &two,
        })
    }

    fn domain(&self) -> Option<(Rational, Rational)> {
        Some((Rational::zero(), Rational::one()))
    }
}
