//! Classification of points against the sloped closures `B_n` of the
//! five-point construction, and the base-5 digit set
//! `D = {x : x 5^n mod 1 ∉ (1/5, 4/5) for all n}`.
//!
//! `x ∉ B_n` iff every level-`n` block touching `x` is flat. Blocks are
//! reported under the half-open convention: a breakpoint belongs to the
//! block on its right (the last block keeps `1`).

use std::collections::HashSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::constructions::fivefold::{locate, Block};
use crate::error::Result;
use crate::exact::rational::{self, int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointStatus {
    /// `x ∈ B_n` for every `n = 1..=depth`.
    InBUpTo(u32),
    /// `x ∉ B_level`; `block` is the flat block containing `x`.
    NotInB { level: u32, block: BlockRecord },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecord {
    #[serde(with = "rational::serde_pq")]
    pub a: Rational,
    #[serde(with = "rational::serde_pq")]
    pub b: Rational,
    #[serde(with = "rational::serde_pq")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClass {
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    pub depth: u32,
    pub status: PointStatus,
    /// Flat/sloped flag of the containing block at levels `1..=depth`.
    pub flat_path: Vec<bool>,
}

/// Left neighbour of `b` at the same level, found by locating a point just
/// inside it.
fn left_neighbour(b: &Block) -> Option<Block> {
    if b.a == int(0) {
        return None;
    }
    // Blocks at level n are at least 5^{-n} long.
    let probe = &b.a - rational::pow(&ratio(1, 5), b.level + 1);
    locate(&probe, b.level).ok().and_then(|p| p.into_iter().last())
}

fn outside_sloped_closure(x: &Rational, b: &Block) -> bool {
    if !b.is_flat() {
        return false;
    }
    if x == &b.a {
        return left_neighbour(b).is_none_or(|l| l.is_flat());
    }
    true
}

pub fn mzv_point_class(x: &Rational, depth: u32) -> Result<PointClass> {
    let path = locate(x, depth)?;
    let flat_path: Vec<bool> = path[1..].iter().map(Block::is_flat).collect();
    for blk in &path[1..] {
        if outside_sloped_closure(x, blk) {
            return Ok(PointClass {
                x: x.clone(),
                depth,
                status: PointStatus::NotInB {
                    level: blk.level,
                    block: BlockRecord {
                        a: blk.a.clone(),
                        b: blk.b.clone(),
                        value: blk.fa.clone(),
                    },
                },
                flat_path,
            });
        }
    }
    Ok(PointClass {
        x: x.clone(),
        depth,
        status: PointStatus::InBUpTo(depth),
        flat_path,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DMembership {
    Member,
    /// `x 5^n mod 1 ∈ (1/5, 4/5)`.
    NotMember(u32),
    UndecidedUpTo(u32),
}

/// Exact for every rational whose orbit `x 5^n mod 1` repeats within
/// `max_steps` (always true for terminating base-5 expansions).
pub fn d_set_membership(x: &Rational, max_steps: u32) -> DMembership {
    let (lo, hi) = (ratio(1, 5), ratio(4, 5));
    let five = int(5);
    let mut seen = HashSet::new();
    let mut frac = x - x.floor();
    for n in 0..=max_steps {
        if frac > lo && frac < hi {
            return DMembership::NotMember(n);
        }
        if !seen.insert(frac.clone()) {
            return DMembership::Member;
        }
        frac = &frac * &five;
        let (q, _) = frac.numer().div_rem(frac.denom());
        frac = &frac - Rational::from_integer(q);
    }
    DMembership::UndecidedUpTo(max_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn not_in_b_level(c: &PointClass) -> Option<u32> {
        match c.status {
            PointStatus::NotInB { level, .. } => Some(level),
            PointStatus::InBUpTo(_) => None,
        }
    }

    #[test]
    fn centre_of_the_first_plateau() {
        let c = mzv_point_class(&ratio(1, 2), 4).unwrap();
        assert_eq!(not_in_b_level(&c), Some(1));
        if let PointStatus::NotInB { block, .. } = &c.status {
            assert_eq!((block.a.clone(), block.b.clone()), (ratio(2, 5), ratio(3, 5)));
            assert_eq!(block.value, ratio(1, 6));
        }
    }

    #[test]
    fn origin_and_breakpoints() {
        // [0, 1/5] is flat at level 1 and 0 has no left neighbour.
        assert_eq!(not_in_b_level(&mzv_point_class(&int(0), 3).unwrap()), Some(1));
        // 1/5 joins a flat and a sloped block, so it stays in every closure
        // until a flat pair surrounds it; 2/5 likewise.
        let c = mzv_point_class(&ratio(1, 5), 5).unwrap();
        assert_eq!(c.status, PointStatus::InBUpTo(5));
        // 3/10 is interior to the sloped block [1/5, 2/5] at level 1, then in
        // the flat middle of its refinement.
        assert_eq!(not_in_b_level(&mzv_point_class(&ratio(3, 10), 4).unwrap()), Some(2));
    }

    #[test]
    fn stable_under_depth_extension() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = ratio(rng.gen_range(0..=100_000), 100_000);
            let shallow = mzv_point_class(&x, 3).unwrap();
            let deep = mzv_point_class(&x, 7).unwrap();
            if let Some(l) = not_in_b_level(&shallow) {
                assert_eq!(not_in_b_level(&deep), Some(l));
            }
            assert_eq!(deep.flat_path[..3], shallow.flat_path[..]);
        }
    }

    #[test]
    fn sloped_survival_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 2000;
        let inb = (0..n)
            .filter(|_| {
                let x = ratio(rng.gen_range(0..1_000_000_007), 1_000_000_007);
                mzv_point_class(&x, 4).unwrap().status == PointStatus::InBUpTo(4)
            })
            .count();
        // (2/5)^4 ≈ 0.0256.
        let frac = inb as f64 / n as f64;
        assert!(frac < 0.06, "{frac}");
    }

    #[test]
    fn d_set_digits() {
        assert_eq!(d_set_membership(&int(0), 10), DMembership::Member);
        assert_eq!(d_set_membership(&ratio(1, 5), 10), DMembership::Member);
        assert_eq!(d_set_membership(&ratio(1, 2), 10), DMembership::NotMember(0));
        assert_eq!(d_set_membership(&ratio(1, 25), 10), DMembership::Member);
        assert_eq!(d_set_membership(&ratio(2, 25), 10), DMembership::NotMember(1));
        // 1/6 = 0.0404..._5: orbit 1/6 → 5/6 → 1/6 stays in [0,1/5]∪[4/5,1).
        assert_eq!(d_set_membership(&ratio(1, 6), 10), DMembership::Member);
        // 1/4 = 0.1111..._5 sits in (1/5, 4/5).
        assert_eq!(d_set_membership(&ratio(1, 4), 10), DMembership::NotMember(0));
    }
}
