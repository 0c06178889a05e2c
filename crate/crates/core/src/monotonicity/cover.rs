//! Greedy `2r` covering: disjoint balls whose `δ`-inflations cover all centres.
//!
//! Radii are rescaled below 1 and sorted into bands
//! `(δ-1)^{-n+1} > r ≥ (δ-1)^{-n}`. Band by band, balls missing every earlier
//! selection are taken greedily in input order into a maximal disjoint family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        Ball { center, radius }
    }

    pub fn dist(&self, other: &Ball) -> f64 {
        self.center
            .iter()
            .zip(&other.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Open balls are disjoint iff the centres are at least `r1 + r2` apart.
    pub fn disjoint(&self, other: &Ball) -> bool {
        self.dist(other) >= self.radius + other.radius
    }
}

/// Indices of the selected balls, ascending.
pub fn cover_2r(balls: &[Ball], delta: f64) -> Result<Vec<usize>> {
    if !(delta > 2.0) {
        return Err(Error::InvalidArgument(format!("delta = {delta} must exceed 2")));
    }
    if balls.iter().any(|b| !(b.radius > 0.0) || !b.radius.is_finite()) {
        return Err(Error::InvalidArgument("radii must be positive and finite".into()));
    }
    if balls.is_empty() {
        return Ok(Vec::new());
    }
    let rmax = balls.iter().map(|b| b.radius).fold(0.0, f64::max);
    let scale = 2.0 * rmax;
    let base = (delta - 1.0).ln();
    let band = |r: f64| -> i64 {
        let l = -(r / scale).ln() / base;
        l.ceil().max(1.0) as i64
    };
    let mut order: Vec<(i64, usize)> = balls.iter().enumerate().map(|(i, b)| (band(b.radius), i)).collect();
    order.sort();
    let mut chosen: Vec<usize> = Vec::new();
    for (_, i) in order {
        if chosen.iter().all(|&j| balls[i].disjoint(&balls[j])) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Brute-force check of disjointness and `δ`-coverage of every centre.
pub fn verify_cover(balls: &[Ball], chosen: &[usize], delta: f64) -> bool {
    let disjoint = chosen
        .iter()
        .enumerate()
        .all(|(a, &i)| chosen[a + 1..].iter().all(|&j| balls[i].disjoint(&balls[j])));
    let covered = balls.iter().all(|b| {
        chosen.iter().any(|&j| {
            let centre = Ball::new(b.center.clone(), 0.0);
            centre.dist(&balls[j]) < delta * balls[j].radius
        })
    });
    disjoint && covered
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_cases() {
        let one = vec![Ball::new(vec![0.0, 0.0], 1.0)];
        assert_eq!(cover_2r(&one, 2.5).unwrap(), vec![0]);
        let two = vec![Ball::new(vec![0.0, 0.0], 1.0), Ball::new(vec![10.0, 0.0], 2.0)];
        assert_eq!(cover_2r(&two, 2.5).unwrap(), vec![0, 1]);
        assert!(cover_2r(&two, 2.0).is_err());
    }

    #[test]
    fn random_overlapping_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let balls: Vec<Ball> = (0..50)
                .map(|_| {
                    Ball::new(
                        vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)],
                        rng.gen_range(0.05..3.0),
                    )
                })
                .collect();
            let chosen = cover_2r(&balls, 2.5).unwrap();
            assert!(verify_cover(&balls, &chosen, 2.5));
        }
    }

    proptest! {
        #[test]
        fn cover_properties(
            pts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, 0.01f64..4.0), 1..40),
            delta in 2.01f64..6.0,
        ) {
            let balls: Vec<Ball> = pts.into_iter().map(|(x, y, r)| Ball::new(vec![x, y], r)).collect();
            let chosen = cover_2r(&balls, delta).unwrap();
            prop_assert!(verify_cover(&balls, &chosen, delta));
        }
    }
}
