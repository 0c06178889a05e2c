//! Two-sided bracket of the graph-monotonicity constant.
//!
//! Upper end: if the oscillation condition holds with `c - 1` the graph is
//! symmetrically `c`-monotone, so `least_pc + 1` is an upper bound.
//! Lower end: the best witness triple found.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::pc::least_pc;
use super::refute::{best_triple, WitnessTriple};
use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityBracket {
    #[serde(with = "rational::serde_pq")]
    pub c_lo: Rational,
    #[serde(with = "rational::serde_pq")]
    pub c_hi: Rational,
    #[serde(with = "rational::serde_pq")]
    pub least_pc: Rational,
    pub witness: Option<WitnessTriple>,
}

pub fn monotonicity_bracket(f: &PlFunction, budget: u32) -> MonotonicityBracket {
    let pc = least_pc(f);
    let witness = best_triple(f, budget);
    let c_lo = witness
        .as_ref()
        .map(|w| w.achieved_ratio.clone())
        .unwrap_or_else(Rational::zero);
    MonotonicityBracket {
        c_lo,
        c_hi: &pc + Rational::one(),
        least_pc: pc,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, ratio};
    use crate::monotonicity::refute::DEFAULT_BUDGET;

    #[test]
    fn tent_bracket() {
        let f = PlFunction::new(vec![int(0), ratio(1, 2), int(1)], vec![int(0), ratio(1, 2), int(0)])
            .unwrap();
        let b = monotonicity_bracket(&f, DEFAULT_BUDGET);
        assert_eq!(b.c_hi, ratio(3, 2));
        // √2/2 from the breakpoint triple, refinement can only push it up.
        assert!(b.c_lo >= ratio(7071, 10_000));
        assert!(b.c_lo <= b.c_hi);
    }

    #[test]
    fn nondecreasing_bracket() {
        let f = PlFunction::new(vec![int(0), int(1), int(2)], vec![int(0), int(1), int(3)]).unwrap();
        let b = monotonicity_bracket(&f, DEFAULT_BUDGET);
        assert_eq!(b.c_hi, int(1));
        assert!(b.c_lo <= int(1));
    }
}
