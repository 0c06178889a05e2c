//! Functions that can be evaluated with a certified error bound.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::pl::PlFunction;
use crate::exact::rational::{self, Rational};

/// `value ± err` enclosing the true function value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "rational::serde_pq")]
    pub value: Rational,
    #[serde(with = "rational::serde_pq")]
    pub err: Rational,
}

impl Enclosure {
    pub fn exact(value: Rational) -> Self {
        Enclosure {
            value,
            err: Rational::zero(),
        }
    }

    pub fn lo(&self) -> Rational {
        &self.value - &self.err
    }

    pub fn hi(&self) -> Rational {
        &self.value + &self.err
    }
}

pub trait CertifiedFn: Sync {
    fn enclose(&self, x: &Rational) -> Result<Enclosure>;

    /// Closed domain, or `None` for the whole line.
    fn domain(&self) -> Option<(Rational, Rational)> {
        None
    }

    fn contains(&self, x: &Rational) -> bool {
        match self.domain() {
            Some((lo, hi)) => &lo <= x && x <= &hi,
            None => true,
        }
    }
}

impl CertifiedFn for PlFunction {
    fn enclose(&self, x: &Rational) -> Result<Enclosure> {
        Ok(Enclosure::exact(self.eval(x)?))
    }

    fn domain(&self) -> Option<(Rational, Rational)> {
        let (a, b) = PlFunction::domain(self);
        Some((a.clone(), b.clone()))
    }
}

/// `x ↦ -f(x)`.
pub struct Negated<'a, F: ?Sized>(pub &'a F);

impl<F: CertifiedFn + ?Sized> CertifiedFn for Negated<'_, F> {
    fn enclose(&self, x: &Rational) -> Result<Enclosure> {
        let e = self.0.enclose(x)?;
        Ok(Enclosure {
            value: -e.value,
            err: e.err,
        })
    }

    fn domain(&self) -> Option<(Rational, Rational)> {
        self.0.domain()
    }
}

/// `x ↦ f(-x)`.
pub struct Mirrored<'a, F: ?Sized>(pub &'a F);

impl<F: CertifiedFn + ?Sized> CertifiedFn for Mirrored<'_, F> {
    fn enclose(&self, x: &Rational) -> Result<Enclosure> {
        self.0.enclose(&-x)
    }

    fn domain(&self) -> Option<(Rational, Rational)> {
        self.0.domain().map(|(a, b)| (-b, -a))
    }
}
