//! Certified refutation of the pointwise condition
//! `|f(x) - f(y)| ≤ c (|f(x) - f(z)| + |z - x|)` for `x ∈ (y - ε, y)`, `z ∈ (y, y + ε)`.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::CertifiedFn;
use crate::exact::rational::{self, int, pow2, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpointRefutation {
    #[serde(with = "rational::serde_pq")]
    pub y: Rational,
    #[serde(with = "rational::serde_pq")]
    pub x: Rational,
    #[serde(with = "rational::serde_pq")]
    pub z: Rational,
    #[serde(with = "rational::serde_pq")]
    pub c: Rational,
    /// Certified lower bound of `|f(x) - f(y)| / (|f(x) - f(z)| + |z - x|)`.
    #[serde(with = "rational::serde_pq")]
    pub quotient_lb: Rational,
}

/// Outcome of a single triple: `Ok(Some(q))` certified with lower bound `q`,
/// `Ok(None)` not violating even at the centre values, `Err(())` violating at
/// the centre values but swamped by evaluation error.
pub fn certify_triple<F: CertifiedFn + ?Sized>(
    f: &F,
    x: &Rational,
    y: &Rational,
    z: &Rational,
    c: &Rational,
) -> Result<std::result::Result<Option<Rational>, ()>> {
    let (ex, ey, ez) = (f.enclose(x)?, f.enclose(y)?, f.enclose(z)?);
    let gap = z - x;
    let num = (&ex.value - &ey.value).abs();
    let den = (&ex.value - &ez.value).abs() + &gap;
    if num <= c * &den {
        return Ok(Ok(None));
    }
    let num_lo = &num - &ex.err - &ey.err;
    let den_hi = &den + &ex.err + &ez.err;
    if num_lo.is_positive() && num_lo > c * &den_hi {
        Ok(Ok(Some(num_lo / den_hi)))
    } else {
        Ok(Err(()))
    }
}

/// Scans dyadic offsets `x = y - a 2^{-L}`, `z = y + b 2^{-L}`, `a, b ∈ 1..=4`,
/// for `L = 1..=mesh`, returning the first certified violation.
pub fn mpoint_refute<F: CertifiedFn + ?Sized>(
    f: &F,
    y: &Rational,
    c: &Rational,
    eps: &Rational,
    mesh: u32,
) -> Result<Option<MpointRefutation>> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let mut uncertified = false;
    for level in 1..=mesh {
        let h = pow2(-(level as i64));
        for a in 1..=4i64 {
            let da = &h * int(a);
            if &da >= eps {
                continue;
            }
            let x = y - &da;
            if !f.contains(&x) {
                continue;
            }
            for b in 1..=4i64 {
                let db = &h * int(b);
                if &db >= eps {
                    continue;
                }
                let z = y + &db;
                if !f.contains(&z) {
                    continue;
                }
                match certify_triple(f, &x, y, &z, c)? {
                    Ok(Some(q)) => {
                        return Ok(Some(MpointRefutation {
                            y: y.clone(),
                            x,
                            z,
                            c: c.clone(),
                            quotient_lb: q,
                        }))
                    }
                    Ok(None) => {}
                    Err(()) => uncertified = true,
                }
            }
        }
    }
    if uncertified {
        Err(Error::Inconclusive(format!(
            "violations at y = {y} could not be certified against evaluation error"
        )))
    } else {
        Ok(None)
    }
}

impl MpointRefutation {
    pub fn verify<F: CertifiedFn + ?Sized>(&self, f: &F) -> bool {
        self.x < self.y
            && self.y < self.z
            && matches!(
                certify_triple(f, &self.x, &self.y, &self.z, &self.c),
                Ok(Ok(Some(q))) if q >= self.quotient_lb
            )
    }
}

/// Whether a certified refutation exists on the mesh.
pub fn refutes<F: CertifiedFn + ?Sized>(f: &F, y: &Rational, c: &Rational, eps: &Rational, mesh: u32) -> bool {
    matches!(mpoint_refute(f, y, c, eps, mesh), Ok(Some(_)))
}
