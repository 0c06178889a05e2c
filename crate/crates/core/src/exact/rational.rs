//! Arbitrary-precision rationals and their `p/q` text form.
//!
//! `BigRational` keeps every value reduced with a positive denominator, which
//! is exactly the invariant the rest of the crate relies on.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> Rational {
    let mag = BigInt::one() << (e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// `base^e` for a non-negative exponent.
pub fn pow(base: &Rational, e: u32) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

/// Canonical `p/q` form; the denominator is always written, even when it is 1.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`. Rejects `q = 0`.
pub fn parse_pq(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// Nearest `f64`; large numerators and denominators are shifted before division.
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as usize;
    let shift_d = (db - 60).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Distance to the nearest integer, `dist(x, Z)`.
pub fn dist_to_int(x: &Rational) -> Rational {
    let fl = x.floor();
    let frac = x - &fl;
    let other = Rational::one() - &frac;
    if frac <= other {
        frac
    } else {
        other
    }
}

/// `dist(2^e · p/q, Z)` without forming `2^e · p` when `e` is large.
pub fn dist_to_int_scaled_pow2(x: &Rational, e: u64) -> Rational {
    let q = x.denom().clone();
    let p = x.numer().mod_floor(&q);
    let two = BigInt::from(2u32);
    let m = two.modpow(&BigInt::from(e), &q);
    let r = (p * m).mod_floor(&q);
    let frac = Rational::new(r, q);
    let other = Rational::one() - &frac;
    if frac <= other {
        frac
    } else {
        other
    }
}

/// Smallest `k ≥ 0` with `x · 2^k` an integer, if `x` is dyadic.
pub fn dyadic_exponent(x: &Rational) -> Option<u64> {
    let d = x.denom();
    let tz = d.trailing_zeros().unwrap_or(0);
    if (d >> tz as usize).is_one() {
        Some(tz)
    } else {
        None
    }
}

/// Rational floor and ceiling of `sqrt(x)` at resolution `2^-bits`.
///
/// Returns `(lo, hi)` with `lo ≤ sqrt(x) ≤ hi`, equal when the root is exact
/// at that resolution.
pub fn sqrt_bracket(x: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let scaled: BigInt = (x.numer() << (2 * bits as usize)) / x.denom();
    let root = scaled.to_biguint().unwrap_or_default().sqrt();
    let den = BigInt::one() << bits as usize;
    let lo = Rational::new(BigInt::from(root.clone()), den.clone());
    let exact = {
        let r = BigInt::from(root.clone());
        &r * &r * x.denom() == x.numer() << (2 * bits as usize)
    };
    if exact {
        (lo.clone(), lo)
    } else {
        let hi = Rational::new(BigInt::from(root + BigUint::one()), den);
        (lo, hi)
    }
}

/// Integer square-root floor of a non-negative rational, as a rational lower
/// bound with `bits` fractional bits. Used for displaying ratios whose squares
/// are the exact quantities.
pub fn sqrt_floor(x: &Rational, bits: u32) -> Rational {
    sqrt_bracket(x, bits).0
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Serde adapters that write rationals as `p/q` strings.
pub mod serde_pq {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{parse_pq, to_pq, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_pq(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_pq(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        use super::super::{parse_pq, to_pq, Rational};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&to_pq(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| parse_pq(s).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        use super::super::{parse_pq, to_pq, Rational};

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&to_pq(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<Rational>, D::Error> {
            let raw = Option::<String>::deserialize(d)?;
            raw.map(|s| parse_pq(&s).map_err(D::Error::custom))
                .transpose()
        }
    }
}
