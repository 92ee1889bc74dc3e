//! Exact rationals and the `"p/q"` text form used by every JSON document.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always stored in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn is_integral(q: &Rat) -> bool {
    q.denom().is_one()
}

/// Reduce `q` into `[0, m)` modulo `m > 0`.
pub fn rem_euclid(q: &Rat, m: &Rat) -> Rat {
    let k = (q / m).floor();
    q - k * m
}

/// Renders as `p/q`, including integers (`3/1`).
pub fn fmt_rat(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p/q`, `p`, and surrounding whitespace.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

pub fn to_i64(q: &Rat) -> Option<i64> {
    if is_integral(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Denominator of `q` as a `u64` (panics on absurdly large denominators).
pub fn denom_u64(q: &Rat) -> u64 {
    q.denom().to_u64().expect("denominator fits in u64")
}
