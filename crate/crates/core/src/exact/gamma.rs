//! Ratios of Gamma values at rational points, through the recurrence `G(x) = G(x+1)/x`.

use num_traits::One;

use super::rational::{fmt_rat, int, is_integral, Rat};
use crate::error::{Error, Result};

/// `G(-alpha - k) / G(-alpha)`.
pub fn pochhammer_ratio(alpha: &Rat, k: i64) -> Result<Rat> {
    if is_integral(alpha) {
        return Err(Error::IntegerResidue(fmt_rat(alpha)));
    }
    let x = -alpha;
    let mut acc = Rat::one();
    if k > 0 {
        for j in 1..=k {
            acc /= &x - int(j);
        }
    } else {
        for j in 0..(-k) {
            acc *= &x + int(j);
        }
    }
    Ok(acc)
}
