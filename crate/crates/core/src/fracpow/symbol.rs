//! `P z^beta = sum_i p_i(beta) z^{beta + (d + i)/r}`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::poly::UniPoly;
use crate::exact::rational::{fmt_rat, int, to_i64, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSymbol {
    /// Exponent step is `1/ram`.
    pub ram: u64,
    /// Leading exponent of `f` in steps of `1/ram`.
    pub d: i64,
    /// Leading coefficient of `f`.
    pub c: Rat,
    /// `p_i(beta)`; entries past the end vanish.
    pub p: Vec<UniPoly>,
    /// Number of `p_i` known when `f` is truncated.
    pub known: Option<usize>,
    pub f: TruncatedPuiseuxSeries,
}

impl OperatorSymbol {
    pub fn p(&self, i: usize) -> UniPoly {
        self.p.get(i).cloned().unwrap_or_else(UniPoly::zero)
    }

    pub fn step(&self) -> Rat {
        Rat::new(1.into(), (self.ram as i64).into())
    }

    /// `(1/C)(v' + f v)`.
    pub fn apply(&self, v: &TruncatedPuiseuxSeries) -> TruncatedPuiseuxSeries {
        v.derive().add(&self.f.mul(v)).scale(&self.c.recip())
    }

    /// `d/dz + f`.
    pub fn apply_connection(&self, v: &TruncatedPuiseuxSeries) -> TruncatedPuiseuxSeries {
        v.derive().add(&self.f.mul(v))
    }
}

/// Expands `(1/C)(d/dz + f)` on `z^beta` in steps of `1/r`.
pub fn symbol_from_connection(f: &TruncatedPuiseuxSeries, r: u64) -> Result<OperatorSymbol> {
    if r == 0 || !r.is_multiple_of(f.ram()) {
        return Err(Error::InvalidRamifiedData(format!(
            "series needs z^(1/{}) but the step is 1/{r}",
            f.ram()
        )));
    }
    let (e0, c) = match f.leading_term() {
        Some((e, c)) if e < int(-1) => (e, c),
        _ => return Err(Error::RegularConnection),
    };
    let ri = int(r as i64);
    let d = to_i64(&(&e0 * &ri)).expect("exponent on the grid");
    let deriv = (-(r as i64)) - d;
    let known = f.trunc().map(|t| {
        let k = (&t * &ri - int(d)).ceil();
        to_i64(&k).unwrap_or(0).max(0) as usize
    });
    if let Some(k) = known {
        if (k as i64) <= deriv {
            return Err(Error::InsufficientPrecision(format!(
                "connection truncated at {} hides the z^-1 term",
                fmt_rat(&f.trunc().unwrap())
            )));
        }
    }
    let mut p: Vec<UniPoly> = Vec::new();
    let put = |p: &mut Vec<UniPoly>, i: usize, q: UniPoly| {
        if p.len() <= i {
            p.resize(i + 1, UniPoly::zero());
        }
        p[i] = p[i].add(&q);
    };
    for (e, coeff) in f.terms() {
        let i = to_i64(&(&e * &ri)).expect("exponent on the grid") - d;
        put(&mut p, i as usize, UniPoly::constant(coeff / &c));
    }
    put(
        &mut p,
        deriv as usize,
        UniPoly::new(vec![Rat::zero(), c.recip()]),
    );
    while p.last().is_some_and(UniPoly::is_zero) {
        p.pop();
    }
    Ok(OperatorSymbol {
        ram: r,
        d,
        c,
        p,
        known,
        f: f.clone(),
    })
}
