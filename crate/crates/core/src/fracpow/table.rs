//! The table `p_i(alpha, beta)` with `P^alpha z^beta = sum_i p_i(alpha, beta)
//! z^{beta + (alpha d + i)/r}`, built by induction on `i`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::{discrete_antiderivative, BiPoly, MPoly, UniPoly};
use crate::exact::rational::{fmt_rat, int, to_i64, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;

use super::symbol::OperatorSymbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTable {
    pub ram: u64,
    pub d: i64,
    /// `entries[i] = p_i(a, b)`, `a = alpha`, `b = beta`.
    pub entries: Vec<BiPoly>,
}

/// `u(lin)` for a univariate `u` and a polynomial `lin`.
pub(crate) fn substitute<const N: usize>(u: &UniPoly, lin: &MPoly<N>) -> MPoly<N> {
    let mut acc = MPoly::<N>::zero();
    for c in u.coeffs().iter().rev() {
        acc = acc.mul(lin).add(&MPoly::constant(c.clone()));
    }
    acc
}

/// Entries `p_0, ..., p_depth`; shallower when the symbol itself is truncated.
pub fn power_table(sym: &OperatorSymbol, depth: usize) -> PowerTable {
    let depth = match sym.known {
        Some(k) => depth.min(k.saturating_sub(1)),
        None => depth,
    };
    let a = BiPoly::var(0);
    let b = BiPoly::var(1);
    let r = int(sym.ram as i64);
    let d = int(sym.d);
    let a_minus_1 = a.sub(&BiPoly::one());
    let mut entries: Vec<BiPoly> = vec![BiPoly::one()];
    // p_j(a - 1, b), kept alongside
    let mut shifted: Vec<BiPoly> = vec![BiPoly::one()];
    for i in 1..=depth {
        let mut rhs = BiPoly::zero();
        for (j, pj) in shifted.iter().enumerate() {
            let pk = sym.p(i - j);
            if pk.is_zero() {
                continue;
            }
            // b + ((a - 1) d + j) / r
            let lin = b.add(&a_minus_1.scale(&(&d / &r))).add(&BiPoly::constant(int(j as i64) / &r));
            rhs = rhs.add(&substitute(&pk, &lin).mul(pj));
        }
        let pi = discrete_antiderivative(&rhs, 0);
        // p_i(a - 1, b) = p_i(a, b) - rhs by construction
        shifted.push(pi.sub(&rhs));
        entries.push(pi);
    }
    PowerTable {
        ram: sym.ram,
        d: sym.d,
        entries,
    }
}

impl PowerTable {
    pub fn depth(&self) -> usize {
        self.entries.len() - 1
    }

    /// Number of terms `i` needed so that `z^beta` maps correctly below `tau` under
    /// `P^alpha`.
    pub fn terms_needed(&self, alpha: &Rat, beta: &Rat, tau: &Rat) -> usize {
        terms_needed(self.ram, self.d, alpha, beta, tau)
    }

    /// Exponent shift `alpha d / r` of the output lattice.
    pub fn shift(&self, alpha: &Rat) -> Rat {
        alpha * int(self.d) / int(self.ram as i64)
    }
}

/// The table at a fixed `alpha`: `p_i(alpha, beta)` as polynomials in `beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedPower {
    alpha: Rat,
    ram: u64,
    d: i64,
    coeffs: Vec<UniPoly>,
}

impl SpecializedPower {
    pub fn new(table: &PowerTable, alpha: &Rat) -> Self {
        Self {
            alpha: alpha.clone(),
            ram: table.ram,
            d: table.d,
            coeffs: table.entries.iter().map(|p| p.eval_first(alpha)).collect(),
        }
    }

    /// `P^alpha v`, known below `tau` (or below the image of `v`'s own bound).
    pub fn apply(&self, v: &TruncatedPuiseuxSeries, tau: &Rat) -> Result<TruncatedPuiseuxSeries> {
        let r = int(self.ram as i64);
        let shift = &self.alpha * int(self.d) / &r;
        let trunc = match v.trunc() {
            Some(t) => (t + &shift).min(tau.clone()),
            None => tau.clone(),
        };
        let step = Rat::one() / &r;
        let mut out: Vec<(Rat, Rat)> = Vec::new();
        for (beta, c) in v.terms() {
            let n = terms_needed(self.ram, self.d, &self.alpha, &beta, &trunc);
            if n == 0 {
                continue;
            }
            if n > self.coeffs.len() {
                return Err(Error::InsufficientDepth(format!(
                    "z^{} needs {} terms below {}, table has {}",
                    fmt_rat(&beta),
                    n,
                    fmt_rat(&trunc),
                    self.coeffs.len()
                )));
            }
            let base = &beta + &shift;
            for (i, p) in self.coeffs[..n].iter().enumerate() {
                let k = p.eval(&beta);
                if !k.is_zero() {
                    out.push((&base + &step * int(i as i64), c * k));
                }
            }
        }
        Ok(TruncatedPuiseuxSeries::from_terms(out, Some(trunc)))
    }
}

fn terms_needed(ram: u64, d: i64, alpha: &Rat, beta: &Rat, tau: &Rat) -> usize {
    let x = int(ram as i64) * (tau - beta) - alpha * int(d);
    if x <= Rat::zero() {
        0
    } else {
        to_i64(&x.ceil()).expect("moderate depth") as usize
    }
}

/// `P^alpha v`, known below `tau` (or below the image of `v`'s own bound).
pub fn apply_power(table: &PowerTable, alpha: &Rat, v: &TruncatedPuiseuxSeries, tau: &Rat) -> Result<TruncatedPuiseuxSeries> {
    SpecializedPower::new(table, alpha).apply(v, tau)
}

/// `P v` through the symbol, term by term, for an exact `v`.
pub fn apply_symbol(sym: &OperatorSymbol, v: &TruncatedPuiseuxSeries) -> TruncatedPuiseuxSeries {
    let step = sym.step();
    let mut out = Vec::new();
    for (beta, c) in v.terms() {
        for (i, p) in sym.p.iter().enumerate() {
            let k = p.eval(&beta);
            if !k.is_zero() {
                out.push((&beta + &step * int(sym.d + i as i64), c * k));
            }
        }
    }
    TruncatedPuiseuxSeries::from_terms(out, v.trunc().map(|t| t + &step * int(sym.d)))
}
