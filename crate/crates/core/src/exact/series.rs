//! Truncated Puiseux series over Q.
//!
//! A series is a finite map from exponents in `(1/r)Z` to rationals together with a
//! truncation bound `tau`: every coefficient at an exponent `>= tau` is *unknown*, not
//! zero. Exact series (polynomials in `z^{1/r}`, `z^{-1/r}`) carry no bound.
//!
//! Exponents are kept as integers on the grid `(1/r)Z`; the stored `r` is always the
//! smallest grid that holds every key and the bound, so structural equality is
//! mathematical equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{denom_u64, fmt_rat, int, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedPuiseuxSeries {
    ram: u64,
    coeffs: BTreeMap<i64, Rat>,
    trunc: Option<i64>,
}

fn grid_index(e: &Rat, ram: u64) -> i64 {
    let scaled = e * Rat::from_integer(BigInt::from(ram));
    debug_assert!(scaled.is_integer(), "exponent {e} not on grid 1/{ram}");
    scaled
        .to_integer()
        .to_i64()
        .expect("exponent index fits in i64")
}

impl TruncatedPuiseuxSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        Self {
            ram: 1,
            coeffs: BTreeMap::new(),
            trunc: None,
        }
    }

    /// `O(z^tau)`: no known terms.
    pub fn big_o(tau: &Rat) -> Self {
        Self::from_terms(std::iter::empty(), Some(tau.clone()))
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, int(0))
    }

    pub fn monomial(c: Rat, e: Rat) -> Self {
        Self::from_terms([(e, c)], None)
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Terms at or beyond the
    /// truncation are dropped; repeated exponents are summed.
    pub fn from_terms<I>(terms: I, trunc: Option<Rat>) -> Self
    where
        I: IntoIterator<Item = (Rat, Rat)>,
    {
        let terms: Vec<(Rat, Rat)> = terms.into_iter().collect();
        let mut ram = 1u64;
        for (e, _) in &terms {
            ram = ram.lcm(&denom_u64(e));
        }
        if let Some(t) = &trunc {
            ram = ram.lcm(&denom_u64(t));
        }
        let trunc_idx = trunc.as_ref().map(|t| grid_index(t, ram));
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        for (e, c) in terms {
            let k = grid_index(&e, ram);
            if trunc_idx.is_some_and(|t| k >= t) {
                continue;
            }
            *coeffs.entry(k).or_insert_with(Rat::zero) += c;
        }
        Self::from_grid(ram, coeffs, trunc_idx)
    }

    fn from_grid(ram: u64, mut coeffs: BTreeMap<i64, Rat>, trunc: Option<i64>) -> Self {
        coeffs.retain(|k, c| !c.is_zero() && trunc.is_none_or(|t| *k < t));
        let mut s = Self { ram, coeffs, trunc };
        s.reduce_grid();
        s
    }

    fn reduce_grid(&mut self) {
        let mut g = self.ram as i64;
        for k in self.coeffs.keys() {
            g = g.gcd(k);
            if g == 1 {
                return;
            }
        }
        if let Some(t) = self.trunc {
            g = g.gcd(&t);
        }
        if g <= 1 {
            return;
        }
        self.ram /= g as u64;
        self.coeffs = std::mem::take(&mut self.coeffs)
            .into_iter()
            .map(|(k, c)| (k / g, c))
            .collect();
        self.trunc = self.trunc.map(|t| t / g);
    }

    fn regrid(&self, ram: u64) -> (BTreeMap<i64, Rat>, Option<i64>) {
        debug_assert_eq!(ram % self.ram, 0);
        let f = (ram / self.ram) as i64;
        (
            self.coeffs.iter().map(|(k, c)| (k * f, c.clone())).collect(),
            self.trunc.map(|t| t * f),
        )
    }

    /// Ramification index of the smallest grid carrying this series.
    pub fn ram(&self) -> u64 {
        self.ram
    }

    fn exp_of(&self, k: i64) -> Rat {
        Rat::new(BigInt::from(k), BigInt::from(self.ram))
    }

    /// Truncation bound, `None` for exact series.
    pub fn trunc(&self) -> Option<Rat> {
        self.trunc.map(|t| self.exp_of(t))
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// True when no term is known (the series may still be `O(z^tau)`).
    pub fn has_no_terms(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True only for the exact zero series.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.trunc.is_none()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Known terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, &Rat)> + '_ {
        self.coeffs.iter().map(move |(k, c)| (self.exp_of(*k), c))
    }

    /// Coefficient of `z^e`; errors if `e` lies at or beyond the truncation.
    pub fn coeff(&self, e: &Rat) -> Result<Rat> {
        if let Some(t) = self.trunc() {
            if *e >= t {
                return Err(Error::InsufficientPrecision(format!(
                    "coefficient of z^{e} requested from series truncated at {t}"
                )));
            }
        }
        let scaled = e * Rat::from_integer(BigInt::from(self.ram));
        if !scaled.is_integer() {
            return Ok(Rat::zero());
        }
        let k = scaled.to_integer().to_i64().expect("index fits in i64");
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero))
    }

    /// Exponent of the lowest known term.
    pub fn order(&self) -> Option<Rat> {
        self.coeffs.keys().next().map(|k| self.exp_of(*k))
    }

    /// Lowest known term, `(exponent, coefficient)`.
    pub fn leading_term(&self) -> Option<(Rat, Rat)> {
        self.coeffs
            .iter()
            .next()
            .map(|(k, c)| (self.exp_of(*k), c.clone()))
    }

    /// Guaranteed lower bound for the valuation: the order if a term is known,
    /// otherwise the truncation. `None` means exact zero.
    pub fn valuation_bound(&self) -> Option<Rat> {
        self.order().or_else(|| self.trunc())
    }

    pub fn neg(&self) -> Self {
        Self {
            ram: self.ram,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            ram: self.ram,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * s)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplies by `c * z^e`.
    pub fn mul_monomial(&self, c: &Rat, e: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let ram = self.ram.lcm(&denom_u64(e));
        let (coeffs, trunc) = self.regrid(ram);
        let shift = grid_index(e, ram);
        Self::from_grid(
            ram,
            coeffs.into_iter().map(|(k, v)| (k + shift, v * c)).collect(),
            trunc.map(|t| t + shift),
        )
    }

    pub fn shift(&self, e: &Rat) -> Self {
        self.mul_monomial(&int(1), e)
    }

    pub fn add(&self, other: &Self) -> Self {
        let ram = self.ram.lcm(&other.ram);
        let (mut a, ta) = self.regrid(ram);
        let (b, tb) = other.regrid(ram);
        for (k, c) in b {
            *a.entry(k).or_insert_with(Rat::zero) += c;
        }
        let trunc = min_opt(ta, tb);
        Self::from_grid(ram, a, trunc)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product with the tightest truncation implied by both operands:
    /// `min(tau_a + v_b, tau_b + v_a)` where `v` is the valuation bound.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let ram = self.ram.lcm(&other.ram);
        let (a, ta) = self.regrid(ram);
        let (b, tb) = other.regrid(ram);
        let va = a.keys().next().copied().or(ta);
        let vb = b.keys().next().copied().or(tb);
        let t1 = ta.zip(vb).map(|(t, v)| t + v);
        let t2 = tb.zip(va).map(|(t, v)| t + v);
        let trunc = min_opt(t1, t2);
        let mut out: BTreeMap<i64, Rat> = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                let k = ka + kb;
                if trunc.is_some_and(|t| k >= t) {
                    // b is sorted; later kb only grow
                    break;
                }
                *out.entry(k).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        Self::from_grid(ram, out, trunc)
    }

    /// Termwise `d/dz`; the truncation drops by one.
    pub fn derive(&self) -> Self {
        let r = self.ram as i64;
        let ram_q = Rat::from_integer(BigInt::from(self.ram));
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (k - r, c * Rat::from_integer(BigInt::from(*k)) / &ram_q))
            .collect();
        Self::from_grid(self.ram, coeffs, self.trunc.map(|t| t - r))
    }

    /// Drops every term at or beyond `tau` and lowers the bound to `tau` if needed.
    pub fn truncate(&self, tau: &Rat) -> Self {
        let ram = self.ram.lcm(&denom_u64(tau));
        let (coeffs, trunc) = self.regrid(ram);
        let t = grid_index(tau, ram);
        Self::from_grid(ram, coeffs, min_opt(trunc, Some(t)))
    }

    /// Multiplicative inverse of a series with finite truncation. The result is known
    /// to `tau - 2e` where `e` is the order. Exact monomials invert exactly.
    pub fn inv(&self) -> Result<Self> {
        match self.trunc() {
            Some(t) => {
                let (e, _) = self.leading_term().ok_or(Error::NotAUnit)?;
                self.inv_to(&(t - e * int(2)))
            }
            None => {
                if self.coeffs.len() == 1 {
                    let (e, c) = self.leading_term().ok_or(Error::NotAUnit)?;
                    Ok(Self::monomial(c.recip(), -e))
                } else if self.coeffs.is_empty() {
                    Err(Error::NotAUnit)
                } else {
                    Err(Error::InsufficientPrecision(
                        "inverse of an exact non-monomial series needs a target truncation".into(),
                    ))
                }
            }
        }
    }

    /// Inverse known up to `min(target, tau - 2e)`.
    pub fn inv_to(&self, target: &Rat) -> Result<Self> {
        let (e, c) = self.leading_term().ok_or(Error::NotAUnit)?;
        let ram = self.ram.lcm(&denom_u64(target)).lcm(&denom_u64(&e));
        let (f, tf) = self.regrid(ram);
        let ek = grid_index(&e, ram);
        let mut tk = grid_index(target, ram);
        if let Some(t) = tf {
            tk = tk.min(t - 2 * ek);
        }
        let c_inv = c.recip();
        // g_{-e+n} = -(1/c) sum_{i=1..n} f_{e+i} g_{-e+n-i}
        let nmax = tk + ek; // indices n with -e + n < tk
        let mut g: Vec<Rat> = Vec::new();
        let tail: Vec<(i64, Rat)> = f
            .iter()
            .filter(|(k, _)| **k > ek)
            .map(|(k, v)| (k - ek, v.clone()))
            .collect();
        for n in 0..nmax.max(0) {
            if n == 0 {
                g.push(c_inv.clone());
                continue;
            }
            let mut acc = Rat::zero();
            for (i, fi) in &tail {
                if *i > n {
                    break;
                }
                acc += fi * &g[(n - i) as usize];
            }
            g.push(-acc * &c_inv);
        }
        let coeffs = g
            .into_iter()
            .enumerate()
            .map(|(n, v)| (n as i64 - ek, v))
            .collect();
        Ok(Self::from_grid(ram, coeffs, Some(tk)))
    }

    /// Same series with every coefficient of `z^{k/2}`, `k` odd, negated
    /// (the substitution `z^{1/2} -> -z^{1/2}`).
    pub fn conjugate_half(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let e = self.exp_of(*k) * int(2);
                if e.is_integer() && e.to_integer().is_odd() {
                    (*k, -c)
                } else {
                    (*k, c.clone())
                }
            })
            .collect();
        Self::from_grid(self.ram, coeffs, self.trunc)
    }

    /// Keeps only terms with exponent strictly below `bound` (exactly: the result is
    /// an exact polynomial). Errors if the truncation hides terms below `bound`.
    pub fn principal_below(&self, bound: &Rat) -> Result<Self> {
        if let Some(t) = self.trunc() {
            if t < *bound {
                return Err(Error::InsufficientPrecision(format!(
                    "terms below {bound} requested from series truncated at {t}"
                )));
            }
        }
        Ok(Self::from_terms(
            self.terms()
                .filter(|(e, _)| e < bound)
                .map(|(e, c)| (e, c.clone())),
            None,
        ))
    }

    /// Coefficients on the grid `(1/ram)Z`, i.e. as a series in `t = z^{1/ram}`.
    pub fn grid_terms(&self, ram: u64) -> Vec<(i64, Rat)> {
        let (c, _) = self.regrid(ram);
        c.into_iter().collect()
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// The three ring operations exposed as one entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Inv,
}

pub fn series_arith(
    op: SeriesOp,
    f: &TruncatedPuiseuxSeries,
    g: Option<&TruncatedPuiseuxSeries>,
) -> Result<TruncatedPuiseuxSeries> {
    let need = || Error::InvalidInput("binary series operation needs two operands".into());
    match op {
        SeriesOp::Add => Ok(f.add(g.ok_or_else(need)?)),
        SeriesOp::Mul => Ok(f.mul(g.ok_or_else(need)?)),
        SeriesOp::Inv => f.inv(),
    }
}

impl fmt::Display for TruncatedPuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            if e.is_zero() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if e.is_one() {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^({e})")?;
                }
            }
        }
        if let Some(t) = self.trunc() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(z^({}))", fmt_rat(&t))?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
