//! Truncated realization of `M_! = j_* j_! M` for a rank-one connection, on which
//! `d` is invertible and the Fourier variables act by `zeta = -d^{-1}` and
//! `d_zeta = -d^2 z`.
//!
//! For an integral residue (gauged to `0`) the space is `Q[[z]] + sum_j Q d^j(1)`
//! with `z d(1) = 0`; elements then carry a finite `delta` part.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rat, int, is_integral, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;
use crate::formal::ElementaryModule;

use super::connection::Connection;

/// Default exponent window.
pub const DEFAULT_TRUNC: i64 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub series: TruncatedPuiseuxSeries,
    /// `delta[k]` is the coefficient of `d^{k+1}(1)`.
    pub delta: Vec<Rat>,
}

impl Element {
    pub fn from_series(series: TruncatedPuiseuxSeries) -> Self {
        Self {
            series,
            delta: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_series(TruncatedPuiseuxSeries::one())
    }

    fn normalized(mut self) -> Self {
        while self.delta.last().is_some_and(Zero::is_zero) {
            self.delta.pop();
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.delta.len().max(other.delta.len());
        let delta = (0..n)
            .map(|k| {
                self.delta.get(k).cloned().unwrap_or_else(Rat::zero)
                    + other.delta.get(k).cloned().unwrap_or_else(Rat::zero)
            })
            .collect();
        Self {
            series: self.series.add(&other.series),
            delta,
        }
        .normalized()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            series: self.series.scale(c),
            delta: self.delta.iter().map(|d| d * c).collect(),
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    /// Lowest exponent, with `d^k(1)` counted at `-k`. `None` when nothing is known.
    pub fn order(&self) -> Option<Rat> {
        if let Some(k) = self.delta.iter().rposition(|d| !d.is_zero()) {
            return Some(int(-(k as i64) - 1));
        }
        self.series.order()
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.series.has_no_terms() && self.delta.iter().all(Zero::is_zero)
    }

    pub fn trunc(&self) -> Option<Rat> {
        self.series.trunc()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    conn: Connection,
    ram: u64,
    extended: bool,
    cap: Rat,
    slope: Rat,
}

impl Realization {
    /// `f` exact with exponents in `(1/r)Z`; `trunc` is the exponent window.
    pub fn new(f: &TruncatedPuiseuxSeries, residue: &Rat, extended: bool, trunc: &Rat) -> Result<Self> {
        let ram = f.ram();
        let regular = f.order().is_none_or(|o| o >= int(-1));
        if regular && !f.is_zero() {
            return Err(Error::InvalidInput(
                "regular connections enter through their residue only".into(),
            ));
        }
        if f.is_zero() && is_integral(residue) && !extended {
            return Err(Error::Resonance(format!(
                "residue {} is integral; 1 is horizontal on the plain lattice",
                fmt_rat(residue)
            )));
        }
        if extended && !(f.is_zero() && is_integral(residue)) {
            return Err(Error::InvalidInput(
                "the extended basis is only for integral-residue regular data".into(),
            ));
        }
        let residue = if extended { int(0) } else { residue.clone() };
        let conn = Connection::new(f, &residue)?;
        let slope = conn.irregular_pole().map(|p| p - int(1)).unwrap_or_else(|| int(0));
        Ok(Self {
            conn,
            ram,
            extended,
            cap: trunc.clone(),
            slope,
        })
    }

    /// Realization of a rank-one (possibly ramified) elementary module; integral
    /// regular residues switch to the extended basis.
    pub fn for_module(e: &ElementaryModule, trunc: &Rat) -> Result<Self> {
        if e.unip() != 1 {
            return Err(Error::UnsupportedRamification(
                "the oracle handles unipotent size 1 only".into(),
            ));
        }
        let extended = e.is_regular() && is_integral(e.residue());
        Self::new(e.exp(), e.residue(), extended, trunc)
    }

    /// Same data, different window.
    pub fn with_trunc(&self, trunc: &Rat) -> Self {
        Self {
            cap: trunc.clone(),
            ..self.clone()
        }
    }

    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    pub fn ram(&self) -> u64 {
        self.ram
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn trunc(&self) -> &Rat {
        &self.cap
    }

    pub fn slope(&self) -> &Rat {
        &self.slope
    }

    /// `r (s + 1)`: the rank of the Fourier transform, and the number of lattice
    /// generators `z^{b/r}` per period of `zeta`.
    pub fn period(&self) -> u64 {
        let p = int(self.ram as i64) * (&self.slope + int(1));
        crate::exact::rational::to_i64(&p).expect("period is an integer") as u64
    }

    /// `d`.
    pub fn d(&self, v: &Element) -> Element {
        if !self.extended {
            return Element::from_series(self.conn.apply(&v.series));
        }
        let c0 = v.series.coeff(&int(0)).unwrap_or_else(|_| Rat::zero());
        let mut delta = Vec::with_capacity(v.delta.len() + 1);
        delta.push(c0);
        delta.extend(v.delta.iter().cloned());
        Element {
            series: v.series.derive(),
            delta,
        }
        .normalized()
    }

    /// `d^{-1}`; solves `d u = v` below the window.
    pub fn d_inv(&self, v: &Element) -> Result<Element> {
        if !self.extended {
            return Ok(Element::from_series(self.conn.solve(&v.series, &self.cap)?));
        }
        if v.series.order().is_some_and(|o| o < int(0)) {
            return Err(Error::InvalidInput(
                "extended realization holds no negative powers of z".into(),
            ));
        }
        // z^k -> z^{k+1}/(k+1); d(1) -> 1; d^{k+1}(1) -> d^k(1)
        let mut terms: Vec<(Rat, Rat)> = v
            .series
            .terms()
            .map(|(e, c)| {
                let e1 = &e + int(1);
                let c1 = c / &e1;
                (e1, c1)
            })
            .collect();
        if let Some(d0) = v.delta.first() {
            terms.push((int(0), d0.clone()));
        }
        let trunc = v.series.trunc().map(|t| t + int(1));
        let delta = v.delta.iter().skip(1).cloned().collect();
        Ok(Element {
            series: TruncatedPuiseuxSeries::from_terms(terms, trunc),
            delta,
        }
        .normalized())
    }

    /// Multiplication by `z`.
    pub fn mul_z(&self, v: &Element) -> Element {
        let series = v.series.shift(&int(1));
        if !self.extended {
            return Element::from_series(series);
        }
        // z d^{k+1}(1) = -k d^k(1)
        let delta = (1..v.delta.len())
            .map(|k| -int(k as i64) * &v.delta[k])
            .collect();
        Element { series, delta }.normalized()
    }

    /// `zeta = -d^{-1}`.
    pub fn zeta(&self, v: &Element) -> Result<Element> {
        Ok(self.d_inv(v)?.neg())
    }

    pub fn zeta_pow(&self, v: &Element, k: usize) -> Result<Element> {
        let mut x = v.clone();
        for _ in 0..k {
            x = self.zeta(&x)?;
        }
        Ok(x)
    }

    /// `d_zeta = -d^2 z`.
    pub fn dzeta(&self, v: &Element) -> Element {
        self.d(&self.d(&self.mul_z(v))).neg()
    }

    /// `theta = zeta d_zeta = d z`, computed without inverting `d`.
    pub fn theta(&self, v: &Element) -> Element {
        self.d(&self.mul_z(v))
    }

    /// Lattice generators `z^{b/r}`, `0 <= b < r`.
    pub fn generators(&self) -> Vec<Element> {
        (0..self.ram)
            .map(|b| {
                Element::from_series(TruncatedPuiseuxSeries::monomial(
                    Rat::one(),
                    Rat::new((b as i64).into(), (self.ram as i64).into()),
                ))
            })
            .collect()
    }
}

/// `v` with `d v + F v = w`, for the connection of `real`.
pub fn solve_derivation(real: &Realization, w: &TruncatedPuiseuxSeries) -> Result<TruncatedPuiseuxSeries> {
    Ok(real.d_inv(&Element::from_series(w.clone()))?.series)
}
