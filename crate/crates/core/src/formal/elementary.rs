//! Elementary modules `E_r(f, alpha) (x) U_m`: the connection `d/dz + f + alpha/z` on
//! `Q((z^{1/r}))`, tensored with a unipotent Jordan block of size `m`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{denom_u64, fmt_rat, int, rat, rem_euclid, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryModule {
    ram: u64,
    exp: TruncatedPuiseuxSeries,
    residue: Rat,
    unip: u32,
}

impl ElementaryModule {
    /// Validates and canonicalizes: exponents above `-1` are gauged away, the `z^-1`
    /// coefficient moves into the residue, the residue is reduced modulo `1/r`, and for
    /// `r = 2` the sign of `z^{1/2}` is normalized.
    pub fn new(ram: u64, exp: TruncatedPuiseuxSeries, residue: Rat, unip: u32) -> Result<Self> {
        if ram == 0 {
            return Err(Error::InvalidRamifiedData("ramification index must be >= 1".into()));
        }
        if unip == 0 {
            return Err(Error::InvalidInput("unipotent block size must be >= 1".into()));
        }
        if !ram.is_multiple_of(exp.ram()) {
            return Err(Error::InvalidRamifiedData(format!(
                "exponential part needs z^(1/{}) but ramification is {ram}",
                exp.ram()
            )));
        }
        if let Some(t) = exp.trunc() {
            if t <= int(-1) {
                return Err(Error::InsufficientPrecision(format!(
                    "exponential part truncated at {t}; the z^-1 coefficient is needed"
                )));
            }
        }
        let mut residue = residue;
        let mut polar = Vec::new();
        for (e, c) in exp.terms() {
            if e == int(-1) {
                residue += c;
            } else if e < int(-1) {
                polar.push((e, c.clone()));
            }
        }
        let mut exp = TruncatedPuiseuxSeries::from_terms(polar, None);
        let modulus = rat(1, ram as i64);
        residue = rem_euclid(&residue, &modulus);
        if ram == 2 {
            let lowest_odd = exp.terms().find(|(e, _)| !e.is_integer()).map(|(_, c)| c.clone());
            if lowest_odd.is_some_and(|c| c.is_negative()) {
                exp = exp.conjugate_half();
            }
        }
        Ok(Self {
            ram,
            exp,
            residue,
            unip,
        })
    }

    /// Regular rank-one `K^alpha (x) U_m`.
    pub fn kummer(alpha: Rat, unip: u32) -> Self {
        Self::new(1, TruncatedPuiseuxSeries::zero(), alpha, unip).expect("regular data is valid")
    }

    /// Unramified `E(c z^e, alpha)`.
    pub fn exponential(c: Rat, e: Rat, alpha: Rat) -> Result<Self> {
        let ram = denom_u64(&e);
        Self::new(ram, TruncatedPuiseuxSeries::monomial(c, e), alpha, 1)
    }

    pub fn ram(&self) -> u64 {
        self.ram
    }

    pub fn exp(&self) -> &TruncatedPuiseuxSeries {
        &self.exp
    }

    pub fn residue(&self) -> &Rat {
        &self.residue
    }

    pub fn unip(&self) -> u32 {
        self.unip
    }

    pub fn canonicalize(&self) -> Self {
        Self::new(self.ram, self.exp.clone(), self.residue.clone(), self.unip)
            .expect("canonical data stays valid")
    }

    pub fn is_regular(&self) -> bool {
        self.exp.is_zero()
    }

    /// `f = 0`, residue `0`, unramified: a unipotent block of the trivial module.
    pub fn is_trivial_type(&self) -> bool {
        self.ram == 1 && self.exp.is_zero() && self.residue.is_zero()
    }

    /// `0` when regular, else `-ord(f) - 1`.
    pub fn slope(&self) -> Rat {
        match self.exp.order() {
            Some(e) => -e - int(1),
            None => int(0),
        }
    }

    pub fn rank(&self) -> u64 {
        self.ram * self.unip as u64
    }

    pub fn irregularity(&self) -> Rat {
        self.slope() * int(self.rank() as i64)
    }

    /// The smallest `r'` dividing `ram` with `f` supported on `(1/r')Z`.
    pub fn minimal_ram(&self) -> u64 {
        self.exp.ram().max(1)
    }

    /// Splits a non-minimal ramification `r = k r'` into `k` components
    /// `E_{r'}(f, alpha + j/r)`.
    pub fn split(&self) -> Vec<Self> {
        let r0 = self.minimal_ram();
        if r0 == self.ram {
            return vec![self.clone()];
        }
        let k = self.ram / r0;
        (0..k)
            .map(|j| {
                Self::new(
                    r0,
                    self.exp.clone(),
                    &self.residue + rat(j as i64, self.ram as i64),
                    self.unip,
                )
                .expect("split components are valid")
            })
            .collect()
    }

    pub fn dual(&self) -> Self {
        Self::new(self.ram, self.exp.neg(), -self.residue.clone(), self.unip)
            .expect("dual data is valid")
    }

    pub fn tensor_kummer(&self, gamma: &Rat) -> Self {
        Self::new(self.ram, self.exp.clone(), &self.residue + gamma, self.unip)
            .expect("twisted data is valid")
    }

    pub fn with_unip(&self, unip: u32) -> Self {
        Self {
            unip,
            ..self.clone()
        }
    }

    /// The ramification-free tensor product `E_1(f,a) (x) E_1(g,b)^dual` without the
    /// unipotent part.
    pub(crate) fn hom_line(&self, other: &Self) -> Result<Self> {
        if self.ram != 1 || other.ram != 1 {
            return Err(Error::UnsupportedRamification(
                "endomorphisms of ramified components need roots of unity".into(),
            ));
        }
        Self::new(
            1,
            self.exp.sub(&other.exp),
            &self.residue - &other.residue,
            1,
        )
    }

    fn sort_key(&self) -> (u64, Vec<(Rat, Rat)>, Rat, u32) {
        (
            self.ram,
            self.exp.terms().map(|(e, c)| (e, c.clone())).collect(),
            self.residue.clone(),
            self.unip,
        )
    }
}

impl PartialOrd for ElementaryModule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ElementaryModule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// `U_a (x) U_b = sum_{k=1}^{min(a,b)} U_{a+b+1-2k}`.
pub fn unipotent_tensor(a: u32, b: u32) -> Vec<u32> {
    (1..=a.min(b)).map(|k| a + b + 1 - 2 * k).collect()
}

impl fmt::Display for ElementaryModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E_{}({}, {})", self.ram, self.exp, fmt_rat(&self.residue))?;
        if self.unip > 1 {
            write!(f, " x U_{}", self.unip)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(terms: &[(i64, i64, i64, i64)]) -> TruncatedPuiseuxSeries {
        TruncatedPuiseuxSeries::from_terms(
            terms.iter().map(|&(en, ed, cn, cd)| (rat(en, ed), rat(cn, cd))),
            None,
        )
    }

    #[test]
    fn slopes() {
        assert_eq!(ElementaryModule::kummer(rat(1, 2), 1).slope(), int(0));
        let e = ElementaryModule::new(1, series(&[(-2, 1, 3, 1)]), int(0), 1).unwrap();
        assert_eq!(e.slope(), int(1));
        let e = ElementaryModule::new(2, series(&[(-5, 2, 1, 1)]), int(0), 1).unwrap();
        assert_eq!(e.slope(), rat(3, 2));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.irregularity(), int(3));
    }

    #[test]
    fn gauge_removes_holomorphic_terms() {
        let e = ElementaryModule::new(
            1,
            series(&[(-2, 1, 1, 1), (0, 1, 5, 1), (1, 1, 2, 1)]),
            rat(1, 3),
            1,
        )
        .unwrap();
        assert_eq!(e.exp(), &series(&[(-2, 1, 1, 1)]));
        assert_eq!(e.residue(), &rat(1, 3));
    }

    #[test]
    fn residue_relocation_and_reduction() {
        let e = ElementaryModule::new(1, series(&[(-2, 1, 1, 1), (-1, 1, 1, 4)]), int(0), 1).unwrap();
        assert_eq!(e.exp(), &series(&[(-2, 1, 1, 1)]));
        assert_eq!(e.residue(), &rat(1, 4));
        assert_eq!(ElementaryModule::kummer(rat(7, 3), 1).residue(), &rat(1, 3));
        let r2 = ElementaryModule::new(2, series(&[(-3, 2, 1, 1)]), rat(3, 4), 1).unwrap();
        assert_eq!(r2.residue(), &rat(1, 4));
    }

    #[test]
    fn half_integer_sign_is_normalized() {
        let a = ElementaryModule::new(2, series(&[(-5, 2, -1, 1), (-2, 1, 1, 1), (-3, 2, 2, 1)]), int(0), 1)
            .unwrap();
        let b = ElementaryModule::new(2, series(&[(-5, 2, 1, 1), (-2, 1, 1, 1), (-3, 2, -2, 1)]), int(0), 1)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dual_negates() {
        let e = ElementaryModule::new(1, series(&[(-2, 1, 1, 1)]), rat(1, 4), 1).unwrap();
        let d = e.dual();
        assert_eq!(d.exp(), &series(&[(-2, 1, -1, 1)]));
        assert_eq!(d.residue(), &rat(3, 4));
        assert_eq!(d.dual(), e);
    }

    #[test]
    fn non_minimal_ramification_splits() {
        let e = ElementaryModule::new(2, TruncatedPuiseuxSeries::zero(), rat(1, 8), 1).unwrap();
        let parts = e.split();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].residue(), &rat(1, 8));
        assert_eq!(parts[1].residue(), &rat(5, 8));
    }

    #[test]
    fn clebsch_gordan() {
        assert_eq!(unipotent_tensor(2, 2), vec![3, 1]);
        assert_eq!(unipotent_tensor(1, 4), vec![4]);
        assert_eq!(unipotent_tensor(3, 2), vec![4, 2]);
    }
}
