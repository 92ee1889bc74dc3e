//! Finite direct sums of elementary modules, kept as sorted canonical multisets.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::elementary::{unipotent_tensor, ElementaryModule};
use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rat, int, Rat};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FormalModule {
    components: Vec<ElementaryModule>,
}

impl FormalModule {
    /// Canonicalizes, splits non-minimal ramification, and sorts.
    pub fn new(components: Vec<ElementaryModule>) -> Self {
        let mut out: Vec<ElementaryModule> = components
            .iter()
            .flat_map(|c| c.canonicalize().split())
            .collect();
        out.sort();
        Self { components: out }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `rank` copies of the trivial line.
    pub fn trivial(rank: u64) -> Self {
        Self::new(
            (0..rank)
                .map(|_| ElementaryModule::kummer(int(0), 1))
                .collect(),
        )
    }

    pub fn components(&self) -> &[ElementaryModule] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut c = self.components.clone();
        c.extend(other.components.iter().cloned());
        Self::new(c)
    }

    pub fn rank(&self) -> u64 {
        self.components.iter().map(ElementaryModule::rank).sum()
    }

    /// Sum of `slope * rank`; an integer for consistent data.
    pub fn irregularity(&self) -> Result<Rat> {
        let irr = self.irregularity_unchecked();
        if !irr.is_integer() {
            return Err(Error::InvalidRamifiedData(format!(
                "total irregularity {} is not an integer",
                fmt_rat(&irr)
            )));
        }
        Ok(irr)
    }

    pub(crate) fn irregularity_unchecked(&self) -> Rat {
        self.components
            .iter()
            .fold(Rat::zero(), |acc, c| acc + c.irregularity())
    }

    /// `(slope, multiplicity)` with multiplicity counted in rank.
    pub fn slopes(&self) -> Vec<(Rat, u64)> {
        let mut m: BTreeMap<Rat, u64> = BTreeMap::new();
        for c in &self.components {
            *m.entry(c.slope()).or_default() += c.rank();
        }
        m.into_iter().collect()
    }

    pub fn is_regular(&self) -> bool {
        self.components.iter().all(ElementaryModule::is_regular)
    }

    pub fn slope_part(&self, s: &Rat) -> Self {
        Self {
            components: self
                .components
                .iter()
                .filter(|c| &c.slope() == s)
                .cloned()
                .collect(),
        }
    }

    pub fn tensor_kummer(&self, gamma: &Rat) -> Self {
        Self::new(
            self.components
                .iter()
                .map(|c| c.tensor_kummer(gamma))
                .collect(),
        )
    }

    pub fn dual(&self) -> Self {
        Self::new(self.components.iter().map(ElementaryModule::dual).collect())
    }

    /// `M (x) M^dual`, for unramified components only.
    pub fn end_of(&self) -> Result<Self> {
        let mut out = Vec::new();
        for a in &self.components {
            for b in &self.components {
                let line = a.hom_line(b)?;
                for m in unipotent_tensor(a.unip(), b.unip()) {
                    out.push(line.with_unip(m));
                }
            }
        }
        Ok(Self::new(out))
    }

    /// One horizontal line per trivial-type unipotent block.
    pub fn hor_rank(&self) -> u64 {
        self.components
            .iter()
            .filter(|c| c.is_trivial_type())
            .count() as u64
    }

    pub fn phi_mid_rank(&self) -> u64 {
        self.rank() - self.hor_rank()
    }

    /// Vanishing cycles of the middle extension: each trivial-type `U_m` becomes
    /// `U_{m-1}`.
    pub fn psi_to_phi(&self) -> Self {
        Self::new(
            self.components
                .iter()
                .filter_map(|c| {
                    if !c.is_trivial_type() {
                        Some(c.clone())
                    } else if c.unip() > 1 {
                        Some(c.with_unip(c.unip() - 1))
                    } else {
                        None
                    }
                })
                .collect(),
        )
    }

    /// Inverse of [`psi_to_phi`](Self::psi_to_phi) given the total rank.
    pub fn phi_to_psi(&self, rank: u64) -> Result<Self> {
        let own = self.rank();
        if rank < own {
            return Err(Error::InconsistentRank(format!(
                "rank {rank} is smaller than the vanishing-cycle rank {own}"
            )));
        }
        let deficit = rank - own;
        let promoted = self.hor_rank();
        if deficit < promoted {
            return Err(Error::InconsistentRank(format!(
                "rank deficit {deficit} cannot cover {promoted} unipotent blocks"
            )));
        }
        let mut out: Vec<ElementaryModule> = self
            .components
            .iter()
            .map(|c| {
                if c.is_trivial_type() {
                    c.with_unip(c.unip() + 1)
                } else {
                    c.clone()
                }
            })
            .collect();
        for _ in 0..deficit - promoted {
            out.push(ElementaryModule::kummer(int(0), 1));
        }
        Ok(Self::new(out))
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self == other
    }
}

impl fmt::Display for FormalModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn k(a: Rat) -> ElementaryModule {
        ElementaryModule::kummer(a, 1)
    }

    fn u(m: u32) -> ElementaryModule {
        ElementaryModule::kummer(int(0), m)
    }

    fn e2(c: i64) -> ElementaryModule {
        ElementaryModule::exponential(int(c), int(-2), int(0)).unwrap()
    }

    #[test]
    fn ranks_and_irregularity() {
        let m = FormalModule::new(vec![k(rat(1, 2)), e2(1)]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.irregularity().unwrap(), int(1));
        assert_eq!(m.slope_part(&int(0)), FormalModule::new(vec![k(rat(1, 2))]));
        assert_eq!(m.slope_part(&int(1)), FormalModule::new(vec![e2(1)]));
        assert!(m.slope_part(&int(5)).is_empty());
    }

    #[test]
    fn end_of_two_kummers() {
        let m = FormalModule::new(vec![k(rat(1, 3)), k(rat(1, 2))]);
        let end = m.end_of().unwrap();
        let expect = FormalModule::new(vec![u(1), u(1), k(rat(1, 6)), k(rat(-1, 6))]);
        assert_eq!(end, expect);
        assert_eq!(FormalModule::new(vec![k(rat(2, 7))]).end_of().unwrap(), FormalModule::trivial(1));
    }

    #[test]
    fn end_of_ramified_is_rejected() {
        let e = ElementaryModule::exponential(int(1), rat(-3, 2), int(0)).unwrap();
        assert!(matches!(
            FormalModule::new(vec![e]).end_of(),
            Err(Error::UnsupportedRamification(_))
        ));
    }

    #[test]
    fn horizontal_lines() {
        let m = FormalModule::new(vec![u(3)]);
        assert_eq!((m.hor_rank(), m.phi_mid_rank()), (1, 2));
        let m = FormalModule::new(vec![k(rat(1, 2))]);
        assert_eq!((m.hor_rank(), m.phi_mid_rank()), (0, 1));
        let m = FormalModule::trivial(2);
        assert_eq!((m.hor_rank(), m.phi_mid_rank()), (2, 0));
    }

    #[test]
    fn phi_psi_round_trips() {
        let m = FormalModule::new(vec![u(2)]);
        assert_eq!(m.psi_to_phi(), FormalModule::new(vec![u(1)]));
        assert_eq!(FormalModule::new(vec![u(1)]).phi_to_psi(2).unwrap(), m);
        assert!(FormalModule::trivial(2).psi_to_phi().is_empty());
        assert_eq!(FormalModule::empty().phi_to_psi(2).unwrap(), FormalModule::trivial(2));
        let m = FormalModule::new(vec![u(3), u(1)]);
        assert_eq!(m.psi_to_phi(), FormalModule::new(vec![u(2)]));
        assert_eq!(m.psi_to_phi().phi_to_psi(4).unwrap(), m);
    }

    #[test]
    fn phi_to_psi_rank_errors() {
        assert!(matches!(
            FormalModule::new(vec![u(1)]).phi_to_psi(1),
            Err(Error::InconsistentRank(_))
        ));
        assert!(FormalModule::trivial(1).phi_to_psi(0).is_err());
    }

    #[test]
    fn isomorphism_is_canonical_equality() {
        let a = FormalModule::new(vec![k(rat(1, 3)), e2(1)]);
        let b = FormalModule::new(vec![e2(1), k(rat(4, 3))]);
        assert!(a.is_isomorphic(&b));
        assert!(!FormalModule::new(vec![e2(1)]).is_isomorphic(&FormalModule::new(vec![e2(2)])));
    }

    #[test]
    fn dual_of_exponential() {
        let e = ElementaryModule::exponential(int(1), int(-2), rat(1, 4)).unwrap();
        let d = FormalModule::new(vec![e]).dual();
        let expect = ElementaryModule::exponential(int(-1), int(-2), rat(3, 4)).unwrap();
        assert_eq!(d, FormalModule::new(vec![expect]));
    }
}
