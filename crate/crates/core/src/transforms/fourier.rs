//! Local Fourier transforms: exact on regular modules, invariant bookkeeping otherwise.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rat, int, to_i64, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;
use crate::formal::{ElementaryModule, FormalModule};

/// Which local transform: `(x, inf)`, `(inf, x)` or `(inf, inf)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flavor {
    ToInfinity(Rat),
    FromInfinity(Rat),
    InfinityInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClassLabel {
    At(Rat),
    Infinity,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::At(x) => write!(f, "{}", fmt_rat(x)),
            ClassLabel::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformBookkeeping {
    pub rank_out: u64,
    pub irr_out: Rat,
    /// Slopes before the class twist, with multiplicity.
    pub slopes_out: Vec<(Rat, u64)>,
    pub class_label: ClassLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityDecomposition {
    pub over1: FormalModule,
    pub classes: BTreeMap<Rat, FormalModule>,
}

fn ell(x: &Rat) -> TruncatedPuiseuxSeries {
    TruncatedPuiseuxSeries::monomial(x.clone(), int(-2))
}

/// `M (x) l_x`: adds `x z^-2` to every exponential part.
pub fn twist_by_class(m: &FormalModule, x: &Rat) -> FormalModule {
    if x.is_zero() {
        return m.clone();
    }
    let tw = ell(x);
    FormalModule::new(
        m.components()
            .iter()
            .map(|c| {
                ElementaryModule::new(c.ram(), c.exp().add(&tw), c.residue().clone(), c.unip())
                    .expect("twisted data is valid")
            })
            .collect(),
    )
}

/// `Four(x, inf)` on regular modules: `K^a (x) U_m -> l_x (x) K^{a+1} (x) U_m`.
pub fn fourier_local_regular(m: &FormalModule, x: &Rat) -> Result<FormalModule> {
    let mut out = Vec::with_capacity(m.components().len());
    for c in m.components() {
        if !c.is_regular() {
            return Err(Error::UseBookkeeping(format!("component {c} is irregular")));
        }
        out.push(ElementaryModule::kummer(c.residue() + int(1), c.unip()));
    }
    Ok(twist_by_class(&FormalModule::new(out), x))
}

/// `Four(inf, x)` on class-`x` modules that are regular after untwisting.
pub fn fourier_local_regular_inverse(m: &FormalModule, x: &Rat) -> Result<FormalModule> {
    let untwisted = twist_by_class(m, &-x.clone());
    let mut out = Vec::with_capacity(untwisted.components().len());
    for c in untwisted.components() {
        if !c.is_regular() {
            return Err(Error::UseBookkeeping(format!(
                "component {c} is irregular after removing the class {} twist",
                fmt_rat(x)
            )));
        }
        out.push(ElementaryModule::kummer(c.residue() - int(1), c.unip()));
    }
    Ok(FormalModule::new(out))
}

fn integral_mult(q: Rat) -> Result<u64> {
    if !q.is_integer() {
        return Err(Error::InvalidRamifiedData(format!(
            "multiplicity {} is not an integer",
            fmt_rat(&q)
        )));
    }
    Ok(to_i64(&q).expect("small multiplicity") as u64)
}

fn summarize(slopes: Vec<(Rat, u64)>, class_label: ClassLabel) -> TransformBookkeeping {
    let mut merged: BTreeMap<Rat, u64> = BTreeMap::new();
    for (s, k) in slopes {
        if k > 0 {
            *merged.entry(s).or_default() += k;
        }
    }
    let rank_out = merged.values().sum();
    let irr_out = merged
        .iter()
        .fold(Rat::zero(), |acc, (s, k)| acc + s * int(*k as i64));
    TransformBookkeeping {
        rank_out,
        irr_out,
        slopes_out: merged.into_iter().collect(),
        class_label,
    }
}

/// Rank, irregularity and slopes of a local Fourier transform.
pub fn fourier_bookkeeping(m: &FormalModule, flavor: &Flavor) -> Result<TransformBookkeeping> {
    let one = Rat::one();
    match flavor {
        Flavor::ToInfinity(x) => {
            let mut out = Vec::new();
            for (s, k) in m.slopes() {
                let mult = integral_mult(int(k as i64) * (&one + &s))?;
                out.push((&s / (&one + &s), mult));
            }
            Ok(summarize(out, ClassLabel::At(x.clone())))
        }
        Flavor::InfinityInfinity => {
            let mut out = Vec::new();
            for (s, k) in m.slopes() {
                if s <= one {
                    return Err(Error::WrongSlopeSector(format!(
                        "(inf, inf) needs slopes > 1, found {}",
                        fmt_rat(&s)
                    )));
                }
                let mult = integral_mult(int(k as i64) * (&s - &one))?;
                out.push((&s / (&s - &one), mult));
            }
            Ok(summarize(out, ClassLabel::Infinity))
        }
        Flavor::FromInfinity(x) => {
            let untwisted = twist_by_class(m, &-x.clone());
            let mut out = Vec::new();
            for (t, k) in untwisted.slopes() {
                if t >= one {
                    return Err(Error::WrongSlopeSector(format!(
                        "(inf, {}) needs slopes < 1 after untwisting, found {}",
                        fmt_rat(x),
                        fmt_rat(&t)
                    )));
                }
                let mult = integral_mult(int(k as i64) * (&one - &t))?;
                out.push((&t / (&one - &t), mult));
            }
            Ok(summarize(out, ClassLabel::At(x.clone())))
        }
    }
}

impl TransformBookkeeping {
    /// A module with these slopes, built from monomial exponential parts, twisted by
    /// `l_x` for a finite class label. It represents the invariants only.
    pub fn model(&self) -> Result<FormalModule> {
        let mut comps = Vec::new();
        for (s, k) in &self.slopes_out {
            let q = crate::exact::rational::denom_u64(s);
            if k % q != 0 {
                return Err(Error::InvalidRamifiedData(format!(
                    "multiplicity {k} of slope {} is not a multiple of {q}",
                    fmt_rat(s)
                )));
            }
            for _ in 0..k / q {
                comps.push(if s.is_zero() {
                    ElementaryModule::kummer(int(0), 1)
                } else {
                    ElementaryModule::new(
                        q,
                        TruncatedPuiseuxSeries::monomial(int(1), -(s + int(1))),
                        int(0),
                        1,
                    )?
                });
            }
        }
        let m = FormalModule::new(comps);
        Ok(match &self.class_label {
            ClassLabel::At(x) => twist_by_class(&m, x),
            ClassLabel::Infinity => m,
        })
    }
}

/// Splits a module at infinity into its slope `> 1` part and the classes of the
/// slope `<= 1` components, keyed by the `z^-2` coefficient of the exponential part.
pub fn infinity_decompose(m: &FormalModule) -> InfinityDecomposition {
    let one = Rat::one();
    let mut over1 = Vec::new();
    let mut classes: BTreeMap<Rat, Vec<ElementaryModule>> = BTreeMap::new();
    for c in m.components() {
        if c.slope() > one {
            over1.push(c.clone());
        } else {
            let x = c.exp().coeff(&int(-2)).unwrap_or_else(|_| Rat::zero());
            classes.entry(x).or_default().push(c.clone());
        }
    }
    InfinityDecomposition {
        over1: FormalModule::new(over1),
        classes: classes
            .into_iter()
            .map(|(x, v)| (x, FormalModule::new(v)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn exp_mod(c: i64, e: i64, a: Rat) -> FormalModule {
        FormalModule::new(vec![ElementaryModule::exponential(int(c), int(e), a).unwrap()])
    }

    #[test]
    fn kummer_rule() {
        let m = FormalModule::new(vec![ElementaryModule::kummer(rat(1, 2), 1)]);
        let out = fourier_local_regular(&m, &int(0)).unwrap();
        assert_eq!(out, FormalModule::new(vec![ElementaryModule::kummer(rat(3, 2), 1)]));
        let trivial = FormalModule::trivial(1);
        assert_eq!(fourier_local_regular(&trivial, &int(0)).unwrap(), FormalModule::trivial(1));
    }

    #[test]
    fn class_placement() {
        let m = FormalModule::new(vec![ElementaryModule::kummer(rat(1, 3), 1)]);
        let out = fourier_local_regular(&m, &int(2)).unwrap();
        let expect = exp_mod(2, -2, rat(4, 3));
        assert_eq!(out, expect);
        assert_eq!(fourier_local_regular_inverse(&out, &int(2)).unwrap(), m);
    }

    #[test]
    fn irregular_needs_bookkeeping() {
        let m = exp_mod(1, -2, int(0));
        assert!(matches!(fourier_local_regular(&m, &int(0)), Err(Error::UseBookkeeping(_))));
    }

    #[test]
    fn bookkeeping_examples() {
        let b = fourier_bookkeeping(&exp_mod(1, -2, int(0)), &Flavor::ToInfinity(int(0))).unwrap();
        assert_eq!(b.rank_out, 2);
        assert_eq!(b.slopes_out, vec![(rat(1, 2), 2)]);
        assert_eq!(b.irr_out, int(1));

        let b = fourier_bookkeeping(&exp_mod(1, -3, int(0)), &Flavor::InfinityInfinity).unwrap();
        assert_eq!(b.rank_out, 1);
        assert_eq!(b.slopes_out, vec![(int(2), 1)]);

        let k = FormalModule::new(vec![ElementaryModule::kummer(rat(1, 5), 1)]);
        let b = fourier_bookkeeping(&k, &Flavor::ToInfinity(int(0))).unwrap();
        assert_eq!((b.rank_out, b.slopes_out), (1, vec![(int(0), 1)]));
    }

    #[test]
    fn sector_checks() {
        let m = exp_mod(1, -2, int(0));
        assert!(matches!(
            fourier_bookkeeping(&m, &Flavor::InfinityInfinity),
            Err(Error::WrongSlopeSector(_))
        ));
        assert!(matches!(
            fourier_bookkeeping(&m, &Flavor::FromInfinity(int(0))),
            Err(Error::WrongSlopeSector(_))
        ));
        // slope 1 with leading coefficient 3 is class 3 and untwists to slope 0
        assert_eq!(
            fourier_bookkeeping(&exp_mod(3, -2, rat(1, 2)), &Flavor::FromInfinity(int(3)))
                .unwrap()
                .rank_out,
            1
        );
    }

    #[test]
    fn round_trip_through_model() {
        let m = FormalModule::new(vec![
            ElementaryModule::exponential(int(1), int(-3), int(0)).unwrap(),
            ElementaryModule::exponential(int(2), rat(-3, 2), int(0)).unwrap(),
            ElementaryModule::kummer(rat(1, 3), 2),
        ]);
        let x = int(5);
        let fwd = fourier_bookkeeping(&m, &Flavor::ToInfinity(x.clone())).unwrap();
        assert!(fwd.slopes_out.iter().all(|(s, _)| *s < int(1)));
        let back = fourier_bookkeeping(&fwd.model().unwrap(), &Flavor::FromInfinity(x)).unwrap();
        assert_eq!(back.rank_out, m.rank());
        assert_eq!(back.irr_out, m.irregularity().unwrap());
        assert_eq!(back.slopes_out, m.slopes());
    }

    #[test]
    fn decomposition() {
        let k = FormalModule::new(vec![ElementaryModule::kummer(rat(1, 2), 1)]);
        let d = infinity_decompose(&k);
        assert_eq!(d.classes.keys().cloned().collect::<Vec<_>>(), vec![int(0)]);

        let l3 = twist_by_class(&k, &int(3));
        assert_eq!(infinity_decompose(&l3).classes.keys().cloned().collect::<Vec<_>>(), vec![int(3)]);

        let e = exp_mod(1, -3, int(0));
        let d = infinity_decompose(&e);
        assert!(d.classes.is_empty());
        assert_eq!(d.over1, e);

        let all = k.direct_sum(&l3).direct_sum(&e);
        let d = infinity_decompose(&all);
        let total: u64 = d.over1.rank() + d.classes.values().map(FormalModule::rank).sum::<u64>();
        assert_eq!(total, all.rank());
    }
}
