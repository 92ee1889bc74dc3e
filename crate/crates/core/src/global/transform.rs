use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rat, int, Rat};
use crate::formal::FormalModule;
use crate::transforms::{
    fourier_bookkeeping, fourier_local_regular, fourier_local_regular_inverse, infinity_decompose,
    radon_local, ClassLabel, Flavor, TransformBookkeeping,
};

use super::formulas::{fourier_rank, radon_rank};
use super::types::{label_of, FormalType, SingularPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Bookkeeping,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointData {
    Exact { phi: FormalModule, psi: FormalModule },
    /// One record per contributing local transform.
    Bookkeeping(Vec<TransformBookkeeping>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedPoint {
    pub label: String,
    pub weight: u64,
    pub data: PointData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedType {
    pub rank_out: u64,
    pub mode: Mode,
    pub points_out: Vec<TransformedPoint>,
    pub notes: Vec<String>,
}

impl TransformedType {
    /// The output as a formal type, in exact mode.
    pub fn formal_type(&self) -> Option<FormalType> {
        if self.mode != Mode::Exact {
            return None;
        }
        let points = self
            .points_out
            .iter()
            .map(|p| match &p.data {
                PointData::Exact { psi, .. } => SingularPoint {
                    label: p.label.clone(),
                    weight: p.weight,
                    psi: psi.clone(),
                },
                PointData::Bookkeeping(_) => unreachable!("exact mode"),
            })
            .collect();
        FormalType::new(0, self.rank_out, points).ok()
    }

    /// Sum of ranks reported at infinity (bookkeeping) or the local rank there (exact).
    pub fn rank_at(&self, label: &str) -> Option<u64> {
        let p = self.points_out.iter().find(|p| p.label == label)?;
        Some(match &p.data {
            PointData::Exact { psi, .. } => psi.rank(),
            PointData::Bookkeeping(v) => v.iter().map(|b| b.rank_out).sum(),
        })
    }
}

fn lift(phi: FormalModule, rank: u64) -> Result<(FormalModule, FormalModule)> {
    let psi = phi
        .phi_to_psi(rank)
        .map_err(|e| Error::InconsistentType(format!("no middle extension of rank {rank}: {e}")))?;
    Ok((phi, psi))
}

const MIDDLE_NOTE: &str = "assumes input and transform are middle extensions without constant or punctual summands";

/// Formal type of the Fourier transform: exact for regular types, invariants only
/// otherwise.
pub fn fourier_formal_type(ft: &FormalType) -> Result<TransformedType> {
    let rank_out = fourier_rank(ft)?;
    if rank_out == 0 {
        return Err(Error::InconsistentType(
            "the transform has rank 0 (the input is constant)".into(),
        ));
    }
    let mut finite: Vec<(Rat, &FormalModule)> = Vec::new();
    let mut psi_inf = FormalModule::trivial(ft.rank());
    for p in ft.points() {
        match p.coordinate()? {
            ClassLabel::At(x) => finite.push((x, &p.psi)),
            ClassLabel::Infinity => psi_inf = p.psi.clone(),
        }
    }
    let regular = finite.iter().all(|(_, m)| m.is_regular()) && psi_inf.is_regular();
    let mut notes = vec![MIDDLE_NOTE.to_string()];
    if regular {
        let mut new_inf = FormalModule::empty();
        for (x, psi) in &finite {
            new_inf = new_inf.direct_sum(&fourier_local_regular(&psi.psi_to_phi(), x)?);
        }
        if new_inf.rank() != rank_out {
            return Err(Error::InconsistentType(format!(
                "local contributions at infinity have rank {}, expected {rank_out}",
                new_inf.rank()
            )));
        }
        let phi0 = fourier_local_regular_inverse(&psi_inf, &int(0))?;
        let mut points_out = Vec::new();
        if !phi0.is_empty() {
            let (phi, psi) = lift(phi0, rank_out)?;
            points_out.push(TransformedPoint {
                label: "0".into(),
                weight: 1,
                data: PointData::Exact { phi, psi },
            });
        }
        if new_inf.components().iter().any(|c| c.ram() > 1 || c.unip() > 1) {
            notes.push("unipotent blocks of size > 1 follow the derived Kummer rule".into());
        }
        points_out.push(TransformedPoint {
            label: "inf".into(),
            weight: 1,
            data: PointData::Exact {
                phi: new_inf.psi_to_phi(),
                psi: new_inf,
            },
        });
        return Ok(TransformedType {
            rank_out,
            mode: Mode::Exact,
            points_out,
            notes,
        });
    }
    notes.push("irregular input: only ranks, irregularities and slopes are computed".into());
    let mut at_inf = Vec::new();
    for (x, psi) in &finite {
        at_inf.push(fourier_bookkeeping(&psi.psi_to_phi(), &Flavor::ToInfinity(x.clone()))?);
    }
    let dec = infinity_decompose(&psi_inf);
    if !dec.over1.is_empty() {
        at_inf.push(fourier_bookkeeping(&dec.over1, &Flavor::InfinityInfinity)?);
    }
    let mut points_out = Vec::new();
    for (x, m) in &dec.classes {
        let b = fourier_bookkeeping(m, &Flavor::FromInfinity(x.clone()))?;
        if b.rank_out > 0 {
            points_out.push(TransformedPoint {
                label: label_of(x),
                weight: 1,
                data: PointData::Bookkeeping(vec![b]),
            });
        }
    }
    points_out.push(TransformedPoint {
        label: "inf".into(),
        weight: 1,
        data: PointData::Bookkeeping(at_inf),
    });
    Ok(TransformedType {
        rank_out,
        mode: Mode::Bookkeeping,
        points_out,
        notes,
    })
}

/// Katz-Radon transform of a formal type on the projective line: `radon_local` on the
/// vanishing cycles at every point.
pub fn radon_formal_type(ft: &FormalType, lambda: &Rat) -> Result<TransformedType> {
    ft.require_line()?;
    if crate::exact::rational::is_integral(lambda) {
        return Err(Error::IntegralLambda(fmt_rat(lambda)));
    }
    let rank_out = radon_rank(ft)?;
    if rank_out == 0 {
        return Err(Error::InconsistentType("the transform has rank 0".into()));
    }
    let mut points_out = Vec::new();
    for p in ft.points() {
        let phi = radon_local(&p.psi.psi_to_phi(), lambda)?;
        let (phi, psi) = lift(phi, rank_out)?;
        points_out.push(TransformedPoint {
            label: p.label.clone(),
            weight: p.weight,
            data: PointData::Exact { phi, psi },
        });
    }
    Ok(TransformedType {
        rank_out,
        mode: Mode::Exact,
        points_out,
        notes: vec![MIDDLE_NOTE.to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::formal::ElementaryModule;
    use crate::global::rigidity_index;

    fn k(a: Rat) -> FormalModule {
        FormalModule::new(vec![ElementaryModule::kummer(a, 1)])
    }

    fn kk(a: Rat, b: Rat) -> FormalModule {
        FormalModule::new(vec![ElementaryModule::kummer(a, 1), ElementaryModule::kummer(b, 1)])
    }

    fn kummer_type(a: Rat) -> FormalType {
        FormalType::new(
            0,
            1,
            vec![SingularPoint::new("0", k(a.clone())), SingularPoint::new("inf", k(-a))],
        )
        .unwrap()
    }

    fn hypergeometric() -> FormalType {
        FormalType::new(
            0,
            2,
            vec![
                SingularPoint::new("0", kk(int(0), rat(1, 3))),
                SingularPoint::new("1", kk(int(0), rat(1, 5))),
                SingularPoint::new("inf", kk(rat(1, 7), rat(2, 7))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fourier_of_kummer_negates() {
        let out = fourier_formal_type(&kummer_type(rat(1, 3))).unwrap();
        assert_eq!(out.mode, Mode::Exact);
        let ft = out.formal_type().unwrap();
        assert_eq!(ft, kummer_type(rat(-1, 3)));
    }

    #[test]
    fn two_finite_points() {
        let ft = FormalType::new(
            0,
            1,
            vec![
                SingularPoint::new("0", k(rat(1, 3))),
                SingularPoint::new("1", k(rat(1, 5))),
                SingularPoint::new("inf", k(rat(-8, 15))),
            ],
        )
        .unwrap();
        let out = fourier_formal_type(&ft).unwrap();
        assert_eq!(out.rank_out, 2);
        let labels: Vec<&str> = out.points_out.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, vec!["0", "inf"]);
        let t = out.formal_type().unwrap();
        let classes = infinity_decompose(&t.point("inf").unwrap().psi).classes;
        assert_eq!(classes.keys().cloned().collect::<Vec<_>>(), vec![int(0), int(1)]);
        assert_eq!(rigidity_index(&t).unwrap(), rigidity_index(&ft).unwrap());
    }

    #[test]
    fn irregular_input_is_bookkept() {
        let e = FormalModule::new(vec![ElementaryModule::exponential(int(-1), int(-2), int(0)).unwrap()]);
        let ft = FormalType::new(0, 1, vec![SingularPoint::new("0", e)]).unwrap();
        let out = fourier_formal_type(&ft).unwrap();
        assert_eq!(out.mode, Mode::Bookkeeping);
        assert_eq!(out.rank_out, 2);
        assert_eq!(out.rank_at("inf"), Some(2));
    }

    #[test]
    fn radon_kummer_and_inverse() {
        let ft = kummer_type(rat(1, 5));
        let out = radon_formal_type(&ft, &rat(1, 3)).unwrap();
        assert_eq!(out.rank_out, 1);
        match &out.points_out[0].data {
            PointData::Exact { phi, .. } => assert_eq!(phi, &k(rat(8, 15))),
            _ => unreachable!(),
        }
        let back = radon_formal_type(&out.formal_type().unwrap(), &rat(-1, 3)).unwrap();
        assert_eq!(back.formal_type().unwrap(), ft);
    }

    #[test]
    fn radon_preserves_rigidity() {
        let ft = hypergeometric();
        for lambda in [rat(1, 2), rat(1, 3)] {
            let out = radon_formal_type(&ft, &lambda).unwrap().formal_type().unwrap();
            assert_eq!(out.rank(), 2);
            assert_eq!(rigidity_index(&out).unwrap(), 2);
        }
        let out = fourier_formal_type(&ft).unwrap().formal_type().unwrap();
        assert_eq!(rigidity_index(&out).unwrap(), 2);
    }
}
