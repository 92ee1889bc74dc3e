use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::rational::{parse_rat, Rat};
use crate::formal::FormalModule;
use crate::transforms::ClassLabel;

/// A singular point with its residue-field degree and nearby-cycle module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub label: String,
    pub weight: u64,
    pub psi: FormalModule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalType {
    genus: u64,
    rank: u64,
    points: Vec<SingularPoint>,
}

impl SingularPoint {
    pub fn new(label: impl Into<String>, psi: FormalModule) -> Self {
        Self {
            label: label.into(),
            weight: 1,
            psi,
        }
    }

    pub fn with_weight(self, weight: u64) -> Self {
        Self { weight, ..self }
    }

    /// `inf` (or `infinity`) for the point at infinity, otherwise a rational coordinate.
    pub fn coordinate(&self) -> Result<ClassLabel> {
        parse_label(&self.label)
    }
}

pub fn parse_label(label: &str) -> Result<ClassLabel> {
    match label.trim() {
        "inf" | "infinity" | "∞" => Ok(ClassLabel::Infinity),
        s => parse_rat(s).map(ClassLabel::At).map_err(|_| {
            Error::InvalidInput(format!("point label {label:?} is neither a rational nor inf"))
        }),
    }
}

pub(crate) fn label_of(x: &Rat) -> String {
    crate::exact::rational::fmt_rat(x)
}

impl FormalType {
    pub fn new(genus: u64, rank: u64, points: Vec<SingularPoint>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InconsistentType("rank must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(p.label.clone()) {
                return Err(Error::InconsistentType(format!("point {} listed twice", p.label)));
            }
            if p.weight == 0 {
                return Err(Error::InconsistentType(format!("point {} has degree 0", p.label)));
            }
            if p.psi.rank() != rank {
                return Err(Error::InconsistentType(format!(
                    "point {} has local rank {}, expected {rank}",
                    p.label,
                    p.psi.rank()
                )));
            }
        }
        Ok(Self { genus, rank, points })
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn points(&self) -> &[SingularPoint] {
        &self.points
    }

    pub fn point(&self, label: &str) -> Option<&SingularPoint> {
        self.points.iter().find(|p| p.label == label)
    }

    pub(crate) fn require_line(&self) -> Result<()> {
        if self.genus != 0 {
            return Err(Error::InvalidInput(format!(
                "transforms live on the projective line; genus is {}",
                self.genus
            )));
        }
        Ok(())
    }

    /// Direct sum of two types on the same curve; points are matched by label.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::InconsistentType("genera differ".into()));
        }
        let mut labels: Vec<(String, u64)> = self.points.iter().map(|p| (p.label.clone(), p.weight)).collect();
        for p in &other.points {
            if !labels.iter().any(|(l, _)| *l == p.label) {
                labels.push((p.label.clone(), p.weight));
            }
        }
        let local = |t: &Self, l: &str| {
            t.point(l)
                .map(|p| p.psi.clone())
                .unwrap_or_else(|| FormalModule::trivial(t.rank))
        };
        let points = labels
            .into_iter()
            .map(|(l, w)| SingularPoint {
                psi: local(self, &l).direct_sum(&local(other, &l)),
                label: l,
                weight: w,
            })
            .collect();
        Self::new(self.genus, self.rank + other.rank, points)
    }
}
