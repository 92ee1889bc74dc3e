//! Oracle readout of `Four(0, inf)` for rank-one data: rank, slopes and (when regular)
//! the residue of the transform, from the annihilator of the generator `1`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rational::{int, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;
use crate::formal::{newton_slopes, ElementaryModule};

use super::annihilator::{annihilator, default_degree, Annihilator};
use super::realization::{Element, Realization};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierInvariants {
    pub rank_out: u64,
    pub slopes_out: Vec<(Rat, u64)>,
    pub irregularity_out: Rat,
    /// Residue at infinity, reported when the transform is regular of rank one.
    pub residue_out: Option<Rat>,
    pub annihilator: Annihilator,
    pub precision: Rat,
}

/// Runs the oracle on `d/dz + f + residue/z`.
pub fn local_fourier_invariants(f: &TruncatedPuiseuxSeries, residue: &Rat, trunc: &Rat) -> Result<FourierInvariants> {
    let e = ElementaryModule::new(f.ram(), f.clone(), residue.clone(), 1)?;
    let real = Realization::for_module(&e, trunc)?;
    invariants_of(&real)
}

pub fn invariants_of(real: &Realization) -> Result<FourierInvariants> {
    let p = real.period();
    let ann = annihilator(real, &Element::one(), p as usize + 1, default_degree(p))?;
    let op = &ann.operator;
    if op.order() as u64 != p {
        return Err(Error::InconsistentRank(format!(
            "annihilator order {} differs from lattice period {p}",
            op.order()
        )));
    }
    let (slopes_out, irregularity_out) = newton_slopes(op)?;
    let residue_out = if p == 1 && slopes_out == vec![(int(0), 1)] {
        let a1 = op.coeff(1);
        let a0 = op.coeff(0);
        let (e, _) = a1.leading_term().expect("leading coefficient");
        let q = a0.mul(&a1.inv_to(&(int(1) - e))?).neg();
        Some(q.coeff(&int(-1))?)
    } else {
        None
    };
    Ok(FourierInvariants {
        rank_out: p,
        slopes_out,
        irregularity_out,
        residue_out,
        precision: ann.precision.clone(),
        annihilator: ann,
    })
}

/// `s / (1 + s)`, the slope law observed for `Four(0, inf)`.
pub fn fourier_slope(s: &Rat) -> Rat {
    if s.is_zero() {
        return int(0);
    }
    s / (s + int(1))
}
