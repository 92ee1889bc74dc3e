use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rational::{int, to_i64, Rat};
use crate::formal::FormalModule;
use crate::transforms::{infinity_decompose, ClassLabel};

use super::types::FormalType;

/// `rk Phi + irr Psi` for the middle extension at one point.
fn local_drop(psi: &FormalModule) -> Result<Rat> {
    Ok(int(psi.phi_mid_rank() as i64) + psi.irregularity()?)
}

fn weighted_drops(ft: &FormalType, pick: impl Fn(&FormalModule) -> Result<FormalModule>) -> Result<Rat> {
    let mut total = Rat::zero();
    for p in ft.points() {
        total += int(p.weight as i64) * local_drop(&pick(&p.psi)?)?;
    }
    Ok(total)
}

fn as_int(q: Rat) -> i64 {
    to_i64(&q).expect("integral value in range")
}

/// `n (2 - 2g) - sum_x w_x (rk Phi_x + irr Psi_x)`.
pub fn euler_char(ft: &FormalType) -> Result<i64> {
    let n = ft.rank() as i64;
    let drops = weighted_drops(ft, |m| Ok(m.clone()))?;
    Ok(n * (2 - 2 * ft.genus() as i64) - as_int(drops))
}

/// Euler characteristic of the middle extension of `END`.
pub fn rigidity_index(ft: &FormalType) -> Result<i64> {
    let n = ft.rank() as i64;
    let drops = weighted_drops(ft, FormalModule::end_of)?;
    Ok(n * n * (2 - 2 * ft.genus() as i64) - as_int(drops))
}

/// `irr(Psi_inf^{>1}) - rk(Psi_inf^{>1}) + sum_{x finite} (rk Phi_x + irr Psi_x)`.
pub fn fourier_rank(ft: &FormalType) -> Result<u64> {
    ft.require_line()?;
    let mut total = Rat::zero();
    let mut psi_inf = None;
    for p in ft.points() {
        match p.coordinate()? {
            ClassLabel::Infinity => psi_inf = Some(&p.psi),
            ClassLabel::At(_) => {
                if p.weight != 1 {
                    return Err(Error::InvalidInput(format!(
                        "rational point {} must have degree 1",
                        p.label
                    )));
                }
                total += local_drop(&p.psi)?;
            }
        }
    }
    if let Some(psi) = psi_inf {
        let over1 = infinity_decompose(psi).over1;
        total += over1.irregularity()? - int(over1.rank() as i64);
    }
    if total < Rat::zero() {
        return Err(Error::InconsistentType(format!("Fourier rank would be {total}")));
    }
    Ok(as_int(total) as u64)
}

/// `sum_x w_x (rk Phi_x + irr Psi_x) - n` on the projective line.
pub fn radon_rank(ft: &FormalType) -> Result<u64> {
    ft.require_line()?;
    let drops = weighted_drops(ft, |m| Ok(m.clone()))?;
    if ft.points().is_empty() || drops.is_zero() {
        return Err(Error::NoSingularities);
    }
    let r = as_int(drops) - ft.rank() as i64;
    if r < 0 {
        return Err(Error::InconsistentType(format!("Katz-Radon rank would be {r}")));
    }
    Ok(r as u64)
}
