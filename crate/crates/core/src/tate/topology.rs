//! Comparison of the z-adic and zeta-adic filtrations on a realization, on a finite
//! window: for a given `n`, how deep in one filtration one has to go to land in the
//! `n`-th step of the other.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::rational::{int, Rat};

use super::realization::{Element, Realization};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyModuli {
    /// Least `m` with `ord_z(zeta^q e_b) >= n` for every `q >= m` and every generator.
    pub zeta_to_z: u64,
    /// Least `k` with `ord_zeta(z^k') >= n` for every `k' >= k`.
    pub z_to_zeta: u64,
}

/// Generators `e_b = z^{b/r}`, `b < r(s+1)`: one zeta-period of the lattice.
fn period_basis(real: &Realization) -> Vec<(Rat, Element)> {
    let r = real.ram() as i64;
    (0..real.period() as i64)
        .map(|b| {
            let e = Rat::new(b.into(), r.into());
            (
                e.clone(),
                Element::from_series(crate::exact::series::TruncatedPuiseuxSeries::monomial(int(1), e)),
            )
        })
        .collect()
}

fn order_or_err(v: &Element) -> Result<Rat> {
    v.order().ok_or_else(|| {
        Error::InsufficientPrecision("window exhausted before the order was reached".into())
    })
}

pub fn topology_compare(real: &Realization, n: u64) -> Result<TopologyModuli> {
    if n == 0 {
        return Ok(TopologyModuli {
            zeta_to_z: 0,
            z_to_zeta: 0,
        });
    }
    let target = int(n as i64);
    if *real.trunc() <= target {
        return Err(Error::InsufficientPrecision(format!(
            "window {} does not reach z-order {n}",
            real.trunc()
        )));
    }
    let basis = period_basis(real);
    // leading exponent of zeta^q e_b, until every generator has passed z-order n
    let mut lead: BTreeMap<Rat, u64> = BTreeMap::new();
    let mut current: Vec<Element> = basis.iter().map(|(_, e)| e.clone()).collect();
    let mut q = 0u64;
    let mut zeta_to_z = None;
    loop {
        let mut all_past = true;
        for v in &current {
            let o = order_or_err(v)?;
            if o < target {
                all_past = false;
            }
            lead.insert(o, q);
        }
        if all_past && zeta_to_z.is_none() {
            zeta_to_z = Some(q);
        }
        // enough leading exponents recorded to cover z^k for k up to the n-th zeta step
        let covered = lead.values().max().copied().unwrap_or(0) >= n;
        if zeta_to_z.is_some() && covered {
            break;
        }
        current = current.iter().map(|v| real.zeta(v)).collect::<Result<_>>()?;
        q += 1;
    }
    // zeta-order of z^k is the q whose period block contains its leading exponent
    let mut k = 0i64;
    let z_to_zeta = loop {
        let e = int(k);
        let qk = lead
            .range(..=e.clone())
            .next_back()
            .map(|(_, q)| *q)
            .ok_or_else(|| Error::InsufficientPrecision("exponent below the lattice".into()))?;
        if qk >= n {
            break k as u64;
        }
        k += 1;
        if e > *real.trunc() {
            return Err(Error::InsufficientPrecision("window exhausted".into()));
        }
    };
    Ok(TopologyModuli {
        zeta_to_z: zeta_to_z.unwrap(),
        z_to_zeta,
    })
}
