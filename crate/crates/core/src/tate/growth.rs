//! Contraction and expansion of simple operators on a realization, read off from the
//! orders of iterates on the lattice generators.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rational::{int, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;

use super::realization::{Element, Realization};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthOperator {
    /// `z^a d`
    ZPowD(Rat),
    /// `sum c_k d^k`
    PolyD(Vec<Rat>),
    /// `sum c_k z^k`
    PolyZ(Vec<Rat>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Contracting,
    Expanding,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthVerdict {
    pub verdict: Verdict,
    /// Minimal order over the generators after each iteration: forward, then inverse.
    pub forward: Vec<Rat>,
    pub inverse: Vec<Rat>,
}

fn poly_z(c: &[Rat]) -> TruncatedPuiseuxSeries {
    TruncatedPuiseuxSeries::from_terms(
        c.iter().enumerate().map(|(k, v)| (int(k as i64), v.clone())),
        None,
    )
}

impl GrowthOperator {
    fn validate(&self) -> Result<()> {
        let nonzero = |c: &[Rat]| c.iter().any(|x| !x.is_zero());
        match self {
            GrowthOperator::PolyD(c) | GrowthOperator::PolyZ(c) if !nonzero(c) => {
                Err(Error::InvalidInput("operator polynomial is zero".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn apply(&self, real: &Realization, v: &Element) -> Element {
        match self {
            GrowthOperator::ZPowD(a) => {
                let dv = real.d(v);
                Element {
                    series: dv.series.shift(a),
                    delta: dv.delta,
                }
            }
            GrowthOperator::PolyD(c) => {
                let mut acc: Option<Element> = None;
                let mut x = v.clone();
                for (k, ck) in c.iter().enumerate() {
                    if k > 0 {
                        x = real.d(&x);
                    }
                    if ck.is_zero() {
                        continue;
                    }
                    let t = x.scale(ck);
                    acc = Some(acc.map_or(t.clone(), |a| a.add(&t)));
                }
                acc.expect("nonzero polynomial")
            }
            GrowthOperator::PolyZ(c) => Element::from_series(v.series.mul(&poly_z(c))),
        }
    }

    pub fn apply_inverse(&self, real: &Realization, v: &Element) -> Result<Element> {
        match self {
            GrowthOperator::ZPowD(a) => {
                let w = Element::from_series(v.series.shift(&-a.clone()));
                real.d_inv(&w)
            }
            GrowthOperator::PolyD(c) => {
                // highest term dominates: u = (c_m d^m)^{-1}(v - sum_{k<m} c_k d^k u)
                let m = c.iter().rposition(|x| !x.is_zero()).unwrap();
                let lead = c[m].clone();
                let lower = GrowthOperator::PolyD(c[..m].to_vec());
                let has_lower = c[..m].iter().any(|x| !x.is_zero());
                let solve_lead = |w: &Element| -> Result<Element> {
                    let mut x = w.scale(&lead.recip());
                    for _ in 0..m {
                        x = real.d_inv(&x)?;
                    }
                    Ok(x)
                };
                if !has_lower {
                    return solve_lead(v);
                }
                // exact input would never stop growing; work inside the window
                let v = &Element {
                    series: v.series.truncate(real.trunc()),
                    delta: v.delta.clone(),
                };
                let mut u = solve_lead(v)?;
                let rounds = 2 * crate::exact::rational::to_i64(&real.trunc().ceil()).unwrap_or(40).max(4) as usize;
                for _ in 0..rounds {
                    let next = solve_lead(&v.add(&lower.apply(real, &u).neg()))?;
                    if next == u {
                        break;
                    }
                    u = next;
                }
                Ok(u)
            }
            GrowthOperator::PolyZ(c) => {
                let p = poly_z(c);
                let (e, _) = p.leading_term().expect("nonzero polynomial");
                let inv = p.inv_to(&(real.trunc() - e))?;
                Ok(Element::from_series(v.series.mul(&inv)))
            }
        }
    }
}

fn min_order(vs: &[Element]) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    for v in vs {
        let o = v.order()?;
        best = Some(match best {
            Some(b) if b <= o => b,
            _ => o,
        });
    }
    best
}

fn strictly_increasing_per_generator(traces: &[Vec<Option<Rat>>]) -> bool {
    traces.iter().all(|t| {
        t.windows(2).all(|w| match (&w[0], &w[1]) {
            (Some(a), Some(b)) => b > a,
            _ => false,
        })
    })
}

/// Applies the operator and its inverse `iters` times to each lattice generator.
/// Contracting when every generator's order strictly increases under the operator;
/// Expanding when it strictly increases under the inverse.
pub fn classify_growth(op: &GrowthOperator, real: &Realization, iters: usize) -> Result<GrowthVerdict> {
    op.validate()?;
    let gens = real.generators();
    let mut fwd_traces = Vec::new();
    let mut inv_traces = Vec::new();
    let mut fwd_min = vec![min_order(&gens).unwrap(); 1];
    let mut inv_min = fwd_min.clone();
    let mut fwd_all: Vec<Vec<Element>> = vec![gens.clone()];
    let mut inv_all: Vec<Vec<Element>> = vec![gens.clone()];
    for _ in 0..iters {
        let f: Vec<Element> = fwd_all.last().unwrap().iter().map(|g| op.apply(real, g)).collect();
        // an inverse that fails (a resonance) just means no expansion witness
        let i: Option<Vec<Element>> = inv_all
            .last()
            .unwrap()
            .iter()
            .map(|g| op.apply_inverse(real, g).ok())
            .collect();
        fwd_min.push(min_order(&f).unwrap_or_else(|| int(i64::MAX / 4)));
        fwd_all.push(f);
        match i {
            Some(i) => {
                if let Some(o) = min_order(&i) {
                    inv_min.push(o);
                }
                inv_all.push(i);
            }
            None => break,
        }
    }
    for g in 0..gens.len() {
        fwd_traces.push(fwd_all.iter().map(|vs| vs[g].order()).collect::<Vec<_>>());
        inv_traces.push(inv_all.iter().map(|vs| vs[g].order()).collect::<Vec<_>>());
    }
    let inverse_complete = inv_all.len() == iters + 1;
    let verdict = if strictly_increasing_per_generator(&fwd_traces) {
        Verdict::Contracting
    } else if inverse_complete && strictly_increasing_per_generator(&inv_traces) {
        Verdict::Expanding
    } else {
        Verdict::Inconclusive
    };
    Ok(GrowthVerdict {
        verdict,
        forward: fwd_min,
        inverse: inv_min,
    })
}
