//! Annihilating operators of a generator of the Fourier transform, found as linear
//! relations among the vectors `zeta^i theta^j (g)`, `theta = zeta d_zeta`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::stirling2_table;
use crate::exact::rational::{fmt_rat, int, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;
use crate::formal::DifferentialOperator;
use crate::linalg::Matrix;

use super::realization::{Element, Realization};

/// Extra window used to confirm a relation found at the working window.
pub const VERIFY_MARGIN: i64 = 10;
const SPARE_EQUATIONS: usize = 4;

/// `sum_j p_j(zeta) theta^j`, with `p_j` given by dense coefficient lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOperator {
    pub coeffs: Vec<Vec<Rat>>,
}

impl ThetaOperator {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Substitutes `theta -> theta - lambda` (tensoring the module by `K^lambda`).
    pub fn twist(&self, lambda: &Rat) -> Self {
        let n = self.order();
        let deg = self.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![vec![Rat::zero(); deg]; n + 1];
        for (j, pj) in self.coeffs.iter().enumerate() {
            // (theta - lambda)^j = sum_k C(j,k) (-lambda)^{j-k} theta^k
            let mut binom = Rat::one();
            for k in (0..=j).rev() {
                let w = &binom * pow(&-lambda.clone(), (j - k) as u32);
                for (i, c) in pj.iter().enumerate() {
                    out[k][i] += c * &w;
                }
                if k > 0 {
                    binom = binom * int(k as i64) / int((j - k + 1) as i64);
                }
            }
        }
        Self { coeffs: out }
    }

    /// Rewrites in `zeta, d_zeta` through `theta^j = sum_k S(j,k) zeta^k d_zeta^k`, then
    /// divides by the lowest coefficient of the leading term.
    pub fn to_operator(&self) -> DifferentialOperator {
        let n = self.order();
        let s = stirling2_table(n);
        let mut a: Vec<BTreeMap<i64, Rat>> = vec![BTreeMap::new(); n + 1];
        for (j, pj) in self.coeffs.iter().enumerate() {
            for k in 0..=j {
                if s[j][k].is_zero() {
                    continue;
                }
                for (i, c) in pj.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    *a[k].entry((i + k) as i64).or_insert_with(Rat::zero) += c * &s[j][k];
                }
            }
        }
        let lead = a[n]
            .iter()
            .find(|(_, c)| !c.is_zero())
            .map(|(_, c)| c.clone())
            .expect("leading coefficient is nonzero");
        let coeffs = a
            .into_iter()
            .map(|m| {
                TruncatedPuiseuxSeries::from_terms(m.into_iter().map(|(e, c)| (int(e), c / &lead)), None)
            })
            .collect();
        DifferentialOperator::new(coeffs).expect("leading coefficient is nonzero")
    }
}

fn pow(x: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annihilator {
    pub theta_form: ThetaOperator,
    pub operator: DifferentialOperator,
    /// Window at which the relation was found (it was confirmed at a wider one).
    pub precision: Rat,
}

/// Coordinates of an element as `(exponent or delta index) -> coefficient`, keeping
/// only exponents below `bound`.
fn coordinates(v: &Element, bound: &Rat) -> BTreeMap<(u8, Rat), Rat> {
    let mut m = BTreeMap::new();
    for (e, c) in v.series.terms() {
        if e < *bound {
            m.insert((1, e), c.clone());
        }
    }
    for (k, d) in v.delta.iter().enumerate() {
        if !d.is_zero() {
            m.insert((0, int(k as i64)), d.clone());
        }
    }
    m
}

/// `vectors[j][i] = zeta^i theta^j (g)` for `j <= n`, `i <= dmax`.
fn relation_vectors(real: &Realization, g: &Element, n: usize, dmax: usize) -> Result<Vec<Vec<Element>>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut t = g.clone();
    for j in 0..=n {
        if j > 0 {
            t = real.theta(&t);
        }
        let mut row = Vec::with_capacity(dmax + 1);
        let mut x = t.clone();
        row.push(x.clone());
        for _ in 0..dmax {
            x = real.zeta(&x)?;
            row.push(x.clone());
        }
        out.push(row);
    }
    Ok(out)
}

fn common_bound(vs: &[&Element]) -> Option<Rat> {
    vs.iter().filter_map(|v| v.trunc()).min()
}

/// Kernel of the relation system for the unknowns `(i, j)`, `i <= d`, `j <= n`.
fn relation_kernel(vectors: &[Vec<Element>], n: usize, d: usize) -> Result<Vec<Vec<Rat>>> {
    let unknowns: Vec<(usize, usize)> = (0..=n).flat_map(|j| (0..=d).map(move |i| (i, j))).collect();
    let vs: Vec<&Element> = unknowns.iter().map(|&(i, j)| &vectors[j][i]).collect();
    let bound = common_bound(&vs).unwrap_or_else(|| int(i64::MAX / 4));
    let cols: Vec<BTreeMap<(u8, Rat), Rat>> = vs.iter().map(|v| coordinates(v, &bound)).collect();
    let mut keys: Vec<(u8, Rat)> = cols.iter().flat_map(|c| c.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    // every exponent below the bound on the lattice counts as an equation
    let equations = count_equations(&vs, &bound).max(keys.len());
    if equations < unknowns.len() + SPARE_EQUATIONS {
        return Err(Error::InsufficientPrecision(format!(
            "{} equations for {} unknowns at window {}",
            equations,
            unknowns.len(),
            fmt_rat(&bound)
        )));
    }
    let index: BTreeMap<&(u8, Rat), usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = Matrix::zeros(keys.len(), unknowns.len());
    for (u, col) in cols.iter().enumerate() {
        for (k, c) in col {
            m[(index[k], u)] = c.clone();
        }
    }
    Ok(m.kernel())
}

/// Number of lattice exponents between the lowest known term and `bound`.
fn count_equations(vs: &[&Element], bound: &Rat) -> usize {
    let low = vs.iter().filter_map(|v| v.series.order()).min();
    let step = vs
        .iter()
        .map(|v| v.series.ram())
        .fold(1u64, num_integer::lcm);
    let deltas = vs.iter().map(|v| v.delta.len()).max().unwrap_or(0);
    match low {
        Some(low) if low < *bound => {
            let span = (bound - low) * int(step as i64);
            let n = crate::exact::rational::to_i64(&span.ceil()).unwrap_or(0);
            n.max(0) as usize + deltas
        }
        _ => deltas,
    }
}

fn residual_vanishes(vectors: &[Vec<Element>], n: usize, d: usize, c: &[Rat]) -> bool {
    let mut acc: Option<Element> = None;
    let mut u = 0;
    for j in 0..=n {
        for i in 0..=d {
            let term = vectors[j][i].scale(&c[u]);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
            u += 1;
        }
    }
    acc.is_none_or(|a| a.is_zero_to_precision())
}

/// Minimal-order relation `sum c_ij zeta^i theta^j (g) = 0`, minimal in the order
/// first and in the zeta-degree second; confirmed at a window wider by
/// [`VERIFY_MARGIN`].
pub fn annihilator(real: &Realization, g: &Element, max_order: usize, max_degree: usize) -> Result<Annihilator> {
    let wide = real.with_trunc(&(real.trunc() + int(VERIFY_MARGIN)));
    let mut shortfall: Option<Error> = None;
    for n in 1..=max_order {
        let vectors = relation_vectors(real, g, n, max_degree)?;
        for d in 0..=max_degree {
            // a vector with nothing known below the window carries no equations
            if (0..=n).any(|j| vectors[j][d].is_zero_to_precision() && !vectors[j][d].series.is_zero()) {
                break;
            }
            let kernel = match relation_kernel(&vectors, n, d) {
                Ok(k) => k,
                Err(e @ Error::InsufficientPrecision(_)) => {
                    shortfall = Some(e);
                    break;
                }
                Err(e) => return Err(e),
            };
            if kernel.is_empty() {
                continue;
            }
            if kernel.len() > 1 {
                return Err(Error::InsufficientPrecision(format!(
                    "relation space of dimension {} at order {n}, degree {d}",
                    kernel.len()
                )));
            }
            let c = &kernel[0];
            let top = &c[n * (d + 1)..];
            if top.iter().all(Zero::is_zero) {
                return Err(Error::InsufficientPrecision(format!(
                    "spurious relation of order below {n}"
                )));
            }
            let check = relation_vectors(&wide, g, n, d)?;
            if !residual_vanishes(&check, n, d, c) {
                return Err(Error::InsufficientPrecision(format!(
                    "relation at order {n}, degree {d} fails at window {}",
                    fmt_rat(wide.trunc())
                )));
            }
            let coeffs: Vec<Vec<Rat>> = (0..=n).map(|j| c[j * (d + 1)..(j + 1) * (d + 1)].to_vec()).collect();
            let theta_form = ThetaOperator { coeffs };
            let operator = theta_form.to_operator();
            return Ok(Annihilator {
                theta_form,
                operator,
                precision: real.trunc().clone(),
            });
        }
    }
    Err(shortfall.unwrap_or(Error::NoRelationFound(max_order)))
}

/// Default zeta-degree search bound for a realization of period `p`.
pub fn default_degree(period: u64) -> usize {
    2 * period as usize + 2
}
