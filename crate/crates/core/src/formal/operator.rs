//! Differential operators `sum a_j d^j` with series coefficients, and their Newton
//! polygons.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::UniPoly;
use crate::exact::rational::{fmt_rat, int, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialOperator {
    coeffs: Vec<TruncatedPuiseuxSeries>,
}

/// One edge of the lower hull, from `(j0, y0)` to `(j1, y1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonEdge {
    pub start: (usize, Rat),
    pub end: (usize, Rat),
    pub slope: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// `(slope, multiplicity)`; slope `0` first when present.
    pub slopes: Vec<(Rat, u64)>,
    pub irregularity: Rat,
    pub edges: Vec<NewtonEdge>,
}

impl DifferentialOperator {
    pub fn new(coeffs: Vec<TruncatedPuiseuxSeries>) -> Result<Self> {
        match coeffs.last() {
            Some(a) if !a.has_no_terms() => Ok(Self { coeffs }),
            _ => Err(Error::InvalidInput(
                "leading coefficient of an operator must be nonzero".into(),
            )),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[TruncatedPuiseuxSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &TruncatedPuiseuxSeries {
        &self.coeffs[j]
    }

    /// `-a_{n-1} / a_n`, known to `upto`.
    pub fn trace_form(&self, upto: &Rat) -> Result<TruncatedPuiseuxSeries> {
        let n = self.order();
        if n == 0 {
            return Ok(TruncatedPuiseuxSeries::zero());
        }
        let lead = &self.coeffs[n];
        lead.leading_term().ok_or(Error::NotAUnit)?;
        let low = self.coeffs[n - 1].order().unwrap_or_else(|| upto.clone());
        let inv = lead.inv_to(&(upto - low))?;
        Ok(self.coeffs[n - 1].mul(&inv).neg().truncate(upto))
    }

    /// Newton polygon with points `(j, ord a_j - j)`.
    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        let n = self.order();
        let mut points: Vec<Option<Rat>> = Vec::with_capacity(n + 1);
        let mut bounds: Vec<Option<Rat>> = Vec::with_capacity(n + 1);
        for (j, a) in self.coeffs.iter().enumerate() {
            let shift = int(j as i64);
            points.push(a.order().map(|o| o - &shift));
            bounds.push(if a.has_no_terms() {
                a.trunc().map(|t| t - &shift)
            } else {
                None
            });
        }
        let known: Vec<(usize, Rat)> = points
            .iter()
            .enumerate()
            .filter_map(|(j, p)| p.clone().map(|y| (j, y)))
            .collect();
        let ymin = known.iter().map(|(_, y)| y.clone()).min().expect("leading point exists");
        let j0 = known
            .iter()
            .filter(|(_, y)| *y == ymin)
            .map(|(j, _)| *j)
            .max()
            .unwrap();
        let mut edges = Vec::new();
        let mut slopes: Vec<(Rat, u64)> = Vec::new();
        if j0 > 0 {
            slopes.push((int(0), j0 as u64));
            let first = known.iter().find(|(_, y)| *y == ymin).unwrap().0;
            if first < j0 {
                edges.push(NewtonEdge {
                    start: (first, ymin.clone()),
                    end: (j0, ymin.clone()),
                    slope: int(0),
                });
            }
        }
        let mut cur = (j0, ymin.clone());
        while cur.0 < n {
            // steepest-descending choice: minimal slope, farthest point on ties
            let mut best: Option<(usize, Rat, Rat)> = None;
            for (j, y) in known.iter().filter(|(j, _)| *j > cur.0) {
                let s = (y - &cur.1) / int((*j - cur.0) as i64);
                let better = match &best {
                    None => true,
                    Some((bj, _, bs)) => s < *bs || (s == *bs && *j > *bj),
                };
                if better {
                    best = Some((*j, y.clone(), s));
                }
            }
            let (j, y, s) = best.expect("leading point is to the right");
            let mult = (j - cur.0) as u64;
            match slopes.last_mut() {
                Some((ls, m)) if *ls == s => *m += mult,
                _ => slopes.push((s.clone(), mult)),
            }
            edges.push(NewtonEdge {
                start: cur.clone(),
                end: (j, y.clone()),
                slope: s,
            });
            cur = (j, y);
        }
        // an undetermined coefficient must lie on or above the hull
        for (j, b) in bounds.iter().enumerate() {
            if let Some(b) = b {
                let h = hull_value(&edges, j, &ymin);
                if *b < h {
                    return Err(Error::InsufficientPrecision(format!(
                        "order of coefficient a_{j} is undetermined below the Newton polygon"
                    )));
                }
            }
        }
        let irregularity = slopes
            .iter()
            .fold(Rat::zero(), |acc, (s, m)| acc + s * int(*m as i64));
        Ok(NewtonPolygon {
            slopes,
            irregularity,
            edges,
        })
    }

    /// Edge polynomial of a hull edge: `sum c_j X^{(j - j0)/q}` over the points on the
    /// edge, `c_j` the leading coefficient of `a_j`, `q` the slope denominator;
    /// normalized monic.
    pub fn edge_polynomial(&self, edge: &NewtonEdge) -> UniPoly {
        let q = edge.slope.denom().clone();
        let q = num_traits::ToPrimitive::to_usize(&q).expect("small denominator");
        let (j0, y0) = &edge.start;
        let mut coeffs = Vec::new();
        for j in *j0..=edge.end.0 {
            if (j - j0) % q != 0 {
                continue;
            }
            let a = &self.coeffs[j];
            let on_edge = a
                .order()
                .map(|o| o - int(j as i64) == y0 + &edge.slope * int((j - j0) as i64))
                .unwrap_or(false);
            let c = if on_edge {
                a.leading_term().unwrap().1
            } else {
                Rat::zero()
            };
            coeffs.push(c);
        }
        UniPoly::new(coeffs).monic()
    }
}

fn hull_value(edges: &[NewtonEdge], j: usize, ymin: &Rat) -> Rat {
    for e in edges {
        if e.start.0 <= j && j <= e.end.0 {
            return &e.start.1 + &e.slope * int((j - e.start.0) as i64);
        }
    }
    ymin.clone()
}

/// Slope multiset and irregularity of an operator.
pub fn newton_slopes(op: &DifferentialOperator) -> Result<(Vec<(Rat, u64)>, Rat)> {
    let p = op.newton_polygon()?;
    Ok((p.slopes, p.irregularity))
}

impl fmt::Display for DifferentialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let d = match j {
                0 => String::new(),
                1 => "*D".to_string(),
                _ => format!("*D^{j}"),
            };
            if a.num_terms() == 1 && a.is_exact() {
                let (e, c) = a.leading_term().unwrap();
                let z = if e.is_zero() {
                    String::new()
                } else if e.is_one() {
                    "*x".to_string()
                } else {
                    format!("*x^({})", fmt_rat(&e))
                };
                parts.push(format!("({}){z}{d}", fmt_rat(&c)));
            } else {
                parts.push(format!("({a}){d}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn mono(c: Rat, e: i64) -> TruncatedPuiseuxSeries {
        TruncatedPuiseuxSeries::monomial(c, int(e))
    }

    #[test]
    fn regular_operator() {
        let op = DifferentialOperator::new(vec![mono(rat(-1, 3), 0), mono(int(1), 1)]).unwrap();
        let (s, irr) = newton_slopes(&op).unwrap();
        assert_eq!(s, vec![(int(0), 1)]);
        assert_eq!(irr, int(0));
    }

    #[test]
    fn slope_one() {
        let op = DifferentialOperator::new(vec![mono(int(-5), -2), mono(int(1), 0)]).unwrap();
        let (s, irr) = newton_slopes(&op).unwrap();
        assert_eq!(s, vec![(int(1), 1)]);
        assert_eq!(irr, int(1));
    }

    #[test]
    fn slope_one_half_twice() {
        let op = DifferentialOperator::new(vec![
            mono(int(-1), -3),
            TruncatedPuiseuxSeries::zero(),
            mono(int(1), 0),
        ])
        .unwrap();
        let p = op.newton_polygon().unwrap();
        assert_eq!(p.slopes, vec![(rat(1, 2), 2)]);
        assert_eq!(p.irregularity, int(1));
        // X^2 - 1 after normalization: points (0,-3) and (2,-2) only
        assert_eq!(op.edge_polynomial(&p.edges[0]), UniPoly::new(vec![int(-1), int(1)]));
    }

    #[test]
    fn mixed_polygon() {
        // z^2 D^2 + z^-1 D + 1 : points (0,0), (1,-2), (2,0) -> slope 0 x1, slope 2 x1
        let op = DifferentialOperator::new(vec![mono(int(1), 0), mono(int(1), -1), mono(int(1), 2)])
            .unwrap();
        let (s, _) = newton_slopes(&op).unwrap();
        assert_eq!(s, vec![(int(0), 1), (int(2), 1)]);
    }

    #[test]
    fn undetermined_coefficient_below_hull() {
        let op = DifferentialOperator::new(vec![
            TruncatedPuiseuxSeries::big_o(&int(-5)),
            mono(int(1), 0),
        ])
        .unwrap();
        assert!(matches!(op.newton_polygon(), Err(Error::InsufficientPrecision(_))));
        let fine = DifferentialOperator::new(vec![
            TruncatedPuiseuxSeries::big_o(&int(3)),
            mono(int(1), 1),
        ])
        .unwrap();
        assert!(fine.newton_polygon().is_ok());
    }
}
