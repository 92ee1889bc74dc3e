//! A rank-one connection `d = d/dz + F` acting on truncated Puiseux series, with `F`
//! an exact Laurent polynomial in `z^{1/r}`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rational::{denom_u64, fmt_rat, int, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    form: TruncatedPuiseuxSeries,
}

impl Connection {
    /// `d/dz + f + residue/z`.
    pub fn new(f: &TruncatedPuiseuxSeries, residue: &Rat) -> Result<Self> {
        if !f.is_exact() {
            return Err(Error::InvalidInput(
                "connection form must be an exact Laurent polynomial".into(),
            ));
        }
        let form = f.add(&TruncatedPuiseuxSeries::monomial(residue.clone(), int(-1)));
        Ok(Self { form })
    }

    pub fn form(&self) -> &TruncatedPuiseuxSeries {
        &self.form
    }

    /// Pole order of `F` when it exceeds 1 (irregular case).
    pub fn irregular_pole(&self) -> Option<Rat> {
        self.form.order().filter(|o| *o < int(-1)).map(|o| -o)
    }

    /// Coefficient of `z^-1` in `F`.
    pub fn residue(&self) -> Rat {
        self.form.coeff(&int(-1)).expect("form is exact")
    }

    pub fn apply(&self, v: &TruncatedPuiseuxSeries) -> TruncatedPuiseuxSeries {
        v.derive().add(&self.form.mul(v))
    }

    /// The unique `v` with `apply(v) = w`, known below `min(cap, tau_w + shift)` where
    /// `shift` is the pole order (or 1 in the regular case). Exact when `F = a/z` and
    /// `w` is exact.
    pub fn solve(&self, w: &TruncatedPuiseuxSeries, cap: &Rat) -> Result<TruncatedPuiseuxSeries> {
        if w.is_zero() {
            return Ok(TruncatedPuiseuxSeries::zero());
        }
        let l = self.form.ram().lcm(&w.ram()).lcm(&denom_u64(cap));
        let grid = |e: &Rat| -> i64 {
            let s = e * int(l as i64);
            debug_assert!(s.is_integer());
            crate::exact::rational::to_i64(&s).expect("grid index fits")
        };
        let form: Vec<(i64, Rat)> = self
            .form
            .terms()
            .map(|(e, c)| (grid(&e), c.clone()))
            .collect();
        let wmap: BTreeMap<i64, Rat> = w.terms().map(|(e, c)| (grid(&e), c.clone())).collect();
        let w_trunc = w.trunc().map(|t| grid(&t));
        let cap_g = grid(cap);
        let li = l as i64;
        let to_exp = |k: i64| Rat::new(k.into(), (l as i64).into());
        let irregular = self.irregular_pole().is_some();
        // the shift between an input exponent and the output exponent it determines
        let shift = if irregular { -form[0].0 } else { li };
        let start = match w.order() {
            Some(o) => grid(&o) + shift,
            None => {
                let t = w.trunc().unwrap();
                return Ok(TruncatedPuiseuxSeries::big_o(&(t + to_exp(shift))));
            }
        };
        let exact_regular = !irregular && w.is_exact() && form.len() == 1;
        let mut end = w_trunc.map(|t| t + shift).unwrap_or(cap_g).min(cap_g);
        if exact_regular {
            end = wmap.keys().last().unwrap() + shift + 1;
        }
        let mut c: BTreeMap<i64, Rat> = BTreeMap::new();
        let get = |c: &BTreeMap<i64, Rat>, k: i64| c.get(&k).cloned().unwrap_or_else(Rat::zero);
        if irregular {
            // F_lead c_x = w_{x-p} - (x-p+1) c_{x-p+1} - sum_{i > -p} F_i c_{x-p-i}
            let (lead_idx, lead) = form[0].clone();
            let p = -lead_idx;
            for x in start..end {
                let e = x - p;
                let mut acc = wmap.get(&e).cloned().unwrap_or_else(Rat::zero);
                let d = get(&c, e + li);
                if !d.is_zero() {
                    acc -= to_exp(e + li) * d;
                }
                for (i, fi) in form.iter().skip(1) {
                    let k = e - i;
                    if k < start {
                        break;
                    }
                    let ck = get(&c, k);
                    if !ck.is_zero() {
                        acc -= fi * ck;
                    }
                }
                if !acc.is_zero() {
                    c.insert(x, acc / &lead);
                }
            }
        } else {
            let alpha = self.residue();
            // (x + alpha) c_x = w_{x-1} - sum_{i > -1} F_i c_{x-1-i}
            for x in start..end {
                let e = x - li;
                let mut acc = wmap.get(&e).cloned().unwrap_or_else(Rat::zero);
                for (i, fi) in form.iter() {
                    if *i == -li {
                        continue;
                    }
                    let k = e - i;
                    if k < start {
                        continue;
                    }
                    let ck = get(&c, k);
                    if !ck.is_zero() {
                        acc -= fi * ck;
                    }
                }
                let denom = to_exp(x) + &alpha;
                if denom.is_zero() {
                    return Err(Error::Resonance(format!(
                        "d/dz + F is not invertible at z^{}",
                        fmt_rat(&to_exp(x))
                    )));
                }
                if !acc.is_zero() {
                    c.insert(x, acc / denom);
                }
            }
        }
        let trunc = if exact_regular { None } else { Some(to_exp(end)) };
        Ok(TruncatedPuiseuxSeries::from_terms(
            c.into_iter().map(|(k, v)| (to_exp(k), v)),
            trunc,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn mono(c: Rat, e: Rat) -> TruncatedPuiseuxSeries {
        TruncatedPuiseuxSeries::monomial(c, e)
    }

    #[test]
    fn regular_solve() {
        let c = Connection::new(&TruncatedPuiseuxSeries::zero(), &rat(1, 2)).unwrap();
        let v = c.solve(&TruncatedPuiseuxSeries::one(), &int(30)).unwrap();
        assert_eq!(v, mono(rat(2, 3), int(1)));
        assert_eq!(c.apply(&v), TruncatedPuiseuxSeries::one());
    }

    #[test]
    fn irregular_solve_has_factorial_growth() {
        let c = Connection::new(&mono(int(-1), int(-2)), &int(0)).unwrap();
        let v = c.solve(&TruncatedPuiseuxSeries::one(), &int(8)).unwrap();
        assert_eq!(v.coeff(&int(2)).unwrap(), int(-1));
        assert_eq!(v.coeff(&int(3)).unwrap(), int(-2));
        assert_eq!(v.coeff(&int(4)).unwrap(), int(-6));
        assert_eq!(v.coeff(&int(5)).unwrap(), int(-24));
        let back = c.apply(&v);
        assert_eq!(back, TruncatedPuiseuxSeries::one().truncate(&back.trunc().unwrap()));
    }

    #[test]
    fn resonance_is_reported() {
        let c = Connection::new(&TruncatedPuiseuxSeries::zero(), &int(0)).unwrap();
        assert!(matches!(
            c.solve(&mono(int(1), int(-1)), &int(5)),
            Err(Error::Resonance(_))
        ));
    }

    #[test]
    fn ramified_solve_round_trip() {
        let c = Connection::new(&mono(int(1), rat(-3, 2)), &rat(1, 4)).unwrap();
        let w = mono(int(1), rat(1, 2));
        let v = c.solve(&w, &int(10)).unwrap();
        let back = c.apply(&v);
        assert_eq!(back, w.truncate(&back.trunc().unwrap()));
        assert!(back.trunc().unwrap() >= int(8));
    }
}
