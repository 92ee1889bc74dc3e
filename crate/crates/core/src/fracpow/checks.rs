//! Identity checks for the power table: the addition law, the commutation relations
//! with `d` and `z`, and the intertwining relation behind the local Katz-Radon formula.


use crate::error::Result;
use crate::exact::poly::{MPoly, TriPoly};
use crate::exact::rational::{fmt_rat, int, rat, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;
use crate::tate::Connection;

use super::symbol::{symbol_from_connection, OperatorSymbol};
use super::table::{power_table, PowerTable, SpecializedPower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditionReport {
    pub passed: bool,
    pub first_failure: Option<usize>,
    pub checked: usize,
}

/// `p_i(a' + a'', b) = sum_j p_{i-j}(a', b + (a'' d + j)/r) p_j(a'', b)` as an identity
/// in three variables, for `i <= max_i` (capped at the table depth).
pub fn check_addition(table: &PowerTable, max_i: usize) -> AdditionReport {
    let top = max_i.min(table.depth());
    let a1 = TriPoly::var(0);
    let a2 = TriPoly::var(1);
    let b = TriPoly::var(2);
    let r = int(table.ram as i64);
    let d = int(table.d);
    let at_second: Vec<TriPoly> = table.entries[..=top]
        .iter()
        .map(|p| p.compose(&[a2.clone(), b.clone()]))
        .collect();
    for i in 0..=top {
        let lhs = table.entries[i].compose(&[a1.add(&a2), b.clone()]);
        let mut rhs = TriPoly::zero();
        for j in 0..=i {
            let lin = b
                .add(&a2.scale(&(&d / &r)))
                .add(&MPoly::constant(int(j as i64) / &r));
            let first = table.entries[i - j].compose(&[a1.clone(), lin]);
            rhs = rhs.add(&first.mul(&at_second[j]));
        }
        if lhs != rhs {
            return AdditionReport {
                passed: false,
                first_failure: Some(i),
                checked: i + 1,
            };
        }
    }
    AdditionReport {
        passed: true,
        first_failure: None,
        checked: top + 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergReport {
    pub passed: bool,
    /// `P^alpha d = d P^alpha`.
    pub commutes: bool,
    /// `P^alpha z = z P^alpha + (alpha/C) P^{alpha-1}`.
    pub z_rule: bool,
    /// Agreement with `alpha`-fold application of `P`, for integers `0 <= alpha <= 6`.
    pub brute_force: Option<bool>,
    pub precision: Rat,
    pub failures: Vec<String>,
}

fn agrees(a: &TruncatedPuiseuxSeries, b: &TruncatedPuiseuxSeries, tau: &Rat) -> bool {
    let diff = a.sub(b);
    diff.has_no_terms() && diff.trunc().is_none_or(|t| t >= *tau)
}

fn test_vectors(ram: u64) -> Vec<TruncatedPuiseuxSeries> {
    let mut out = Vec::new();
    for gamma in [int(0), rat(1, 3)] {
        for k in 0..3 {
            let e = &gamma + rat(k, ram as i64);
            out.push(TruncatedPuiseuxSeries::monomial(int(1), e));
        }
    }
    out
}

fn pole(sym: &OperatorSymbol) -> Rat {
    -int(sym.d) / int(sym.ram as i64)
}

/// Table depth that [`check_heisenberg`] needs at `alpha` and window `tau`.
pub fn heisenberg_depth(sym: &OperatorSymbol, alpha: &Rat, tau: &Rat) -> usize {
    let probe = PowerTable {
        ram: sym.ram,
        d: sym.d,
        entries: vec![],
    };
    let p = pole(sym);
    let alpha_m1 = alpha - int(1);
    let mut depth = 0;
    for v in test_vectors(sym.ram) {
        let beta = v.order().expect("monomial");
        let low = &beta - &p;
        depth = depth
            .max(probe.terms_needed(alpha, &low, tau))
            .max(probe.terms_needed(alpha, &beta, &(tau + &p)))
            .max(probe.terms_needed(alpha, &(&beta + int(1)), tau))
            .max(probe.terms_needed(alpha, &beta, &(tau - int(1))))
            .max(probe.terms_needed(&alpha_m1, &beta, tau));
    }
    // n terms are the entries p_0 .. p_{n-1}
    depth.saturating_sub(1)
}

/// Applies both relations to monomials `z^{gamma + k/r}` and compares below `tau`.
pub fn check_heisenberg(sym: &OperatorSymbol, table: &PowerTable, alpha: &Rat, tau: &Rat) -> Result<HeisenbergReport> {
    let p = pole(sym);
    let mut commutes = true;
    let mut z_rule = true;
    let mut brute: Option<bool> = None;
    let mut failures = Vec::new();
    let z = TruncatedPuiseuxSeries::monomial(int(1), int(1));
    let coef = alpha / &sym.c;
    let alpha_m1 = alpha - int(1);
    let small_int = alpha.is_integer() && *alpha >= int(0) && *alpha <= int(6);
    let pa = SpecializedPower::new(table, alpha);
    let pa1 = SpecializedPower::new(table, &alpha_m1);
    for v in test_vectors(sym.ram) {
        let lhs = pa.apply(&sym.apply_connection(&v), tau)?;
        let rhs = sym.apply_connection(&pa.apply(&v, &(tau + &p))?);
        if !agrees(&lhs, &rhs, tau) {
            commutes = false;
            failures.push(format!("d-commutation on {v}"));
        }
        let lhs = pa.apply(&z.mul(&v), tau)?;
        let rhs = z
            .mul(&pa.apply(&v, &(tau - int(1)))?)
            .add(&pa1.apply(&v, tau)?.scale(&coef));
        if !agrees(&lhs, &rhs, tau) {
            z_rule = false;
            failures.push(format!("z-rule on {v}"));
        }
        if small_int {
            let mut it = v.clone();
            let k = crate::exact::rational::to_i64(alpha).unwrap();
            for _ in 0..k {
                it = sym.apply(&it);
            }
            let ok = agrees(&pa.apply(&v, tau)?, &it, tau);
            if !ok {
                failures.push(format!("integer power {} on {v}", fmt_rat(alpha)));
            }
            brute = Some(brute.unwrap_or(true) && ok);
        }
    }
    Ok(HeisenbergReport {
        passed: commutes && z_rule && brute.unwrap_or(true),
        commutes,
        z_rule,
        brute_force: brute,
        precision: tau.clone(),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwinerReport {
    pub passed: bool,
    pub vectors_checked: usize,
    pub depth: usize,
    pub precision: Rat,
    pub failures: Vec<String>,
}

/// `d_zeta P^alpha = P^alpha (d_zeta - alpha / zeta)` with `d_zeta = -d^2 z` and
/// `zeta^-1 = -d`, `d = d/dz + f`, on monomials `z^{gamma + k/r}`.
pub fn check_radon_intertwiner(f: &TruncatedPuiseuxSeries, alpha: &Rat, tau: &Rat) -> Result<IntertwinerReport> {
    let sym = symbol_from_connection(f, f.ram())?;
    let conn = Connection::new(f, &int(0))?;
    let p = pole(&sym);
    let z = TruncatedPuiseuxSeries::monomial(int(1), int(1));
    let dzeta = |w: &TruncatedPuiseuxSeries| conn.apply(&conn.apply(&z.mul(w))).neg();
    let zeta_inv = |w: &TruncatedPuiseuxSeries| conn.apply(w).neg();
    let vectors = test_vectors(sym.ram);
    let probe = PowerTable {
        ram: sym.ram,
        d: sym.d,
        entries: vec![],
    };
    let lowest = int(1) - int(2) * &p;
    let depth = probe
        .terms_needed(alpha, &lowest, tau)
        .max(probe.terms_needed(alpha, &int(0), &(tau + int(2) * &p)));
    let table = power_table(&sym, depth);
    let pa = SpecializedPower::new(&table, alpha);
    let mut failures = Vec::new();
    for v in &vectors {
        let lhs = dzeta(&pa.apply(v, &(tau + int(2) * &p))?);
        let u = dzeta(v).sub(&zeta_inv(v).scale(alpha));
        let rhs = pa.apply(&u, tau)?;
        if !agrees(&lhs, &rhs, tau) {
            failures.push(format!("intertwiner on {v}"));
        }
    }
    Ok(IntertwinerReport {
        passed: failures.is_empty(),
        vectors_checked: vectors.len(),
        depth: table.depth(),
        precision: tau.clone(),
        failures,
    })
}
