//! The invariant suite behind `dmod selftest`: randomized algebraic identities plus the
//! oracle examples, each reported as a named pass/fail line.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exact::poly::{discrete_antiderivative, BiPoly};
use crate::exact::rational::{fmt_rat, int, is_integral, rat, rem_euclid, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;
use crate::exact::pochhammer_ratio;
use crate::formal::{ElementaryModule, FormalModule};
use crate::fracpow::{
    check_addition, check_heisenberg, check_radon_intertwiner, power_table, symbol_from_connection, PowerTable,
    SpecializedPower,
};
use crate::global::{fourier_formal_type, radon_formal_type, rigidity_index, FormalType, SingularPoint};
use crate::quiver::{
    canonical_morphism, dual_pair, dual_quad, j_mid, j_shriek, j_star, phi, psi, quotient_by_invariants,
};
use crate::sample::{random_formal_type, random_module, random_pair, random_quad};
use crate::tate::{
    classify_growth, fourier_slope, local_fourier_invariants, GrowthOperator, Realization, Verdict,
};
use crate::transforms::{fourier_bookkeeping, infinity_decompose, radon_local, radon_local_crosscheck, Flavor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

type Outcome = Result<(bool, String)>;

fn run_one(name: &'static str, f: fn() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        name,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

const CHECKS: &[(&str, fn() -> Outcome)] = &[
    ("series-ring-laws", series_ring_laws),
    ("pochhammer-recurrence", pochhammer_recurrence),
    ("discrete-antiderivative", antiderivative),
    ("quiver-identities", quiver_identities),
    ("formal-module-laws", formal_module_laws),
    ("kummer-fourier-oracle", kummer_fourier),
    ("gamma-ratio-oracle", gamma_ratio),
    ("fourier-slope-oracle", fourier_slopes),
    ("contraction-grid", contraction_grid),
    ("fourier-bookkeeping", bookkeeping_laws),
    ("radon-local-laws", radon_laws),
    ("radon-crosscheck", radon_crosscheck),
    ("power-table-identities", power_tables),
    ("power-action-laws", power_action),
    ("radon-intertwiner", intertwiner),
    ("rigidity", rigidity),
];

/// Names of the checks, in run order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every check, in order.
pub fn run_selftest() -> Vec<Check> {
    CHECKS.iter().map(|(n, f)| run_one(n, *f)).collect()
}

/// Runs the checks whose names contain `filter`.
pub fn run_filtered(filter: &str) -> Vec<Check> {
    CHECKS
        .iter()
        .filter(|(n, _)| n.contains(filter))
        .map(|(n, f)| run_one(n, *f))
        .collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_series(rng: &mut ChaCha8Rng, tau: i64) -> TruncatedPuiseuxSeries {
    let low = rng.gen_range(-3..=2);
    let mut terms = vec![(int(low), int(rng.gen_range(1..=3)))];
    for e in low + 1..tau {
        if rng.gen_bool(0.4) {
            terms.push((int(e), rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
        }
    }
    TruncatedPuiseuxSeries::from_terms(terms, Some(int(tau)))
}

fn series_ring_laws() -> Outcome {
    let mut g = rng(11);
    let mut n = 0;
    for _ in 0..40 {
        let (a, b, c) = (random_series(&mut g, 30), random_series(&mut g, 30), random_series(&mut g, 30));
        if a.mul(&b) != b.mul(&a) || a.mul(&b).mul(&c) != a.mul(&b.mul(&c)) {
            return Ok((false, format!("ring law failed on {a} and {b}")));
        }
        if a.mul(&b.add(&c)) != a.mul(&b).add(&a.mul(&c)) {
            return Ok((false, format!("distributivity failed on {a}")));
        }
        if a.mul(&b).derive() != a.derive().mul(&b).add(&a.mul(&b.derive())) {
            return Ok((false, format!("Leibniz rule failed on {a} and {b}")));
        }
        let prod = a.mul(&a.inv()?);
        let t = prod.trunc().unwrap_or_else(|| int(30));
        if prod.sub(&TruncatedPuiseuxSeries::one()).has_no_terms() && t > int(0) {
            n += 1;
        } else {
            return Ok((false, format!("inverse failed on {a}")));
        }
    }
    Ok((true, format!("{n} random triples")))
}

fn pochhammer_recurrence() -> Outcome {
    let mut g = rng(12);
    for _ in 0..100 {
        let alpha = rat(g.gen_range(-20..=20), g.gen_range(2..=9));
        if is_integral(&alpha) {
            continue;
        }
        let k = g.gen_range(-8..=8);
        let lhs = pochhammer_ratio(&alpha, k + 1)?;
        let rhs = pochhammer_ratio(&alpha, k)? / (-alpha.clone() - int(k + 1));
        if lhs != rhs {
            return Ok((false, format!("alpha = {}, k = {k}", fmt_rat(&alpha))));
        }
    }
    Ok((true, "100 random (alpha, k)".into()))
}

fn antiderivative() -> Outcome {
    let mut g = rng(13);
    for _ in 0..30 {
        let p = BiPoly::from_terms((0..6).map(|_| {
            (
                [g.gen_range(0..=6), g.gen_range(0..=3)],
                rat(g.gen_range(-9..=9), g.gen_range(1..=5)),
            )
        }));
        let q = discrete_antiderivative(&p, 0);
        let a = BiPoly::var(0);
        let b = BiPoly::var(1);
        let back = q.sub(&q.compose(&[a.sub(&BiPoly::one()), b.clone()]));
        let at_zero = q.compose(&[BiPoly::zero(), b]);
        if back != p || !at_zero.is_zero() {
            return Ok((false, "difference identity failed".into()));
        }
    }
    Ok((true, "30 random polynomials of degree <= 6".into()))
}

fn quiver_identities() -> Outcome {
    let mut g = rng(14);
    for i in 0..200 {
        let n = g.gen_range(0..=5);
        let p = random_pair(&mut g, n);
        let ok = psi(&j_star(&p)) == p
            && psi(&j_shriek(&p)) == p
            && phi(&j_star(&p)) == p
            && phi(&j_shriek(&p)) == p
            && dual_pair(&dual_pair(&p)).is_isomorphic(&p)
            && dual_quad(&j_star(&p)).is_isomorphic(&j_shriek(&dual_pair(&p)))
            && phi(&j_mid(&p)).is_isomorphic(&quotient_by_invariants(&p));
        let m = canonical_morphism(&p);
        let image_ok = m.is_valid(&j_star(&p), &j_shriek(&p)) && m.image(&j_shriek(&p)).is_isomorphic(&j_mid(&p));
        let k = g.gen_range(0..=5);
        let q = random_quad(&mut g, n, k);
        let quad_ok = dual_quad(&dual_quad(&q)).is_isomorphic(&q);
        if !(ok && image_ok && quad_ok) {
            return Ok((false, format!("sample {i} (dim {n})")));
        }
    }
    Ok((true, "200 random pairs and quads, dim <= 5".into()))
}

fn formal_module_laws() -> Outcome {
    let mut g = rng(15);
    for i in 0..100 {
        let n = g.gen_range(1..=4);
        let m = random_module(&mut g, n, false);
        let end = m.end_of()?;
        let ok = end.rank() == n * n
            && m.dual().dual() == m
            && m.dual().irregularity()? == m.irregularity()?
            && m.psi_to_phi().phi_to_psi(n)? == m
            && m.tensor_kummer(&rat(1, 3)).slopes() == m.slopes();
        let parts = m
            .slopes()
            .iter()
            .fold(FormalModule::empty(), |acc, (s, _)| acc.direct_sum(&m.slope_part(s)));
        if !ok || parts != m {
            return Ok((false, format!("sample {i}: {m}")));
        }
    }
    Ok((true, "100 random modules".into()))
}

fn kummer_fourier() -> Outcome {
    for alpha in [rat(1, 2), rat(1, 3), rat(-1, 4), int(0), int(-1)] {
        let inv = local_fourier_invariants(&TruncatedPuiseuxSeries::zero(), &alpha, &int(30))?;
        let residue = inv.residue_out.clone().unwrap_or_else(|| int(99));
        let ok = inv.rank_out == 1
            && inv.slopes_out == vec![(int(0), 1)]
            && rem_euclid(&(residue - &alpha - int(1)), &int(1)).is_zero();
        if !ok {
            return Ok((false, format!("alpha = {}", fmt_rat(&alpha))));
        }
    }
    Ok((true, "alpha in {1/2, 1/3, -1/4, 0, -1}".into()))
}

fn gamma_ratio() -> Outcome {
    let alpha = rat(1, 2);
    let real = Realization::new(&TruncatedPuiseuxSeries::zero(), &alpha, false, &int(30))?;
    let one = crate::tate::Element::one();
    for k in 1..=10 {
        let v = real.zeta_pow(&one, k)?;
        let expected = TruncatedPuiseuxSeries::monomial(pochhammer_ratio(&alpha, k as i64)?, int(k as i64));
        let diff = v.series.sub(&expected);
        if !diff.has_no_terms() || v.delta.iter().any(|d| !d.is_zero()) {
            return Ok((false, format!("k = {k}")));
        }
    }
    Ok((true, "alpha = 1/2, k = 1..10".into()))
}

fn fourier_slopes() -> Outcome {
    let fs = [
        TruncatedPuiseuxSeries::monomial(int(-1), int(-2)),
        TruncatedPuiseuxSeries::monomial(int(1), int(-3)),
        TruncatedPuiseuxSeries::monomial(int(2), int(-4)),
    ];
    let mut out = Vec::new();
    for f in &fs {
        let s = -f.order().unwrap() - int(1);
        let inv = local_fourier_invariants(f, &int(0), &int(40))?;
        let rank = &s + int(1);
        let ok = int(inv.rank_out as i64) == rank
            && inv.slopes_out == vec![(fourier_slope(&s), inv.rank_out)]
            && inv.slopes_out.iter().all(|(t, _)| *t < int(1));
        if !ok {
            return Ok((false, format!("f = {f}")));
        }
        out.push(format!("{}->{}", fmt_rat(&s), fmt_rat(&inv.slopes_out[0].0)));
    }
    Ok((true, out.join(", ")))
}

/// The realizations used for the contraction grid, by slope.
pub fn grid_realization(slope: &Rat, trunc: &Rat) -> Result<Realization> {
    if slope.is_zero() {
        return Realization::new(&TruncatedPuiseuxSeries::zero(), &rat(1, 2), false, trunc);
    }
    let f = TruncatedPuiseuxSeries::monomial(int(1), -(slope + int(1)));
    Realization::new(&f, &int(0), false, trunc)
}

fn contraction_grid() -> Outcome {
    let mut rows = 0;
    for slope in [int(0), rat(1, 2), int(1), int(2)] {
        let real = grid_realization(&slope, &int(40))?;
        for a in 1..=3 {
            let v = classify_growth(&GrowthOperator::ZPowD(int(a)), &real, 4)?;
            let boundary = int(a - 1);
            let expected = if slope < boundary {
                Verdict::Contracting
            } else if slope > boundary {
                Verdict::Expanding
            } else {
                Verdict::Inconclusive
            };
            if v.verdict != expected {
                return Ok((false, format!("slope {}, a = {a}: {:?}", fmt_rat(&slope), v.verdict)));
            }
            rows += 1;
        }
    }
    Ok((true, format!("{rows}/12 rows")))
}

fn bookkeeping_laws() -> Outcome {
    let mut g = rng(16);
    for i in 0..100 {
        let n = g.gen_range(1..=4);
        let m = random_module(&mut g, n, false);
        let x = rat(g.gen_range(-3..=3), 1);
        let forward = fourier_bookkeeping(&m, &Flavor::ToInfinity(x.clone()))?;
        let back = fourier_bookkeeping(&forward.model()?, &Flavor::FromInfinity(x))?;
        let in_range = forward.slopes_out.iter().all(|(s, _)| *s < int(1));
        let dec = infinity_decompose(&m);
        let total: u64 = dec.over1.rank() + dec.classes.values().map(FormalModule::rank).sum::<u64>();
        let ok = back.rank_out == m.rank()
            && back.irr_out == m.irregularity()?
            && back.slopes_out == m.slopes()
            && in_range
            && total == m.rank();
        if !ok {
            return Ok((false, format!("sample {i}: {m}")));
        }
    }
    Ok((true, "100 random modules".into()))
}

fn radon_laws() -> Outcome {
    let mut g = rng(17);
    for i in 0..50 {
        let n = g.gen_range(1..=4);
        let m = random_module(&mut g, n, false);
        let lambda = loop {
            let l = rat(g.gen_range(-9..=9), g.gen_range(2..=7));
            if !is_integral(&l) {
                break l;
            }
        };
        let r = radon_local(&m, &lambda)?;
        let ok = radon_local(&r, &-lambda.clone())? == m
            && r.rank() == m.rank()
            && r.slopes() == m.slopes()
            && r.irregularity()? == m.irregularity()?;
        if !ok {
            return Ok((false, format!("sample {i}: {m}, lambda {}", fmt_rat(&lambda))));
        }
    }
    let k = FormalModule::new(vec![ElementaryModule::kummer(rat(1, 5), 1)]);
    let shifted = radon_local(&k, &rat(1, 3))?;
    let ok = shifted == FormalModule::new(vec![ElementaryModule::kummer(rat(8, 15), 1)]);
    Ok((ok, "50 random modules, inverse pair and invariants".into()))
}

fn radon_crosscheck() -> Outcome {
    let fs = [
        TruncatedPuiseuxSeries::monomial(int(-1), int(-2)),
        TruncatedPuiseuxSeries::monomial(int(1), int(-3)),
    ];
    let mut n = 0;
    for f in &fs {
        for lambda in [rat(1, 3), rat(1, 2), rat(-2, 5)] {
            let rep = radon_local_crosscheck(f, &int(0), &lambda, &int(30))?;
            if !rep.agree {
                return Ok((false, format!("f = {f}, lambda = {}", fmt_rat(&lambda))));
            }
            n += 1;
        }
    }
    Ok((true, format!("{n} cases agree")))
}

fn shipped_symbols() -> Vec<TruncatedPuiseuxSeries> {
    vec![
        TruncatedPuiseuxSeries::monomial(int(1), int(-2)),
        TruncatedPuiseuxSeries::monomial(int(2), int(-2)),
        TruncatedPuiseuxSeries::monomial(int(-3), int(-2)),
        TruncatedPuiseuxSeries::from_terms([(int(-3), int(1)), (int(-2), int(1))], None),
    ]
}

fn power_tables() -> Outcome {
    let a = BiPoly::var(0);
    let b = BiPoly::var(1);
    for f in shipped_symbols() {
        let sym = symbol_from_connection(&f, 1)?;
        let table = power_table(&sym, 6);
        for (i, p) in table.entries.iter().enumerate() {
            let at_one = p.compose(&[BiPoly::one(), b.clone()]);
            let at_zero = p.compose(&[BiPoly::zero(), b.clone()]);
            let base = crate::fracpow::table::substitute(&sym.p(i), &b);
            let zero_ok = if i == 0 { at_zero == BiPoly::one() } else { at_zero.is_zero() };
            if at_one != base || !zero_ok {
                return Ok((false, format!("boundary values of p_{i} for f = {f}")));
            }
        }
        if !check_addition(&table, 6).passed {
            return Ok((false, format!("addition law for f = {f}")));
        }
        if f.num_terms() == 1 {
            let c = f.leading_term().unwrap().1;
            let p1 = a.mul(&b.sub(&a).add(&BiPoly::one())).scale(&c.recip());
            if table.entries[1] != p1 {
                return Ok((false, format!("p_1 for f = {f}")));
            }
        }
    }
    let sym = symbol_from_connection(&shipped_symbols()[0], 1)?;
    let mut corrupted = power_table(&sym, 4);
    corrupted.entries[1] = corrupted.entries[1].add(&BiPoly::var(0));
    if check_addition(&corrupted, 4).passed {
        return Ok((false, "corrupted table passed the addition check".into()));
    }
    for alpha in [int(2), rat(1, 2), rat(-1, 3)] {
        let table = power_table(&sym, 24);
        let rep = check_heisenberg(&sym, &table, &alpha, &int(8))?;
        if !rep.passed {
            return Ok((false, format!("Heisenberg relations at alpha = {}", fmt_rat(&alpha))));
        }
    }
    Ok((true, "4 symbols, i <= 6; corrupted table rejected".into()))
}

fn needed(table: &PowerTable, alpha: &Rat, beta: &Rat, tau: &Rat) -> usize {
    table.terms_needed(alpha, beta, tau)
}

fn power_action() -> Outcome {
    let mut g = rng(18);
    let f = TruncatedPuiseuxSeries::monomial(int(-1), int(-2));
    let sym = symbol_from_connection(&f, 1)?;
    let tau = int(6);
    let probe = PowerTable {
        ram: 1,
        d: sym.d,
        entries: vec![],
    };
    for i in 0..10 {
        let a1 = rat(g.gen_range(-6..=6), g.gen_range(1..=4));
        let a2 = rat(g.gen_range(-6..=6), g.gen_range(1..=4));
        let beta = rat(g.gen_range(0..=6), 3);
        let v = TruncatedPuiseuxSeries::from_terms(
            [(beta.clone(), int(1)), (&beta + int(1), rat(g.gen_range(-4..=4), 3))],
            None,
        );
        let inner_tau = &tau - probe.shift(&a1);
        let mid = &beta + probe.shift(&a2);
        let depth = needed(&probe, &a2, &beta, &inner_tau)
            .max(needed(&probe, &a1, &mid, &tau))
            .max(needed(&probe, &(&a1 + &a2), &beta, &tau))
            .max(needed(&probe, &-a1.clone(), &(&beta + probe.shift(&a1)), &tau))
            .max(needed(&probe, &a1, &beta, &(&tau - probe.shift(&-a1.clone()))))
            + 2;
        let table = power_table(&sym, depth);
        let p = |alpha: &Rat| SpecializedPower::new(&table, alpha);
        let two_steps = p(&a1).apply(&p(&a2).apply(&v, &inner_tau)?, &tau)?;
        let one_step = p(&(&a1 + &a2)).apply(&v, &tau)?;
        let round = p(&-a1.clone()).apply(&p(&a1).apply(&v, &(&tau - probe.shift(&-a1.clone())))?, &tau)?;
        if !two_steps.sub(&one_step).has_no_terms() || !round.sub(&v).has_no_terms() {
            return Ok((false, format!("sample {i}: alpha' = {}, alpha'' = {}", fmt_rat(&a1), fmt_rat(&a2))));
        }
    }
    Ok((true, "10 random (alpha', alpha'', v)".into()))
}

fn intertwiner() -> Outcome {
    let cases = [
        (TruncatedPuiseuxSeries::monomial(int(-1), int(-2)), rat(1, 3)),
        (TruncatedPuiseuxSeries::monomial(int(1), int(-3)), rat(1, 2)),
    ];
    for (f, alpha) in &cases {
        let rep = check_radon_intertwiner(f, alpha, &int(30))?;
        if !rep.passed {
            return Ok((false, format!("f = {f}, alpha = {}", fmt_rat(alpha))));
        }
    }
    Ok((true, "2 cases at window 30".into()))
}

fn kummer_point(label: &str, alphas: &[Rat]) -> SingularPoint {
    SingularPoint::new(
        label,
        FormalModule::new(alphas.iter().map(|a| ElementaryModule::kummer(a.clone(), 1)).collect()),
    )
}

/// The rank-two type with three regular points and distinct generic local exponents.
pub fn hypergeometric_type() -> FormalType {
    FormalType::new(
        0,
        2,
        vec![
            kummer_point("0", &[int(0), rat(1, 3)]),
            kummer_point("1", &[int(0), rat(1, 5)]),
            kummer_point("inf", &[rat(1, 7), rat(2, 7)]),
        ],
    )
    .expect("consistent type")
}

fn rigidity() -> Outcome {
    let hyper = hypergeometric_type();
    let four = FormalType::new(
        0,
        2,
        vec![
            kummer_point("0", &[int(0), rat(1, 3)]),
            kummer_point("1", &[int(0), rat(1, 5)]),
            kummer_point("2", &[int(0), rat(1, 4)]),
            kummer_point("inf", &[rat(1, 7), rat(2, 7)]),
        ],
    )?;
    let rank_one = FormalType::new(
        0,
        1,
        vec![
            SingularPoint::new(
                "0",
                FormalModule::new(vec![ElementaryModule::exponential(int(-1), int(-2), rat(1, 3))?]),
            ),
            kummer_point("inf", &[rat(2, 3)]),
        ],
    )?;
    if rigidity_index(&hyper)? != 2 || rigidity_index(&four)? != 0 || rigidity_index(&rank_one)? != 2 {
        return Ok((false, "worked values".into()));
    }
    for lambda in [rat(1, 3), rat(1, 2)] {
        let t = radon_formal_type(&hyper, &lambda)?.formal_type();
        if t.map(|t| rigidity_index(&t)).transpose()? != Some(2) {
            return Ok((false, format!("Radon at lambda = {}", fmt_rat(&lambda))));
        }
    }
    let fourier = fourier_formal_type(&hyper)?.formal_type();
    if fourier.map(|t| rigidity_index(&t)).transpose()? != Some(2) {
        return Ok((false, "Fourier of the hypergeometric type".into()));
    }
    let mut g = rng(19);
    for i in 0..100 {
        let n = g.gen_range(1..=3);
        let k = g.gen_range(1..=4);
        let ft = random_formal_type(&mut g, n, k, false);
        if rigidity_index(&ft)? % 2 != 0 {
            return Ok((false, format!("odd index on random type {i}")));
        }
    }
    Ok((true, "worked values, transform invariance, 100 random types even".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_pass() {
        for name in [
            "series-ring-laws",
            "pochhammer-recurrence",
            "discrete-antiderivative",
            "formal-module-laws",
            "fourier-bookkeeping",
            "radon-local-laws",
            "rigidity",
        ] {
            let r = run_filtered(name);
            assert_eq!(r.len(), 1);
            assert!(r[0].passed, "{}: {}", r[0].name, r[0].detail);
        }
    }

    #[test]
    fn names_are_distinct() {
        let mut n = check_names();
        n.sort();
        n.dedup();
        assert_eq!(n.len(), CHECKS.len());
    }
}
