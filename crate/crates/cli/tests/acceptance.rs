//! Acceptance suite: one pass/fail line per criterion, all comparisons exact.
//! Expected values are frozen here or recomputed by independent means.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dmod_core::exact::rational::{is_integral, rem_euclid};
use dmod_core::fracpow::heisenberg_depth;
use dmod_core::global::SingularPoint;
use dmod_core::linalg::Matrix;
use dmod_core::quiver::{
    canonical_morphism, dual_pair, dual_quad, j_mid, j_shriek, j_star, phi, psi, quotient_by_invariants,
};
use dmod_core::sample::{random_formal_type, random_module, random_pair, random_quad};
use dmod_core::tate::{Element, GrowthVerdict};
use dmod_core::{
    check_addition, check_heisenberg, check_radon_intertwiner, classify_growth, fmt_rat, fourier_formal_type,
    fourier_rank, int, local_fourier_invariants, pochhammer_ratio, power_table, radon_formal_type, radon_local,
    radon_local_crosscheck, radon_rank, rat, rigidity_index, symbol_from_connection, BiPoly, ElementaryModule,
    FormalModule, FormalType, GrowthOperator, Rat, Realization, TruncatedPuiseuxSeries, Verdict,
};

type Outcome = Result<String, String>;

fn series_mono(c: i64, e: i64) -> TruncatedPuiseuxSeries {
    TruncatedPuiseuxSeries::monomial(int(c), int(e))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T>(r: dmod_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn kummer_invariants(alpha: &Rat, trunc: i64) -> Result<(u64, Vec<(Rat, u64)>, Option<Rat>), String> {
    let inv = e(local_fourier_invariants(&TruncatedPuiseuxSeries::zero(), alpha, &int(trunc)))?;
    Ok((inv.rank_out, inv.slopes_out, inv.residue_out))
}

fn c1_kummer() -> Outcome {
    let start = Instant::now();
    for alpha in [rat(1, 2), rat(1, 3), rat(-1, 4), int(0), int(-1)] {
        let (rank, slopes, residue) = kummer_invariants(&alpha, 30)?;
        let residue = residue.ok_or("no residue reported")?;
        // alpha + 1 reduced by hand into [0, 1)
        let target = {
            let t = &alpha + int(1);
            let fl = t.floor();
            t - fl
        };
        let got = {
            let fl = residue.floor();
            &residue - fl
        };
        ensure(rank == 1 && slopes == vec![(int(0), 1)] && got == target, || {
            format!("alpha {}: rank {rank}, slopes {slopes:?}, residue {}", fmt_rat(&alpha), fmt_rat(&residue))
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("5 residues, {t:.1?}"))
}

fn c2_gamma_ratio() -> Outcome {
    let alpha = rat(1, 2);
    let real = e(Realization::new(&TruncatedPuiseuxSeries::zero(), &alpha, false, &int(30)))?;
    let mut expected = int(1);
    for k in 1..=10i64 {
        expected /= -alpha.clone() - int(k);
        let v = e(real.zeta_pow(&Element::one(), k as usize))?;
        let ratio = e(pochhammer_ratio(&alpha, k))?;
        let want = TruncatedPuiseuxSeries::monomial(expected.clone(), int(k));
        ensure(ratio == expected && v.series.sub(&want).has_no_terms(), || {
            format!("k = {k}: got {}", v.series)
        })?;
    }
    ensure(expected == Rat::new(1024.into(), 13_749_310_575i64.into()), || "k = 10 value".into())?;
    Ok("k = 1..10 exact".into())
}

fn c3_fourier_slopes() -> Outcome {
    let start = Instant::now();
    // (f, rank_out, slope_out)
    let cases = [
        (series_mono(-1, -2), 2, rat(1, 2)),
        (series_mono(1, -3), 3, rat(2, 3)),
        (series_mono(2, -4), 4, rat(3, 4)),
    ];
    for (f, rank, slope) in &cases {
        let inv = e(local_fourier_invariants(f, &int(0), &int(40)))?;
        ensure(
            inv.rank_out == *rank && inv.slopes_out == vec![(slope.clone(), *rank)] && *slope < int(1),
            || format!("f = {f}: rank {}, slopes {:?}", inv.rank_out, inv.slopes_out),
        )?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("3 inputs at window 40, {t:.1?}"))
}

fn grid_realization(slope: &Rat, trunc: i64) -> Result<Realization, String> {
    e(dmod_core::selftest::grid_realization(slope, &int(trunc)))
}

fn grid(trunc: i64) -> Result<Vec<(Rat, i64, GrowthVerdict)>, String> {
    let mut out = Vec::new();
    for slope in [int(0), rat(1, 2), int(1), int(2)] {
        let real = grid_realization(&slope, trunc)?;
        for a in 1..=3 {
            let v = e(classify_growth(&GrowthOperator::ZPowD(int(a)), &real, 4))?;
            out.push((slope.clone(), a, v));
        }
    }
    Ok(out)
}

fn c4_contraction_grid() -> Outcome {
    use Verdict::*;
    let expected = [
        Inconclusive, Contracting, Contracting, // slope 0
        Expanding, Contracting, Contracting, // slope 1/2
        Expanding, Inconclusive, Contracting, // slope 1
        Expanding, Expanding, Inconclusive, // slope 2
    ];
    let rows = grid(40)?;
    let mut good = 0;
    for ((slope, a, v), want) in rows.iter().zip(expected) {
        let boundary = int(a - 1);
        let rule = if *slope < boundary {
            Contracting
        } else if *slope > boundary {
            Expanding
        } else {
            Inconclusive
        };
        ensure(rule == want && v.verdict == want, || {
            format!("slope {}, a = {a}: {:?}", fmt_rat(slope), v.verdict)
        })?;
        good += 1;
    }
    Ok(format!("{good}/12 rows"))
}

fn c5_fractional_powers() -> Outcome {
    let a = BiPoly::var(0);
    let b = BiPoly::var(1);
    let mut syms = Vec::new();
    for c in [1, 2, -3] {
        let sym = e(symbol_from_connection(&series_mono(c, -2), 1))?;
        let table = power_table(&sym, 6);
        ensure(check_addition(&table, 6).passed, || format!("addition, C = {c}"))?;
        let p1 = a.mul(&b.sub(&a).add(&BiPoly::one())).scale(&rat(1, c));
        ensure(table.entries[1] == p1, || format!("p_1 for C = {c}"))?;
        syms.push(sym);
    }
    let mixed = TruncatedPuiseuxSeries::from_terms([(int(-3), int(1)), (int(-2), int(1))], None);
    let sym = e(symbol_from_connection(&mixed, 1))?;
    ensure(check_addition(&power_table(&sym, 6), 6).passed, || "addition, z^-3 + z^-2".into())?;
    syms.push(sym);
    for sym in [&syms[0], &syms[3]] {
        for alpha in [int(2), rat(1, 2), rat(-1, 3)] {
            let tau = int(8);
            let table = power_table(sym, heisenberg_depth(sym, &alpha, &tau));
            let rep = e(check_heisenberg(sym, &table, &alpha, &tau))?;
            ensure(rep.passed, || format!("Heisenberg at alpha {}: {:?}", fmt_rat(&alpha), rep.failures))?;
        }
    }
    let mut bad = power_table(&syms[0], 6);
    bad.entries[2] = bad.entries[2].add(&BiPoly::constant(rat(1, 7)));
    let rep = check_addition(&bad, 6);
    ensure(!rep.passed, || "corrupted table passed".into())?;
    Ok("4 symbols, p_1, 6 Heisenberg runs; corrupted table rejected".into())
}

fn c6_intertwiner() -> Outcome {
    for (f, alpha) in [(series_mono(-1, -2), rat(1, 3)), (series_mono(1, -3), rat(1, 2))] {
        let rep = e(check_radon_intertwiner(&f, &alpha, &int(30)))?;
        ensure(rep.passed && rep.vectors_checked > 0, || format!("f = {f}: {:?}", rep.failures))?;
    }
    Ok("2 cases at window 30".into())
}

fn c7_radon() -> Outcome {
    let mut n = 0;
    for f in [series_mono(-1, -2), series_mono(1, -3), series_mono(2, -4)] {
        for lambda in [rat(1, 3), rat(1, 2), rat(-2, 5)] {
            let rep = e(radon_local_crosscheck(&f, &int(0), &lambda, &int(30)))?;
            ensure(rep.agree, || format!("f = {f}, lambda {}", fmt_rat(&lambda)))?;
            n += 1;
        }
    }
    for (alpha, lambda, out) in [
        (rat(1, 5), rat(1, 3), rat(8, 15)),
        (rat(1, 2), rat(1, 2), int(0)),
        (rat(2, 3), rat(-2, 5), rat(4, 15)),
    ] {
        let m = FormalModule::new(vec![ElementaryModule::kummer(alpha, 1)]);
        let r = e(radon_local(&m, &lambda))?;
        ensure(r == FormalModule::new(vec![ElementaryModule::kummer(out.clone(), 1)]), || {
            format!("Kummer rule gave {r}")
        })?;
    }
    let mut g = ChaCha8Rng::seed_from_u64(7);
    for i in 0..50 {
        let rank = g.gen_range(1..=4);
        let m = random_module(&mut g, rank, false);
        let lambda = loop {
            let l = rat(g.gen_range(-9..=9), g.gen_range(2..=6));
            if !is_integral(&l) {
                break l;
            }
        };
        let back = e(radon_local(&e(radon_local(&m, &lambda))?, &-lambda.clone()))?;
        ensure(back == m, || format!("random module {i}"))?;
    }
    Ok(format!("{n} cross-checks agree, Kummer rule, 50 round trips"))
}

fn c8_quiver() -> Outcome {
    let mut g = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let n = g.gen_range(1..=5);
        let p = random_pair(&mut g, n);
        ensure(psi(&j_star(&p)) == p && psi(&j_shriek(&p)) == p, || format!("psi, sample {i}"))?;
        ensure(phi(&j_star(&p)) == p && phi(&j_shriek(&p)) == p, || format!("phi, sample {i}"))?;
        ensure(dual_pair(&dual_pair(&p)).is_isomorphic(&p), || format!("pair duality, sample {i}"))?;
        ensure(
            dual_quad(&j_star(&p)).is_isomorphic(&j_shriek(&dual_pair(&p))),
            || format!("D j_* vs j_! D, sample {i}"),
        )?;
        let mid = j_mid(&p);
        let rank = p.rho().sub(&Matrix::identity(n)).rank();
        ensure(
            mid.dim_vp() == rank && phi(&mid).is_isomorphic(&quotient_by_invariants(&p)),
            || format!("phi of the middle extension, sample {i}"),
        )?;
        let m = canonical_morphism(&p);
        ensure(
            m.is_valid(&j_star(&p), &j_shriek(&p)) && m.image(&j_shriek(&p)).is_isomorphic(&mid),
            || format!("image of the canonical morphism, sample {i}"),
        )?;
        let k = g.gen_range(0..=5);
        let q = random_quad(&mut g, n, k);
        ensure(dual_quad(&dual_quad(&q)).is_isomorphic(&q), || format!("quad duality, sample {i}"))?;
    }
    Ok("200 random pairs and quads".into())
}

fn kummer_point(label: &str, alphas: &[Rat]) -> SingularPoint {
    SingularPoint::new(
        label,
        FormalModule::new(alphas.iter().map(|a| ElementaryModule::kummer(a.clone(), 1)).collect()),
    )
}

fn hypergeometric() -> FormalType {
    FormalType::new(
        0,
        2,
        vec![
            kummer_point("0", &[int(0), rat(1, 3)]),
            kummer_point("1", &[int(0), rat(1, 5)]),
            kummer_point("inf", &[rat(1, 7), rat(2, 7)]),
        ],
    )
    .unwrap()
}

fn kummer_type(alpha: Rat) -> FormalType {
    FormalType::new(0, 1, vec![kummer_point("0", std::slice::from_ref(&alpha)), kummer_point("inf", &[-alpha])]).unwrap()
}

fn c9_rigidity() -> Outcome {
    let four = FormalType::new(
        0,
        2,
        vec![
            kummer_point("0", &[int(0), rat(1, 3)]),
            kummer_point("1", &[int(0), rat(1, 5)]),
            kummer_point("2", &[int(0), rat(1, 4)]),
            kummer_point("inf", &[rat(1, 7), rat(2, 7)]),
        ],
    )
    .unwrap();
    ensure(e(rigidity_index(&kummer_type(rat(1, 3))))? == 2, || "rank-1 Kummer type".into())?;
    let exp_type = FormalType::new(
        0,
        1,
        vec![SingularPoint::new(
            "0",
            FormalModule::new(vec![e(ElementaryModule::exponential(int(-1), int(-2), int(0)))?]),
        )],
    )
    .unwrap();
    ensure(e(rigidity_index(&exp_type))? == 2, || "rank-1 exponential type".into())?;
    ensure(e(rigidity_index(&hypergeometric()))? == 2, || "hypergeometric".into())?;
    ensure(e(rigidity_index(&four))? == 0, || "four points".into())?;
    for lambda in [rat(1, 3), rat(1, 2)] {
        for ft in [hypergeometric(), four.clone()] {
            let before = e(rigidity_index(&ft))?;
            let t = e(radon_formal_type(&ft, &lambda))?.formal_type().ok_or("not exact")?;
            ensure(e(rigidity_index(&t))? == before, || format!("Radon at {}", fmt_rat(&lambda)))?;
        }
    }
    for ft in [hypergeometric(), kummer_type(rat(2, 5))] {
        let t = e(fourier_formal_type(&ft))?.formal_type().ok_or("not exact")?;
        ensure(e(rigidity_index(&t))? == e(rigidity_index(&ft))?, || "Fourier invariance".into())?;
    }
    let mut g = ChaCha8Rng::seed_from_u64(9);
    for i in 0..100 {
        let n = g.gen_range(1..=3);
        let k = g.gen_range(1..=4);
        let ft = random_formal_type(&mut g, n, k, false);
        let r = e(rigidity_index(&ft))?;
        ensure(r % 2 == 0, || format!("random type {i}: {r}"))?;
    }
    Ok("2, 2, 0; invariance under Radon and Fourier; 100 random even".into())
}

fn c10_ranks() -> Outcome {
    let k = kummer_type(rat(1, 3));
    ensure(e(fourier_rank(&k))? == 1 && e(radon_rank(&k))? == 1, || "Kummer".into())?;
    let e_type = FormalType::new(
        0,
        1,
        vec![
            SingularPoint::new(
                "0",
                FormalModule::new(vec![e(ElementaryModule::exponential(int(-1), int(-2), int(0)))?]),
            ),
            SingularPoint::new("inf", FormalModule::trivial(1)),
        ],
    )
    .unwrap();
    ensure(e(fourier_rank(&e_type))? == 2, || "e^{1/z} type".into())?;
    let gauss = FormalType::new(
        0,
        1,
        vec![SingularPoint::new(
            "inf",
            FormalModule::new(vec![e(ElementaryModule::exponential(int(1), int(-3), int(0)))?]),
        )],
    )
    .unwrap();
    ensure(e(fourier_rank(&gauss))? == 1, || "slope-2 type".into())?;
    // Phi-ranks 1, 1, 2
    let two = FormalType::new(
        0,
        2,
        vec![
            kummer_point("0", &[int(0), rat(1, 3)]),
            kummer_point("1", &[int(0), rat(1, 5)]),
            kummer_point("inf", &[rat(1, 7), rat(2, 7)]),
        ],
    )
    .unwrap();
    ensure(e(radon_rank(&two))? == 2, || "Phi-ranks (1, 1, 2)".into())?;
    let two_finite = FormalType::new(
        0,
        1,
        vec![
            kummer_point("0", &[rat(1, 3)]),
            kummer_point("1", &[rat(1, 4)]),
            kummer_point("inf", &[rat(-7, 12)]),
        ],
    )
    .unwrap();
    for ft in [&k, &two, &two_finite] {
        let f = e(fourier_formal_type(ft))?;
        ensure(f.rank_out == e(fourier_rank(ft))?, || "assembled Fourier rank".into())?;
        if let Some(t) = f.formal_type() {
            ensure(t.rank() == f.rank_out, || "Fourier output type rank".into())?;
        }
        // generic lambda: 1/3 would send -1/3 at infinity to the trivial class
        let r = e(radon_formal_type(ft, &rat(1, 5)))?;
        ensure(r.rank_out == e(radon_rank(ft))?, || "assembled Radon rank".into())?;
    }
    ensure(e(fourier_formal_type(&two_finite))?.rank_out == 2, || "two finite points".into())?;
    Ok("1, 2, 1, 2; assembled ranks match".into())
}

/// Everything the oracle produces on the shipped inputs, at one window.
fn oracle_numbers(trunc: i64) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for alpha in [rat(1, 2), rat(1, 3), rat(-1, 4), int(0), int(-1)] {
        let (rank, slopes, residue) = kummer_invariants(&alpha, trunc)?;
        let residue = residue.map(|r| rem_euclid(&r, &int(1)));
        out.push(format!("kummer {}: {rank} {slopes:?} {residue:?}", fmt_rat(&alpha)));
    }
    let real = e(Realization::new(&TruncatedPuiseuxSeries::zero(), &rat(1, 2), false, &int(trunc)))?;
    for k in 1..=10 {
        let v = e(real.zeta_pow(&Element::one(), k))?;
        out.push(format!("zeta^{k}: {:?}", v.series.leading_term()));
    }
    for f in [series_mono(-1, -2), series_mono(1, -3), series_mono(2, -4)] {
        let inv = e(local_fourier_invariants(&f, &int(0), &int(trunc)))?;
        out.push(format!(
            "fourier {f}: {} {:?} {} {}",
            inv.rank_out,
            inv.slopes_out,
            inv.irregularity_out,
            inv.annihilator.theta_form.order()
        ));
    }
    for (slope, a, v) in grid(trunc)? {
        out.push(format!("grid {} {a}: {:?} {:?} {:?}", fmt_rat(&slope), v.verdict, v.forward, v.inverse));
    }
    for f in [series_mono(-1, -2), series_mono(1, -3)] {
        for lambda in [rat(1, 3), rat(1, 2), rat(-2, 5)] {
            let rep = e(radon_local_crosscheck(&f, &int(0), &lambda, &int(trunc)))?;
            let polar = |s: &TruncatedPuiseuxSeries| {
                s.terms()
                    .filter(|(e, _)| *e < int(-1))
                    .map(|(e, c)| (e, c.clone()))
                    .collect::<Vec<_>>()
            };
            out.push(format!(
                "radon {f} {}: {} {:?} {:?} {:?}",
                fmt_rat(&lambda),
                rep.agree,
                rep.slopes_shifted,
                polar(&rep.det_twisted),
                polar(&rep.det_shifted)
            ));
        }
    }
    Ok(out)
}

fn c11_stability() -> Outcome {
    let (a, b) = std::thread::scope(|s| {
        let h = s.spawn(|| oracle_numbers(40));
        let b = oracle_numbers(50);
        (h.join().expect("oracle thread"), b)
    });
    let (a, b) = (a?, b?);
    for (x, y) in a.iter().zip(&b) {
        ensure(x == y, || format!("40: {x} / 50: {y}"))?;
    }
    ensure(a.len() == b.len(), || "different counts".into())?;
    Ok(format!("{} oracle values unchanged", a.len()))
}

fn selftest_timing() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_dmod"))
        .arg("selftest")
        .output()
        .map_err(|e| e.to_string())?;
    let t = start.elapsed();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(out.status.success() && v["passed"] == true, || {
        let failed: Vec<_> = v["checks"]
            .as_array()
            .into_iter()
            .flatten()
            .filter(|c| c["passed"] != true)
            .map(|c| c["name"].to_string())
            .collect();
        format!("failed checks: {failed:?}")
    })?;
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!("{} checks in {t:.1?}", v["count"]))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("1 Kummer local Fourier", c1_kummer),
        ("2 Gamma-ratio identity", c2_gamma_ratio),
        ("3 local Fourier invariants", c3_fourier_slopes),
        ("4 contraction grid", c4_contraction_grid),
        ("5 fractional powers", c5_fractional_powers),
        ("6 Radon intertwiner", c6_intertwiner),
        ("7 local Katz-Radon", c7_radon),
        ("8 quiver suite", c8_quiver),
        ("9 rigidity", c9_rigidity),
        ("10 rank formulas", c10_ranks),
        ("11 stability 40 -> 50", c11_stability),
        ("selftest under 5 minutes", selftest_timing),
    ];
    // criteria with runtime bounds go first, alone, so that load does not skew them
    let mut results: Vec<(usize, Outcome, Duration)> = Vec::new();
    for (i, (_, f)) in criteria.iter().enumerate().take(3) {
        let t = Instant::now();
        results.push((i, f(), t.elapsed()));
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .skip(3)
            .map(|(i, (_, f))| {
                s.spawn(move || {
                    let t = Instant::now();
                    (i, f(), t.elapsed())
                })
            })
            .collect();
        for h in handles {
            results.push(h.join().unwrap_or_else(|_| (usize::MAX, Err("panicked".into()), Duration::ZERO)));
        }
    });
    let mut failed = 0;
    for (i, r, t) in &results {
        let name = criteria.get(*i).map(|c| c.0).unwrap_or("?");
        match r {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{t:.1?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} [{t:.1?}]");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
