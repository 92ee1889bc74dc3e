use dmod_core::exact::{discrete_antiderivative, BiPoly};
use dmod_core::quiver::{dual_pair, dual_quad, j_mid, j_shriek, j_star, phi, psi};
use dmod_core::sample::{random_formal_type, random_module, random_pair, random_quad};
use dmod_core::transforms::{fourier_local_regular, fourier_local_regular_inverse, twist_by_class};
use dmod_core::{
    apply_power, check_addition, fourier_bookkeeping, fourier_formal_type, infinity_decompose, int, pochhammer_ratio,
    power_table, radon_formal_type, radon_local, rat, rigidity_index, symbol_from_connection, Flavor, FormalModule,
    Rat, TruncatedPuiseuxSeries,
};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn nonint_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("non-integral", |q| !q.is_integer())
}

fn exact_series() -> impl Strategy<Value = TruncatedPuiseuxSeries> {
    prop::collection::vec(((-8i64..=8, 1i64..=3), small_rat()), 0..5).prop_map(|ts| {
        TruncatedPuiseuxSeries::from_terms(ts.into_iter().map(|((n, d), c)| (rat(n, d), c)), None)
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Agreement of two series on every exponent below both truncations.
fn agree_below_bounds(a: &TruncatedPuiseuxSeries, b: &TruncatedPuiseuxSeries) -> bool {
    a.sub(b).has_no_terms()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_laws(a in exact_series(), b in exact_series(), c in exact_series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&TruncatedPuiseuxSeries::one()), a.clone());
    }

    #[test]
    fn leibniz(a in exact_series(), b in exact_series()) {
        let lhs = a.mul(&b).derive();
        let rhs = a.derive().mul(&b).add(&a.mul(&b.derive()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_is_pessimistic(a in exact_series(), b in exact_series(), tau in small_rat()) {
        let at = a.truncate(&tau);
        let p = at.mul(&b);
        // the product is correct wherever it claims to be known
        prop_assert!(agree_below_bounds(&p, &a.mul(&b)));
        if let Some(ob) = b.order() {
            prop_assert!(p.trunc().unwrap() <= &tau + ob);
        }
    }

    #[test]
    fn inverse_times_series_is_one(a in exact_series(), target in 1i64..6) {
        prop_assume!(!a.has_no_terms());
        let inv = a.inv_to(&int(target)).unwrap();
        let prod = a.mul(&inv);
        prop_assert!(agree_below_bounds(&prod, &TruncatedPuiseuxSeries::one()));
        prop_assert!(prod.trunc().unwrap() >= int(target) + a.order().unwrap());
    }

    #[test]
    fn pochhammer_recurrence(alpha in nonint_rat(), k in -6i64..6) {
        // G(-a-k-1) (-a-k-1) = G(-a-k)
        let next = pochhammer_ratio(&alpha, k + 1).unwrap();
        let here = pochhammer_ratio(&alpha, k).unwrap();
        prop_assert_eq!(next * (-&alpha - int(k + 1)), here);
        prop_assert_eq!(pochhammer_ratio(&alpha, 0).unwrap(), Rat::one());
    }

    #[test]
    fn antiderivative_differences_back(
        terms in prop::collection::vec(((0u32..5, 0u32..3), small_rat()), 0..6),
        a in small_rat(),
        b in small_rat(),
    ) {
        let p = BiPoly::from_terms(terms.into_iter().map(|((i, j), c)| ([i, j], c)));
        let q = discrete_antiderivative(&p, 0);
        let diff = q.eval(&[a.clone(), b.clone()]) - q.eval(&[&a - int(1), b.clone()]);
        prop_assert_eq!(diff, p.eval(&[a, b.clone()]));
        prop_assert!(q.eval(&[int(0), b]).is_zero());
    }

    #[test]
    fn radon_is_invertible_and_additive(seed in any::<u64>(), n in 1u64..5, l in nonint_rat(), m in nonint_rat()) {
        let module = random_module(&mut rng(seed), n, false);
        let out = radon_local(&module, &l).unwrap();
        prop_assert_eq!(out.rank(), module.rank());
        prop_assert_eq!(out.slopes(), module.slopes());
        prop_assert_eq!(out.irregularity().unwrap(), module.irregularity().unwrap());
        prop_assert_eq!(radon_local(&out, &-l.clone()).unwrap(), module.clone());
        let lm = &l + &m;
        if !lm.is_integer() {
            prop_assert_eq!(radon_local(&out, &m).unwrap(), radon_local(&module, &lm).unwrap());
        }
    }

    #[test]
    fn radon_rejects_integers(seed in any::<u64>(), k in -3i64..3) {
        let module = random_module(&mut rng(seed), 2, false);
        prop_assert!(radon_local(&module, &int(k)).is_err());
    }

    #[test]
    fn fourier_regular_round_trip(seed in any::<u64>(), n in 1u64..5, x in small_rat()) {
        let module = random_module(&mut rng(seed), n, true);
        let out = fourier_local_regular(&module, &x).unwrap();
        prop_assert_eq!(out.rank(), module.rank());
        prop_assert_eq!(fourier_local_regular_inverse(&out, &x).unwrap(), module.clone());
        prop_assert_eq!(twist_by_class(&twist_by_class(&module, &x), &-x.clone()), module);
    }

    #[test]
    fn bookkeeping_round_trip(seed in any::<u64>(), n in 1u64..5, x in small_rat()) {
        let module = random_module(&mut rng(seed), n, false);
        let there = fourier_bookkeeping(&module, &Flavor::ToInfinity(x.clone())).unwrap();
        let irr = module.irregularity().unwrap();
        prop_assert_eq!(int(there.rank_out as i64), int(module.rank() as i64) + irr);
        let back = fourier_bookkeeping(&there.model().unwrap(), &Flavor::FromInfinity(x)).unwrap();
        prop_assert_eq!(back.slopes_out, module.slopes());
        prop_assert_eq!(back.rank_out, module.rank());
    }

    #[test]
    fn infinity_decomposition_partitions(seed in any::<u64>(), n in 1u64..6) {
        let module = random_module(&mut rng(seed), n, false);
        let d = infinity_decompose(&module);
        let class_rank: u64 = d.classes.values().map(FormalModule::rank).sum();
        prop_assert_eq!(d.over1.rank() + class_rank, module.rank());
        prop_assert!(d.over1.slopes().iter().all(|(s, _)| *s > Rat::one()));
    }

    #[test]
    fn module_invariants(seed in any::<u64>(), n in 1u64..5, x in small_rat()) {
        let module = random_module(&mut rng(seed), n, false);
        let end = module.end_of().unwrap();
        prop_assert_eq!(end.rank(), module.rank() * module.rank());
        prop_assert_eq!(module.dual().dual(), module.clone());
        prop_assert_eq!(module.dual().slopes(), module.slopes());
        let mut total = 0;
        for (s, _) in module.slopes() {
            total += module.slope_part(&s).rank();
        }
        prop_assert_eq!(total, module.rank());
        prop_assert_eq!(module.tensor_kummer(&x).tensor_kummer(&-x.clone()), module.clone());
        prop_assert_eq!(module.psi_to_phi().phi_to_psi(module.rank()).unwrap(), module.clone());
        prop_assert_eq!(module.psi_to_phi().rank(), module.rank() - module.hor_rank());
    }

    #[test]
    fn quiver_identities(seed in any::<u64>(), n in 0usize..4) {
        let mut g = rng(seed);
        let p = random_pair(&mut g, n);
        prop_assert!(psi(&j_star(&p)).is_isomorphic(&p));
        prop_assert!(psi(&j_shriek(&p)).is_isomorphic(&p));
        prop_assert!(psi(&j_mid(&p)).is_isomorphic(&p));
        prop_assert!(phi(&j_star(&p)).is_isomorphic(&p));
        prop_assert_eq!(j_mid(&p).dim_vp(), p.rho().sub(&dmod_core::Matrix::identity(n)).rank());
        prop_assert!(dual_pair(&dual_pair(&p)).is_isomorphic(&p));
        let m = 3 - n.min(3);
        let q = random_quad(&mut g, n, m);
        prop_assert!(dual_quad(&dual_quad(&q)).is_isomorphic(&q));
        prop_assert!(psi(&dual_quad(&q)).is_isomorphic(&dual_pair(&psi(&q))));
    }

    #[test]
    fn rigidity_is_even_and_transform_invariant(seed in any::<u64>(), n in 1u64..4, k in 3usize..5) {
        let ft = random_formal_type(&mut rng(seed), n, k, true);
        let rig = rigidity_index(&ft).unwrap();
        prop_assert_eq!(rig.rem_euclid(2), 0);
        if let Ok(t) = radon_formal_type(&ft, &rat(1, 7)) {
            if let Some(out) = t.formal_type() {
                prop_assert_eq!(rigidity_index(&out).unwrap(), rig);
            }
        }
        if let Ok(t) = fourier_formal_type(&ft) {
            if let Some(out) = t.formal_type() {
                prop_assert_eq!(rigidity_index(&out).unwrap(), rig);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn power_table_laws(c in small_rat().prop_filter("nonzero", |c| !c.is_zero()), k in 2i64..4) {
        let f = TruncatedPuiseuxSeries::monomial(c.clone(), int(-k));
        let sym = symbol_from_connection(&f, 1).unwrap();
        let t = power_table(&sym, 4);
        prop_assert!(t.entries[0] == BiPoly::one());
        // alpha = 0 is the identity, alpha = 1 is the symbol itself
        for i in 1..=4 {
            prop_assert!(t.entries[i].eval(&[int(0), int(1)]).is_zero());
        }
        for i in 0..=4 {
            prop_assert_eq!(t.entries[i].eval_first(&int(1)), sym.p(i));
        }
        prop_assert!(check_addition(&t, 4).passed);
    }

    #[test]
    fn powers_compose(a in small_rat(), b in small_rat(), e in 0i64..3) {
        let f = TruncatedPuiseuxSeries::monomial(int(1), int(-2));
        let sym = symbol_from_connection(&f, 1).unwrap();
        let tau = int(4);
        let v = TruncatedPuiseuxSeries::monomial(int(1), int(e));
        let inner_tau = &tau + int(8);
        let probe = power_table(&sym, 0);
        let lowest = int(e) + probe.shift(&b);
        let terms = probe
            .terms_needed(&b, &int(e), &inner_tau)
            .max(probe.terms_needed(&a, &lowest, &tau))
            .max(probe.terms_needed(&(&a + &b), &int(e), &tau))
            .max(probe.terms_needed(&int(0), &int(e), &tau));
        let t = power_table(&sym, terms.max(1) - 1);
        let inner = apply_power(&t, &b, &v, &inner_tau).unwrap();
        let lhs = apply_power(&t, &a, &inner, &tau).unwrap();
        let rhs = apply_power(&t, &(&a + &b), &v, &tau).unwrap();
        prop_assert!(agree_below_bounds(&lhs, &rhs));
        let zero = apply_power(&t, &int(0), &v, &tau).unwrap();
        prop_assert!(agree_below_bounds(&zero, &v));
    }
}
