//! Local Katz-Radon transform `M -> sum_s M^s (x) K^{lambda (s + 1)}` and its oracle
//! cross-check on rank-one data.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rat, int, is_integral, Rat};
use crate::exact::series::TruncatedPuiseuxSeries;
use crate::formal::{newton_slopes, DifferentialOperator, ElementaryModule, FormalModule};
use crate::tate::{annihilator, default_degree, invariants_of, Element, Realization};

fn check_lambda(lambda: &Rat) -> Result<()> {
    if is_integral(lambda) {
        return Err(Error::IntegralLambda(fmt_rat(lambda)));
    }
    Ok(())
}

pub fn radon_local(m: &FormalModule, lambda: &Rat) -> Result<FormalModule> {
    check_lambda(lambda)?;
    Ok(FormalModule::new(
        m.components()
            .iter()
            .map(|c| c.tensor_kummer(&(lambda * (c.slope() + int(1)))))
            .collect(),
    ))
}

/// Both sides of `Four(M) (x) K^lambda = Four(M (x) K^{lambda (1 + s)})` computed by the
/// oracle, compared through Newton slopes and the determinant `-a_{n-1}/a_n`: its
/// polar part below `z^-1` must agree exactly and its residues modulo `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadonCrosscheck {
    pub agree: bool,
    /// Output of [`radon_local`] on the input.
    pub symbolic: FormalModule,
    pub slopes_twisted: Vec<(Rat, u64)>,
    pub slopes_shifted: Vec<(Rat, u64)>,
    pub det_twisted: TruncatedPuiseuxSeries,
    pub det_shifted: TruncatedPuiseuxSeries,
    pub precision: Rat,
}

fn det_form(op: &DifferentialOperator) -> Result<TruncatedPuiseuxSeries> {
    op.trace_form(&int(0))
}

fn det_agree(a: &TruncatedPuiseuxSeries, b: &TruncatedPuiseuxSeries) -> Result<bool> {
    let d = a.sub(b);
    for (e, c) in d.terms() {
        if e < int(-1) && !c.is_zero() {
            return Ok(false);
        }
    }
    Ok(is_integral(&d.coeff(&int(-1))?))
}

pub fn radon_local_crosscheck(
    f: &TruncatedPuiseuxSeries,
    residue: &Rat,
    lambda: &Rat,
    trunc: &Rat,
) -> Result<RadonCrosscheck> {
    check_lambda(lambda)?;
    let e = ElementaryModule::new(1, f.clone(), residue.clone(), 1)?;
    if e.ram() != 1 || e.is_regular() {
        return Err(Error::InvalidInput(
            "the cross-check takes rank-one unramified irregular input".into(),
        ));
    }
    let symbolic = radon_local(&FormalModule::new(vec![e.clone()]), lambda)?;
    let shift = lambda * (e.slope() + int(1));
    let mut report = crosscheck_with_shift(&e, lambda, &shift, trunc)?;
    let expected = &symbolic.components()[0];
    report.agree &= expected == &e.tensor_kummer(&shift);
    report.symbolic = symbolic;
    Ok(report)
}

/// Oracle comparison of `Four(E) (x) K^lambda` with `Four(E (x) K^shift)`.
pub(crate) fn crosscheck_with_shift(
    e: &ElementaryModule,
    lambda: &Rat,
    shift: &Rat,
    trunc: &Rat,
) -> Result<RadonCrosscheck> {
    let real = Realization::for_module(e, trunc)?;
    let plain = invariants_of(&real)?;
    let twisted = plain.annihilator.theta_form.twist(lambda).to_operator();
    let shifted_module = e.tensor_kummer(shift);
    let real_s = Realization::for_module(&shifted_module, trunc)?;
    let p = real_s.period() as usize;
    let ann_s = annihilator(&real_s, &Element::one(), p + 1, default_degree(p as u64))?;
    let (slopes_twisted, _) = newton_slopes(&twisted)?;
    let (slopes_shifted, _) = newton_slopes(&ann_s.operator)?;
    let det_twisted = det_form(&twisted)?;
    let det_shifted = det_form(&ann_s.operator)?;
    let agree = twisted.order() == ann_s.operator.order()
        && slopes_twisted == slopes_shifted
        && det_agree(&det_twisted, &det_shifted)?;
    Ok(RadonCrosscheck {
        agree,
        symbolic: FormalModule::new(vec![shifted_module]),
        slopes_twisted,
        slopes_shifted,
        det_twisted,
        det_shifted,
        precision: plain.precision.min(ann_s.precision),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn kummer_shift() {
        let m = FormalModule::new(vec![ElementaryModule::kummer(rat(1, 5), 1)]);
        let out = radon_local(&m, &rat(1, 3)).unwrap();
        assert_eq!(out, FormalModule::new(vec![ElementaryModule::kummer(rat(8, 15), 1)]));
        assert!(matches!(radon_local(&m, &int(1)), Err(Error::IntegralLambda(_))));
    }

    #[test]
    fn slope_one_doubles_lambda() {
        let e = ElementaryModule::exponential(int(1), int(-2), int(0)).unwrap();
        let out = radon_local(&FormalModule::new(vec![e]), &rat(1, 3)).unwrap();
        let expect = ElementaryModule::exponential(int(1), int(-2), rat(2, 3)).unwrap();
        assert_eq!(out.components(), &[expect]);
    }

    #[test]
    fn ramified_half_slope() {
        let e = ElementaryModule::exponential(int(1), rat(-3, 2), int(0)).unwrap();
        let out = radon_local(&FormalModule::new(vec![e.clone()]), &rat(1, 3)).unwrap();
        // shift 1/2 is 0 modulo 1/2
        assert_eq!(out.components()[0].residue(), &(e.residue() + rat(1, 2) - rat(1, 2)));
        assert_eq!(out.components()[0].exp(), e.exp());
    }

    #[test]
    fn oracle_agrees_with_symbolic_shift() {
        let f = TruncatedPuiseuxSeries::monomial(int(-1), int(-2));
        let r = radon_local_crosscheck(&f, &int(0), &rat(1, 3), &int(30)).unwrap();
        assert!(r.agree, "{r:?}");
    }

    #[test]
    fn naive_twist_is_rejected() {
        let e = ElementaryModule::exponential(int(-1), int(-2), int(0)).unwrap();
        let r = crosscheck_with_shift(&e, &rat(1, 3), &rat(1, 3), &int(30)).unwrap();
        assert!(!r.agree);
    }
}
