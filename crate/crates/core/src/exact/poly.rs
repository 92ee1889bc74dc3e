//! Polynomials over Q: sparse multivariate (`MPoly<N>`) and dense univariate (`UniPoly`).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::rational::{fmt_rat, int, Rat};

/// Sparse polynomial in `N` commuting variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly<const N: usize> {
    terms: BTreeMap<[u32; N], Rat>,
}

/// Polynomials in `(a, b)`; used for the power table `p_i(alpha, beta)`.
pub type BiPoly = MPoly<2>;
pub type TriPoly = MPoly<3>;

impl<const N: usize> Default for MPoly<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> MPoly<N> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_terms([([0; N], c)])
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::from_terms([(e, int(1))])
    }

    pub fn from_terms<I: IntoIterator<Item = ([u32; N], Rat)>>(it: I) -> Self {
        let mut terms: BTreeMap<[u32; N], Rat> = BTreeMap::new();
        for (e, c) in it {
            *terms.entry(e).or_insert_with(Rat::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32; N]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(*e).or_insert_with(Rat::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<[u32; N], Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for k in 0..N {
                    e[k] += eb[k];
                }
                *terms.entry(e).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Rat; N]) -> Rat {
        let mut powers: Vec<Vec<Rat>> = vec![vec![Rat::one()]; N];
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..N {
                let d = e[k] as usize;
                while powers[k].len() <= d {
                    let next = powers[k].last().unwrap() * &point[k];
                    powers[k].push(next);
                }
                if d > 0 {
                    t *= &powers[k][d];
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes `subs[k]` for variable `k`.
    pub fn compose<const M: usize>(&self, subs: &[MPoly<M>; N]) -> MPoly<M> {
        let mut powers: Vec<Vec<MPoly<M>>> = subs.iter().map(|s| vec![MPoly::one(), s.clone()]).collect();
        let mut out: BTreeMap<[u32; M], Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = MPoly::<M>::constant(c.clone());
            for k in 0..N {
                let d = e[k] as usize;
                if d == 0 {
                    continue;
                }
                while powers[k].len() <= d {
                    let next = powers[k].last().unwrap().mul(&subs[k]);
                    powers[k].push(next);
                }
                t = t.mul(&powers[k][d]);
            }
            for (te, tc) in t.terms {
                *out.entry(te).or_insert_with(Rat::zero) += tc;
            }
        }
        out.retain(|_, c| !c.is_zero());
        MPoly { terms: out }
    }
}

impl BiPoly {
    /// Fixes `a = alpha`, leaving a polynomial in `b`.
    pub fn eval_first(&self, alpha: &Rat) -> UniPoly {
        let mut coeffs: Vec<Rat> = Vec::new();
        for (e, c) in &self.terms {
            let j = e[1] as usize;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, Rat::zero());
            }
            let mut t = c.clone();
            for _ in 0..e[0] {
                t *= alpha;
            }
            coeffs[j] += t;
        }
        UniPoly::new(coeffs)
    }
}

impl<const N: usize> fmt::Display for MPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        const NAMES: [&str; 4] = ["a", "b", "c", "d"];
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", fmt_rat(c))?;
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    let name = NAMES.get(k).copied().unwrap_or("x");
                    if p == 1 {
                        write!(f, "*{name}")?;
                    } else {
                        write!(f, "*{name}^{p}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Stirling numbers of the second kind `S(n, k)` for `n, k <= max`.
pub fn stirling2_table(max: usize) -> Vec<Vec<Rat>> {
    let mut s = vec![vec![Rat::zero(); max + 1]; max + 1];
    s[0][0] = Rat::one();
    for n in 1..=max {
        for k in 1..=n {
            s[n][k] = &s[n - 1][k - 1] + int(k as i64) * &s[n - 1][k];
        }
    }
    s
}

/// `(x + shift)(x + shift - 1)...(x + shift - len + 1)` as a dense polynomial in `x`.
fn shifted_falling(shift: i64, len: usize) -> Vec<Rat> {
    let mut p = vec![Rat::one()];
    for i in 0..len {
        let c = int(shift - i as i64);
        let mut next = vec![Rat::zero(); p.len() + 1];
        for (k, pk) in p.iter().enumerate() {
            next[k + 1] += pk;
            next[k] += pk * &c;
        }
        p = next;
    }
    p
}

thread_local! {
    static POWER_SUMS: std::cell::RefCell<Vec<Vec<Rat>>> = const { std::cell::RefCell::new(Vec::new()) };
}

/// Dense coefficients of `q_m(a) = sum_{x=1}^{a} x^m` for `m <= deg`, cached per thread.
fn power_sum_images(deg: usize) -> Vec<Vec<Rat>> {
    POWER_SUMS.with(|cache| {
        let mut cache = cache.borrow_mut();
        if cache.len() <= deg {
            let stirling = stirling2_table(deg);
            // (a+1)_{k+1} = (a+1) a (a-1) ... (a-k+1), extended one factor at a time
            let mut falling: Vec<Vec<Rat>> = Vec::with_capacity(deg + 1);
            let mut ff = shifted_falling(1, 1);
            for k in 0..=deg {
                if k > 0 {
                    let c = int(1 - k as i64);
                    let mut next = vec![Rat::zero(); ff.len() + 1];
                    for (i, fi) in ff.iter().enumerate() {
                        next[i + 1] += fi;
                        next[i] += fi * &c;
                    }
                    ff = next;
                }
                falling.push(ff.clone());
            }
            // a^m = sum_k S(m,k) a_k, and sum_{x=1}^{a} x_k = (a+1)_{k+1} / (k+1)
            for m in cache.len()..=deg {
                let mut img = vec![Rat::zero(); m + 2];
                for k in 0..=m {
                    if stirling[m][k].is_zero() {
                        continue;
                    }
                    let w = &stirling[m][k] / int(k as i64 + 1);
                    for (i, c) in falling[k].iter().enumerate() {
                        img[i] += c * &w;
                    }
                }
                img[0] = Rat::zero();
                cache.push(img);
            }
        }
        cache[..=deg].to_vec()
    })
}

/// Returns `q` with `q(.., a, ..) - q(.., a - 1, ..) = p` and `q = 0` at `a = 0`, where
/// `a` is the variable with index `var`.
pub fn discrete_antiderivative<const N: usize>(p: &MPoly<N>, var: usize) -> MPoly<N> {
    let deg = match p.degree_in(var) {
        Some(d) => d as usize,
        None => return MPoly::zero(),
    };
    let images = power_sum_images(deg);
    let mut out: BTreeMap<[u32; N], Rat> = BTreeMap::new();
    for (e, c) in &p.terms {
        let m = e[var] as usize;
        for (i, ci) in images[m].iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let mut ne = *e;
            ne[var] = i as u32;
            *out.entry(ne).or_insert_with(Rat::zero) += c * ci;
        }
    }
    MPoly::from_terms(out)
}

/// Dense univariate polynomial, coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `x - c`
    pub fn linear(c: Rat) -> Self {
        Self::new(vec![-c, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(x + s)`
    pub fn shift(&self, s: &Rat) -> Self {
        let mut acc = Self::zero();
        let xs = Self::new(vec![s.clone(), Rat::one()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&xs).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * di;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({})", fmt_rat(c)),
                1 => format!("({})*x", fmt_rat(c)),
                _ => format!("({})*x^{k}", fmt_rat(c)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn a() -> BiPoly {
        BiPoly::var(0)
    }

    fn b() -> BiPoly {
        BiPoly::var(1)
    }

    /// `q(a, b) - q(a - 1, b)` by direct substitution.
    fn backward_difference(q: &BiPoly) -> BiPoly {
        let shifted = q.compose(&[a().sub(&BiPoly::one()), b()]);
        q.sub(&shifted)
    }

    #[test]
    fn antiderivative_of_one_is_a() {
        assert_eq!(discrete_antiderivative(&BiPoly::one(), 0), a());
    }

    #[test]
    fn antiderivative_of_a_is_triangular() {
        let q = discrete_antiderivative(&a(), 0);
        let expect = a().mul(&a().add(&BiPoly::one())).scale(&rat(1, 2));
        assert_eq!(q, expect);
        assert_eq!(backward_difference(&q), a());
    }

    #[test]
    fn cube_telescopes() {
        let p = a()
            .mul(&a())
            .scale(&int(3))
            .sub(&a().scale(&int(3)))
            .add(&BiPoly::one());
        assert_eq!(discrete_antiderivative(&p, 0), a().pow(3));
    }

    #[test]
    fn antiderivative_in_second_variable() {
        let p = a().mul(&b());
        let q = discrete_antiderivative(&p, 1);
        let shifted = q.compose(&[a(), b().sub(&BiPoly::one())]);
        assert_eq!(q.sub(&shifted), p);
    }

    #[test]
    fn stirling_row() {
        let s = stirling2_table(4);
        let row: Vec<Rat> = s[4].clone();
        assert_eq!(row, vec![int(0), int(1), int(7), int(6), int(1)]);
    }

    #[test]
    fn uni_division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let p = UniPoly::linear(int(1)).mul(&UniPoly::linear(int(2)));
        let q = UniPoly::linear(int(1)).mul(&UniPoly::linear(int(-3)));
        assert_eq!(p.gcd(&q), UniPoly::linear(int(1)));
        let (quo, rem) = p.divrem(&UniPoly::linear(int(2)));
        assert!(rem.is_zero());
        assert_eq!(quo, UniPoly::linear(int(1)));
        assert_eq!(p.shift(&int(1)).eval(&int(0)), int(0));
    }
}
