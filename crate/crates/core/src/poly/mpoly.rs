//! Sparse multivariate polynomials over an exact or numeric coefficient ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::complex::ComplexMP;
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Ring operations needed by [`Poly`].
pub trait Coeff: Clone + fmt::Debug + Send + Sync {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

impl Coeff for Rational {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_one() -> Self {
        One::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Coeff for ComplexMP {
    fn c_zero() -> Self {
        ComplexMP::zero(super::complex::MIN_PRECISION)
    }
    fn c_one() -> Self {
        ComplexMP::one(super::complex::MIN_PRECISION)
    }
    fn c_is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn from_i64(n: i64) -> Self {
        ComplexMP::from_i64(n, super::complex::MIN_PRECISION)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

/// Polynomials with exact rational coefficients.
pub type MPoly = Poly<Rational>;
/// Polynomials with multiprecision complex coefficients.
pub type CPoly = Poly<ComplexMP>;

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::c_one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, C::c_one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: C) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    /// Linear form `Σ cᵢ xᵢ`.
    pub fn linear(coeffs: &[C]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&C> {
        self.terms.get(exps)
    }

    pub fn coeff_or_zero(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::c_zero)
    }

    /// Adds `c·x^exps`, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: Monomial, c: C) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.c_is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let s = existing.add_ref(&c);
                if s.c_is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Degree if every term has the same total degree; `None` otherwise (and for zero).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == d).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c.mul_ref(s))))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let maxdeg: Vec<u32> = (0..self.nvars).map(|i| self.degree_in(i).unwrap_or(0)).collect();
        let powers: Vec<Vec<C>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut pw = Vec::with_capacity(d as usize + 1);
                pw.push(C::c_one());
                for k in 1..=d as usize {
                    let next = pw[k - 1].mul_ref(x);
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = C::c_zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul_ref(&powers[i][k as usize]);
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[var] -= 1;
            p.add_term(f, c.mul_ref(&C::from_i64(e[var] as i64)));
        }
        p
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Substitutes `xᵢ ↦ subs[i]`; all substitutes share one variable count.
    pub fn compose(&self, subs: &[Poly<C>]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::VariableMismatch(subs.len(), self.nvars));
        }
        let m = subs.first().map_or(0, |s| s.nvars);
        if subs.iter().any(|s| s.nvars != m) {
            return Err(Error::VariableMismatch(m, subs.iter().map(|s| s.nvars).max().unwrap_or(0)));
        }
        let mut powers: Vec<Vec<Poly<C>>> = subs.iter().map(|s| vec![Poly::one(m), s.clone()]).collect();
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Sets variable `var` to the constant `value`, keeping the variable count.
    pub fn substitute_value(&self, var: usize, value: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[var];
            f[var] = 0;
            let mut t = c.clone();
            for _ in 0..k {
                t = t.mul_ref(value);
            }
            out.add_term(f, t);
        }
        out
    }

    /// Coefficients as a polynomial in `var`: entry `k` multiplies `x_var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[var] as usize;
            f[var] = 0;
            out[k].add_term(f, c.clone());
        }
        out
    }

    /// Drops variable `var`, which must not occur.
    pub fn drop_variable(&self, var: usize) -> Self {
        Self::from_terms(
            self.nvars - 1,
            self.terms.iter().map(|(e, c)| {
                debug_assert_eq!(e[var], 0);
                let mut f = e.clone();
                f.remove(var);
                (f, c.clone())
            }),
        )
    }

    /// Inserts a fresh variable at position `var` that does not occur.
    pub fn insert_variable(&self, var: usize) -> Self {
        Self::from_terms(
            self.nvars + 1,
            self.terms.iter().map(|(e, c)| {
                let mut f = e.clone();
                f.insert(var, 0);
                (f, c.clone())
            }),
        )
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Restriction to the span of `basis`: `t ↦ f(Σ tⱼ basisⱼ)`.
    pub fn restrict_linear(&self, basis: &[Vec<C>]) -> Result<Self> {
        let k = basis.len();
        let mut subs = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let coeffs: Vec<C> = basis
                .iter()
                .map(|b| b.get(i).cloned().ok_or(Error::VariableMismatch(b.len(), self.nvars)))
                .collect::<Result<_>>()?;
            subs.push(Poly::linear(&coeffs));
        }
        if k == 0 {
            return Ok(Poly::zero(0));
        }
        self.compose(&subs)
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, o: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, o.nvars);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, o: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, o.nvars);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.neg_ref());
        }
        p
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, o: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, o.nvars);
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.mul_ref(c2));
            }
        }
        p
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c.neg_ref())))
    }
}

macro_rules! forward_poly_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, o: Poly<C>) -> Poly<C> {
                (&self).$m(&o)
            }
        }
        impl<C: Coeff> $tr<&Poly<C>> for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, o: &Poly<C>) -> Poly<C> {
                (&self).$m(o)
            }
        }
    };
}
forward_poly_owned!(Add, add);
forward_poly_owned!(Sub, sub);
forward_poly_owned!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl MPoly {
    pub fn from_i64_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), Rational::from_integer((*c).into()))))
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert_eq!(self.nvars, d.nvars);
        let (lead_e, lead_c) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Monomial = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            let t = MPoly::monomial(self.nvars, qe, qc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    pub fn to_complex(&self, prec: usize) -> CPoly {
        self.map_coeffs(|q| ComplexMP::from_rational(q, prec))
    }

    pub fn eval_complex(&self, point: &[ComplexMP]) -> ComplexMP {
        let prec = point.iter().map(ComplexMP::precision).max().unwrap_or(super::complex::MIN_PRECISION);
        self.to_complex(prec).eval(point)
    }

    /// Maximum absolute coefficient as an f64 approximation.
    pub fn max_abs_coeff_f64(&self) -> f64 {
        use num_traits::{Signed, ToPrimitive};
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }

    pub fn to_json_value(&self) -> PolyJson {
        PolyJson {
            vars: self.nvars,
            terms: self.graded_terms().into_iter().map(|(e, c)| (e.clone(), format_rational(c))).collect(),
        }
    }

    pub fn from_json_value(j: &PolyJson) -> Result<MPoly> {
        let mut p = MPoly::zero(j.vars);
        for (e, c) in &j.terms {
            if e.len() != j.vars {
                return Err(Error::VariableMismatch(e.len(), j.vars));
            }
            p.add_term(e.clone(), parse_rational(c)?);
        }
        Ok(p)
    }

    /// Terms in graded-lex order, highest first.
    pub fn graded_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

/// JSON shape `{"vars": n, "terms": [[[e…], "num/den"], …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: usize,
    pub terms: Vec<(Monomial, String)>,
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        MPoly::from_json_value(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.graded_terms() {
            let (sign, mag) = if *c < Rational::zero() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poly").field("nvars", &self.nvars).field("terms", &self.terms).finish()
    }
}
