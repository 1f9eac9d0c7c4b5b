//! Root finding: exact rational roots plus Aberth iteration for the rest.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::complex::{float_zero, pow2, ComplexMP, Float, MIN_PRECISION};
use super::rational::Rational;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Extra bits carried during iteration.
const GUARD_BITS: usize = 64;

#[derive(Clone, Debug)]
pub enum RootValue {
    Exact(Rational),
    Approx(ComplexMP),
}

impl RootValue {
    pub fn to_complex(&self, prec: usize) -> ComplexMP {
        match self {
            RootValue::Exact(q) => ComplexMP::from_rational(q, prec),
            RootValue::Approx(z) => z.with_precision(prec),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            RootValue::Exact(q) => Some(q),
            RootValue::Approx(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Root {
    pub value: RootValue,
    pub multiplicity: usize,
    /// `|p(root)|` relative to the coefficient scale; zero for exact roots.
    pub residual: f64,
}

/// Evaluates a complex-coefficient polynomial (increasing degree) and its derivative.
fn horner_with_derivative(coeffs: &[ComplexMP], z: &ComplexMP) -> (ComplexMP, ComplexMP) {
    let prec = z.precision();
    let mut p = ComplexMP::zero(prec);
    let mut dp = ComplexMP::zero(prec);
    for c in coeffs.iter().rev() {
        dp = &(&dp * z) + &p;
        p = &(&p * z) + c;
    }
    (p, dp)
}

/// `Σ |a_k| |z|^k`, the natural scale for the rounding error of `p(z)`.
fn eval_scale(coeffs: &[ComplexMP], z: &ComplexMP) -> Float {
    let az = z.abs();
    let mut acc = float_zero(z.precision());
    for c in coeffs.iter().rev() {
        acc = &acc * &az + c.abs();
    }
    acc
}

/// Aberth–Ehrlich iteration for all roots of a squarefree polynomial with
/// complex coefficients (increasing degree). Returns approximations at `prec`
/// bits together with their relative residuals.
pub fn aberth(coeffs: &[ComplexMP], prec: usize) -> Result<Vec<(ComplexMP, f64)>> {
    let prec = prec.max(MIN_PRECISION);
    let wp = prec + GUARD_BITS;
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let cs: Vec<ComplexMP> = coeffs.iter().map(|c| c.with_precision(wp)).collect();
    let lead = cs[n].clone();
    if lead.is_exact_zero() {
        return Err(Error::Precondition("leading coefficient vanishes".into()));
    }
    if n == 1 {
        let z = -(&cs[0] / &lead);
        return Ok(vec![(z.with_precision(prec), 0.0)]);
    }
    // Cauchy bound on the root moduli.
    let la = lead.abs();
    let mut bound = Float::from(1).with_precision(wp).value();
    for c in &cs[..n] {
        let r = c.abs() / &la;
        if r > bound {
            bound = r;
        }
    }
    let radius = &bound * Float::from(1).with_precision(wp).value();
    let step = ComplexMP::from_rationals(&Rational::new(3.into(), 5.into()), &Rational::new(4.into(), 5.into()), wp);
    let mut z = Vec::with_capacity(n);
    let mut w = ComplexMP::from_real(radius.clone()).with_precision(wp);
    // Shrink towards the root cloud: half the bound is a good start in practice.
    let half = Float::from_parts(1.into(), -1).with_precision(wp).value();
    w = w.scale(&half);
    for _ in 0..n {
        w = &w * &step;
        z.push(w.clone());
    }
    let tol_bits = wp as isize - 16;
    let tol = pow2(-tol_bits, wp);
    let mut done = vec![false; n];
    let max_iter = 400 + 20 * n;
    for _ in 0..max_iter {
        let mut all = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp) = horner_with_derivative(&cs, &z[k]);
            let scale = eval_scale(&cs, &z[k]);
            if p.abs() <= &scale * &tol {
                done[k] = true;
                continue;
            }
            all = false;
            if dp.is_exact_zero() {
                z[k] = &z[k] + &ComplexMP::from_i64(1, wp).scale(&pow2(-20, wp));
                continue;
            }
            let ratio = &p / &dp;
            let mut sum = ComplexMP::zero(wp);
            for j in 0..n {
                if j != k {
                    let d = &z[k] - &z[j];
                    if !d.is_exact_zero() {
                        sum = &sum + &d.inv();
                    }
                }
            }
            let denom = &ComplexMP::one(wp) - &(&ratio * &sum);
            let corr = if denom.is_exact_zero() { ratio } else { &ratio / &denom };
            z[k] = &z[k] - &corr;
        }
        if all {
            let out = z
                .iter()
                .map(|zk| {
                    let polished = newton_polish(&cs, zk, 2);
                    let (p, _) = horner_with_derivative(&cs, &polished);
                    let rel = relative(&p.abs(), &eval_scale(&cs, &polished));
                    (polished.with_precision(prec), rel)
                })
                .collect();
            return Ok(out);
        }
    }
    Err(Error::RootsDidNotConverge { iterations: max_iter, converged: done.iter().filter(|&&d| d).count(), degree: n })
}

fn newton_polish(cs: &[ComplexMP], z: &ComplexMP, steps: usize) -> ComplexMP {
    let mut z = z.clone();
    for _ in 0..steps {
        let (p, dp) = horner_with_derivative(cs, &z);
        if dp.is_exact_zero() || p.is_exact_zero() {
            break;
        }
        z = &z - &(&p / &dp);
    }
    z
}

fn relative(num: &Float, den: &Float) -> f64 {
    if super::complex::is_float_zero(num) {
        return 0.0;
    }
    let l = super::complex::log2_abs(num) - super::complex::log2_abs(den);
    2f64.powf(l)
}

/// Tries to identify `z` with a rational root of the integer polynomial `p`
/// (whose denominators divide `lead`), checking exactly.
fn recognize_rational(p: &UPoly, lead: &BigInt, z: &ComplexMP) -> Option<Rational> {
    let (re, im) = z.to_f64_pair();
    let mag = re.abs().max(1.0);
    if im.abs() > 1e-6 * mag {
        return None;
    }
    // Round lead·Re(z) to an integer using the full-precision real part.
    let scaled = z.re() * super::complex::float_from_int(lead, z.precision());
    let rounded = scaled.round();
    let (mant, exp) = rounded.repr().clone().into_parts();
    let mant = BigInt::from_signed_bytes_le(&mant.to_le_bytes());
    let n = if exp >= 0 { mant << exp as usize } else { mant >> (-exp) as usize };
    let cand = Rational::new(n, lead.clone());
    p.eval(&cand).is_zero().then_some(cand)
}

/// All roots of `p` with multiplicity. Rational roots are returned exactly;
/// the others are Aberth approximations at `prec` bits.
pub fn roots(p: &UPoly, prec: usize) -> Result<Vec<Root>> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Err(Error::Precondition("roots of a constant polynomial".into()));
    }
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        let prim = factor.primitive();
        let lead = prim.lead().expect("nonconstant").to_integer();
        let cs: Vec<ComplexMP> = prim.coeffs().iter().map(|q| ComplexMP::from_rational(q, prec + GUARD_BITS)).collect();
        let approx = aberth(&cs, prec)?;
        let mut rest = prim.clone();
        let mut numeric = Vec::new();
        for (z, res) in approx {
            match recognize_rational(&prim, &lead, &z) {
                Some(q) if rest.eval(&q).is_zero() => {
                    rest = rest.div_exact(&UPoly::linear_root(&q)).expect("exact root divides");
                    out.push(Root { value: RootValue::Exact(q), multiplicity: mult, residual: 0.0 });
                }
                _ => numeric.push((z, res)),
            }
        }
        for (z, res) in numeric {
            out.push(Root { value: RootValue::Approx(z), multiplicity: mult, residual: res });
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Deterministic order: exact roots first (ascending), then approximations
/// by real then imaginary part.
pub fn sort_roots(rs: &mut [Root]) {
    rs.sort_by(|a, b| match (&a.value, &b.value) {
        (RootValue::Exact(x), RootValue::Exact(y)) => x.cmp(y),
        (RootValue::Exact(_), RootValue::Approx(_)) => std::cmp::Ordering::Less,
        (RootValue::Approx(_), RootValue::Exact(_)) => std::cmp::Ordering::Greater,
        (RootValue::Approx(x), RootValue::Approx(y)) => x.lexicographic_cmp(y),
    });
}

/// Roots of a complex-coefficient polynomial assumed squarefree.
pub fn roots_complex(coeffs: &[ComplexMP], prec: usize) -> Result<Vec<(ComplexMP, f64)>> {
    let mut cs = coeffs.to_vec();
    while cs.last().is_some_and(ComplexMP::is_exact_zero) {
        cs.pop();
    }
    let mut r = aberth(&cs, prec)?;
    r.sort_by(|a, b| a.0.lexicographic_cmp(&b.0));
    Ok(r)
}

/// Relative residual of `p` at a complex point.
pub fn residual(p: &UPoly, z: &ComplexMP) -> f64 {
    let cs: Vec<ComplexMP> = p.coeffs().iter().map(|q| ComplexMP::from_rational(q, z.precision())).collect();
    let (v, _) = horner_with_derivative(&cs, z);
    relative(&v.abs(), &eval_scale(&cs, z))
}

/// Converts a rational to f64, saturating.
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::complex::float_abs;
    use crate::poly::rational::rat;

    #[test]
    fn sqrt_six() {
        let p = UPoly::from_i64(&[-6, 0, 1]);
        let rs = roots(&p, 256).unwrap();
        assert_eq!(rs.len(), 2);
        let target = Float::from(6).with_precision(256).value().sqrt();
        for r in &rs {
            let z = r.value.to_complex(256);
            let err = float_abs(&(float_abs(z.re()) - &target));
            assert!(err < pow2(-166, 256));
            assert!(float_abs(z.im()) < pow2(-166, 256));
            assert!(r.residual < 1e-60);
        }
    }

    #[test]
    fn exact_triple_root() {
        let l = UPoly::from_i64(&[-1, 2]);
        let p = &(&l * &l) * &l;
        let rs = roots(&p, 128).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].value.as_exact(), Some(&rat(1, 2)));
        assert_eq!(rs[0].multiplicity, 3);
    }

    #[test]
    fn mixed_rational_and_irrational() {
        // (3x + 2)(x^2 + x + 1)(x - 7)
        let p = &(&UPoly::from_i64(&[2, 3]) * &UPoly::from_i64(&[1, 1, 1])) * &UPoly::from_i64(&[-7, 1]);
        let rs = roots(&p, 200).unwrap();
        let exact: Vec<_> = rs.iter().filter_map(|r| r.value.as_exact().cloned()).collect();
        assert_eq!(exact, vec![rat(-2, 3), rat(7, 1)]);
        assert_eq!(rs.iter().map(|r| r.multiplicity).sum::<usize>(), 4);
    }
}
