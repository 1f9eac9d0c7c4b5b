//! Multiprecision complex numbers on top of binary `dashu` floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::{round::mode::HalfAway, FBig};
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};

use super::rational::Rational;

pub type Float = FBig<HalfAway, 2>;

/// Minimum working precision in bits.
pub const MIN_PRECISION: usize = 64;
/// Default precision for numeric paths.
pub const DEFAULT_PRECISION: usize = 256;

pub fn to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn float_from_int(n: &BigInt, prec: usize) -> Float {
    Float::from(to_ibig(n)).with_precision(prec).value()
}

pub fn float_from_rational(q: &Rational, prec: usize) -> Float {
    let num = float_from_int(q.numer(), prec);
    let den = float_from_int(q.denom(), prec);
    num / den
}

pub fn float_zero(prec: usize) -> Float {
    Float::ZERO.with_precision(prec).value()
}

/// `2^exp` at the given precision.
pub fn pow2(exp: isize, prec: usize) -> Float {
    Float::from_parts(IBig::from(1), exp).with_precision(prec).value()
}

pub fn float_to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

pub fn float_abs(x: &Float) -> Float {
    if x.sign() == dashu_int::Sign::Negative {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn is_float_zero(x: &Float) -> bool {
    x.repr().significand().is_zero()
}

/// Rough base-2 logarithm of |x|; `-inf` for zero.
pub fn log2_abs(x: &Float) -> f64 {
    if is_float_zero(x) {
        return f64::NEG_INFINITY;
    }
    x.repr().digits() as f64 + x.repr().exponent() as f64
}

#[derive(Clone, PartialEq)]
pub struct ComplexMP {
    re: Float,
    im: Float,
}

impl ComplexMP {
    pub fn new(re: Float, im: Float) -> Self {
        ComplexMP { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        ComplexMP { re: float_zero(prec), im: float_zero(prec) }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        ComplexMP { re: Float::from(n).with_precision(prec).value(), im: float_zero(prec) }
    }

    pub fn from_rational(q: &Rational, prec: usize) -> Self {
        ComplexMP { re: float_from_rational(q, prec), im: float_zero(prec) }
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: usize) -> Self {
        ComplexMP { re: float_from_rational(re, prec), im: float_from_rational(im, prec) }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.precision();
        ComplexMP { re, im: float_zero(prec.max(MIN_PRECISION)) }
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        ComplexMP { re: self.re.clone().with_precision(prec).value(), im: self.im.clone().with_precision(prec).value() }
    }

    pub fn is_exact_zero(&self) -> bool {
        is_float_zero(&self.re) && is_float_zero(&self.im)
    }

    pub fn conj(&self) -> Self {
        ComplexMP { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Float {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Float {
        let n = self.norm_sqr();
        if is_float_zero(&n) {
            return n;
        }
        n.sqrt()
    }

    /// Principal square root, computing the larger part first to avoid cancellation.
    pub fn sqrt(&self) -> Self {
        let prec = self.precision();
        if self.is_exact_zero() {
            return self.clone();
        }
        let r = self.abs();
        let half = pow2(-1, prec);
        let zero = float_zero(prec);
        let nonneg_sqrt = |x: Float| if x > zero { x.sqrt() } else { float_zero(prec) };
        if self.re >= zero {
            let a = nonneg_sqrt((&r + &self.re) * &half);
            let b = if is_float_zero(&a) { float_zero(prec) } else { &self.im * &half / &a };
            ComplexMP { re: a, im: b }
        } else {
            let b_mag = nonneg_sqrt((&r - &self.re) * &half);
            let im_abs = if self.im < zero { -self.im.clone() } else { self.im.clone() };
            let a = if is_float_zero(&b_mag) { float_zero(prec) } else { im_abs * &half / &b_mag };
            let b = if self.im < zero { -b_mag } else { b_mag };
            ComplexMP { re: a, im: b }
        }
    }

    pub fn abs_f64(&self) -> f64 {
        float_to_f64(&self.abs())
    }

    pub fn log2_abs(&self) -> f64 {
        log2_abs(&self.re).max(log2_abs(&self.im))
    }

    pub fn scale(&self, s: &Float) -> Self {
        ComplexMP { re: &self.re * s, im: &self.im * s }
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        ComplexMP { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (float_to_f64(&self.re), float_to_f64(&self.im))
    }

    /// Total order used only to make outputs deterministic.
    pub fn lexicographic_cmp(&self, other: &Self) -> Ordering {
        self.re
            .partial_cmp(&other.re)
            .unwrap_or(Ordering::Equal)
            .then(self.im.partial_cmp(&other.im).unwrap_or(Ordering::Equal))
    }

    /// Whether `|self| <= tol`.
    pub fn within(&self, tol: &Float) -> bool {
        self.norm_sqr() <= tol * tol
    }
}

impl fmt::Debug for ComplexMP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "({re:e}{:+e}i)", im)
    }
}

impl fmt::Display for ComplexMP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &ComplexMP {
    type Output = ComplexMP;
    fn add(self, o: &ComplexMP) -> ComplexMP {
        ComplexMP { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &ComplexMP {
    type Output = ComplexMP;
    fn sub(self, o: &ComplexMP) -> ComplexMP {
        ComplexMP { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &ComplexMP {
    type Output = ComplexMP;
    fn mul(self, o: &ComplexMP) -> ComplexMP {
        ComplexMP { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Div for &ComplexMP {
    type Output = ComplexMP;
    fn div(self, o: &ComplexMP) -> ComplexMP {
        let n = o.norm_sqr();
        ComplexMP { re: (&self.re * &o.re + &self.im * &o.im) / &n, im: (&self.im * &o.re - &self.re * &o.im) / &n }
    }
}

impl Neg for &ComplexMP {
    type Output = ComplexMP;
    fn neg(self) -> ComplexMP {
        ComplexMP { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ComplexMP {
            type Output = ComplexMP;
            fn $m(self, o: ComplexMP) -> ComplexMP {
                (&self).$m(&o)
            }
        }
        impl $tr<&ComplexMP> for ComplexMP {
            type Output = ComplexMP;
            fn $m(self, o: &ComplexMP) -> ComplexMP {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ComplexMP {
    type Output = ComplexMP;
    fn neg(self) -> ComplexMP {
        -&self
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[ComplexMP]) -> Float {
    let prec = v.iter().map(ComplexMP::precision).max().unwrap_or(MIN_PRECISION);
    let s = v.iter().fold(float_zero(prec), |acc, z| acc + z.norm_sqr());
    if is_float_zero(&s) {
        s
    } else {
        s.sqrt()
    }
}

/// Scales a vector so its largest-modulus entry is 1.
pub fn normalize_max(v: &[ComplexMP]) -> Vec<ComplexMP> {
    let mut best = 0;
    let mut best_n = None::<Float>;
    for (i, z) in v.iter().enumerate() {
        let n = z.norm_sqr();
        if best_n.as_ref().is_none_or(|b| n > *b) {
            best = i;
            best_n = Some(n);
        }
    }
    if v.is_empty() || v[best].is_exact_zero() {
        return v.to_vec();
    }
    let pivot = v[best].clone();
    v.iter().map(|z| z / &pivot).collect()
}

pub fn cvec_from_rational(v: &[Rational], prec: usize) -> Vec<ComplexMP> {
    v.iter().map(|q| ComplexMP::from_rational(q, prec)).collect()
}

/// Serializes complex vectors as `[[re, im], …]` in f64 (output only).
pub mod serde_f64 {
    use serde::ser::{SerializeSeq, Serializer};

    use super::ComplexMP;

    pub fn serialize<S: Serializer>(v: &[ComplexMP], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for z in v {
            let (re, im) = z.to_f64_pair();
            seq.serialize_element(&[re, im])?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;

    #[test]
    fn arithmetic_roundtrip() {
        let p = 256;
        let a = ComplexMP::from_rationals(&rat(1, 3), &rat(-2, 7), p);
        let b = ComplexMP::from_rationals(&rat(5, 2), &rat(1, 9), p);
        let c = &(&a * &b) / &b;
        let err = (&c - &a).abs();
        assert!(err < pow2(-240, p));
        let inv = a.inv();
        let one = &a * &inv;
        assert!((&one - &ComplexMP::one(p)).abs() < pow2(-240, p));
    }

    #[test]
    fn big_integer_conversion() {
        let n: BigInt = "-123456789012345678901234567890123".parse().unwrap();
        let f = float_from_int(&n, 256);
        let back = float_to_f64(&f);
        assert!((back + 1.2345678901234568e32).abs() / 1.2e32 < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let prec = 256;
        let tiny = pow2(-300, prec);
        let cases = [
            ComplexMP::new(Float::from(-4), float_zero(prec)),
            ComplexMP::new(Float::from(-4), tiny.clone()),
            ComplexMP::new(Float::from(-4), -tiny),
            ComplexMP::new(Float::from(3), Float::from(-4)),
            ComplexMP::new(Float::from(-3), Float::from(4)),
        ];
        for z in cases {
            let z = ComplexMP::new(z.re.with_precision(prec).value(), z.im.with_precision(prec).value());
            let w = z.sqrt();
            assert!(w.re >= float_zero(prec));
            assert!((&(&w * &w) - &z).abs_f64() < 1e-70, "{z:?}");
        }
    }

    #[test]
    fn precision_is_tracked() {
        let a = ComplexMP::from_i64(2, 300);
        let b = ComplexMP::from_i64(3, MIN_PRECISION);
        assert_eq!((&a / &b).precision(), 300);
    }
}
