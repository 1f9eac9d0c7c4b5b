use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::poly::Rational;

/// `a + b·√d` with rational `a`, `b` and a fixed squarefree `d > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
    pub d: i64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: i64) -> Self {
        assert!(d > 1, "d must be a squarefree integer > 1");
        QuadExt { a, b, d }
    }

    pub fn rational(a: Rational, d: i64) -> Self {
        Self::new(a, Rational::zero(), d)
    }

    pub fn from_i64(a: i64, b: i64, d: i64) -> Self {
        Self::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()), d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign, decided by comparing `a²` with `b²d`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn scale(&self, s: &Rational) -> Self {
        QuadExt { a: &self.a * s, b: &self.b * s, d: self.d }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    fn check(&self, o: &QuadExt) {
        assert_eq!(self.d, o.d, "mixed quadratic extensions");
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        self.check(o);
        QuadExt { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d }
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        self.check(o);
        QuadExt { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d }
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        self.check(o);
        let d = Rational::from_integer(BigInt::from(self.d));
        QuadExt { a: &self.a * &o.a + &self.b * &o.b * d, b: &self.a * &o.b + &self.b * &o.a, d: self.d }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}*sqrt({})", self.a, sign, self.b.abs(), self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn sign_of_irrational_values() {
        // 3 - sqrt(6) > 0, 2 - sqrt(6) < 0
        assert!(QuadExt::from_i64(3, -1, 6).is_positive());
        assert!(QuadExt::from_i64(2, -1, 6).is_negative());
        assert!(QuadExt::new(rat(-5, 2), rat(1, 1), 6).is_negative());
    }

    #[test]
    fn ring_identity() {
        let x = QuadExt::from_i64(3, -1, 6);
        let y = QuadExt::from_i64(3, 1, 6);
        assert_eq!(&x * &y, QuadExt::from_i64(3, 0, 6));
    }
}
