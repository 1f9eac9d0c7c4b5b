//! Schubert calculus on `G(2, n)` with two-row partitions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer combination of Schubert classes `σ_(a,b)` with `n−2 ≥ a ≥ b ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertCycle {
    pub n: u32,
    pub terms: BTreeMap<(u32, u32), i64>,
}

impl SchubertCycle {
    pub fn zero(n: u32) -> Self {
        assert!(n >= 2, "G(2,n) needs n >= 2");
        SchubertCycle { n, terms: BTreeMap::new() }
    }

    pub fn one(n: u32) -> Self {
        Self::sigma(n, 0, 0)
    }

    /// `σ_(a,b)`; zero when the partition leaves the `2 × (n−2)` box.
    pub fn sigma(n: u32, a: u32, b: u32) -> Self {
        assert!(a >= b, "partitions are weakly decreasing");
        let mut c = Self::zero(n);
        c.add_term((a, b), 1);
        c
    }

    /// Special class `σ_k`.
    pub fn special(n: u32, k: u32) -> Self {
        Self::sigma(n, k, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, (a, b): (u32, u32), c: i64) {
        if c == 0 || a > self.n - 2 {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, o: &SchubertCycle) -> Result<SchubertCycle> {
        self.same_ambient(o)?;
        let mut out = self.clone();
        for (&p, &c) in &o.terms {
            out.add_term(p, c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: i64) -> SchubertCycle {
        let mut out = Self::zero(self.n);
        for (&p, &c) in &self.terms {
            out.add_term(p, c * s);
        }
        out
    }

    /// Codimensions `a + b` of the terms.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|(a, b)| a + b).collect();
        d.dedup();
        d
    }

    pub fn top_degree(&self) -> u32 {
        2 * (self.n - 2)
    }

    fn same_ambient(&self, o: &SchubertCycle) -> Result<()> {
        if self.n != o.n {
            return Err(Error::AmbientMismatch(self.n, o.n));
        }
        Ok(())
    }

    /// Pieri: `σ_k · σ_(a,b) = Σ σ_(c,d)` over `c + d = a + b + k`,
    /// `a ≤ c ≤ n−2`, `b ≤ d ≤ a`.
    fn pieri(&self, k: i64) -> SchubertCycle {
        let mut out = Self::zero(self.n);
        if k < 0 {
            return out;
        }
        let k = k as u32;
        for (&(a, b), &coef) in &self.terms {
            let total = a + b + k;
            for d in b..=a {
                let Some(c) = total.checked_sub(d) else { continue };
                if c >= a && c <= self.n - 2 && c >= d {
                    out.add_term((c, d), coef);
                }
            }
        }
        out
    }

    /// Product with `σ_(a,b)` via Giambelli `σ_(a,b) = σ_a σ_b − σ_(a+1) σ_(b−1)`.
    fn mul_partition(&self, a: u32, b: u32) -> SchubertCycle {
        let first = self.pieri(b as i64).pieri(a as i64);
        if b == 0 {
            return first;
        }
        let second = self.pieri(b as i64 - 1).pieri(a as i64 + 1);
        first.add(&second.scale(-1)).expect("same ambient")
    }

    pub fn multiply(&self, o: &SchubertCycle) -> Result<SchubertCycle> {
        self.same_ambient(o)?;
        let mut out = Self::zero(self.n);
        for (&(a, b), &c) in &o.terms {
            out = out.add(&self.mul_partition(a, b).scale(c))?;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> SchubertCycle {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = acc.multiply(self).expect("same ambient");
        }
        acc
    }
}

impl fmt::Display for SchubertCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(a, b), &c)| {
                let name = if b == 0 { format!("σ{a}") } else { format!("σ{a}{b}") };
                if c == 1 {
                    name
                } else {
                    format!("{c}·{name}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `c₄(Sym³ S∨) = 9σ₁₁(2σ₁² + σ₁₁)` on `G(2, n)`.
///
/// With Chern roots `a, b` of `S∨`, the roots of `Sym³` are `3a, 2a+b, a+2b, 3b`
/// and their product is `9ab(2(a+b)² + ab)`.
pub fn chern_sym3(n: u32) -> SchubertCycle {
    let s1 = SchubertCycle::special(n, 1);
    let s11 = SchubertCycle::sigma(n, 1, 1);
    let inner = s1.pow(2).scale(2).add(&s11).expect("same ambient");
    s11.multiply(&inner).expect("same ambient").scale(9)
}

/// Degree of a top-dimensional class.
pub fn integrate(c: &SchubertCycle) -> Result<i64> {
    let top = c.top_degree();
    if let Some(&d) = c.degrees().iter().find(|&&d| d != top) {
        return Err(Error::WrongDegree { expected: top, found: d });
    }
    Ok(c.terms.get(&(c.n - 2, c.n - 2)).copied().unwrap_or(0))
}

/// One line of the `deg-fano` trace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanoDegree {
    pub ambient: u32,
    pub class: String,
    pub integrand: String,
    pub degree: i64,
}

/// Number of lines on a cubic surface (`n = 4`) or degree of the Fano
/// surface of a cubic threefold (`n = 5`, integrating against `σ₁²`).
pub fn fano_degree(n: u32) -> Result<FanoDegree> {
    let c4 = chern_sym3(n);
    let integrand = match n {
        4 => c4.clone(),
        5 => c4.multiply(&SchubertCycle::special(5, 1).pow(2))?,
        _ => return Err(Error::Precondition(format!("deg-fano supports n = 4 or 5, got {n}"))),
    };
    Ok(FanoDegree {
        ambient: n,
        class: c4.to_string(),
        integrand: integrand.to_string(),
        degree: integrate(&integrand)?,
    })
}

/// Plücker degree of a surface `X ⊂ Pᴺ` of degree `base_degree` mapped to
/// the Grassmannian by forms of degree `twist`: `twist² · base_degree`.
pub fn pulled_back_degree(twist: u32, base_degree: u32) -> i64 {
    i64::from(twist) * i64::from(twist) * i64::from(base_degree)
}

/// Plücker degrees of the three families of lines on the determinantal
/// cubic threefold: the plane `P(V)`, the cubic surface `S`, the dual plane,
/// each embedded by cubics.
pub fn line_family_degrees() -> [(&'static str, i64); 3] {
    [("P(V)", pulled_back_degree(3, 1)), ("S", pulled_back_degree(3, 3)), ("P(V*)", pulled_back_degree(3, 1))]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pieri_examples() {
        let s1 = SchubertCycle::special(5, 1);
        let sq = s1.multiply(&s1).unwrap();
        assert_eq!(sq, SchubertCycle::sigma(5, 2, 0).add(&SchubertCycle::sigma(5, 1, 1)).unwrap());
        let p = SchubertCycle::sigma(5, 1, 1).multiply(&SchubertCycle::sigma(5, 2, 2)).unwrap();
        assert_eq!(p, SchubertCycle::sigma(5, 3, 3));
        assert!(SchubertCycle::special(5, 2).multiply(&SchubertCycle::sigma(5, 2, 2)).unwrap().is_zero());
    }

    #[test]
    fn classical_numbers() {
        assert_eq!(integrate(&chern_sym3(4)).unwrap(), 27);
        assert_eq!(fano_degree(5).unwrap().degree, 45);
        assert_eq!(integrate(&SchubertCycle::sigma(6, 4, 4)).unwrap(), 1);
        assert!(matches!(integrate(&SchubertCycle::special(5, 1)), Err(Error::WrongDegree { .. })));
        assert_eq!(integrate(&SchubertCycle::special(4, 1).pow(4)).unwrap(), 2);
    }

    #[test]
    fn families_sum_to_fano_degree() {
        let d = line_family_degrees();
        assert_eq!(d.map(|(_, k)| k), [9, 27, 9]);
        assert_eq!(d.iter().map(|(_, k)| k).sum::<i64>(), fano_degree(5).unwrap().degree);
    }

    #[test]
    fn ambient_mismatch() {
        assert!(matches!(
            SchubertCycle::special(4, 1).multiply(&SchubertCycle::special(5, 1)),
            Err(Error::AmbientMismatch(4, 5))
        ));
    }
}
