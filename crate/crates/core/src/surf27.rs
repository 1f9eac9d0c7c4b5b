//! Line classes on a cubic surface in `Z L ⊕ Z E₁ ⊕ … ⊕ Z E₆` with
//! `L² = 1`, `Eᵢ·Eⱼ = −δᵢⱼ`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `d·L + Σ mᵢ·Eᵢ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PicClass {
    pub d: i64,
    pub m: [i64; 6],
}

impl PicClass {
    pub const fn new(d: i64, m: [i64; 6]) -> Self {
        PicClass { d, m }
    }

    pub const fn l() -> Self {
        PicClass { d: 1, m: [0; 6] }
    }

    /// `Eᵢ` for `i` in `1..=6`.
    pub fn e(i: usize) -> Self {
        assert!((1..=6).contains(&i), "E index out of range");
        let mut m = [0; 6];
        m[i - 1] = 1;
        PicClass { d: 0, m }
    }

    /// Canonical class `−3L + ΣEᵢ`.
    pub const fn canonical() -> Self {
        PicClass { d: -3, m: [1; 6] }
    }

    pub fn dot(&self, o: &PicClass) -> i64 {
        self.d * o.d - self.m.iter().zip(&o.m).map(|(a, b)| a * b).sum::<i64>()
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn is_line(&self) -> bool {
        self.square() == -1 && self.dot(&Self::canonical()) == -1
    }

    fn coords(&self) -> [i64; 7] {
        let mut c = [0; 7];
        c[0] = self.d;
        c[1..].copy_from_slice(&self.m);
        c
    }

    fn from_coords(c: [i64; 7]) -> Self {
        PicClass { d: c[0], m: c[1..].try_into().expect("six entries") }
    }

    fn exact_div(&self, k: i64) -> Option<PicClass> {
        let c = self.coords();
        if c.iter().any(|x| x % k != 0) {
            return None;
        }
        Some(Self::from_coords(c.map(|x| x / k)))
    }
}

impl Add for PicClass {
    type Output = PicClass;
    fn add(self, o: PicClass) -> PicClass {
        let (a, b) = (self.coords(), o.coords());
        Self::from_coords(std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl Sub for PicClass {
    type Output = PicClass;
    fn sub(self, o: PicClass) -> PicClass {
        self + (-o)
    }
}

impl Neg for PicClass {
    type Output = PicClass;
    fn neg(self) -> PicClass {
        Self::from_coords(self.coords().map(|x| -x))
    }
}

impl Mul<PicClass> for i64 {
    type Output = PicClass;
    fn mul(self, c: PicClass) -> PicClass {
        PicClass::from_coords(c.coords().map(|x| self * x))
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        match self.d {
            0 => {}
            1 => out.push('L'),
            -1 => out.push_str("-L"),
            d => out.push_str(&format!("{d}L")),
        }
        for (i, &c) in self.m.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            out.push_str(&format!("{sign}{mag}E{}", i + 1));
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// The 27 line classes: `Eᵢ`, `L − Eᵢ − Eⱼ`, `2L − Σ_{j≠i} Eⱼ`, in that order.
pub fn line_classes() -> Vec<PicClass> {
    let mut out: Vec<PicClass> = (1..=6).map(PicClass::e).collect();
    for i in 1..=6 {
        for j in i + 1..=6 {
            out.push(PicClass::l() - PicClass::e(i) - PicClass::e(j));
        }
    }
    for i in 1..=6 {
        out.push(conic_class(i));
    }
    out
}

/// `2L − Σ_{j≠i} Eⱼ`.
fn conic_class(i: usize) -> PicClass {
    let mut m = [-1; 6];
    m[i - 1] = 0;
    PicClass { d: 2, m }
}

/// Six pairwise disjoint line classes, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sextuple(pub [PicClass; 6]);

impl Sextuple {
    pub fn new(mut lines: [PicClass; 6]) -> Result<Self> {
        let ok =
            lines.iter().all(PicClass::is_line) && (0..6).all(|i| (i + 1..6).all(|j| lines[i].dot(&lines[j]) == 0));
        if !ok {
            return Err(Error::NotASextuple);
        }
        lines.sort();
        Ok(Sextuple(lines))
    }

    pub fn exceptional() -> Self {
        Sextuple(std::array::from_fn(|i| PicClass::e(i + 1))).sorted()
    }

    fn sorted(mut self) -> Self {
        self.0.sort();
        self
    }
}

/// All unordered sextuples of pairwise disjoint lines.
pub fn disjoint_sextuples() -> Vec<Sextuple> {
    let lines = line_classes();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(6);
    extend_disjoint(&lines, 0, &mut stack, &mut out);
    out.sort();
    out
}

fn extend_disjoint(lines: &[PicClass], start: usize, stack: &mut Vec<usize>, out: &mut Vec<Sextuple>) {
    if stack.len() == 6 {
        let s: [PicClass; 6] = std::array::from_fn(|i| lines[stack[i]]);
        out.push(Sextuple(s).sorted());
        return;
    }
    for i in start..lines.len() {
        if stack.iter().all(|&j| lines[j].dot(&lines[i]) == 0) {
            stack.push(i);
            extend_disjoint(lines, i + 1, stack, out);
            stack.pop();
        }
    }
}

/// Integer 7×7 matrix acting on `(d; m₁…m₆)` coordinates; column `j` is the
/// image of the `j`-th basis class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicAutomorphism {
    pub matrix: [[i64; 7]; 7],
}

impl PicAutomorphism {
    pub fn identity() -> Self {
        PicAutomorphism { matrix: std::array::from_fn(|i| std::array::from_fn(|j| i64::from(i == j))) }
    }

    pub fn apply(&self, c: &PicClass) -> PicClass {
        let x = c.coords();
        PicClass::from_coords(std::array::from_fn(|i| (0..7).map(|j| self.matrix[i][j] * x[j]).sum()))
    }

    pub fn compose(&self, o: &PicAutomorphism) -> PicAutomorphism {
        PicAutomorphism {
            matrix: std::array::from_fn(|i| {
                std::array::from_fn(|j| (0..7).map(|k| self.matrix[i][k] * o.matrix[k][j]).sum())
            }),
        }
    }

    fn basis() -> [PicClass; 7] {
        std::array::from_fn(|i| if i == 0 { PicClass::l() } else { PicClass::e(i) })
    }

    pub fn is_isometry(&self) -> bool {
        let b = Self::basis();
        b.iter().all(|x| b.iter().all(|y| self.apply(x).dot(&self.apply(y)) == x.dot(y)))
    }

    pub fn fixes_canonical(&self) -> bool {
        self.apply(&PicClass::canonical()) == PicClass::canonical()
    }
}

/// The involution exchanging a sextuple `A₁…A₆` with its partner, given in
/// the blow-down basis `L' = (ΣAᵢ − K)/3` by `Aᵢ ↦ 2L' − Σ_{j≠i} Aⱼ`,
/// `L' ↦ 5L' − 2ΣAⱼ`.
pub fn double_six_involution(s: &Sextuple) -> Result<PicAutomorphism> {
    let s = Sextuple::new(s.0)?;
    let sum_a = s.0.iter().fold(PicClass::new(0, [0; 6]), |acc, &a| acc + a);
    let lp = (sum_a - PicClass::canonical()).exact_div(3).ok_or(Error::NotASextuple)?;
    let image_of = |a: PicClass| 2 * lp - (sum_a - a);
    let lp_image = 5 * lp - 2 * sum_a;

    // Express the standard basis in (L', A) coordinates: x = (x·L') L' − Σ (x·Aᵢ) Aᵢ.
    let basis = PicAutomorphism::basis();
    let mut matrix = [[0i64; 7]; 7];
    for (j, b) in basis.iter().enumerate() {
        let mut img = b.dot(&lp) * lp_image;
        for &a in &s.0 {
            img = img + (-b.dot(&a)) * image_of(a);
        }
        for (i, v) in img.coords().into_iter().enumerate() {
            matrix[i][j] = v;
        }
    }
    Ok(PicAutomorphism { matrix })
}

/// The partner sextuple `Bᵢ = 2L' − Σ_{j≠i} Aⱼ`.
pub fn partner(s: &Sextuple) -> Result<Sextuple> {
    let inv = double_six_involution(s)?;
    Sextuple::new(s.0.map(|a| inv.apply(&a)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleSix {
    pub first: Sextuple,
    pub second: Sextuple,
}

/// The 36 double-sixes, each listed once with `first < second`.
pub fn double_sixes() -> Vec<DoubleSix> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in disjoint_sextuples() {
        let p = partner(&s).expect("enumerated sextuples are valid");
        let (first, second) = if s <= p { (s, p) } else { (p, s) };
        if seen.insert(first.clone()) {
            out.push(DoubleSix { first, second });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Enumeration {
    pub lines: Vec<String>,
    pub line_coords: Vec<PicClass>,
    pub sextuples: usize,
    pub double_sixes: Vec<[Vec<String>; 2]>,
}

pub fn enumerate() -> Enumeration {
    let lines = line_classes();
    let names = |s: &Sextuple| s.0.iter().map(ToString::to_string).collect::<Vec<_>>();
    Enumeration {
        lines: lines.iter().map(ToString::to_string).collect(),
        line_coords: lines,
        sextuples: disjoint_sextuples().len(),
        double_sixes: double_sixes().iter().map(|d| [names(&d.first), names(&d.second)]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(line_classes().len(), 27);
        assert_eq!(disjoint_sextuples().len(), 72);
        assert_eq!(double_sixes().len(), 36);
    }

    #[test]
    fn lines_meet_ten_others() {
        let lines = line_classes();
        for a in &lines {
            assert_eq!(lines.iter().filter(|b| a.dot(b) == 1).count(), 10);
            assert_eq!(lines.iter().filter(|b| a.dot(b) == 0).count(), 16);
        }
    }

    #[test]
    fn exceptional_involution() {
        let s = Sextuple::exceptional();
        assert!(disjoint_sextuples().contains(&s));
        let inv = double_six_involution(&s).unwrap();
        let img = inv.apply(&PicClass::e(1));
        assert_eq!(img, PicClass::new(2, [0, -1, -1, -1, -1, -1]));
        assert_eq!(img.square(), -1);
        assert!(inv.is_isometry() && inv.fixes_canonical());
        assert_eq!(inv.compose(&inv), PicAutomorphism::identity());
        assert_eq!(inv.apply(&PicClass::l()), PicClass::new(5, [-2; 6]));
    }

    #[test]
    fn rejects_intersecting_lines() {
        let mut lines = Sextuple::exceptional().0;
        lines[5] = PicClass::l() - PicClass::e(1) - PicClass::e(2);
        assert!(matches!(Sextuple::new(lines), Err(Error::NotASextuple)));
    }

    #[test]
    fn display() {
        assert_eq!(conic_class(1).to_string(), "2L-E2-E3-E4-E5-E6");
        assert_eq!(PicClass::canonical().to_string(), "-3L+E1+E2+E3+E4+E5+E6");
    }
}
