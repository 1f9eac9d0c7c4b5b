//! Rank-2 lattices with an integral symmetric form, specialised to the
//! lattice `J12` with Gram matrix `[[6,6],[6,2]]` in the basis `(g, τ)`.

mod chamber;
mod quadext;
mod represent;
mod transfer;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use chamber::{
    chamber_locate, chamber_rays, nef_test, positive_cone_membership, positive_cone_membership_exact, ray, wall_class,
    ChamberLocation, ConeRegion,
};
pub use quadext::QuadExt;
pub use represent::{represents, Obstruction, Representation, DEFAULT_SEARCH_BOUND};
pub use transfer::{special_discriminant, transfer_k_to_j, Transfer};

pub type Mat2 = [[BigInt; 2]; 2];

fn mat2(m: [[i64; 2]; 2]) -> Mat2 {
    m.map(|r| r.map(BigInt::from))
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat2_transpose(a: &Mat2) -> Mat2 {
    [[a[0][0].clone(), a[1][0].clone()], [a[0][1].clone(), a[1][1].clone()]]
}

/// Symmetric nondegenerate 2×2 Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct GramContext {
    entries: [[i64; 2]; 2],
}

impl GramContext {
    pub fn new(entries: [[i64; 2]; 2]) -> Result<Self> {
        if entries[0][1] != entries[1][0] {
            return Err(Error::Precondition("gram matrix must be symmetric".into()));
        }
        if entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0] == 0 {
            return Err(Error::DegenerateGram);
        }
        Ok(GramContext { entries })
    }

    pub fn j12() -> Self {
        GramContext { entries: [[6, 6], [6, 2]] }
    }

    pub fn k12() -> Self {
        GramContext { entries: [[3, 3], [3, 7]] }
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.entries
    }

    pub fn det(&self) -> i64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    fn big(&self) -> Mat2 {
        mat2(self.entries)
    }
}

impl TryFrom<[[i64; 2]; 2]> for GramContext {
    type Error = Error;
    fn try_from(e: [[i64; 2]; 2]) -> Result<Self> {
        GramContext::new(e)
    }
}

impl From<GramContext> for [[i64; 2]; 2] {
    fn from(g: GramContext) -> Self {
        g.entries
    }
}

/// The class `x·g + y·τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeClass {
    pub x: BigInt,
    pub y: BigInt,
    pub gram: GramContext,
}

impl std::hash::Hash for GramContext {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl LatticeClass {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, gram: GramContext) -> Self {
        LatticeClass { x: x.into(), y: y.into(), gram }
    }

    /// A class of `J12`.
    pub fn j12(x: i64, y: i64) -> Self {
        Self::new(x, y, GramContext::j12())
    }

    pub fn g() -> Self {
        Self::j12(1, 0)
    }

    pub fn tau() -> Self {
        Self::j12(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_primitive(&self) -> bool {
        self.x.gcd(&self.y).is_one()
    }

    pub fn neg(&self) -> Self {
        LatticeClass { x: -&self.x, y: -&self.y, gram: self.gram.clone() }
    }

    /// `Gv`, the coefficients of the linear form `(v, ·)`.
    pub fn dual_vector(&self) -> [BigInt; 2] {
        let g = self.gram.big();
        [&g[0][0] * &self.x + &g[0][1] * &self.y, &g[1][0] * &self.x + &g[1][1] * &self.y]
    }

    /// `Q(v) = (v, v)`.
    pub fn square(&self) -> BigInt {
        eval_form(self, self).expect("same context")
    }

    pub fn coords(&self) -> [BigInt; 2] {
        [self.x.clone(), self.y.clone()]
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.y.is_negative() { "-" } else { "+" };
        write!(f, "{}g {} {}τ", self.x, sign, self.y.abs())
    }
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    x: serde_json::Number,
    y: serde_json::Number,
    gram: [[i64; 2]; 2],
}

fn big_to_number(n: &BigInt) -> serde_json::Number {
    n.to_string().parse().expect("integer literal is a JSON number")
}

fn number_to_big(n: &serde_json::Number) -> std::result::Result<BigInt, String> {
    n.to_string().parse().map_err(|_| format!("not an integer: {n}"))
}

impl Serialize for LatticeClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClassJson { x: big_to_number(&self.x), y: big_to_number(&self.y), gram: self.gram.entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ClassJson::deserialize(d)?;
        let gram = GramContext::new(j.gram).map_err(D::Error::custom)?;
        Ok(LatticeClass {
            x: number_to_big(&j.x).map_err(D::Error::custom)?,
            y: number_to_big(&j.y).map_err(D::Error::custom)?,
            gram,
        })
    }
}

/// `vᵀ G w`.
pub fn eval_form(v: &LatticeClass, w: &LatticeClass) -> Result<BigInt> {
    if v.gram != w.gram {
        return Err(Error::ContextMismatch);
    }
    let d = v.dual_vector();
    Ok(&d[0] * &w.x + &d[1] * &w.y)
}

/// `gcd((v,g), (v,τ))`, zero only for the zero class.
pub fn divisibility(v: &LatticeClass) -> BigInt {
    let d = v.dual_vector();
    d[0].gcd(&d[1])
}

/// Reflections and their products, named as in the orbit recursions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reflection {
    R1,
    R2,
    R3,
}

impl Reflection {
    pub fn isometry(self) -> Isometry {
        match self {
            Reflection::R1 => Isometry::r1(),
            Reflection::R2 => Isometry::r2(),
            Reflection::R3 => Isometry::r3(),
        }
    }
}

impl fmt::Display for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An integer matrix acting on coordinate columns. Columns are the images of `g` and `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub matrix: Mat2,
    pub name: Option<String>,
}

impl Isometry {
    pub fn from_i64(m: [[i64; 2]; 2], name: Option<&str>) -> Self {
        Isometry { matrix: mat2(m), name: name.map(str::to_string) }
    }

    pub fn identity() -> Self {
        Self::from_i64([[1, 0], [0, 1]], Some("id"))
    }

    /// `g ↦ g`, `τ ↦ 2g − τ`.
    pub fn r1() -> Self {
        Self::from_i64([[1, 2], [0, -1]], Some("R1"))
    }

    /// `g ↦ 6τ − g`, `τ ↦ τ`.
    pub fn r2() -> Self {
        Self::from_i64([[-1, 0], [6, 1]], Some("R2"))
    }

    /// `g ↦ 11g − 6τ`, `τ ↦ 20g − 11τ`.
    pub fn r3() -> Self {
        Self::from_i64([[11, 20], [-6, -11]], Some("R3"))
    }

    /// `R1R2`: first `R2`, then `R1`.
    pub fn r1r2() -> Self {
        Self::r1().compose(&Self::r2())
    }

    pub fn r2r1() -> Self {
        Self::r2().compose(&Self::r1())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}{b}")),
            _ => None,
        };
        Isometry { matrix: mat2_mul(&self.matrix, &other.matrix), name }
    }

    /// Product of a word, applied left to right (the first letter acts first).
    pub fn from_word(word: &[Reflection]) -> Isometry {
        word.iter().fold(Isometry::identity(), |acc, r| r.isometry().compose(&acc))
    }

    pub fn pow(&self, k: u32) -> Isometry {
        let mut acc = Isometry::identity();
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc.name = self.name.as_ref().map(|n| format!("({n})^{k}"));
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == mat2([[1, 0], [0, 1]])
    }

    pub fn trace(&self) -> BigInt {
        &self.matrix[0][0] + &self.matrix[1][1]
    }
}

/// `mᵀ G m = G`.
pub fn is_isometry(m: &Mat2, gram: &GramContext) -> bool {
    let g = gram.big();
    mat2_mul(&mat2_mul(&mat2_transpose(m), &g), m) == g
}

pub fn apply_isometry(iso: &Isometry, v: &LatticeClass) -> Result<LatticeClass> {
    if !is_isometry(&iso.matrix, &v.gram) {
        return Err(Error::InvalidIsometry);
    }
    let m = &iso.matrix;
    Ok(LatticeClass {
        x: &m[0][0] * &v.x + &m[0][1] * &v.y,
        y: &m[1][0] * &v.x + &m[1][1] * &v.y,
        gram: v.gram.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Rho,
    RhoDual,
    Alpha,
    AlphaDual,
}

impl OrbitKind {
    fn seeds(self) -> [(i64, i64); 2] {
        match self {
            OrbitKind::Rho => [(3, -2), (7, -4)],
            OrbitKind::RhoDual => [(-1, 2), (-1, 4)],
            OrbitKind::Alpha => [(7, -3), (17, -9)],
            OrbitKind::AlphaDual => [(1, 3), (-1, 9)],
        }
    }

    fn step(self) -> Isometry {
        match self {
            OrbitKind::Rho | OrbitKind::Alpha => Isometry::r1r2(),
            OrbitKind::RhoDual | OrbitKind::AlphaDual => Isometry::r2r1(),
        }
    }
}

impl std::str::FromStr for OrbitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rho" => Ok(OrbitKind::Rho),
            "rho_dual" | "rho-dual" => Ok(OrbitKind::RhoDual),
            "alpha" => Ok(OrbitKind::Alpha),
            "alpha_dual" | "alpha-dual" => Ok(OrbitKind::AlphaDual),
            _ => Err(Error::Parse(format!("unknown orbit kind {s}"))),
        }
    }
}

/// First `count` classes of the sequence seeded by its first two entries and
/// continued by `x_j = T x_{j-2}`, with `T = R1R2` (or `R2R1` for the duals).
pub fn orbit_classes(kind: OrbitKind, count: usize) -> Vec<LatticeClass> {
    let step = kind.step();
    let mut out: Vec<LatticeClass> = kind.seeds().iter().map(|&(x, y)| LatticeClass::j12(x, y)).take(count).collect();
    while out.len() < count {
        let prev = &out[out.len() - 2];
        let next = apply_isometry(&step, prev).expect("R1R2 is an isometry of J12");
        out.push(next);
    }
    out
}

/// The `j`-th class (1-based) of an orbit.
pub fn orbit_class(kind: OrbitKind, j: usize) -> LatticeClass {
    assert!(j >= 1);
    orbit_classes(kind, j).pop().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairing_with_g(v: &LatticeClass) -> i64 {
        i64::try_from(eval_form(v, &LatticeClass::g()).unwrap()).unwrap()
    }

    #[test]
    fn form_values() {
        let g = LatticeClass::g();
        let rho1 = LatticeClass::j12(3, -2);
        let alpha1 = LatticeClass::j12(7, -3);
        assert_eq!(eval_form(&g, &g).unwrap(), BigInt::from(6));
        assert_eq!(eval_form(&rho1, &g).unwrap(), BigInt::from(6));
        assert!(eval_form(&alpha1, &rho1).unwrap().is_zero());
        let k = LatticeClass::new(1, 0, GramContext::k12());
        assert!(matches!(eval_form(&g, &k), Err(Error::ContextMismatch)));
    }

    #[test]
    fn divisibility_values() {
        assert_eq!(divisibility(&LatticeClass::j12(3, -2)), BigInt::from(2));
        assert_eq!(divisibility(&LatticeClass::g()), BigInt::from(6));
        assert!(divisibility(&LatticeClass::j12(0, 0)).is_zero());
    }

    #[test]
    fn named_isometries() {
        let j = GramContext::j12();
        for iso in [Isometry::r1(), Isometry::r2(), Isometry::r3(), Isometry::r1r2(), Isometry::identity()] {
            assert!(is_isometry(&iso.matrix, &j), "{:?}", iso.name);
        }
        assert!(!is_isometry(&mat2([[2, 0], [0, 1]]), &j));
        assert_eq!(Isometry::r1r2().matrix, mat2([[11, 2], [-6, -1]]));
        assert_eq!(apply_isometry(&Isometry::r1(), &LatticeClass::tau()).unwrap(), LatticeClass::j12(2, -1));
        assert_eq!(apply_isometry(&Isometry::r3(), &LatticeClass::j12(7, -3)).unwrap(), LatticeClass::j12(17, -9));
        assert!(matches!(
            apply_isometry(&Isometry::from_i64([[2, 0], [0, 1]], None), &LatticeClass::g()),
            Err(Error::InvalidIsometry)
        ));
    }

    #[test]
    fn orbit_tables() {
        let rho = orbit_classes(OrbitKind::Rho, 5);
        assert_eq!(rho[2], LatticeClass::j12(29, -16));
        assert_eq!(rho[4], LatticeClass::j12(287, -158));
        assert_eq!(rho.iter().take(3).map(pairing_with_g).collect::<Vec<_>>(), vec![6, 18, 78]);
        assert_eq!(pairing_with_g(&rho[4]), 774);
        let alpha = orbit_classes(OrbitKind::Alpha, 2);
        assert_eq!(alpha.iter().map(pairing_with_g).collect::<Vec<_>>(), vec![24, 48]);
        // The recursion continued backwards reproduces the tabulated second entries.
        let rho2_dual = LatticeClass::j12(-1, 4);
        assert_eq!(apply_isometry(&Isometry::r1r2(), &rho2_dual.neg()).unwrap(), LatticeClass::j12(3, -2));
    }

    #[test]
    fn json_shape() {
        let v = LatticeClass::j12(3, -2);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"x":3,"y":-2,"gram":[[6,6],[6,2]]}"#);
        assert_eq!(serde_json::from_str::<LatticeClass>(&s).unwrap(), v);
    }
}
