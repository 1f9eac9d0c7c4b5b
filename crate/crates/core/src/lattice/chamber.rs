use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{eval_form, orbit_class, GramContext, LatticeClass, OrbitKind, QuadExt, Reflection};
use crate::error::{Error, Result};
use crate::poly::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeRegion {
    InteriorP,
    BoundaryP,
    InteriorNegP,
    BoundaryNegP,
    Outside,
}

fn region_from_signs(q: Ordering, pair_g: Ordering) -> ConeRegion {
    match (q, pair_g) {
        (Ordering::Greater, Ordering::Greater) => ConeRegion::InteriorP,
        (Ordering::Greater, Ordering::Less) => ConeRegion::InteriorNegP,
        (Ordering::Equal, Ordering::Greater) => ConeRegion::BoundaryP,
        (Ordering::Equal, Ordering::Less) => ConeRegion::BoundaryNegP,
        _ => ConeRegion::Outside,
    }
}

/// Position of an integral class relative to `P ∪ −P`.
pub fn positive_cone_membership(v: &LatticeClass) -> ConeRegion {
    let q = v.square();
    let pg = eval_form(v, &LatticeClass::new(1, 0, v.gram.clone())).expect("same context");
    region_from_signs(q.cmp(&BigInt::zero()), pg.cmp(&BigInt::zero()))
}

/// Position of `x·g + y·τ` with coordinates in a real quadratic field,
/// decided exactly.
pub fn positive_cone_membership_exact(x: &QuadExt, y: &QuadExt, gram: &GramContext) -> ConeRegion {
    let e = gram.entries().map(|r| r.map(|v| QuadExt::rational(Rational::from_integer(v.into()), x.d)));
    let gx = &(&e[0][0] * x) + &(&e[0][1] * y);
    let gy = &(&e[1][0] * x) + &(&e[1][1] * y);
    let q = &(&gx * x) + &(&gy * y);
    region_from_signs(q.signum(), gx.signum())
}

/// The `i`-th chamber ray: `α_i` for `i ≥ 1` and `α∨_{1-i}` for `i ≤ 0`.
pub fn ray(i: i64) -> LatticeClass {
    if i >= 1 {
        orbit_class(OrbitKind::Alpha, i as usize)
    } else {
        orbit_class(OrbitKind::AlphaDual, (1 - i) as usize)
    }
}

/// The (−10)-class orthogonal to `ray(i)`, signed to be positive on `ray(i+1)`.
pub fn wall_class(i: i64) -> LatticeClass {
    let w = if i >= 1 {
        orbit_class(OrbitKind::Rho, i as usize)
    } else {
        orbit_class(OrbitKind::RhoDual, (1 - i) as usize)
    };
    let probe = ray(i + 1);
    if eval_form(&w, &probe).expect("J12").is_negative() {
        w.neg()
    } else {
        w
    }
}

/// Rays `ray(-k) … ray(k)`.
pub fn chamber_rays(k: i64) -> Vec<LatticeClass> {
    (-k..=k).map(ray).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberLocation {
    /// Chamber index; the first of the two when the class lies on a wall.
    pub k: i64,
    /// Both adjacent indices when the class lies on a wall.
    pub wall_between: Option<(i64, i64)>,
    /// Coordinates on `(ray(k), ray(k+1))`.
    #[serde(with = "crate::poly::rational::serde_str::vec")]
    pub coords: Vec<Rational>,
    /// Reflections, in order of application, moving chamber `k` to chamber 0 (even `k`) or 1 (odd `k`).
    pub word: Vec<Reflection>,
    /// The chamber reached by the word.
    pub base_chamber: i64,
}

/// Solves `v = a·r0 + b·r1` exactly.
fn coords_in(v: &LatticeClass, r0: &LatticeClass, r1: &LatticeClass) -> (Rational, Rational) {
    let det = &r0.x * &r1.y - &r1.x * &r0.y;
    let a = &v.x * &r1.y - &r1.x * &v.y;
    let b = &r0.x * &v.y - &v.x * &r0.y;
    (Rational::new(a, det.clone()), Rational::new(b, det))
}

const WALK_CAP: i64 = 100_000;

/// Locates the chamber `Cone(ray(k), ray(k+1))` containing `v`.
pub fn chamber_locate(v: &LatticeClass) -> Result<ChamberLocation> {
    if v.gram != GramContext::j12() {
        return Err(Error::ContextMismatch);
    }
    if positive_cone_membership(v) != ConeRegion::InteriorP {
        return Err(Error::NotInPositiveCone);
    }
    if !v.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let mut k = 0i64;
    let mut r0 = ray(0);
    let mut r1 = ray(1);
    let mut prev_dir = 0i64;
    loop {
        let (a, b) = coords_in(v, &r0, &r1);
        let dir = if a.is_negative() {
            1
        } else if b.is_negative() {
            -1
        } else {
            let wall_between = if a.is_zero() {
                Some((k, k + 1))
            } else if b.is_zero() {
                Some((k - 1, k))
            } else {
                None
            };
            let (word, base) = flop_word(k);
            return Ok(ChamberLocation { k, wall_between, coords: vec![a, b], word, base_chamber: base });
        };
        if prev_dir != 0 && dir != prev_dir {
            return Err(Error::Degenerate("chamber walk oscillated".into()));
        }
        prev_dir = dir;
        k += dir;
        if k.abs() > WALK_CAP {
            return Err(Error::Degenerate("chamber walk exceeded cap".into()));
        }
        if dir == 1 {
            r0 = r1;
            r1 = ray(k + 1);
        } else {
            r1 = r0;
            r0 = ray(k);
        }
    }
}

/// Word moving chamber `k` to 0 or 1. `R1` acts on indices by `k ↦ −k`,
/// `R2` by `k ↦ −2−k`, so `[R1, R2]` lowers the index by two and `[R2, R1]`
/// raises it by two.
fn flop_word(k: i64) -> (Vec<Reflection>, i64) {
    let base = k.rem_euclid(2);
    let steps = ((k - base) / 2).unsigned_abs() as usize;
    let pair = if k > base { [Reflection::R1, Reflection::R2] } else { [Reflection::R2, Reflection::R1] };
    (pair.iter().copied().cycle().take(2 * steps).collect(), base)
}

/// Nef test for model `k`: nonnegative pairing with both wall classes of chamber `k`.
pub fn nef_test(v: &LatticeClass, k: i64) -> Result<bool> {
    let w0 = wall_class(k);
    // The wall through ray(k+1) is signed positive on ray(k).
    let w1 = {
        let w = wall_class(k + 1);
        if eval_form(&w, &ray(k))?.is_negative() {
            w.neg()
        } else {
            w
        }
    };
    Ok(!eval_form(v, &w0)?.is_negative() && !eval_form(v, &w1)?.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{apply_isometry, Isometry};
    use crate::poly::rat;

    #[test]
    fn cone_regions() {
        assert_eq!(positive_cone_membership(&LatticeClass::g()), ConeRegion::InteriorP);
        assert_eq!(positive_cone_membership(&LatticeClass::j12(3, -2)), ConeRegion::Outside);
        assert_eq!(positive_cone_membership(&LatticeClass::j12(-1, 0)), ConeRegion::InteriorNegP);
        let j = GramContext::j12();
        // g − (3 − √6)τ and (3 + √6)τ − g
        let one = QuadExt::from_i64(1, 0, 6);
        assert_eq!(positive_cone_membership_exact(&one, &QuadExt::from_i64(-3, 1, 6), &j), ConeRegion::BoundaryP);
        assert_eq!(
            positive_cone_membership_exact(&QuadExt::from_i64(-1, 0, 6), &QuadExt::from_i64(3, 1, 6), &j),
            ConeRegion::BoundaryP
        );
        assert_eq!(
            positive_cone_membership_exact(&QuadExt::from_i64(-1, 0, 6), &QuadExt::from_i64(3, -1, 6), &j),
            ConeRegion::BoundaryNegP
        );
    }

    #[test]
    fn chamber_examples() {
        let g = chamber_locate(&LatticeClass::g()).unwrap();
        assert_eq!((g.k, g.coords.clone()), (0, vec![rat(1, 8), rat(1, 8)]));
        let c = chamber_locate(&LatticeClass::j12(12, -5)).unwrap();
        assert_eq!((c.k, c.coords.clone()), (0, vec![rat(1, 24), rat(41, 24)]));
        let t = chamber_locate(&LatticeClass::tau()).unwrap();
        assert_eq!((t.k, t.coords.clone()), (-1, vec![rat(1, 12), rat(1, 12)]));
        assert!(matches!(chamber_locate(&LatticeClass::j12(3, -2)), Err(Error::NotInPositiveCone)));
    }

    #[test]
    fn wall_reports_both_sides() {
        let a1 = chamber_locate(&LatticeClass::j12(7, -3)).unwrap();
        assert_eq!(a1.wall_between, Some((0, 1)));
    }

    #[test]
    fn flop_square_shifts_by_two() {
        let v = LatticeClass::j12(12, -5);
        let w = apply_isometry(&Isometry::r1r2(), &v).unwrap();
        assert_eq!(chamber_locate(&w).unwrap().k, chamber_locate(&v).unwrap().k + 2);
        let loc = chamber_locate(&w).unwrap();
        let moved = apply_isometry(&Isometry::from_word(&loc.word), &w).unwrap();
        assert_eq!(chamber_locate(&moved).unwrap().k, loc.base_chamber);
    }

    #[test]
    fn nef_examples() {
        assert!(nef_test(&LatticeClass::j12(7, -3), 0).unwrap());
        assert!(!nef_test(&LatticeClass::j12(17, -9), 0).unwrap());
        assert!(nef_test(&LatticeClass::g(), 0).unwrap());
        assert_eq!(eval_form(&LatticeClass::j12(17, -9), &LatticeClass::j12(3, -2)).unwrap(), BigInt::from(-24));
        for k in -4..4 {
            assert!(nef_test(&ray(k), k).unwrap() && nef_test(&ray(k + 1), k).unwrap());
            assert!(!nef_test(&ray(k + 2), k).unwrap() && !nef_test(&ray(k - 1), k).unwrap());
        }
    }
}
