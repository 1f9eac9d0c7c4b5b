use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{divisibility, eval_form, GramContext, LatticeClass};

pub const DEFAULT_SEARCH_BOUND: u64 = 10_000;

/// Why no nonzero class has the requested square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// `Q` takes only even values.
    Parity,
    /// `u² − 6x² = m` has no solution modulo `modulus`.
    Congruence { modulus: u32, m_residue: u32 },
    /// `Q` is anisotropic: `3x² + 6xy + y²` has discriminant 24, not a square.
    Anisotropic { discriminant: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Representation {
    Witness {
        class: LatticeClass,
        divisibility: String,
    },
    NoneCertificate {
        obstruction: Obstruction,
        searched_bound: u64,
    },
    /// No witness within the bound and no closed-form obstruction.
    Inconclusive {
        searched_bound: u64,
    },
}

/// Moduli whose residues are checked for a local obstruction.
const OBSTRUCTION_MODULI: [u32; 2] = [3, 8];

/// Whether `u² − 6x² ≡ m` is solvable modulo `p`.
fn solvable_mod(m: &BigInt, p: u32) -> bool {
    let r = residue(m, p);
    (0..p).any(|u| (0..p).any(|x| ((u * u + p * p * 6 - 6 * x * x) % p) == r))
}

fn residue(m: &BigInt, p: u32) -> u32 {
    u32::try_from(m.mod_floor(&BigInt::from(p))).expect("residue fits")
}

/// Closed-form reason that `n` is not the square of a nonzero class of `J12`.
///
/// With `u = y + 3x`, `Q(x, y) = 2(u² − 6x²)`.
fn obstruction(n: &BigInt) -> Option<Obstruction> {
    if n.is_odd() {
        return Some(Obstruction::Parity);
    }
    if n.is_zero() {
        return Some(Obstruction::Anisotropic { discriminant: 24 });
    }
    let m = n / 2;
    OBSTRUCTION_MODULI
        .iter()
        .find(|&&p| !solvable_mod(&m, p))
        .map(|&p| Obstruction::Congruence { modulus: p, m_residue: residue(&m, p) })
}

/// Searches `|x|, |y| ≤ bound` for a nonzero class of `J12` with `Q = n`.
/// Among witnesses the one with the smallest positive `(v, g)` is returned,
/// ties broken by larger `x`; certificates are reported when the search is
/// empty.
pub fn represents(n: i64, bound: u64) -> Representation {
    let n_big = BigInt::from(n);
    let gram = GramContext::j12();
    let mut best: Option<((bool, BigInt, BigInt), LatticeClass)> = None;
    if n % 2 == 0 {
        let m = BigInt::from(n / 2);
        let b = BigInt::from(bound);
        for x in -(bound as i64)..=(bound as i64) {
            let x = BigInt::from(x);
            let u2 = &m + BigInt::from(6) * &x * &x;
            if u2.is_negative() {
                continue;
            }
            let u = u2.sqrt();
            if &u * &u != u2 {
                continue;
            }
            for u in [u.clone(), -u] {
                let y = &u - BigInt::from(3) * &x;
                if y.abs() > b || (x.is_zero() && y.is_zero()) {
                    continue;
                }
                let v = LatticeClass { x: x.clone(), y, gram: gram.clone() };
                debug_assert_eq!(v.square(), n_big);
                let pg = eval_form(&v, &LatticeClass::g()).expect("J12");
                let key = (!pg.is_positive(), pg.abs(), -&v.x);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, v));
                }
            }
        }
    }
    if let Some((_, class)) = best {
        let divisibility = divisibility(&class).to_string();
        return Representation::Witness { class, divisibility };
    }
    match obstruction(&n_big) {
        Some(obstruction) => Representation::NoneCertificate { obstruction, searched_bound: bound },
        None => Representation::Inconclusive { searched_bound: bound },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_ten_is_rho1() {
        match represents(-10, DEFAULT_SEARCH_BOUND) {
            Representation::Witness { class, divisibility } => {
                assert_eq!(class, LatticeClass::j12(3, -2));
                assert_eq!(divisibility, "2");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn six_is_g() {
        assert!(matches!(represents(6, 100), Representation::Witness { class, .. } if class == LatticeClass::g()));
    }

    #[test]
    fn certificates() {
        assert_eq!(
            represents(-2, DEFAULT_SEARCH_BOUND),
            Representation::NoneCertificate {
                obstruction: Obstruction::Congruence { modulus: 3, m_residue: 2 },
                searched_bound: DEFAULT_SEARCH_BOUND
            }
        );
        assert_eq!(
            represents(0, DEFAULT_SEARCH_BOUND),
            Representation::NoneCertificate {
                obstruction: Obstruction::Anisotropic { discriminant: 24 },
                searched_bound: DEFAULT_SEARCH_BOUND
            }
        );
        assert!(matches!(represents(7, 10), Representation::NoneCertificate { obstruction: Obstruction::Parity, .. }));
    }

    #[test]
    fn brute_force_agrees_on_small_values() {
        for n in -60..=60i64 {
            let brute = (-40i64..=40)
                .any(|x| (-40i64..=40).any(|y| (x, y) != (0, 0) && 6 * x * x + 12 * x * y + 2 * y * y == n));
            match represents(n, 40) {
                Representation::Witness { .. } => assert!(brute, "{n}"),
                Representation::NoneCertificate { .. } => assert!(!brute, "{n}"),
                Representation::Inconclusive { .. } => assert!(!brute, "{n}"),
            }
        }
    }
}
