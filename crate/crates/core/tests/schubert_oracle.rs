//! Schubert products on G(2, n) against Schur polynomials in two variables,
//! truncated to the 2 × (n−2) box.

use std::collections::BTreeMap;

use flopkit::schubert::{chern_sym3, integrate, SchubertCycle};
use proptest::prelude::*;

type Sym2 = BTreeMap<(u32, u32), i64>;

fn schur(a: u32, b: u32) -> Sym2 {
    (0..=a - b).map(|i| ((b + i, b + a - b - i), 1)).collect()
}

fn mul(p: &Sym2, q: &Sym2) -> Sym2 {
    let mut out = Sym2::new();
    for (&(a, b), &c) in p {
        for (&(d, e), &f) in q {
            *out.entry((a + d, b + e)).or_insert(0) += c * f;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Peels leading monomials `x1^p x2^q` (p ≥ q) off a symmetric polynomial.
fn schur_expand(mut p: Sym2, n: u32) -> SchubertCycle {
    let mut out = SchubertCycle::zero(n);
    while let Some((&(a, b), &c)) = p.iter().next_back() {
        assert!(a >= b, "not symmetric");
        for (k, v) in schur(a, b) {
            *p.entry(k).or_insert(0) -= c * v;
        }
        p.retain(|_, c| *c != 0);
        if a <= n - 2 {
            out = out.add(&SchubertCycle::sigma(n, a, b).scale(c)).unwrap();
        }
    }
    out
}

fn to_sym(c: &SchubertCycle) -> Sym2 {
    let mut out = Sym2::new();
    for (&(a, b), &k) in &c.terms {
        for (m, v) in schur(a, b) {
            *out.entry(m).or_insert(0) += k * v;
        }
    }
    out
}

fn partition(n: u32) -> impl Strategy<Value = (u32, u32)> {
    (0..=n - 2).prop_flat_map(|a| (Just(a), 0..=a))
}

proptest! {
    #[test]
    fn pieri_giambelli_matches_schur((n, p, q) in (4u32..8).prop_flat_map(|n| (Just(n), partition(n), partition(n)))) {
        let lhs = SchubertCycle::sigma(n, p.0, p.1).multiply(&SchubertCycle::sigma(n, q.0, q.1)).unwrap();
        let rhs = schur_expand(mul(&schur(p.0, p.1), &schur(q.0, q.1)), n);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_is_commutative((n, p, q) in (4u32..8).prop_flat_map(|n| (Just(n), partition(n), partition(n)))) {
        let a = SchubertCycle::sigma(n, p.0, p.1);
        let b = SchubertCycle::sigma(n, q.0, q.1);
        prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
    }
}

#[test]
fn chern_class_from_roots() {
    // Π over the roots 3a, 2a+b, a+2b, 3b of Sym³ with e1 = a+b, e2 = ab.
    let roots: [Sym2; 4] = [
        [((1, 0), 3)].into(),
        [((1, 0), 2), ((0, 1), 1)].into(),
        [((1, 0), 1), ((0, 1), 2)].into(),
        [((0, 1), 3)].into(),
    ];
    let prod = roots.iter().fold(Sym2::from([((0, 0), 1)]), |acc, r| mul(&acc, r));
    for n in [4, 5, 6] {
        let expected = schur_expand(prod.clone(), n);
        assert_eq!(chern_sym3(n), expected);
        assert_eq!(to_sym(&chern_sym3(6)), prod);
    }
    assert_eq!(integrate(&chern_sym3(4)).unwrap(), 27);
    let s1sq = SchubertCycle::special(5, 1).pow(2);
    assert_eq!(integrate(&chern_sym3(5).multiply(&s1sq).unwrap()).unwrap(), 45);
}
