//! Ring, resultant and linear-algebra laws on random small inputs.

use flopkit::par::Exec;
use flopkit::poly::linalg::{bareiss_det, det_fraction_free, integerize};
use flopkit::poly::{int, resultant_univariate, roots, MPoly, QMatrix, Rational, UPoly};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn mpoly(nvars: usize, terms: &[(Vec<u32>, i64)]) -> MPoly {
    let mut p = MPoly::zero(nvars);
    for (e, c) in terms {
        p.add_term(e.clone(), int(*c));
    }
    p
}

fn arb_mpoly(nvars: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), -5i64..=5), 0..6)
        .prop_map(move |terms| mpoly(nvars, &terms))
}

fn arb_point(nvars: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-6i64..=6, nvars).prop_map(|v| v.into_iter().map(int).collect())
}

fn arb_matrix(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), n)
        .prop_map(|rows| QMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect()))
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &QMatrix) -> Rational {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.rows();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let sign = if inversions % 2 == 0 { Rational::one() } else { -Rational::one() };
            (0..n).fold(sign, |acc, i| acc * &m.row(i)[p[i]])
        })
        .fold(Rational::zero(), |a, b| a + b)
}

fn from_roots(rs: &[i64]) -> UPoly {
    rs.iter().fold(UPoly::from_i64(&[1]), |acc, &r| &acc * &UPoly::linear_root(&int(r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_ring_map(a in arb_mpoly(3), b in arb_mpoly(3), x in arb_point(3)) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        prop_assert_eq!((&a - &a).num_terms(), 0);
    }

    #[test]
    fn distributive(a in arb_mpoly(3), b in arb_mpoly(3), c in arb_mpoly(3)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn leibniz_rule(a in arb_mpoly(3), b in arb_mpoly(3), v in 0usize..3) {
        let lhs = (&a * &b).derivative(v);
        let rhs = &(&a.derivative(v) * &b) + &(&a * &b.derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_matches_evaluation(a in arb_mpoly(2), s in arb_mpoly(2), t in arb_mpoly(2), x in arb_point(2)) {
        let composed = a.compose(&[s.clone(), t.clone()]).unwrap();
        prop_assert_eq!(composed.eval(&x), a.eval(&[s.eval(&x), t.eval(&x)]));
    }

    #[test]
    fn resultant_is_product_of_root_differences(
        ra in prop::collection::vec(-5i64..=5, 1..4),
        rb in prop::collection::vec(-5i64..=5, 1..4),
    ) {
        let expected = ra.iter().flat_map(|a| rb.iter().map(move |b| int(a - b))).fold(Rational::one(), |acc, d| acc * d);
        prop_assert_eq!(resultant_univariate(&from_roots(&ra), &from_roots(&rb)).unwrap(), expected);
    }

    #[test]
    fn integer_roots_are_found(rs in prop::collection::vec(-7i64..=7, 1..5)) {
        let found = roots(&from_roots(&rs), 128).unwrap();
        let total: usize = found.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total, rs.len());
        for r in &rs {
            let hit = found.iter().any(|f| (&f.value.to_complex(128) - &flopkit::poly::ComplexMP::from_rational(&int(*r), 128)).abs_f64() < 1e-30);
            prop_assert!(hit, "root {} missing", r);
        }
    }

    #[test]
    fn division_and_gcd(a in prop::collection::vec(-5i64..=5, 1..6), b in prop::collection::vec(-5i64..=5, 2..5)) {
        let (f, g) = (UPoly::from_i64(&a), UPoly::from_i64(&b));
        prop_assume!(!g.is_zero());
        let (q, r) = f.divrem(&g);
        prop_assert_eq!(&(&q * &g) + &r, f.clone());
        prop_assert!(r.is_zero() || r.degree() < g.degree());
        let d = f.gcd(&g);
        if !d.is_zero() {
            prop_assert!(f.rem(&d).is_zero() && g.rem(&d).is_zero());
        }
    }

    #[test]
    fn determinant_agrees_with_leibniz(m in arb_matrix(4)) {
        let d = leibniz(&m);
        prop_assert_eq!(m.det().unwrap(), d.clone());
        prop_assert_eq!(det_fraction_free(&m, Exec::Sequential).unwrap(), d.clone());
        prop_assert_eq!(det_fraction_free(&m, Exec::Parallel).unwrap(), d.clone());
        let (ints, den) = integerize(&m);
        prop_assert_eq!(Rational::from_integer(bareiss_det(ints, Exec::Parallel).unwrap()) / Rational::from_integer(den), d);
    }

    #[test]
    fn determinant_is_multiplicative(a in arb_matrix(3), b in arb_matrix(3)) {
        prop_assert_eq!(a.mul(&b).det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..5)) {
        let m = QMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect());
        let null = m.nullspace();
        prop_assert_eq!(m.rank() + null.len(), m.cols());
        for v in &null {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }
}
