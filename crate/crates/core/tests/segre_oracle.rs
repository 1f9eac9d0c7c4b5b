//! The quintic relation evaluated from hand-multiplied cubics, and six-point
//! equivalence against cross-ratios.

use flopkit::detgeo::make_instance;
use flopkit::poly::{int, Rational};
use flopkit::segre3::{jmap_report, random_s_circ_point, segre_forms, tuple_equiv, SegreVariant, SixTupleOnLine};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cubics(x: &[Rational], printed: bool) -> [Rational; 5] {
    let d = |i: usize, j: usize| &x[i % 5] - &x[j % 5];
    std::array::from_fn(|i| {
        let last = if printed && i == 3 { d(4, 1) } else { d(i + 1, i + 2) };
        d(i + 3, i + 4) * &x[i] * last
    })
}

fn relation(y: &[Rational; 5]) -> Rational {
    (0..5).map(|i| &y[i] * &y[(i + 1) % 5] * &y[(i + 2) % 5]).sum()
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-30i64..=30, 5).prop_map(|v| v.into_iter().map(int).collect())
}

/// `[p_n, p_i; p_j, p_k]` as a homogeneous pair.
fn cross_ratio(t: &SixTupleOnLine, n: usize, [i, j, k]: [usize; 3]) -> [Rational; 2] {
    let br = |a: usize, b: usize| &t.points[a][0] * &t.points[b][1] - &t.points[a][1] * &t.points[b][0];
    [br(n, i) * br(j, k), br(n, k) * br(j, i)]
}

fn equivalent_by_cross_ratios(a: &SixTupleOnLine, b: &SixTupleOnLine) -> Option<bool> {
    let br =
        |t: &SixTupleOnLine, x: usize, y: usize| &t.points[x][0] * &t.points[y][1] - &t.points[x][1] * &t.points[y][0];
    let triple = (0..6)
        .flat_map(|i| (i + 1..6).flat_map(move |j| (j + 1..6).map(move |k| [i, j, k])))
        .find(|&[i, j, k]| !br(a, i, j).is_zero() && !br(a, i, k).is_zero() && !br(a, j, k).is_zero())?;
    let [i, j, k] = triple;
    if br(b, i, j).is_zero() || br(b, i, k).is_zero() || br(b, j, k).is_zero() {
        return Some(false);
    }
    Some((0..6).all(|n| {
        let (p, q) = (cross_ratio(a, n, triple), cross_ratio(b, n, triple));
        (&p[0] * &q[1] - &p[1] * &q[0]).is_zero()
    }))
}

fn tuple(vals: &[(i64, i64)]) -> SixTupleOnLine {
    SixTupleOnLine::new(vals.iter().map(|&(a, b)| [int(a), int(b)]).collect()).unwrap()
}

fn arb_tuple() -> impl Strategy<Value = SixTupleOnLine> {
    prop::collection::vec((-6i64..=6, -6i64..=6), 6)
        .prop_filter("no (0,0)", |v| v.iter().all(|&p| p != (0, 0)))
        .prop_map(|v| tuple(&v))
}

fn arb_mobius() -> impl Strategy<Value = [[Rational; 2]; 2]> {
    (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5)
        .prop_filter("invertible", |&(a, b, c, d)| a * d - b * c != 0)
        .prop_map(|(a, b, c, d)| [[int(a), int(b)], [int(c), int(d)]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cyclic_relation_vanishes_pointwise(x in point()) {
        let y = cubics(&x, false);
        prop_assert!(relation(&y).is_zero());
        let forms = segre_forms(SegreVariant::Cyclic);
        for (f, v) in forms.iter().zip(&y) {
            prop_assert_eq!(&f.eval(&x), v);
        }
    }

    #[test]
    fn printed_forms_match_hand_products(x in point()) {
        let y = cubics(&x, true);
        for (f, v) in segre_forms(SegreVariant::Printed).iter().zip(&y) {
            prop_assert_eq!(&f.eval(&x), v);
        }
    }

    #[test]
    fn equivalence_matches_cross_ratios(a in arb_tuple(), b in arb_tuple()) {
        if let Some(expected) = equivalent_by_cross_ratios(&a, &b) {
            prop_assert_eq!(tuple_equiv(&a, &b).unwrap(), expected);
        }
    }

    #[test]
    fn mobius_images_are_equivalent(a in arb_tuple(), m in arb_mobius()) {
        prop_assume!(equivalent_by_cross_ratios(&a, &a).is_some());
        let b = a.mobius(m).unwrap();
        prop_assert!(tuple_equiv(&a, &b).unwrap());
        prop_assert!(tuple_equiv(&b, &a).unwrap());
    }

    #[test]
    fn equivalence_is_transitive(a in arb_tuple(), m in arb_mobius(), n in arb_mobius()) {
        prop_assume!(equivalent_by_cross_ratios(&a, &a).is_some());
        let b = a.mobius(m).unwrap();
        let c = b.mobius(n).unwrap();
        prop_assert!(tuple_equiv(&a, &c).unwrap());
    }
}

#[test]
fn printed_relation_fails_somewhere() {
    let x: Vec<Rational> = [2, -3, 5, 7, 11].into_iter().map(int).collect();
    assert!(!relation(&cubics(&x, true)).is_zero());
}

#[test]
fn moving_one_point_breaks_equivalence() {
    let a = tuple(&[(0, 1), (1, 1), (1, 0), (2, 1), (3, 1), (5, 1)]);
    let b = tuple(&[(0, 1), (1, 1), (1, 0), (2, 1), (3, 1), (7, 1)]);
    assert!(!tuple_equiv(&a, &b).unwrap());
    assert_eq!(equivalent_by_cross_ratios(&a, &b), Some(false));
}

#[test]
fn jmap_tuples_agree_by_cross_ratios() {
    for seed in 2..=4 {
        let inst = make_instance(seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            let s = random_s_circ_point(&inst, &mut rng).unwrap();
            let rep = jmap_report(&inst, &s).unwrap();
            assert_eq!(equivalent_by_cross_ratios(&rep.primal, &rep.dual), Some(true), "seed {seed}");
            let shuffled = rep.dual.permuted([1, 0, 2, 3, 4, 5]);
            assert_eq!(
                tuple_equiv(&rep.primal, &shuffled).unwrap(),
                equivalent_by_cross_ratios(&rep.primal, &shuffled).unwrap()
            );
        }
    }
}
