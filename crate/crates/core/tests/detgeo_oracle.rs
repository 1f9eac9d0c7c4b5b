//! Determinantal instances against hand-rolled evaluations: cofactor
//! determinants, 2×2 minors, finite-difference Hessians, Plücker spans.

use flopkit::detgeo::{
    classify_line, is_odp, make_instance, make_instance_with, random_line_param, special_line, DeterminantalInstance,
    LineKind,
};
use flopkit::par::Exec;
use flopkit::poly::{int, MPoly, QMatrix, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn det3(m: &QMatrix) -> Rational {
    let a = |i: usize, j: usize| m.row(i)[j].clone();
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

fn minors_vanish(m: &QMatrix) -> bool {
    let a = |i: usize, j: usize| m.row(i)[j].clone();
    (0..3).all(|i| {
        (i + 1..3).all(|k| (0..3).all(|j| (j + 1..3).all(|l| (a(i, j) * a(k, l) - a(i, l) * a(k, j)).is_zero())))
    })
}

fn trace_of_product(a: &QMatrix, b: &QMatrix) -> Rational {
    (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| a.row(i)[j].clone() * b.row(j)[i].clone()).sum()
}

/// Hessian of a cubic at `p` from values only: mixed partials by the four-point
/// stencil, pure ones by the second difference (both exact in degree 3).
fn hessian_by_differences(f: &MPoly, p: &[Rational]) -> QMatrix {
    let n = p.len();
    let at = |s: i64, i: usize, t: i64, j: usize| {
        let mut x = p.to_vec();
        x[i] += int(s);
        x[j] += int(t);
        f.eval(&x)
    };
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        let mut up = p.to_vec();
                        up[i] += int(1);
                        let mut down = p.to_vec();
                        down[i] -= int(1);
                        f.eval(&up) + f.eval(&down) - f.eval(p) * int(2)
                    } else {
                        (at(1, i, 1, j) - at(1, i, -1, j) - at(-1, i, 1, j) + at(-1, i, -1, j)) / int(4)
                    }
                })
                .collect()
        })
        .collect();
    QMatrix::from_rows(rows)
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-20..=20))).collect()
}

#[test]
fn cubics_are_determinants_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for seed in 1..=5 {
        let inst = make_instance(seed).unwrap();
        for _ in 0..20 {
            let x = random_point(&mut rng, 5);
            assert_eq!(inst.cubic_y.eval(&x), det3(&inst.phi(&x)));
            let t = random_point(&mut rng, 4);
            assert_eq!(inst.cubic_s.eval(&t), det3(&inst.sigma(&t)));
        }
    }
}

#[test]
fn subspaces_are_trace_orthogonal() {
    let inst = make_instance(2).unwrap();
    for a in &inst.lambda.basis {
        for b in &inst.lambda_perp.basis {
            assert!(trace_of_product(a, b).is_zero());
        }
    }
}

#[test]
fn every_node_is_rank_one_by_minors() {
    for seed in 1..=10 {
        let inst = make_instance(seed).unwrap();
        assert_eq!(inst.nodes.len(), 6);
        for (i, p) in inst.nodes.iter().enumerate() {
            let m = inst.phi(p);
            assert!(!m.is_zero() && minors_vanish(&m), "seed {seed} node {}", i + 1);
        }
    }
}

#[test]
fn odp_agrees_with_difference_hessian() {
    for seed in 1..=5 {
        let inst = make_instance(seed).unwrap();
        for p in &inst.nodes {
            let h = hessian_by_differences(&inst.cubic_y, p);
            assert_eq!(h.rank(), 4);
            assert!(is_odp(&inst.cubic_y, p).unwrap());
        }
    }
    let cone = MPoly::from_i64_terms(
        5,
        &[
            (&[1, 1, 1, 0, 0], 1),
            (&[1, 0, 0, 1, 1], 1),
            (&[0, 3, 0, 0, 0], 1),
            (&[0, 0, 0, 0, 3], 1),
            (&[0, 0, 3, 0, 0], 1),
        ],
    );
    let e0 = vec![int(1), int(0), int(0), int(0), int(0)];
    assert_eq!(hessian_by_differences(&cone, &e0).rank(), 4);
    assert!(is_odp(&cone, &e0).unwrap());
    let worse = MPoly::from_i64_terms(5, &[(&[1, 1, 1, 0, 0], 1), (&[0, 0, 0, 3, 0], 1), (&[0, 0, 0, 0, 3], 1)]);
    assert_eq!(hessian_by_differences(&worse, &e0).rank(), 2);
    assert!(!is_odp(&worse, &e0).unwrap());
}

/// Plücker coordinates of `ℓ_v` are cubic in `v`: along a pencil they span a `P³`.
#[test]
fn plucker_coordinates_are_cubic_along_pencils() {
    let inst = make_instance(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for kind in [LineKind::FromV, LineKind::FromVdual] {
        let a = random_line_param(&inst, kind, &mut rng).unwrap();
        let b = random_line_param(&inst, kind, &mut rng).unwrap();
        let rows: Vec<Vec<Rational>> = (0..8)
            .filter_map(|t| {
                let v: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x + y * int(t)).collect();
                let line = special_line(&inst, kind, &v).ok()?;
                let m = QMatrix::from_rows(line.points.clone());
                let pl: Vec<Rational> = (0..5)
                    .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
                    .map(|(i, j)| m.row(0)[i].clone() * m.row(1)[j].clone() - m.row(0)[j].clone() * m.row(1)[i].clone())
                    .collect();
                Some(pl)
            })
            .collect();
        assert!(rows.len() >= 6, "{kind:?}");
        assert_eq!(QMatrix::from_rows(rows).rank(), 4, "{kind:?}");
    }
}

#[test]
fn special_lines_classify_back_in_bulk() {
    let inst = make_instance(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for kind in LineKind::ALL {
        for _ in 0..50 {
            let param = random_line_param(&inst, kind, &mut rng).unwrap();
            let line = special_line(&inst, kind, &param).unwrap();
            assert!(line.lies_on(&inst.cubic_y).unwrap());
            assert_eq!(classify_line(&inst, &line).unwrap(), kind.family());
        }
    }
}

#[test]
fn execution_modes_and_json_roundtrip() {
    let a = make_instance_with(4, Exec::Sequential).unwrap();
    let b = make_instance_with(4, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    let back = DeterminantalInstance::from_json(&a.to_json().unwrap()).unwrap();
    assert_eq!(back, a);
    assert!(back.check(Exec::Sequential).unwrap().all_pass());
}
