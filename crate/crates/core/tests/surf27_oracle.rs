//! Brute-force checks of the line-class combinatorics.

use std::collections::BTreeSet;

use flopkit::surf27::{
    disjoint_sextuples, double_six_involution, double_sixes, line_classes, partner, PicAutomorphism, PicClass,
};

#[test]
fn brute_force_line_search() {
    let mut found = BTreeSet::new();
    for d in 0..=4 {
        for code in 0..7i64.pow(6) {
            let mut m = [0i64; 6];
            let mut c = code;
            for slot in &mut m {
                *slot = c % 7 - 3;
                c /= 7;
            }
            let cls = PicClass::new(d, m);
            if cls.square() == -1 && cls.dot(&PicClass::canonical()) == -1 {
                found.insert(cls);
            }
        }
    }
    let listed: BTreeSet<_> = line_classes().into_iter().collect();
    assert_eq!(found, listed);
}

#[test]
fn every_involution_is_an_order_two_isometry() {
    let lines: BTreeSet<_> = line_classes().into_iter().collect();
    for s in disjoint_sextuples() {
        let inv = double_six_involution(&s).unwrap();
        assert!(inv.is_isometry());
        assert!(inv.fixes_canonical());
        assert_eq!(inv.compose(&inv), PicAutomorphism::identity());
        let image: BTreeSet<_> = lines.iter().map(|l| inv.apply(l)).collect();
        assert_eq!(image, lines);
        assert_eq!(partner(&partner(&s).unwrap()).unwrap(), s);
    }
}

#[test]
fn double_six_incidence() {
    let ds = double_sixes();
    assert_eq!(ds.len() * 2, disjoint_sextuples().len());
    for d in ds {
        let inv = double_six_involution(&d.first).unwrap();
        for a in &d.first.0 {
            let b = inv.apply(a);
            for a2 in &d.first.0 {
                assert_eq!(a2.dot(&b), if a2 == a { 0 } else { 1 });
            }
        }
    }
}
