//! Conjugacy classes and tables of matrix groups against closed forms.

use std::sync::Arc;

use sldist_core::chartab::CharTable;
use sldist_core::ff::FieldTower;
use sldist_core::groups::{ConjugacyData, FiniteGroup, GroupKind, GroupView, MatrixGroup, DEFAULT_MAX_GROUP_ORDER};

fn ambient(n: usize, q: u64) -> Arc<MatrixGroup> {
    let tower = Arc::new(FieldTower::for_order(q).unwrap());
    Arc::new(MatrixGroup::enumerate(tower, n, DEFAULT_MAX_GROUP_ORDER).unwrap())
}

fn classes(amb: &Arc<MatrixGroup>, kind: GroupKind) -> (GroupView, ConjugacyData) {
    let view = GroupView::new(amb.clone(), kind).unwrap();
    let cls = ConjugacyData::for_view(&view, 1).unwrap();
    (view, cls)
}

/// Class number of `GL_2(F_r)` and `SL_2(F_r)`.
fn rank_two_class_numbers(r: u64) -> (u64, u64) {
    (r * r - 1, if r.is_multiple_of(2) { r + 1 } else { r + 4 })
}

#[test]
fn class_numbers_in_rank_two() {
    for q in [2, 3, 4, 5] {
        let amb = ambient(2, q);
        let (gl_e, sl_e) = rank_two_class_numbers(q * q);
        let (gl_f, sl_f) = rank_two_class_numbers(q);
        for (kind, expected) in [
            (GroupKind::GlE, gl_e),
            (GroupKind::SlE, sl_e),
            (GroupKind::GlF, gl_f),
            (GroupKind::SlF, sl_f),
            (GroupKind::Center, q * q - 1),
            (GroupKind::UnipotentE, q * q),
        ] {
            let (_, cls) = classes(&amb, kind);
            assert_eq!(cls.class_count() as u64, expected, "{kind:?} q={q}");
        }
    }
}

#[test]
fn class_numbers_of_gl_one_and_three() {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let (_, cls) = classes(&ambient(1, q), GroupKind::GlE);
        assert_eq!(cls.class_count() as u64, q * q - 1);
    }
    let r = 4u64;
    let (_, cls) = classes(&ambient(3, 2), GroupKind::GlE);
    assert_eq!(cls.class_count() as u64, r * r * r - r);
}

#[test]
fn class_sizes_divide_and_sum_to_the_order() {
    let amb = ambient(2, 3);
    for kind in [GroupKind::GlE, GroupKind::SlE, GroupKind::GlPlus, GroupKind::GlF] {
        let (view, cls) = classes(&amb, kind);
        let order = view.len() as u64;
        assert_eq!((0..cls.class_count()).map(|c| cls.class_size(c)).sum::<u64>(), order);
        assert!((0..cls.class_count()).all(|c| order.is_multiple_of(cls.class_size(c))));
        assert_eq!(cls.class_size(cls.class_of(view.identity())), 1);
    }
}

#[test]
fn frobenius_fixed_classes_and_rows() {
    for (n, q) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
        let amb = ambient(n, q);
        let (view, cls) = classes(&amb, GroupKind::GlE);
        let (_, base) = classes(&amb, GroupKind::GlF);
        // conjugacy in GL_n does not depend on the field, and every stable class has a rational point
        let fixed = (0..cls.class_count())
            .filter(|&c| cls.galois_class(c) == Some(c))
            .count();
        assert_eq!(fixed, base.class_count());
        // the permutation actions on rows and on classes have equally many fixed points
        let (t, _) = CharTable::for_view(&view, &cls).unwrap();
        let fixed_rows = (0..t.len()).filter(|&i| t.galois_row(i).unwrap() == i).count();
        assert_eq!(fixed_rows, fixed);
    }
}

#[test]
fn steinberg_vanishes_off_the_identity_on_unipotents() {
    for (n, q) in [(2, 2), (2, 3), (3, 2)] {
        let amb = ambient(n, q);
        let (view, cls) = classes(&amb, GroupKind::GlE);
        let (t, _) = CharTable::for_view(&view, &cls).unwrap();
        let p = amb.tower().p();
        let r = q * q;
        let steinberg = r.pow((n * (n - 1) / 2) as u32);
        let rows: Vec<usize> = (0..t.len()).filter(|&i| t.degree(i) == steinberg).collect();
        // the twists of the Steinberg character by linear characters
        assert_eq!(rows.len() as u64, r - 1);
        let unipotent: Vec<usize> = (0..cls.class_count())
            .filter(|&c| {
                let mut o = cls.rep_order(c);
                while o % p == 0 {
                    o /= p;
                }
                o == 1 && c != t.identity_class()
            })
            .collect();
        assert!(!unipotent.is_empty());
        for &i in &rows {
            assert!(unipotent.iter().all(|&c| t.value(i, c).is_zero()));
        }
    }
}

#[test]
fn twisting_by_determinant_characters_permutes_rows() {
    let amb = ambient(2, 2);
    let (view, cls) = classes(&amb, GroupKind::GlE);
    let (t, _) = CharTable::for_view(&view, &cls).unwrap();
    let units = amb.tower().order() - 1;
    for a in 0..units {
        let mut image: Vec<usize> = (0..t.len()).map(|i| t.twist_row(i, a).unwrap()).collect();
        assert!((0..t.len()).all(|i| t.degree(image[i]) == t.degree(i)));
        image.sort();
        image.dedup();
        assert_eq!(image.len(), t.len());
    }
    // linear characters are the twists of the trivial one
    let trivial = t.trivial_row();
    let mut linear: Vec<usize> = (0..units).map(|a| t.twist_row(trivial, a).unwrap()).collect();
    linear.sort();
    let mut expected: Vec<usize> = (0..t.len()).filter(|&i| t.degree(i) == 1).collect();
    expected.sort();
    assert_eq!(linear, expected);
}
