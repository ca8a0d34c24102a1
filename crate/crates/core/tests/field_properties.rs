//! Algebraic laws of the field tower, checked on random elements.

use proptest::prelude::*;
use sldist_core::ff::{FieldElem, FieldTower};

const ORDERS: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 11];

fn tower_and_elements() -> impl Strategy<Value = (u64, u64, u64, u64)> {
    (0..ORDERS.len()).prop_flat_map(|i| {
        let q = ORDERS[i];
        let big = q * q;
        (Just(q), 0..big, 0..big, 0..big)
    })
}

fn elem(t: &FieldTower, i: u64) -> FieldElem {
    t.elements().nth(i as usize).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws((q, a, b, c) in tower_and_elements()) {
        let t = FieldTower::for_order(q).unwrap();
        let (a, b, c) = (elem(&t, a), elem(&t, b), elem(&t, c));
        prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
        prop_assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
        prop_assert_eq!(t.sub(t.add(a, b), b), a);
        if let Some(inv) = t.inv(a) {
            prop_assert_eq!(t.mul(a, inv), t.exp_of(0));
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn frobenius_norm_and_trace((q, a, b, _c) in tower_and_elements()) {
        let t = FieldTower::for_order(q).unwrap();
        let (a, b) = (elem(&t, a), elem(&t, b));
        prop_assert_eq!(t.frobenius(t.frobenius(a)), a);
        prop_assert_eq!(t.frobenius(a), t.pow(a, q));
        prop_assert_eq!(t.in_base(a), t.frobenius(a) == a);
        prop_assert_eq!(t.frobenius(t.mul(a, b)), t.mul(t.frobenius(a), t.frobenius(b)));
        prop_assert!(t.in_base(t.norm(a)) && t.in_base(t.trace(a)));
        prop_assert_eq!(t.norm(t.mul(a, b)), t.mul(t.norm(a), t.norm(b)));
        prop_assert_eq!(t.trace(t.add(a, b)), t.add(t.trace(a), t.trace(b)));
    }

    #[test]
    fn logarithms((q, a, _b, _c) in tower_and_elements()) {
        let t = FieldTower::for_order(q).unwrap();
        let a = elem(&t, a);
        match t.log(a) {
            Some(l) => {
                prop_assert!(l < q * q - 1);
                prop_assert_eq!(t.exp_of(l), a);
                prop_assert_eq!(t.pow(t.generator_e(), l), a);
            }
            None => prop_assert!(a.is_zero()),
        }
    }
}

#[test]
fn norm_is_onto_the_base_units() {
    for q in ORDERS {
        let t = FieldTower::for_order(q).unwrap();
        let mut image: Vec<FieldElem> = t.elements().filter(|x| !x.is_zero()).map(|x| t.norm(x)).collect();
        image.sort_by_key(|x| x.code());
        image.dedup();
        assert_eq!(image.len() as u64, q - 1);
        assert_eq!(t.base_elements().count() as u64, q);
    }
}
