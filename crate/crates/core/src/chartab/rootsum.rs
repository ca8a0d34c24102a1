//! Sums of `e`-th roots of unity with integer multiplicities.
//!
//! Character values are stored as the eigenvalue multiset of the
//! representing matrix, `Σ μ_s ζ^s`. For genuine characters this is a
//! canonical form, so equality of characters is structural equality.

use serde::{Deserialize, Serialize};

use super::cyclotomic::Cyclotomic;
use crate::numtheory::factorize;
use crate::CycInt;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootSum(Vec<(u32, i64)>);

impl RootSum {
    /// Normalises arbitrary `(exponent, coefficient)` pairs modulo `e`.
    pub fn from_terms(e: u32, terms: impl IntoIterator<Item = (u64, i64)>) -> RootSum {
        let mut v: Vec<(u32, i64)> = terms.into_iter().map(|(s, c)| ((s % e as u64) as u32, c)).collect();
        v.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(u32, i64)> = Vec::with_capacity(v.len());
        for (s, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += c,
                _ => out.push((s, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        RootSum(out)
    }

    pub fn integer(c: i64) -> RootSum {
        RootSum::from_terms(1, [(0, c)])
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.0
    }

    /// Value at `ζ = 1`; the degree for an eigenvalue multiset.
    pub fn weight(&self) -> i64 {
        self.0.iter().map(|t| t.1).sum()
    }

    /// Image under `ζ ↦ ζ^u`.
    pub fn scale_exponents(&self, u: u64, e: u32) -> RootSum {
        RootSum::from_terms(e, self.0.iter().map(|&(s, c)| (s as u64 * u, c)))
    }

    /// Multiplication by `ζ^shift`.
    pub fn shift(&self, shift: u64, e: u32) -> RootSum {
        RootSum::from_terms(e, self.0.iter().map(|&(s, c)| (s as u64 + shift, c)))
    }

    pub fn conj(&self, e: u32) -> RootSum {
        self.scale_exponents(e as u64 - 1, e)
    }

    /// Re-expresses a sum of `e`-th roots as a sum of `f`-th roots, `e | f`.
    pub fn lift(&self, e: u32, f: u32) -> RootSum {
        debug_assert_eq!(f % e, 0);
        self.scale_exponents((f / e) as u64, f)
    }

    /// Evaluates at a chosen root of unity given its table of powers.
    pub fn eval_mod(&self, powers: &[u64], modulus: u64) -> u64 {
        self.0.iter().fold(0, |acc, &(s, c)| {
            let c = c.rem_euclid(modulus as i64) as u64;
            (acc + c * powers[s as usize]) % modulus
        })
    }

    pub fn to_cyclotomic(&self, e: u32) -> CycInt {
        let mut v = vec![0i64; e as usize];
        for &(s, c) in &self.0 {
            v[s as usize] += c;
        }
        Cyclotomic::from_root_vector(e, v)
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self, e: u32) -> Option<i64> {
        let mut v = vec![0i64; e as usize];
        for &(s, c) in &self.0 {
            v[s as usize] += c;
        }
        TensorBasis::new(e).rational_part(&mut v)
    }
}

/// Reduction of root vectors `Σ v_k ζ^k` to the basis of `Z[ζ_e]` built as
/// the tensor product of the standard bases of `Z[ζ_{p^a}]` over the prime
/// powers `p^a ‖ e`.
#[derive(Clone, Debug)]
pub struct TensorBasis {
    e: u32,
    /// `(p, p^a)` for each prime power dividing `e`.
    factors: Vec<(u32, u32)>,
}

impl TensorBasis {
    pub fn new(e: u32) -> TensorBasis {
        let factors = factorize(e as u64)
            .into_iter()
            .map(|(p, a)| (p as u32, (p as u32).pow(a)))
            .collect();
        TensorBasis { e, factors }
    }

    pub fn order(&self) -> u32 {
        self.e
    }

    /// Reduces `v` in place to canonical coordinates: after the call, two
    /// vectors represent the same cyclotomic integer iff they are equal.
    pub fn reduce(&self, v: &mut [i64]) {
        let e = self.e as usize;
        debug_assert_eq!(v.len(), e);
        for &(p, pa) in &self.factors {
            let p = p as usize;
            let pa = pa as usize;
            let step = e / p;
            let top = pa / p;
            for k in 0..e {
                if v[k] == 0 || (k % pa) / top != p - 1 {
                    continue;
                }
                // Σ_{s<p} ζ^{k + s·e/p} = 0 moves the mass off the excluded digit.
                let c = v[k];
                v[k] = 0;
                for s in 1..p {
                    v[(k + s * step) % e] -= c;
                }
            }
        }
    }

    /// Reduces `v` and returns its value if rational.
    pub fn rational_part(&self, v: &mut [i64]) -> Option<i64> {
        self.reduce(v);
        v[1..].iter().all(|&c| c == 0).then_some(v[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vanishing_sums() {
        let e = 60;
        let tb = TensorBasis::new(e);
        for d in [2u32, 3, 5, 6, 10, 12, 15, 20, 30, 60] {
            let mut v = vec![0i64; e as usize];
            for j in 0..d {
                v[((7 + j * e / d) % e) as usize] += 1;
            }
            tb.reduce(&mut v);
            assert!(v.iter().all(|&c| c == 0), "d = {d}");
        }
    }

    #[test]
    fn integer_values() {
        // ζ_3 + ζ_3² = -1
        let r = RootSum::from_terms(3, [(1, 1), (2, 1)]);
        assert_eq!(r.as_integer(3), Some(-1));
        let r = RootSum::from_terms(12, [(3, 1)]);
        assert_eq!(r.as_integer(12), None);
        assert_eq!(RootSum::integer(5).as_integer(1), Some(5));
    }

    proptest! {
        #[test]
        fn tensor_reduction_agrees_with_cyclotomic_reduction(
            e in prop::sample::select(vec![4u32, 6, 12, 15, 20, 24, 30, 36, 60, 84]),
            terms in prop::collection::vec((0u64..1000, -3i64..4), 0..12),
            terms2 in prop::collection::vec((0u64..1000, -3i64..4), 0..12),
        ) {
            let a = RootSum::from_terms(e, terms);
            let b = RootSum::from_terms(e, terms2);
            let tb = TensorBasis::new(e);
            let vec_of = |r: &RootSum| {
                let mut v = vec![0i64; e as usize];
                for &(s, c) in r.terms() { v[s as usize] += c; }
                tb.reduce(&mut v);
                v
            };
            let equal_tensor = vec_of(&a) == vec_of(&b);
            let equal_power = a.to_cyclotomic(e) == b.to_cyclotomic(e);
            prop_assert_eq!(equal_tensor, equal_power);
            let zero_tensor = vec_of(&a).iter().all(|&c| c == 0);
            prop_assert_eq!(zero_tensor, a.to_cyclotomic(e).is_zero());
        }

        #[test]
        fn galois_action_is_a_ring_map(
            terms in prop::collection::vec((0u64..100, -3i64..4), 0..8),
            terms2 in prop::collection::vec((0u64..100, -3i64..4), 0..8),
            u in prop::sample::select(vec![1u64, 7, 11, 13, 17, 19, 23]),
        ) {
            let e = 24;
            let a = RootSum::from_terms(e, terms).to_cyclotomic(e);
            let b = RootSum::from_terms(e, terms2).to_cyclotomic(e);
            prop_assert_eq!((&a * &b).galois(u), &a.galois(u) * &b.galois(u));
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }
    }
}
