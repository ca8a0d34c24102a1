//! Elements of `Q(ζ_e)` in the power basis `1, ζ, …, ζ^{φ(e)-1}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use num_traits::{Float, Num, ToPrimitive};

use crate::numtheory::factorize;

/// Coefficients of the `e`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(e: u32) -> Arc<[i64]> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<[i64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("poisoned").get(&e) {
        return p.clone();
    }
    let poly: Arc<[i64]> = compute_cyclotomic(e).into();
    cache.lock().expect("poisoned").insert(e, poly.clone());
    poly
}

/// `Φ_e = Π_{d | e} (x^d - 1)^{μ(e/d)}`, multiplying the positive factors
/// and dividing out the negative ones exactly.
fn compute_cyclotomic(e: u32) -> Vec<i64> {
    let primes: Vec<u32> = factorize(e as u64).into_iter().map(|(p, _)| p as u32).collect();
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for mask in 0u32..(1 << primes.len()) {
        let sqfree: u32 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .product();
        let d = (e / sqfree) as usize;
        let mut factor = vec![0i64; d + 1];
        factor[0] = -1;
        factor[d] = 1;
        if mask.count_ones() % 2 == 0 {
            num = poly_mul(&num, &factor);
        } else {
            den = poly_mul(&den, &factor);
        }
    }
    poly_div_exact(&num, &den)
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a polynomial with leading coefficient ±1.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd] / lead;
        quot[i] = c;
        for (j, &y) in den.iter().enumerate() {
            rem[i + j] -= c * y;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element of the `e`-th cyclotomic field with coefficients in `T`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic<T> {
    order: u32,
    coeffs: Vec<T>,
}

impl<T> Cyclotomic<T>
where
    T: Clone + Num + Neg<Output = T> + From<i64>,
{
    pub fn zero(order: u32) -> Self {
        let deg = cyclotomic_polynomial(order).len() - 1;
        Cyclotomic {
            order,
            coeffs: vec![T::zero(); deg],
        }
    }

    pub fn from_int(order: u32, c: T) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = c;
        z
    }

    /// `c·ζ^k`.
    pub fn root(order: u32, k: i64, c: T) -> Self {
        let mut v = vec![T::zero(); order as usize];
        v[k.rem_euclid(order as i64) as usize] = c;
        Self::from_root_vector(order, v)
    }

    /// Reduces `Σ v[k]·ζ^k` (exponents `0..e`) modulo `Φ_e`.
    pub fn from_root_vector(order: u32, v: Vec<T>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let mut rem = v;
        if rem.len() < deg {
            rem.resize(deg, T::zero());
        }
        for i in (deg..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate() {
                let idx = i - deg + j;
                rem[idx] = rem[idx].clone() - c.clone() * T::from(pj);
            }
        }
        rem.truncate(deg);
        Cyclotomic { order, coeffs: rem }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coefficients, length `φ(e)`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as an element of `T` if it is rational.
    pub fn as_rational(&self) -> Option<T> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coeffs[0].clone())
    }

    fn map_exponents(&self, f: impl Fn(usize) -> usize) -> Self {
        let e = self.order as usize;
        let mut v = vec![T::zero(); e];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = f(i) % e;
            v[k] = v[k].clone() + c.clone();
        }
        Self::from_root_vector(self.order, v)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let e = self.order as usize;
        self.map_exponents(|i| (e - i) % e)
    }

    /// The Galois automorphism `ζ ↦ ζ^u` for `u` coprime to `e`.
    pub fn galois(&self, u: u64) -> Self {
        let e = self.order as u64;
        debug_assert_eq!(num_integer::gcd(u, e), 1);
        self.map_exponents(|i| ((i as u64 * u) % e) as usize)
    }

    pub fn scale(&self, c: T) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Image in `C` under `ζ ↦ exp(2πi/e)`.
    pub fn to_complex<F: Float>(&self) -> Complex<F>
    where
        T: ToPrimitive,
    {
        let e = F::from(self.order).expect("order fits the float type");
        let two_pi = F::from(std::f64::consts::TAU).expect("float");
        self.coeffs
            .iter()
            .enumerate()
            .fold(Complex::new(F::zero(), F::zero()), |acc, (i, c)| {
                let c = F::from(c.clone()).expect("coefficient fits the float type");
                let angle = two_pi * F::from(i).expect("float") / e;
                acc + Complex::new(angle.cos(), angle.sin()) * c
            })
    }
}

impl<T> Add for &Cyclotomic<T>
where
    T: Clone + Num + Neg<Output = T> + From<i64>,
{
    type Output = Cyclotomic<T>;

    fn add(self, rhs: Self) -> Cyclotomic<T> {
        assert_eq!(self.order, rhs.order);
        Cyclotomic {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T> Sub for &Cyclotomic<T>
where
    T: Clone + Num + Neg<Output = T> + From<i64>,
{
    type Output = Cyclotomic<T>;

    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        assert_eq!(self.order, rhs.order);
        Cyclotomic {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T> Neg for &Cyclotomic<T>
where
    T: Clone + Num + Neg<Output = T> + From<i64>,
{
    type Output = Cyclotomic<T>;

    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl<T> Mul for &Cyclotomic<T>
where
    T: Clone + Num + Neg<Output = T> + From<i64>,
{
    type Output = Cyclotomic<T>;

    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        assert_eq!(self.order, rhs.order);
        let n = self.coeffs.len();
        let mut v = vec![T::zero(); (2 * n).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Cyclotomic::from_root_vector(self.order, v)
    }
}

impl<T: fmt::Debug> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc{}{:?}", self.order, self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CycInt, CycRat, Rational};

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(&*cyclotomic_polynomial(1), &[-1, 1]);
        assert_eq!(&*cyclotomic_polynomial(4), &[1, 0, 1]);
        assert_eq!(&*cyclotomic_polynomial(12), &[1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(3120).len() - 1, 768);
        // Φ_105 famously has a coefficient -2
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for e in [3u32, 8, 12, 15, 60] {
            let mut acc = CycInt::zero(e);
            for k in 0..e as i64 {
                acc = &acc + &CycInt::root(e, k, 1);
            }
            assert!(acc.is_zero(), "e = {e}");
        }
    }

    #[test]
    fn automorphisms_respect_products() {
        let e = 24;
        let a = &CycInt::root(e, 5, 3) + &CycInt::root(e, 7, -2);
        let b = &CycInt::root(e, 11, 1) + &CycInt::from_int(e, 4);
        let ab = &a * &b;
        assert_eq!(ab.conj(), &a.conj() * &b.conj());
        for u in [5u64, 7, 11, 13] {
            assert_eq!(ab.galois(u), &a.galois(u) * &b.galois(u));
        }
        let norm = &a * &a.conj();
        assert_eq!(norm.conj(), norm);
    }

    #[test]
    fn rational_coefficients() {
        let e = 6;
        let half = CycRat::from_int(e, Rational::new(1, 2));
        let z = CycRat::root(e, 1, Rational::from(1));
        let w = &half * &(&z + &z.conj());
        // ζ_6 + ζ_6^{-1} = 1
        assert_eq!(w.as_rational(), Some(Rational::new(1, 2)));
        let c = w.to_complex::<f64>();
        assert!((c.re - 0.5).abs() < 1e-12 && c.im.abs() < 1e-12);
    }
}
