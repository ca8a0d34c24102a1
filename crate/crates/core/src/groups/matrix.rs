use std::sync::Arc;

use log::debug;

use super::{check_size_guard, FiniteGroup};
use crate::error::{internal, Error, Result};
use crate::ff::{FieldElem, FieldTower};

/// Hard cap on the dense key → index table.
const MAX_DENSE_KEYS: u64 = 1 << 28;

/// `GL_n(E)` with every element materialised.
///
/// Elements are numbered by their row-major entry codes read as a base-`|E|`
/// number, so the numbering only depends on the tower.
#[derive(Debug)]
pub struct MatrixGroup {
    tower: Arc<FieldTower>,
    n: usize,
    entries: Vec<u16>,
    lookup: Vec<u32>,
    inverse: Vec<u32>,
    det_log: Vec<u32>,
    identity: u32,
}

pub(crate) fn determinant(t: &FieldTower, n: usize, m: &[u16]) -> FieldElem {
    let mut a: Vec<FieldElem> = m.iter().map(|&c| FieldElem(c)).collect();
    let mut det = FieldElem::ONE;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
            return FieldElem::ZERO;
        };
        if piv != col {
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
            }
            det = t.neg(det);
        }
        let d = a[col * n + col];
        det = t.mul(det, d);
        let dinv = t.inv(d).expect("pivot is nonzero");
        for r in col + 1..n {
            let f = t.mul(a[r * n + col], dinv);
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                a[r * n + j] = t.sub(a[r * n + j], t.mul(f, a[col * n + j]));
            }
        }
    }
    det
}

impl MatrixGroup {
    /// Enumerates `GL_n(E)`, refusing if its order exceeds `guard`.
    pub fn enumerate(tower: Arc<FieldTower>, n: usize, guard: u64) -> Result<MatrixGroup> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be ≥ 1".into()));
        }
        check_size_guard(n, tower.q(), guard)?;
        let big_q = tower.order();
        let nn = (n * n) as u32;
        let keys = big_q
            .checked_pow(nn)
            .filter(|&k| k <= MAX_DENSE_KEYS)
            .ok_or_else(|| Error::InvalidParameter("matrix space too large to index".into()))?;
        let mut entries = Vec::new();
        let mut lookup = vec![u32::MAX; keys as usize];
        let mut det_log = Vec::new();
        let mut buf = vec![0u16; n * n];
        let mut count = 0u32;
        for key in 0..keys {
            let mut k = key;
            for pos in (0..n * n).rev() {
                buf[pos] = (k % big_q) as u16;
                k /= big_q;
            }
            let d = determinant(&tower, n, &buf);
            if let Some(l) = tower.log(d) {
                lookup[key as usize] = count;
                entries.extend_from_slice(&buf);
                det_log.push(l as u32);
                count += 1;
            }
        }
        let expected = super::gl_order(n, big_q as u128);
        if count as u128 != expected {
            return Err(internal(format!(
                "enumerated {count} invertible matrices, expected {expected}"
            )));
        }
        let mut ident = vec![0u16; n * n];
        for i in 0..n {
            ident[i * n + i] = 1;
        }
        let mut g = MatrixGroup {
            tower,
            n,
            entries,
            lookup,
            inverse: Vec::new(),
            det_log,
            identity: 0,
        };
        g.identity = g.index_of(&ident).expect("identity is invertible");
        g.inverse = (0..count).map(|i| g.invert(i)).collect();
        debug!("enumerated GL_{n}(F_{big_q}): {count} elements");
        Ok(g)
    }

    fn invert(&self, i: u32) -> u32 {
        let n = self.n;
        let t = &*self.tower;
        let mut a: Vec<FieldElem> = self.entries(i).iter().map(|&c| FieldElem(c)).collect();
        let mut b = vec![FieldElem::ZERO; n * n];
        for k in 0..n {
            b[k * n + k] = FieldElem::ONE;
        }
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .expect("matrix is invertible");
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
                b.swap(piv * n + j, col * n + j);
            }
            let dinv = t.inv(a[col * n + col]).expect("nonzero pivot");
            for j in 0..n {
                a[col * n + j] = t.mul(a[col * n + j], dinv);
                b[col * n + j] = t.mul(b[col * n + j], dinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = t.sub(a[r * n + j], t.mul(f, a[col * n + j]));
                    b[r * n + j] = t.sub(b[r * n + j], t.mul(f, b[col * n + j]));
                }
            }
        }
        let codes: Vec<u16> = b.iter().map(|e| e.0).collect();
        self.index_of(&codes).expect("inverse is invertible")
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.det_log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.det_log.is_empty()
    }

    /// Row-major entry codes of element `i`.
    #[inline]
    pub fn entries(&self, i: u32) -> &[u16] {
        let nn = self.n * self.n;
        &self.entries[i as usize * nn..(i as usize + 1) * nn]
    }

    pub fn entry(&self, i: u32, r: usize, c: usize) -> FieldElem {
        FieldElem(self.entries(i)[r * self.n + c])
    }

    /// Index of the matrix with the given entry codes, `None` if singular.
    #[inline]
    pub fn index_of(&self, codes: &[u16]) -> Option<u32> {
        let big_q = self.tower.order();
        let key = codes.iter().fold(0u64, |acc, &c| acc * big_q + c as u64);
        match self.lookup[key as usize] {
            u32::MAX => None,
            i => Some(i),
        }
    }

    /// Discrete log of the determinant, to the base `generator_e`.
    #[inline]
    pub fn det_log(&self, i: u32) -> u64 {
        self.det_log[i as usize] as u64
    }

    pub fn det(&self, i: u32) -> FieldElem {
        self.tower.exp_of(self.det_log(i))
    }

    /// Entrywise Frobenius `x ↦ x^q`.
    pub fn frobenius(&self, i: u32) -> u32 {
        let codes: Vec<u16> = self
            .entries(i)
            .iter()
            .map(|&c| self.tower.frobenius(FieldElem(c)).0)
            .collect();
        self.index_of(&codes).expect("Frobenius preserves invertibility")
    }

    pub fn is_over_base(&self, i: u32) -> bool {
        let q = self.tower.q() as u16;
        self.entries(i).iter().all(|&c| c < q)
    }

    pub fn is_upper_unitriangular(&self, i: u32) -> bool {
        let n = self.n;
        let e = self.entries(i);
        (0..n).all(|r| {
            (0..n).all(|c| match r.cmp(&c) {
                std::cmp::Ordering::Equal => e[r * n + c] == 1,
                std::cmp::Ordering::Greater => e[r * n + c] == 0,
                std::cmp::Ordering::Less => true,
            })
        })
    }

    pub fn is_scalar(&self, i: u32) -> bool {
        let n = self.n;
        let e = self.entries(i);
        (0..n).all(|r| {
            (0..n).all(|c| {
                if r == c {
                    e[r * n + c] == e[0]
                } else {
                    e[r * n + c] == 0
                }
            })
        })
    }

    /// Index of `diag(d_0, …, d_{n-1})`.
    pub fn diagonal(&self, diag: &[FieldElem]) -> Option<u32> {
        let n = self.n;
        let mut codes = vec![0u16; n * n];
        for (i, d) in diag.iter().enumerate() {
            codes[i * n + i] = d.0;
        }
        self.index_of(&codes)
    }

    /// Index of the scalar matrix `z·I`.
    pub fn scalar(&self, z: FieldElem) -> Option<u32> {
        self.diagonal(&vec![z; self.n])
    }

    /// Product of raw entry arrays.
    pub fn mul_codes(&self, a: &[u16], b: &[u16], out: &mut [u16]) {
        let n = self.n;
        let t = &*self.tower;
        for r in 0..n {
            for c in 0..n {
                let mut acc = FieldElem::ZERO;
                for k in 0..n {
                    acc = t.add(acc, t.mul(FieldElem(a[r * n + k]), FieldElem(b[k * n + c])));
                }
                out[r * n + c] = acc.0;
            }
        }
    }
}

impl FiniteGroup for MatrixGroup {
    fn order(&self) -> usize {
        self.len()
    }

    fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        let mut buf = [0u16; 16];
        let nn = self.n * self.n;
        if nn <= 16 {
            self.mul_codes(self.entries(a), self.entries(b), &mut buf[..nn]);
            self.index_of(&buf[..nn])
        } else {
            let mut v = vec![0u16; nn];
            self.mul_codes(self.entries(a), self.entries(b), &mut v);
            self.index_of(&v)
        }
        .expect("product of invertible matrices is invertible")
    }

    #[inline]
    fn inverse(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(n: usize, q: u64) -> MatrixGroup {
        let t = Arc::new(FieldTower::for_order(q).unwrap());
        MatrixGroup::enumerate(t, n, super::super::DEFAULT_MAX_GROUP_ORDER).unwrap()
    }

    #[test]
    fn orders_and_inverses() {
        let g = gl(2, 2);
        assert_eq!(g.len(), 180);
        for i in 0..g.len() as u32 {
            assert_eq!(g.mul(i, g.inverse(i)), g.identity());
            assert_eq!(g.inverse(g.inverse(i)), i);
        }
        assert_eq!(gl(1, 3).len(), 8);
        assert_eq!(gl(2, 3).len(), 5760);
    }

    #[test]
    fn determinant_is_multiplicative() {
        let g = gl(2, 3);
        let t = g.tower();
        for a in (0..g.len() as u32).step_by(37) {
            for b in (0..g.len() as u32).step_by(53) {
                let ab = g.mul(a, b);
                assert_eq!(g.det(ab), t.mul(g.det(a), g.det(b)));
            }
        }
    }

    #[test]
    fn associativity_sample() {
        let g = gl(2, 2);
        for a in (0..180).step_by(7) {
            for b in (0..180).step_by(11) {
                for c in (0..180).step_by(13) {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn frobenius_is_an_involutive_automorphism() {
        let g = gl(2, 2);
        for a in 0..180u32 {
            assert_eq!(g.frobenius(g.frobenius(a)), a);
            assert_eq!(g.frobenius(a) == a, g.is_over_base(a));
            for b in (0..180u32).step_by(17) {
                assert_eq!(g.frobenius(g.mul(a, b)), g.mul(g.frobenius(a), g.frobenius(b)));
            }
        }
    }
}
