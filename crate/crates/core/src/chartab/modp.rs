//! Dense linear algebra over a prime field `F_ℓ`, `ℓ < 2^32`.

use crate::numtheory::{mul_mod, pow_mod};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        assert!(p < 1 << 32);
        Fp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// `a` as a signed residue in `(-p/2, p/2]`.
    pub fn signed(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn mul_wide(self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
}

/// Characteristic polynomial `det(x·I - A)`, constant term first, via
/// reduction to upper Hessenberg form.
pub fn charpoly(f: Fp, a: &[Vec<u64>]) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if i != j + 1 {
            h.swap(i, j + 1);
            for row in h.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let pinv = f.inv(h[j + 1][j]);
        for r in j + 2..n {
            let u = f.mul(h[r][j], pinv);
            if u == 0 {
                continue;
            }
            for c in 0..n {
                let s = f.mul(u, h[j + 1][c]);
                h[r][c] = f.sub(h[r][c], s);
            }
            for row in h.iter_mut() {
                let s = f.mul(u, row[r]);
                row[j + 1] = f.add(row[j + 1], s);
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        // (x - h[m-1][m-1]) · p_{m-1}
        let prev = &polys[m - 1];
        let mut pm = vec![0u64; m + 1];
        for (i, &c) in prev.iter().enumerate() {
            pm[i + 1] = f.add(pm[i + 1], c);
            pm[i] = f.sub(pm[i], f.mul(c, h[m - 1][m - 1]));
        }
        let mut t = 1u64;
        for i in (1..m).rev() {
            t = f.mul(t, h[i][i - 1]);
            let coef = f.mul(t, h[i - 1][m - 1]);
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[i - 1].iter().enumerate() {
                pm[k] = f.sub(pm[k], f.mul(coef, c));
            }
        }
        polys.push(pm);
    }
    polys.pop().expect("at least the constant polynomial")
}

pub fn eval_poly(f: Fp, poly: &[u64], x: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(f: Fp, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let m = rows[i][c];
                let (src, dst) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, &s) in dst.iter_mut().zip(src.iter()) {
                    *d = f.sub(*d, f.mul(m, s));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A·x = 0}`.
pub fn nullspace(f: Fp, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut rows = a.to_vec();
    let pivots = rref(f, &mut rows);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[i][free]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_companion_matrix() {
        let f = Fp::new(101);
        // companion matrix of x³ - 6x² + 11x - 6 = (x-1)(x-2)(x-3)
        let a = vec![vec![0, 0, 6], vec![1, 0, f.neg(11)], vec![0, 1, 6]];
        let p = charpoly(f, &a);
        assert_eq!(p, vec![f.neg(6), 11, f.neg(6), 1]);
        for x in [1, 2, 3] {
            assert_eq!(eval_poly(f, &p, x), 0);
        }
    }

    #[test]
    fn charpoly_dense() {
        let f = Fp::new(10007);
        let a = vec![vec![2, 7, 1, 9], vec![3, 5, 8, 2], vec![4, 4, 1, 6], vec![9, 1, 3, 3]];
        let p = charpoly(f, &a);
        // Cayley–Hamilton: p(A) = 0
        let n = 4;
        let matmul = |x: &Vec<Vec<u64>>, y: &Vec<Vec<u64>>| {
            let mut z = vec![vec![0u64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        z[i][j] = f.add(z[i][j], f.mul(x[i][k], y[k][j]));
                    }
                }
            }
            z
        };
        let mut acc = vec![vec![0u64; n]; n];
        let mut pw: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
        for &c in &p {
            for i in 0..n {
                for j in 0..n {
                    acc[i][j] = f.add(acc[i][j], f.mul(c, pw[i][j]));
                }
            }
            pw = matmul(&pw, &a);
        }
        assert!(acc.iter().flatten().all(|&x| x == 0));
        // trace
        assert_eq!(p[3], f.neg(11));
    }

    #[test]
    fn nullspace_dimension() {
        let f = Fp::new(13);
        let a = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ns = nullspace(f, &a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &a {
                let s = row.iter().zip(&v).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                assert_eq!(s, 0);
            }
        }
    }
}
