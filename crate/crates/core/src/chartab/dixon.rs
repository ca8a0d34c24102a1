//! Dixon–Schneider: common eigenvectors of the class-sum matrices modulo a
//! prime `ℓ ≡ 1 (mod e)`, lifted to eigenvalue multisets.

use std::collections::HashMap;

use log::debug;

use super::modp::{charpoly, eval_poly, nullspace, rref, Fp};
use super::rootsum::RootSum;
use crate::error::{internal, Result};
use crate::groups::{ConjugacyData, FiniteGroup};
use crate::numtheory::{isqrt, least_prime_congruent_one, root_of_unity};

/// Irreducible characters as eigenvalue multisets, sorted by
/// `(degree, values)`.
#[derive(Debug, Clone)]
pub struct DixonRows {
    pub exponent: u32,
    pub prime: u64,
    pub degrees: Vec<u64>,
    pub rows: Vec<Vec<RootSum>>,
}

struct Space {
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

/// Rows `s ∈ rows` of the class matrix of `C_r`:
/// `M[s][t] = #{y ∈ C_{r⁻¹} : y·g_t ∈ C_s} = |C_s|·#{x ∈ C_r : x·g_s ∈ C_t} / |C_t|`.
fn class_matrix_rows<G: FiniteGroup>(g: &G, cls: &ConjugacyData, r: usize, rows: &[usize]) -> HashMap<usize, Vec<u64>> {
    let k = cls.class_count();
    let cr = cls.class_elements(r);
    rows.iter()
        .map(|&s| {
            let gs = cls.rep(s);
            let mut count = vec![0u64; k];
            for &x in cr {
                count[cls.class_of(g.mul(x, gs))] += 1;
            }
            let cs = cls.class_size(s);
            for (t, c) in count.iter_mut().enumerate() {
                let num = *c * cs;
                debug_assert_eq!(num % cls.class_size(t), 0);
                *c = num / cls.class_size(t);
            }
            (s, count)
        })
        .collect()
}

/// Non-central classes, taking one class of each size in turn (largest size
/// first), so that every kind of class is tried early.
fn class_schedule(cls: &ConjugacyData) -> Vec<usize> {
    let mut by_size: std::collections::BTreeMap<std::cmp::Reverse<u64>, Vec<usize>> = Default::default();
    for r in 0..cls.class_count() {
        let size = cls.class_size(r);
        if size > 1 {
            by_size.entry(std::cmp::Reverse(size)).or_default().push(r);
        }
    }
    let mut queues: Vec<std::vec::IntoIter<usize>> = by_size.into_values().map(|v| v.into_iter()).collect();
    let mut out = Vec::new();
    loop {
        let before = out.len();
        out.extend(queues.iter_mut().filter_map(|it| it.next()));
        if out.len() == before {
            break;
        }
    }
    // Central classes matter only when the centre is not cyclic, since the
    // central split has already used a cyclic one.
    out.extend((0..cls.class_count()).filter(|&r| cls.class_size(r) == 1 && cls.rep_order(r) > 1));
    out
}

/// Splits the space of class functions by the central character: for a
/// generator `c` of a cyclic centre, `ω(K_{c·g}) = ω(K_c)·ω(K_g)`.
fn central_split<G: FiniteGroup>(g: &G, cls: &ConjugacyData, f: Fp, z: u64, e: u64) -> Vec<Space> {
    let k = cls.class_count();
    let central: Vec<usize> = (0..k).filter(|&c| cls.class_size(c) == 1).collect();
    let generator = central
        .iter()
        .copied()
        .find(|&c| cls.rep_order(c) == central.len() as u64);
    let Some(cgen) = generator else {
        let basis = (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect();
        return vec![Space {
            basis,
            pivots: (0..k).collect(),
        }];
    };
    let zc = cls.rep(cgen);
    let o = cls.rep_order(cgen);
    let tau: Vec<usize> = (0..k).map(|s| cls.class_of(g.mul(zc, cls.rep(s)))).collect();
    let mut seen = vec![false; k];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for s in 0..k {
        if seen[s] {
            continue;
        }
        let mut orbit = vec![s];
        seen[s] = true;
        let mut x = tau[s];
        while x != s {
            seen[x] = true;
            orbit.push(x);
            x = tau[x];
        }
        orbits.push(orbit);
    }
    let zo = f.pow(z, e / o);
    (0..o)
        .filter_map(|j| {
            let lambda = f.pow(zo, j);
            let mut basis = Vec::new();
            let mut pivots = Vec::new();
            for orbit in orbits.iter().filter(|orb| (j * orb.len() as u64).is_multiple_of(o)) {
                let mut v = vec![0u64; k];
                let mut val = 1;
                for &x in orbit {
                    v[x] = val;
                    val = f.mul(val, lambda);
                }
                basis.push(v);
                pivots.push(orbit[0]);
            }
            (!basis.is_empty()).then_some(Space { basis, pivots })
        })
        .collect()
}

fn split(f: Fp, sp: Space, m: &HashMap<usize, Vec<u64>>, k: usize) -> Result<Vec<Space>> {
    let d = sp.basis.len();
    let a: Vec<Vec<u64>> = sp
        .pivots
        .iter()
        .map(|&pi| {
            let row = &m[&pi];
            sp.basis
                .iter()
                .map(|b| {
                    let acc: u128 = row
                        .iter()
                        .zip(b)
                        .filter(|(&x, _)| x != 0)
                        .map(|(&x, &y)| x as u128 * y as u128)
                        .sum();
                    (acc % f.p as u128) as u64
                })
                .collect()
        })
        .collect();
    let poly = charpoly(f, &a);
    let roots: Vec<u64> = (0..f.p).filter(|&x| eval_poly(f, &poly, x) == 0).collect();
    if roots.len() <= 1 {
        return Ok(vec![sp]);
    }
    let mut out = Vec::with_capacity(roots.len());
    let mut total = 0;
    for lambda in roots {
        let shifted: Vec<Vec<u64>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r[i] = f.sub(r[i], lambda);
                r
            })
            .collect();
        let ns = nullspace(f, &shifted);
        total += ns.len();
        let mut basis: Vec<Vec<u64>> = ns
            .iter()
            .map(|c| {
                let mut v = vec![0u64; k];
                for (cj, bj) in c.iter().zip(&sp.basis) {
                    if *cj == 0 {
                        continue;
                    }
                    for (vt, &bt) in v.iter_mut().zip(bj) {
                        *vt = f.add(*vt, f.mul(*cj, bt));
                    }
                }
                v
            })
            .collect();
        let pivots = rref(f, &mut basis);
        out.push(Space { basis, pivots });
    }
    if total != d {
        return Err(internal(format!(
            "class matrix restricted to a {d}-dimensional space is not diagonalisable"
        )));
    }
    Ok(out)
}

/// Powers of one class representative per rational class, and the position
/// of every other class in that orbit.
struct PowerOrbit {
    order: u64,
    /// Distinct classes met by `g^l`, `l ∈ [0, order)`.
    classes: Vec<usize>,
    /// `dft[c][s] = Σ_{l : g^l ∈ classes[c]} ζ_o^{-s·l}` modulo `ℓ`.
    dft: Vec<Vec<u64>>,
}

fn power_orbits<G: FiniteGroup>(
    g: &G,
    cls: &ConjugacyData,
    f: Fp,
    z: u64,
    e: u64,
) -> (Vec<PowerOrbit>, Vec<(usize, u64)>) {
    let k = cls.class_count();
    let mut place: Vec<Option<(usize, u64)>> = vec![None; k];
    let mut orbits = Vec::new();
    for t in 0..k {
        if place[t].is_some() {
            continue;
        }
        let o = cls.rep_order(t);
        let x = cls.rep(t);
        let mut pow_class = Vec::with_capacity(o as usize);
        let mut y = g.identity();
        for _ in 0..o {
            pow_class.push(cls.class_of(y));
            y = g.mul(y, x);
        }
        let idx = orbits.len();
        for u in 1..o.max(2) {
            if num_integer::gcd(u, o) != 1 {
                continue;
            }
            let c = pow_class[(u % o) as usize];
            if place[c].is_none() {
                place[c] = Some((idx, u % o));
            }
        }
        if place[t].is_none() {
            place[t] = Some((idx, 1 % o.max(1)));
        }
        let mut classes: Vec<usize> = pow_class.clone();
        classes.sort_unstable();
        classes.dedup();
        let pos: HashMap<usize, usize> = classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let zo_inv = f.inv(f.pow(z, e / o));
        let table: Vec<u64> = (0..o).map(|m| f.pow(zo_inv, m)).collect();
        let mut dft = vec![vec![0u64; o as usize]; classes.len()];
        for (l, c) in pow_class.iter().enumerate() {
            let row = &mut dft[pos[c]];
            for (s, v) in row.iter_mut().enumerate() {
                *v = f.add(*v, table[(s as u64 * l as u64 % o) as usize]);
            }
        }
        orbits.push(PowerOrbit { order: o, classes, dft });
    }
    (
        orbits,
        place.into_iter().map(|p| p.expect("every class placed")).collect(),
    )
}

/// Computes every irreducible character of `g`.
pub fn dixon_schneider<G: FiniteGroup>(g: &G, cls: &ConjugacyData) -> Result<DixonRows> {
    let k = cls.class_count();
    let order = g.order() as u64;
    let e = cls.exponent();
    let root_order = isqrt(order) + 1;
    let ell = least_prime_congruent_one(e, 2 * root_order);
    if ell >= 1 << 32 {
        return Err(internal("modular prime exceeds 32 bits"));
    }
    let f = Fp::new(ell);
    let z = root_of_unity(e, ell);
    debug!("Dixon–Schneider: |G| = {order}, k = {k}, e = {e}, ℓ = {ell}");

    let mut pending = central_split(g, cls, f, z, e);
    let mut done: Vec<Vec<u64>> = Vec::with_capacity(k);
    let take_done = |spaces: Vec<Space>, done: &mut Vec<Vec<u64>>| -> Vec<Space> {
        spaces
            .into_iter()
            .filter_map(|mut s| {
                if s.basis.len() == 1 {
                    done.push(s.basis.pop().expect("one vector"));
                    None
                } else {
                    Some(s)
                }
            })
            .collect()
    };
    pending = take_done(pending, &mut done);
    for r in class_schedule(cls) {
        if pending.is_empty() {
            break;
        }
        let mut wanted: Vec<usize> = pending.iter().flat_map(|sp| sp.pivots.iter().copied()).collect();
        wanted.sort_unstable();
        let m = class_matrix_rows(g, cls, r, &wanted);
        let mut next = Vec::new();
        for sp in pending {
            next.extend(split(f, sp, &m, k)?);
        }
        pending = take_done(next, &mut done);
    }
    if !pending.is_empty() || done.len() != k {
        return Err(internal("class sums failed to separate the characters"));
    }

    let id_class = cls.class_of(g.identity());
    let size_inv: Vec<u64> = (0..k).map(|t| f.inv(cls.class_size(t) % ell)).collect();
    let mut values: Vec<(u64, Vec<u64>)> = Vec::with_capacity(k);
    for mut w in done {
        let norm = w[id_class];
        if norm == 0 {
            return Err(internal("central character vanishes at the identity"));
        }
        let ninv = f.inv(norm);
        for x in w.iter_mut() {
            *x = f.mul(*x, ninv);
        }
        let s = (0..k).fold(0, |acc, t| {
            let term = f.mul(f.mul(w[t], w[cls.inverse_class(t)]), size_inv[t]);
            f.add(acc, term)
        });
        if s == 0 {
            return Err(internal("degenerate orthogonality sum"));
        }
        let deg_sq = f.mul(order % ell, f.inv(s));
        let deg = (1..=isqrt(order))
            .find(|&d| d * d % ell == deg_sq)
            .ok_or_else(|| internal("no admissible character degree"))?;
        let chi: Vec<u64> = (0..k).map(|t| f.mul(f.mul(deg, w[t]), size_inv[t])).collect();
        values.push((deg, chi));
    }

    let (orbits, place) = power_orbits(g, cls, f, z, e);
    let mut rows: Vec<(u64, Vec<RootSum>)> = Vec::with_capacity(k);
    for (deg, chi) in values {
        let mut mults: Vec<Vec<u64>> = Vec::with_capacity(orbits.len());
        for orb in &orbits {
            let o = orb.order as usize;
            let mut acc = vec![0u64; o];
            let wide = (ell as u128 - 1).pow(2) * orb.classes.len() as u128 >= 1u128 << 64;
            for (ci, &c) in orb.classes.iter().enumerate() {
                let x = chi[c];
                if x == 0 {
                    continue;
                }
                for (a, &d) in acc.iter_mut().zip(&orb.dft[ci]) {
                    *a += x * d;
                    if wide {
                        *a %= ell;
                    }
                }
            }
            let oinv = f.inv(orb.order % ell);
            let mu: Vec<u64> = acc.iter().map(|&a| f.mul(a % ell, oinv)).collect();
            if mu.iter().any(|&m| m > deg) || mu.iter().sum::<u64>() != deg {
                return Err(internal(format!(
                    "eigenvalue multiplicities of a degree-{deg} character are not admissible"
                )));
            }
            mults.push(mu);
        }
        let row: Vec<RootSum> = (0..k)
            .map(|t| {
                let (oi, u) = place[t];
                let o = orbits[oi].order;
                let scale = e / o;
                RootSum::from_terms(
                    e as u32,
                    mults[oi]
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| m != 0)
                        .map(|(s, &m)| ((s as u64 * u % o) * scale, m as i64)),
                )
            })
            .collect();
        rows.push((deg, row));
    }
    rows.sort();
    Ok(DixonRows {
        exponent: e as u32,
        prime: ell,
        degrees: rows.iter().map(|r| r.0).collect(),
        rows: rows.into_iter().map(|r| r.1).collect(),
    })
}
