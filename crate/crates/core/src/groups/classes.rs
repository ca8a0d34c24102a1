use log::debug;

use super::{generating_set, FiniteGroup, GroupView};
use crate::error::{internal, Error, Result};
use crate::ff::FieldElem;

/// Conjugacy classes of a finite group, ordered by (size, least element).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyData {
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
    inverse_perm: Vec<u32>,
    rep_orders: Vec<u64>,
    galois_perm: Option<Vec<u32>>,
}

impl ConjugacyData {
    /// Flood-fills conjugation orbits under the generators `gens`, which must
    /// generate `g`.
    pub fn compute<G: FiniteGroup>(g: &G, gens: &[u32]) -> ConjugacyData {
        let order = g.order();
        let inv_gens: Vec<u32> = gens.iter().map(|&s| g.inverse(s)).collect();
        let mut assigned = vec![false; order];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        let mut stack = Vec::new();
        for x in 0..order as u32 {
            if assigned[x as usize] {
                continue;
            }
            assigned[x as usize] = true;
            let mut orbit = vec![x];
            stack.push(x);
            while let Some(y) = stack.pop() {
                for (&s, &si) in gens.iter().zip(&inv_gens) {
                    let z = g.mul(g.mul(s, y), si);
                    if !assigned[z as usize] {
                        assigned[z as usize] = true;
                        orbit.push(z);
                        stack.push(z);
                    }
                }
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        ConjugacyData::from_classes(g, classes)
    }

    /// Builds class data from an explicit partition of the group.
    pub fn from_classes<G: FiniteGroup>(g: &G, mut classes: Vec<Vec<u32>>) -> ConjugacyData {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        let mut class_of = vec![u32::MAX; g.order()];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x as usize] = i as u32;
            }
        }
        let inverse_perm = classes.iter().map(|c| class_of[g.inverse(c[0]) as usize]).collect();
        let rep_orders = classes.iter().map(|c| g.element_order(c[0])).collect();
        ConjugacyData {
            class_of,
            classes,
            inverse_perm,
            rep_orders,
            galois_perm: None,
        }
    }

    /// Classes of a matrix group view, with the Frobenius permutation and
    /// every class size validated against an independently computed
    /// centralizer order.
    pub fn for_view(view: &GroupView, seed: u64) -> Result<ConjugacyData> {
        let gens = generating_set(view, seed);
        let mut data = ConjugacyData::compute(view, &gens);
        data.attach_galois(view)?;
        data.validate_view(view)?;
        debug!("{}: {} classes", view.name(), data.class_count());
        Ok(data)
    }

    /// Rebuilds class data from a stored element-to-class map. The map must
    /// be a partition into conjugation-stable sets numbered in canonical
    /// order; that the parts are single classes is left to the orthogonality
    /// check of the table stored alongside it.
    pub fn from_class_map(view: &GroupView, class_map: &[u32], seed: u64) -> Result<ConjugacyData> {
        if class_map.len() != view.len() {
            return Err(Error::ClassMismatch(format!(
                "class map has {} entries for a group of order {}",
                class_map.len(),
                view.len()
            )));
        }
        let count = class_map.iter().max().map_or(0, |&m| m as usize + 1);
        let mut classes = vec![Vec::new(); count];
        for (x, &c) in class_map.iter().enumerate() {
            classes[c as usize].push(x as u32);
        }
        if classes.iter().any(Vec::is_empty) {
            return Err(Error::ClassMismatch("class map skips a class index".into()));
        }
        for s in generating_set(view, seed) {
            let si = view.inverse(s);
            for x in 0..view.len() as u32 {
                let y = view.mul(view.mul(s, x), si);
                if class_map[y as usize] != class_map[x as usize] {
                    return Err(Error::ClassMismatch("stored class is not conjugation-stable".into()));
                }
            }
        }
        let mut data = ConjugacyData::from_classes(view, classes);
        if data.class_of != class_map {
            return Err(Error::ClassMismatch("stored classes are not in canonical order".into()));
        }
        data.attach_galois(view)?;
        Ok(data)
    }

    fn attach_galois(&mut self, view: &GroupView) -> Result<()> {
        let data = self;
        let amb = view.ambient();
        let galois = data
            .classes
            .iter()
            .map(|c| {
                let img = amb.frobenius(view.master(c[0]));
                view.local(img)
                    .map(|l| data.class_of[l as usize])
                    .ok_or_else(|| internal(format!("Frobenius leaves {}", view.name())))
            })
            .collect::<Result<Vec<u32>>>()?;
        data.galois_perm = Some(galois);
        Ok(())
    }

    fn validate_view(&self, view: &GroupView) -> Result<()> {
        let order = view.len() as u64;
        let total: u64 = self.classes.iter().map(|c| c.len() as u64).sum();
        if total != order {
            return Err(Error::ClassMismatch(format!("class sizes sum to {total}, not {order}")));
        }
        for (i, c) in self.classes.iter().enumerate() {
            let cent = centralizer_order(view, view.master(c[0]));
            if cent * c.len() as u64 != order {
                return Err(Error::ClassMismatch(format!(
                    "class {i} of {}: size {} but centralizer order {cent}",
                    view.name(),
                    c.len()
                )));
            }
        }
        for perm in [Some(&self.inverse_perm), self.galois_perm.as_ref()]
            .into_iter()
            .flatten()
        {
            if perm.iter().enumerate().any(|(i, &j)| perm[j as usize] != i as u32) {
                return Err(Error::ClassMismatch("class permutation is not an involution".into()));
            }
        }
        Ok(())
    }

    /// Class index of every element, by local index.
    pub fn class_map(&self) -> &[u32] {
        &self.class_of
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    #[inline]
    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn class_elements(&self, c: usize) -> &[u32] {
        &self.classes[c]
    }

    pub fn class_size(&self, c: usize) -> u64 {
        self.classes[c].len() as u64
    }

    /// Least element of the class.
    pub fn rep(&self, c: usize) -> u32 {
        self.classes[c][0]
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_perm[c] as usize
    }

    pub fn inverse_perm(&self) -> &[u32] {
        &self.inverse_perm
    }

    /// Class of the Frobenius image, for matrix groups.
    pub fn galois_class(&self, c: usize) -> Option<usize> {
        self.galois_perm.as_ref().map(|p| p[c] as usize)
    }

    pub fn galois_perm(&self) -> Option<&[u32]> {
        self.galois_perm.as_deref()
    }

    pub fn rep_order(&self, c: usize) -> u64 {
        self.rep_orders[c]
    }

    /// Exponent of the group: lcm of element orders.
    pub fn exponent(&self) -> u64 {
        crate::numtheory::lcm_all(self.rep_orders.iter().copied())
    }

    pub fn order(&self) -> u64 {
        self.class_of.len() as u64
    }

    /// Byte encoding of the partition used for cache digests.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.class_of.len() * 4 + self.classes.len() * 16);
        for c in &self.classes {
            out.extend_from_slice(&(c.len() as u32).to_le_bytes());
            out.extend_from_slice(&c[0].to_le_bytes());
        }
        for &x in &self.class_of {
            out.extend_from_slice(&x.to_le_bytes());
        }
        if let Some(g) = &self.galois_perm {
            for &x in g {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }
}

/// Order of the centralizer of the ambient element `x` inside `view`,
/// computed from the commutant algebra `{A : A·x = x·A}` over `E`.
pub fn centralizer_order(view: &GroupView, x: u32) -> u64 {
    let amb = view.ambient();
    let t = amb.tower();
    let n = amb.n();
    let nn = n * n;
    let a = |r: usize, c: usize| amb.entry(x, r, c);
    // Equations: Σ_k X[i][k]·a[k][j] − a[i][k]·X[k][j] = 0, unknown X[r][c] at r·n + c.
    let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(nn);
    for i in 0..n {
        for j in 0..n {
            let mut eq = vec![FieldElem::ZERO; nn];
            for k in 0..n {
                eq[i * n + k] = t.add(eq[i * n + k], a(k, j));
                eq[k * n + j] = t.sub(eq[k * n + j], a(i, k));
            }
            rows.push(eq);
        }
    }
    let basis = nullspace(t, rows, nn);
    let d = basis.len();
    let big_q = t.order();
    let mut coeffs = vec![0u64; d];
    let mut codes = vec![0u16; nn];
    let mut count = 0u64;
    loop {
        for (pos, c) in codes.iter_mut().enumerate() {
            let mut acc = FieldElem::ZERO;
            for (b, &k) in basis.iter().zip(&coeffs) {
                acc = t.add(acc, t.mul(FieldElem(k as u16), b[pos]));
            }
            *c = acc.0;
        }
        if let Some(i) = amb.index_of(&codes) {
            if view.contains(i) {
                count += 1;
            }
        }
        // next coefficient vector, little-endian odometer
        let mut pos = 0;
        loop {
            if pos == d {
                return count;
            }
            coeffs[pos] += 1;
            if coeffs[pos] < big_q {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}

/// Basis of the nullspace of the matrix with the given rows over `E`.
fn nullspace(t: &crate::ff::FieldTower, mut rows: Vec<Vec<FieldElem>>, cols: usize) -> Vec<Vec<FieldElem>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = t.inv(rows[r][c]).expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = t.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                for j in 0..cols {
                    let s = t.mul(f, rows[r][j]);
                    rows[i][j] = t.sub(rows[i][j], s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldElem::ZERO; cols];
            v[f] = FieldElem::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = t.neg(rows[i][f]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ff::FieldTower;
    use crate::groups::{GroupKind, MatrixGroup};

    fn view(n: usize, q: u64, kind: GroupKind) -> GroupView {
        let t = Arc::new(FieldTower::for_order(q).unwrap());
        let amb = Arc::new(MatrixGroup::enumerate(t, n, 1 << 21).unwrap());
        GroupView::new(amb, kind).unwrap()
    }

    #[test]
    fn class_counts_match_closed_forms() {
        let cases = [
            (2, 2, GroupKind::GlE, 15),
            (2, 2, GroupKind::SlE, 5),
            (2, 2, GroupKind::GlF, 3),
            (1, 3, GroupKind::GlE, 8),
            (2, 3, GroupKind::GlE, 80),
            (2, 3, GroupKind::GlF, 8),
        ];
        for (n, q, kind, k) in cases {
            let v = view(n, q, kind);
            let c = ConjugacyData::for_view(&v, 1).unwrap();
            assert_eq!(c.class_count(), k, "{}", v.name());
        }
    }

    #[test]
    fn ordering_and_permutations() {
        let v = view(2, 3, GroupKind::GlE);
        let c = ConjugacyData::for_view(&v, 3).unwrap();
        let id_class = c.class_of(v.identity());
        assert_eq!(c.inverse_class(id_class), id_class);
        assert_eq!(c.galois_class(id_class), Some(id_class));
        for i in 1..c.class_count() {
            let prev = (c.class_size(i - 1), c.rep(i - 1));
            assert!(prev < (c.class_size(i), c.rep(i)));
        }
        for i in 0..c.class_count() {
            let g = c.galois_class(i).unwrap();
            // σ and inversion commute
            assert_eq!(c.inverse_class(g), c.galois_class(c.inverse_class(i)).unwrap());
            if c.rep_order(i) <= 2 {
                assert_eq!(c.inverse_class(i), i);
            }
        }
        let c2 = ConjugacyData::for_view(&v, 99).unwrap();
        assert_eq!(c.classes(), c2.classes());
    }

    #[test]
    fn centralizer_of_identity_is_everything() {
        let v = view(2, 2, GroupKind::SlE);
        assert_eq!(centralizer_order(&v, v.ambient().identity()), 60);
    }

    #[test]
    fn class_map_round_trip_and_tampering() {
        let v = view(2, 2, GroupKind::GlE);
        let cls = ConjugacyData::for_view(&v, 3).unwrap();
        let back = ConjugacyData::from_class_map(&v, cls.class_map(), 5).unwrap();
        assert_eq!(back, cls);
        // merging two classes breaks canonical order or stability
        let mut merged = cls.class_map().to_vec();
        let last = cls.class_count() as u32 - 1;
        for c in merged.iter_mut() {
            if *c == last {
                *c = 1;
            }
        }
        assert!(ConjugacyData::from_class_map(&v, &merged, 5).is_err());
        // swapping one element into another class breaks stability
        let mut moved = cls.class_map().to_vec();
        let x = cls.class_elements(last as usize)[0] as usize;
        moved[x] = last - 1;
        assert!(ConjugacyData::from_class_map(&v, &moved, 5).is_err());
    }
}
