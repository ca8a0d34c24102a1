//! Verified character tables and the character sums built on them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::dixon::dixon_schneider;
use super::rootsum::RootSum;
use crate::error::{internal, Error, Result};
use crate::groups::{ConjugacyData, FiniteGroup, GroupView};
use crate::numtheory::{largest_prime_congruent_one_below, lcm_all, root_of_unity};
use crate::{CycInt, CycRat, Rational};

/// Everything a character table is made of; what the cache stores.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableParts {
    pub name: String,
    pub order: u64,
    /// Values are sums of `exponent`-th roots of unity.
    pub exponent: u32,
    pub identity_class: usize,
    pub class_sizes: Vec<u64>,
    pub inverse_perm: Vec<u32>,
    pub galois_perm: Option<Vec<u32>>,
    /// Discrete log of the determinant on each class, for matrix groups,
    /// together with the order of the cyclic group it lives in.
    pub det_logs: Option<(Vec<u64>, u64)>,
    pub degrees: Vec<u64>,
    /// One eigenvalue multiset per (row, class).
    pub rows: Vec<Vec<RootSum>>,
}

#[derive(Debug)]
pub struct CharTable {
    parts: TableParts,
    index: OnceLock<HashMap<Vec<RootSum>, usize>>,
}

impl Clone for CharTable {
    fn clone(&self) -> Self {
        CharTable::unchecked(self.parts.clone())
    }
}

impl PartialEq for CharTable {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

/// Outcome of [`CharTable::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCheck {
    pub rows: usize,
    pub classes: usize,
    pub degree_square_sum: u64,
    pub order: u64,
    /// Primes at which both Gram matrices were checked.
    pub primes: Vec<u64>,
}

/// Reduction of cyclotomic integers modulo a prime `ℓ ≡ 1 (mod e)`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub exponent: u32,
    pub prime: u64,
    powers: Vec<u64>,
}

impl Embedding {
    pub fn new(exponent: u32, prime: u64) -> Embedding {
        assert_eq!((prime - 1) % exponent as u64, 0);
        let z = root_of_unity(exponent as u64, prime);
        let mut powers = Vec::with_capacity(exponent as usize);
        let mut x = 1u64;
        for _ in 0..exponent {
            powers.push(x);
            x = x * z % prime;
        }
        Embedding {
            exponent,
            prime,
            powers,
        }
    }

    /// The `count`-th largest prime `≡ 1 (mod e)` below `2^31`.
    pub fn nth_large(exponent: u32, count: usize) -> Result<Embedding> {
        let mut upper = 1u64 << 31;
        let mut prime = 0;
        for _ in 0..=count {
            prime = largest_prime_congruent_one_below(exponent as u64, upper)
                .ok_or_else(|| internal("no prime of the required shape below 2^31"))?;
            upper = prime;
        }
        Ok(Embedding::new(exponent, prime))
    }

    /// `ζ_e^s`.
    pub fn root(&self, s: u64) -> u64 {
        self.powers[(s % self.exponent as u64) as usize]
    }

    /// `ζ_{order}^s` for `order | e`.
    pub fn root_of_order(&self, order: u64, s: u64) -> u64 {
        debug_assert_eq!(self.exponent as u64 % order, 0);
        self.root(s % order * (self.exponent as u64 / order))
    }

    /// Image of a sum of `e'`-th roots of unity, `e' | e`.
    pub fn eval(&self, x: &RootSum, of_exponent: u32) -> u64 {
        let scale = (self.exponent / of_exponent) as u64;
        x.terms().iter().fold(0, |acc, &(s, c)| {
            let c = c.rem_euclid(self.prime as i64) as u64;
            (acc + c * self.root(s as u64 * scale)) % self.prime
        })
    }

    /// Values of every row of `table`, row-major.
    pub fn values(&self, table: &CharTable) -> Vec<Vec<u64>> {
        table
            .rows()
            .iter()
            .map(|row| row.iter().map(|x| self.eval(x, table.exponent())).collect())
            .collect()
    }

    pub fn inv(&self, a: u64) -> u64 {
        crate::numtheory::pow_mod(a % self.prime, self.prime - 2, self.prime)
    }
}

/// A linear character of a subgroup `H ≤ G` pushed to the classes of `G`:
/// `(1/|H|) Σ_{h ∈ H} χ(h)·conj λ(h)` is `Σ_c coeff_c·χ(c)`.
#[derive(Clone, Debug, Default)]
pub struct SubgroupSum {
    pub order: u64,
    /// `(class of G, exponent s of λ(h) = ζ_root_order^s) ↦ count`.
    pub terms: BTreeMap<(usize, u64), u64>,
    pub root_order: u64,
}

impl SubgroupSum {
    pub fn new(order: u64, root_order: u64) -> SubgroupSum {
        SubgroupSum {
            order,
            terms: BTreeMap::new(),
            root_order,
        }
    }

    pub fn add(&mut self, class: usize, exponent: u64, count: u64) {
        *self.terms.entry((class, exponent % self.root_order)).or_insert(0) += count;
    }

    pub fn element_count(&self) -> u64 {
        self.terms.values().sum()
    }
}

impl CharTable {
    fn unchecked(parts: TableParts) -> CharTable {
        CharTable {
            parts,
            index: OnceLock::new(),
        }
    }

    /// Verifies `parts` exactly and wraps them.
    pub fn from_parts(parts: TableParts) -> Result<(CharTable, TableCheck)> {
        let t = CharTable::unchecked(parts);
        let check = t.verify()?;
        Ok((t, check))
    }

    /// Runs Dixon–Schneider on a generic finite group and verifies the
    /// result.
    pub fn compute<G: FiniteGroup>(
        name: impl Into<String>,
        g: &G,
        cls: &ConjugacyData,
        det_logs: Option<(Vec<u64>, u64)>,
    ) -> Result<(CharTable, TableCheck)> {
        let d = dixon_schneider(g, cls)?;
        CharTable::from_parts(TableParts {
            name: name.into(),
            order: g.order() as u64,
            exponent: d.exponent,
            identity_class: cls.class_of(g.identity()),
            class_sizes: (0..cls.class_count()).map(|c| cls.class_size(c)).collect(),
            inverse_perm: cls.inverse_perm().to_vec(),
            galois_perm: cls.galois_perm().map(<[u32]>::to_vec),
            det_logs,
            degrees: d.degrees,
            rows: d.rows,
        })
    }

    /// Table of a matrix group view, carrying determinants for twists.
    pub fn for_view(view: &GroupView, cls: &ConjugacyData) -> Result<(CharTable, TableCheck)> {
        let amb = view.ambient();
        let logs = (0..cls.class_count())
            .map(|c| amb.det_log(view.master(cls.rep(c))))
            .collect();
        let modulus = amb.tower().order() - 1;
        CharTable::compute(view.name(), view, cls, Some((logs, modulus)))
    }

    pub fn parts(&self) -> &TableParts {
        &self.parts
    }

    pub fn name(&self) -> &str {
        &self.parts.name
    }

    pub fn order(&self) -> u64 {
        self.parts.order
    }

    pub fn exponent(&self) -> u32 {
        self.parts.exponent
    }

    pub fn class_count(&self) -> usize {
        self.parts.class_sizes.len()
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.parts.class_sizes
    }

    pub fn identity_class(&self) -> usize {
        self.parts.identity_class
    }

    pub fn degrees(&self) -> &[u64] {
        &self.parts.degrees
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.parts.degrees[i]
    }

    pub fn rows(&self) -> &[Vec<RootSum>] {
        &self.parts.rows
    }

    pub fn row(&self, i: usize) -> &[RootSum] {
        &self.parts.rows[i]
    }

    pub fn len(&self) -> usize {
        self.parts.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.rows.is_empty()
    }

    /// `χ_i(C_t)` as a cyclotomic integer.
    pub fn value(&self, i: usize, t: usize) -> CycInt {
        self.parts.rows[i][t].to_cyclotomic(self.exponent())
    }

    /// The index of the trivial character.
    pub fn trivial_row(&self) -> usize {
        let k = self.class_count();
        self.find_row(&vec![RootSum::integer(1); k])
            .expect("verified tables contain the trivial character")
    }

    fn index(&self) -> &HashMap<Vec<RootSum>, usize> {
        self.index.get_or_init(|| {
            self.parts
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| (r.clone(), i))
                .collect()
        })
    }

    /// Row with exactly these values.
    pub fn find_row(&self, values: &[RootSum]) -> Option<usize> {
        self.index().get(values).copied()
    }

    fn lookup(&self, values: Vec<RootSum>, what: &str) -> Result<usize> {
        self.find_row(&values)
            .ok_or_else(|| Error::TableVerification(format!("{what} of a row is not a row")))
    }

    /// Row of `class ↦ χ_i(perm(class))`.
    pub fn permuted_row(&self, i: usize, perm: &[u32]) -> Result<usize> {
        let row = &self.parts.rows[i];
        self.lookup(
            perm.iter().map(|&p| row[p as usize].clone()).collect(),
            "class permutation",
        )
    }

    /// `χ^∨`.
    pub fn dual_row(&self, i: usize) -> Result<usize> {
        self.permuted_row(i, &self.parts.inverse_perm)
    }

    /// `χ^σ`, for matrix groups stable under Frobenius.
    pub fn galois_row(&self, i: usize) -> Result<usize> {
        let perm = self
            .parts
            .galois_perm
            .as_ref()
            .ok_or_else(|| internal("table has no Frobenius permutation"))?;
        self.permuted_row(i, perm)
    }

    /// `χ ⊗ (μ∘det)` where `μ(g^m) = ζ_{modulus}^{exponent·m}` on the cyclic
    /// group of determinants.
    pub fn twist_row(&self, i: usize, exponent: u64) -> Result<usize> {
        let (logs, modulus) = self
            .parts
            .det_logs
            .as_ref()
            .ok_or_else(|| internal("table has no determinant data"))?;
        let e = self.exponent() as u64;
        if !e.is_multiple_of(*modulus) {
            return Err(internal("determinant characters are not realised in the value field"));
        }
        let step = e / modulus;
        let row = &self.parts.rows[i];
        let twisted = row
            .iter()
            .zip(logs)
            .map(|(x, &l)| x.shift(exponent % modulus * l % modulus * step, self.exponent()))
            .collect();
        self.lookup(twisted, "twist")
    }

    /// Exact `(1/|G|) Σ_t |C_t|·a_t·conj(b_t)` of two class functions.
    pub fn inner_product(&self, a: &[CycInt], b: &[CycInt]) -> Result<Rational> {
        if a.len() != self.class_count() || b.len() != self.class_count() {
            return Err(Error::InvalidParameter("class function of the wrong length".into()));
        }
        let e = self.exponent();
        let mut acc = CycInt::zero(e);
        for ((x, y), &size) in a.iter().zip(b).zip(self.class_sizes()) {
            acc = &acc + &(x * &y.conj()).scale(size as i64);
        }
        let lifted = CycRat::from_root_vector(e, acc.coeffs().iter().map(|&c| Rational::from(c)).collect());
        lifted
            .as_rational()
            .map(|r| r / Rational::from(self.order() as i64))
            .ok_or_else(|| internal("inner product of class functions is not rational"))
    }

    /// Row values as cyclotomic integers.
    pub fn row_values(&self, i: usize) -> Vec<CycInt> {
        (0..self.class_count()).map(|t| self.value(i, t)).collect()
    }

    /// `(1/|H|) Σ_h χ_i(h)·conj λ(h)` for every row, exact because each is
    /// an integer in `[0, deg χ_i]`.
    pub fn subgroup_multiplicities(&self, emb: &Embedding, sum: &SubgroupSum) -> Result<Vec<u64>> {
        let values = emb.values(self);
        self.subgroup_multiplicities_with(emb, &values, sum)
    }

    /// As [`Self::subgroup_multiplicities`], reusing precomputed values.
    pub fn subgroup_multiplicities_with(
        &self,
        emb: &Embedding,
        values: &[Vec<u64>],
        sum: &SubgroupSum,
    ) -> Result<Vec<u64>> {
        let l = emb.prime;
        let mut coeff = vec![0u64; self.class_count()];
        for (&(c, s), &count) in &sum.terms {
            let conj = emb.root_of_order(sum.root_order, sum.root_order - s % sum.root_order);
            coeff[c] = (coeff[c] + count % l * conj) % l;
        }
        let hinv = emb.inv(sum.order);
        values
            .iter()
            .zip(self.degrees())
            .map(|(row, &deg)| {
                let s = row.iter().zip(&coeff).fold(0u64, |acc, (&x, &c)| (acc + x * c % l) % l);
                let m = s * hinv % l;
                if m > deg {
                    Err(Error::TableVerification(format!(
                        "restriction multiplicity residue {m} exceeds degree {deg}"
                    )))
                } else {
                    Ok(m)
                }
            })
            .collect()
    }

    /// `⟨Res χ_i, ψ_j⟩_H` for every row `i` of `self` and `j` of `sub`,
    /// where `fusion[c]` is the class of `self` containing the class `c` of
    /// `sub`.
    pub fn restriction_matrix(&self, sub: &CharTable, fusion: &[usize], emb: &Embedding) -> Result<Vec<Vec<u64>>> {
        if fusion.len() != sub.class_count() {
            return Err(Error::InvalidParameter("fusion map of the wrong length".into()));
        }
        let l = emb.prime;
        let big = emb.values(self);
        // conj ψ_j(c)·|c| / |H|
        let hinv = emb.inv(sub.order());
        let weights: Vec<Vec<u64>> = sub
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .zip(sub.class_sizes())
                    .map(|(x, &size)| emb.eval(&x.conj(sub.exponent()), sub.exponent()) * (size % l) % l * hinv % l)
                    .collect()
            })
            .collect();
        big.iter()
            .enumerate()
            .map(|(i, brow)| {
                weights
                    .iter()
                    .enumerate()
                    .map(|(j, w)| {
                        let m = fusion
                            .iter()
                            .zip(w)
                            .fold(0u64, |acc, (&c, &x)| (acc + brow[c] * x % l) % l);
                        if m * sub.degree(j) > self.degree(i) {
                            Err(Error::TableVerification(format!(
                                "restriction multiplicity residue {m} for rows ({i}, {j}) is out of range"
                            )))
                        } else {
                            Ok(m)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact verification: shape, degrees, eigenvalue multisets, the dual and
    /// Galois closure of the rows, then both orthogonality relations modulo
    /// enough primes to exclude any nonzero error.
    ///
    /// The rows are closed under every automorphism of `Q(ζ_e)`, so each
    /// Gram entry and its conjugates are Gram entries; congruence at one
    /// prime above `ℓ` for all entries gives divisibility by `ℓ`, and a
    /// product of primes above the archimedean bound forces equality.
    pub fn verify(&self) -> Result<TableCheck> {
        let p = &self.parts;
        let k = p.class_sizes.len();
        let fail = |msg: String| Err(Error::TableVerification(format!("{}: {msg}", p.name)));
        if p.rows.len() != k || p.degrees.len() != k {
            return fail(format!("{} rows for {k} classes", p.rows.len()));
        }
        if p.class_sizes.iter().sum::<u64>() != p.order {
            return fail("class sizes do not sum to the group order".into());
        }
        if p.inverse_perm.len() != k || p.galois_perm.as_ref().is_some_and(|g| g.len() != k) {
            return fail("class permutation of the wrong length".into());
        }
        let dsq: u64 = p.degrees.iter().map(|d| d * d).sum();
        if dsq != p.order {
            return fail(format!("Σ deg² = {dsq}, |G| = {}", p.order));
        }
        let e = p.exponent;
        for (i, row) in p.rows.iter().enumerate() {
            let deg = p.degrees[i] as i64;
            if row.len() != k {
                return fail(format!("row {i} has {} entries", row.len()));
            }
            if row[p.identity_class] != RootSum::from_terms(e, [(0, deg)]) {
                return fail(format!("row {i} is not {deg} at the identity"));
            }
            for (t, x) in row.iter().enumerate() {
                if x.weight() != deg || x.terms().iter().any(|&(s, c)| c <= 0 || s >= e) {
                    return fail(format!("entry ({i}, {t}) is not a multiset of {deg} roots of unity"));
                }
                if x.conj(e) != row[p.inverse_perm[t] as usize] {
                    return fail(format!("entry ({i}, {t}) is not conjugate to its inverse class"));
                }
            }
        }
        let rowset: HashSet<&Vec<RootSum>> = p.rows.iter().collect();
        if rowset.len() != k {
            return fail("repeated row".into());
        }
        for u in unit_generators(e as u64) {
            for (i, row) in p.rows.iter().enumerate() {
                let img: Vec<RootSum> = row.iter().map(|x| x.scale_exponents(u, e)).collect();
                if !rowset.contains(&img) {
                    return fail(format!("Galois image ζ ↦ ζ^{u} of row {i} is not a row"));
                }
            }
        }

        let maxdeg = p.degrees.iter().copied().max().unwrap_or(1) as u128;
        let bound = p.order as u128 * (maxdeg * maxdeg + 1);
        let mut product = 1u128;
        let mut primes = Vec::new();
        while product <= bound {
            let emb = Embedding::nth_large(e, primes.len())?;
            self.gram_check(&emb)?;
            product = product.saturating_mul(emb.prime as u128);
            primes.push(emb.prime);
        }
        Ok(TableCheck {
            rows: p.rows.len(),
            classes: k,
            degree_square_sum: dsq,
            order: p.order,
            primes,
        })
    }

    fn gram_check(&self, emb: &Embedding) -> Result<()> {
        let p = &self.parts;
        let l = emb.prime;
        let k = p.class_sizes.len();
        let vals = emb.values(self);
        let conj: Vec<Vec<u64>> = vals
            .iter()
            .map(|row| p.inverse_perm.iter().map(|&t| row[t as usize]).collect())
            .collect();
        let weighted: Vec<Vec<u64>> = vals
            .iter()
            .map(|row| row.iter().zip(&p.class_sizes).map(|(&x, &s)| x * (s % l) % l).collect())
            .collect();
        let order = p.order % l;
        for i in 0..k {
            for j in 0..k {
                let s: u128 = weighted[i]
                    .iter()
                    .zip(&conj[j])
                    .map(|(&a, &b)| a as u128 * b as u128)
                    .sum();
                let want = if i == j { order } else { 0 };
                if (s % l as u128) as u64 != want {
                    return Err(Error::TableVerification(format!(
                        "{}: rows {i}, {j} are not orthonormal (mod {l})",
                        p.name
                    )));
                }
            }
        }
        for s in 0..k {
            for t in 0..k {
                let acc: u128 = (0..k).map(|i| vals[i][s] as u128 * conj[i][t] as u128).sum();
                let want = if s == t { p.order / p.class_sizes[s] % l } else { 0 };
                if (acc % l as u128) as u64 != want {
                    return Err(Error::TableVerification(format!(
                        "{}: columns {s}, {t} are not orthogonal (mod {l})",
                        p.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A generating set of `(Z/e)^×`, greedily.
pub fn unit_generators(e: u64) -> Vec<u64> {
    if e <= 2 {
        return Vec::new();
    }
    let mut inside = vec![false; e as usize];
    inside[1] = true;
    let mut members = vec![1u64];
    let mut gens = Vec::new();
    for u in 2..e {
        if num_integer::gcd(u, e) != 1 || inside[u as usize] {
            continue;
        }
        gens.push(u);
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x * g % e;
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// Exponent large enough for the values of every listed table and for the
/// `extra` roots of unity.
pub fn common_exponent(tables: &[&CharTable], extra: &[u64]) -> u32 {
    lcm_all(tables.iter().map(|t| t.exponent() as u64).chain(extra.iter().copied())) as u32
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ff::FieldTower;
    use crate::groups::{GroupKind, MatrixGroup};

    fn table(n: usize, q: u64, kind: GroupKind) -> (GroupView, ConjugacyData, CharTable) {
        let t = Arc::new(FieldTower::for_order(q).unwrap());
        let amb = Arc::new(MatrixGroup::enumerate(t, n, 1 << 21).unwrap());
        let v = GroupView::new(amb, kind).unwrap();
        let c = ConjugacyData::for_view(&v, 1).unwrap();
        let (tab, _) = CharTable::for_view(&v, &c).unwrap();
        (v, c, tab)
    }

    #[test]
    fn unit_group_generators() {
        assert_eq!(unit_generators(8), vec![3, 5]);
        assert_eq!(unit_generators(7), vec![2, 3]);
        assert!(unit_generators(2).is_empty());
    }

    #[test]
    fn gl1_f9_actions_on_characters() {
        let (_, _, tab) = table(1, 3, GroupKind::GlE);
        assert_eq!(tab.len(), 8);
        // the row of a faithful character χ: twisting the trivial row by 1
        let triv = tab.trivial_row();
        let chi = tab.twist_row(triv, 1).unwrap();
        assert_eq!(tab.galois_row(chi).unwrap(), tab.twist_row(triv, 3).unwrap());
        assert_eq!(tab.dual_row(chi).unwrap(), tab.twist_row(triv, 7).unwrap());
        assert_eq!(tab.twist_row(triv, 8).unwrap(), triv);
    }

    #[test]
    fn tables_verify_with_primes() {
        let (_, _, tab) = table(2, 2, GroupKind::GlE);
        let check = tab.verify().unwrap();
        assert_eq!((check.rows, check.degree_square_sum), (15, 180));
        assert!(!check.primes.is_empty());
        let mut bad = tab.parts().clone();
        let last = bad.rows.len() - 1;
        bad.rows.swap(0, last);
        assert!(CharTable::from_parts(bad).is_err());
    }

    #[test]
    fn twist_dual_commute() {
        let (_, _, tab) = table(2, 2, GroupKind::GlE);
        for i in 0..tab.len() {
            for a in 0..3 {
                let lhs = tab.dual_row(tab.twist_row(i, a).unwrap()).unwrap();
                let rhs = tab.twist_row(tab.dual_row(i).unwrap(), 3 - a).unwrap();
                assert_eq!(lhs, rhs);
            }
            assert_eq!(tab.galois_row(tab.galois_row(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn exact_inner_products_match_modular_ones() {
        let (v, c, tab) = table(2, 2, GroupKind::SlE);
        for i in 0..tab.len() {
            let a = tab.row_values(i);
            for j in 0..tab.len() {
                let ip = tab.inner_product(&a, &tab.row_values(j)).unwrap();
                assert_eq!(ip, Rational::from((i == j) as i64));
            }
        }
        // SL_2(F_2) inside SL_2(F_4), trivial character
        let amb = v.ambient();
        let mut sum = SubgroupSum::new(6, 1);
        for (x, &m) in v.members().iter().enumerate() {
            if amb.is_over_base(m) {
                sum.add(c.class_of(x as u32), 0, 1);
            }
        }
        assert_eq!(sum.element_count(), 6);
        let emb = Embedding::nth_large(tab.exponent(), 0).unwrap();
        let mult = tab.subgroup_multiplicities(&emb, &sum).unwrap();
        assert_eq!(tab.degrees(), &[1, 3, 3, 4, 5]);
        assert_eq!(mult, vec![1, 0, 0, 1, 1]);
    }
}
