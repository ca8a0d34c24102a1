use std::collections::BTreeSet;

use super::{FiniteGroup, GroupKind, GroupView, MatrixGroup};
use crate::error::{internal, Result};
use crate::ff::{AddChar, FieldElem, FieldTower};

/// Upper unitriangular matrices with their superdiagonal coordinates.
#[derive(Debug, Clone)]
pub struct UnipotentData {
    width: usize,
    superdiag: Vec<FieldElem>,
}

impl UnipotentData {
    /// Reads the superdiagonal of every element of the `N(E)` view and checks
    /// that it is a surjective homomorphism onto `E^{n-1}`.
    pub fn new(view: &GroupView) -> Result<UnipotentData> {
        if view.kind() != GroupKind::UnipotentE {
            return Err(internal("unipotent data needs the N(E) view"));
        }
        let amb = view.ambient();
        let n = amb.n();
        let width = n.saturating_sub(1);
        let mut superdiag = Vec::with_capacity(view.len() * width);
        for &m in view.members() {
            for i in 0..width {
                superdiag.push(amb.entry(m, i, i + 1));
            }
        }
        let data = UnipotentData { width, superdiag };
        let t = amb.tower();
        let gens = super::generating_set(view, 0);
        for x in 0..view.len() as u32 {
            for &g in &gens {
                let xy = view.mul(x, g);
                let ok = (0..width).all(|i| data.coords(xy)[i] == t.add(data.coords(x)[i], data.coords(g)[i]));
                if !ok {
                    return Err(internal("superdiagonal map is not a homomorphism"));
                }
            }
        }
        let image: BTreeSet<&[FieldElem]> = (0..view.len() as u32).map(|x| data.coords(x)).collect();
        if image.len() as u64 != t.order().pow(width as u32) {
            return Err(internal("superdiagonal map is not surjective"));
        }
        Ok(data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Superdiagonal of the element with local index `x`.
    pub fn coords(&self, x: u32) -> &[FieldElem] {
        &self.superdiag[x as usize * self.width..(x as usize + 1) * self.width]
    }

    pub fn kernel_size(&self) -> usize {
        let len = self.superdiag.len().checked_div(self.width).unwrap_or(1);
        (0..len as u32)
            .filter(|&x| self.coords(x).iter().all(|c| c.is_zero()))
            .count()
    }

    /// Exponent of `ψ(u) = Π ψ_{b_i}(u_{i,i+1})` as a `p`-th root of unity.
    pub fn psi_exponent(&self, t: &FieldTower, psi: &[AddChar], x: u32) -> u64 {
        let p = t.p();
        psi.iter()
            .zip(self.coords(x))
            .map(|(c, &u)| t.add_char_value(*c, u))
            .sum::<u64>()
            % p
    }
}

/// All nondegenerate characters of `N(E)`: one nonzero `b_i` per superdiagonal
/// slot, in lexicographic order.
pub fn nondegenerate_characters(t: &FieldTower, width: usize) -> Vec<Vec<AddChar>> {
    let units: Vec<AddChar> = t.elements().skip(1).map(AddChar::new).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..width {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<AddChar>| {
                units.iter().map(move |&u| {
                    let mut v = prefix.clone();
                    v.push(u);
                    v
                })
            })
            .collect();
    }
    out
}

/// Cosets of `GL_n(E)⁺` in `GL_n(E)` and the factorisation
/// `GL_n(E)⁺ = E^×·GL_n(F)·SL_n(E)`.
#[derive(Debug, Clone)]
pub struct GlPlusData {
    pub index_group_side: u64,
    pub index_cyclic_side: u64,
    /// Ambient indices of `diag(g^i, 1, …, 1)`, one per coset.
    pub coset_reps: Vec<u32>,
    /// Ambient index of `diag(generator_f, 1, …, 1)`, whose conjugation
    /// action generates the action of `GL_n(E)⁺` on `SL_n(E)`-classes.
    pub base_twister: u32,
}

impl GlPlusData {
    pub fn new(amb: &MatrixGroup, plus: &GroupView) -> Result<GlPlusData> {
        if plus.kind() != GroupKind::GlPlus {
            return Err(internal("GL+ data needs the GL+ view"));
        }
        let t = amb.tower();
        let n = amb.n();
        let m = t.order() - 1;
        let q = t.q();
        if !amb.len().is_multiple_of(plus.len()) {
            return Err(internal("GL+ order does not divide GL order"));
        }
        let index_group_side = (amb.len() / plus.len()) as u64;
        // F^×·(E^×)^n inside Z/(q²-1): generated by q+1 and n.
        let mut sub = vec![false; m as usize];
        for i in 0..m {
            for j in 0..q - 1 {
                sub[((n as u64 * i + (q + 1) * j) % m) as usize] = true;
            }
        }
        let sub_order = sub.iter().filter(|&&b| b).count() as u64;
        let index_cyclic_side = m / sub_order;
        if index_group_side != index_cyclic_side {
            return Err(internal(format!(
                "GL+ index {index_group_side} (group) vs {index_cyclic_side} (cyclic)"
            )));
        }
        let diag = |x: FieldElem| {
            let mut d = vec![FieldElem::ONE; n];
            d[0] = x;
            amb.diagonal(&d).expect("diagonal with unit entries")
        };
        let coset_reps: Vec<u32> = (0..index_group_side).map(|i| diag(t.exp_of(i))).collect();
        let mut covered = BTreeSet::new();
        for &r in &coset_reps {
            covered.insert(amb.det_log(r) % index_group_side);
        }
        if covered.len() as u64 != index_group_side {
            return Err(internal("GL+ coset representatives are not distinct"));
        }
        let data = GlPlusData {
            index_group_side,
            index_cyclic_side,
            coset_reps,
            base_twister: diag(t.generator_f()),
        };
        data.check_factorization(amb, plus)?;
        Ok(data)
    }

    /// Finds `g = z·h·s` with `z` scalar, `h = diag(f, 1, …)` over `F` and
    /// `s ∈ SL_n(E)` for every `g ∈ GL_n(E)⁺`.
    fn check_factorization(&self, amb: &MatrixGroup, plus: &GroupView) -> Result<()> {
        let t = amb.tower();
        let n = amb.n() as u64;
        let m = t.order() - 1;
        let q = t.q();
        // witness[d] = (i, j) with n·i + (q+1)·j ≡ d
        let mut witness = vec![None; m as usize];
        for i in 0..m {
            for j in 0..q - 1 {
                let d = ((n * i + (q + 1) * j) % m) as usize;
                witness[d].get_or_insert((i, j));
            }
        }
        for &g in plus.members() {
            let (i, j) = witness[amb.det_log(g) as usize].ok_or_else(|| internal("determinant outside F^×(E^×)^n"))?;
            let z = amb.scalar(t.exp_of(i)).expect("unit scalar");
            let mut d = vec![FieldElem::ONE; amb.n()];
            d[0] = t.exp_of((q + 1) * j);
            let h = amb.diagonal(&d).expect("unit diagonal");
            if !amb.is_over_base(h) {
                return Err(internal("factorisation witness is not over F"));
            }
            let s = amb.mul(amb.inverse(amb.mul(z, h)), g);
            if amb.det_log(s) != 0 || amb.mul(amb.mul(z, h), s) != g {
                return Err(internal("GL+ factorisation failed"));
            }
        }
        Ok(())
    }
}
