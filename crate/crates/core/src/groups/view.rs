use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FiniteGroup, GroupKind, MatrixGroup};
use crate::error::{internal, Result};

/// A subgroup of the ambient `GL_n(E)`, with elements renumbered `0..len` in
/// increasing ambient order.
#[derive(Debug, Clone)]
pub struct GroupView {
    ambient: Arc<MatrixGroup>,
    kind: GroupKind,
    members: Vec<u32>,
    local: Vec<u32>,
}

impl GroupView {
    pub fn new(ambient: Arc<MatrixGroup>, kind: GroupKind) -> Result<GroupView> {
        let t = ambient.tower();
        let q = t.q();
        let n = ambient.n() as u64;
        let plus_step = num_integer::gcd(n, q + 1);
        let test = |i: u32| -> bool {
            match kind {
                GroupKind::GlE => true,
                GroupKind::SlE => ambient.det_log(i) == 0,
                GroupKind::GlF => ambient.is_over_base(i),
                GroupKind::SlF => ambient.is_over_base(i) && ambient.det_log(i) == 0,
                GroupKind::GlPlus => ambient.det_log(i).is_multiple_of(plus_step),
                GroupKind::UnipotentE => ambient.is_upper_unitriangular(i),
                GroupKind::Center => ambient.is_scalar(i),
            }
        };
        let members: Vec<u32> = (0..ambient.len() as u32).filter(|&i| test(i)).collect();
        let mut local = vec![u32::MAX; ambient.len()];
        for (l, &m) in members.iter().enumerate() {
            local[m as usize] = l as u32;
        }
        let expected = kind.expected_order(ambient.n(), q);
        if members.len() as u128 != expected {
            return Err(internal(format!(
                "{} has {} elements, expected {expected}",
                kind.display_name(ambient.n(), q),
                members.len()
            )));
        }
        Ok(GroupView {
            ambient,
            kind,
            members,
            local,
        })
    }

    pub fn ambient(&self) -> &MatrixGroup {
        &self.ambient
    }

    pub fn ambient_arc(&self) -> &Arc<MatrixGroup> {
        &self.ambient
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn name(&self) -> String {
        self.kind.display_name(self.ambient.n(), self.ambient.tower().q())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Ambient indices of the members, increasing.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    #[inline]
    pub fn master(&self, local: u32) -> u32 {
        self.members[local as usize]
    }

    #[inline]
    pub fn local(&self, master: u32) -> Option<u32> {
        match self.local[master as usize] {
            u32::MAX => None,
            l => Some(l),
        }
    }

    pub fn contains(&self, master: u32) -> bool {
        self.local[master as usize] != u32::MAX
    }

    /// Checks closure under products and inverses on every pair drawn from a
    /// generating set and the whole group.
    pub fn is_closed_under(&self, gens: &[u32]) -> bool {
        (0..self.len() as u32).all(|x| {
            let m = self.master(x);
            self.contains(self.ambient.inverse(m))
                && gens.iter().all(|&g| self.contains(self.ambient.mul(m, self.master(g))))
        })
    }
}

impl FiniteGroup for GroupView {
    fn order(&self) -> usize {
        self.len()
    }

    fn identity(&self) -> u32 {
        self.local(self.ambient.identity()).expect("views contain the identity")
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.ambient.mul(self.master(a), self.master(b));
        self.local[p as usize]
    }

    #[inline]
    fn inverse(&self, a: u32) -> u32 {
        self.local[self.ambient.inverse(self.master(a)) as usize]
    }
}

/// Size of the subgroup generated by `gens`.
fn closure_size<G: FiniteGroup>(g: &G, gens: &[u32]) -> usize {
    let mut seen = vec![false; g.order()];
    let id = g.identity();
    seen[id as usize] = true;
    let mut stack = vec![id];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

/// A small generating set drawn with a seeded RNG: random elements are added
/// until they generate the whole group.
pub fn generating_set<G: FiniteGroup>(g: &G, seed: u64) -> Vec<u32> {
    let order = g.order();
    if order == 1 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<u32> = (0..2).map(|_| rng.gen_range(0..order as u32)).collect();
    while closure_size(g, &gens) < order {
        gens.push(rng.gen_range(0..order as u32));
    }
    gens
}
