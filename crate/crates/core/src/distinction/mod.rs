//! Distinction of irreducible characters of `GL_n(E)` by `GL_n(F)` and of
//! `SL_n(E)` by `SL_n(F)`, computed from the two character tables.

mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use log::info;
use serde::{Deserialize, Serialize};

pub use verify::{verify_all, Check, Counterexample, Proposition, Status, VerificationReport};

use crate::chartab::{CharTable, Embedding, SubgroupSum, TableCheck};
use crate::error::{internal, Error, Result};
use crate::ff::{AddChar, FieldTower};
use crate::groups::{
    check_size_guard, nondegenerate_characters, ConjugacyData, FiniteGroup, GlPlusData, GroupKind, GroupView,
    MatrixGroup, UnipotentData,
};
use crate::numtheory::lcm_all;

/// Where character tables come from: computed afresh, or a verified cache.
pub trait TableSource {
    fn table(&mut self, view: &GroupView, seed: u64) -> Result<(ConjugacyData, CharTable, TableCheck)>;
}

/// Computes every table from scratch.
#[derive(Debug, Default, Clone, Copy)]
pub struct Compute;

impl TableSource for Compute {
    fn table(&mut self, view: &GroupView, seed: u64) -> Result<(ConjugacyData, CharTable, TableCheck)> {
        let cls = ConjugacyData::for_view(view, seed)?;
        let (table, check) = CharTable::for_view(view, &cls)?;
        Ok((cls, table, check))
    }
}

/// All groups and tables for one pair `(n, q)`.
pub struct Setting {
    pub n: usize,
    pub q: u64,
    pub tower: Arc<FieldTower>,
    pub ambient: Arc<MatrixGroup>,
    pub gl: GroupView,
    pub sl: GroupView,
    pub gl_base: GroupView,
    pub sl_base: GroupView,
    pub gl_plus: GroupView,
    pub unipotent: GroupView,
    pub gl_classes: ConjugacyData,
    pub sl_classes: ConjugacyData,
    pub gl_table: CharTable,
    pub sl_table: CharTable,
    /// Verification outcome of each table, by group name.
    pub table_checks: Vec<(String, TableCheck)>,
    pub glplus_data: GlPlusData,
    pub unipotent_data: UnipotentData,
}

impl Setting {
    pub fn build(n: usize, q: u64, guard: u64, seed: u64, source: &mut dyn TableSource) -> Result<Setting> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let tower = Arc::new(FieldTower::for_order(q)?);
        check_size_guard(n, q, guard)?;
        let ambient = Arc::new(MatrixGroup::enumerate(tower.clone(), n, guard)?);
        let view = |kind| GroupView::new(ambient.clone(), kind);
        let gl = view(GroupKind::GlE)?;
        let sl = view(GroupKind::SlE)?;
        let (gl_classes, gl_table, gl_check) = source.table(&gl, seed)?;
        info!("{}: {} irreducible characters", gl.name(), gl_table.len());
        let (sl_classes, sl_table, sl_check) = source.table(&sl, seed)?;
        info!("{}: {} irreducible characters", sl.name(), sl_table.len());
        let table_checks = vec![(gl.name(), gl_check), (sl.name(), sl_check)];
        let gl_plus = view(GroupKind::GlPlus)?;
        let unipotent = view(GroupKind::UnipotentE)?;
        let glplus_data = GlPlusData::new(&ambient, &gl_plus)?;
        let unipotent_data = UnipotentData::new(&unipotent)?;
        Ok(Setting {
            n,
            q,
            gl_base: view(GroupKind::GlF)?,
            sl_base: view(GroupKind::SlF)?,
            tower,
            ambient,
            gl,
            sl,
            gl_plus,
            unipotent,
            gl_classes,
            sl_classes,
            gl_table,
            sl_table,
            table_checks,
            glplus_data,
            unipotent_data,
        })
    }

    /// `q² - 1`.
    pub fn units_e(&self) -> u64 {
        self.tower.order() - 1
    }

    /// `q - 1`.
    pub fn units_f(&self) -> u64 {
        self.q - 1
    }

    fn gl_class_of_master(&self, m: u32) -> usize {
        self.gl_classes.class_of(self.gl.local(m).expect("element of GL_n(E)"))
    }

    fn sl_class_of_master(&self, m: u32) -> usize {
        self.sl_classes.class_of(self.sl.local(m).expect("element of SL_n(E)"))
    }
}

/// Data attached to one irreducible character of `GL_n(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiTilde {
    pub row: usize,
    pub degree: u64,
    pub galois_row: usize,
    pub dual_row: usize,
    pub conjugate_self_dual: bool,
    /// `dim Hom_{GL_n(F)}[π̃, 1]`.
    pub gl_multiplicity: u64,
    /// `dim Hom_{GL_n(F)}[π̃, α∘det]` for each exponent of `α` on `F^×`.
    pub twisted_multiplicities: Vec<u64>,
    /// Exponents (on `F^×`) of the characters `α` with `π̃` `α`-distinguished.
    pub distinguishing_chars: Vec<u64>,
    /// The same set with quadratic twists allowed; equal to the above over
    /// finite fields.
    pub distinguishing_chars_extended: Vec<u64>,
    /// Exponents (on `E^×`) of the self-twists.
    pub self_twists: Vec<u64>,
    /// Self-twists trivial on `F^×`.
    pub self_twists_trivial_on_base: Vec<u64>,
    /// Exponents `b` of quadratic `α` with `α∘Nm` a self-twist.
    pub norm_kernel: Vec<u64>,
    /// Strong classes in the weak class, for conjugate self-dual rows.
    pub strong_classes: Option<u64>,
    pub generic: bool,
    pub whittaker_multiplicities: Vec<u64>,
    /// `SL_n(E)` rows occurring in the restriction.
    pub constituents: Vec<usize>,
    /// Multiplicity of each constituent in the restriction.
    pub restriction_multiplicities: Vec<u64>,
    /// Constituents grouped by the `GL_n(E)⁺`-summand they lie in.
    pub glplus_summands: Vec<Vec<usize>>,
}

/// Data attached to one irreducible character of `SL_n(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi {
    pub row: usize,
    pub degree: u64,
    /// `dim Hom_{SL_n(F)}[π, 1]`.
    pub sl_multiplicity: u64,
    pub generic: bool,
    /// Some nondegenerate `ψ` trivial on `N(F)` has Whittaker multiplicity ≥ 1.
    pub whittaker_relative: bool,
    pub whittaker_multiplicities: Vec<u64>,
    /// `GL_n(E)` rows whose restriction contains this row.
    pub containing: Vec<usize>,
}

/// Rows of `GL_n(E)` sharing the same multiplicity data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub gl_multiplicity: u64,
    pub distinguishing: usize,
    pub self_twists: usize,
    pub self_twists_trivial_on_base: usize,
    pub constituent_multiplicities: Vec<u64>,
    pub rows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctionData {
    pub n: usize,
    pub q: u64,
    pub gl_group: String,
    pub sl_group: String,
    pub gl_order: u64,
    pub sl_order: u64,
    /// `[GL_n(E) : GL_n(E)⁺]`.
    pub glplus_index: u64,
    /// Superdiagonal codes of every nondegenerate character of `N(E)`.
    pub whittaker_characters: Vec<Vec<u16>>,
    /// Positions in `whittaker_characters` of those trivial on `N(F)`.
    pub relative_characters: Vec<usize>,
    pub pi_tilde: Vec<PiTilde>,
    pub pi: Vec<Pi>,
    pub profiles: Vec<Profile>,
}

/// Multiplicities of every row against each nondegenerate `ψ`.
fn whittaker_matrix(
    s: &Setting,
    table: &CharTable,
    class_of: impl Fn(u32) -> usize,
    psis: &[Vec<AddChar>],
    emb: &Embedding,
) -> Result<Vec<Vec<u64>>> {
    let values = emb.values(table);
    let t = &*s.tower;
    let mut per_psi = Vec::with_capacity(psis.len());
    for psi in psis {
        if let Some(i) = psi.iter().position(|c| c.is_trivial()) {
            return Err(Error::DegenerateCharacter(i));
        }
        let mut sum = SubgroupSum::new(s.unipotent.len() as u64, t.p());
        for (x, &m) in s.unipotent.members().iter().enumerate() {
            let e = s.unipotent_data.psi_exponent(t, psi, x as u32);
            sum.add(class_of(m), e, 1);
        }
        per_psi.push(table.subgroup_multiplicities_with(emb, &values, &sum)?);
    }
    Ok((0..table.len())
        .map(|i| per_psi.iter().map(|m| m[i]).collect())
        .collect())
}

/// Permutation of row indices induced by `f`.
fn row_perm(len: usize, f: impl Fn(usize) -> Result<usize>) -> Result<Vec<usize>> {
    (0..len).map(f).collect()
}

impl DistinctionData {
    pub fn compute(s: &Setting) -> Result<DistinctionData> {
        let t = &*s.tower;
        let gl = &s.gl_table;
        let sl = &s.sl_table;
        let units_e = s.units_e();
        let units_f = s.units_f();
        let q = s.q;
        let exponent = lcm_all([gl.exponent() as u64, sl.exponent() as u64, t.p(), units_e]);
        let emb = Embedding::nth_large(exponent as u32, 0)?;
        let gl_values = emb.values(gl);

        // GL_n(F)-multiplicities against α∘det for every α of F^×.
        let base_dets: Vec<(usize, u64)> = s
            .gl_base
            .members()
            .iter()
            .map(|&m| (s.gl_class_of_master(m), s.ambient.det_log(m)))
            .collect();
        let mut twisted: Vec<Vec<u64>> = vec![Vec::new(); gl.len()];
        for a in 0..units_f {
            let mut sum = SubgroupSum::new(base_dets.len() as u64, units_e);
            for &(c, dl) in &base_dets {
                sum.add(c, a * dl % units_e, 1);
            }
            let mult = gl.subgroup_multiplicities_with(&emb, &gl_values, &sum)?;
            for (row, m) in twisted.iter_mut().zip(mult) {
                row.push(m);
            }
        }

        // Twists by characters of E^× as powers of the twist by a generator.
        let generator_twist = row_perm(gl.len(), |i| gl.twist_row(i, 1))?;
        let mut twist_perms = vec![(0..gl.len()).collect::<Vec<usize>>()];
        for a in 1..units_e as usize {
            let prev = &twist_perms[a - 1];
            twist_perms.push(prev.iter().map(|&i| generator_twist[i]).collect());
        }
        if twist_perms
            .last()
            .is_some_and(|p| p.iter().enumerate().any(|(i, &j)| generator_twist[j] != i))
        {
            return Err(internal("twisting is not an action of the character group"));
        }
        let galois = row_perm(gl.len(), |i| gl.galois_row(i))?;
        let dual = row_perm(gl.len(), |i| gl.dual_row(i))?;
        let csd: Vec<bool> = (0..gl.len()).map(|i| galois[i] == dual[i]).collect();

        // Restriction to SL_n(E).
        let fusion: Vec<usize> = (0..s.sl_classes.class_count())
            .map(|c| s.gl_class_of_master(s.sl.master(s.sl_classes.rep(c))))
            .collect();
        let restriction = gl.restriction_matrix(sl, &fusion, &emb)?;

        // SL_n(F)-multiplicities.
        let mut sl_sum = SubgroupSum::new(s.sl_base.len() as u64, 1);
        for &m in s.sl_base.members() {
            sl_sum.add(s.sl_class_of_master(m), 0, 1);
        }
        let sl_mult = sl.subgroup_multiplicities(&emb, &sl_sum)?;

        // Conjugation by the GL⁺ twister permutes SL_n(E) classes and rows.
        let h = s.glplus_data.base_twister;
        let class_perm: Vec<u32> = (0..s.sl_classes.class_count())
            .map(|c| {
                let m = s.sl.master(s.sl_classes.rep(c));
                s.sl_class_of_master(s.ambient.conjugate(h, m)) as u32
            })
            .collect();
        let twister_rows = row_perm(sl.len(), |j| sl.permuted_row(j, &class_perm))?;

        // Whittaker data.
        let width = s.unipotent_data.width();
        let psis = nondegenerate_characters(t, width);
        let relative: Vec<usize> = psis
            .iter()
            .enumerate()
            .filter(|(_, psi)| psi.iter().all(|&c| t.add_char_trivial_on_base(c)))
            .map(|(i, _)| i)
            .collect();
        let gl_whittaker = whittaker_matrix(s, gl, |m| s.gl_class_of_master(m), &psis, &emb)?;
        let sl_whittaker = whittaker_matrix(s, sl, |m| s.sl_class_of_master(m), &psis, &emb)?;

        let pi: Vec<Pi> = (0..sl.len())
            .map(|j| {
                let w = &sl_whittaker[j];
                Pi {
                    row: j,
                    degree: sl.degree(j),
                    sl_multiplicity: sl_mult[j],
                    generic: w.contains(&1),
                    whittaker_relative: relative.iter().any(|&r| w[r] >= 1),
                    whittaker_multiplicities: w.clone(),
                    containing: (0..gl.len()).filter(|&i| restriction[i][j] > 0).collect(),
                }
            })
            .collect();

        let trivial_on_base = |a: u64| a.is_multiple_of(units_f);
        let mut pi_tilde = Vec::with_capacity(gl.len());
        for i in 0..gl.len() {
            let self_twists: Vec<u64> = (0..units_e).filter(|&a| twist_perms[a as usize][i] == i).collect();
            let distinguishing: Vec<u64> = (0..units_f).filter(|&a| twisted[i][a as usize] >= 1).collect();
            let norm_kernel: Vec<u64> = (0..units_f)
                .filter(|&b| 2 * b % units_f == 0 && twist_perms[(b * (q + 1) % units_e) as usize][i] == i)
                .collect();
            let strong_classes = csd[i].then(|| {
                let weak: BTreeSet<usize> = twist_perms.iter().map(|p| p[i]).filter(|&r| csd[r]).collect();
                let mut seen = BTreeSet::new();
                let mut classes = 0;
                for &r in &weak {
                    if seen.insert(r) {
                        classes += 1;
                        for a in (0..units_e).filter(|&a| trivial_on_base(a)) {
                            seen.insert(twist_perms[a as usize][r]);
                        }
                    }
                }
                classes
            });
            let constituents: Vec<usize> = (0..sl.len()).filter(|&j| restriction[i][j] > 0).collect();
            let mut summands: Vec<Vec<usize>> = Vec::new();
            let mut placed = BTreeSet::new();
            for &j in &constituents {
                if placed.contains(&j) {
                    continue;
                }
                let mut orbit = vec![j];
                placed.insert(j);
                let mut x = twister_rows[j];
                while x != j {
                    orbit.push(x);
                    placed.insert(x);
                    x = twister_rows[x];
                }
                orbit.sort_unstable();
                summands.push(orbit);
            }
            let w = &gl_whittaker[i];
            pi_tilde.push(PiTilde {
                row: i,
                degree: gl.degree(i),
                galois_row: galois[i],
                dual_row: dual[i],
                conjugate_self_dual: csd[i],
                gl_multiplicity: twisted[i][0],
                twisted_multiplicities: twisted[i].clone(),
                distinguishing_chars_extended: distinguishing.clone(),
                distinguishing_chars: distinguishing,
                self_twists_trivial_on_base: self_twists.iter().copied().filter(|&a| trivial_on_base(a)).collect(),
                self_twists,
                norm_kernel,
                strong_classes,
                generic: w.contains(&1),
                whittaker_multiplicities: w.clone(),
                restriction_multiplicities: constituents.iter().map(|&j| restriction[i][j]).collect(),
                constituents,
                glplus_summands: summands,
            });
        }

        let mut profile_map: BTreeMap<(u64, usize, usize, usize, Vec<u64>), Vec<usize>> = BTreeMap::new();
        for pt in &pi_tilde {
            let mut mults: Vec<u64> = pt.constituents.iter().map(|&j| sl_mult[j]).collect();
            mults.sort_unstable();
            profile_map
                .entry((
                    pt.gl_multiplicity,
                    pt.distinguishing_chars.len(),
                    pt.self_twists.len(),
                    pt.self_twists_trivial_on_base.len(),
                    mults,
                ))
                .or_default()
                .push(pt.row);
        }
        let profiles = profile_map
            .into_iter()
            .map(|((g, x, z, y, m), rows)| Profile {
                gl_multiplicity: g,
                distinguishing: x,
                self_twists: z,
                self_twists_trivial_on_base: y,
                constituent_multiplicities: m,
                rows,
            })
            .collect();

        Ok(DistinctionData {
            n: s.n,
            q,
            gl_group: gl.name().to_string(),
            sl_group: sl.name().to_string(),
            gl_order: gl.order(),
            sl_order: sl.order(),
            glplus_index: s.glplus_data.index_group_side,
            whittaker_characters: psis
                .iter()
                .map(|psi| psi.iter().map(|c| c.b().code()).collect())
                .collect(),
            relative_characters: relative,
            pi_tilde,
            pi,
            profiles,
        })
    }
}
