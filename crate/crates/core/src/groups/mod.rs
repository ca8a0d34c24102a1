//! Dense enumeration of `GL_n(E)` and its named subgroups.
//!
//! Every subgroup is a [`GroupView`]: a sorted list of indices into one
//! shared [`MatrixGroup`], so elements keep the same identity across views.

mod classes;
mod matrix;
mod special;
mod view;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use classes::{centralizer_order, ConjugacyData};
pub use matrix::MatrixGroup;
pub use special::{nondegenerate_characters, GlPlusData, UnipotentData};
pub use view::{generating_set, GroupView};

use crate::error::{Error, Result};

/// Default bound on `|GL_n(E)|`.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 2_000_000;

/// A finite group on element indices `0..order`.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inverse(&self, a: u32) -> u32;

    fn conjugate(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inverse(g))
    }

    fn element_order(&self, x: u32) -> u64 {
        let id = self.identity();
        let mut y = x;
        let mut o = 1;
        while y != id {
            y = self.mul(y, x);
            o += 1;
        }
        o
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// `GL_n(E)`
    GlE,
    /// `SL_n(E)`
    SlE,
    /// `GL_n(F)`
    GlF,
    /// `SL_n(F)`
    SlF,
    /// `{g ∈ GL_n(E) : det g ∈ F^×·(E^×)^n}`
    GlPlus,
    /// Upper unitriangular matrices over `E`.
    UnipotentE,
    /// Scalar matrices over `E`.
    Center,
}

impl GroupKind {
    pub const ALL: [GroupKind; 7] = [
        GroupKind::GlE,
        GroupKind::SlE,
        GroupKind::GlF,
        GroupKind::SlF,
        GroupKind::GlPlus,
        GroupKind::UnipotentE,
        GroupKind::Center,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            GroupKind::GlE => "gl-e",
            GroupKind::SlE => "sl-e",
            GroupKind::GlF => "gl-f",
            GroupKind::SlF => "sl-f",
            GroupKind::GlPlus => "gl-plus",
            GroupKind::UnipotentE => "n-e",
            GroupKind::Center => "center",
        }
    }

    /// Human-readable name such as `SL_2(F_9)`.
    pub fn display_name(self, n: usize, q: u64) -> String {
        let qq = q * q;
        match self {
            GroupKind::GlE => format!("GL_{n}(F_{qq})"),
            GroupKind::SlE => format!("SL_{n}(F_{qq})"),
            GroupKind::GlF => format!("GL_{n}(F_{q})"),
            GroupKind::SlF => format!("SL_{n}(F_{q})"),
            GroupKind::GlPlus => format!("GL_{n}(F_{qq})+"),
            GroupKind::UnipotentE => format!("N_{n}(F_{qq})"),
            GroupKind::Center => format!("Z(GL_{n}(F_{qq}))"),
        }
    }

    /// Order of the group from its closed form, used to cross-check
    /// enumeration.
    pub fn expected_order(self, n: usize, q: u64) -> u128 {
        let qq = q as u128 * q as u128;
        let glf = gl_order(n, q as u128);
        let gle = gl_order(n, qq);
        match self {
            GroupKind::GlE => gle,
            GroupKind::SlE => gle / (qq - 1),
            GroupKind::GlF => glf,
            GroupKind::SlF => glf / (q as u128 - 1),
            GroupKind::GlPlus => {
                let d = num_integer::gcd(n as u128, q as u128 + 1);
                gle / d
            }
            GroupKind::UnipotentE => qq.pow((n * (n - 1) / 2) as u32),
            GroupKind::Center => qq - 1,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupKind> {
        GroupKind::ALL
            .into_iter()
            .find(|k| k.slug() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown group kind `{s}`")))
    }
}

/// `∏_{i<n} (qⁿ - qⁱ)`.
pub fn gl_order(n: usize, q: u128) -> u128 {
    (0..n as u32).map(|i| q.pow(n as u32) - q.pow(i)).product()
}

/// Refuses to enumerate `GL_n(F_{q²})` when its order exceeds `guard`.
pub fn check_size_guard(n: usize, q: u64, guard: u64) -> Result<()> {
    let order = gl_order(n, q as u128 * q as u128);
    if order > guard as u128 {
        return Err(Error::GroupTooLarge {
            group: GroupKind::GlE.display_name(n, q),
            order,
            guard,
        });
    }
    Ok(())
}
