//! Exact character theory of `GL_n` and `SL_n` over small finite fields, and
//! the multiplicity theory of the symmetric space `(SL_n(E), SL_n(F))` for a
//! quadratic extension `E/F` of finite fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`ff`]: the tower `F_p ⊂ F = F_q ⊂ E = F_{q²}` with Frobenius, norm,
//!   trace and the multiplicative / additive character groups.
//! * [`groups`]: dense enumeration of `GL_n(E)` and its named subgroups,
//!   conjugacy classes, Galois and inverse class permutations.
//! * [`chartab`]: exact cyclotomic arithmetic, the Dixon–Schneider
//!   character table algorithm, and character sums over subgroups.
//! * [`distinction`]: the sets `X`, `Z`, `Y`, norm-map kernels, strong/weak
//!   twist classes and the verification sweep over every irreducible.
//!
//! Cyclotomic numbers are generic over their coefficient ring; the aliases
//! below fix the two rings used throughout.

pub mod chartab;
pub mod distinction;
pub mod error;
pub mod ff;
pub mod groups;
pub mod numtheory;

pub use chartab::cyclotomic::Cyclotomic;
pub use error::{Error, Result};

/// Cyclotomic integers: character values.
pub type CycInt = Cyclotomic<i64>;

/// Cyclotomic numbers with rational coefficients: inner products and
/// averages over subgroups.
pub type CycRat = Cyclotomic<num_rational::Rational64>;

/// Exact rational used for inner products.
pub type Rational = num_rational::Rational64;
