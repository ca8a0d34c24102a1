//! Character tables: exact cyclotomic values, the Dixon–Schneider
//! algorithm and character sums over subgroups.

pub mod cyclotomic;
pub mod dixon;
pub mod modp;
pub mod rootsum;
pub mod table;

pub use dixon::{dixon_schneider, DixonRows};
pub use rootsum::{RootSum, TensorBasis};
pub use table::{unit_generators, CharTable, Embedding, SubgroupSum, TableCheck, TableParts};
