//! Combinatorial group theory for finite-index subgroups of `PSL_2(Z)` and
//! of the Euclidean Bianchi groups.

pub mod abelian;
pub mod congruence;
pub mod coset;
pub mod presentation;
pub mod rewrite;
pub mod subgroup;
pub mod tietze;
pub mod word;

pub use abelian::{AbelianInvariants, GroupInvariants};
pub use congruence::CongruenceKind;
pub use coset::CosetTable;
pub use presentation::{Generator, Presentation, Role};
pub use subgroup::{Cocycle, HomologyClass, SubgroupModel};
pub use word::{Letter, Word};
