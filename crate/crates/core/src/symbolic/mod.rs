//! Symbolic dynamics on `{0,…,J}^{ℤ₋}`.

pub mod cylinder;
pub mod generator;
pub mod seq;
pub mod sft;

pub use cylinder::CylinderUnion;
pub use generator::{check_prop_2_2, GeneratorFamily, Prop22Report, SubshiftInput, Witness};
pub use seq::{rho, SymDist, SymbolSeq, Word, MAX_J};
pub use sft::{reduce_forbidden, rho_to_set, SftSubshift, SymbolicSet, TailSet};
pub use generator::{near_exit_points, simplest_point_ending_with, GeneratorRule};
