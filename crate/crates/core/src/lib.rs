pub mod characters;
pub mod error;
pub mod experiments;
pub mod jm_algebra;
pub mod partitions;
pub mod permutation;
pub mod plancherel;
pub mod seminormal;
pub mod tableaux;
