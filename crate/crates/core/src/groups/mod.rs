//! Permutation groups, conjugacy classes, normal structure and character tables.

pub mod automorphisms;
pub mod brauer;
pub mod chartable;
pub mod classes;
pub mod group;
pub mod subgroups;

pub use automorphisms::{table_automorphisms, TableAutomorphism};
pub use brauer::{brauer_values, fong_swan_decomposition, DecompositionMatrix, ModularData};
pub use chartable::{dixon_character_table, CharacterTable, TableFile};
pub use classes::{ClassData, ClassInfo};
pub use group::{GroupData, GroupFile, Perm, MAX_ORDER};
pub use subgroups::{
    lower_central_series, normal_subgroups, quotient_with_fusion, structure_predicates, Quotient, StructureFlags,
    SubgroupHandle,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("normal subgroup of order {order} is trivial or the whole group")]
    ImproperNormalSubgroup { order: usize },
    #[error("character table validation failed: {0}")]
    TableValidation(String),
    #[error("invalid table data: {0}")]
    InvalidTable(String),
    #[error("invalid decomposition matrix: {0}")]
    InvalidDecomposition(String),
}
