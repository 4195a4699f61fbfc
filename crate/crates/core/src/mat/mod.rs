//! Matrices over tabulated fields, the groups `GL_n(F_{q^m})`, their
//! conjugacy classes, and standard subgroups.

pub mod group;
pub mod matrix;
pub mod poly;
pub mod subgroup;

pub use group::{
    enumerate_elements, group_order, ClassLabel, ConjClassTable, GroupSpec, MatrixGroup, DEFAULT_ENUMERATION_BOUND,
};
pub use matrix::{Matrix, MAX_DIM};
pub use subgroup::{double_cosets, left_coset_reps, standard_subgroups, Composition, DoubleCosets, StandardSubgroups, SubgroupData};
