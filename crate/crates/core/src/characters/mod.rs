//! Dirichlet characters mod Q: the unit group, its dual, and the
//! orthogonality mean value.

mod character;
mod group;

pub use character::{
    characters, orthogonality_mean_value, root_of_unity, Angle, CharValue, Character,
};
pub use group::{UnitGroup, RESIDUE_LIMIT};
