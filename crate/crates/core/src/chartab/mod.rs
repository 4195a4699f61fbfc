//! Exact character values, class functions and character tables.

pub mod classfn;
pub mod cyclotomic;
pub mod dixon;
pub mod table;

pub use classfn::{combine, external_tensor, restrict, ClassFunction, ClassInfo};
pub use cyclotomic::Cyclotomic;
pub use dixon::character_table;
pub use table::CharacterTable;
