//! Exact representation theory of `GL_n` over small finite fields.

pub mod chartab;
pub mod error;
pub mod ff;
pub mod inv;
pub mod mat;
pub mod rep;
pub mod tori;

pub use error::{Error, Result};
