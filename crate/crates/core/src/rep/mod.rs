//! Parabolic induction, Jacquet restriction, cuspidal representations,
//! Whittaker models and the graded Hopf structure on characters of `GL_n`.

pub mod cuspidal;
pub mod family;
pub mod psh;
pub mod whittaker;

pub use cuspidal::{cuspidal_indices, cuspidal_support, d_count, is_cuspidal, CuspidalSupport, SupportScan};
pub use family::{jacquet_restrict, parabolic_induce, GlFamily, Parabolic};
pub use psh::{psh_verify, GradedRing, PshReport};
pub use whittaker::{induced_power_whittaker, whittaker_dim, WhittakerModel};
