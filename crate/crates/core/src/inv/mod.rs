//! Involutions of `GL_n`, their fixed subgroups, and the checks that relate
//! `H`-distinction to invariance under `chi -> chi(sigma(.)^{-1})`.

mod involution;
mod mackey;
mod theorem;

pub use involution::{
    catalogue, e_form, involution_from_descriptor, make_involution, split_diagonal, standard_symplectic, twisted_dual,
    InvolutionDescriptor, InvolutionKind, InvolutionSpec, EXHAUSTIVE_CHECK_LIMIT, SAMPLED_CHECKS,
};
pub use mackey::{
    coarsenings_within, geometric_representatives, in_set_levi, preserves_set_levi, twisted_levi, verify_geometric_lemma,
    verify_mackey, CosetRecord, GeometricLemmaReport, MackeyData, MackeyReport, MackeyRow, TwistedInvolution, TwistedLevi,
};
pub use theorem::{
    class_counts, is_distinguished, multiplicity_from_counts, verify_theorem_a, TheoremAReport, TheoremARow, Verdict,
};
