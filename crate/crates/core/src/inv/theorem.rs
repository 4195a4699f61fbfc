use serde::Serialize;

use crate::chartab::{CharacterTable, ClassFunction};
use crate::error::{Error, Result};
use crate::mat::{GroupSpec, MatrixGroup, SubgroupData};

use super::involution::{InvolutionDescriptor, InvolutionSpec};

/// Number of elements of `h` in each conjugacy class of `g`.
pub fn class_counts(g: &MatrixGroup, h: &SubgroupData) -> Vec<u64> {
    let mut counts = vec![0u64; g.num_classes()];
    for x in h.elements() {
        counts[g.class_of_member(x)] += 1;
    }
    counts
}

/// `<chi|_H, 1_H>` from the class distribution of `H`.
pub fn multiplicity_from_counts(chi: &ClassFunction, counts: &[u64]) -> Result<i64> {
    let v = chi.average_over_counts(counts);
    match v.to_integer() {
        Some(m) if m >= 0 => Ok(m),
        _ => Err(Error::Defect(format!("H-invariant dimension {v} is not a nonnegative integer"))),
    }
}

/// Dimension of `H`-fixed vectors in the representation with character `chi`.
pub fn is_distinguished(chi: &ClassFunction, g: &MatrixGroup, h: &SubgroupData) -> Result<i64> {
    multiplicity_from_counts(chi, &class_counts(g, h))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremARow {
    pub char_index: usize,
    pub degree: u64,
    pub multiplicity: i64,
    pub tau_invariant: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_ok(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremAReport {
    pub group: GroupSpec,
    pub involution: InvolutionDescriptor,
    #[serde(rename = "H_order")]
    pub h_order: u64,
    pub rows: Vec<TheoremARow>,
    /// Rows with positive multiplicity that are not `tau`-invariant.
    pub violations: Vec<TheoremARow>,
    pub verdict: Verdict,
}

/// Checks that every irreducible with an `H`-fixed vector satisfies
/// `chi(sigma(g)^{-1}) = chi(g)`.
pub fn verify_theorem_a(g: &MatrixGroup, table: &CharacterTable, sigma: &InvolutionSpec) -> Result<TheoremAReport> {
    let h = sigma.fixed_subgroup(g);
    let counts = class_counts(g, &h);
    let dual = sigma.dual_class_map(g);
    let mut rows = Vec::with_capacity(table.len());
    for (i, chi) in table.characters().iter().enumerate() {
        let multiplicity = multiplicity_from_counts(chi, &counts)?;
        rows.push(TheoremARow {
            char_index: i,
            degree: table.degrees()[i],
            multiplicity,
            tau_invariant: chi.pull_back(&dual) == *chi,
        });
    }
    let violations: Vec<TheoremARow> = rows.iter().filter(|r| r.multiplicity > 0 && !r.tau_invariant).cloned().collect();
    Ok(TheoremAReport {
        group: *g.spec(),
        involution: sigma.descriptor(),
        h_order: h.order(),
        verdict: Verdict::from_ok(violations.is_empty()),
        rows,
        violations,
    })
}
