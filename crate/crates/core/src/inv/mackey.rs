//! The Mackey identity for `<i(pi), 1>_H`, twisted involutions attached to
//! `(P, H)` double cosets, and the twisted Levi they preserve.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chartab::Cyclotomic;
use crate::error::{Error, Result};
use crate::mat::{double_cosets, standard_subgroups, Composition, GroupSpec, Matrix, MatrixGroup, SubgroupData};
use crate::rep::GlFamily;

use super::involution::{InvolutionDescriptor, InvolutionSpec};
use super::theorem::{class_counts, multiplicity_from_counts, Verdict};

fn to_count(v: &Cyclotomic, what: &str) -> Result<i64> {
    match v.to_integer() {
        Some(m) if m >= 0 => Ok(m),
        _ => Err(Error::Defect(format!("{what} {v} is not a nonnegative integer"))),
    }
}

/// Per `(composition, involution)` data for the Mackey identity: the class
/// distribution of `H` in `G`, and for each double coset `P g H` the Levi
/// class distribution of `P ∩ g H g^{-1}`.
pub struct MackeyData {
    pub composition: Composition,
    pub h_order: u64,
    h_counts: Vec<u64>,
    /// `(representative, Levi class counts)` per double coset.
    cosets: Vec<(Matrix, Vec<u64>)>,
}

impl MackeyData {
    pub fn new(fam: &GlFamily, comp: &Composition, sigma: &InvolutionSpec) -> Result<MackeyData> {
        let n = comp.n();
        let g = fam.group(n);
        if sigma.group_spec() != g.spec() {
            return Err(Error::GroupMismatch(sigma.group_spec().to_string(), g.spec().to_string()));
        }
        let f = g.field();
        let par = fam.parabolic(comp)?;
        let p = &par.subgroups.p;
        let h = sigma.fixed_subgroup(g);
        let dc = double_cosets(g, p, &h)?;
        let mut cosets = Vec::with_capacity(dc.len());
        for &r in &dc.reps {
            let x = *g.element(r);
            let xi = g.inv(&x);
            let meet: Vec<Matrix> =
                h.elements().iter().map(|y| y.conjugate_by(&x, &xi, f)).filter(|y| p.contains(y)).collect();
            cosets.push((x, par.levi_class_counts(fam, &meet)));
        }
        Ok(MackeyData { composition: comp.clone(), h_order: h.order(), h_counts: class_counts(g, &h), cosets })
    }

    pub fn num_cosets(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_representatives(&self) -> Vec<Matrix> {
        self.cosets.iter().map(|(x, _)| *x).collect()
    }

    /// Both sides for the Levi irreducible `levi_index`.
    pub fn check(&self, fam: &GlFamily, levi_index: usize) -> Result<MackeyRow> {
        let par = fam.parabolic(&self.composition)?;
        let pi = par.levi_table.character(levi_index);
        let induced = par.induce(pi)?;
        let lhs = multiplicity_from_counts(&induced, &self.h_counts)?;
        let summands: Vec<i64> = self
            .cosets
            .iter()
            .map(|(_, counts)| to_count(&pi.average_over_counts(counts), "coset summand"))
            .collect::<Result<_>>()?;
        let rhs: i64 = summands.iter().sum();
        let witnessed = lhs == 0 || summands.iter().any(|&s| s > 0);
        Ok(MackeyRow {
            composition: self.composition.sizes().to_vec(),
            levi_index,
            degree: par.levi_table.degrees()[levi_index],
            lhs,
            rhs,
            summands,
            holds: lhs == rhs && witnessed,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MackeyRow {
    pub composition: Vec<usize>,
    pub levi_index: usize,
    pub degree: u64,
    /// `<i(pi), 1>_H`.
    pub lhs: i64,
    /// Sum of the double-coset summands.
    pub rhs: i64,
    /// `<pi, 1>_{P ∩ g H g^{-1}}` per double coset `P g H`.
    pub summands: Vec<i64>,
    /// `lhs == rhs`, and some summand is positive when `lhs` is.
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MackeyReport {
    pub group: GroupSpec,
    pub involution: InvolutionDescriptor,
    #[serde(rename = "H_order")]
    pub h_order: u64,
    pub rows: Vec<MackeyRow>,
    pub violations: Vec<MackeyRow>,
    pub verdict: Verdict,
}

/// Mackey identity for every irreducible of every Levi in `comps`.
pub fn verify_mackey(fam: &GlFamily, comps: &[Composition], sigma: &InvolutionSpec) -> Result<MackeyReport> {
    let mut rows = Vec::new();
    let mut h_order = 0;
    for comp in comps {
        let data = MackeyData::new(fam, comp, sigma)?;
        h_order = data.h_order;
        for l in 0..fam.parabolic(comp)?.levi_table.len() {
            rows.push(data.check(fam, l)?);
        }
    }
    let violations: Vec<MackeyRow> = rows.iter().filter(|r| !r.holds).cloned().collect();
    Ok(MackeyReport {
        group: *sigma.group_spec(),
        involution: sigma.descriptor(),
        h_order,
        verdict: Verdict::from_ok(violations.is_empty()),
        rows,
        violations,
    })
}

/// `g -> Q sigma(g) Q^{-1}` for a twisting element `x` with
/// `Q = x sigma(x)^{-1}`; its fixed points are `x H x^{-1}`.
#[derive(Clone, Debug)]
pub struct TwistedInvolution {
    pub base: InvolutionSpec,
    pub x: Matrix,
    pub q: Matrix,
    q_inv: Matrix,
}

impl TwistedInvolution {
    pub fn new(base: &InvolutionSpec, x: &Matrix) -> Result<TwistedInvolution> {
        let f = base.field();
        let xi = x.inverse(f).ok_or(Error::SingularMatrix)?;
        let q = x.mul(&base.apply(&xi), f);
        let q_inv = q.inverse(f).expect("product of units");
        Ok(TwistedInvolution { base: base.clone(), x: *x, q, q_inv })
    }

    pub fn apply(&self, g: &Matrix) -> Matrix {
        self.base.apply(g).conjugate_by(&self.q, &self.q_inv, self.base.field())
    }

    /// `sigma(Q) = Q^{-1}`.
    pub fn q_is_twisted(&self) -> bool {
        self.base.apply(&self.q) == self.q_inv
    }

    /// `sigma_x(sigma_x(g)) = g` for every `g` listed.
    pub fn is_involution_on(&self, elements: &[Matrix]) -> bool {
        elements.iter().all(|g| self.apply(&self.apply(g)) == *g)
    }

    /// The matrix `M` with `sigma_x(g) = M tau(g) M^{-1}`.
    pub fn conjugator(&self) -> Matrix {
        self.q.mul(self.base.parameter(), self.base.field())
    }

    /// Permutation pattern of `M` when it is monomial.
    pub fn pattern(&self) -> Option<Vec<usize>> {
        self.conjugator().monomial_pattern().map(|(r, _)| r)
    }
}

/// Refinement of a composition by an involutive index permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedLevi {
    /// Nonempty `T_{a,b} = {i : f(i) = a, f(r(i)) = b}` (0-based labels and
    /// indices), in lexicographic order of `(a, b)`.
    pub blocks: Vec<((usize, usize), Vec<usize>)>,
    /// Block sizes in the same order.
    pub composition: Vec<usize>,
    /// Index of the block `T_{b,a}` paired with each `T_{a,b}`.
    pub pairing: Vec<usize>,
}

impl TwistedLevi {
    /// Set partition of `[n]` given by the blocks.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|(_, b)| b.clone()).collect()
    }
}

/// The blocks `T_{a,b}` for the labeling of `f` and the permutation `r`.
pub fn twisted_levi(f: &Composition, r: &[usize]) -> Result<TwistedLevi> {
    let n = f.n();
    let mut seen = vec![false; n];
    if r.len() != n || r.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::InvalidArgument(format!("{r:?} is not a permutation of {n} indices")));
    }
    if (0..n).any(|i| r[r[i]] != i) {
        return Err(Error::InvalidArgument(format!("{r:?} is not an involution")));
    }
    let lab = f.labeling();
    let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        map.entry((lab[i], lab[r[i]])).or_default().push(i);
    }
    let blocks: Vec<((usize, usize), Vec<usize>)> = map.into_iter().collect();
    let keys: Vec<(usize, usize)> = blocks.iter().map(|(k, _)| *k).collect();
    let pairing = keys.iter().map(|&(a, b)| keys.iter().position(|&k| k == (b, a)).expect("r is an involution")).collect();
    Ok(TwistedLevi { composition: blocks.iter().map(|(_, b)| b.len()).collect(), blocks, pairing })
}

/// Whether `y` is block diagonal for the set partition `parts`.
pub fn in_set_levi(y: &Matrix, parts: &[Vec<usize>]) -> bool {
    let n = y.dim();
    let mut part = vec![0usize; n];
    for (k, p) in parts.iter().enumerate() {
        for &i in p {
            part[i] = k;
        }
    }
    (0..n).all(|i| (0..n).all(|j| part[i] == part[j] || y.get(i, j).is_zero()))
}

/// Whether `sigma_x` maps the set-partition Levi of `parts` into itself,
/// by exhaustive scan of `g`.
pub fn preserves_set_levi(g: &MatrixGroup, sx: &TwistedInvolution, parts: &[Vec<usize>]) -> bool {
    g.elements().iter().filter(|y| in_set_levi(y, parts)).all(|y| in_set_levi(&sx.apply(y), parts))
}

/// Set partitions strictly coarser than `parts` whose parts stay inside
/// the blocks of `f`.
pub fn coarsenings_within(f: &Composition, parts: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let lab = f.labeling();
    let mut out = Vec::new();
    // assign each part a group id in restricted-growth order
    fn rec(
        k: usize,
        parts: &[Vec<usize>],
        lab: &[usize],
        groups: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k == parts.len() {
            if groups.len() < parts.len() {
                let mut merged: Vec<Vec<usize>> = groups
                    .iter()
                    .map(|ids| {
                        let mut v: Vec<usize> = ids.iter().flat_map(|&i| parts[i].clone()).collect();
                        v.sort_unstable();
                        v
                    })
                    .collect();
                merged.sort();
                out.push(merged);
            }
            return;
        }
        let block = lab[parts[k][0]];
        for gi in 0..groups.len() {
            if lab[parts[groups[gi][0]][0]] == block {
                groups[gi].push(k);
                rec(k + 1, parts, lab, groups, out);
                groups[gi].pop();
            }
        }
        groups.push(vec![k]);
        rec(k + 1, parts, lab, groups, out);
        groups.pop();
    }
    rec(0, parts, &lab, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetRecord {
    pub coset: usize,
    pub coset_size: u64,
    /// First element `x` of `P g H` in enumeration order with
    /// `x sigma(x)^{-1}` monomial.
    pub x: String,
    /// `Q = x sigma(x)^{-1}`.
    pub q: String,
    /// Pattern of `Q` times the involution parameter.
    pub pattern: Vec<usize>,
    pub q_twisted: bool,
    pub involutive: bool,
    pub twisted_levi: Vec<usize>,
    pub levi_blocks: Vec<Vec<usize>>,
    pub preserved: bool,
    pub maximal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometricLemmaReport {
    pub group: GroupSpec,
    pub involution: InvolutionDescriptor,
    pub composition: Vec<usize>,
    pub cosets: Vec<CosetRecord>,
    pub violations: Vec<String>,
    pub verdict: Verdict,
}

/// For each double coset `P g H`, the first `x` in enumeration order with
/// `x sigma(x)^{-1}` monomial, or `None` when the coset has none.
pub fn geometric_representatives(
    g: &MatrixGroup,
    comp: &Composition,
    sigma: &InvolutionSpec,
) -> Result<Vec<(usize, Option<TwistedInvolution>)>> {
    let f = g.field();
    let p = standard_subgroups(g, comp)?.p;
    let h: SubgroupData = sigma.fixed_subgroup(g);
    let dc = double_cosets(g, &p, &h)?;
    let mut found: Vec<Option<TwistedInvolution>> = vec![None; dc.len()];
    let mut left = dc.len();
    for (i, x) in g.elements().iter().enumerate() {
        if left == 0 {
            break;
        }
        let c = dc.element_coset[i] as usize;
        if found[c].is_some() {
            continue;
        }
        let q = x.mul(&g.inv(&sigma.apply(x)), f);
        if q.is_monomial() {
            found[c] = Some(TwistedInvolution::new(sigma, x)?);
            left -= 1;
        }
    }
    Ok(found.into_iter().enumerate().collect())
}

/// Runs the double-coset lemma and the twisted-Levi checks for one
/// standard parabolic.
pub fn verify_geometric_lemma(g: &MatrixGroup, comp: &Composition, sigma: &InvolutionSpec) -> Result<GeometricLemmaReport> {
    let p = standard_subgroups(g, comp)?.p;
    let h = sigma.fixed_subgroup(g);
    let sizes = double_cosets(g, &p, &h)?.sizes;
    let mut cosets = Vec::new();
    let mut violations = Vec::new();
    for (c, found) in geometric_representatives(g, comp, sigma)? {
        let Some(sx) = found else {
            violations.push(format!("coset {c}: no x with x sigma(x)^-1 monomial"));
            continue;
        };
        let q_twisted = sx.q_is_twisted();
        let involutive = sx.is_involution_on(g.elements());
        let Some(pattern) = sx.pattern() else {
            violations.push(format!("coset {c}: Q times the parameter is not monomial"));
            continue;
        };
        let tl = twisted_levi(comp, &pattern)?;
        let parts = tl.parts();
        let preserved = preserves_set_levi(g, &sx, &parts);
        let maximal = coarsenings_within(comp, &parts).iter().all(|coarser| !preserves_set_levi(g, &sx, coarser));
        for (ok, what) in [(q_twisted, "sigma(Q) != Q^-1"), (involutive, "sigma_x is not an involution"), (preserved, "twisted Levi not preserved"), (maximal, "twisted Levi not maximal")] {
            if !ok {
                violations.push(format!("coset {c}: {what}"));
            }
        }
        cosets.push(CosetRecord {
            coset: c,
            coset_size: sizes[c],
            x: sx.x.to_string(),
            q: sx.q.to_string(),
            pattern,
            q_twisted,
            involutive,
            twisted_levi: tl.composition,
            levi_blocks: parts,
            preserved,
            maximal,
        });
    }
    Ok(GeometricLemmaReport {
        group: *g.spec(),
        involution: sigma.descriptor(),
        composition: comp.sizes().to_vec(),
        verdict: Verdict::from_ok(violations.is_empty()),
        cosets,
        violations,
    })
}
