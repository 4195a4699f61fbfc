use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::chartab::ClassFunction;
use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::mat::{GroupSpec, Matrix, MatrixGroup, SubgroupData};

/// Groups at most this large get an exhaustive automorphism check.
pub const EXHAUSTIVE_CHECK_LIMIT: u64 = 10_000;
/// Random products checked above that limit.
pub const SAMPLED_CHECKS: usize = 100_000;
const SAMPLE_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InvolutionKind {
    /// `g -> A g A^{-1}`.
    Inner,
    /// `g -> J g^{-t} J^{-1}`.
    TransposeInverse,
    /// `g -> A Fr(g) A^{-1}`, `Fr` the `q`-power map on entries.
    FrobeniusTwist,
    /// `g -> J Fr(g)^{-t} J^{-1}`.
    FrobeniusTransposeInverse,
}

impl InvolutionKind {
    pub fn uses_frobenius(self) -> bool {
        matches!(self, InvolutionKind::FrobeniusTwist | InvolutionKind::FrobeniusTransposeInverse)
    }

    pub fn uses_transpose(self) -> bool {
        matches!(self, InvolutionKind::TransposeInverse | InvolutionKind::FrobeniusTransposeInverse)
    }
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A validated involution of `GL_n(F_{q^m})` with its matrix parameter.
#[derive(Clone)]
pub struct InvolutionSpec {
    kind: InvolutionKind,
    parameter: Matrix,
    parameter_inv: Matrix,
    spec: GroupSpec,
    field: Arc<Field>,
}

impl fmt::Debug for InvolutionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) on {}", self.kind, self.parameter, self.spec)
    }
}

impl fmt::Display for InvolutionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.parameter)
    }
}

/// Serialized form `{kind, parameter}` used in reports and input files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionDescriptor {
    pub kind: InvolutionKind,
    #[serde(alias = "matrix")]
    pub parameter: String,
}

impl InvolutionSpec {
    /// Validates the parameter for its kind and checks that the map is an
    /// involutive automorphism of `g`, exhaustively for small groups and on
    /// random pairs otherwise.
    pub fn new(kind: InvolutionKind, parameter: Matrix, g: &MatrixGroup) -> Result<InvolutionSpec> {
        let spec = *g.spec();
        let field = g.field().clone();
        let f = &field;
        let bad = |msg: String| Err(Error::InvalidInvolution(msg));
        if parameter.dim() != spec.n {
            return bad(format!("parameter has dimension {}, group has {}", parameter.dim(), spec.n));
        }
        let Some(parameter_inv) = parameter.inverse(f) else {
            return bad(format!("parameter {parameter} is singular"));
        };
        if kind.uses_frobenius() && spec.m != 2 {
            return bad(format!("{kind} needs m = 2, group has m = {}", spec.m));
        }
        match kind {
            InvolutionKind::Inner => {
                if !parameter.mul(&parameter, f).is_scalar() {
                    return bad(format!("A = {parameter} does not square to a scalar"));
                }
            }
            InvolutionKind::TransposeInverse => {
                let t = parameter.transpose();
                let minus = parameter.scale(f.neg(Fe::ONE), f);
                if t != parameter && t != minus {
                    return bad(format!("J = {parameter} is neither symmetric nor antisymmetric"));
                }
                if t == minus && t != parameter && spec.n % 2 == 1 {
                    return bad("antisymmetric J needs even n".into());
                }
            }
            InvolutionKind::FrobeniusTwist => {
                if !parameter.mul(&parameter.frobenius(spec.q, f), f).is_scalar() {
                    return bad(format!("A Fr(A) is not scalar for A = {parameter}"));
                }
            }
            InvolutionKind::FrobeniusTransposeInverse => {
                let x = parameter.mul(&parameter.frobenius(spec.q, f).transpose().inverse(f).expect("unit"), f);
                if !x.is_scalar() {
                    return bad(format!("J Fr(J)^(-t) is not scalar for J = {parameter}"));
                }
            }
        }
        let sigma = InvolutionSpec { kind, parameter, parameter_inv, spec, field };
        sigma.check_automorphism(g)?;
        Ok(sigma)
    }

    fn check_automorphism(&self, g: &MatrixGroup) -> Result<()> {
        let f = &self.field;
        let fail = |what: String| Err(Error::InvalidInvolution(format!("{self} {what}")));
        let gens = g.generators();
        for s in &gens {
            if self.apply(&self.apply(s)) != *s {
                return fail(format!("does not square to the identity at {s}"));
            }
        }
        if g.order() <= EXHAUSTIVE_CHECK_LIMIT {
            // multiplicativity against a generating set covers all products
            for x in g.elements() {
                let sx = self.apply(x);
                for s in &gens {
                    if self.apply(&x.mul(s, f)) != sx.mul(&self.apply(s), f) {
                        return fail(format!("is not multiplicative at {x}, {s}"));
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(SAMPLE_SEED);
            let els = g.elements();
            for _ in 0..SAMPLED_CHECKS {
                let x = &els[rng.gen_range(0..els.len())];
                let y = &els[rng.gen_range(0..els.len())];
                if self.apply(&x.mul(y, f)) != self.apply(x).mul(&self.apply(y), f) {
                    return fail(format!("is not multiplicative at {x}, {y}"));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }

    pub fn parameter(&self) -> &Matrix {
        &self.parameter
    }

    pub fn group_spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn descriptor(&self) -> InvolutionDescriptor {
        InvolutionDescriptor { kind: self.kind, parameter: self.parameter.to_string() }
    }

    /// The kind-specific part `tau(g)`, so that `sigma(g) = P tau(g) P^{-1}`.
    pub fn base_map(&self, g: &Matrix) -> Matrix {
        let f = &self.field;
        let x = if self.kind.uses_frobenius() { g.frobenius(self.spec.q, f) } else { *g };
        if self.kind.uses_transpose() {
            x.inverse(f).expect("invertible").transpose()
        } else {
            x
        }
    }

    pub fn apply(&self, g: &Matrix) -> Matrix {
        self.base_map(g).conjugate_by(&self.parameter, &self.parameter_inv, &self.field)
    }

    /// `h sigma(h^{-1} g h) h^{-1}`, again an involution of the same kind.
    pub fn conjugate(&self, h: &Matrix, g: &MatrixGroup) -> Result<InvolutionSpec> {
        let f = &self.field;
        let hi = h.inverse(f).ok_or(Error::SingularMatrix)?;
        // sigma'(g) = h P tau(h)^{-1} tau(g) tau(h) P^{-1} h^{-1}
        let p = h.mul(&self.parameter, f).mul(&self.base_map(&hi), f);
        InvolutionSpec::new(self.kind, p, g)
    }

    /// Fixed points `H = G^sigma`.
    pub fn fixed_subgroup(&self, g: &MatrixGroup) -> SubgroupData {
        SubgroupData::from_predicate(g, format!("G^{self}"), |x| self.apply(x) == *x)
    }

    /// The class map `c -> class of sigma(g_c)^{-1}`.
    pub fn dual_class_map(&self, g: &MatrixGroup) -> Vec<usize> {
        (0..g.num_classes()).map(|c| g.class_of_member(&g.inv(&self.apply(g.class_rep(c))))).collect()
    }
}

/// `g -> chi(sigma(g)^{-1})`.
pub fn twisted_dual(chi: &ClassFunction, sigma: &InvolutionSpec, g: &MatrixGroup) -> ClassFunction {
    chi.pull_back(&sigma.dual_class_map(g))
}

pub fn make_involution(kind: InvolutionKind, parameter: Matrix, g: &MatrixGroup) -> Result<InvolutionSpec> {
    InvolutionSpec::new(kind, parameter, g)
}

/// Builds an involution from its serialized form.
pub fn involution_from_descriptor(d: &InvolutionDescriptor, g: &MatrixGroup) -> Result<InvolutionSpec> {
    let m = Matrix::parse(&d.parameter, g.field().order())?;
    InvolutionSpec::new(d.kind, m, g)
}

/// `diag(1^k, (-1)^(n-k))`.
pub fn split_diagonal(n: usize, k: usize, f: &Field) -> Matrix {
    let d: Vec<Fe> = (0..n).map(|i| if i < k { Fe::ONE } else { f.neg(Fe::ONE) }).collect();
    Matrix::diag(&d)
}

/// Block diagonal of `[[0,1],[z,0]]` with `z` the smallest non-square; it
/// squares to the non-square scalar `z`.
pub fn e_form(n: usize, f: &Field) -> Matrix {
    let z = f.smallest_nonsquare();
    let b = Matrix::from_rows(&[vec![Fe::ZERO, Fe::ONE], vec![z, Fe::ZERO]]);
    Matrix::block_diagonal(&vec![b; n / 2])
}

/// Block diagonal of `[[0,1],[-1,0]]`.
pub fn standard_symplectic(n: usize, f: &Field) -> Matrix {
    let b = Matrix::from_rows(&[vec![Fe::ZERO, Fe::ONE], vec![f.neg(Fe::ONE), Fe::ZERO]]);
    Matrix::block_diagonal(&vec![b; n / 2])
}

/// One representative per involution type available for the group:
/// `diag(1^k, (-1)^(n-k))` for `n/2 <= k < n`, the E-form and the
/// symplectic form for even `n`, the symmetric form `I`, and for `m = 2`
/// the Frobenius twist and the unitary form `I`.
pub fn catalogue(g: &MatrixGroup) -> Result<Vec<InvolutionSpec>> {
    let spec = g.spec();
    let n = spec.n;
    let f = g.field();
    let mut out = Vec::new();
    for k in n.div_ceil(2)..n {
        out.push(InvolutionSpec::new(InvolutionKind::Inner, split_diagonal(n, k, f), g)?);
    }
    if n.is_multiple_of(2) {
        out.push(InvolutionSpec::new(InvolutionKind::Inner, e_form(n, f), g)?);
    }
    out.push(InvolutionSpec::new(InvolutionKind::TransposeInverse, Matrix::identity(n), g)?);
    if n.is_multiple_of(2) {
        out.push(InvolutionSpec::new(InvolutionKind::TransposeInverse, standard_symplectic(n, f), g)?);
    }
    if spec.m == 2 {
        out.push(InvolutionSpec::new(InvolutionKind::FrobeniusTwist, Matrix::identity(n), g)?);
        out.push(InvolutionSpec::new(InvolutionKind::FrobeniusTransposeInverse, Matrix::identity(n), g)?);
    }
    Ok(out)
}
