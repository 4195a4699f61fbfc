use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::Field;

use super::group::{generating_set, GroupSpec, MatrixGroup};
use super::matrix::Matrix;

/// An ordered composition of `n` into positive block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<usize>);

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Composition {
    pub fn from_sizes(sizes: &[usize], n: usize) -> Result<Composition> {
        if sizes.is_empty() || sizes.contains(&0) || sizes.iter().sum::<usize>() != n {
            return Err(Error::MalformedComposition(sizes.to_vec(), n));
        }
        Ok(Composition(sizes.to_vec()))
    }

    /// From a non-decreasing block labeling `f: [n] -> [m]` using every
    /// label `1..=m`; `(1,1,2)` gives block sizes `(2,1)`.
    pub fn from_labeling(f: &[usize]) -> Result<Composition> {
        let bad = || Error::MalformedComposition(f.to_vec(), f.len());
        if f.first() != Some(&1) {
            return Err(bad());
        }
        let mut sizes = vec![1usize];
        for w in f.windows(2) {
            match w[1].checked_sub(w[0]) {
                Some(0) => *sizes.last_mut().unwrap() += 1,
                Some(1) => sizes.push(1),
                _ => return Err(bad()),
            }
        }
        Ok(Composition(sizes))
    }

    pub fn trivial(n: usize) -> Composition {
        Composition(vec![n])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Block label (0-based) of each index.
    pub fn labeling(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect()
    }

    /// Start offset of each block.
    pub fn offsets(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect()
    }

    /// All compositions of `n`, in lexicographic order of sizes.
    pub fn all(n: usize) -> Vec<Composition> {
        fn rec(rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if rem == 0 {
                out.push(Composition(cur.clone()));
                return;
            }
            for s in 1..=rem {
                cur.push(s);
                rec(rem - s, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Diagonal blocks of `a`.
    pub fn blocks(&self, a: &Matrix) -> Vec<Matrix> {
        self.offsets().iter().zip(&self.0).map(|(&o, &s)| a.block(o, s)).collect()
    }

    /// Block-diagonal part of `a`.
    pub fn levi_projection(&self, a: &Matrix) -> Matrix {
        Matrix::block_diagonal(&self.blocks(a))
    }
}

/// An explicitly listed subgroup of `GL_n(F_Q)`.
#[derive(Clone)]
pub struct SubgroupData {
    parent: GroupSpec,
    field: Arc<Field>,
    descriptor: String,
    elements: Vec<Matrix>,
    codes: HashSet<u64>,
}

impl fmt::Debug for SubgroupData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupData({} in {}, order {})", self.descriptor, self.parent, self.order())
    }
}

impl SubgroupData {
    /// Elements of `g` satisfying `pred`, kept in enumeration order. The
    /// caller is responsible for `pred` cutting out a subgroup.
    pub fn from_predicate(g: &MatrixGroup, descriptor: impl Into<String>, pred: impl Fn(&Matrix) -> bool) -> SubgroupData {
        let elements: Vec<Matrix> = g.elements().iter().filter(|m| pred(m)).copied().collect();
        Self::from_sorted(*g.spec(), g.field().clone(), descriptor.into(), elements)
    }

    pub fn from_elements(
        parent: GroupSpec,
        field: Arc<Field>,
        descriptor: impl Into<String>,
        mut elements: Vec<Matrix>,
    ) -> SubgroupData {
        let q = field.order();
        elements.sort_by_key(|m| m.code(q));
        elements.dedup();
        Self::from_sorted(parent, field, descriptor.into(), elements)
    }

    fn from_sorted(parent: GroupSpec, field: Arc<Field>, descriptor: String, elements: Vec<Matrix>) -> SubgroupData {
        let q = field.order();
        let codes = elements.iter().map(|m| m.code(q)).collect();
        SubgroupData { parent, field, descriptor, elements, codes }
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(g: &MatrixGroup) -> SubgroupData {
        Self::from_predicate(g, g.name().to_string(), |_| true)
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.codes.contains(&m.code(self.field.order()))
    }

    pub fn generators(&self) -> Vec<Matrix> {
        generating_set(&self.elements, &self.field)
    }

    /// `g H g^{-1}`.
    pub fn conjugate(&self, g: &Matrix) -> SubgroupData {
        let f = &self.field;
        let gi = g.inverse(f).expect("invertible conjugator");
        let els = self.elements.iter().map(|h| h.conjugate_by(g, &gi, f)).collect();
        Self::from_elements(self.parent, f.clone(), format!("{g}({})", self.descriptor), els)
    }

    pub fn intersect(&self, other: &SubgroupData) -> SubgroupData {
        let els: Vec<Matrix> = self.elements.iter().filter(|m| other.contains(m)).copied().collect();
        Self::from_sorted(self.parent, self.field.clone(), format!("{} & {}", self.descriptor, other.descriptor), els)
    }

    /// Checks closure under products and inverses and presence of the identity.
    pub fn is_subgroup(&self) -> bool {
        let f = &self.field;
        let Some(first) = self.elements.first() else {
            return false;
        };
        if !self.contains(&Matrix::identity(first.dim())) {
            return false;
        }
        let gens = self.generators();
        self.elements.iter().all(|x| {
            x.inverse(f).is_some_and(|xi| self.contains(&xi)) && gens.iter().all(|g| self.contains(&x.mul(g, f)))
        })
    }

    /// The subgroup as a group with its own class table.
    pub fn to_group(&self) -> MatrixGroup {
        MatrixGroup::from_elements(self.parent, self.field.clone(), self.descriptor.clone(), self.elements.clone())
    }
}

/// Standard parabolic `P`, Levi `L` and unipotent radical `U` attached to a
/// composition.
#[derive(Clone, Debug)]
pub struct StandardSubgroups {
    pub composition: Composition,
    pub p: SubgroupData,
    pub l: SubgroupData,
    pub u: SubgroupData,
}

pub fn standard_subgroups(g: &MatrixGroup, comp: &Composition) -> Result<StandardSubgroups> {
    let n = g.n();
    if comp.n() != n {
        return Err(Error::MalformedComposition(comp.sizes().to_vec(), n));
    }
    let lab = comp.labeling();
    let lower_zero = |a: &Matrix| (0..n).all(|i| (0..n).all(|j| lab[i] <= lab[j] || a.get(i, j).is_zero()));
    let upper_zero = |a: &Matrix| (0..n).all(|i| (0..n).all(|j| lab[i] >= lab[j] || a.get(i, j).is_zero()));
    let unit_diag = |a: &Matrix| {
        (0..n).all(|i| {
            (0..n).all(|j| lab[i] != lab[j] || a.get(i, j) == if i == j { crate::ff::Fe::ONE } else { crate::ff::Fe::ZERO })
        })
    };
    let p = SubgroupData::from_predicate(g, format!("P{comp}"), lower_zero);
    let l = SubgroupData::from_predicate(g, format!("L{comp}"), |a| lower_zero(a) && upper_zero(a));
    let u = SubgroupData::from_predicate(g, format!("U{comp}"), |a| lower_zero(a) && unit_diag(a));
    Ok(StandardSubgroups { composition: comp.clone(), p, l, u })
}

/// `A \ G / B` with the coset of every element of `G`.
#[derive(Clone, Debug)]
pub struct DoubleCosets {
    /// Element index (in `G`) of each coset representative.
    pub reps: Vec<usize>,
    pub sizes: Vec<u64>,
    /// Coset index of each element of `G`.
    pub element_coset: Vec<u32>,
}

impl DoubleCosets {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Double cosets `A g B`; representatives are minimal in enumeration order.
pub fn double_cosets(g: &MatrixGroup, a: &SubgroupData, b: &SubgroupData) -> Result<DoubleCosets> {
    for s in [a, b] {
        if s.parent() != g.spec() {
            return Err(Error::GroupMismatch(s.parent().to_string(), g.spec().to_string()));
        }
    }
    let f = g.field();
    let ga = a.generators();
    let gb = b.generators();
    let total = g.elements().len();
    let mut coset = vec![u32::MAX; total];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for start in 0..total {
        if coset[start] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(start);
        coset[start] = id;
        let mut size = 1u64;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let x = g.element(i);
            let nbrs = ga.iter().map(|h| h.mul(x, f)).chain(gb.iter().map(|h| x.mul(h, f)));
            for y in nbrs {
                let j = g.index_of(&y).expect("closed");
                if coset[j] == u32::MAX {
                    coset[j] = id;
                    size += 1;
                    queue.push_back(j);
                }
            }
        }
        sizes.push(size);
    }
    Ok(DoubleCosets { reps, sizes, element_coset: coset })
}

/// Left coset representatives of `G / H` (minimal in enumeration order).
pub fn left_coset_reps(g: &MatrixGroup, h: &SubgroupData) -> Vec<usize> {
    let f = g.field();
    let mut seen = vec![false; g.elements().len()];
    let mut reps = Vec::new();
    for i in 0..seen.len() {
        if seen[i] {
            continue;
        }
        reps.push(i);
        let x = g.element(i);
        for y in h.elements() {
            seen[g.index_of(&x.mul(y, f)).expect("closed")] = true;
        }
    }
    reps
}
