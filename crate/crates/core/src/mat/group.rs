use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{prime_power, Fe, Field};

use super::matrix::{Matrix, MAX_DIM};
use super::poly::{self, Poly};

/// Default cap on the number of group elements enumerated.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 10_000_000;

const DENSE_INDEX_LIMIT: u64 = 1 << 22;

/// `GL_n(F_{q^m})` with base field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub n: usize,
    pub q: u64,
    pub m: u32,
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GL_{}(F_{})", self.n, self.element_field_order())
    }
}

impl GroupSpec {
    pub fn new(n: usize, q: u64, m: u32) -> Result<GroupSpec> {
        let spec = GroupSpec { n, q, m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.n) {
            return Err(Error::InvalidGroup(format!("n = {} outside 1..={MAX_DIM}", self.n)));
        }
        if !(1..=2).contains(&self.m) {
            return Err(Error::InvalidGroup(format!("m = {} must be 1 or 2", self.m)));
        }
        match prime_power(self.q) {
            Some((p, _)) if p % 2 == 1 => Ok(()),
            _ => Err(Error::InvalidGroup(format!("q = {} is not an odd prime power", self.q))),
        }
    }

    /// `Q = q^m`, the order of the field the matrix entries live in.
    pub fn element_field_order(&self) -> u64 {
        self.q.pow(self.m)
    }

    pub fn build_field(&self) -> Result<Field> {
        self.validate()?;
        let (p, e) = prime_power(self.q).expect("validated");
        Field::new(p, e * self.m)
    }

    pub fn with_dim(&self, n: usize) -> GroupSpec {
        GroupSpec { n, ..*self }
    }
}

/// `prod_{i<n} (Q^n - Q^i)` with `Q = q^m`.
pub fn group_order(spec: &GroupSpec) -> u64 {
    let big_q = spec.element_field_order();
    let qn = big_q.pow(spec.n as u32);
    (0..spec.n as u32).map(|i| qn - big_q.pow(i)).product()
}

/// Every invertible matrix of `GL_n(F_Q)` once, in row-major lexicographic
/// order of entry codes.
pub fn enumerate_elements(spec: &GroupSpec, field: &Field, bound: u64) -> Result<Vec<Matrix>> {
    let order = group_order(spec);
    if order > bound {
        return Err(Error::BoundExceeded { what: spec.to_string(), needed: order, bound });
    }
    let n = spec.n;
    let q = field.order() as u64;
    let rows: Vec<Vec<Fe>> = (0..q.pow(n as u32))
        .map(|code| {
            let mut r = vec![Fe::ZERO; n];
            let mut c = code;
            for j in (0..n).rev() {
                r[j] = Fe((c % q) as u32);
                c /= q;
            }
            r
        })
        .collect();

    fn reduce(v: &[Fe], basis: &[(usize, Vec<Fe>)], f: &Field) -> Option<(usize, Vec<Fe>)> {
        let mut v = v.to_vec();
        for (piv, b) in basis {
            let c = v[*piv];
            if !c.is_zero() {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let piv = v.iter().position(|x| !x.is_zero())?;
        let inv = f.inv(v[piv]).unwrap();
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        Some((piv, v))
    }

    fn rec(
        depth: usize,
        n: usize,
        rows: &[Vec<Fe>],
        chosen: &mut Vec<usize>,
        basis: &mut Vec<(usize, Vec<Fe>)>,
        f: &Field,
        out: &mut Vec<Matrix>,
    ) {
        if depth == n {
            let m: Vec<Vec<Fe>> = chosen.iter().map(|&i| rows[i].clone()).collect();
            out.push(Matrix::from_rows(&m));
            return;
        }
        for (i, r) in rows.iter().enumerate() {
            if let Some(red) = reduce(r, basis, f) {
                chosen.push(i);
                basis.push(red);
                rec(depth + 1, n, rows, chosen, basis, f, out);
                basis.pop();
                chosen.pop();
            }
        }
    }

    let mut out = Vec::with_capacity(order as usize);
    rec(0, n, &rows, &mut Vec::new(), &mut Vec::new(), field, &mut out);
    debug_assert_eq!(out.len() as u64, order);
    Ok(out)
}

/// Lookup from matrix code to position in an element list.
#[derive(Clone, Debug)]
pub enum ElementIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl ElementIndex {
    pub fn build(elements: &[Matrix], n: usize, q: u32, allow_dense: bool) -> ElementIndex {
        let space = (q as u64).checked_pow((n * n) as u32).unwrap_or(u64::MAX);
        if allow_dense && space <= DENSE_INDEX_LIMIT {
            let mut v = vec![u32::MAX; space as usize];
            for (i, m) in elements.iter().enumerate() {
                v[m.code(q) as usize] = i as u32;
            }
            ElementIndex::Dense(v)
        } else {
            ElementIndex::Sparse(elements.iter().enumerate().map(|(i, m)| (m.code(q), i as u32)).collect())
        }
    }

    #[inline]
    pub fn get(&self, code: u64) -> Option<usize> {
        match self {
            ElementIndex::Dense(v) => match v.get(code as usize) {
                Some(&i) if i != u32::MAX => Some(i as usize),
                _ => None,
            },
            ElementIndex::Sparse(m) => m.get(&code).map(|&i| i as usize),
        }
    }
}

/// Elementary-divisor data of a conjugacy class: for each monic irreducible
/// factor of the characteristic polynomial, the partition recording its
/// Jordan-type block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel(pub Vec<(Poly, Vec<usize>)>);

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(p, lam)| {
                let cs: Vec<String> = p.iter().map(|c| c.0.to_string()).collect();
                let ls: Vec<String> = lam.iter().map(|l| l.to_string()).collect();
                format!("[{}]^({})", cs.join(" "), ls.join(" "))
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Computes elementary-divisor labels, caching factorizations.
pub struct Labeler<'a> {
    field: &'a Field,
    irreducibles: Vec<Poly>,
    cache: HashMap<Poly, Vec<(Poly, usize)>>,
}

impl<'a> Labeler<'a> {
    pub fn new(field: &'a Field, n: usize) -> Labeler<'a> {
        Labeler { field, irreducibles: poly::monic_irreducibles(field, n), cache: HashMap::new() }
    }

    pub fn label(&mut self, a: &Matrix) -> ClassLabel {
        let f = self.field;
        let cp = poly::charpoly(a, f);
        let irr = &self.irreducibles;
        let factors = self.cache.entry(cp.clone()).or_insert_with(|| poly::factor(&cp, irr, f)).clone();
        let n = a.dim();
        let mut out = Vec::with_capacity(factors.len());
        for (phi, mult) in factors {
            let d = phi.len() - 1;
            let base = poly::eval_matrix(&phi, a, f);
            let mut pw = Matrix::identity(n);
            // s[j] = sum_i min(lambda_i, j)
            let mut s = vec![0usize];
            for _ in 1..=mult {
                pw = pw.mul(&base, f);
                s.push((n - pw.rank(f)) / d);
            }
            // c[j] = #parts >= j
            let c: Vec<usize> = (1..=mult).map(|j| s[j] - s[j - 1]).collect();
            let parts = c[0];
            let lambda: Vec<usize> = (1..=parts).map(|i| c.iter().filter(|&&cj| cj >= i).count()).collect();
            out.push((phi, lambda));
        }
        out.sort();
        ClassLabel(out)
    }
}

/// Number of elementary-divisor labels of total degree `n`: assignments of
/// partitions to monic irreducibles other than `x` with `sum deg * |lambda| = n`.
pub fn count_class_labels(field: &Field, n: usize) -> u64 {
    let partitions: Vec<u64> = (0..=n)
        .map(|k| {
            // p(k) by the standard coin DP
            let mut ways = vec![0u64; k + 1];
            ways[0] = 1;
            for part in 1..=k {
                for t in part..=k {
                    ways[t] += ways[t - part];
                }
            }
            ways[k]
        })
        .collect();
    let mut series = vec![0u64; n + 1];
    series[0] = 1;
    for phi in poly::monic_irreducibles(field, n) {
        if phi[0].is_zero() {
            continue;
        }
        let d = phi.len() - 1;
        let mut next = vec![0u64; n + 1];
        for (i, &c) in series.iter().enumerate() {
            for k in 0..=(n - i) / d {
                next[i + k * d] += c * partitions[k];
            }
        }
        series = next;
    }
    series[n]
}

/// Conjugacy classes of a finite matrix group.
#[derive(Clone, Debug)]
pub struct ConjClassTable {
    group_order: u64,
    element_class: Vec<u32>,
    reps: Vec<u32>,
    members: Vec<Vec<u32>>,
    labels: Option<Vec<ClassLabel>>,
}

impl ConjClassTable {
    /// Builds a table from a per-element class assignment whose class ids
    /// appear in order of first occurrence.
    fn from_assignment(element_class: Vec<u32>, labels: Option<Vec<ClassLabel>>) -> ConjClassTable {
        let k = element_class.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut members = vec![Vec::new(); k];
        for (i, &c) in element_class.iter().enumerate() {
            members[c as usize].push(i as u32);
        }
        let reps = members.iter().map(|m| m[0]).collect();
        ConjClassTable { group_order: element_class.len() as u64, element_class, reps, members, labels }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of_element(&self, idx: usize) -> usize {
        self.element_class[idx] as usize
    }

    /// Element index of the class representative (the smallest member).
    pub fn rep(&self, c: usize) -> usize {
        self.reps[c] as usize
    }

    pub fn size(&self, c: usize) -> u64 {
        self.members[c].len() as u64
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.members.iter().map(|m| m.len() as u64).collect()
    }

    pub fn centralizer_order(&self, c: usize) -> u64 {
        self.group_order / self.size(c)
    }

    pub fn members(&self, c: usize) -> &[u32] {
        &self.members[c]
    }

    pub fn label(&self, c: usize) -> Option<&ClassLabel> {
        self.labels.as_ref().map(|l| &l[c])
    }
}

/// A finite group of invertible matrices with its elements in enumeration
/// order and its conjugacy classes.
pub struct MatrixGroup {
    spec: GroupSpec,
    field: Arc<Field>,
    name: String,
    elements: Vec<Matrix>,
    index: ElementIndex,
    classes: ConjClassTable,
}

impl fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixGroup({}, order {})", self.name, self.order())
    }
}

impl MatrixGroup {
    /// `GL_n(F_Q)` with classes keyed by elementary-divisor labels.
    pub fn general_linear(spec: GroupSpec, bound: u64) -> Result<MatrixGroup> {
        let field = Arc::new(spec.build_field()?);
        Self::general_linear_over(spec, field, bound)
    }

    pub fn general_linear_over(spec: GroupSpec, field: Arc<Field>, bound: u64) -> Result<MatrixGroup> {
        spec.validate()?;
        if field.order() as u64 != spec.element_field_order() {
            return Err(Error::InvalidGroup(format!("{field} does not match {spec}")));
        }
        let elements = enumerate_elements(&spec, &field, bound)?;
        let index = ElementIndex::build(&elements, spec.n, field.order(), true);
        let mut labeler = Labeler::new(&field, spec.n);
        let mut ids: HashMap<ClassLabel, u32> = HashMap::new();
        let mut labels = Vec::new();
        let mut element_class = Vec::with_capacity(elements.len());
        for g in &elements {
            let l = labeler.label(g);
            let next = ids.len() as u32;
            let id = *ids.entry(l.clone()).or_insert_with(|| {
                labels.push(l);
                next
            });
            element_class.push(id);
        }
        let classes = ConjClassTable::from_assignment(element_class, Some(labels));
        Ok(MatrixGroup { name: spec.to_string(), spec, field, elements, index, classes })
    }

    /// A subgroup with classes found by orbit enumeration under conjugation.
    pub fn from_elements(
        spec: GroupSpec,
        field: Arc<Field>,
        name: impl Into<String>,
        mut elements: Vec<Matrix>,
    ) -> MatrixGroup {
        let q = field.order();
        elements.sort_by_key(|m| m.code(q));
        elements.dedup();
        let index = ElementIndex::build(&elements, spec.n, q, false);
        let gens = generating_set(&elements, &field);
        let element_class = orbit_partition(&elements, &index, &gens, &field);
        let classes = ConjClassTable::from_assignment(element_class, None);
        MatrixGroup { spec, field, name: name.into(), elements, index, classes }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &Matrix {
        &self.elements[idx]
    }

    pub fn classes(&self) -> &ConjClassTable {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_rep(&self, c: usize) -> &Matrix {
        &self.elements[self.classes.rep(c)]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m.code(self.field.order()))
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index_of(m).is_some()
    }

    /// Class index of `g`; errors for singular input or non-members.
    pub fn class_of(&self, g: &Matrix) -> Result<usize> {
        match self.index_of(g) {
            Some(i) => Ok(self.classes.class_of_element(i)),
            None if g.det(&self.field).is_zero() => Err(Error::SingularMatrix),
            None => Err(Error::InvalidArgument(format!("{g} is not in {}", self.name))),
        }
    }

    /// Class of a matrix known to be in the group.
    #[inline]
    pub fn class_of_member(&self, g: &Matrix) -> usize {
        let i = self.index_of(g).expect("element of the group");
        self.classes.class_of_element(i)
    }

    pub fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.mul(b, &self.field)
    }

    pub fn inv(&self, a: &Matrix) -> Matrix {
        a.inverse(&self.field).expect("group element")
    }

    pub fn generators(&self) -> Vec<Matrix> {
        generating_set(&self.elements, &self.field)
    }

    /// Order of the element (smallest `k >= 1` with `g^k = 1`).
    pub fn element_order(&self, g: &Matrix) -> u64 {
        let mut x = *g;
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(g, &self.field);
            k += 1;
        }
        k
    }

    /// Class table as CSV: `class_index,label,size,centralizer_order,representative`.
    pub fn class_table_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["class_index", "label", "size", "centralizer_order", "representative"])
            .expect("in-memory write");
        for c in 0..self.num_classes() {
            let label = self.classes.label(c).map(|l| l.to_string()).unwrap_or_default();
            w.write_record([
                c.to_string(),
                label,
                self.classes.size(c).to_string(),
                self.classes.centralizer_order(c).to_string(),
                self.class_rep(c).to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// A small generating set, chosen greedily in element order.
pub fn generating_set(elements: &[Matrix], f: &Field) -> Vec<Matrix> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let n = first.dim();
    let mut gens: Vec<Matrix> = Vec::new();
    let mut closure: HashSet<Matrix> = HashSet::from([Matrix::identity(n)]);
    for g in elements {
        if closure.len() == elements.len() {
            break;
        }
        if closure.contains(g) {
            continue;
        }
        gens.push(*g);
        let mut queue: VecDeque<Matrix> = closure.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for h in &gens {
                let y = x.mul(h, f);
                if closure.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    gens
}

/// Partition of `elements` into conjugacy orbits under the group generated
/// by `gens`; class ids follow first appearance in `elements`.
pub fn orbit_partition(elements: &[Matrix], index: &ElementIndex, gens: &[Matrix], f: &Field) -> Vec<u32> {
    let q = f.order();
    let gens: Vec<(Matrix, Matrix)> = gens.iter().map(|g| (*g, g.inverse(f).expect("unit"))).collect();
    let mut cls = vec![u32::MAX; elements.len()];
    let mut next = 0u32;
    for start in 0..elements.len() {
        if cls[start] != u32::MAX {
            continue;
        }
        cls[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for (g, gi) in &gens {
                let y = elements[i].conjugate_by(g, gi, f);
                let j = index.get(y.code(q)).expect("closed under conjugation");
                if cls[j] == u32::MAX {
                    cls[j] = next;
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }
    cls
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(n: usize, q: u64, m: u32) -> MatrixGroup {
        MatrixGroup::general_linear(GroupSpec::new(n, q, m).unwrap(), DEFAULT_ENUMERATION_BOUND).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(group_order(&GroupSpec::new(1, 3, 1).unwrap()), 2);
        assert_eq!(group_order(&GroupSpec::new(2, 3, 1).unwrap()), 48);
        assert_eq!(group_order(&GroupSpec::new(2, 3, 2).unwrap()), 5760);
        assert_eq!(group_order(&GroupSpec::new(2, 9, 1).unwrap()), 5760);
    }

    #[test]
    fn gl2_f3_by_brute_force() {
        // oracle: all 81 matrices filtered by determinant
        let spec = GroupSpec::new(2, 3, 1).unwrap();
        let f = spec.build_field().unwrap();
        let brute: Vec<Matrix> =
            (0..81).map(|c| Matrix::from_code(2, 3, c)).filter(|m| !m.det(&f).is_zero()).collect();
        let enumerated = enumerate_elements(&spec, &f, 1000).unwrap();
        assert_eq!(brute, enumerated);
    }

    #[test]
    fn enumeration_counts() {
        let cases = [(1usize, 3u64, 1u32, 2u64), (2, 5, 1, 480), (3, 3, 1, 11232)];
        for (n, q, m, expect) in cases {
            let spec = GroupSpec::new(n, q, m).unwrap();
            let f = spec.build_field().unwrap();
            let els = enumerate_elements(&spec, &f, DEFAULT_ENUMERATION_BOUND).unwrap();
            assert_eq!(els.len() as u64, expect);
            assert_eq!(group_order(&spec), expect);
            let codes: Vec<u64> = els.iter().map(|m| m.code(f.order())).collect();
            assert!(codes.windows(2).all(|w| w[0] < w[1]));
        }
        let spec = GroupSpec::new(1, 3, 1).unwrap();
        let f = spec.build_field().unwrap();
        let els = enumerate_elements(&spec, &f, 10).unwrap();
        assert_eq!(els.iter().map(|m| m.get(0, 0).0).collect::<Vec<_>>(), vec![1, 2]);
        assert!(enumerate_elements(&GroupSpec::new(3, 3, 1).unwrap(), &f, 1000).is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GroupSpec::new(2, 4, 1).is_err());
        assert!(GroupSpec::new(2, 6, 1).is_err());
        assert!(GroupSpec::new(2, 3, 3).is_err());
        assert!(GroupSpec::new(0, 3, 1).is_err());
    }

    #[test]
    fn class_counts() {
        assert_eq!(gl(1, 3, 1).num_classes(), 2);
        let g = gl(2, 3, 1);
        assert_eq!(g.num_classes(), 8);
        let id_class = g.class_of(&Matrix::identity(2)).unwrap();
        assert_eq!(g.classes().size(id_class), 1);
        assert!(matches!(g.class_of(&Matrix::zero(2)), Err(Error::SingularMatrix)));
    }

    #[test]
    fn label_classes_match_orbit_oracle() {
        for (n, q, m) in [(2, 3, 1), (2, 5, 1), (1, 9, 1), (1, 3, 2)] {
            let g = gl(n, q, m);
            let gens = g.generators();
            let index = ElementIndex::build(g.elements(), n, g.field().order(), false);
            let orbit = orbit_partition(g.elements(), &index, &gens, g.field());
            let labels: Vec<u32> =
                (0..g.elements().len()).map(|i| g.classes().class_of_element(i) as u32).collect();
            assert_eq!(orbit, labels, "{n} {q} {m}");
        }
    }

    #[test]
    fn class_count_matches_label_count() {
        for (n, q) in [(1usize, 3u64), (2, 3), (2, 5), (3, 3)] {
            let g = gl(n, q, 1);
            assert_eq!(g.num_classes() as u64, count_class_labels(g.field(), n), "{n} {q}");
        }
    }

    #[test]
    fn transpose_preserves_class() {
        for n in [2, 3] {
            let g = gl(n, 3, 1);
            for x in g.elements() {
                assert_eq!(g.class_of_member(x), g.class_of_member(&x.transpose()));
            }
        }
        // brute-force conjugacy oracle on GL_2(F_3)
        let g = gl(2, 3, 1);
        let f = g.field().clone();
        for x in g.elements() {
            let t = x.transpose();
            let found = g.elements().iter().any(|h| x.conjugate_by(h, &h.inverse(&f).unwrap(), &f) == t);
            assert!(found);
        }
    }

    #[test]
    fn conjugation_invariance() {
        let g = gl(2, 3, 1);
        let f = g.field().clone();
        for x in g.elements() {
            for h in g.elements().iter().step_by(7) {
                let y = x.conjugate_by(h, &h.inverse(&f).unwrap(), &f);
                assert_eq!(g.class_of(x).unwrap(), g.class_of(&y).unwrap());
            }
        }
    }

    #[test]
    fn class_sizes_divide_order() {
        for (n, q) in [(2, 3), (3, 3), (2, 5)] {
            let g = gl(n, q, 1);
            let t = g.classes();
            let total: u64 = t.sizes().iter().sum();
            assert_eq!(total, g.order());
            for c in 0..t.len() {
                assert_eq!(g.order() % t.size(c), 0);
                assert_eq!(t.size(c) * t.centralizer_order(c), g.order());
            }
        }
    }

    #[test]
    fn csv_dump_shape() {
        let g = gl(1, 3, 1);
        let csv = g.class_table_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "class_index,label,size,centralizer_order,representative");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with(",1,2,1"));
    }
}
