//! The graded ring `R = sum_n R(GL_n(F_Q))` with multiplication by parabolic
//! induction and comultiplication by Jacquet restriction, and a checker for
//! its positive self-adjoint Hopf algebra axioms in low degree.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::Result;
use crate::mat::Composition;

use super::family::GlFamily;

/// An irreducible `(n, index)`; `(0, 0)` is the unit in degree zero.
pub type Irr = (usize, usize);

/// Integer combination of irreducibles.
pub type GradedElement = BTreeMap<Irr, i64>;

/// Integer combination of tensors of irreducibles.
pub type TensorElement = BTreeMap<(Irr, Irr), i64>;

const UNIT: Irr = (0, 0);

/// Products and coproducts of irreducibles, memoized.
pub struct GradedRing<'a> {
    fam: &'a GlFamily,
    products: HashMap<(Irr, Irr), GradedElement>,
    coproducts: HashMap<Irr, TensorElement>,
}

fn add_into<K: Ord + Clone>(acc: &mut BTreeMap<K, i64>, k: K, v: i64) {
    if v == 0 {
        return;
    }
    let e = acc.entry(k.clone()).or_insert(0);
    *e += v;
    if *e == 0 {
        acc.remove(&k);
    }
}

impl<'a> GradedRing<'a> {
    pub fn new(fam: &'a GlFamily) -> GradedRing<'a> {
        GradedRing { fam, products: HashMap::new(), coproducts: HashMap::new() }
    }

    /// `a * b` = induction of `a x b` from `GL_{n1} x GL_{n2}`.
    pub fn product(&mut self, a: Irr, b: Irr) -> Result<GradedElement> {
        if a.0 == 0 {
            return Ok(BTreeMap::from([(b, 1)]));
        }
        if b.0 == 0 {
            return Ok(BTreeMap::from([(a, 1)]));
        }
        if let Some(p) = self.products.get(&(a, b)) {
            return Ok(p.clone());
        }
        let n = a.0 + b.0;
        let par = self.fam.parabolic(&Composition::from_sizes(&[a.0, b.0], n)?)?;
        let levi = par.levi_table.character(par.levi_index(&[a.1, b.1]));
        let mults = self.fam.table(n).decompose(&par.induce(levi)?)?;
        let mut out = GradedElement::new();
        for (i, m) in mults.into_iter().enumerate() {
            add_into(&mut out, (n, i), m);
        }
        self.products.insert((a, b), out.clone());
        Ok(out)
    }

    /// `m*(x) = sum_k r_{(k, n-k)}(x)`, including the trivial parts.
    pub fn coproduct(&mut self, x: Irr) -> Result<TensorElement> {
        if x.0 == 0 {
            return Ok(BTreeMap::from([((UNIT, UNIT), 1)]));
        }
        if let Some(c) = self.coproducts.get(&x) {
            return Ok(c.clone());
        }
        let n = x.0;
        let mut out = TensorElement::new();
        add_into(&mut out, (UNIT, x), 1);
        add_into(&mut out, (x, UNIT), 1);
        let chi = self.fam.table(n).character(x.1);
        for k in 1..n {
            let par = self.fam.parabolic(&Composition::from_sizes(&[k, n - k], n)?)?;
            let r = par.jacquet(chi)?;
            let mults = par.levi_table.decompose(&r)?;
            let r2 = self.fam.table(n - k).len();
            for (idx, m) in mults.into_iter().enumerate() {
                add_into(&mut out, ((k, idx / r2), (n - k, idx % r2)), m);
            }
        }
        self.coproducts.insert(x, out.clone());
        Ok(out)
    }

    pub fn product_of(&mut self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        let mut out = GradedElement::new();
        for (&x, &cx) in a {
            for (&y, &cy) in b {
                for (z, cz) in self.product(x, y)? {
                    add_into(&mut out, z, cx * cy * cz);
                }
            }
        }
        Ok(out)
    }

    pub fn coproduct_of(&mut self, a: &GradedElement) -> Result<TensorElement> {
        let mut out = TensorElement::new();
        for (&x, &cx) in a {
            for (k, c) in self.coproduct(x)? {
                add_into(&mut out, k, cx * c);
            }
        }
        Ok(out)
    }

    /// Multiplication on `R (x) R`: `(a (x) b)(c (x) d) = ac (x) bd`.
    pub fn tensor_product(&mut self, s: &TensorElement, t: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::new();
        for (&(a, b), &c1) in s {
            for (&(c, d), &c2) in t {
                let left = self.product(a, c)?;
                let right = self.product(b, d)?;
                for (&l, &cl) in &left {
                    for (&r, &cr) in &right {
                        add_into(&mut out, (l, r), c1 * c2 * cl * cr);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    /// Failing instances, as readable strings with exact integers.
    pub witnesses: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> CheckResult {
        CheckResult { name: name.to_string(), passed: true, checked: 0, witnesses: Vec::new() }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.witnesses.push(witness());
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Constituent {
    pub index: usize,
    pub degree: u64,
    pub multiplicity: i64,
}

/// Decomposition of `rho * rho` for a degree-one cuspidal `rho`; the two
/// constituents are listed by ascending degree, without naming either one.
#[derive(Clone, Debug, Serialize)]
pub struct SquareSplit {
    pub rho: usize,
    pub constituents: Vec<Constituent>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PshReport {
    pub q: u64,
    pub m: u32,
    pub max_degree: usize,
    pub checks: Vec<CheckResult>,
    pub squares: Vec<SquareSplit>,
    pub passed: bool,
}

fn fmt_elem(e: &GradedElement) -> String {
    let parts: Vec<String> = e.iter().map(|((n, i), c)| format!("{c}[{n},{i}]")).collect();
    parts.join(" + ")
}

/// Checks positivity, adjointness, the bialgebra identity and the splitting
/// of `rho^2` through total degree `max_degree`.
pub fn psh_verify(fam: &GlFamily, max_degree: usize) -> Result<PshReport> {
    let max_degree = max_degree.min(fam.max_degree());
    let mut ring = GradedRing::new(fam);
    let irr = |n: usize| (0..fam.table(n).len()).map(move |i| (n, i));

    let mut positivity = CheckResult::new("positivity");
    for n1 in 1..=max_degree {
        for n2 in 1..=max_degree - n1 {
            for a in irr(n1) {
                for b in irr(n2) {
                    let p = ring.product(a, b)?;
                    positivity.record(p.values().all(|&c| c >= 0), || format!("{a:?}*{b:?} = {}", fmt_elem(&p)));
                }
            }
        }
        for x in irr(n1) {
            let c = ring.coproduct(x)?;
            positivity.record(c.values().all(|&v| v >= 0), || format!("m*{x:?} has a negative coefficient"));
        }
    }

    let mut adjoint = CheckResult::new("adjointness");
    for n in 2..=max_degree {
        for comp in Composition::all(n).into_iter().filter(|c| c.len() > 1) {
            let par = fam.parabolic(&comp)?;
            let table = fam.table(n);
            let ind: Vec<Vec<i64>> = par
                .levi_table
                .characters()
                .iter()
                .map(|s| table.decompose(&par.induce(s)?))
                .collect::<Result<_>>()?;
            for (ci, chi) in table.characters().iter().enumerate() {
                let res = par.levi_table.decompose(&par.jacquet(chi)?)?;
                for (si, row) in ind.iter().enumerate() {
                    adjoint.record(row[ci] == res[si], || {
                        format!("{comp}: <i(sigma_{si}), chi_{ci}> = {} but <sigma_{si}, r(chi_{ci})> = {}", row[ci], res[si])
                    });
                }
            }
        }
    }

    let mut primitive = CheckResult::new("degree_one_primitive");
    for x in irr(1) {
        let c = ring.coproduct(x)?;
        let expect = TensorElement::from([((UNIT, x), 1), ((x, UNIT), 1)]);
        primitive.record(c == expect, || format!("m*{x:?} is not x(x)1 + 1(x)x"));
    }

    let mut bialgebra = CheckResult::new("bialgebra");
    for n1 in 1..=max_degree {
        for n2 in 1..=max_degree - n1 {
            for a in irr(n1) {
                for b in irr(n2) {
                    let ab = ring.product(a, b)?;
                    let lhs = ring.coproduct_of(&ab)?;
                    let ca = ring.coproduct(a)?;
                    let cb = ring.coproduct(b)?;
                    let rhs = ring.tensor_product(&ca, &cb)?;
                    bialgebra.record(lhs == rhs, || format!("m*({a:?}*{b:?}) != m*{a:?} m*{b:?}"));
                }
            }
        }
    }

    let mut split = CheckResult::new("rho_squared_two_constituents");
    let mut squares = Vec::new();
    if max_degree >= 2 {
        for r in 0..fam.table(1).len() {
            let sq = ring.product((1, r), (1, r))?;
            let mut constituents: Vec<Constituent> = sq
                .iter()
                .map(|(&(_, i), &m)| Constituent { index: i, degree: fam.table(2).degrees()[i], multiplicity: m })
                .collect();
            constituents.sort_by_key(|c| (c.degree, c.index));
            let ok = constituents.len() == 2 && constituents.iter().all(|c| c.multiplicity == 1);
            split.record(ok, || format!("rho_{r}^2 = {}", fmt_elem(&sq)));
            squares.push(SquareSplit { rho: r, constituents });
        }
    }

    let checks = vec![positivity, adjoint, primitive, bialgebra, split];
    let passed = checks.iter().all(|c| c.passed);
    let spec = fam.spec(1);
    Ok(PshReport { q: spec.q, m: spec.m, max_degree, checks, squares, passed })
}
