use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::mat::MatrixGroup;

use super::cyclotomic::Cyclotomic;

/// Class data a class function needs: sizes, inverse classes and the
/// identity class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub name: String,
    pub order: u64,
    pub sizes: Vec<u64>,
    /// Class of `g^{-1}` for `g` in each class.
    pub inverse: Vec<usize>,
    pub identity: usize,
}

impl ClassInfo {
    pub fn of_group(g: &MatrixGroup) -> Arc<ClassInfo> {
        let t = g.classes();
        let inverse = (0..t.len()).map(|c| g.class_of_member(&g.inv(g.class_rep(c)))).collect();
        let identity = g.class_of_member(&crate::mat::Matrix::identity(g.n()));
        Arc::new(ClassInfo { name: g.name().to_string(), order: g.order(), sizes: t.sizes(), inverse, identity })
    }

    /// Direct product; class index is mixed radix with the first factor most
    /// significant.
    pub fn product(factors: &[Arc<ClassInfo>]) -> Arc<ClassInfo> {
        let mut out = ClassInfo { name: String::new(), order: 1, sizes: vec![1], inverse: vec![0], identity: 0 };
        let mut names = Vec::new();
        for f in factors {
            let k = f.sizes.len();
            let mut sizes = Vec::with_capacity(out.sizes.len() * k);
            let mut inverse = Vec::with_capacity(out.sizes.len() * k);
            for (a, &sa) in out.sizes.iter().enumerate() {
                for (b, &sb) in f.sizes.iter().enumerate() {
                    sizes.push(sa * sb);
                    inverse.push(out.inverse[a] * k + f.inverse[b]);
                }
            }
            out.identity = out.identity * k + f.identity;
            out.sizes = sizes;
            out.inverse = inverse;
            out.order *= f.order;
            names.push(f.name.clone());
        }
        out.name = names.join(" x ");
        Arc::new(out)
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }
}

/// A function constant on conjugacy classes, with exact values.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassFunction {
    info: Arc<ClassInfo>,
    values: Vec<Cyclotomic>,
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassFunction[{}]{:?}", self.info.name, self.values)
    }
}

impl ClassFunction {
    pub fn new(info: Arc<ClassInfo>, values: Vec<Cyclotomic>) -> Result<ClassFunction> {
        if values.len() != info.num_classes() {
            return Err(Error::InvalidArgument(format!(
                "{} values for {} classes of {}",
                values.len(),
                info.num_classes(),
                info.name
            )));
        }
        Ok(ClassFunction { info, values })
    }

    pub fn trivial(info: Arc<ClassInfo>) -> ClassFunction {
        let values = vec![Cyclotomic::one(); info.num_classes()];
        ClassFunction { info, values }
    }

    pub fn zero(info: Arc<ClassInfo>) -> ClassFunction {
        let values = vec![Cyclotomic::zero(); info.num_classes()];
        ClassFunction { info, values }
    }

    /// Values given by integer counts, e.g. permutation characters.
    pub fn from_integers(info: Arc<ClassInfo>, values: &[i64]) -> Result<ClassFunction> {
        Self::new(info, values.iter().map(|&v| Cyclotomic::from_int(v)).collect())
    }

    pub fn info(&self) -> &Arc<ClassInfo> {
        &self.info
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, c: usize) -> &Cyclotomic {
        &self.values[c]
    }

    /// Value at the identity.
    pub fn degree(&self) -> &Cyclotomic {
        &self.values[self.info.identity]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    fn check_same(&self, other: &ClassFunction) -> Result<()> {
        if Arc::ptr_eq(&self.info, &other.info) || self.info == other.info {
            Ok(())
        } else {
            Err(Error::GroupMismatch(self.info.name.clone(), other.info.name.clone()))
        }
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add_ref(b)).collect();
        Ok(ClassFunction { info: self.info.clone(), values })
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.sub_ref(b)).collect();
        Ok(ClassFunction { info: self.info.clone(), values })
    }

    /// Pointwise product (tensor product of representations).
    pub fn pointwise_mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul_ref(b)).collect();
        Ok(ClassFunction { info: self.info.clone(), values })
    }

    pub fn scale(&self, c: Rational64) -> ClassFunction {
        ClassFunction { info: self.info.clone(), values: self.values.iter().map(|v| v.scale(c)).collect() }
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction { info: self.info.clone(), values: self.values.iter().map(|v| v.conj()).collect() }
    }

    /// `g -> chi(g^{-1})`.
    pub fn contragredient(&self) -> ClassFunction {
        let values = self.info.inverse.iter().map(|&c| self.values[c].clone()).collect();
        ClassFunction { info: self.info.clone(), values }
    }

    /// Values permuted by a class map: `result[c] = self[map[c]]`.
    pub fn pull_back(&self, map: &[usize]) -> ClassFunction {
        ClassFunction { info: self.info.clone(), values: map.iter().map(|&c| self.values[c].clone()).collect() }
    }

    /// `(1/|G|) sum_g a(g) conj(b(g))`.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<Cyclotomic> {
        self.check_same(other)?;
        let products: Vec<Cyclotomic> = self.values.iter().zip(&other.values).map(|(a, b)| a.mul_ref(&b.conj())).collect();
        let order = self.info.order as i64;
        Ok(Cyclotomic::linear_combination(
            self.info.sizes.iter().zip(&products).map(|(&s, p)| (Rational64::new(s as i64, order), p)),
        ))
    }

    /// Inner product that must be an integer, as for virtual characters.
    pub fn integer_inner_product(&self, other: &ClassFunction) -> Result<i64> {
        let ip = self.inner_product(other)?;
        ip.to_integer().ok_or_else(|| Error::Defect(format!("inner product {ip} is not an integer")))
    }

    /// `(1/N) sum_c counts[c] chi(c)` for a multiset of `N` elements
    /// distributed over classes.
    pub fn average_over_counts(&self, counts: &[u64]) -> Cyclotomic {
        let total: u64 = counts.iter().sum();
        Cyclotomic::linear_combination(
            counts
                .iter()
                .zip(&self.values)
                .filter(|(&n, _)| n > 0)
                .map(|(&n, v)| (Rational64::new(n as i64, total as i64), v)),
        )
    }
}

/// Restriction to a subgroup `h` of `g`: the value at an `h`-class is the
/// value at the `g`-class of its representative.
pub fn restrict(chi: &ClassFunction, g: &MatrixGroup, h: &MatrixGroup, h_info: Arc<ClassInfo>) -> Result<ClassFunction> {
    if chi.info.num_classes() != g.num_classes() || chi.info.order != g.order() {
        return Err(Error::GroupMismatch(chi.info.name.clone(), g.name().to_string()));
    }
    let map: Result<Vec<usize>> = (0..h.num_classes())
        .map(|c| g.class_of(h.class_rep(c)).map_err(|e| Error::Defect(format!("subgroup element outside parent: {e}"))))
        .collect();
    let values = map?.into_iter().map(|c| chi.values[c].clone()).collect();
    ClassFunction::new(h_info, values)
}

/// External tensor product on the direct product, classes in mixed radix.
pub fn external_tensor(factors: &[&ClassFunction]) -> ClassFunction {
    let info = ClassInfo::product(&factors.iter().map(|f| f.info.clone()).collect::<Vec<_>>());
    let mut values = vec![Cyclotomic::one()];
    for f in factors {
        let mut next = Vec::with_capacity(values.len() * f.values.len());
        for a in &values {
            for b in &f.values {
                next.push(a.mul_ref(b));
            }
        }
        values = next;
    }
    ClassFunction { info, values }
}

/// `sum_i c_i f_i` for class functions on one group.
pub fn combine(info: &Arc<ClassInfo>, terms: &[(i64, &ClassFunction)]) -> Result<ClassFunction> {
    let mut values = Vec::with_capacity(info.num_classes());
    for t in terms {
        if *t.1.info != **info {
            return Err(Error::GroupMismatch(info.name.clone(), t.1.info.name.clone()));
        }
    }
    for c in 0..info.num_classes() {
        values.push(Cyclotomic::linear_combination(
            terms.iter().map(|(k, f)| (Rational64::from_integer(*k), &f.values[c])),
        ));
    }
    Ok(ClassFunction { info: info.clone(), values })
}
