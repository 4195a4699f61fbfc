use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::Composition;

use super::family::GlFamily;

/// `D_n(q) = (1/n) sum_{d | n} mu(n/d) (q^d - 1)`, the number of Frobenius
/// orbits of size exactly `n` on the multiplicative group of the algebraic
/// closure of `F_q`.
pub fn d_count(n: u32, q: u64) -> u64 {
    let mut total: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += mobius(n / d) as i128 * (q.pow(d) as i128 - 1);
        }
    }
    debug_assert!(total >= 0 && total % n as i128 == 0);
    (total / n as i128) as u64
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Whether the irreducible `chi` of `GL_n` has every proper Jacquet
/// restriction equal to zero.
pub fn is_cuspidal(fam: &GlFamily, n: usize, index: usize) -> Result<bool> {
    let chi = fam.table(n).character(index);
    for comp in Composition::all(n) {
        if comp.len() == 1 {
            continue;
        }
        if !fam.parabolic(&comp)?.jacquet(chi)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of the cuspidal irreducibles of `GL_n`.
pub fn cuspidal_indices(fam: &GlFamily, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..fam.table(n).len() {
        if is_cuspidal(fam, n, i)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// A multiset of cuspidals `(degree, index in the GL_degree table)`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CuspidalSupport(pub Vec<(usize, usize)>);

impl fmt::Display for CuspidalSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|(d, i)| format!("({d},{i})")).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

impl CuspidalSupport {
    pub fn composition(&self) -> Composition {
        let sizes: Vec<usize> = self.0.iter().map(|p| p.0).collect();
        let n = sizes.iter().sum();
        Composition::from_sizes(&sizes, n).expect("nonempty support")
    }
}

/// Multiplicity of every irreducible of `GL_n` in the induction of every
/// cuspidal multiset of total degree `n`.
#[derive(Clone, Debug, Serialize)]
pub struct SupportScan {
    pub n: usize,
    pub supports: Vec<CuspidalSupport>,
    /// `multiplicities[s][chi]`.
    pub multiplicities: Vec<Vec<i64>>,
}

impl SupportScan {
    pub fn new(fam: &GlFamily, n: usize) -> Result<SupportScan> {
        let mut pairs = Vec::new();
        for d in 1..=n {
            for i in cuspidal_indices(fam, d)? {
                pairs.push((d, i));
            }
        }
        let mut supports = Vec::new();
        fn rec(pairs: &[(usize, usize)], start: usize, rem: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<CuspidalSupport>) {
            if rem == 0 {
                out.push(CuspidalSupport(cur.clone()));
                return;
            }
            for k in start..pairs.len() {
                if pairs[k].0 <= rem {
                    cur.push(pairs[k]);
                    rec(pairs, k, rem - pairs[k].0, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&pairs, 0, n, &mut Vec::new(), &mut supports);
        let mut multiplicities = Vec::with_capacity(supports.len());
        for s in &supports {
            let comp = s.composition();
            let parts: Vec<usize> = s.0.iter().map(|p| p.1).collect();
            let par = fam.parabolic(&comp)?;
            let levi = par.levi_table.character(par.levi_index(&parts));
            let induced = par.induce(levi)?;
            multiplicities.push(fam.table(n).decompose(&induced)?);
        }
        Ok(SupportScan { n, supports, multiplicities })
    }

    /// Supports whose induction contains irreducible `chi`.
    pub fn supports_of(&self, chi: usize) -> Vec<&CuspidalSupport> {
        self.supports.iter().zip(&self.multiplicities).filter(|(_, m)| m[chi] > 0).map(|(s, _)| s).collect()
    }
}

/// The unique cuspidal multiset whose induction contains `chi`.
pub fn cuspidal_support(fam: &GlFamily, n: usize, chi: usize) -> Result<CuspidalSupport> {
    let scan = SupportScan::new(fam, n)?;
    let found = scan.supports_of(chi);
    match found.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(Error::Defect(format!("irreducible {chi} of degree {n} has no cuspidal support"))),
        many => Err(Error::Defect(format!("irreducible {chi} of degree {n} has {} cuspidal supports", many.len()))),
    }
}
