use num_rational::Rational64;

use crate::chartab::{ClassFunction, Cyclotomic};
use crate::error::{Error, Result};
use crate::ff::Fe;
use crate::mat::Composition;

use super::family::GlFamily;

/// The generic character `phi(u) = psi(sum_i u_{i,i+1})` of the upper
/// unitriangular group, with `psi(x) = E(p, Tr(a x))`, tabulated as counts
/// of `u` by conjugacy class and character exponent.
#[derive(Clone, Debug)]
pub struct WhittakerModel {
    p: u32,
    u_order: u64,
    /// `counts[c][t]`: number of `u` in class `c` with `phi(u) = E(p, t)`.
    counts: Vec<Vec<u64>>,
}

impl WhittakerModel {
    pub fn new(fam: &GlFamily, n: usize, multiplier: Fe) -> Result<WhittakerModel> {
        if multiplier.is_zero() {
            return Err(Error::InvalidArgument("additive character multiplier must be nonzero".into()));
        }
        let f = fam.field();
        let p = f.characteristic();
        let g = fam.group(n);
        let borel = fam.parabolic(&Composition::from_sizes(&vec![1; n], n)?)?;
        let mut counts = vec![vec![0u64; p as usize]; g.num_classes()];
        for u in borel.subgroups.u.elements() {
            let s = (0..n - 1).fold(Fe::ZERO, |acc, i| f.add(acc, u.get(i, i + 1)));
            let t = f.additive_character_exponent(multiplier, s);
            counts[g.class_of_member(u)][t as usize] += 1;
        }
        Ok(WhittakerModel { p, u_order: borel.subgroups.u.order(), counts })
    }

    /// `<chi|_U, phi>_U`; an integer for virtual characters.
    pub fn dim(&self, chi: &ClassFunction) -> Result<i64> {
        if chi.values().len() != self.counts.len() {
            return Err(Error::InvalidArgument("character is on a different group".into()));
        }
        let roots: Vec<Cyclotomic> = (0..self.p as i64).map(|t| Cyclotomic::root(self.p, -t)).collect();
        let mut products = Vec::new();
        for (c, row) in self.counts.iter().enumerate() {
            for (t, &k) in row.iter().enumerate() {
                if k > 0 {
                    products.push((k, chi.value(c).mul_ref(&roots[t])));
                }
            }
        }
        let total = Cyclotomic::linear_combination(
            products.iter().map(|(k, v)| (Rational64::new(*k as i64, self.u_order as i64), v)),
        );
        total.to_integer().ok_or_else(|| Error::Defect(format!("Whittaker pairing {total} is not an integer")))
    }
}

/// Dimension of `phi`-equivariant vectors for the character `chi` of `GL_n`.
pub fn whittaker_dim(fam: &GlFamily, n: usize, chi: &ClassFunction, multiplier: Fe) -> Result<i64> {
    WhittakerModel::new(fam, n, multiplier)?.dim(chi)
}

/// Whittaker dimension of `i(rho x ... x rho)` (`k` copies) for the
/// irreducible `rho_index` of `GL_d`.
pub fn induced_power_whittaker(fam: &GlFamily, d: usize, rho_index: usize, k: usize, multiplier: Fe) -> Result<i64> {
    let n = d * k;
    let comp = Composition::from_sizes(&vec![d; k], n)?;
    let par = fam.parabolic(&comp)?;
    let chi = par.induce(par.levi_table.character(par.levi_index(&vec![rho_index; k])))?;
    whittaker_dim(fam, n, &chi, multiplier)
}
