use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::Rational64;

use crate::chartab::{character_table, CharacterTable, ClassFunction, ClassInfo, Cyclotomic};
use crate::error::{Error, Result};
use crate::ff::Field;
use crate::mat::subgroup::left_coset_reps;
use crate::mat::{standard_subgroups, Composition, GroupSpec, Matrix, MatrixGroup, StandardSubgroups};

/// The groups `GL_k(F_Q)` for `k = 1..=max_degree` with their character
/// tables, plus cached parabolic data.
pub struct GlFamily {
    base: GroupSpec,
    field: Arc<Field>,
    groups: Vec<MatrixGroup>,
    tables: Vec<CharacterTable>,
    parabolics: Mutex<HashMap<Composition, Arc<Parabolic>>>,
}

impl std::fmt::Debug for GlFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GlFamily(Q = {}, max degree {})", self.field.order(), self.max_degree())
    }
}

impl GlFamily {
    /// `base.n` is ignored; every `GL_k` with `k <= max_degree` is built.
    pub fn new(base: GroupSpec, max_degree: usize, bound: u64) -> Result<GlFamily> {
        let field = Arc::new(base.build_field()?);
        let mut groups = Vec::new();
        let mut tables = Vec::new();
        for k in 1..=max_degree {
            let g = MatrixGroup::general_linear_over(base.with_dim(k), field.clone(), bound)?;
            tables.push(character_table(&g)?);
            groups.push(g);
        }
        Ok(GlFamily { base: base.with_dim(max_degree), field, groups, tables, parabolics: Mutex::new(HashMap::new()) })
    }

    pub fn max_degree(&self) -> usize {
        self.groups.len()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn spec(&self, n: usize) -> GroupSpec {
        self.base.with_dim(n)
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_degree() {
            return Err(Error::InvalidArgument(format!("degree {n} outside 1..={}", self.max_degree())));
        }
        Ok(())
    }

    pub fn group(&self, n: usize) -> &MatrixGroup {
        &self.groups[n - 1]
    }

    pub fn table(&self, n: usize) -> &CharacterTable {
        &self.tables[n - 1]
    }

    /// Parabolic data for a composition of some `n <= max_degree`.
    pub fn parabolic(&self, comp: &Composition) -> Result<Arc<Parabolic>> {
        self.check_degree(comp.n())?;
        if let Some(p) = self.parabolics.lock().expect("lock").get(comp) {
            return Ok(p.clone());
        }
        let p = Arc::new(Parabolic::new(self, comp)?);
        self.parabolics.lock().expect("lock").insert(comp.clone(), p.clone());
        Ok(p)
    }

    /// Irreducible of `L` given one irreducible index per block.
    pub fn levi_character(&self, comp: &Composition, parts: &[usize]) -> Result<ClassFunction> {
        let p = self.parabolic(comp)?;
        Ok(p.levi_table.character(p.levi_index(parts)).clone())
    }
}

/// Standard parabolic `P = L U` of `GL_n` together with the integer
/// matrices realizing induction from and restriction to `L`.
pub struct Parabolic {
    pub composition: Composition,
    pub subgroups: StandardSubgroups,
    /// Class counts of each block group, for mixed-radix indexing.
    radix: Vec<usize>,
    block_groups: Vec<usize>,
    pub levi_info: Arc<ClassInfo>,
    /// Irreducibles of `L` as external tensors, mixed radix over the block
    /// tables.
    pub levi_table: CharacterTable,
    g_info: Arc<ClassInfo>,
    /// `ind[c][l]`: number of left cosets `tP` with `t^{-1} g_c t` in `P`
    /// projecting to Levi class `l`.
    ind: Vec<Vec<u32>>,
    /// `jac[l][c]`: number of `u` in `U` with `l_rep u` in class `c`.
    jac: Vec<Vec<u32>>,
    u_order: u64,
}

impl Parabolic {
    fn new(fam: &GlFamily, comp: &Composition) -> Result<Parabolic> {
        let n = comp.n();
        let g = fam.group(n);
        let subgroups = standard_subgroups(g, comp)?;
        let block_groups = comp.sizes().to_vec();
        let radix: Vec<usize> = block_groups.iter().map(|&k| fam.group(k).num_classes()).collect();
        let factor_tables: Vec<&CharacterTable> = block_groups.iter().map(|&k| fam.table(k)).collect();
        let levi_table = CharacterTable::product(&factor_tables);
        let levi_info = levi_table.info().clone();
        let g_info = fam.table(n).info().clone();

        let mut this = Parabolic {
            composition: comp.clone(),
            subgroups,
            radix,
            block_groups,
            levi_info,
            levi_table,
            g_info,
            ind: Vec::new(),
            jac: Vec::new(),
            u_order: 0,
        };
        let f = g.field();
        let lk = this.levi_info.num_classes();
        let reps = left_coset_reps(g, &this.subgroups.p);
        let mut ind = vec![vec![0u32; lk]; g.num_classes()];
        for (c, row) in ind.iter_mut().enumerate() {
            let x = g.class_rep(c);
            for &t in &reps {
                let t = g.element(t);
                let y = g.inv(t).mul(x, f).mul(t, f);
                if this.subgroups.p.contains(&y) {
                    row[this.levi_class_of(fam, &y)] += 1;
                }
            }
        }
        let mut jac = vec![vec![0u32; g.num_classes()]; lk];
        for (l, row) in jac.iter_mut().enumerate() {
            let lrep = this.levi_rep(fam, l);
            for u in this.subgroups.u.elements() {
                row[g.class_of_member(&lrep.mul(u, f))] += 1;
            }
        }
        this.u_order = this.subgroups.u.order();
        this.ind = ind;
        this.jac = jac;
        Ok(this)
    }

    /// Mixed-radix index from per-block indices.
    pub fn levi_index(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.radix).fold(0, |acc, (&p, &r)| acc * r + p)
    }

    /// Levi class of an element of `P` (through the block-diagonal projection).
    pub fn levi_class_of(&self, fam: &GlFamily, y: &Matrix) -> usize {
        let blocks = self.composition.blocks(y);
        let parts: Vec<usize> =
            blocks.iter().zip(&self.block_groups).map(|(b, &k)| fam.group(k).class_of_member(b)).collect();
        parts.iter().zip(&self.radix).fold(0, |acc, (&p, &r)| acc * r + p)
    }

    /// Block-diagonal representative of a Levi class.
    pub fn levi_rep(&self, fam: &GlFamily, l: usize) -> Matrix {
        let mut rest = l;
        let mut parts = vec![0usize; self.radix.len()];
        for i in (0..self.radix.len()).rev() {
            parts[i] = rest % self.radix[i];
            rest /= self.radix[i];
        }
        let blocks: Vec<Matrix> =
            parts.iter().zip(&self.block_groups).map(|(&c, &k)| *fam.group(k).class_rep(c)).collect();
        Matrix::block_diagonal(&blocks)
    }

    pub fn g_info(&self) -> &Arc<ClassInfo> {
        &self.g_info
    }

    /// Parabolic induction of a class function on `L`.
    pub fn induce(&self, chi: &ClassFunction) -> Result<ClassFunction> {
        if **chi.info() != *self.levi_info {
            return Err(Error::GroupMismatch(chi.info().name.clone(), self.levi_info.name.clone()));
        }
        let values = self
            .ind
            .iter()
            .map(|row| {
                Cyclotomic::linear_combination(
                    row.iter()
                        .zip(chi.values())
                        .filter(|(&k, _)| k > 0)
                        .map(|(&k, v)| (Rational64::from_integer(k as i64), v)),
                )
            })
            .collect();
        ClassFunction::new(self.g_info.clone(), values)
    }

    /// Jacquet restriction `r(chi)(l) = |U|^{-1} sum_u chi(l u)`.
    pub fn jacquet(&self, chi: &ClassFunction) -> Result<ClassFunction> {
        if **chi.info() != *self.g_info {
            return Err(Error::GroupMismatch(chi.info().name.clone(), self.g_info.name.clone()));
        }
        let uo = self.u_order as i64;
        let values = self
            .jac
            .iter()
            .map(|row| {
                Cyclotomic::linear_combination(
                    row.iter()
                        .zip(chi.values())
                        .filter(|(&k, _)| k > 0)
                        .map(|(&k, v)| (Rational64::new(k as i64, uo), v)),
                )
            })
            .collect();
        ClassFunction::new(self.levi_info.clone(), values)
    }

    /// Counts of Levi classes among the projections of `elements` (all in `P`).
    pub fn levi_class_counts<'a>(&self, fam: &GlFamily, elements: impl IntoIterator<Item = &'a Matrix>) -> Vec<u64> {
        let mut counts = vec![0u64; self.levi_info.num_classes()];
        for y in elements {
            counts[self.levi_class_of(fam, y)] += 1;
        }
        counts
    }
}

/// Parabolic induction from the Levi of `comp` to `GL_n`.
pub fn parabolic_induce(fam: &GlFamily, chi: &ClassFunction, comp: &Composition) -> Result<ClassFunction> {
    fam.parabolic(comp)?.induce(chi)
}

/// Jacquet restriction from `GL_n` to the Levi of `comp`.
pub fn jacquet_restrict(fam: &GlFamily, chi: &ClassFunction, comp: &Composition) -> Result<ClassFunction> {
    fam.parabolic(comp)?.jacquet(chi)
}
