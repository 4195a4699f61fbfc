//! Maximal tori of `GL_n` up to rational conjugacy and characters of their
//! rational points.
//!
//! A torus is indexed by a partition `lambda` of `n` and has rational points
//! `prod_i F_{q^{lambda_i}}^*`. A character is one exponent per part, taken
//! against a generator of each cyclic factor: `t -> zeta^{e log t}`. Over a
//! level `N` divisible by every part the torus splits, and a character
//! becomes `n` exponents modulo `q^N - 1`; all comparisons happen there, in
//! exact integer arithmetic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// `q^e`, kept below `2^64` so that products of residues fit in `u128`.
fn power(q: u64, e: u32) -> Result<u128> {
    q.checked_pow(e).map(u128::from).ok_or_else(|| Error::BoundExceeded {
        what: format!("exponent of {q}"),
        needed: u64::from(e),
        bound: u64::from(u64::BITS),
    })
}

fn group_order(q: u64, k: u32) -> Result<u128> {
    Ok(power(q, k)? - 1)
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    (a % m) * (b % m) % m
}

/// A maximal torus of `GL_n(F_q)` up to rational conjugacy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusDatum {
    /// Non-increasing parts.
    pub partition: Vec<u32>,
    pub q: u64,
}

impl TorusDatum {
    pub fn new(partition: Vec<u32>, q: u64) -> Result<TorusDatum> {
        if partition.is_empty() || partition.contains(&0) || partition.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("{partition:?} is not a partition")));
        }
        Ok(TorusDatum { partition, q })
    }

    pub fn n(&self) -> u32 {
        self.partition.iter().sum()
    }

    /// `q^{lambda_i} - 1` per part.
    pub fn factor_orders(&self) -> Result<Vec<u128>> {
        self.partition.iter().map(|&l| group_order(self.q, l)).collect()
    }

    pub fn point_count(&self) -> Result<u128> {
        Ok(self.factor_orders()?.iter().product())
    }

    pub fn is_anisotropic(&self) -> bool {
        self.partition.len() == 1
    }

    /// All characters, in lexicographic order of exponents.
    pub fn characters(&self) -> Result<Vec<TorusCharacter>> {
        let orders = self.factor_orders()?;
        let mut out = vec![Vec::new()];
        for &o in &orders {
            out = out.into_iter().flat_map(|pre: Vec<u128>| (0..o).map(move |e| [pre.clone(), vec![e]].concat())).collect();
        }
        Ok(out.into_iter().map(|exponents| TorusCharacter { exponents }).collect())
    }

    /// Smallest level at which the torus splits.
    pub fn split_level(&self) -> u32 {
        self.partition.iter().fold(1, |acc, &l| acc.lcm(&l))
    }

    fn check(&self, theta: &TorusCharacter) -> Result<()> {
        let orders = self.factor_orders()?;
        if theta.exponents.len() != orders.len() || theta.exponents.iter().zip(&orders).any(|(e, o)| e >= o) {
            return Err(Error::InvalidArgument(format!("{theta:?} is not a reduced character of {self:?}")));
        }
        Ok(())
    }
}

/// Partitions of `n` in reverse lexicographic order, one torus each.
pub fn list_tori(n: u32, q: u64) -> Vec<TorusDatum> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    rec(n, n, &mut Vec::new(), &mut parts);
    parts.into_iter().map(|partition| TorusDatum { partition, q }).collect()
}

/// One exponent per part, reduced modulo that part's group order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusCharacter {
    pub exponents: Vec<u128>,
}

impl TorusCharacter {
    pub fn new(exponents: Vec<u128>) -> TorusCharacter {
        TorusCharacter { exponents }
    }

    pub fn trivial(t: &TorusDatum) -> TorusCharacter {
        TorusCharacter { exponents: vec![0; t.partition.len()] }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

/// `theta o Norm` on the torus over `F_{q^N}` whose parts are
/// `F_{q^{N lambda_i}}^*`: exponent `e_i` becomes
/// `e_i (q^{N lambda_i} - 1) / (q^{lambda_i} - 1)`.
pub fn norm_pullback(t: &TorusDatum, theta: &TorusCharacter, level: u32) -> Result<(TorusDatum, TorusCharacter)> {
    t.check(theta)?;
    if level == 0 {
        return Err(Error::InvalidArgument("extension degree must be positive".into()));
    }
    let mut exps = Vec::with_capacity(theta.exponents.len());
    for (&l, &e) in t.partition.iter().zip(&theta.exponents) {
        let big = group_order(t.q, l * level)?;
        let small = group_order(t.q, l)?;
        exps.push(mul_mod(e, big / small, big));
    }
    let up = TorusDatum { partition: t.partition.clone(), q: power(t.q, level)? as u64 };
    Ok((up, TorusCharacter { exponents: exps }))
}

/// The pullback to a split level `N` (every part divides `N`), as `n`
/// exponents modulo `q^N - 1`: part `i` contributes
/// `e_i c_i q^j` for `j < lambda_i`, `c_i = (q^N - 1)/(q^{lambda_i} - 1)`.
pub fn split_exponents(t: &TorusDatum, theta: &TorusCharacter, level: u32) -> Result<Vec<u128>> {
    t.check(theta)?;
    if t.partition.iter().any(|&l| !level.is_multiple_of(l)) {
        return Err(Error::InvalidArgument(format!("level {level} does not split {:?}", t.partition)));
    }
    let m = group_order(t.q, level)?;
    let mut out = Vec::with_capacity(t.n() as usize);
    for (&l, &e) in t.partition.iter().zip(&theta.exponents) {
        let base = mul_mod(e, m / group_order(t.q, l)?, m);
        let mut x = base;
        for _ in 0..l {
            out.push(x);
            x = mul_mod(x, t.q as u128, m);
        }
    }
    Ok(out)
}

/// Whether the pullbacks agree up to the Weyl group of the split torus
/// (coordinate permutations) at some common split level `N <= n_max`.
pub fn geometrically_conjugate(
    t: &TorusDatum,
    theta: &TorusCharacter,
    t2: &TorusDatum,
    theta2: &TorusCharacter,
    n_max: u32,
) -> Result<bool> {
    if t.n() != t2.n() || t.q != t2.q {
        return Err(Error::InvalidArgument("tori of different groups".into()));
    }
    let base = t.split_level().lcm(&t2.split_level());
    if base > n_max {
        return Err(Error::BoundExceeded { what: "split level".into(), needed: base as u64, bound: n_max as u64 });
    }
    for level in (base..=n_max).step_by(base as usize) {
        let mut a = split_exponents(t, theta, level)?;
        let mut b = split_exponents(t2, theta2, level)?;
        a.sort_unstable();
        b.sort_unstable();
        if a == b {
            return Ok(true);
        }
    }
    Ok(false)
}

/// An element of `W(T)`: `perm` permutes parts of equal size, and part `i`
/// is then twisted by `t -> t^{q^{twists[i]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub twists: Vec<u32>,
}

impl WeylElement {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.twists.iter().all(|&j| j == 0)
    }

    /// `(w theta)_i = q^{j_i} e_{perm(i)}`.
    pub fn act(&self, t: &TorusDatum, theta: &TorusCharacter) -> Result<TorusCharacter> {
        let orders = t.factor_orders()?;
        let exps = (0..orders.len())
            .map(|i| Ok(mul_mod(theta.exponents[self.perm[i]], power(t.q, self.twists[i])?, orders[i])))
            .collect::<Result<_>>()?;
        Ok(TorusCharacter { exponents: exps })
    }
}

/// All of `W(T)`: permutations among equal parts with per-part Frobenius
/// twists `0 <= j < lambda_i`.
pub fn weyl_group(t: &TorusDatum) -> Vec<WeylElement> {
    let k = t.partition.len();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; k];
    fn rec(t: &TorusDatum, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == t.partition.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..t.partition.len() {
            if !used[j] && t.partition[j] == t.partition[i] {
                used[j] = true;
                cur.push(j);
                rec(t, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(t, &mut cur, &mut used, &mut perms);
    let mut twists: Vec<Vec<u32>> = vec![Vec::new()];
    for &l in &t.partition {
        twists = twists.into_iter().flat_map(|pre| (0..l).map(move |j| [pre.clone(), vec![j]].concat())).collect();
    }
    perms
        .iter()
        .flat_map(|p| twists.iter().map(move |tw| WeylElement { perm: p.clone(), twists: tw.clone() }))
        .collect()
}

/// Whether only the identity of `W(T)` fixes `theta`.
pub fn in_general_position(t: &TorusDatum, theta: &TorusCharacter) -> Result<bool> {
    t.check(theta)?;
    for w in weyl_group(t) {
        if !w.is_identity() && w.act(t, theta)? == *theta {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `W(T)`-orbit of `theta`, sorted.
pub fn weyl_orbit(t: &TorusDatum, theta: &TorusCharacter) -> Result<Vec<TorusCharacter>> {
    let set: BTreeSet<TorusCharacter> = weyl_group(t).iter().map(|w| w.act(t, theta)).collect::<Result<_>>()?;
    Ok(set.into_iter().collect())
}

/// Number of `W`-orbits of general-position characters of `F_{q^n}^*`.
pub fn anisotropic_gp_count(n: u32, q: u64) -> Result<u64> {
    let t = TorusDatum::new(vec![n], q)?;
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for theta in t.characters()? {
        if seen.contains(&theta) || !in_general_position(&t, &theta)? {
            continue;
        }
        count += 1;
        seen.extend(weyl_orbit(&t, &theta)?);
    }
    Ok(count)
}

/// An action on split-level points `t_i -> t_{perm(i)}^{sign_i q^{frob_i}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaAction {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
    pub frob: Vec<u32>,
}

impl SigmaAction {
    pub fn identity(n: usize) -> SigmaAction {
        SigmaAction { perm: (0..n).collect(), signs: vec![1; n], frob: vec![0; n] }
    }

    pub fn inverse(n: usize) -> SigmaAction {
        SigmaAction { perm: (0..n).collect(), signs: vec![-1; n], frob: vec![0; n] }
    }

    /// Multiplier of `log t_{perm(i)}` in coordinate `i`, modulo `m`.
    fn multiplier(&self, i: usize, q: u64, m: u128) -> Result<u128> {
        let x = mul_mod(power(q, self.frob[i])?, 1, m);
        Ok(if self.signs[i] < 0 { (m - x) % m } else { x })
    }
}

/// `theta~(sigma(t)) = theta~(t)^{-1}` for all split-level points `t`, where
/// `theta~` is the pullback of `theta` to level `level`.
pub fn lusztig_condition(t: &TorusDatum, theta: &TorusCharacter, action: &SigmaAction, level: u32) -> Result<bool> {
    let a = split_exponents(t, theta, level)?;
    let n = a.len();
    let m = group_order(t.q, level)?;
    if action.perm.len() != n || action.signs.len() != n || action.frob.len() != n {
        return Err(Error::InvalidArgument(format!("action has the wrong size for n = {n}")));
    }
    if action.signs.iter().any(|&s| s != 1 && s != -1) || !is_permutation(&action.perm) {
        return Err(Error::InvalidArgument("malformed action".into()));
    }
    for i in 0..n {
        let k = action.perm[i];
        let twice = mul_mod(action.multiplier(i, t.q, m)?, action.multiplier(k, t.q, m)?, m);
        if action.perm[k] != i || twice != 1 % m {
            return Err(Error::InvalidArgument("action is not an involution".into()));
        }
    }
    // theta~(sigma t) = prod_i zeta^{a_i s_i q^{j_i} log t_{perm(i)}}
    let mut lhs = vec![0u128; n];
    for i in 0..n {
        let k = action.perm[i];
        lhs[k] = (lhs[k] + mul_mod(a[i], action.multiplier(i, t.q, m)?, m)) % m;
    }
    Ok((0..n).all(|k| (lhs[k] + a[k]) % m == 0))
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

/// One matched torus under restriction of scalars.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarsPair {
    /// Torus of `GL_n` over `F_{q^m}`.
    pub partition: Vec<u32>,
    /// Cycle type of Frobenius on the `n m` split coordinates of the
    /// matched torus of the restricted group over `F_q`.
    pub restricted_type: Vec<u32>,
    /// Cyclic factor orders of the rational points on each side.
    pub factors: Vec<u128>,
    pub restricted_factors: Vec<u128>,
    pub order: u128,
    pub restricted_order: u128,
    /// Twisted classes of Frobenius-stable `m`-tuples in this orbit.
    pub tuple_count: u64,
    pub matched: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarsReport {
    pub n: u32,
    pub q: u64,
    pub m: u32,
    pub pairs: Vec<ScalarsPair>,
    pub full_match: bool,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut v = p.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out.sort();
    out
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn invert(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Cycle lengths, non-increasing, of `(k, i) -> (k + 1 mod m, w_k(i))` on
/// `[m] x [n]`.
fn combined_cycle_type(w: &[Vec<usize>]) -> Vec<u32> {
    let m = w.len();
    let n = w[0].len();
    let mut seen = vec![vec![false; n]; m];
    let mut out = Vec::new();
    for k0 in 0..m {
        for i0 in 0..n {
            if seen[k0][i0] {
                continue;
            }
            let (mut k, mut i, mut len) = (k0, i0, 0);
            while !seen[k][i] {
                seen[k][i] = true;
                i = w[k][i];
                k = (k + 1) % m;
                len += 1;
            }
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Matches tori of `GL_n` over `F_{q^m}` with those of its restriction of
/// scalars to `F_q`.
///
/// The restricted tori are enumerated independently as classes of
/// `m`-tuples `(w_0, ..., w_{m-1})` of permutations under the twisted
/// conjugation `w_k -> x_{k+1} w_k x_k^{-1}`; each class carries the cycle
/// type of Frobenius on its `n m` split coordinates, whose cycles give its
/// rational points.
pub fn scalars_bijection(n: u32, q: u64, m: u32) -> Result<ScalarsReport> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("n and m must be positive".into()));
    }
    let (nu, mu) = (n as usize, m as usize);
    let perms = permutations(nu);
    let index: BTreeMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let np = perms.len();
    let encode = |w: &[usize]| w.iter().fold(0usize, |acc, &i| acc * np + i);
    let decode = |mut c: usize| {
        let mut w = vec![0usize; mu];
        for k in (0..mu).rev() {
            w[k] = c % np;
            c /= np;
        }
        w
    };
    let total = np.pow(m);
    let mut class = vec![usize::MAX; total];
    let mut classes: Vec<(Vec<u32>, bool)> = Vec::new();
    for start in 0..total {
        if class[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class[start] = id;
        let ty = combined_cycle_type(&decode(start).iter().map(|&i| perms[i].clone()).collect::<Vec<_>>());
        let mut uniform = true;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let w: Vec<Vec<usize>> = decode(c).iter().map(|&i| perms[i].clone()).collect();
            uniform &= combined_cycle_type(&w) == ty;
            // twisted conjugation by a single x at slot k generates the action
            for k in 0..mu {
                for x in &perms {
                    let mut v = w.clone();
                    let prev = (k + mu - 1) % mu;
                    v[k] = compose(&w[k], &invert(x));
                    v[prev] = compose(x, &w[prev]);
                    let code = encode(&v.iter().map(|p| index[p]).collect::<Vec<_>>());
                    if class[code] == usize::MAX {
                        class[code] = id;
                        queue.push_back(code);
                    }
                }
            }
        }
        classes.push((ty, uniform));
    }

    let mut pairs = Vec::new();
    let mut used = vec![false; classes.len()];
    let big_q = power(q, m)? as u64;
    for t in list_tori(n, big_q) {
        let want: Vec<u32> = t.partition.iter().map(|&l| l * m).collect();
        let hits: Vec<usize> = (0..classes.len()).filter(|&c| classes[c].0 == want).collect();
        let factors = t.factor_orders()?;
        let restricted_factors = want.iter().map(|&l| group_order(q, l)).collect::<Result<Vec<_>>>()?;
        let order: u128 = factors.iter().product();
        let restricted_order: u128 = restricted_factors.iter().product();
        for &h in &hits {
            used[h] = true;
        }
        pairs.push(ScalarsPair {
            partition: t.partition.clone(),
            restricted_type: want,
            matched: hits.len() == 1 && classes[hits[0]].1 && factors == restricted_factors,
            tuple_count: hits.len() as u64,
            factors,
            restricted_factors,
            order,
            restricted_order,
        });
    }
    let full_match = pairs.iter().all(|p| p.matched) && used.iter().all(|&u| u);
    Ok(ScalarsReport { n, q, m, pairs, full_match })
}
