//! Character tables by simultaneous diagonalization of the class
//! multiplication matrices modulo a prime, then lifting to exact values.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ff::{is_prime, prime_factors};
use crate::mat::{Matrix, MatrixGroup};

use super::classfn::{ClassFunction, ClassInfo};
use super::cyclotomic::Cyclotomic;
use super::table::CharacterTable;

#[derive(Clone, Copy)]
struct Zl(u64);

impl Zl {
    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }
    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.0));
        self.pow(a, self.0 - 2)
    }
    fn primitive_root(self) -> u64 {
        let fs = prime_factors(self.0 - 1);
        (2..self.0).find(|&g| fs.iter().all(|&f| self.pow(g, (self.0 - 1) / f) != 1)).expect("prime modulus")
    }
}

/// Smallest prime `l = 1 mod exponent` with `l > 2 sqrt(order)`.
pub fn dixon_prime(exponent: u64, order: u64) -> u64 {
    let mut l = exponent + 1;
    while !(l * l > 4 * order && is_prime(l)) {
        l += exponent;
    }
    l
}

/// Row-reduces in place; returns pivot columns. Rows that vanish are dropped.
fn rref(rows: &mut Vec<Vec<u64>>, z: Zl) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = z.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = z.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = z.sub(*x, z.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of the kernel of a square matrix.
fn kernel(m: &[Vec<u64>], z: Zl) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut rows = m.to_vec();
    let pivots = rref(&mut rows, z);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = z.sub(0, row[f]);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (low-to-high, monic) via Hessenberg form.
fn charpoly(m: &[Vec<u64>], z: Zl) -> Vec<u64> {
    let n = m.len();
    let mut h = m.to_vec();
    for c in 1..n.saturating_sub(1) {
        let Some(p) = (c..n).find(|&i| h[i][c - 1] != 0) else {
            continue;
        };
        if p != c {
            h.swap(p, c);
            for row in h.iter_mut() {
                row.swap(p, c);
            }
        }
        let inv = z.inv(h[c][c - 1]);
        for i in c + 1..n {
            let u = z.mul(h[i][c - 1], inv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let t = z.mul(u, h[c][j]);
                h[i][j] = z.sub(h[i][j], t);
            }
            for row in h.iter_mut() {
                let t = z.mul(u, row[i]);
                row[c] = z.add(row[c], t);
            }
        }
    }
    let mut ps: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let mut pk = vec![0u64; k + 1];
        let prev = &ps[k - 1];
        for (i, &c) in prev.iter().enumerate() {
            pk[i + 1] = z.add(pk[i + 1], c);
            pk[i] = z.sub(pk[i], z.mul(h[k - 1][k - 1], c));
        }
        let mut t = 1;
        for i in 1..k {
            t = z.mul(t, h[k - i][k - i - 1]);
            let c = z.mul(t, h[k - i - 1][k - 1]);
            if c == 0 {
                continue;
            }
            for (j, &q) in ps[k - i - 1].iter().enumerate() {
                pk[j] = z.sub(pk[j], z.mul(c, q));
            }
        }
        ps.push(pk);
    }
    ps.pop().unwrap()
}

/// Class multiplication coefficients `a[i][j][k] = #{x in C_i : x^{-1} z_k in C_j}`.
fn class_coefficients(g: &MatrixGroup) -> Vec<u32> {
    let k = g.num_classes();
    let cls = g.classes();
    let inverses: Vec<Matrix> = g.elements().iter().map(|x| g.inv(x)).collect();
    let mut a = vec![0u32; k * k * k];
    for kk in 0..k {
        let z = g.class_rep(kk);
        for (xi, xinv) in inverses.iter().enumerate() {
            let i = cls.class_of_element(xi);
            let j = g.class_of_member(&xinv.mul(z, g.field()));
            a[(i * k + j) * k + kk] += 1;
        }
    }
    a
}

/// Splits the whole space into common eigenlines of the class matrices.
fn split_eigenspaces(a: &[u32], k: usize, z: Zl) -> Result<Vec<Vec<u64>>> {
    let class_matrix = |i: usize| -> Vec<Vec<u64>> {
        (0..k).map(|j| (0..k).map(|kk| a[(i * k + j) * k + kk] as u64 % z.0).collect()).collect()
    };
    let mut spaces: Vec<Vec<Vec<u64>>> =
        vec![(0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect()];
    for i in 0..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(i);
        let mut next = Vec::new();
        for mut basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let pivots = rref(&mut basis, z);
            let d = basis.len();
            // column r holds the coordinates of M b_r
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| (0..k).map(|j| m[j].iter().zip(b).fold(0, |acc, (&x, &y)| z.add(acc, z.mul(x, y)))).collect())
                .collect();
            let restricted: Vec<Vec<u64>> = (0..d).map(|s| (0..d).map(|r| images[r][pivots[s]]).collect()).collect();
            let cp = charpoly(&restricted, z);
            let roots: Vec<u64> = (0..z.0)
                .filter(|&x| cp.iter().rev().fold(0, |acc, &c| z.add(z.mul(acc, x), c)) == 0)
                .collect();
            if roots.len() == 1 {
                next.push(basis);
                continue;
            }
            let mut found = 0;
            for lam in roots {
                let shifted: Vec<Vec<u64>> = restricted
                    .iter()
                    .enumerate()
                    .map(|(s, row)| row.iter().enumerate().map(|(r, &x)| if r == s { z.sub(x, lam) } else { x }).collect())
                    .collect();
                let ker = kernel(&shifted, z);
                found += ker.len();
                let sub: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|y| {
                        let mut v = vec![0u64; k];
                        for (coef, b) in y.iter().zip(&basis) {
                            for (x, &bb) in v.iter_mut().zip(b) {
                                *x = z.add(*x, z.mul(*coef, bb));
                            }
                        }
                        v
                    })
                    .collect();
                next.push(sub);
            }
            if found != d {
                return Err(Error::Defect(format!("class matrix {i} is not diagonalizable mod {}", z.0)));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Defect("class matrices did not split the class algebra".into()));
    }
    Ok(spaces.into_iter().map(|mut s| s.pop().unwrap()).collect())
}

/// The character table of `g`, ordered by degree and then by values.
pub fn character_table(g: &MatrixGroup) -> Result<CharacterTable> {
    let info = ClassInfo::of_group(g);
    character_table_with_info(g, info)
}

pub fn character_table_with_info(g: &MatrixGroup, info: Arc<ClassInfo>) -> Result<CharacterTable> {
    let k = g.num_classes();
    let order = g.order();
    let f = g.field();
    let orders: Vec<u64> = (0..k).map(|c| g.element_order(g.class_rep(c))).collect();
    let exponent = orders.iter().fold(1u64, |a, b| a.lcm(b));
    let z = Zl(dixon_prime(exponent, order));
    let root = z.primitive_root();
    let power_classes: Vec<Vec<usize>> = (0..k)
        .map(|c| {
            let x = g.class_rep(c);
            let mut p = Matrix::identity(g.n());
            (0..orders[c])
                .map(|_| {
                    let cl = g.class_of_member(&p);
                    p = p.mul(x, f);
                    cl
                })
                .collect()
        })
        .collect();

    let a = class_coefficients(g);
    let lines = split_eigenspaces(&a, k, z)?;
    let id = info.identity;
    let mut chars = Vec::with_capacity(k);
    for w in lines {
        if w[id] == 0 {
            return Err(Error::Defect("eigenvector vanishes at the identity class".into()));
        }
        let s = z.inv(w[id]);
        let omega: Vec<u64> = w.iter().map(|&x| z.mul(x, s)).collect();
        let mut sum = 0;
        for c in 0..k {
            let t = z.mul(z.mul(omega[c], omega[info.inverse[c]]), z.inv(info.sizes[c] % z.0));
            sum = z.add(sum, t);
        }
        let target = z.mul(order % z.0, z.inv(sum));
        let deg = (1..)
            .take_while(|d| d * d <= order)
            .find(|d| z.mul(*d, *d) == target)
            .ok_or_else(|| Error::Defect("no degree matches the modular value".into()))?;
        let modular: Vec<u64> = (0..k).map(|c| z.mul(z.mul(omega[c], deg % z.0), z.inv(info.sizes[c] % z.0))).collect();
        let mut values = Vec::with_capacity(k);
        for c in 0..k {
            let e = orders[c];
            let ze = z.pow(root, (z.0 - 1) / e);
            let zinv = z.inv(ze);
            let einv = z.inv(e % z.0);
            let mut coeffs = vec![Rational64::zero(); e as usize];
            for t in 0..e {
                let step = z.pow(zinv, t);
                let mut acc = 0;
                let mut w = 1;
                for j in 0..e as usize {
                    acc = z.add(acc, z.mul(modular[power_classes[c][j]], w));
                    w = z.mul(w, step);
                }
                let m = z.mul(acc, einv);
                if m > deg {
                    return Err(Error::Defect(format!("eigenvalue multiplicity {m} exceeds degree {deg}")));
                }
                coeffs[t as usize] = Rational64::from_integer(m as i64);
            }
            values.push(Cyclotomic::from_raw(e as u32, &coeffs));
        }
        chars.push(ClassFunction::new(info.clone(), values)?);
    }
    chars.sort_by(|x, y| {
        let dx = x.degree().to_integer();
        let dy = y.degree().to_integer();
        dx.cmp(&dy).then_with(|| x.values().cmp(y.values()))
    });
    CharacterTable::new(info, chars)
}
