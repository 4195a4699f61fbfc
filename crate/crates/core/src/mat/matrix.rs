use std::fmt;

use crate::ff::{Fe, Field};

/// Largest matrix dimension supported.
pub const MAX_DIM: usize = 4;

/// A small square matrix over a tabulated field; entries are [`Fe`] codes.
///
/// The field is not stored; every arithmetic method takes it explicitly.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: u8,
    e: [Fe; MAX_DIM * MAX_DIM],
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{self}]")
    }
}

/// Rows separated by `;`, entries by spaces, each entry its decimal code.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        for i in 0..n {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j).0)?;
            }
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(n: usize) -> Matrix {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
        Matrix { n: n as u8, e: [Fe::ZERO; MAX_DIM * MAX_DIM] }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::scalar(n, Fe::ONE)
    }

    pub fn scalar(n: usize, c: Fe) -> Matrix {
        let mut m = Matrix::zero(n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn diag(d: &[Fe]) -> Matrix {
        let mut m = Matrix::zero(d.len());
        for (i, &c) in d.iter().enumerate() {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Matrix {
        let n = rows.len();
        let mut m = Matrix::zero(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "non-square row");
            for (j, &c) in r.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// Permutation matrix with `P e_j = e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Matrix {
        let mut m = Matrix::zero(perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, Fe::ONE);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.e[i * MAX_DIM + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.e[i * MAX_DIM + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Fe>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Row-major base-`q` integer, first entry most significant; ascending
    /// codes give the row-major lexicographic order.
    pub fn code(&self, q: u32) -> u64 {
        let n = self.dim();
        let mut c = 0u64;
        for i in 0..n {
            for j in 0..n {
                c = c * q as u64 + self.get(i, j).0 as u64;
            }
        }
        c
    }

    pub fn from_code(n: usize, q: u32, mut code: u64) -> Matrix {
        let mut m = Matrix::zero(n);
        for idx in (0..n * n).rev() {
            m.set(idx / n, idx % n, Fe((code % q as u64) as u32));
            code /= q as u64;
        }
        m
    }

    pub fn mul(&self, other: &Matrix, f: &Field) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, f: &Field) -> Matrix {
        let mut out = *self;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f.add(self.get(i, j), other.get(i, j)));
            }
        }
        out
    }

    pub fn scale(&self, c: Fe, f: &Field) -> Matrix {
        let mut out = *self;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f.mul(c, self.get(i, j)));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Entrywise `x -> x^q`.
    pub fn frobenius(&self, q: u64, f: &Field) -> Matrix {
        let mut out = *self;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, f.frob_unchecked(self.get(i, j), q));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Matrix {
        let mut r = Matrix::identity(self.dim());
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, f);
            }
            b = b.mul(&b, f);
            e >>= 1;
        }
        r
    }

    /// Row-reduces a copy, returning `(rank, determinant if full rank)`.
    fn eliminate(&self, f: &Field) -> (usize, Fe) {
        let n = self.dim();
        let mut a = *self;
        let mut det = Fe::ONE;
        let mut rank = 0;
        let mut negate = false;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| !a.get(r, col).is_zero()) else {
                det = Fe::ZERO;
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    let t = a.get(piv, j);
                    a.set(piv, j, a.get(rank, j));
                    a.set(rank, j, t);
                }
                negate = !negate;
            }
            let pv = a.get(rank, col);
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("nonzero pivot");
            for r in rank + 1..n {
                let factor = f.mul(a.get(r, col), pinv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(a.get(r, j), f.mul(factor, a.get(rank, j)));
                    a.set(r, j, v);
                }
            }
            rank += 1;
        }
        if negate {
            det = f.neg(det);
        }
        (rank, det)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.eliminate(f).0
    }

    pub fn det(&self, f: &Field) -> Fe {
        let (rank, det) = self.eliminate(f);
        if rank < self.dim() {
            Fe::ZERO
        } else {
            det
        }
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        let n = self.dim();
        let mut a = *self;
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    let t = a.get(piv, j);
                    a.set(piv, j, a.get(col, j));
                    a.set(col, j, t);
                    let t = inv.get(piv, j);
                    inv.set(piv, j, inv.get(col, j));
                    inv.set(col, j, t);
                }
            }
            let pinv = f.inv(a.get(col, col)).expect("nonzero pivot");
            for j in 0..n {
                a.set(col, j, f.mul(a.get(col, j), pinv));
                inv.set(col, j, f.mul(inv.get(col, j), pinv));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(factor, a.get(col, j))));
                    inv.set(r, j, f.sub(inv.get(r, j), f.mul(factor, inv.get(col, j))));
                }
            }
        }
        Some(inv)
    }

    /// Parses the display form (`"a b;c d"`), rejecting codes `>= q`.
    pub fn parse(s: &str, q: u32) -> crate::error::Result<Matrix> {
        let bad = || crate::error::Error::Parse(format!("matrix {s:?}"));
        let rows: Vec<Vec<Fe>> = s
            .split(';')
            .map(|r| {
                r.split_whitespace()
                    .map(|x| x.parse::<u32>().ok().filter(|&v| v < q).map(Fe).ok_or_else(bad))
                    .collect::<crate::error::Result<Vec<Fe>>>()
            })
            .collect::<crate::error::Result<_>>()?;
        let n = rows.len();
        if n == 0 || n > MAX_DIM || rows.iter().any(|r| r.len() != n) {
            return Err(bad());
        }
        Ok(Matrix::from_rows(&rows))
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.dim())
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.dim();
        let c = self.get(0, 0);
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == if i == j { c } else { Fe::ZERO }))
    }

    /// For a monomial matrix, the permutation `r` with `M e_j` a multiple of
    /// `e_{r(j)}`, together with those multiples.
    pub fn monomial_pattern(&self) -> Option<(Vec<usize>, Vec<Fe>)> {
        let n = self.dim();
        let mut perm = Vec::with_capacity(n);
        let mut scalars = Vec::with_capacity(n);
        let mut seen = [false; MAX_DIM];
        for j in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&i| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 || seen[nz[0]] {
                return None;
            }
            seen[nz[0]] = true;
            perm.push(nz[0]);
            scalars.push(self.get(nz[0], j));
        }
        Some((perm, scalars))
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial_pattern().is_some()
    }

    /// Conjugation `g m g^{-1}`.
    pub fn conjugate_by(&self, g: &Matrix, g_inv: &Matrix, f: &Field) -> Matrix {
        g.mul(self, f).mul(g_inv, f)
    }

    /// Square sub-block on the index range `start..start + size`.
    pub fn block(&self, start: usize, size: usize) -> Matrix {
        let mut out = Matrix::zero(size);
        for i in 0..size {
            for j in 0..size {
                out.set(i, j, self.get(start + i, start + j));
            }
        }
        out
    }

    pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut out = Matrix::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    out.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.dim();
        }
        out
    }
}
