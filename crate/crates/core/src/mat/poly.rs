//! Polynomials over a tabulated field, used for characteristic polynomials
//! and elementary divisors.

use crate::ff::{Fe, Field};

use super::matrix::Matrix;

/// Coefficients low-to-high.
pub type Poly = Vec<Fe>;

fn trim(a: &mut Poly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn mul(a: &[Fe], b: &[Fe], f: &Field) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder by a monic divisor.
pub fn divrem_monic(a: &[Fe], m: &[Fe], f: &Field) -> (Poly, Poly) {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![Fe::ZERO; r.len() - dm];
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = *r.last().unwrap();
        q[shift] = c;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
        }
        trim(&mut r);
    }
    (q, r)
}

/// Evaluates a polynomial at a square matrix (Horner).
pub fn eval_matrix(p: &[Fe], a: &Matrix, f: &Field) -> Matrix {
    let n = a.dim();
    let mut acc = Matrix::zero(n);
    for &c in p.iter().rev() {
        acc = acc.mul(a, f).add(&Matrix::scalar(n, c), f);
    }
    acc
}

/// Characteristic polynomial `det(xI - A)` via Hessenberg reduction.
pub fn charpoly(a: &Matrix, f: &Field) -> Poly {
    let n = a.dim();
    let mut h = *a;
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
            continue;
        };
        if piv != m {
            for j in 0..n {
                let t = h.get(piv, j);
                h.set(piv, j, h.get(m, j));
                h.set(m, j, t);
            }
            for i in 0..n {
                let t = h.get(i, piv);
                h.set(i, piv, h.get(i, m));
                h.set(i, m, t);
            }
        }
        let pinv = f.inv(h.get(m, m - 1)).expect("pivot");
        for i in m + 1..n {
            let u = f.mul(h.get(i, m - 1), pinv);
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                h.set(i, j, f.sub(h.get(i, j), f.mul(u, h.get(m, j))));
            }
            for r in 0..n {
                h.set(r, m, f.add(h.get(r, m), f.mul(u, h.get(r, i))));
            }
        }
    }
    let mut ps: Vec<Poly> = vec![vec![Fe::ONE]];
    for m in 1..=n {
        let lin = vec![f.neg(h.get(m - 1, m - 1)), Fe::ONE];
        let mut pm = mul(&lin, &ps[m - 1], f);
        let mut t = Fe::ONE;
        for i in 1..m {
            t = f.mul(t, h.get(m - i, m - i - 1));
            let c = f.mul(t, h.get(m - i - 1, m - 1));
            if c.is_zero() {
                continue;
            }
            let prev = &ps[m - i - 1];
            pm.resize(pm.len().max(prev.len()), Fe::ZERO);
            for (k, &pk) in prev.iter().enumerate() {
                pm[k] = f.sub(pm[k], f.mul(c, pk));
            }
        }
        trim(&mut pm);
        ps.push(pm);
    }
    ps.pop().unwrap()
}

/// All monic irreducible polynomials of degree `1..=max_degree`, ordered by
/// degree and then by coefficient codes from the constant term up.
pub fn monic_irreducibles(f: &Field, max_degree: usize) -> Vec<Poly> {
    let q = f.order() as u64;
    let mut out: Vec<Poly> = Vec::new();
    for d in 1..=max_degree {
        let count = q.pow(d as u32);
        let mut found = Vec::new();
        for idx in 0..count {
            let mut p = vec![Fe::ZERO; d + 1];
            let mut r = idx;
            for i in (0..d).rev() {
                p[i] = Fe((r % q) as u32);
                r /= q;
            }
            p[d] = Fe::ONE;
            let reducible = out
                .iter()
                .take_while(|g| 2 * (g.len() - 1) <= d)
                .any(|g| divrem_monic(&p, g, f).1.is_empty());
            if !reducible {
                found.push(p);
            }
        }
        out.extend(found);
    }
    out
}

/// Factors a monic polynomial against a precomputed irreducible list.
pub fn factor(p: &[Fe], irreducibles: &[Poly], f: &Field) -> Vec<(Poly, usize)> {
    let mut rem: Poly = p.to_vec();
    let mut out = Vec::new();
    for g in irreducibles {
        if rem.len() <= 1 {
            break;
        }
        if g.len() > rem.len() {
            break;
        }
        let mut mult = 0;
        loop {
            let (quo, r) = divrem_monic(&rem, g, f);
            if !r.is_empty() {
                break;
            }
            rem = quo;
            mult += 1;
        }
        if mult > 0 {
            out.push((g.clone(), mult));
        }
    }
    assert!(rem.len() <= 1, "irreducible list too short for factorization");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // N_d(q) = (1/d) sum_{e | d} mu(d/e) q^e
        let f3 = Field::new(3, 1).unwrap();
        let irr = monic_irreducibles(&f3, 3);
        let count = |d: usize| irr.iter().filter(|p| p.len() == d + 1).count();
        assert_eq!(count(1), 3);
        assert_eq!(count(2), 3);
        assert_eq!(count(3), 8);
        let f9 = Field::new(3, 2).unwrap();
        let irr9 = monic_irreducibles(&f9, 2);
        assert_eq!(irr9.iter().filter(|p| p.len() == 3).count(), 36);
    }

    #[test]
    fn charpoly_cayley_hamilton() {
        for (p, k, n) in [(3u64, 1u32, 3usize), (5, 1, 2), (3, 2, 2), (3, 1, 4)] {
            let f = Field::new(p, k).unwrap();
            let q = f.order();
            let total = (q as u64).pow((n * n) as u32);
            for code in (0..total).step_by((total / 400).max(1) as usize) {
                let a = Matrix::from_code(n, q, code);
                let cp = charpoly(&a, &f);
                assert_eq!(cp.len(), n + 1);
                assert_eq!(cp[n], Fe::ONE);
                assert_eq!(eval_matrix(&cp, &a, &f), Matrix::zero(n));
                let mut tr = Fe::ZERO;
                for i in 0..n {
                    tr = f.add(tr, a.get(i, i));
                }
                assert_eq!(cp[n - 1], f.neg(tr));
                let det = a.det(&f);
                let expect = if n % 2 == 0 { det } else { f.neg(det) };
                assert_eq!(cp[0], expect);
            }
        }
    }

    #[test]
    fn factor_roundtrip() {
        let f = Field::new(3, 1).unwrap();
        let irr = monic_irreducibles(&f, 3);
        let a = vec![f.from_int(1), Fe::ONE]; // x + 1
        let b = vec![Fe::ONE, Fe::ZERO, Fe::ONE]; // x^2 + 1
        let p = mul(&mul(&a, &a, &f), &b, &f);
        let fac = factor(&p, &irr, &f);
        assert_eq!(fac, vec![(a, 2), (b, 1)]);
    }
}
