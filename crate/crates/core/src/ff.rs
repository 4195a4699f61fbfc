//! Finite fields `F_{p^k}` of odd characteristic, tabulated with discrete
//! logarithms against a fixed primitive element.
//!
//! Elements are stored as a [`Fe`] code: `0` is zero and `j + 1` stands for
//! `g^j`, where `g` is the field's generator. Multiplication is index
//! addition; addition goes through a Zech logarithm table.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order this module will tabulate.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// A field element code: `0` for zero, `j + 1` for `g^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Discrete log with respect to the field generator, `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        self.0.checked_sub(1)
    }
}

/// An immutable tabulated finite field.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: u32,
    /// log -> polynomial integer (`sum c_i p^i`)
    exp: Vec<u32>,
    /// polynomial integer -> log, `NO_LOG` at 0
    log: Vec<u32>,
    /// zech[d] = log(1 + g^d), `NO_LOG` when `1 + g^d = 0`
    zech: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        write!(f, "GF({}^{}; modulus=[{}])", self.p, self.k, coeffs.join(","))
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into `(p, e)`; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

// Dense polynomials over F_p, coefficients low-to-high, no trailing zeros.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = (*r.last().unwrap() as u64 * lead_inv % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let t = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut r = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mul_mod(&r, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or irreducibility test for a monic polynomial of degree >= 1.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = f.len() - 1;
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=k / 2 {
            xp = pow_mod(&xp, p as u64, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

    pub fn to_int(a: &[u32], p: u32) -> u32 {
        a.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn from_int(mut v: u32, p: u32) -> Vec<u32> {
        let mut out = Vec::new();
        while v > 0 {
            out.push(v % p);
            v /= p;
        }
        out
    }
}

impl Field {
    /// Builds `F_{p^k}` with the lexicographically smallest monic irreducible
    /// modulus (coefficients compared from the constant term up) and the
    /// smallest primitive element in polynomial-integer order.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if k < 1 {
            return Err(Error::InvalidField("degree must be at least 1".into()));
        }
        let order = p
            .checked_pow(k)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::BoundExceeded {
                what: format!("GF({p}^{k})"),
                needed: p.saturating_pow(k),
                bound: MAX_FIELD_ORDER,
            })?;
        let p32 = p as u32;
        let ku = k as usize;

        let modulus = (0..p.pow(k))
            .map(|idx| {
                // c0 is the most significant digit of idx
                let mut coeffs = vec![0u32; ku + 1];
                let mut r = idx;
                for i in (0..ku).rev() {
                    coeffs[i] = (r % p) as u32;
                    r /= p;
                }
                coeffs[ku] = 1;
                coeffs
            })
            .find(|f| poly::is_irreducible(f, p32))
            .ok_or_else(|| Error::Defect(format!("no irreducible of degree {k} over F_{p}")))?;

        let group_order = order - 1;
        let factors = prime_factors(group_order);
        let generator = (1..order as u32)
            .find(|&c| {
                let a = poly::from_int(c, p32);
                factors.iter().all(|&r| {
                    let v = poly::pow_mod(&a, group_order / r, &modulus, p32);
                    v != [1]
                })
            })
            .ok_or_else(|| Error::Defect("no primitive element".into()))?;

        let gpoly = poly::from_int(generator, p32);
        let mut exp = Vec::with_capacity(group_order as usize);
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = vec![1u32];
        for j in 0..group_order as u32 {
            let v = poly::to_int(&cur, p32);
            exp.push(v);
            log[v as usize] = j;
            cur = poly::mul_mod(&cur, &gpoly, &modulus, p32);
        }
        let zech = exp
            .iter()
            .map(|&v| {
                // 1 + v: bump the constant digit
                let c0 = v % p32;
                let w = v - c0 + (c0 + 1) % p32;
                if w == 0 {
                    NO_LOG
                } else {
                    log[w as usize]
                }
            })
            .collect();

        Ok(Field { p: p32, k, order: order as u32, modulus, generator, exp, log, zech })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Polynomial-integer index of the primitive element.
    pub fn generator_index(&self) -> u32 {
        self.generator
    }

    pub fn generator(&self) -> Fe {
        Fe(2)
    }

    #[inline]
    fn unit_order(&self) -> u32 {
        self.order - 1
    }

    /// All elements in code order: zero, then `g^0, g^1, ...`.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order).map(Fe)
    }

    pub fn units(&self) -> impl Iterator<Item = Fe> {
        (1..self.order).map(Fe)
    }

    #[inline]
    pub fn from_log(&self, j: u64) -> Fe {
        Fe((j % self.unit_order() as u64) as u32 + 1)
    }

    /// Element of the prime subfield congruent to `n`.
    pub fn from_int(&self, n: i64) -> Fe {
        let r = n.rem_euclid(self.p as i64) as u32;
        self.from_poly_int(r)
    }

    pub fn from_poly_int(&self, v: u32) -> Fe {
        if v == 0 {
            Fe::ZERO
        } else {
            Fe(self.log[v as usize] + 1)
        }
    }

    pub fn to_poly_int(&self, x: Fe) -> u32 {
        match x.log() {
            None => 0,
            Some(j) => self.exp[j as usize],
        }
    }

    /// Integer value of an element of the prime subfield.
    pub fn prime_value(&self, x: Fe) -> Option<u32> {
        let v = self.to_poly_int(x);
        (v < self.p).then_some(v)
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let s = (a.0 - 1) + (b.0 - 1);
        let n = self.unit_order();
        Fe(if s >= n { s - n } else { s } + 1)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.unit_order();
        let la = a.0 - 1;
        let lb = b.0 - 1;
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            Fe::ZERO
        } else {
            let s = la + z;
            Fe(if s >= n { s - n } else { s } + 1)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            return a;
        }
        let n = self.unit_order();
        let s = a.0 - 1 + n / 2;
        Fe(if s >= n { s - n } else { s } + 1)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        let l = a.log()?;
        let n = self.unit_order();
        Some(Fe((n - l) % n + 1))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        match a.log() {
            None if e == 0 => Fe::ONE,
            None => Fe::ZERO,
            Some(l) => self.from_log(l as u64 * (e % self.unit_order() as u64)),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Fe) -> Option<u64> {
        let l = a.log()? as u64;
        let n = self.unit_order() as u64;
        Some(n / num_integer::gcd(l, n))
    }

    pub fn is_square(&self, a: Fe) -> bool {
        match a.log() {
            None => true,
            Some(l) => l % 2 == 0,
        }
    }

    /// Smallest non-square in generator order (always the generator itself).
    pub fn smallest_nonsquare(&self) -> Fe {
        self.units().find(|&x| !self.is_square(x)).expect("odd field has non-squares")
    }

    fn check_subfield_order(&self, q: u64) -> Result<u32> {
        match prime_power(q) {
            Some((p, e)) if p == self.p as u64 && self.k.is_multiple_of(e) => Ok(e),
            _ => Err(Error::NotASubfield(q, self.to_string())),
        }
    }

    /// `x^q` for `q` the order of a subfield.
    pub fn frobenius(&self, x: Fe, q: u64) -> Result<Fe> {
        self.check_subfield_order(q)?;
        Ok(self.frob_unchecked(x, q))
    }

    #[inline]
    pub(crate) fn frob_unchecked(&self, x: Fe, q: u64) -> Fe {
        self.pow(x, q)
    }

    /// Whether `x` lies in the subfield of order `q`.
    pub fn in_subfield(&self, x: Fe, q: u64) -> Result<bool> {
        Ok(self.frobenius(x, q)? == x)
    }

    /// Norm to the subfield of order `q`, as an element of this field.
    pub fn norm_within(&self, x: Fe, q: u64) -> Result<Fe> {
        self.check_subfield_order(q)?;
        let n = self.order as u64 - 1;
        Ok(self.pow(x, n / (q - 1)))
    }

    /// Trace to the subfield of order `q`, as an element of this field.
    pub fn trace_within(&self, x: Fe, q: u64) -> Result<Fe> {
        let e = self.check_subfield_order(q)?;
        let mut acc = Fe::ZERO;
        let mut y = x;
        for _ in 0..self.k / e {
            acc = self.add(acc, y);
            y = self.pow(y, q);
        }
        Ok(acc)
    }

    /// `Tr_{F_Q/F_p}(x)` as an integer in `[0, p)`.
    pub fn absolute_trace(&self, x: Fe) -> u32 {
        let t = self.trace_within(x, self.p as u64).expect("prime field is a subfield");
        self.prime_value(t).expect("trace lies in the prime field")
    }

    /// Exponent `t` with `psi_a(x) = zeta_p^t` for the additive character
    /// `psi_a(x) = zeta_p^{Tr(a x)}`.
    pub fn additive_character_exponent(&self, multiplier: Fe, x: Fe) -> u32 {
        self.absolute_trace(self.mul(multiplier, x))
    }

    /// Evaluates a polynomial with coefficients in this field at `x`.
    pub fn eval_poly(&self, coeffs: &[Fe], x: Fe) -> Fe {
        coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// A field monomorphism `F_{p^e} -> F_{p^k}` for `e | k`.
///
/// The polynomial variable of the subfield's modulus is sent to the root of
/// that modulus in the overfield with the smallest discrete logarithm, so the
/// map is additive as well as multiplicative.
#[derive(Clone, Debug)]
pub struct Embedding {
    sub_order: u32,
    up: Vec<Fe>,
    down: std::collections::HashMap<Fe, Fe>,
}

impl Embedding {
    pub fn new(sub: &Field, over: &Field) -> Result<Embedding> {
        if sub.p != over.p || !over.k.is_multiple_of(sub.k) {
            return Err(Error::NotATower(sub.to_string(), over.to_string()));
        }
        let q = sub.order as u64;
        let sub_mod: Vec<Fe> = sub.modulus.iter().map(|&c| over.from_int(c as i64)).collect();
        let root = over
            .elements()
            .filter(|&y| over.frob_unchecked(y, q) == y)
            .find(|&y| over.eval_poly(&sub_mod, y).is_zero())
            .ok_or_else(|| Error::Defect("subfield modulus has no root in overfield".into()))?;
        let mut up = Vec::with_capacity(sub.order as usize);
        for x in sub.elements() {
            let digits = poly::from_int(sub.to_poly_int(x), sub.p);
            let coeffs: Vec<Fe> = digits.iter().map(|&d| over.from_int(d as i64)).collect();
            up.push(over.eval_poly(&coeffs, root));
        }
        let down = up.iter().enumerate().map(|(i, &y)| (y, Fe(i as u32))).collect();
        Ok(Embedding { sub_order: sub.order, up, down })
    }

    pub fn embed(&self, x: Fe) -> Fe {
        self.up[x.0 as usize]
    }

    /// Preimage of an element of the image, `None` outside the subfield.
    pub fn restrict(&self, y: Fe) -> Option<Fe> {
        self.down.get(&y).copied()
    }

    pub fn sub_order(&self) -> u32 {
        self.sub_order
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerDirection {
    Down,
    Up,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerMap {
    Norm,
    Trace,
    Embed,
}

/// Moves `x` between fields in a tower: norm or trace down to a subfield,
/// or the canonical embedding up into an overfield.
pub fn norm_trace_embed(
    x: Fe,
    source: &Field,
    target: &Field,
    direction: TowerDirection,
    kind: TowerMap,
) -> Result<Fe> {
    let tower_err = || Error::NotATower(source.to_string(), target.to_string());
    match (direction, kind) {
        (TowerDirection::Down, TowerMap::Norm | TowerMap::Trace) => {
            let emb = Embedding::new(target, source).map_err(|_| tower_err())?;
            let q = target.order() as u64;
            let y = match kind {
                TowerMap::Norm => source.norm_within(x, q)?,
                _ => source.trace_within(x, q)?,
            };
            emb.restrict(y).ok_or_else(|| Error::Defect("norm/trace left the subfield".into()))
        }
        (TowerDirection::Up, TowerMap::Embed) => {
            let emb = Embedding::new(source, target).map_err(|_| tower_err())?;
            Ok(emb.embed(x))
        }
        _ => Err(Error::InvalidArgument(format!("{kind:?} does not go {direction:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_of_three() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        let one = f.from_int(1);
        let two = f.from_int(2);
        assert_eq!(f.add(one, two), Fe::ZERO);
        assert_eq!(f.to_string(), "GF(3^1; modulus=[0,1])");
    }

    #[test]
    fn f9_generator_order() {
        let f = Field::new(3, 2).unwrap();
        let g = f.generator();
        assert_eq!(f.pow(g, 8), Fe::ONE);
        assert_ne!(f.pow(g, 4), Fe::ONE);
        assert_eq!(f.element_order(g), Some(8));
    }

    #[test]
    fn build_is_deterministic() {
        let a = Field::new(3, 2).unwrap();
        let b = Field::new(3, 2).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.generator_index(), b.generator_index());
        // x^2 + 1 is the smallest irreducible quadratic over F_3 in this order
        assert_eq!(a.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 3).is_err());
        assert!(Field::new(3, 0).is_err());
        assert!(matches!(Field::new(3, 13), Err(Error::BoundExceeded { .. })));
        assert!(Field::new(3, 8).is_ok());
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = Field::new(3, 2).unwrap();
        let fixed: Vec<Fe> = f.elements().filter(|&x| f.frobenius(x, 3).unwrap() == x).collect();
        assert_eq!(fixed.len(), 3);
        for x in fixed {
            assert!(f.prime_value(x).is_some());
        }
        let g = f.generator();
        let fg = f.frobenius(g, 3).unwrap();
        assert_eq!(fg, f.pow(g, 3));
        assert_eq!(f.frobenius(fg, 3).unwrap(), g);
        assert!(f.frobenius(g, 5).is_err());
        assert!(f.frobenius(g, 27).is_err());
    }

    #[test]
    fn norm_f9_to_f3() {
        let f9 = Field::new(3, 2).unwrap();
        let f3 = Field::new(3, 1).unwrap();
        // power table oracle: g^(1+3)
        let g = f9.generator();
        let mut acc = Fe::ONE;
        for _ in 0..4 {
            acc = f9.mul(acc, g);
        }
        let n = norm_trace_embed(g, &f9, &f3, TowerDirection::Down, TowerMap::Norm).unwrap();
        assert_eq!(f3.prime_value(n), Some(2));
        assert_eq!(f9.prime_value(acc), Some(2));

        let mut fibers = [0usize; 3];
        for x in f9.units() {
            let n = norm_trace_embed(x, &f9, &f3, TowerDirection::Down, TowerMap::Norm).unwrap();
            fibers[f3.prime_value(n).unwrap() as usize] += 1;
        }
        assert_eq!(fibers, [0, 4, 4]);
        let n1 = norm_trace_embed(Fe::ONE, &f9, &f3, TowerDirection::Down, TowerMap::Norm);
        assert_eq!(n1.unwrap(), Fe::ONE);
        let t0 = norm_trace_embed(Fe::ZERO, &f9, &f3, TowerDirection::Down, TowerMap::Trace);
        assert_eq!(t0.unwrap(), Fe::ZERO);
    }

    #[test]
    fn tower_errors() {
        let f9 = Field::new(3, 2).unwrap();
        let f27 = Field::new(3, 3).unwrap();
        let f25 = Field::new(5, 2).unwrap();
        assert!(Embedding::new(&f9, &f27).is_err());
        assert!(Embedding::new(&f9, &f25).is_err());
        let r = norm_trace_embed(Fe::ONE, &f9, &f27, TowerDirection::Up, TowerMap::Norm);
        assert!(r.is_err());
    }

    #[test]
    fn field_axioms_exhaustive_up_to_81() {
        for (p, k) in [(3, 1), (3, 2), (5, 1), (5, 2), (3, 3), (3, 4)] {
            let f = Field::new(p, k).unwrap();
            let all: Vec<Fe> = f.elements().collect();
            // triples only on the smaller fields
            let triple = f.order() <= 27;
            for &a in &all {
                assert_eq!(f.add(a, Fe::ZERO), a);
                assert_eq!(f.mul(a, Fe::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if let Some(ai) = f.inv(a) {
                    assert_eq!(f.mul(a, ai), Fe::ONE);
                }
                for &b in &all {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if triple {
                        for &c in &all {
                            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                            assert_eq!(
                                f.mul(a, f.add(b, c)),
                                f.add(f.mul(a, b), f.mul(a, c))
                            );
                        }
                    }
                }
            }
            if !triple {
                // distributivity on a fixed slice of c values
                for &a in &all {
                    for &b in &all {
                        for c in all.iter().step_by(7) {
                            assert_eq!(
                                f.mul(a, f.add(b, *c)),
                                f.add(f.mul(a, b), f.mul(a, *c))
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_fixing_subfield() {
        for (p, k, q) in [(3u64, 2u32, 3u64), (3, 4, 3), (3, 4, 9), (5, 2, 5)] {
            let f = Field::new(p, k).unwrap();
            let fr = |x| f.frobenius(x, q).unwrap();
            let mut fixed = 0;
            for a in f.elements() {
                if fr(a) == a {
                    fixed += 1;
                }
                for b in f.elements().step_by(3) {
                    assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
                    assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
                }
            }
            assert_eq!(fixed, q);
        }
    }

    #[test]
    fn norm_multiplicative_trace_additive() {
        for ((p, k), (sp, sk)) in [((3, 2), (3, 1)), ((3, 4), (3, 2)), ((5, 2), (5, 1))] {
            let big = Field::new(p, k).unwrap();
            let small = Field::new(sp, sk).unwrap();
            let nm = |x| norm_trace_embed(x, &big, &small, TowerDirection::Down, TowerMap::Norm);
            let tr = |x| norm_trace_embed(x, &big, &small, TowerDirection::Down, TowerMap::Trace);
            let emb = Embedding::new(&small, &big).unwrap();
            for a in big.elements() {
                for b in big.elements() {
                    let n_ab = nm(big.mul(a, b)).unwrap();
                    assert_eq!(n_ab, small.mul(nm(a).unwrap(), nm(b).unwrap()));
                    let t_ab = tr(big.add(a, b)).unwrap();
                    assert_eq!(t_ab, small.add(tr(a).unwrap(), tr(b).unwrap()));
                }
                // norm of an embedded element is its power
                if (a.0 as usize) < small.order() as usize {
                    let x = Fe(a.0);
                    let n = nm(emb.embed(x)).unwrap();
                    assert_eq!(n, small.pow(x, (k / sk) as u64));
                }
            }
        }
    }

    #[test]
    fn embedding_is_ring_hom_and_towers_compose() {
        let f3 = Field::new(3, 1).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        let f81 = Field::new(3, 4).unwrap();
        let e39 = Embedding::new(&f3, &f9).unwrap();
        let e981 = Embedding::new(&f9, &f81).unwrap();
        let e381 = Embedding::new(&f3, &f81).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                assert_eq!(e981.embed(f9.add(a, b)), f81.add(e981.embed(a), e981.embed(b)));
                assert_eq!(e981.embed(f9.mul(a, b)), f81.mul(e981.embed(a), e981.embed(b)));
            }
        }
        for x in f3.elements() {
            assert_eq!(e981.embed(e39.embed(x)), e381.embed(x));
        }
    }

    #[test]
    fn additive_character_exponent_is_additive() {
        let f = Field::new(3, 2).unwrap();
        let a = f.generator();
        for x in f.elements() {
            for y in f.elements() {
                let s = f.additive_character_exponent(a, f.add(x, y));
                let t = (f.additive_character_exponent(a, x) + f.additive_character_exponent(a, y)) % 3;
                assert_eq!(s, t);
            }
        }
        // nontrivial
        assert!(f.elements().any(|x| f.additive_character_exponent(a, x) != 0));
    }
}
