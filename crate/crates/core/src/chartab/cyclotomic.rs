//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! A value is stored against a conductor `N` as a rational combination of
//! roots `E(N, j) = exp(2 pi i j / N)`. Writing `N` as a product of prime
//! powers `P`, the exponent `j` corresponds to the tuple `c_P = j (N/P)^{-1}
//! mod P` and `E(N, j) = prod_P E(P, c_P)`. The basis keeps only tuples with
//! every `c_P < phi(P)`, which is the tensor product of the power bases of
//! the `Q(zeta_P)`. Because the power basis of `Q(zeta_{p^(a-1)})` sits inside
//! that of `Q(zeta_{p^a})` as the exponents divisible by `p`, a value lies in
//! `Q(zeta_{N/p})` exactly when `p` divides every exponent in its support.
//! Canonical form divides the conductor down until no prime does, so equal
//! values have identical representations.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ff::prime_factors;

struct ReductionTable {
    /// Distinct primes dividing the conductor.
    primes: Vec<u32>,
    /// Basis expansion of `E(N, j)` for every `j` in `0..N`.
    expand: Vec<Vec<(u32, i8)>>,
}

fn reduction_table(n: u32) -> Arc<ReductionTable> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ReductionTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cache lock").get(&n) {
        return t.clone();
    }
    let t = Arc::new(build_table(n));
    cache.lock().expect("cache lock").insert(n, t.clone());
    t
}

fn build_table(n: u32) -> ReductionTable {
    let primes: Vec<u32> = prime_factors(n as u64).into_iter().map(|p| p as u32).collect();
    // (P, p, P/p, N/P, (N/P)^{-1} mod P)
    let comps: Vec<(u64, u64, u64, u64, u64)> = primes
        .iter()
        .map(|&p| {
            let p = p as u64;
            let mut pp = 1u64;
            while (n as u64).is_multiple_of(pp * p) {
                pp *= p;
            }
            let cof = n as u64 / pp;
            let inv = mod_inverse(cof % pp, pp);
            (pp, p, pp / p, cof, inv)
        })
        .collect();
    let mut expand = Vec::with_capacity(n as usize);
    for j in 0..n as u64 {
        let mut acc: Vec<(u64, i8)> = vec![(0, 1)];
        for &(pp, p, sub, cof, inv) in &comps {
            let c = j * inv % pp;
            let phi = pp - sub;
            let parts: Vec<(u64, i8)> = if c < phi {
                vec![(c, 1)]
            } else {
                let r = c - phi;
                (0..p - 1).map(|t| (r + t * sub, -1)).collect()
            };
            let mut next = Vec::with_capacity(acc.len() * parts.len());
            for &(e, s) in &acc {
                for &(c2, s2) in &parts {
                    next.push(((e + c2 * cof) % n as u64, s * s2));
                }
            }
            acc = next;
        }
        expand.push(acc.into_iter().map(|(e, s)| (e as u32, s)).collect());
    }
    ReductionTable { primes, expand }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m as i64) as u64
}

/// An element of a cyclotomic field in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    conductor: u32,
    /// Sorted by exponent; every exponent is a basis exponent; no zero
    /// coefficients.
    terms: Vec<(u32, Rational64)>,
}

impl Cyclotomic {
    pub fn zero() -> Cyclotomic {
        Cyclotomic { conductor: 1, terms: Vec::new() }
    }

    pub fn one() -> Cyclotomic {
        Self::from_rational(Rational64::one())
    }

    pub fn from_int(x: i64) -> Cyclotomic {
        Self::from_rational(Rational64::from_integer(x))
    }

    pub fn from_rational(x: Rational64) -> Cyclotomic {
        if x.is_zero() {
            Self::zero()
        } else {
            Cyclotomic { conductor: 1, terms: vec![(0, x)] }
        }
    }

    /// `E(e, j)`, the `j`-th power of `exp(2 pi i / e)`.
    pub fn root(e: u32, j: i64) -> Cyclotomic {
        assert!(e >= 1, "conductor must be positive");
        let j = j.rem_euclid(e as i64) as usize;
        let mut dense = vec![Rational64::zero(); e as usize];
        dense[j] = Rational64::one();
        Self::from_raw(e, &dense)
    }

    /// Canonicalizes a dense coefficient vector indexed by arbitrary
    /// exponents modulo `n`.
    pub fn from_raw(n: u32, dense: &[Rational64]) -> Cyclotomic {
        debug_assert_eq!(dense.len(), n as usize);
        let table = reduction_table(n);
        let mut out = vec![Rational64::zero(); n as usize];
        for (j, c) in dense.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(b, s) in &table.expand[j] {
                if s > 0 {
                    out[b as usize] += *c;
                } else {
                    out[b as usize] -= *c;
                }
            }
        }
        let terms = out.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j as u32, c)).collect();
        Cyclotomic { conductor: n, terms }.minimized(&table.primes)
    }

    fn minimized(mut self, primes: &[u32]) -> Cyclotomic {
        if self.terms.is_empty() {
            return Self::zero();
        }
        loop {
            let mut changed = false;
            for &p in primes {
                if self.conductor.is_multiple_of(p) && self.terms.iter().all(|(j, _)| j % p == 0) {
                    self.conductor /= p;
                    for t in self.terms.iter_mut() {
                        t.0 /= p;
                    }
                    changed = true;
                }
            }
            if !changed {
                return self;
            }
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// `(exponent, coefficient)` pairs against the canonical basis.
    pub fn terms(&self) -> &[(u32, Rational64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_rational(&self) -> Option<Rational64> {
        match (self.conductor, self.terms.as_slice()) {
            (_, []) => Some(Rational64::zero()),
            (1, [(0, c)]) => Some(*c),
            _ => None,
        }
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Writes the value into a dense vector over exponents modulo `n`, where
    /// `conductor | n`. Basis exponents stay basis exponents.
    fn lift_into(&self, n: u32, scale: Rational64, dense: &mut [Rational64]) {
        let k = n / self.conductor;
        for (j, c) in &self.terms {
            dense[(j * k) as usize] += *c * scale;
        }
    }

    /// `sum_i c_i x_i`, accumulated at the common conductor.
    pub fn linear_combination<'a, I>(items: I) -> Cyclotomic
    where
        I: IntoIterator<Item = (Rational64, &'a Cyclotomic)>,
        I::IntoIter: Clone,
    {
        let it = items.into_iter();
        let n = it.clone().fold(1u32, |acc, (c, x)| if c.is_zero() { acc } else { acc.lcm(&x.conductor) });
        let mut dense = vec![Rational64::zero(); n as usize];
        for (c, x) in it {
            if !c.is_zero() {
                x.lift_into(n, c, &mut dense);
            }
        }
        let terms = dense.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j as u32, c)).collect();
        let primes = reduction_table(n).primes.clone();
        Cyclotomic { conductor: n, terms }.minimized(&primes)
    }

    pub fn scale(&self, c: Rational64) -> Cyclotomic {
        if c.is_zero() {
            return Self::zero();
        }
        Cyclotomic { conductor: self.conductor, terms: self.terms.iter().map(|(j, x)| (*j, *x * c)).collect() }
    }

    /// Image under the Galois automorphism `E(N, 1) -> E(N, a)`, `a` coprime
    /// to the conductor.
    pub fn galois(&self, a: i64) -> Cyclotomic {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        debug_assert_eq!(a.gcd(&(n as i64)), 1);
        let mut dense = vec![Rational64::zero(); n as usize];
        for (j, c) in &self.terms {
            let e = (*j as i64 * a).rem_euclid(n as i64) as usize;
            dense[e] += *c;
        }
        Self::from_raw(n, &dense)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(-1)
    }

    pub fn mul_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.conductor == 1 {
            return other.scale(self.terms[0].1);
        }
        if other.conductor == 1 {
            return self.scale(other.terms[0].1);
        }
        let n = self.conductor.lcm(&other.conductor);
        let (ka, kb) = (n / self.conductor, n / other.conductor);
        let mut dense = vec![Rational64::zero(); n as usize];
        for (ja, ca) in &self.terms {
            for (jb, cb) in &other.terms {
                let e = (ja * ka + jb * kb) % n;
                dense[e as usize] += *ca * *cb;
            }
        }
        Self::from_raw(n, &dense)
    }

    pub fn add_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        Self::linear_combination([(Rational64::one(), self), (Rational64::one(), other)])
    }

    pub fn sub_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        Self::linear_combination([(Rational64::one(), self), (-Rational64::one(), other)])
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        self.add_ref(&rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self.sub_ref(&rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        self.mul_ref(&rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(-Rational64::one())
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Cyclotomic {
    /// `c*E(e,j)` terms joined by `" + "`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(j, c)| format!("{c}*E({},{j})", self.conductor)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Cyclotomic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Cyclotomic> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(format!("cyclotomic value {s:?}"));
        let mut terms = Vec::new();
        for part in s.split(" + ") {
            let (c, root) = part.split_once("*E(").ok_or_else(bad)?;
            let root = root.strip_suffix(')').ok_or_else(bad)?;
            let (e, j) = root.split_once(',').ok_or_else(bad)?;
            let c: Rational64 = c.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            let j: i64 = j.trim().parse().map_err(|_| bad())?;
            if e == 0 {
                return Err(bad());
            }
            terms.push((c, Self::root(e, j)));
        }
        Ok(Self::linear_combination(terms.iter().map(|(c, x)| (*c, x))))
    }
}
