//! Sparse multivariate polynomials with big-integer coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A product of variables: `(index, exponent)` pairs, sorted by index, with
/// positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: u32) -> Self {
        Monomial(vec![(index, 1)])
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (v, e) in exps {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.0
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `∂/∂x_var`, returning the multiplier and the lowered monomial.
    fn derivative(&self, var: u32) -> Option<(u32, Monomial)> {
        let pos = self.0.binary_search_by_key(&var, |&(v, _)| v).ok()?;
        let e = self.0[pos].1;
        let mut lowered = self.0.clone();
        if e == 1 {
            lowered.remove(pos);
        } else {
            lowered[pos].1 = e - 1;
        }
        Some((e, Monomial(lowered)))
    }
}

/// Multivariate polynomial `Σ c_α x^α` over the integers.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c.into());
        p
    }

    pub fn var(index: u32) -> Self {
        Self::term(Monomial::var(index), BigInt::one())
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Maximum total degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Every term has total degree `deg`. The zero polynomial is homogeneous
    /// of every degree.
    pub fn is_homogeneous_of(&self, deg: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_homogeneous_of(self.degree())
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> SparsePoly {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, var: u32) -> SparsePoly {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.derivative(var) {
                out.add_term(lowered, c * BigInt::from(e));
            }
        }
        out
    }

    /// Evaluates with `point[i]` substituted for `x_i`.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = BigRational::from_integer(c.clone());
            for &(var, e) in &m.0 {
                let x = point.get(var as usize).ok_or_else(|| missing(var, point.len()))?;
                v *= Pow::pow(x, e);
            }
            total += v;
        }
        Ok(total)
    }

    /// Evaluates modulo `p` with `point[i]` substituted for `x_i`.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Result<u64> {
        let mut total = 0u64;
        for (m, c) in &self.terms {
            let mut v = reduce(c, p);
            for &(var, e) in &m.0 {
                let x = *point.get(var as usize).ok_or_else(|| missing(var, point.len()))?;
                v = mul_mod(v, pow_mod(x % p, e as u64, p), p);
            }
            total = add_mod(total, v, p);
        }
        Ok(total)
    }

    /// Substitutes `images[i]` for `x_i`.
    pub fn compose(&self, images: &[SparsePoly]) -> Result<SparsePoly> {
        let mut out = Self::zero();
        let mut powers: BTreeMap<(u32, u32), SparsePoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut v = Self::constant(c.clone());
            for &(var, e) in &m.0 {
                let img = images
                    .get(var as usize)
                    .ok_or_else(|| missing(var, images.len()))?;
                let pw = powers.entry((var, e)).or_insert_with(|| img.pow(e));
                v = &v * &*pw;
            }
            out = &out + &v;
        }
        Ok(out)
    }

    /// Degree ≤ 1 polynomial `c + Σ a_i x_i`.
    pub fn affine(constant: impl Into<BigInt>, coeffs: impl IntoIterator<Item = (u32, BigInt)>) -> Self {
        let mut p = Self::constant(constant);
        for (v, a) in coeffs {
            p.add_term(Monomial::var(v), a);
        }
        p
    }
}

fn missing(var: u32, len: usize) -> Error {
    Error::InvalidInput(format!("no value for x{var}: the point has {len} coordinates"))
}

pub(crate) fn reduce(c: &BigInt, p: u64) -> u64 {
    let r = c % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue below p")
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut out = SparsePoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.0.is_empty() {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            for (j, &(v, e)) in m.0.iter().enumerate() {
                if j > 0 {
                    write!(f, "*")?;
                }
                write!(f, "x{v}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr: Vec<(BTreeMap<u32, u32>, String)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.0.iter().copied().collect(), c.to_string()))
            .collect();
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr: Vec<(BTreeMap<u32, u32>, String)> = Vec::deserialize(deserializer)?;
        let mut p = SparsePoly::zero();
        for (exps, c) in repr {
            let c: BigInt = c
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            p.add_term(Monomial::from_exponents(exps), c);
        }
        Ok(p)
    }
}
