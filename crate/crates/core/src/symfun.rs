//! Symmetric functions in the power-sum basis and plethysm coefficients.
//!
//! Every vector is a finite combination `Σ c_π p_π` with exact rational
//! coefficients. Plethysm with a power sum is the substitution
//! `p_j ↦ p_{jk}`, so `h_d[h_n]` never leaves this basis; Schur coefficients
//! are read off at the end as `⟨f, s_λ⟩ = Σ_π c_π χ_λ(π)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::character::character;
use crate::error::{Error, Result};
use crate::partition::{centralizer_order, enumerate_partitions, ClassType, Partition};

/// Sparse exact-rational combination of power sums `p_π`, all of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumVector {
    degree: u32,
    terms: BTreeMap<Partition, BigRational>,
}

impl PowerSumVector {
    pub fn zero(degree: u32) -> Self {
        PowerSumVector {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant `1 = p_()`.
    pub fn one() -> Self {
        Self::monomial(Partition::empty(), BigRational::one())
    }

    pub fn monomial(index: Partition, coeff: BigRational) -> Self {
        let mut v = Self::zero(index.size());
        v.add_term(index, coeff);
        v
    }

    /// Builds a vector from raw terms; every index must have size `degree`.
    pub fn from_terms(
        degree: u32,
        terms: impl IntoIterator<Item = (Partition, BigRational)>,
    ) -> Result<Self> {
        let mut v = Self::zero(degree);
        for (pi, c) in terms {
            if pi.size() != degree {
                return Err(Error::SizeMismatch(format!(
                    "power-sum index {pi} in a vector of degree {degree}"
                )));
            }
            v.add_term(pi, c);
        }
        Ok(v)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Partition, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: &Partition) -> BigRational {
        self.terms.get(index).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, index: Partition, coeff: BigRational) {
        debug_assert_eq!(index.size(), self.degree);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::SizeMismatch(format!(
                "adding vectors of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (pi, c) in &other.terms {
            out.add_term(pi.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.degree);
        }
        PowerSumVector {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    /// Product; power sums multiply by merging their index multisets.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.union(b), ca * cb);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct PowerSumVectorRepr {
    degree: u32,
    terms: Vec<(Partition, String)>,
}

impl Serialize for PowerSumVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PowerSumVectorRepr {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), rational_to_string(v)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowerSumVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PowerSumVectorRepr::deserialize(deserializer)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|(k, s)| parse_rational(&s).map(|v| (k, v)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        PowerSumVector::from_terms(repr.degree, terms).map_err(D::Error::custom)
    }
}

/// `"p/q"` in lowest terms with a positive denominator.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// `h_n = Σ_{ρ ⊢ n} p_ρ / z_ρ`.
pub fn h_in_powersums(n: u32) -> PowerSumVector {
    let mut v = PowerSumVector::zero(n);
    for rho in enumerate_partitions(n, None, None) {
        let z = BigInt::from(centralizer_order(&rho));
        v.add_term(rho, BigRational::new(BigInt::one(), z));
    }
    v
}

/// `p_k[f]`: every power-sum index is multiplied by `k`.
pub fn powersum_plethysm(k: u32, f: &PowerSumVector) -> Result<PowerSumVector> {
    if k == 0 {
        return Err(Error::InvalidInput("p_0 is not a power sum".into()));
    }
    Ok(PowerSumVector {
        degree: f.degree * k,
        terms: f.terms.iter().map(|(pi, c)| (pi.scale(k), c.clone())).collect(),
    })
}

static PLETHYSM_CACHE: Lazy<DashMap<(u32, u32), Arc<PowerSumVector>>> = Lazy::new(DashMap::new);

/// `h_d[h_n] = Σ_{ρ ⊢ d} z_ρ^{-1} ∏_i p_{ρ_i}[h_n]`, the character of
/// `Sym^d Sym^n`. Results are cached per `(d, n)`.
pub fn outer_plethysm_h_h(d: u32, n: u32) -> Result<Arc<PowerSumVector>> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidInput(format!(
            "outer plethysm needs d, n ≥ 1 (got d = {d}, n = {n})"
        )));
    }
    if let Some(v) = PLETHYSM_CACHE.get(&(d, n)) {
        return Ok(v.clone());
    }
    let v = Arc::new(compute_outer_plethysm(d, n)?);
    PLETHYSM_CACHE.insert((d, n), v.clone());
    Ok(v)
}

fn compute_outer_plethysm(d: u32, n: u32) -> Result<PowerSumVector> {
    let h_n = h_in_powersums(n);
    // p_j[h_n]^m, built on demand
    let mut powers: BTreeMap<(u32, u32), PowerSumVector> = BTreeMap::new();
    let mut out = PowerSumVector::zero(d * n);
    for rho in enumerate_partitions(d, None, None) {
        let mut prod = PowerSumVector::one();
        for (j, m) in rho.multiplicities() {
            let power = match powers.entry((j, m)) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => {
                    let base = powersum_plethysm(j, &h_n)?;
                    let mut acc = PowerSumVector::one();
                    for _ in 0..m {
                        acc = acc.mul(&base);
                    }
                    e.insert(acc)
                }
            };
            prod = prod.mul(power);
        }
        let weight = BigRational::new(BigInt::one(), BigInt::from(centralizer_order(&rho)));
        for (pi, c) in prod.terms {
            out.add_term(pi, c * &weight);
        }
    }
    Ok(out)
}

/// `⟨f, s_λ⟩ = Σ_π c_π χ_λ(π)`.
pub fn schur_coefficient(f: &PowerSumVector, lambda: &Partition) -> Result<BigRational> {
    if lambda.size() != f.degree {
        return Err(Error::SizeMismatch(format!(
            "|λ| = {} but the vector has degree {}",
            lambda.size(),
            f.degree
        )));
    }
    ScaledVector::new(f).pair_with_character(lambda)
}

/// A vector with its coefficients brought to a common denominator, so that
/// Schur extraction is a sum of big integers.
struct ScaledVector {
    denom: BigInt,
    terms: Vec<(ClassType, BigInt)>,
}

impl ScaledVector {
    fn new(f: &PowerSumVector) -> Self {
        let denom = f
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = f
            .terms
            .iter()
            .map(|(pi, c)| {
                let scaled = c.numer() * (&denom / c.denom());
                (ClassType::new(pi.clone()), scaled)
            })
            .collect();
        ScaledVector { denom, terms }
    }

    fn pair_with_character(&self, lambda: &Partition) -> Result<BigRational> {
        let parts = self
            .terms
            .par_iter()
            .map(|(rho, c)| Ok(c * BigInt::from(character(lambda, rho)?)))
            .collect::<Result<Vec<BigInt>>>()?;
        let total: BigInt = parts.into_iter().sum();
        Ok(BigRational::new(total, self.denom.clone()))
    }
}

static SCALED_PLETHYSM_CACHE: Lazy<DashMap<(u32, u32), Arc<ScaledVector>>> =
    Lazy::new(DashMap::new);

fn scaled_outer_plethysm(d: u32, n: u32) -> Result<Arc<ScaledVector>> {
    if let Some(v) = SCALED_PLETHYSM_CACHE.get(&(d, n)) {
        return Ok(v.clone());
    }
    let v = Arc::new(ScaledVector::new(&*outer_plethysm_h_h(d, n)?));
    SCALED_PLETHYSM_CACHE.insert((d, n), v.clone());
    Ok(v)
}

/// Multiplicity of `V_λ` in `Sym^d Sym^n C^{num_vars}`.
pub fn pleth(n: u32, d: u32, lambda: &Partition, num_vars: u32) -> Result<BigUint> {
    if lambda.size() != d * n {
        return Err(Error::SizeMismatch(format!(
            "|λ| = {} but d·n = {}",
            lambda.size(),
            d * n
        )));
    }
    if lambda.length() > num_vars as usize {
        return Ok(BigUint::zero());
    }
    let value = scaled_outer_plethysm(d, n)?.pair_with_character(lambda)?;
    nonnegative_integer(value, || format!("pleth_{n}({lambda}) with d = {d}"))
}

pub(crate) fn nonnegative_integer(
    value: BigRational,
    what: impl FnOnce() -> String,
) -> Result<BigUint> {
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Arithmetic(format!("{} evaluated to {value}", what())));
    }
    Ok(value.to_integer().to_biguint().expect("nonnegative"))
}

/// Dimension of `V_λ(GL_k)` by Weyl's formula `∏_{i<j} (λ_i - λ_j + j - i)/(j - i)`;
/// zero when `ℓ(λ) > k`.
pub fn weyl_dimension(lambda: &Partition, k: u32) -> BigUint {
    if lambda.length() > k as usize {
        return BigUint::zero();
    }
    let k = k as usize;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        for j in i + 1..k {
            num *= (lambda.part(i) as u64 - lambda.part(j) as u64) + (j - i) as u64;
            den *= (j - i) as u64;
        }
    }
    num / den
}

/// `dim Sym^d Sym^n C^k = C(C(k+n-1, n) + d - 1, d)`.
pub fn sym_sym_dimension(d: u32, n: u32, k: u32) -> BigUint {
    let inner = binomial(k as u64 + n as u64 - 1, n as u64);
    let inner = inner.to_u64().expect("inner dimension fits in u64");
    binomial(inner + d as u64 - 1, d as u64)
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn vector(degree: u32, terms: &[(&[u32], i64, i64)]) -> PowerSumVector {
        PowerSumVector::from_terms(degree, terms.iter().map(|(k, n, d)| (p(k), q(*n, *d)))).unwrap()
    }

    #[test]
    fn h_small() {
        assert_eq!(h_in_powersums(0), PowerSumVector::one());
        assert_eq!(h_in_powersums(1), vector(1, &[(&[1], 1, 1)]));
        assert_eq!(h_in_powersums(2), vector(2, &[(&[1, 1], 1, 2), (&[2], 1, 2)]));
    }

    #[test]
    fn powersum_plethysm_examples() {
        let h2 = h_in_powersums(2);
        assert_eq!(powersum_plethysm(1, &h2).unwrap(), h2);
        assert_eq!(
            powersum_plethysm(2, &vector(1, &[(&[1], 1, 1)])).unwrap(),
            vector(2, &[(&[2], 1, 1)])
        );
        assert_eq!(
            powersum_plethysm(2, &h2).unwrap(),
            vector(4, &[(&[2, 2], 1, 2), (&[4], 1, 2)])
        );
        assert!(powersum_plethysm(0, &h2).is_err());
    }

    #[test]
    fn outer_plethysm_trivial_cases() {
        for n in 1..=4 {
            assert_eq!(*outer_plethysm_h_h(1, n).unwrap(), h_in_powersums(n));
        }
        assert_eq!(*outer_plethysm_h_h(2, 1).unwrap(), h_in_powersums(2));
        for d in 1..=6 {
            assert_eq!(outer_plethysm_h_h(d, 3).unwrap().degree(), 3 * d);
        }
    }

    #[test]
    fn h_d_of_h_1_is_one_schur_function() {
        for d in 1..=7 {
            let f = outer_plethysm_h_h(d, 1).unwrap();
            for l in enumerate_partitions(d, None, None) {
                let want = if l.length() == 1 { BigRational::one() } else { BigRational::zero() };
                assert_eq!(schur_coefficient(&f, &l).unwrap(), want);
            }
        }
    }

    #[test]
    fn schur_extraction_examples() {
        let h3 = h_in_powersums(3);
        assert_eq!(schur_coefficient(&h3, &p(&[3])).unwrap(), BigRational::one());
        assert_eq!(schur_coefficient(&h3, &p(&[1, 1, 1])).unwrap(), BigRational::zero());
        let f = outer_plethysm_h_h(2, 2).unwrap();
        assert_eq!(schur_coefficient(&f, &p(&[3, 1])).unwrap(), BigRational::zero());
        assert!(schur_coefficient(&h3, &p(&[2])).is_err());
    }

    /// Monomial-expansion oracle: the character of Sym^d Sym^n C^k as a
    /// polynomial in k eigenvalues, decomposed by peeling off leading
    /// monomials of Schur polynomials (semistandard tableau counts).
    mod oracle {
        use std::collections::BTreeMap;

        /// All exponent vectors of degree `n` in `k` variables.
        fn monomials(n: u32, k: usize) -> Vec<Vec<u32>> {
            if k == 0 {
                return if n == 0 { vec![vec![]] } else { vec![] };
            }
            let mut out = Vec::new();
            for first in 0..=n {
                for mut rest in monomials(n - first, k - 1) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }

        /// Weight multiset of Sym^d of the weights `ws`.
        fn sym_power(ws: &[Vec<u32>], d: u32, k: usize) -> BTreeMap<Vec<u32>, i64> {
            fn go(
                ws: &[Vec<u32>],
                start: usize,
                left: u32,
                acc: &mut Vec<u32>,
                out: &mut BTreeMap<Vec<u32>, i64>,
            ) {
                if left == 0 {
                    *out.entry(acc.clone()).or_default() += 1;
                    return;
                }
                for i in start..ws.len() {
                    for (a, w) in acc.iter_mut().zip(&ws[i]) {
                        *a += w;
                    }
                    go(ws, i, left - 1, acc, out);
                    for (a, w) in acc.iter_mut().zip(&ws[i]) {
                        *a -= w;
                    }
                }
            }
            let mut out = BTreeMap::new();
            go(ws, 0, d, &mut vec![0; k], &mut out);
            out
        }

        /// Number of semistandard tableaux of shape `shape` and content `weight`.
        fn kostka(shape: &[u32], weight: &[u32]) -> i64 {
            // fill letters 1..k one at a time as horizontal strips
            fn go(shape: &[u32], current: Vec<u32>, weight: &[u32]) -> i64 {
                if weight.is_empty() {
                    return if current == shape { 1 } else { 0 };
                }
                let w = weight[0];
                let mut total = 0;
                strips(shape, &current, 0, w, &mut current.clone(), &mut |next| {
                    total += go(shape, next.to_vec(), &weight[1..]);
                });
                total
            }
            fn strips(
                shape: &[u32],
                cur: &[u32],
                row: usize,
                left: u32,
                next: &mut Vec<u32>,
                f: &mut dyn FnMut(&[u32]),
            ) {
                if left == 0 {
                    f(next);
                    return;
                }
                if row == shape.len() {
                    return;
                }
                let upper = if row == 0 { shape[0] } else { cur[row - 1].min(shape[row]) };
                let max_add = upper.saturating_sub(cur[row]).min(left);
                for add in 0..=max_add {
                    next[row] = cur[row] + add;
                    strips(shape, cur, row + 1, left - add, next, f);
                }
                next[row] = cur[row];
            }
            go(shape, vec![0; shape.len()], weight)
        }

        /// Multiplicities of V_λ in Sym^d Sym^n C^k, keyed by λ padded to k parts.
        pub fn decompose(d: u32, n: u32, k: usize) -> BTreeMap<Vec<u32>, i64> {
            let ws = monomials(n, k);
            let mut chr = sym_power(&ws, d, k);
            let mut result = BTreeMap::new();
            loop {
                // dominant weights only; pick the lexicographically largest
                let top = chr
                    .iter()
                    .filter(|(w, c)| **c != 0 && w.windows(2).all(|p| p[0] >= p[1]))
                    .map(|(w, _)| w.clone())
                    .max();
                let Some(top) = top else { break };
                let mult = chr[&top];
                result.insert(top.clone(), mult);
                for w in chr.clone().keys() {
                    let kk = kostka(&top, w);
                    if kk != 0 {
                        *chr.get_mut(w).unwrap() -= mult * kk;
                    }
                }
                chr.retain(|_, c| *c != 0);
            }
            result
        }
    }

    #[test]
    fn pleth_matches_monomial_oracle() {
        for (d, n, k) in [(2, 2, 3), (2, 3, 3), (3, 2, 3), (3, 2, 2), (4, 2, 2), (2, 2, 2)] {
            let want = oracle::decompose(d, n, k);
            for l in enumerate_partitions(d * n, Some(k as u32), None) {
                let mut padded = l.parts().to_vec();
                padded.resize(k, 0);
                let expected = want.get(&padded).copied().unwrap_or(0);
                let got = pleth(n, d, &l, k as u32).unwrap();
                assert_eq!(got, BigUint::from(expected as u64), "d={d} n={n} λ={l}");
            }
        }
    }

    #[test]
    fn pleth_examples() {
        assert_eq!(pleth(2, 2, &p(&[2, 2]), 2).unwrap(), BigUint::one());
        assert_eq!(pleth(2, 2, &p(&[3, 1]), 4).unwrap(), BigUint::zero());
        assert_eq!(pleth(2, 2, &p(&[4]), 4).unwrap(), BigUint::one());
        assert_eq!(pleth(2, 2, &p(&[2, 2]), 1).unwrap(), BigUint::zero());
        assert!(pleth(2, 2, &p(&[3]), 4).is_err());
    }

    #[test]
    fn dimension_identity() {
        for k in 2..=3u32 {
            for d in 1..=10u32 {
                for n in 1..=10u32 {
                    if d * n > 10 {
                        continue;
                    }
                    let total: BigUint = enumerate_partitions(d * n, Some(k), None)
                        .iter()
                        .map(|l| pleth(n, d, l, k).unwrap() * weyl_dimension(l, k))
                        .sum();
                    assert_eq!(total, sym_sym_dimension(d, n, k), "d={d} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn schur_coefficients_are_natural_numbers() {
        for d in 1..=6u32 {
            for n in 1..=6u32 {
                if d * n > 12 {
                    continue;
                }
                let f = outer_plethysm_h_h(d, n).unwrap();
                for l in enumerate_partitions(d * n, None, None) {
                    let c = schur_coefficient(&f, &l).unwrap();
                    assert!(c.is_integer() && !c.is_negative(), "d={d} n={n} λ={l}: {c}");
                }
            }
        }
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(weyl_dimension(&p(&[1]), 3), BigUint::from(3u32));
        assert_eq!(weyl_dimension(&p(&[2, 1]), 3), BigUint::from(8u32));
        assert_eq!(weyl_dimension(&p(&[1, 1, 1, 1]), 3), BigUint::zero());
        assert_eq!(sym_sym_dimension(2, 2, 3), BigUint::from(21u32));
    }

    #[test]
    fn json_layout() {
        let v = h_in_powersums(2);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"degree":2,"terms":[[[1,1],"1/2"],[[2],"1/2"]]}"#);
        let back: PowerSumVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<PowerSumVector>(r#"{"degree":3,"terms":[[[2],"1"]]}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn product_degree_is_additive(a in 0u32..6, b in 0u32..6, k in 1u32..4) {
                let f = powersum_plethysm(k, &h_in_powersums(a)).unwrap();
                let g = h_in_powersums(b);
                let prod = f.mul(&g);
                prop_assert_eq!(prod.degree(), k * a + b);
                prop_assert!(prod.terms().iter().all(|(pi, c)| pi.size() == prod.degree() && !c.is_zero()));
            }
        }
    }
}
