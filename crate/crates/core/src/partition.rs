//! Integer partitions, conjugation and conjugacy-class data of symmetric groups.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// Zero parts are never stored. Serializes as a plain JSON array, e.g.
/// `[13,13,2,2,2,2,2]`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Validates and wraps a part list. Trailing zeros are stripped; any other
    /// violation of weak decrease is rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has a zero part before a positive one"
            )));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts an arbitrary multiset of positive parts into a partition.
    pub fn from_multiset(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub(crate) fn from_sorted_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The partition `(d, d, ..., d)` with `rows` parts.
    pub fn rectangle(rows: u32, d: u32) -> Self {
        if d == 0 {
            return Self::empty();
        }
        Partition {
            parts: vec![d; rows as usize],
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|λ|`
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `ℓ(λ)`
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// First part, or 0 for the empty partition.
    pub fn first(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Column lengths of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let first = self.first() as usize;
        let mut cols = vec![0u32; first];
        for &p in &self.parts {
            for c in cols.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition { parts: cols }
    }

    /// Every part multiplied by `k`.
    pub fn scale(&self, k: u32) -> Partition {
        if k == 0 {
            return Self::empty();
        }
        Partition {
            parts: self.parts.iter().map(|&p| p * k).collect(),
        }
    }

    /// Componentwise sum `λ + μ` (the monoid operation on highest weights).
    pub fn add(&self, other: &Partition) -> Partition {
        let len = self.length().max(other.length());
        Partition {
            parts: (0..len).map(|i| self.part(i) + other.part(i)).collect(),
        }
    }

    /// Multiset union of parts, kept sorted.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut out = Vec::with_capacity(self.length() + other.length());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            if self.parts[i] >= other.parts[j] {
                out.push(self.parts[i]);
                i += 1;
            } else {
                out.push(other.parts[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.parts[i..]);
        out.extend_from_slice(&other.parts[j..]);
        Partition { parts: out }
    }

    /// Multiplicity `m_j` of every part value, as `(j, m_j)` pairs in decreasing `j`.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `(-1)^{|ρ| - ℓ(ρ)}`: the sign of any permutation with this cycle type.
    pub fn sign(&self) -> i32 {
        if (self.size() as usize - self.length()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Parses `"13,13,2"` (whitespace tolerated, empty string is the empty partition).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidPartition(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` with at most `max_parts` parts and first part at most
/// `max_first_part`, in lexicographically decreasing order.
pub fn enumerate_partitions(
    n: u32,
    max_parts: Option<u32>,
    max_first_part: Option<u32>,
) -> Vec<Partition> {
    let max_parts = max_parts.unwrap_or(n).min(n) as usize;
    let max_first = max_first_part.unwrap_or(n).min(n);
    let mut out = Vec::new();
    let mut current = Vec::new();
    if n == 0 {
        out.push(Partition::empty());
        return out;
    }
    fill(n, max_first, max_parts, &mut current, &mut out);
    out
}

fn fill(remaining: u32, cap: u32, slots: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition::from_sorted_unchecked(current.clone()));
        return;
    }
    if slots == 0 {
        return;
    }
    let hi = cap.min(remaining);
    // the remaining slots must be able to absorb what is left
    let lo = remaining.div_ceil(slots as u32).max(1);
    for part in (lo..=hi).rev() {
        current.push(part);
        fill(remaining - part, part, slots - 1, current, out);
        current.pop();
    }
}

/// A conjugacy class of `S_N`, identified by its cycle type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassType {
    cycle_type: Partition,
}

impl ClassType {
    pub fn new(cycle_type: Partition) -> Self {
        ClassType { cycle_type }
    }

    pub fn cycle_type(&self) -> &Partition {
        &self.cycle_type
    }

    pub fn degree(&self) -> u32 {
        self.cycle_type.size()
    }

    /// Centralizer order `z_ρ = ∏_j j^{m_j} m_j!`.
    pub fn centralizer_order(&self) -> BigUint {
        centralizer_order(&self.cycle_type)
    }

    /// Number of permutations with this cycle type, `N!/z_ρ`.
    pub fn class_size(&self) -> BigUint {
        factorial(self.degree()) / self.centralizer_order()
    }
}

impl From<Partition> for ClassType {
    fn from(p: Partition) -> Self {
        ClassType::new(p)
    }
}

pub fn centralizer_order(rho: &Partition) -> BigUint {
    let mut z = BigUint::one();
    for (j, m) in rho.multiplicities() {
        z *= BigUint::from(j).pow(m);
        z *= factorial(m);
    }
    z
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}
