//! Kronecker coefficients, their rectangular specialisation `k_n(λ)`,
//! stretching probes and the occurrence-obstruction search.

use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::character::{character, MAX_CHARACTER_DEGREE};
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, factorial, ClassType, Partition};
use crate::specht;
use crate::symfun::{nonnegative_integer, pleth};

/// Three partitions of a common size `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleQuery {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
}

impl TripleQuery {
    pub fn new(lambda: Partition, mu: Partition, nu: Partition) -> Result<Self> {
        let (a, b, c) = (lambda.size(), mu.size(), nu.size());
        if a != b || b != c {
            return Err(Error::SizeMismatch(format!(
                "Kronecker triple with sizes {a}, {b}, {c}"
            )));
        }
        Ok(TripleQuery { lambda, mu, nu })
    }

    pub fn size(&self) -> u32 {
        self.lambda.size()
    }
}

/// `k(λ,μ,ν) = Σ_ρ χ_λ(ρ) χ_μ(ρ) χ_ν(ρ) / z_ρ`.
pub fn kron(q: &TripleQuery) -> Result<BigUint> {
    let n = q.size();
    let classes = enumerate_partitions(n, None, None);
    let terms = classes
        .par_iter()
        .map(|rho| {
            let c = ClassType::new(rho.clone());
            let a = character(&q.lambda, &c)?;
            if a == 0 {
                return Ok(BigInt::zero());
            }
            let b = character(&q.mu, &c)?;
            if b == 0 {
                return Ok(BigInt::zero());
            }
            let v = character(&q.nu, &c)?;
            Ok(BigInt::from(a) * BigInt::from(b) * BigInt::from(v) * BigInt::from(c.class_size()))
        })
        .collect::<Result<Vec<_>>>()?;
    let total: BigInt = terms.into_iter().sum();
    nonnegative_integer(
        BigRational::new(total, BigInt::from(factorial(n))),
        || format!("k{:?}", (&q.lambda, &q.mu, &q.nu)),
    )
}

/// `χ_{n×d}(ρ)² · |class(ρ)|` for every class where the rectangle's character
/// does not vanish.
struct RectangleWeights {
    order: BigInt,
    weights: Vec<(ClassType, BigInt)>,
}

static RECTANGLE_CACHE: Lazy<DashMap<(u32, u32), Arc<RectangleWeights>>> = Lazy::new(DashMap::new);

fn rectangle_weights(n: u32, d: u32) -> Result<Arc<RectangleWeights>> {
    if let Some(w) = RECTANGLE_CACHE.get(&(n, d)) {
        return Ok(w.clone());
    }
    let size = n * d;
    if size > MAX_CHARACTER_DEGREE {
        return Err(Error::ResourceCap {
            what: "character degree",
            requested: size as u128,
            limit: MAX_CHARACTER_DEGREE as u128,
        });
    }
    let rect = Partition::rectangle(n, d);
    let weights = enumerate_partitions(size, None, None)
        .into_par_iter()
        .map(|rho| {
            let c = ClassType::new(rho);
            let chi = character(&rect, &c)?;
            Ok((c, chi))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, chi)| *chi != 0)
        .map(|(c, chi)| {
            let w = BigInt::from(chi) * BigInt::from(chi) * BigInt::from(c.class_size());
            (c, w)
        })
        .collect();
    let w = Arc::new(RectangleWeights {
        order: BigInt::from(factorial(size)),
        weights,
    });
    RECTANGLE_CACHE.insert((n, d), w.clone());
    Ok(w)
}

/// `k_n(λ) = k(λ, n×d, n×d)` with `d = |λ|/n`.
pub fn kron_rect(n: u32, lambda: &Partition) -> Result<BigUint> {
    if n == 0 || lambda.size() % n != 0 {
        return Err(Error::InvalidInput(format!(
            "n = {n} does not divide |λ| = {}",
            lambda.size()
        )));
    }
    let d = lambda.size() / n;
    let rect = rectangle_weights(n, d)?;
    let terms = rect
        .weights
        .par_iter()
        .map(|(c, w)| Ok(w * BigInt::from(character(lambda, c)?)))
        .collect::<Result<Vec<_>>>()?;
    let total: BigInt = terms.into_iter().sum();
    nonnegative_integer(BigRational::new(total, rect.order.clone()), || {
        format!("k_{n}({lambda})")
    })
}

/// Independent verification path for small `N`: the invariant dimension of
/// the explicitly constructed triple tensor of Specht modules.
pub fn kron_oracle(q: &TripleQuery) -> Result<BigUint> {
    specht::invariant_dimension(&q.lambda, &q.mu, &q.nu).map(BigUint::from)
}

/// Result of [`stretch_probe`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StretchProbe {
    /// Least `s` with `k_n(sλ) > 0`, if one was found.
    pub witness: Option<u32>,
    /// Largest stretch factor actually evaluated.
    pub checked_up_to: u32,
    /// The search stopped before `s_max` because `s|λ|` exceeded the
    /// character degree limit.
    pub stopped_by_cap: bool,
}

/// Default stretch bound for [`stretch_probe`].
pub const DEFAULT_STRETCH_MAX: u32 = 4;

/// Least `s ≤ s_max` with `k_n(sλ) > 0`. A missing witness says nothing
/// about membership in the saturation.
pub fn stretch_probe(n: u32, lambda: &Partition, s_max: u32) -> Result<StretchProbe> {
    if n == 0 || lambda.size() % n != 0 {
        return Err(Error::InvalidInput(format!(
            "n = {n} does not divide |λ| = {}",
            lambda.size()
        )));
    }
    let mut checked = 0;
    for s in 1..=s_max {
        if s * lambda.size() > MAX_CHARACTER_DEGREE {
            return Ok(StretchProbe {
                witness: None,
                checked_up_to: checked,
                stopped_by_cap: true,
            });
        }
        checked = s;
        if !kron_rect(n, &lambda.scale(s))?.is_zero() {
            return Ok(StretchProbe {
                witness: Some(s),
                checked_up_to: s,
                stopped_by_cap: false,
            });
        }
    }
    Ok(StretchProbe {
        witness: None,
        checked_up_to: checked,
        stopped_by_cap: false,
    })
}

/// Which of the two shape conditions an obstruction candidate satisfies:
/// `ℓ(λ) ≤ m² + 1` and `λ₁ ≥ |λ|(1 - m/n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeFlags {
    pub length: bool,
    pub first_row: bool,
}

/// An occurrence obstruction: `k_n(λ) = 0` while `pleth_n(λ) > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub lambda: Partition,
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub pleth: BigUint,
    pub kron: BigUint,
    pub shape_ok: ShapeFlags,
}

impl ObstructionReport {
    pub fn is_obstruction(&self) -> bool {
        self.kron.is_zero() && !self.pleth.is_zero()
    }
}

/// Parameters of [`obstruction_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionSearch {
    pub n: u32,
    pub d: u32,
    pub m: u32,
    /// Restrict to `ℓ(λ) ≤ m² + 1` and `λ₁ ≥ d(n - m)`.
    pub enforce_shape: bool,
    /// Replaces the length bound (`n²`, or `m² + 1` under `enforce_shape`).
    pub max_length: Option<u32>,
    /// Refuse to start when more candidates than this survive the filters.
    pub candidate_cap: usize,
}

/// Default candidate cap for [`obstruction_search`].
pub const DEFAULT_CANDIDATE_CAP: usize = 5000;

impl ObstructionSearch {
    pub fn new(n: u32, d: u32, m: u32) -> Self {
        ObstructionSearch {
            n,
            d,
            m,
            enforce_shape: false,
            max_length: None,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }

    fn shape_flags(&self, lambda: &Partition) -> ShapeFlags {
        ShapeFlags {
            length: lambda.length() as u32 <= self.m * self.m + 1,
            // λ₁ ≥ dn(1 - m/n) ⇔ λ₁ ≥ d(n - m)
            first_row: lambda.first() >= self.d * (self.n - self.m),
        }
    }

    /// Candidates in lexicographically decreasing order.
    pub fn candidates(&self) -> Result<Vec<Partition>> {
        if self.m >= self.n {
            return Err(Error::InvalidInput(format!(
                "obstruction search needs m < n (got m = {}, n = {})",
                self.m, self.n
            )));
        }
        if self.d == 0 {
            return Err(Error::InvalidInput("obstruction search needs d ≥ 1".into()));
        }
        let size = self.d * self.n;
        let default_len = if self.enforce_shape {
            self.m * self.m + 1
        } else {
            self.n * self.n
        };
        let max_len = self.max_length.unwrap_or(default_len);
        let min_first = if self.enforce_shape {
            self.d * (self.n - self.m)
        } else {
            0
        };
        Ok(enumerate_partitions(size, Some(max_len), None)
            .into_iter()
            .filter(|l| l.first() >= min_first)
            .collect())
    }
}

/// Scans the candidates of `params` and reports every occurrence obstruction,
/// in enumeration order regardless of scheduling.
pub fn obstruction_search(params: &ObstructionSearch) -> Result<Vec<ObstructionReport>> {
    let candidates = params.candidates()?;
    if candidates.len() > params.candidate_cap {
        return Err(Error::ResourceCap {
            what: "obstruction candidates",
            requested: candidates.len() as u128,
            limit: params.candidate_cap as u128,
        });
    }
    let (n, d, m) = (params.n, params.d, params.m);
    let found = candidates
        .par_iter()
        .map(|lambda| {
            let kron = kron_rect(n, lambda)?;
            if !kron.is_zero() {
                return Ok(None);
            }
            let pleth = pleth(n, d, lambda, n * n)?;
            if pleth.is_zero() {
                return Ok(None);
            }
            Ok(Some(ObstructionReport {
                lambda: lambda.clone(),
                n,
                d,
                m,
                pleth,
                kron,
                shape_ok: params.shape_flags(lambda),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}
