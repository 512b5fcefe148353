//! Irreducible characters of symmetric groups by the Murnaghan–Nakayama rule.
//!
//! Shapes are handled as beta-sets (first-column hook lengths): removing a
//! border strip of length `k` moves one bead from position `b` to `b - k`,
//! and the strip's height parity is the number of beads jumped over.
//! Cycles are removed largest first, so the remaining cycle type is always a
//! suffix of the class's cycle type. Intermediate values are memoized on
//! `(shape, remaining cycle type)`.

use dashmap::DashMap;
use num_traits::ToPrimitive;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::partition::{factorial, ClassType, Partition};

/// Largest degree `N` accepted. Every character value of `S_N` is bounded by
/// `sqrt(N!)`, which stays far inside `i128` up to this degree.
pub const MAX_CHARACTER_DEGREE: u32 = 50;

/// Thread-safe memo for character values.
#[derive(Default)]
pub struct CharacterCache {
    memo: DashMap<Box<[u8]>, i128>,
}

static GLOBAL_CACHE: Lazy<CharacterCache> = Lazy::new(CharacterCache::default);

/// The process-wide cache used by [`character`].
pub fn global_cache() -> &'static CharacterCache {
    &GLOBAL_CACHE
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn clear(&self) {
        self.memo.clear();
    }

    /// `χ_λ(ρ)`, memoized in this cache.
    pub fn character(&self, lambda: &Partition, rho: &ClassType) -> Result<i128> {
        let (shape, cycles) = prepare(lambda, rho)?;
        Ok(self.eval(&shape, &cycles))
    }

    fn eval(&self, shape: &[u8], cycles: &[u8]) -> i128 {
        if let Some(v) = base_case(shape, cycles) {
            return v;
        }
        let key = memo_key(shape, cycles);
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let v = step(shape, cycles, |s, c| self.eval(s, c));
        self.memo.insert(key, v);
        v
    }
}

/// `χ_λ(ρ)` using the process-wide memo.
pub fn character(lambda: &Partition, rho: &ClassType) -> Result<i128> {
    GLOBAL_CACHE.character(lambda, rho)
}

/// `χ_λ(ρ)` by plain recursion, no memo. Exponential; meant for checking the
/// memoized path on small degrees.
pub fn character_uncached(lambda: &Partition, rho: &ClassType) -> Result<i128> {
    fn go(shape: &[u8], cycles: &[u8]) -> i128 {
        if let Some(v) = base_case(shape, cycles) {
            return v;
        }
        step(shape, cycles, go)
    }
    let (shape, cycles) = prepare(lambda, rho)?;
    Ok(go(&shape, &cycles))
}

/// Number of standard Young tableaux of shape `λ`, by the hook-length formula.
pub fn dimension(lambda: &Partition) -> num_bigint::BigUint {
    let conj = lambda.conjugate();
    let mut hooks = num_bigint::BigUint::from(1u32);
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as usize - j - 1;
            let leg = conj.part(j) as usize - i - 1;
            hooks *= (arm + leg + 1) as u64;
        }
    }
    factorial(lambda.size()) / hooks
}

fn prepare(lambda: &Partition, rho: &ClassType) -> Result<(Vec<u8>, Vec<u8>)> {
    let n = lambda.size();
    if n != rho.degree() {
        return Err(Error::SizeMismatch(format!(
            "|λ| = {n} but the class {} has degree {}",
            rho.cycle_type(),
            rho.degree()
        )));
    }
    if n > MAX_CHARACTER_DEGREE {
        return Err(Error::ResourceCap {
            what: "character degree",
            requested: n as u128,
            limit: MAX_CHARACTER_DEGREE as u128,
        });
    }
    let shape = lambda.parts().iter().map(|&p| p as u8).collect();
    let cycles = rho.cycle_type().parts().iter().map(|&p| p as u8).collect();
    Ok((shape, cycles))
}

fn memo_key(shape: &[u8], cycles: &[u8]) -> Box<[u8]> {
    let mut key = Vec::with_capacity(shape.len() + cycles.len() + 1);
    key.extend_from_slice(shape);
    key.push(0);
    key.extend_from_slice(cycles);
    key.into_boxed_slice()
}

fn base_case(shape: &[u8], cycles: &[u8]) -> Option<i128> {
    if cycles.is_empty() {
        return Some(if shape.is_empty() { 1 } else { 0 });
    }
    if shape.len() == 1 {
        return Some(1);
    }
    if cycles[0] == 1 {
        // identity class: the degree of the representation
        let lambda = Partition::from_sorted_unchecked(shape.iter().map(|&p| p as u32).collect());
        return Some(dimension(&lambda).to_i128().expect("dimension fits in i128"));
    }
    None
}

/// One Murnaghan–Nakayama step: strip the leading cycle in every possible way.
fn step(shape: &[u8], cycles: &[u8], mut recurse: impl FnMut(&[u8], &[u8]) -> i128) -> i128 {
    let k = cycles[0] as i32;
    let rest = &cycles[1..];
    let len = shape.len();
    let beta: Vec<i32> = shape
        .iter()
        .enumerate()
        .map(|(i, &p)| p as i32 + (len - 1 - i) as i32)
        .collect();
    let mut total: i128 = 0;
    let mut next = Vec::with_capacity(len);
    for (i, &b) in beta.iter().enumerate() {
        let target = b - k;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        // beads strictly between target and b; beta is decreasing
        let jumped = beta[i + 1..].iter().take_while(|&&x| x > target).count();
        let mut moved = beta.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        next.clear();
        next.extend(
            moved
                .iter()
                .enumerate()
                .map(|(j, &bj)| (bj - (len - 1 - j) as i32) as u8)
                .filter(|&p| p > 0),
        );
        let v = recurse(&next, rest);
        total = if jumped % 2 == 0 {
            total.checked_add(v)
        } else {
            total.checked_sub(v)
        }
        .expect("character value overflowed i128");
    }
    total
}
