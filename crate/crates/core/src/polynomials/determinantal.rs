//! Determinant and permanent polynomials, Grenet's determinantal
//! representation of the permanent, verification of representations and
//! padding.
//!
//! Variables follow one convention throughout: the entry `x_{ij}` of an
//! `n × n` matrix (1-based `i, j`) is variable `(i-1)·n + (j-1)`.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::AffineMatrix;
use super::poly::{Monomial, SparsePoly};
use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::specht::{permutation_sign, permutations};

/// The prime used for randomized identity tests, `2^62 - 57`.
pub const MODULUS: u64 = (1 << 62) - 57;

/// Variable index of `x_{ij}` (1-based) in an `n × n` matrix.
pub fn var_index(n: usize, i: usize, j: usize) -> u32 {
    ((i - 1) * n + (j - 1)) as u32
}

fn expand(n: u32, signed: bool, caps: &Caps) -> Result<SparsePoly> {
    if n == 0 {
        return Err(Error::InvalidInput("matrix order must be at least 1".into()));
    }
    check("symbolic matrix order", n as u128, caps.symbolic_order as u128)?;
    let n = n as usize;
    Ok(SparsePoly::from_terms(permutations(n).into_iter().map(|perm| {
        let mono = Monomial::from_exponents(
            perm.iter().enumerate().map(|(i, &j)| (var_index(n, i + 1, j + 1), 1)),
        );
        let c = if signed { permutation_sign(&perm) } else { 1 };
        (mono, BigInt::from(c))
    })))
}

/// `per_m = Σ_π ∏ x_{iπ(i)}`, fully expanded.
pub fn permanent_sym(m: u32, caps: &Caps) -> Result<SparsePoly> {
    expand(m, false, caps)
}

/// `det_n = Σ_π sgn(π) ∏ x_{iπ(i)}`, fully expanded.
pub fn determinant_sym(n: u32, caps: &Caps) -> Result<SparsePoly> {
    expand(n, true, caps)
}

/// Grenet's matrix of size `2^m - 1`.
///
/// Nodes are the subsets of `[m]` with `[m]` identified with `∅`, ordered by
/// size and then lexicographically. The edge `S → S ∪ {j}` with `|S| = i - 1`
/// carries `x_{ij}` and sits at row `S ∪ {j}`, column `S`; every node other
/// than `∅` gets a unit loop. Then `det A = (-1)^{m-1} per_m`; with
/// `normalize` the `∅` row is multiplied by `(-1)^{m-1}` so that
/// `det A = per_m`.
pub fn grenet_matrix(m: u32, normalize: bool) -> Result<AffineMatrix> {
    if m == 0 || m > 20 {
        return Err(Error::InvalidInput(format!("Grenet construction needs 1 ≤ m ≤ 20, got {m}")));
    }
    let m = m as usize;
    let full = (1usize << m) - 1;
    let mut nodes: Vec<usize> = (0..full).collect();
    nodes.sort_by_key(|&s| (s.count_ones(), subset_elements(s)));
    let mut index = vec![0usize; full + 1];
    for (k, &s) in nodes.iter().enumerate() {
        index[s] = k;
    }
    index[full] = index[0];
    let size = nodes.len();
    let mut entries = vec![vec![SparsePoly::zero(); size]; size];
    for &s in &nodes {
        let i = s.count_ones() as usize + 1;
        for j in 1..=m {
            let bit = 1 << (j - 1);
            if s & bit != 0 {
                continue;
            }
            let target = index[s | bit];
            let source = index[s];
            entries[target][source] = &entries[target][source] + &SparsePoly::var(var_index(m, i, j));
        }
        if s != 0 {
            let k = index[s];
            entries[k][k] = &entries[k][k] + &SparsePoly::one();
        }
    }
    let mut a = AffineMatrix::new(entries)?;
    if normalize && m % 2 == 0 {
        a.scale_row(index[0], &BigInt::from(-1));
    }
    Ok(a)
}

fn subset_elements(s: usize) -> Vec<u32> {
    (0..usize::BITS).filter(|b| s & (1 << b) != 0).collect()
}

/// The literal 7×7 matrix with `det = per_3`.
pub fn grenet_literal_matrix() -> AffineMatrix {
    let x = |i, j| SparsePoly::var(var_index(3, i, j));
    let o = SparsePoly::zero;
    let l = SparsePoly::one;
    AffineMatrix::new(vec![
        vec![o(), o(), o(), o(), x(3, 3), x(3, 2), x(3, 1)],
        vec![x(1, 1), l(), o(), o(), o(), o(), o()],
        vec![x(1, 2), o(), l(), o(), o(), o(), o()],
        vec![x(1, 3), o(), o(), l(), o(), o(), o()],
        vec![o(), x(2, 2), x(2, 1), o(), l(), o(), o()],
        vec![o(), x(2, 3), o(), x(2, 1), o(), l(), o()],
        vec![o(), o(), x(2, 3), x(2, 2), o(), o(), l()],
    ])
    .expect("entries are affine")
}

/// How [`verify_representation`] compares `det A` with `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Expand `det A` and compare coefficients.
    Symbolic,
    /// Compare at `trials` random points modulo [`MODULUS`].
    Modular { trials: u32, seed: u64 },
}

/// Outcome of [`verify_representation`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub equal: bool,
    pub mode: String,
    pub trials: u32,
    /// Upper bound on the chance that unequal polynomials agree at every
    /// trial point: `(deg/p)^trials`, with `deg` bounding the degree of
    /// `det A - f`. Zero for symbolic checks.
    pub failure_bound: f64,
}

/// Decides whether `det A = f`.
pub fn verify_representation(
    a: &AffineMatrix,
    f: &SparsePoly,
    mode: VerifyMode,
    caps: &Caps,
) -> Result<Verification> {
    match mode {
        VerifyMode::Symbolic => {
            let det = a.det_sym(caps.det_nodes)?;
            Ok(Verification {
                equal: &det == f,
                mode: "symbolic".into(),
                trials: 0,
                failure_bound: 0.0,
            })
        }
        VerifyMode::Modular { trials, seed } => {
            if trials == 0 {
                return Err(Error::InvalidInput("modular verification needs at least one trial".into()));
            }
            let universe = a
                .entries()
                .iter()
                .flatten()
                .chain(std::iter::once(f))
                .flat_map(|p| p.variables())
                .max()
                .map_or(0, |v| v as usize + 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut equal = true;
            for _ in 0..trials {
                let point: Vec<u64> = (0..universe).map(|_| rng.gen_range(0..MODULUS)).collect();
                if a.det_eval_mod(&point, MODULUS)? != f.eval_mod(&point, MODULUS)? {
                    equal = false;
                    break;
                }
            }
            let deg = (a.size() as u32).max(f.degree()).max(1);
            let per_trial = deg as f64 / MODULUS as f64;
            Ok(Verification {
                equal,
                mode: "modular".into(),
                trials,
                failure_bound: per_trial.powi(trials as i32),
            })
        }
    }
}

/// `t^{n-m} f` for `f` homogeneous of degree `m ≤ n`, with `t` the variable
/// `t_index`.
pub fn pad_polynomial(f: &SparsePoly, n: u32, t_index: u32) -> Result<SparsePoly> {
    let m = f.degree();
    if !f.is_homogeneous_of(m) {
        return Err(Error::InvalidInput("padding needs a homogeneous polynomial".into()));
    }
    if n < m {
        return Err(Error::InvalidInput(format!("cannot pad degree {m} down to {n}")));
    }
    if f.variables().contains(&t_index) && n > m {
        return Err(Error::InvalidInput(format!("x{t_index} already occurs in f")));
    }
    let t = SparsePoly::term(Monomial::from_exponents([(t_index, n - m)]), BigInt::one());
    Ok(&t * f)
}

/// `per_m` at `m² ` residues (row-major), by Ryser's formula mod [`MODULUS`].
/// Independent of any expanded polynomial.
pub fn permanent_mod(values: &[u64], m: usize, p: u64) -> u64 {
    use super::poly::{add_mod, mul_mod, sub_mod};
    assert_eq!(values.len(), m * m);
    let mut total = 0u64;
    for subset in 1usize..(1 << m) {
        let mut prod = 1u64;
        for i in 0..m {
            let mut row = 0u64;
            for j in 0..m {
                if subset & (1 << j) != 0 {
                    row = add_mod(row, values[i * m + j] % p, p);
                }
            }
            prod = mul_mod(prod, row, p);
        }
        // (-1)^{m - |S|}
        if (m - subset.count_ones() as usize) % 2 == 0 {
            total = add_mod(total, prod, p);
        } else {
            total = sub_mod(total, prod, p);
        }
    }
    total
}

/// Random point helper shared by tests and the CLI: `count` residues below `p`.
pub fn random_residues(count: usize, seed: u64, p: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0..p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::poly::sub_mod;

    fn caps() -> Caps {
        Caps::default()
    }

    fn x(n: usize, i: usize, j: usize) -> SparsePoly {
        SparsePoly::var(var_index(n, i, j))
    }

    #[test]
    fn two_by_two() {
        let per2 = permanent_sym(2, &caps()).unwrap();
        let det2 = determinant_sym(2, &caps()).unwrap();
        assert_eq!(per2, &(&x(2, 1, 1) * &x(2, 2, 2)) + &(&x(2, 1, 2) * &x(2, 2, 1)));
        assert_eq!(det2, &(&x(2, 1, 1) * &x(2, 2, 2)) - &(&x(2, 1, 2) * &x(2, 2, 1)));
        let per3 = permanent_sym(3, &caps()).unwrap();
        assert_eq!(per3.num_terms(), 6);
        assert!(per3.terms().values().all(|c| c.is_one()));
    }

    #[test]
    fn sign_flip_identity() {
        // per[a b; c d] = det[a -b; c d]
        let a = AffineMatrix::new(vec![
            vec![x(2, 1, 1), -&x(2, 1, 2)],
            vec![x(2, 2, 1), x(2, 2, 2)],
        ])
        .unwrap();
        assert_eq!(a.det_sym(100).unwrap(), permanent_sym(2, &caps()).unwrap());
    }

    #[test]
    fn det_and_per_share_support() {
        for n in 1..=6 {
            let per = permanent_sym(n, &caps()).unwrap();
            let det = determinant_sym(n, &caps()).unwrap();
            assert_eq!(per.num_terms(), (1..=n as usize).product::<usize>());
            assert!(per.terms().keys().eq(det.terms().keys()));
            assert!(det.terms().values().all(|c| c.is_one() || (-c).is_one()));
        }
    }

    #[test]
    fn symbolic_cap() {
        let small = Caps { symbolic_order: 4, ..Caps::default() };
        assert!(permanent_sym(5, &small).unwrap_err().is_resource_cap());
        assert!(permanent_sym(0, &small).is_err());
    }

    #[test]
    fn grenet_small() {
        let a = grenet_matrix(1, false).unwrap();
        assert_eq!(a.size(), 1);
        assert_eq!(a.entry(0, 0), &x(1, 1, 1));
        assert_eq!(grenet_matrix(3, false).unwrap(), grenet_literal_matrix());
        assert_eq!(grenet_matrix(3, true).unwrap(), grenet_literal_matrix());
        for m in 1..=4 {
            assert_eq!(grenet_matrix(m, false).unwrap().size(), (1 << m) - 1);
        }
    }

    #[test]
    fn grenet_sign_before_normalisation() {
        for m in 1..=4u32 {
            let per = permanent_sym(m, &caps()).unwrap();
            let det = grenet_matrix(m, false).unwrap().det_sym(caps().det_nodes).unwrap();
            let sign = if m % 2 == 1 { BigInt::one() } else { BigInt::from(-1) };
            assert_eq!(det, per.scale(&sign), "m = {m}");
        }
    }

    #[test]
    fn verification_examples() {
        let per3 = permanent_sym(3, &caps()).unwrap();
        let v = verify_representation(&grenet_literal_matrix(), &per3, VerifyMode::Symbolic, &caps()).unwrap();
        assert!(v.equal);
        let per2 = permanent_sym(2, &caps()).unwrap();
        let v = verify_representation(&AffineMatrix::identity(2), &per2, VerifyMode::Symbolic, &caps()).unwrap();
        assert!(!v.equal);
        let per4 = permanent_sym(4, &caps()).unwrap();
        let mode = VerifyMode::Modular { trials: 10, seed: 7 };
        let v = verify_representation(&grenet_matrix(4, true).unwrap(), &per4, mode, &caps()).unwrap();
        assert!(v.equal);
        assert!(v.failure_bound < 1e-150);
        let v = verify_representation(&grenet_matrix(4, false).unwrap(), &per4, mode, &caps()).unwrap();
        assert!(!v.equal);
    }

    #[test]
    fn grenet_five_against_ryser() {
        let a = grenet_matrix(5, false).unwrap();
        assert_eq!(a.size(), 31);
        for trial in 0..20 {
            let point = random_residues(25, 1000 + trial, MODULUS);
            let det = a.det_eval_mod(&point, MODULUS).unwrap();
            // (-1)^4 = 1
            assert_eq!(det, permanent_mod(&point, 5, MODULUS));
        }
        let b = grenet_matrix(4, false).unwrap();
        let point = random_residues(16, 3, MODULUS);
        let det = b.det_eval_mod(&point, MODULUS).unwrap();
        assert_eq!(det, sub_mod(0, permanent_mod(&point, 4, MODULUS), MODULUS));
    }

    #[test]
    fn modulus_is_prime() {
        // deterministic Miller–Rabin for 64-bit inputs
        let n = MODULUS;
        let mut d = n - 1;
        let mut r = 0;
        while d % 2 == 0 {
            d /= 2;
            r += 1;
        }
        use crate::polynomials::poly::{mul_mod, pow_mod};
        for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = pow_mod(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            let mut witness = true;
            for _ in 1..r {
                x = mul_mod(x, x, n);
                if x == n - 1 {
                    witness = false;
                    break;
                }
            }
            assert!(!witness, "{a} witnesses compositeness");
        }
        assert!(MODULUS > 1 << 61);
    }

    #[test]
    fn padding() {
        let per2 = permanent_sym(2, &caps()).unwrap();
        assert_eq!(pad_polynomial(&per2, 2, 4).unwrap(), per2);
        let padded = pad_polynomial(&per2, 3, 4).unwrap();
        assert!(padded.is_homogeneous_of(3));
        assert_eq!(padded, &SparsePoly::var(4) * &per2);
        let per3 = permanent_sym(3, &caps()).unwrap();
        let p7 = pad_polynomial(&per3, 7, 9).unwrap();
        assert!(p7.is_homogeneous_of(7));
        assert_eq!(p7, &SparsePoly::var(9).pow(4) * &per3);
        assert!(pad_polynomial(&per3, 2, 9).is_err());
        let inhomogeneous = &per2 + &SparsePoly::var(0);
        assert!(pad_polynomial(&inhomogeneous, 3, 4).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn padding_is_homogeneous(m in 1u32..4, extra in 0u32..4) {
                let per = permanent_sym(m, &Caps::default()).unwrap();
                let t = m * m;
                let padded = pad_polynomial(&per, m + extra, t).unwrap();
                prop_assert!(padded.is_homogeneous_of(m + extra));
                prop_assert_eq!(padded.num_terms(), per.num_terms());
            }
        }
    }
}
