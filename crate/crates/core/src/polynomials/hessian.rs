//! Hessians, exact ranks, the Hessian-rank lower bound for determinantal
//! complexity, and symmetry checks of the determinant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::determinantal::{determinant_sym, permanent_sym, var_index};
use super::matrix::{eval_poly_matrix, integer_det, PolyMatrix, RationalMatrix};
use super::poly::SparsePoly;
use crate::caps::Caps;
use crate::error::{Error, Result};

/// `[∂²f / ∂x_a ∂x_b]` over `vars` in the given order.
pub fn hessian(f: &SparsePoly, vars: &[u32]) -> PolyMatrix {
    let firsts: Vec<SparsePoly> = vars.iter().map(|&v| f.derivative(v)).collect();
    let k = vars.len();
    let mut h = vec![vec![SparsePoly::zero(); k]; k];
    for a in 0..k {
        for b in a..k {
            let d = firsts[a].derivative(vars[b]);
            h[b][a] = d.clone();
            h[a][b] = d;
        }
    }
    h
}

/// Exact rank of `h` evaluated at `point` (indexed by variable).
pub fn rank_at(h: &PolyMatrix, point: &[BigRational]) -> Result<usize> {
    Ok(eval_poly_matrix(h, point)?.rank())
}

/// Variables `x_{11}, ..., x_{nn}` in row-major order.
pub fn matrix_vars(n: usize) -> Vec<u32> {
    (0..(n * n) as u32).collect()
}

/// An `n × n` 0/1 matrix, row-major, with ones on the listed diagonal
/// positions: a rank-`s` normal form when `s` positions are given.
pub fn normal_form_point(n: usize, ones: &[usize]) -> Vec<BigRational> {
    let mut point = vec![BigRational::zero(); n * n];
    for &i in ones {
        point[i * n + i] = BigRational::one();
    }
    point
}

/// Rank of `H_det` at every placement of `s` diagonal ones in an `n × n`
/// matrix, in lexicographic order of placements.
pub fn det_hessian_ranks(n: usize, s: usize, caps: &Caps) -> Result<Vec<(Vec<usize>, usize)>> {
    let det = determinant_sym(n as u32, caps)?;
    let h = hessian(&det, &matrix_vars(n));
    combinations(n, s)
        .into_iter()
        .map(|ones| {
            let r = rank_at(&h, &normal_form_point(n, &ones))?;
            Ok((ones, r))
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The Hessian-rank certificate for `dc(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MignonRessayreReport {
    pub m: u32,
    /// `M`: all ones except `1 - m` in the top-left corner.
    pub matrix: Vec<Vec<i64>>,
    pub permanent: BigInt,
    pub hessian_rank: usize,
    /// `⌈rank / 2⌉`, a lower bound on `dc(m)`: the determinant's Hessian has
    /// rank at most `2n` at singular points.
    pub implied_bound: usize,
}

/// Builds `M`, checks `per(M) = 0` and `rank H_per(M) = m²`, and reports the
/// implied bound. A failed check is an [`Error::Arithmetic`].
pub fn mignon_ressayre_certificate(m: u32, caps: &Caps) -> Result<MignonRessayreReport> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("the certificate needs m ≥ 2, got {m}")));
    }
    let size = m as usize;
    let matrix: Vec<Vec<i64>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == 0 && j == 0 { 1 - m as i64 } else { 1 })
                .collect()
        })
        .collect();
    let point: Vec<BigRational> = matrix
        .iter()
        .flatten()
        .map(|&v| BigRational::from_integer(v.into()))
        .collect();
    let per = permanent_sym(m, caps)?;
    let value = per.eval(&point)?;
    if !value.is_zero() {
        return Err(Error::Arithmetic(format!("per(M) = {value} for m = {m}")));
    }
    let rank = rank_at(&hessian(&per, &matrix_vars(size)), &point)?;
    if rank != size * size {
        return Err(Error::Arithmetic(format!(
            "rank H_per(M) = {rank}, expected {}",
            size * size
        )));
    }
    Ok(MignonRessayreReport {
        m,
        matrix,
        permanent: value.to_integer(),
        hessian_rank: rank,
        implied_bound: rank.div_ceil(2),
    })
}

/// Checks `H_F(x) = Lᵀ H_f(Lx + b) L` for `F(x) = f(Lx + b)` at `trials`
/// random integer points. `f` is read in the variables `0..N` where `N` is
/// the number of rows of `L`; `F` lives in `0..M`.
pub fn hessian_transform_check(
    f: &SparsePoly,
    l: &[Vec<i64>],
    b: &[i64],
    trials: u32,
    seed: u64,
) -> Result<bool> {
    let rows = l.len();
    let cols = l.first().map_or(0, Vec::len);
    if b.len() != rows || l.iter().any(|r| r.len() != cols) {
        return Err(Error::SizeMismatch("L and b have inconsistent shapes".into()));
    }
    if f.variables().iter().any(|&v| v as usize >= rows) {
        return Err(Error::SizeMismatch(format!(
            "f uses variables beyond the {rows} rows of L"
        )));
    }
    let images: Vec<SparsePoly> = (0..rows)
        .map(|i| {
            SparsePoly::affine(
                b[i],
                l[i].iter().enumerate().map(|(j, &a)| (j as u32, BigInt::from(a))),
            )
        })
        .collect();
    let composed = f.compose(&images)?;
    let h_big = hessian(&composed, &(0..cols as u32).collect::<Vec<_>>());
    let h_small = hessian(f, &(0..rows as u32).collect::<Vec<_>>());
    let lmat = RationalMatrix::from_integers(l)?;
    let lt = lmat.transpose();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x: Vec<i64> = (0..cols).map(|_| rng.gen_range(-20..=20)).collect();
        let xq: Vec<BigRational> = x.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        let y: Vec<BigRational> = (0..rows)
            .map(|i| {
                let s: i64 = b[i] + l[i].iter().zip(&x).map(|(a, v)| a * v).sum::<i64>();
                BigRational::from_integer(s.into())
            })
            .collect();
        let lhs = eval_poly_matrix(&h_big, &xq)?;
        let rhs = lt.mul(&eval_poly_matrix(&h_small, &y)?)?.mul(&lmat)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A random integer matrix of determinant one: the product of `shears`
/// elementary shears `I + c·E_{ij}` (`i ≠ j`).
pub fn random_unimodular(n: usize, shears: usize, rng: &mut impl Rng) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    if n < 2 {
        return m;
    }
    for _ in 0..shears {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-3i64..=3));
        // row_i += c · row_j
        for k in 0..n {
            let delta = &m[j][k] * &c;
            m[i][k] += delta;
        }
    }
    m
}

fn int_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn transpose(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// `det(AXB) = det(X)` and `det(Xᵀ) = det(X)`, exactly.
pub fn preserves_determinant(a: &[Vec<BigInt>], b: &[Vec<BigInt>], x: &[Vec<BigInt>]) -> bool {
    let dx = integer_det(x.to_vec());
    let axb = int_mul(&int_mul(a, x), b);
    integer_det(axb) == dx && integer_det(transpose(x)) == dx
}

/// Draws `trials` triples `(A, B, X)` with `A, B ∈ SL_n(Z)` built from 50
/// shears each and `X` uniform in `[-9, 9]^{n×n}`, and checks
/// [`preserves_determinant`] on all of them.
pub fn stabilizer_check(n: usize, trials: u32, seed: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("stabilizer check needs n ≥ 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let a = random_unimodular(n, 50, &mut rng);
        let b = random_unimodular(n, 50, &mut rng);
        let x: Vec<Vec<BigInt>> = (0..n)
            .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
            .collect();
        if !preserves_determinant(&a, &b, &x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Variable index of `x_{ij}` for use with [`hessian`] on `n × n` matrices.
pub fn entry_var(n: usize, i: usize, j: usize) -> u32 {
    var_index(n, i, j)
}
