//! Matrices of affine forms, exact rational matrices and elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use super::poly::{inv_mod, mul_mod, sub_mod, SparsePoly};
use crate::error::{Error, Result};

/// Square matrix whose entries are polynomials of degree at most one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineMatrix {
    size: usize,
    entries: Vec<Vec<SparsePoly>>,
}

impl AffineMatrix {
    pub fn new(entries: Vec<Vec<SparsePoly>>) -> Result<Self> {
        let size = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries in a matrix of size {size}",
                    row.len()
                )));
            }
            for (j, e) in row.iter().enumerate() {
                if e.degree() > 1 {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i},{j}) has degree {}",
                        e.degree()
                    )));
                }
            }
        }
        Ok(AffineMatrix { size, entries })
    }

    pub fn identity(size: usize) -> Self {
        let entries = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| if i == j { SparsePoly::one() } else { SparsePoly::zero() })
                    .collect()
            })
            .collect();
        AffineMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[Vec<SparsePoly>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparsePoly {
        &self.entries[i][j]
    }

    /// Multiplies row `i` by `c`.
    pub fn scale_row(&mut self, i: usize, c: &BigInt) {
        for e in &mut self.entries[i] {
            *e = e.scale(c);
        }
    }

    pub fn num_nonzero(&self) -> usize {
        self.entries.iter().flatten().filter(|e| !e.is_zero()).count()
    }

    /// Symbolic determinant as a signed sum over permutations, expanding only
    /// along structurally nonzero entries. Rows are chosen most-constrained
    /// first and dead branches are cut as soon as some row has no free column.
    /// Fails once more than `node_cap` search nodes have been visited.
    pub fn det_sym(&self, node_cap: u64) -> Result<SparsePoly> {
        let n = self.size;
        let support: Vec<Vec<usize>> = self
            .entries
            .iter()
            .map(|row| (0..n).filter(|&j| !row[j].is_zero()).collect())
            .collect();
        let mut search = DetSearch {
            matrix: self,
            support,
            perm: vec![usize::MAX; n],
            col_used: vec![false; n],
            nodes: 0,
            node_cap,
            total: SparsePoly::zero(),
        };
        search.expand(0, SparsePoly::one())?;
        Ok(search.total)
    }

    /// Substitutes `point` (indexed by variable) modulo `p`.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Result<Vec<Vec<u64>>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.eval_mod(point, p)).collect())
            .collect()
    }

    /// `det(A(point)) mod p`.
    pub fn det_eval_mod(&self, point: &[u64], p: u64) -> Result<u64> {
        Ok(det_mod(self.eval_mod(point, p)?, p))
    }
}

impl<'de> Deserialize<'de> for AffineMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            size: usize,
            entries: Vec<Vec<SparsePoly>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.entries.len() != repr.size {
            return Err(D::Error::custom(format!(
                "size {} but {} rows",
                repr.size,
                repr.entries.len()
            )));
        }
        AffineMatrix::new(repr.entries).map_err(D::Error::custom)
    }
}

struct DetSearch<'a> {
    matrix: &'a AffineMatrix,
    support: Vec<Vec<usize>>,
    perm: Vec<usize>,
    col_used: Vec<bool>,
    nodes: u64,
    node_cap: u64,
    total: SparsePoly,
}

impl DetSearch<'_> {
    fn expand(&mut self, depth: usize, product: SparsePoly) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::ResourceCap {
                what: "symbolic determinant search nodes",
                requested: self.nodes as u128,
                limit: self.node_cap as u128,
            });
        }
        let n = self.matrix.size;
        if depth == n {
            let sign = permutation_parity(&self.perm);
            self.total = if sign {
                &self.total - &product
            } else {
                &self.total + &product
            };
            return Ok(());
        }
        // most constrained unassigned row
        let mut best: Option<(usize, usize)> = None;
        for r in 0..n {
            if self.perm[r] != usize::MAX {
                continue;
            }
            let free = self.support[r].iter().filter(|&&c| !self.col_used[c]).count();
            if free == 0 {
                return Ok(());
            }
            if best.is_none_or(|(_, f)| free < f) {
                best = Some((r, free));
            }
        }
        let (row, _) = best.expect("an unassigned row exists below full depth");
        let choices: Vec<usize> = self.support[row]
            .iter()
            .copied()
            .filter(|&c| !self.col_used[c])
            .collect();
        for c in choices {
            self.perm[row] = c;
            self.col_used[c] = true;
            let next = &product * self.matrix.entry(row, c);
            self.expand(depth + 1, next)?;
            self.col_used[c] = false;
            self.perm[row] = usize::MAX;
        }
        Ok(())
    }
}

/// True for odd permutations.
fn permutation_parity(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Determinant modulo a prime by Gaussian elimination.
pub fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = sub_mod(0, det, p);
        }
        det = mul_mod(det, m[col][col], p);
        let inv = inv_mod(m[col][col], p);
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let f = mul_mod(m[r][col], inv, p);
            for j in col..n {
                let delta = mul_mod(f, m[col][j], p);
                m[r][j] = sub_mod(m[r][j], delta, p);
            }
        }
    }
    det
}

/// Dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut out = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Rows scaled by the lcm of their denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
            })
            .collect()
    }

    /// Exact rank by fraction-free elimination with full pivoting.
    pub fn rank(&self) -> usize {
        bareiss(self.integer_rows(), self.cols).0
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let mut scale = BigInt::one();
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            scale *= row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        }
        let det = integer_det(self.integer_rows());
        Ok(BigRational::new(det, scale))
    }
}

/// Determinant of a square integer matrix (Bareiss).
pub fn integer_det(rows: Vec<Vec<BigInt>>) -> BigInt {
    let n = rows.len();
    let (rank, det) = bareiss(rows, n);
    if rank < n {
        BigInt::zero()
    } else {
        det
    }
}

/// Fraction-free elimination with full pivoting. Returns the rank and, for a
/// full-rank square input, the determinant.
fn bareiss(mut m: Vec<Vec<BigInt>>, cols: usize) -> (usize, BigInt) {
    let rows = m.len();
    let mut col_order: Vec<usize> = (0..cols).collect();
    let mut prev = BigInt::one();
    let mut negate = false;
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        // smallest nonzero magnitude in the trailing block keeps entries small
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = &m[i][col_order[j]];
                if v.is_zero() {
                    continue;
                }
                if pivot.is_none_or(|(pi, pj)| v.abs() < m[pi][col_order[pj]].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != k {
            m.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            col_order.swap(pj, k);
            negate = !negate;
        }
        rank += 1;
        let pk = m[k][col_order[k]].clone();
        for i in k + 1..rows {
            let lead = m[i][col_order[k]].clone();
            for j in k + 1..cols {
                let c = col_order[j];
                let v = (&pk * &m[i][c] - &lead * &m[k][c]) / &prev;
                m[i][c] = v;
            }
            m[i][col_order[k]] = BigInt::zero();
        }
        prev = pk;
    }
    let det = if rank == rows && rows == cols {
        if negate {
            -prev
        } else {
            prev
        }
    } else {
        BigInt::zero()
    };
    (rank, det)
}

/// Matrix of polynomials, e.g. a Hessian.
pub type PolyMatrix = Vec<Vec<SparsePoly>>;

/// Entrywise evaluation of a polynomial matrix.
pub fn eval_poly_matrix(m: &PolyMatrix, point: &[BigRational]) -> Result<RationalMatrix> {
    RationalMatrix::from_rows(
        m.iter()
            .map(|row| row.iter().map(|e| e.eval(point)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
    )
}
