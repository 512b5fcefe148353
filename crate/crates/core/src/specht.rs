//! Young's natural representation, built literally from polytabloids.
//!
//! Used only as an independent check on the character-based Kronecker
//! coefficient: it never touches the Murnaghan–Nakayama rule. The module
//! `[λ]` is realised inside the permutation module on tabloids, spanned by the
//! standard polytabloids `e_T`; the trace of a permutation is read off from
//! the coordinates of `σ·e_T = e_{σT}` in that basis.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Sign of a permutation given as an image vector.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// A filling of the Young diagram by `0..N`, row by row.
type Tableau = Vec<Vec<usize>>;

fn standard_tableaux(shape: &[u32]) -> Vec<Tableau> {
    fn go(shape: &[u32], rows: &mut Vec<Vec<usize>>, next: usize, total: usize, out: &mut Vec<Tableau>) {
        if next == total {
            out.push(rows.clone());
            return;
        }
        for r in 0..shape.len() {
            let len = rows[r].len();
            if len < shape[r] as usize && (r == 0 || rows[r - 1].len() > len) {
                rows[r].push(next);
                go(shape, rows, next + 1, total, out);
                rows[r].pop();
            }
        }
    }
    let total: u32 = shape.iter().sum();
    let mut out = Vec::new();
    go(shape, &mut vec![Vec::new(); shape.len()], 0, total as usize, &mut out);
    out
}

/// The tabloid of a tableau: the row index of every entry.
fn tabloid(t: &Tableau, n: usize) -> Vec<u8> {
    let mut rows = vec![0u8; n];
    for (r, row) in t.iter().enumerate() {
        for &e in row {
            rows[e] = r as u8;
        }
    }
    rows
}

/// `e_T = Σ_{σ ∈ C_T} sgn(σ) {σT}` as a sparse vector over tabloids.
fn polytabloid(t: &Tableau, n: usize) -> HashMap<Vec<u8>, i64> {
    let width = t[0].len();
    let columns: Vec<Vec<usize>> = (0..width)
        .map(|c| t.iter().filter(|row| row.len() > c).map(|row| row[c]).collect())
        .collect();
    let mut out: HashMap<Vec<u8>, i64> = HashMap::new();
    let column_perms: Vec<Vec<Vec<usize>>> =
        columns.iter().map(|col| permutations(col.len())).collect();
    let mut choice = vec![0usize; width];
    loop {
        let mut filled = t.clone();
        let mut sign = 1i64;
        for (c, col) in columns.iter().enumerate() {
            let perm = &column_perms[c][choice[c]];
            sign *= permutation_sign(perm) as i64;
            for (r, &src) in perm.iter().enumerate() {
                filled[r][c] = col[src];
            }
        }
        *out.entry(tabloid(&filled, n)).or_default() += sign;
        // odometer over the column groups
        let mut c = 0;
        loop {
            if c == width {
                out.retain(|_, v| *v != 0);
                return out;
            }
            choice[c] += 1;
            if choice[c] < column_perms[c].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
    }
}

/// Traces of every permutation of `0..N` (in [`permutations`] order) acting
/// on the Specht module of shape `λ`.
pub fn specht_traces(lambda: &Partition) -> Vec<i64> {
    let n = lambda.size() as usize;
    let shape = lambda.parts();
    if n == 0 {
        return vec![1];
    }
    let basis = standard_tableaux(shape);
    let vectors: Vec<HashMap<Vec<u8>, i64>> = basis.iter().map(|t| polytabloid(t, n)).collect();

    // pick tabloid coordinates on which the basis is invertible
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    for v in &vectors {
        for k in v.keys() {
            let next = index.len();
            index.entry(k.clone()).or_insert(next);
        }
    }
    let dense = |v: &HashMap<Vec<u8>, i64>| -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); index.len()];
        for (k, c) in v {
            if let Some(&i) = index.get(k) {
                out[i] = BigRational::from_integer(BigInt::from(*c));
            }
        }
        out
    };
    let columns: Vec<Vec<BigRational>> = vectors.iter().map(dense).collect();
    let solver = CoordinateSolver::new(&columns);

    permutations(n)
        .into_iter()
        .map(|perm| {
            basis
                .iter()
                .enumerate()
                .map(|(j, t)| {
                    let moved: Tableau =
                        t.iter().map(|row| row.iter().map(|&e| perm[e]).collect()).collect();
                    let image = polytabloid(&moved, n);
                    // the image lies in the span, so tabloids outside `index`
                    // carry no information the pivot rows lack
                    let coords = solver.solve(&dense(&image));
                    coords[j].clone()
                })
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .map(|tr| {
            assert!(tr.is_integer(), "non-integral trace");
            tr.to_integer().to_i64().expect("small trace")
        })
        .collect()
}

/// Solves `B c = v` for vectors `v` known to lie in the column span of `B`
/// (full column rank), by selecting pivot rows once.
struct CoordinateSolver {
    pivot_rows: Vec<usize>,
    inverse: Vec<Vec<BigRational>>,
}

impl CoordinateSolver {
    fn new(columns: &[Vec<BigRational>]) -> Self {
        let k = columns.len();
        let rows = columns.first().map_or(0, |c| c.len());
        // greedy pivot row selection via elimination on B^T
        let mut work: Vec<Vec<BigRational>> = columns.to_vec();
        let mut pivot_rows = Vec::with_capacity(k);
        for col in 0..k {
            let r = (0..rows)
                .find(|&r| !work[col][r].is_zero() && !pivot_rows.contains(&r))
                .expect("polytabloids are linearly independent");
            pivot_rows.push(r);
            let pivot = work[col][r].clone();
            for other in col + 1..k {
                if work[other][r].is_zero() {
                    continue;
                }
                let factor = &work[other][r] / &pivot;
                for i in 0..rows {
                    let delta = &work[col][i] * &factor;
                    work[other][i] -= delta;
                }
            }
        }
        let square: Vec<Vec<BigRational>> = pivot_rows
            .iter()
            .map(|&r| columns.iter().map(|c| c[r].clone()).collect())
            .collect();
        CoordinateSolver {
            pivot_rows,
            inverse: invert(square),
        }
    }

    fn solve(&self, v: &[BigRational]) -> Vec<BigRational> {
        let rhs: Vec<&BigRational> = self.pivot_rows.iter().map(|&r| &v[r]).collect();
        self.inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&rhs)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * *b)
            })
            .collect()
    }
}

fn invert(mut m: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero()).expect("invertible");
        m.swap(col, p);
        inv.swap(col, p);
        let pivot = m[col][col].clone();
        for j in 0..n {
            m[col][j] = &m[col][j] / &pivot;
            inv[col][j] = &inv[col][j] / &pivot;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let a = &m[col][j] * &f;
                    m[r][j] -= a;
                    let b = &inv[col][j] * &f;
                    inv[r][j] -= b;
                }
            }
        }
    }
    inv
}

/// Largest degree accepted by [`invariant_dimension`].
pub const MAX_ORACLE_DEGREE: u32 = 5;

/// `dim([λ]⊗[μ]⊗[ν])^{S_N}` as the trace of the averaging projector,
/// `(1/N!) Σ_σ tr_λ(σ) tr_μ(σ) tr_ν(σ)`.
pub fn invariant_dimension(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    let n = lambda.size();
    if mu.size() != n || nu.size() != n {
        return Err(Error::SizeMismatch(format!(
            "sizes {}, {}, {} differ",
            n,
            mu.size(),
            nu.size()
        )));
    }
    if n > MAX_ORACLE_DEGREE {
        return Err(Error::ResourceCap {
            what: "explicit representation oracle degree",
            requested: n as u128,
            limit: MAX_ORACLE_DEGREE as u128,
        });
    }
    let (a, b, c) = (specht_traces(lambda), specht_traces(mu), specht_traces(nu));
    let total: i64 = a.iter().zip(&b).zip(&c).map(|((x, y), z)| x * y * z).sum();
    let order = a.len() as i64;
    if total % order != 0 || total < 0 {
        return Err(Error::Arithmetic(format!(
            "projector trace {total}/{order} is not a natural number"
        )));
    }
    Ok((total / order) as u64)
}
