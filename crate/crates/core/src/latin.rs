//! Latin squares, column signs and the Alon–Tarsi statistic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::specht::permutations;

/// An `n × n` grid over `[n]` (1-based) with every row and column a
/// permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct LatinSquare {
    rows: Vec<Vec<u32>>,
}

impl TryFrom<Vec<Vec<u32>>> for LatinSquare {
    type Error = Error;

    fn try_from(rows: Vec<Vec<u32>>) -> Result<Self> {
        LatinSquare::new(rows)
    }
}

impl From<LatinSquare> for Vec<Vec<u32>> {
    fn from(t: LatinSquare) -> Self {
        t.rows
    }
}

impl LatinSquare {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        fn is_perm(n: usize, mut it: impl Iterator<Item = u32>) -> bool {
            let mut seen = vec![false; n];
            it.all(|v| {
                let ok = v >= 1 && v as usize <= n && !seen[v as usize - 1];
                if ok {
                    seen[v as usize - 1] = true;
                }
                ok
            })
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("Latin square must be square".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if !is_perm(n, r.iter().copied()) {
                return Err(Error::InvalidInput(format!("row {} is not a permutation of [{n}]", i + 1)));
            }
        }
        for j in 0..n {
            if !is_perm(n, rows.iter().map(|r| r[j])) {
                return Err(Error::InvalidInput(format!("column {} is not a permutation of [{n}]", j + 1)));
            }
        }
        Ok(LatinSquare { rows })
    }

    /// Row `i` is `1..=n` shifted right by `i` places; for `n = 4` the rows
    /// are 1234 / 4123 / 3412 / 2341.
    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| ((j + n - i) % n) as u32 + 1).collect())
            .collect();
        LatinSquare { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Entry in row `i`, column `j`, both 1-based.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.rows[i - 1][j - 1]
    }

    /// Column `j` (1-based) as the permutation `i ↦ T(i, j)`.
    pub fn column(&self, j: usize) -> Vec<u32> {
        self.rows.iter().map(|r| r[j - 1]).collect()
    }

    pub fn column_signs(&self) -> Vec<i8> {
        (1..=self.order()).map(|j| permutation_sign(&self.column(j))).collect()
    }

    /// Product of the column signs.
    pub fn column_sign(&self) -> i8 {
        self.column_signs().iter().product()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a - 1, b - 1);
    }
}

/// Sign of a permutation of `[n]` given in one-line notation, by cycle
/// decomposition.
pub fn permutation_sign(perm: &[u32]) -> i8 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut even_cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize - 1;
            len += 1;
        }
        if len % 2 == 0 {
            even_cycles += 1;
        }
    }
    if even_cycles % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Signed count of all Latin squares of one order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlonTarsiReport {
    pub order: u32,
    pub even: u64,
    pub odd: u64,
    pub difference: i64,
}

/// Number of Latin squares of order `n`.
pub fn enumerate_latin(n: u32, caps: &Caps) -> Result<u64> {
    let r = alon_tarsi_statistic(n, caps)?;
    Ok(r.even + r.odd)
}

/// `#column-even − #column-odd` over all Latin squares of order `n`.
pub fn alon_tarsi_statistic(n: u32, caps: &Caps) -> Result<AlonTarsiReport> {
    check("Latin square order", n as u128, caps.latin_order as u128)?;
    if n == 0 {
        return Err(Error::InvalidInput("Latin square order must be ≥ 1".into()));
    }
    let (even, odd) = permutations(n as usize)
        .into_par_iter()
        .map(|first| {
            let mut b = Backtrack::new(n as usize);
            b.place_row(&first.iter().map(|&v| v as u32 + 1).collect::<Vec<_>>());
            let mut tally = (0u64, 0u64);
            b.run(&mut |rows| {
                if square_sign(rows) > 0 {
                    tally.0 += 1;
                } else {
                    tally.1 += 1;
                }
            });
            tally
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(AlonTarsiReport {
        order: n,
        even,
        odd,
        difference: even as i64 - odd as i64,
    })
}

/// Calls `f` on every Latin square of order `n`, in lexicographic order of
/// rows.
pub fn for_each_latin(n: u32, caps: &Caps, mut f: impl FnMut(&LatinSquare)) -> Result<()> {
    check("Latin square order", n as u128, caps.latin_order as u128)?;
    let mut b = Backtrack::new(n as usize);
    b.run(&mut |rows| {
        f(&LatinSquare { rows: rows.to_vec() });
    });
    Ok(())
}

fn square_sign(rows: &[Vec<u32>]) -> i8 {
    let n = rows.len();
    let mut col = vec![0u32; n];
    let mut sign = 1;
    for j in 0..n {
        for (i, r) in rows.iter().enumerate() {
            col[i] = r[j];
        }
        sign *= permutation_sign(&col);
    }
    sign
}

struct Backtrack {
    n: usize,
    rows: Vec<Vec<u32>>,
    /// bit `v` of `col_used[j]` is set once value `v` appears in column `j`
    col_used: Vec<u32>,
}

impl Backtrack {
    fn new(n: usize) -> Self {
        Backtrack {
            n,
            rows: Vec::with_capacity(n),
            col_used: vec![0; n],
        }
    }

    fn place_row(&mut self, row: &[u32]) {
        for (j, &v) in row.iter().enumerate() {
            self.col_used[j] |= 1 << v;
        }
        self.rows.push(row.to_vec());
    }

    fn pop_row(&mut self) {
        let row = self.rows.pop().expect("nonempty");
        for (j, &v) in row.iter().enumerate() {
            self.col_used[j] &= !(1 << v);
        }
    }

    fn run(&mut self, f: &mut dyn FnMut(&[Vec<u32>])) {
        if self.rows.len() == self.n {
            f(&self.rows);
            return;
        }
        let mut row = vec![0u32; self.n];
        self.fill(0, 0, &mut row, f);
    }

    fn fill(&mut self, j: usize, row_used: u32, row: &mut Vec<u32>, f: &mut dyn FnMut(&[Vec<u32>])) {
        if j == self.n {
            let r = row.clone();
            self.place_row(&r);
            self.run(f);
            self.pop_row();
            return;
        }
        for v in 1..=self.n as u32 {
            let bit = 1 << v;
            if row_used & bit == 0 && self.col_used[j] & bit == 0 {
                row[j] = v;
                self.fill(j + 1, row_used | bit, row, f);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(LatinSquare::new(vec![vec![1]]).is_ok());
        assert!(LatinSquare::new(vec![vec![1, 2], vec![1, 2]]).is_err());
        assert!(LatinSquare::new(vec![vec![1, 2], vec![2]]).is_err());
        assert!(LatinSquare::new(vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(serde_json::from_str::<LatinSquare>("[[1,1],[2,2]]").is_err());
    }

    #[test]
    fn cyclic_squares_are_valid() {
        for n in 1..=7 {
            let t = LatinSquare::cyclic(n);
            assert!(LatinSquare::new(t.rows().to_vec()).is_ok());
        }
    }

    #[test]
    fn sign_examples() {
        assert_eq!(LatinSquare::new(vec![vec![1]]).unwrap().column_sign(), 1);
        let two = LatinSquare::new(vec![vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(two.column_signs(), vec![1, -1]);
        assert_eq!(two.column_sign(), -1);
    }

    #[test]
    fn cyclic_four_columns() {
        let t = LatinSquare::cyclic(4);
        assert_eq!(
            t.rows(),
            &[vec![1, 2, 3, 4], vec![4, 1, 2, 3], vec![3, 4, 1, 2], vec![2, 3, 4, 1]]
        );
        // 1432 is a transposition, 2143 two transpositions, 3214 a
        // transposition, 4321 two transpositions
        assert_eq!(t.column(1), vec![1, 4, 3, 2]);
        assert_eq!(t.column_signs(), vec![-1, 1, -1, 1]);
        assert_eq!(t.column_sign(), 1);
    }

    #[test]
    fn permutation_signs_match_inversions() {
        for n in 1..=6 {
            for p in permutations(n) {
                let one_based: Vec<u32> = p.iter().map(|&v| v as u32 + 1).collect();
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let expected = if inversions % 2 == 0 { 1 } else { -1 };
                assert_eq!(permutation_sign(&one_based), expected);
            }
        }
    }

    #[test]
    fn counts() {
        let caps = Caps::default();
        let counts: Vec<u64> = (1..=4).map(|n| enumerate_latin(n, &caps).unwrap()).collect();
        assert_eq!(counts, vec![1, 2, 12, 576]);
    }

    #[test]
    fn alon_tarsi_values() {
        let caps = Caps::default();
        assert_eq!(alon_tarsi_statistic(1, &caps).unwrap().difference, 1);
        let two = alon_tarsi_statistic(2, &caps).unwrap();
        assert_eq!((two.even, two.odd, two.difference), (0, 2, -2));
        assert_eq!(alon_tarsi_statistic(3, &caps).unwrap().difference, 0);
        // frozen from exhaustive enumeration
        let four = alon_tarsi_statistic(4, &caps).unwrap();
        assert_eq!((four.even, four.odd, four.difference), (576, 0, 576));
        let five = alon_tarsi_statistic(5, &caps).unwrap();
        assert_eq!(five.even + five.odd, 161_280);
        assert_eq!(five.difference, 0);
    }

    #[test]
    fn order_cap() {
        let err = alon_tarsi_statistic(6, &Caps::default()).unwrap_err();
        assert!(err.is_resource_cap());
        assert!(alon_tarsi_statistic(0, &Caps::default()).is_err());
    }

    #[test]
    fn enumeration_is_valid_and_matches_count() {
        let caps = Caps::default();
        for n in 1..=4 {
            let mut seen = 0u64;
            let mut signed = 0i64;
            for_each_latin(n, &caps, |t| {
                assert!(LatinSquare::new(t.rows().to_vec()).is_ok());
                seen += 1;
                signed += t.column_sign() as i64;
            })
            .unwrap();
            let r = alon_tarsi_statistic(n, &caps).unwrap();
            assert_eq!(seen, r.even + r.odd);
            assert_eq!(signed, r.difference);
        }
    }

    #[test]
    fn row_swap_flips_sign_by_parity_of_order() {
        let caps = Caps::default();
        for n in 2..=4u32 {
            let flip = if n % 2 == 0 { 1 } else { -1 };
            for_each_latin(n, &caps, |t| {
                for a in 1..=n as usize {
                    for b in a + 1..=n as usize {
                        let mut s = t.clone();
                        s.swap_rows(a, b);
                        assert_eq!(s.column_sign(), flip * t.column_sign());
                    }
                }
            })
            .unwrap();
        }
    }

    #[test]
    fn json_rows() {
        let t = LatinSquare::new(vec![vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(serde_json::to_string(&t).unwrap(), "[[1,2],[2,1]]");
    }
}
