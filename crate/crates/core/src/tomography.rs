//! 3D-relations, their marginals, and the counts `t(λ,μ,ν)` and `p(λ,μ,ν)`
//! that sandwich Kronecker coefficients.
//!
//! Marginals are indexed from 0. Partitions enter only through their
//! conjugates: `t` counts relations with x-, y-, z-marginals `λ'`, `μ'`, `ν'`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::partition::Partition;

pub type Point = (u32, u32, u32);

/// A finite subset of `ℕ³`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Relation3D {
    points: BTreeSet<Point>,
}

impl Relation3D {
    pub fn new(points: impl IntoIterator<Item = Point>) -> Self {
        Relation3D {
            points: points.into_iter().collect(),
        }
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    /// The simplex `P(s) = {x + y + z ≤ s - 1}`.
    pub fn simplex(s: u32) -> Self {
        let mut pts = Vec::new();
        for x in 0..s {
            for y in 0..s - x {
                for z in 0..s - x - y {
                    pts.push((x, y, z));
                }
            }
        }
        Relation3D::new(pts)
    }

    /// Downward closed in the product order. Checking the three unit
    /// predecessors of every point suffices.
    pub fn is_pyramid(&self) -> bool {
        self.points.iter().all(|&(x, y, z)| {
            (x == 0 || self.contains(&(x - 1, y, z)))
                && (y == 0 || self.contains(&(x, y - 1, z)))
                && (z == 0 || self.contains(&(x, y, z - 1)))
        })
    }

    /// `|R| h_R = Σ_{(x,y,z) ∈ R} (x + y + z)`.
    pub fn weighted_height(&self) -> u64 {
        self.points.iter().map(|&(x, y, z)| (x + y + z) as u64).sum()
    }

    /// `h_R`, the barycenter's coordinate sum; `None` for the empty relation.
    pub fn height(&self) -> Option<BigRational> {
        if self.is_empty() {
            return None;
        }
        Some(BigRational::new(
            BigInt::from(self.weighted_height()),
            BigInt::from(self.len()),
        ))
    }

    pub fn marginals(&self) -> MarginalTriple {
        let dim = |f: fn(&Point) -> u32| -> Vec<u32> {
            let len = self.points.iter().map(|p| f(p) + 1).max().unwrap_or(0);
            let mut out = vec![0; len as usize];
            for p in &self.points {
                out[f(p) as usize] += 1;
            }
            out
        };
        MarginalTriple {
            xm: dim(|p| p.0),
            ym: dim(|p| p.1),
            zm: dim(|p| p.2),
        }
    }
}

/// Slice counts along each axis, indexed from 0 (trailing zeros dropped).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarginalTriple {
    pub xm: Vec<u32>,
    pub ym: Vec<u32>,
    pub zm: Vec<u32>,
}

impl MarginalTriple {
    /// `(λ', μ', ν')`.
    pub fn of_partitions(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<Self> {
        let d = lambda.size();
        if mu.size() != d || nu.size() != d {
            return Err(Error::SizeMismatch(format!(
                "partitions of sizes {}, {}, {}",
                d,
                mu.size(),
                nu.size()
            )));
        }
        Ok(MarginalTriple {
            xm: lambda.conjugate().parts().to_vec(),
            ym: mu.conjugate().parts().to_vec(),
            zm: nu.conjugate().parts().to_vec(),
        })
    }

    pub fn total(&self) -> u32 {
        self.xm.iter().sum()
    }

    /// `Σ_i i (x(i) + y(i) + z(i))`, which equals `|R| h_R` for any relation
    /// with these marginals.
    pub fn weighted_height(&self) -> u64 {
        [&self.xm, &self.ym, &self.zm]
            .iter()
            .flat_map(|m| m.iter().enumerate().map(|(i, &v)| i as u64 * v as u64))
            .sum()
    }
}

/// Counts relations with marginals `(λ', μ', ν')`.
pub fn count_relations_t(lambda: &Partition, mu: &Partition, nu: &Partition, caps: &Caps) -> Result<u128> {
    let m = MarginalTriple::of_partitions(lambda, mu, nu)?;
    check("tomography degree", m.total() as u128, caps.tomography_degree as u128)?;
    Ok(count_relations(&m))
}

/// Counts pyramids with marginals `(λ', μ', ν')`.
pub fn count_pyramids_p(lambda: &Partition, mu: &Partition, nu: &Partition, caps: &Caps) -> Result<u128> {
    let m = MarginalTriple::of_partitions(lambda, mu, nu)?;
    check("tomography degree", m.total() as u128, caps.tomography_degree as u128)?;
    Ok(count_pyramids(&m))
}

fn consistent(m: &MarginalTriple) -> bool {
    let t = m.total();
    m.ym.iter().sum::<u32>() == t && m.zm.iter().sum::<u32>() == t
}

/// Number of relations with exactly the given marginals.
///
/// Works slice by slice in `x`: each slice is a 0/1 matrix over the `(y, z)`
/// grid with the prescribed number of points, and all that later slices see
/// of earlier ones is the remaining y and z budget, so counts are memoized on
/// `(slice, y budget, z budget)`.
pub fn count_relations(m: &MarginalTriple) -> u128 {
    if !consistent(m) {
        return 0;
    }
    let mut memo = HashMap::new();
    count_from(m, 0, m.ym.clone(), m.zm.clone(), &mut memo)
}

type Memo = HashMap<(usize, Vec<u32>, Vec<u32>), u128>;

fn count_from(m: &MarginalTriple, slice: usize, ybud: Vec<u32>, zbud: Vec<u32>, memo: &mut Memo) -> u128 {
    if slice == m.xm.len() {
        return (ybud.iter().all(|&v| v == 0) && zbud.iter().all(|&v| v == 0)) as u128;
    }
    let key = (slice, ybud, zbud);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let (_, ybud, zbud) = &key;
    let mut fills = Vec::new();
    slice_fillings(ybud, zbud, m.xm[slice], &mut |y, z, _| {
        fills.push((y.to_vec(), z.to_vec()));
    });
    let mut total = 0u128;
    for (y, z) in fills {
        total += count_from(m, slice + 1, y, z, memo);
    }
    memo.insert(key, total);
    total
}

/// Receives the remaining y budget, z budget and the chosen cells.
type SliceVisitor<'a> = dyn FnMut(&[u32], &[u32], &[(u32, u32)]) + 'a;

/// Calls `f(y_left, z_left, cells)` for every set of `k` cells in the
/// `(y, z)` grid whose row and column counts fit the budgets.
fn slice_fillings(ybud: &[u32], zbud: &[u32], k: u32, f: &mut SliceVisitor) {
    #[allow(clippy::too_many_arguments)]
    fn go(
        cell: usize,
        cols: usize,
        total_cells: usize,
        left: u32,
        y: &mut Vec<u32>,
        z: &mut Vec<u32>,
        cells: &mut Vec<(u32, u32)>,
        f: &mut SliceVisitor,
    ) {
        if left == 0 {
            f(y, z, cells);
            return;
        }
        if total_cells - cell < left as usize {
            return;
        }
        let (r, c) = (cell / cols, cell % cols);
        if y[r] > 0 && z[c] > 0 {
            y[r] -= 1;
            z[c] -= 1;
            cells.push((r as u32, c as u32));
            go(cell + 1, cols, total_cells, left - 1, y, z, cells, f);
            cells.pop();
            y[r] += 1;
            z[c] += 1;
        }
        go(cell + 1, cols, total_cells, left, y, z, cells, f);
    }
    let cols = zbud.len();
    let total_cells = ybud.len() * cols;
    go(0, cols.max(1), total_cells, k, &mut ybud.to_vec(), &mut zbud.to_vec(), &mut Vec::new(), f);
}

/// Every relation with the given marginals, in a fixed order. Fails once more
/// than `limit` relations have been produced.
pub fn enumerate_relations(m: &MarginalTriple, limit: usize) -> Result<Vec<Relation3D>> {
    fn go(
        m: &MarginalTriple,
        slice: usize,
        ybud: &[u32],
        zbud: &[u32],
        acc: &mut Vec<Point>,
        out: &mut Vec<Relation3D>,
        limit: usize,
    ) -> Result<()> {
        if slice == m.xm.len() {
            if ybud.iter().all(|&v| v == 0) && zbud.iter().all(|&v| v == 0) {
                if out.len() == limit {
                    return Err(Error::ResourceCap {
                        what: "enumerated relations",
                        requested: limit as u128 + 1,
                        limit: limit as u128,
                    });
                }
                out.push(Relation3D::new(acc.iter().copied()));
            }
            return Ok(());
        }
        let mut fills = Vec::new();
        slice_fillings(ybud, zbud, m.xm[slice], &mut |y, z, cells| {
            fills.push((y.to_vec(), z.to_vec(), cells.to_vec()));
        });
        for (y, z, cells) in fills {
            let before = acc.len();
            acc.extend(cells.iter().map(|&(r, c)| (slice as u32, r, c)));
            go(m, slice + 1, &y, &z, acc, out, limit)?;
            acc.truncate(before);
        }
        Ok(())
    }
    let mut out = Vec::new();
    if consistent(m) {
        go(m, 0, &m.ym, &m.zm, &mut Vec::new(), &mut out, limit)?;
    }
    Ok(out)
}

/// Number of pyramids with exactly the given marginals. A pyramid's x-slices
/// are nested Young diagrams in the `(y, z)` plane.
pub fn count_pyramids(m: &MarginalTriple) -> u128 {
    fn go(m: &MarginalTriple, slice: usize, prev: &[u32], ybud: &mut [u32], zbud: &mut [u32]) -> u128 {
        if slice == m.xm.len() {
            return (ybud.iter().all(|&v| v == 0) && zbud.iter().all(|&v| v == 0)) as u128;
        }
        let mut total = 0;
        let mut shapes = Vec::new();
        diagrams_inside(prev, m.xm[slice], &mut Vec::new(), &mut shapes);
        for shape in shapes {
            // row r of the diagram is y = r, with z = 0..len
            let fits = shape.iter().enumerate().all(|(r, &len)| (ybud[r]) >= len)
                && (0..zbud.len()).all(|c| {
                    zbud[c] >= shape.iter().filter(|&&len| len as usize > c).count() as u32
                });
            if !fits {
                continue;
            }
            for (r, &len) in shape.iter().enumerate() {
                ybud[r] -= len;
                for z in &mut zbud[..len as usize] {
                    *z -= 1;
                }
            }
            total += go(m, slice + 1, &shape, ybud, zbud);
            for (r, &len) in shape.iter().enumerate() {
                ybud[r] += len;
                for z in &mut zbud[..len as usize] {
                    *z += 1;
                }
            }
        }
        total
    }
    if !consistent(m) {
        return 0;
    }
    let first: Vec<u32> = vec![m.zm.len() as u32; m.ym.len()];
    go(m, 0, &first, &mut m.ym.clone(), &mut m.zm.clone())
}

/// Young diagrams (as row lengths) of size `k` inside `outer`.
fn diagrams_inside(outer: &[u32], k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if k == 0 {
        out.push(cur.clone());
        return;
    }
    let row = cur.len();
    if row == outer.len() {
        return;
    }
    let cap = outer[row].min(cur.last().copied().unwrap_or(u32::MAX)).min(k);
    for len in (1..=cap).rev() {
        cur.push(len);
        diagrams_inside(outer, k - len, cur, out);
        cur.pop();
    }
}

/// `s(d)`, `|P(s)|` and `h(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexData {
    pub s: u32,
    pub simplex_size: u64,
    /// `h(d) = (|P(s)|/d) h_{P(s)} + (1 - |P(s)|/d) s`.
    pub h: BigRational,
}

pub fn simplex_size(s: u32) -> u64 {
    let s = s as u64;
    s * (s + 1) * (s + 2) / 6
}

/// `s(d)` is the largest `s` with `|P(s)| ≤ d`.
pub fn simplex_data(d: u32) -> Result<SimplexData> {
    if d == 0 {
        return Err(Error::InvalidInput("simplex data needs d ≥ 1".into()));
    }
    let mut s = 1;
    while simplex_size(s + 1) <= d as u64 {
        s += 1;
    }
    let size = simplex_size(s);
    // Σ_{P(s)} (x+y+z) = Σ_{k<s} k·C(k+2, 2)
    let simplex_weight: u64 = (0..s as u64).map(|k| k * (k + 1) * (k + 2) / 2).sum();
    let weighted = BigInt::from(simplex_weight) + BigInt::from((d as u64 - size) * s as u64);
    Ok(SimplexData {
        s,
        simplex_size: size,
        h: BigRational::new(weighted, BigInt::from(d)),
    })
}

/// `Σ_i i (λ'_i + μ'_i + ν'_i) = d·h(d)`, exactly.
pub fn is_simplex_like(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<bool> {
    let m = MarginalTriple::of_partitions(lambda, mu, nu)?;
    let d = m.total();
    if d == 0 {
        return Ok(true);
    }
    let target = simplex_data(d)?.h * BigRational::from_integer(BigInt::from(d));
    Ok(BigRational::from_integer(BigInt::from(m.weighted_height())) == target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    /// Brute force: every subset of the bounding box of the right size.
    fn brute_counts(m: &MarginalTriple) -> (u128, u128) {
        let (a, b, c) = (m.xm.len() as u32, m.ym.len() as u32, m.zm.len() as u32);
        let cells: Vec<Point> = (0..a)
            .flat_map(|x| (0..b).flat_map(move |y| (0..c).map(move |z| (x, y, z))))
            .collect();
        let d = m.total() as usize;
        let mut t = 0;
        let mut p = 0;
        for mask in 0u64..(1u64 << cells.len()) {
            if mask.count_ones() as usize != d {
                continue;
            }
            let r = Relation3D::new(
                cells.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &pt)| pt),
            );
            if r.marginals() == *m {
                t += 1;
                if r.is_pyramid() {
                    p += 1;
                }
            }
        }
        (t, p)
    }

    #[test]
    fn marginal_examples() {
        let origin = Relation3D::new([(0, 0, 0)]);
        let m = origin.marginals();
        assert_eq!((m.xm.clone(), m.ym.clone(), m.zm.clone()), (vec![1], vec![1], vec![1]));
        assert_eq!(origin.weighted_height(), 0);
        let p2 = Relation3D::simplex(2);
        let m = p2.marginals();
        assert_eq!((m.xm.clone(), m.ym.clone(), m.zm.clone()), (vec![3, 1], vec![3, 1], vec![3, 1]));
        assert_eq!(p2.weighted_height(), 3);
        assert_eq!(m.weighted_height(), 3);
        let empty = Relation3D::default();
        assert_eq!(empty.marginals(), MarginalTriple::default());
        assert_eq!(empty.weighted_height(), 0);
    }

    #[test]
    fn pyramids() {
        for s in 1..5 {
            assert!(Relation3D::simplex(s).is_pyramid());
            assert_eq!(Relation3D::simplex(s).len() as u64, simplex_size(s));
        }
        assert!(!Relation3D::new([(1, 0, 0)]).is_pyramid());
        assert!(Relation3D::new([(0, 0, 0), (0, 0, 1), (0, 1, 0)]).is_pyramid());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_relations_t(&p(&[1]), &p(&[1]), &p(&[1]), &caps()).unwrap(), 1);
        assert_eq!(count_relations_t(&p(&[2]), &p(&[2]), &p(&[2]), &caps()).unwrap(), 4);
        assert_eq!(count_pyramids_p(&p(&[1]), &p(&[1]), &p(&[1]), &caps()).unwrap(), 1);
        assert_eq!(count_pyramids_p(&p(&[2]), &p(&[2]), &p(&[2]), &caps()).unwrap(), 0);
        let w = p(&[2, 1, 1]);
        let t = count_relations_t(&w, &w, &w, &caps()).unwrap();
        let pc = count_pyramids_p(&w, &w, &w, &caps()).unwrap();
        // frozen from brute force: P(2) is the only relation
        assert_eq!((t, pc), (1, 1));
    }

    #[test]
    fn counts_match_brute_force() {
        for d in 1..=4 {
            let shapes = enumerate_partitions(d, None, None);
            for a in &shapes {
                for b in &shapes {
                    for c in &shapes {
                        let m = MarginalTriple::of_partitions(a, b, c).unwrap();
                        if m.xm.len() * m.ym.len() * m.zm.len() > 20 {
                            continue;
                        }
                        let (t, pc) = brute_counts(&m);
                        assert_eq!(count_relations(&m), t, "{a} {b} {c}");
                        assert_eq!(count_pyramids(&m), pc, "{a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_reproduces_marginals() {
        for d in 1..=5 {
            let shapes = enumerate_partitions(d, None, None);
            for a in &shapes {
                for b in &shapes {
                    for c in &shapes {
                        let m = MarginalTriple::of_partitions(a, b, c).unwrap();
                        let all = enumerate_relations(&m, 100_000).unwrap();
                        assert_eq!(all.len() as u128, count_relations(&m));
                        for r in &all {
                            assert_eq!(r.marginals(), m);
                        }
                        let pyramids = all.iter().filter(|r| r.is_pyramid()).count();
                        assert_eq!(pyramids as u128, count_pyramids(&m));
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        for d in 1..=5 {
            let shapes = enumerate_partitions(d, None, None);
            for a in &shapes {
                for b in &shapes {
                    for c in &shapes {
                        let t = count_relations_t(a, b, c, &caps()).unwrap();
                        let pc = count_pyramids_p(a, b, c, &caps()).unwrap();
                        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                            assert_eq!(count_relations_t(x, y, z, &caps()).unwrap(), t);
                            assert_eq!(count_pyramids_p(x, y, z, &caps()).unwrap(), pc);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degree_cap() {
        let big = p(&[11]);
        assert!(count_relations_t(&big, &big, &big, &caps()).unwrap_err().is_resource_cap());
        assert!(count_relations_t(&p(&[2]), &p(&[1]), &p(&[2]), &caps()).is_err());
    }

    #[test]
    fn simplex_examples() {
        let one = simplex_data(1).unwrap();
        assert_eq!((one.s, one.h.clone()), (1, BigRational::from_integer(0.into())));
        let four = simplex_data(4).unwrap();
        assert_eq!((four.s, four.simplex_size), (2, 4));
        assert_eq!(four.h, BigRational::new(3.into(), 4.into()));
        let two = simplex_data(2).unwrap();
        assert_eq!((two.s, two.h.clone()), (1, BigRational::new(1.into(), 2.into())));
        assert!(simplex_data(0).is_err());
    }

    #[test]
    fn simplex_like_examples() {
        let w = p(&[2, 1, 1]);
        assert!(is_simplex_like(&w, &w, &w).unwrap());
        assert!(!is_simplex_like(&p(&[2]), &p(&[2]), &p(&[2])).unwrap());
        assert!(is_simplex_like(&p(&[1]), &p(&[1]), &p(&[1])).unwrap());
    }

    #[test]
    fn sandwiched_relations_have_height_h_of_d() {
        for s in 1..=3 {
            let inner = Relation3D::simplex(s);
            let shell: Vec<Point> = Relation3D::simplex(s + 1)
                .points()
                .difference(inner.points())
                .copied()
                .collect();
            // proper subsets of the next layer
            for mask in 0u32..(1 << shell.len()) - 1 {
                let r = Relation3D::new(
                    inner
                        .points()
                        .iter()
                        .copied()
                        .chain(shell.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &q)| q)),
                );
                let d = r.len() as u32;
                if d > 10 {
                    continue;
                }
                let data = simplex_data(d).unwrap();
                assert_eq!(data.s, s);
                assert_eq!(r.height().unwrap(), data.h, "s={s} d={d}");
            }
        }
    }

    #[test]
    fn sandwich_against_kronecker() {
        use crate::kronecker::{kron, TripleQuery};
        use num_traits::ToPrimitive;
        for d in 1..=6 {
            let shapes = enumerate_partitions(d, None, None);
            for (i, a) in shapes.iter().enumerate() {
                for (j, b) in shapes.iter().enumerate().skip(i) {
                    for c in shapes.iter().skip(j) {
                        let q = TripleQuery::new(a.clone(), b.clone(), c.clone()).unwrap();
                        let k = kron(&q).unwrap().to_u128().unwrap();
                        let t = count_relations_t(a, b, c, &caps()).unwrap();
                        let pc = count_pyramids_p(a, b, c, &caps()).unwrap();
                        assert!(pc <= k && k <= t, "{a} {b} {c}: p={pc} k={k} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn simplex_like_triples_collapse() {
        use crate::kronecker::{kron, TripleQuery};
        use num_traits::ToPrimitive;
        let mut seen = 0;
        for d in 1..=8 {
            let shapes = enumerate_partitions(d, None, None);
            for a in &shapes {
                for b in &shapes {
                    for c in &shapes {
                        if !is_simplex_like(a, b, c).unwrap() {
                            continue;
                        }
                        seen += 1;
                        let q = TripleQuery::new(a.clone(), b.clone(), c.clone()).unwrap();
                        let k = kron(&q).unwrap().to_u128().unwrap();
                        let t = count_relations_t(a, b, c, &caps()).unwrap();
                        let pc = count_pyramids_p(a, b, c, &caps()).unwrap();
                        assert_eq!((t, pc), (k, k), "{a} {b} {c}");
                    }
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn json_layout() {
        let r = Relation3D::new([(1, 0, 0), (0, 0, 0)]);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "[[0,0,0],[1,0,0]]");
        assert_eq!(serde_json::from_str::<Relation3D>(&s).unwrap(), r);
    }
}
