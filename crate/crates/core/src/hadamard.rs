//! Sign matrices read off the wedge coordinates of truncated cap families,
//! and the Sylvester, design and Reed–Muller checks built on them.
//!
//! Subsets of `M_r = {m_1, …, m_r}` are bitmasks with `m_i` at bit `i - 1`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::caps::{prime, CapFamily, Table};
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Felt, FieldSpec};
use crate::linalg::Mat;

/// Largest supported `r` (matrices of order `2^r`).
pub const MAX_R: usize = 12;

fn check_r(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidParams("r must be at least 1".into()));
    }
    if r > MAX_R {
        return Err(Error::budget("sign matrix order", 1u128 << r.min(127), 1u128 << MAX_R));
    }
    Ok(())
}

/// Square `±1` matrix of order `2^r`, rows and columns indexed by subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignMatrix {
    pub r: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn from_fn(r: usize, mut f: impl FnMut(usize, usize) -> i8) -> SignMatrix {
        let o = 1usize << r;
        let mut entries = Vec::with_capacity(o * o);
        for i in 0..o {
            for j in 0..o {
                entries.push(f(i, j));
            }
        }
        SignMatrix { r, entries }
    }

    pub fn order(&self) -> usize {
        1 << self.r
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.order() + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        self.entries.chunks(self.order()).map(|c| c.to_vec()).collect()
    }

    /// Block `(bi, bj)` of size `2^{r-1}`.
    pub fn block(&self, bi: usize, bj: usize) -> SignMatrix {
        let h = self.order() / 2;
        SignMatrix::from_fn(self.r - 1, |i, j| self.get(bi * h + i, bj * h + j))
    }

    pub fn negate(&self) -> SignMatrix {
        SignMatrix { r: self.r, entries: self.entries.iter().map(|&x| -x).collect() }
    }

    /// `±1` grid, one row per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in self.entries.chunks(self.order()) {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &SignMatrix, b: &SignMatrix) -> SignMatrix {
    let ob = b.order();
    SignMatrix::from_fn(a.r + b.r, |i, j| a.get(i / ob, j / ob) * b.get(i % ob, j % ob))
}

/// Position of `S` (given by 1-based indices `i` of `m_i`) in the order on
/// subsets of `M_r`.
pub fn subset_index(s: &[usize]) -> usize {
    s.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
}

/// The recursive order on subsets of `M_r`: below `m_r` use the order for
/// `r - 1`; sets without `m_r` precede sets with it.
pub fn subset_less(r: usize, x: usize, y: usize) -> bool {
    if r == 1 {
        return x == 0 && y == 1;
    }
    let top = 1 << (r - 1);
    let (xt, yt) = (x & top != 0, y & top != 0);
    match (xt, yt) {
        (false, false) => subset_less(r - 1, x, y),
        (false, true) => true,
        (true, false) => false,
        (true, true) => subset_less(r - 1, x & !top, y & !top),
    }
}

/// All subsets of `M_r` sorted by [`subset_less`].
pub fn recursive_order(r: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..1 << r).collect();
    v.sort_by(|&a, &b| {
        if subset_less(r, a, b) {
            std::cmp::Ordering::Less
        } else if subset_less(r, b, a) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    v
}

/// Integer determinant by fraction-free elimination (Bareiss).
pub fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Components `σ_S(T)` of the wedge of the truncated generators of `X_S` on
/// the basis vectors `e_{T ∪ T'}` (plus `e_{2n+1}` for table 2), indexed by
/// the bitmask of `T ∩ M_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiVector {
    pub s: usize,
    pub components: Vec<i64>,
}

/// Columns `t_1..t_r, t_1'..t_r' [, 2n+1]` (0-based) for `T` with `T ∩ M = a`.
fn t_columns(fam: &CapFamily, a: usize) -> Vec<usize> {
    let spec = &fam.spec;
    let n = spec.n;
    let t: Vec<usize> = (0..spec.r())
        .map(|l| {
            if a >> l & 1 == 1 {
                spec.m[l]
            } else {
                spec.pairs[spec.tau.iter().position(|&x| x == l).expect("perm")].0
            }
        })
        .collect();
    let mut cols: Vec<usize> = t.iter().map(|&i| i - 1).collect();
    cols.extend(t.iter().map(|&i| prime(n, i) - 1));
    if fam.table == Table::Two {
        cols.push(2 * n);
    }
    cols
}

/// Reads `ξ_S` off the integer generator rows. The sign of each component is
/// the determinant on the columns `t_1..t_r, t_1'..t_r'` in that order, which
/// makes `σ_∅(T) = (-1)^{|T ∩ M_r|}` with no extra permutation sign.
pub fn xi_from_cap(fam: &CapFamily, s: usize) -> Result<XiVector> {
    if !fam.truncated {
        return Err(Error::NotTruncated);
    }
    let rows = &fam.rows[s];
    let components = (0..1usize << fam.r())
        .map(|a| {
            let cols = t_columns(fam, a);
            let sub: Vec<Vec<i64>> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
            let d = int_det(&sub);
            if d.abs() != 1 {
                let mut set: Vec<usize> = cols.iter().map(|c| c + 1).collect();
                set.sort_unstable();
                return Err(Error::NotASign { value: d, set });
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(XiVector { s, components })
}

/// `A[S][T ∩ M] = σ_S(T) σ_∅(T)`.
pub fn a_matrix_from_cap(fam: &CapFamily) -> Result<SignMatrix> {
    let r = fam.r();
    check_r(r)?;
    let base = xi_from_cap(fam, 0)?;
    let xis = (0..1usize << r).map(|s| xi_from_cap(fam, s)).collect::<Result<Vec<_>>>()?;
    Ok(SignMatrix::from_fn(r, |s, a| (xis[s].components[a] * base.components[a]) as i8))
}

/// `A[S][T] = (-1)^{|S ∩ T|}`.
pub fn a_matrix_formula(r: usize) -> Result<SignMatrix> {
    check_r(r)?;
    Ok(SignMatrix::from_fn(r, |s, t| if (s & t).count_ones() % 2 == 0 { 1 } else { -1 }))
}

/// `S_1 = [[1, 1], [1, -1]]`, `S_r = S_{r-1} ⊗ S_1`.
pub fn sylvester(r: usize) -> Result<SignMatrix> {
    check_r(r)?;
    let base = SignMatrix { r: 1, entries: vec![1, 1, 1, -1] };
    let mut m = base.clone();
    for _ in 1..r {
        m = kron(&m, &base);
    }
    Ok(m)
}

/// `H Hᵀ = 2^r I` over the integers.
pub fn is_hadamard(h: &SignMatrix) -> bool {
    let o = h.order();
    if h.entries.iter().any(|&x| x != 1 && x != -1) {
        return false;
    }
    let rows = h.rows();
    (0..o).all(|i| {
        (0..o).all(|j| {
            let dot: i64 = rows[i].iter().zip(&rows[j]).map(|(&a, &b)| (a * b) as i64).sum();
            dot == if i == j { o as i64 } else { 0 }
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DesignReport {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub is_2design: bool,
    /// λ = 0: every block has at most one point in common with any pair.
    pub degenerate: bool,
}

/// Deletes the first row and column, keeps `+1` as incidence, and checks
/// for a symmetric 2-design on the remaining `2^r - 1` points.
pub fn hadamard_design(h: &SignMatrix) -> Result<DesignReport> {
    if !is_hadamard(h) || (0..h.order()).any(|i| h.get(0, i) != 1 || h.get(i, 0) != 1) {
        return Err(Error::NotHadamard);
    }
    let o = h.order();
    let blocks: Vec<Vec<bool>> = (1..o).map(|i| (1..o).map(|j| h.get(i, j) == 1).collect()).collect();
    let v = o - 1;
    let sizes: BTreeSet<usize> = blocks.iter().map(|b| b.iter().filter(|&&x| x).count()).collect();
    let mut lambdas = BTreeSet::new();
    for x in 0..v {
        for y in x + 1..v {
            lambdas.insert(blocks.iter().filter(|b| b[x] && b[y]).count());
        }
    }
    let k = sizes.iter().next().copied().unwrap_or(0);
    let lambda = lambdas.iter().next().copied().unwrap_or(0);
    Ok(DesignReport {
        v,
        k,
        lambda,
        is_2design: sizes.len() == 1 && lambdas.len() <= 1 && v >= 2,
        degenerate: lambda == 0,
    })
}

/// Binary code spanned by the rows of `A_{∅,r}` (`+1 -> 0`, `-1 -> 1`) and
/// the all-ones word.
pub fn rm_code(r: usize) -> Result<LinearCode> {
    let a = a_matrix_formula(r)?;
    let f = Arc::new(FieldSpec::new(2, 1)?);
    let o = a.order();
    let mut rows: Vec<Vec<Felt>> =
        a.rows().iter().map(|row| row.iter().map(|&x| Felt((x == -1) as u16)).collect()).collect();
    rows.push(vec![Felt::ONE; o]);
    let red = crate::linalg::rref(&f, &Mat::from_rows(o, &rows)?);
    let basis: Vec<&[Felt]> = (0..red.rank).map(|i| red.mat.row(i)).collect();
    LinearCode::from_generator(f, Mat::from_rows(o, &basis)?)
}

/// Every codeword of a binary code as a bitmask (length at most 64).
pub fn binary_codewords(c: &LinearCode) -> Result<BTreeSet<u64>> {
    if c.field().q() != 2 || c.len() > 64 || c.dim() > 24 {
        return Err(Error::InvalidParams("codeword listing needs a small binary code".into()));
    }
    let rows: Vec<u64> = c
        .generator()
        .row_iter()
        .map(|r| r.iter().enumerate().fold(0u64, |acc, (i, x)| acc | (x.0 as u64) << i))
        .collect();
    Ok((0u64..1 << c.dim())
        .map(|m| rows.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(0, |acc, (_, &r)| acc ^ r))
        .collect())
}

/// RM(1, r) by evaluating every affine function `a_0 + a·x` at the points
/// `x ∈ GF(2)^r`, point `x` at position `x` (as an integer).
pub fn reed_muller_first_order(r: usize) -> BTreeSet<u64> {
    let len = 1usize << r;
    let mut out = BTreeSet::new();
    for a in 0..len {
        for a0 in 0..2u64 {
            let word = (0..len).fold(0u64, |acc, x| {
                let bit = a0 ^ ((a & x).count_ones() as u64 & 1);
                acc | bit << x
            });
            out.insert(word);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::{build_cap, CapSpec};
    use crate::codes::{min_distance, DEFAULT_BUDGET};
    use crate::linalg;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    fn family(n: usize, q: u64, j: &[usize]) -> (FieldSpec, CapFamily) {
        let f = gf(q);
        let spec = CapSpec::new(n, j, None).unwrap();
        let fam = build_cap(&f, &spec, None).unwrap().truncate(&f).unwrap();
        (f, fam)
    }

    #[test]
    fn subset_index_examples() {
        assert_eq!(subset_index(&[]), 0);
        assert_eq!(subset_index(&[1, 3]), 5);
        let expected: Vec<Vec<usize>> =
            vec![vec![], vec![1], vec![2], vec![1, 2], vec![3], vec![1, 3], vec![2, 3], vec![1, 2, 3]];
        for (pos, s) in expected.iter().enumerate() {
            assert_eq!(subset_index(s), pos);
        }
    }

    #[test]
    fn recursive_order_is_binary() {
        for r in 1..=10 {
            assert_eq!(recursive_order(r), (0..1usize << r).collect::<Vec<_>>());
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(int_det(&[vec![0, -1], vec![1, 0]]), 1);
        assert_eq!(int_det(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
        assert_eq!(int_det(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]), -1);
        assert_eq!(int_det(&[vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(int_det(&[vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn xi_requires_truncation() {
        let f = gf(3);
        let fam = build_cap(&f, &CapSpec::new(2, &[1, 3], None).unwrap(), None).unwrap();
        assert!(matches!(xi_from_cap(&fam, 0), Err(Error::NotTruncated)));
    }

    #[test]
    fn xi_empty_set_signs() {
        for (n, q, j) in [
            (2usize, 3u64, vec![1usize, 3]),
            (4, 5, vec![1, 2, 5, 6]),
            (3, 3, vec![1, 4, 7]),
            (6, 3, vec![1, 2, 3, 7, 8, 9]),
        ] {
            let (_, fam) = family(n, q, &j);
            let xi = xi_from_cap(&fam, 0).unwrap();
            for (a, &c) in xi.components.iter().enumerate() {
                let expected = if a.count_ones() % 2 == 0 { 1 } else { -1 };
                assert_eq!(c, expected);
            }
        }
        // r = 1: +1 on e_{j1,j1'}, -1 on e_{m1,m1'}
        let (_, fam) = family(2, 3, &[1, 3]);
        assert_eq!(xi_from_cap(&fam, 0).unwrap().components, vec![1, -1]);
    }

    #[test]
    fn xi_matches_field_wedge_up_to_column_order() {
        // the determinant on ordered columns equals the Plücker coordinate on
        // the sorted index set times the sign of the sorting permutation
        for (n, q, j) in [(4usize, 5u64, vec![1usize, 2, 5, 6]), (3, 3, vec![1, 4, 7])] {
            let (f, fam) = family(n, q, &j);
            let k = fam.member_dim();
            let subsets = linalg::k_subsets(2 * n + 1, k);
            for s in 0..fam.members.len() {
                let xi = xi_from_cap(&fam, s).unwrap();
                let b = Mat::from_ints(&f, &fam.rows[s]).unwrap();
                let raw = linalg::plucker_raw(&f, &b);
                for a in 0..xi.components.len() {
                    let cols = t_columns(&fam, a);
                    let mut sorted = cols.clone();
                    sorted.sort_unstable();
                    let inversions = (0..cols.len())
                        .flat_map(|x| (x + 1..cols.len()).map(move |y| (x, y)))
                        .filter(|&(x, y)| cols[x] > cols[y])
                        .count();
                    let sign = if inversions % 2 == 0 { 1 } else { -1 };
                    let pos = subsets.iter().position(|c| *c == sorted).unwrap();
                    assert_eq!(raw[pos], f.from_int(xi.components[a] * sign));
                }
            }
        }
    }

    #[test]
    fn a_matrix_from_caps() {
        let expected1 = SignMatrix { r: 1, entries: vec![1, 1, 1, -1] };
        for q in [3u64, 5] {
            let (_, fam) = family(2, q, &[1, 3]);
            assert_eq!(a_matrix_from_cap(&fam).unwrap(), expected1);
            let (_, fam) = family(4, q, &[1, 2, 5, 6]);
            assert_eq!(a_matrix_from_cap(&fam).unwrap(), a_matrix_formula(2).unwrap());
            let (_, fam) = family(6, q, &[1, 2, 3, 7, 8, 9]);
            assert_eq!(a_matrix_from_cap(&fam).unwrap(), a_matrix_formula(3).unwrap());
            let (_, fam) = family(5, q, &[1, 6, 11]);
            assert_eq!(a_matrix_from_cap(&fam).unwrap(), expected1);
        }
    }

    #[test]
    fn formula_sylvester_hadamard() {
        for r in 1..=6 {
            let a = a_matrix_formula(r).unwrap();
            assert_eq!(a, sylvester(r).unwrap());
            assert!(is_hadamard(&a));
            assert!(a.rows()[0].iter().all(|&x| x == 1));
            if r > 1 {
                let prev = a_matrix_formula(r - 1).unwrap();
                assert_eq!(a.block(0, 0), prev);
                assert_eq!(a.block(0, 1), prev);
                assert_eq!(a.block(1, 0), prev);
                assert_eq!(a.block(1, 1), prev.negate());
            }
        }
        let r3 = a_matrix_formula(3).unwrap();
        for t in 0..8 {
            assert_eq!(r3.get(1, t), if t & 1 == 1 { -1 } else { 1 });
        }
    }

    #[test]
    fn hadamard_negatives() {
        let ones = SignMatrix { r: 1, entries: vec![1, 1, 1, 1] };
        assert!(!is_hadamard(&ones));
        assert!(matches!(hadamard_design(&ones), Err(Error::NotHadamard)));
        let k = kron(&sylvester(2).unwrap(), &sylvester(3).unwrap());
        assert!(is_hadamard(&k));
        assert!(matches!(a_matrix_formula(13), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn designs() {
        let d = hadamard_design(&sylvester(3).unwrap()).unwrap();
        assert_eq!((d.v, d.k, d.lambda, d.is_2design), (7, 3, 1, true));
        let d = hadamard_design(&sylvester(4).unwrap()).unwrap();
        assert_eq!((d.v, d.k, d.lambda, d.is_2design), (15, 7, 3, true));
        let d = hadamard_design(&sylvester(2).unwrap()).unwrap();
        assert_eq!((d.v, d.k, d.lambda), (3, 1, 0));
        assert!(d.degenerate);
    }

    #[test]
    fn reed_muller() {
        for r in 1..=5 {
            let c = rm_code(r).unwrap();
            assert_eq!(c.len(), 1 << r);
            assert_eq!(c.dim(), r + 1);
            assert_eq!(binary_codewords(&c).unwrap(), reed_muller_first_order(r));
            assert_eq!(min_distance(&c, DEFAULT_BUDGET).unwrap().d, 1 << (r - 1));
        }
    }
}
