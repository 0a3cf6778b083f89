//! Dense matrices over a [`FieldSpec`]: reduction, kernels, Plücker minors,
//! canonical projective points and canonical subspaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Felt, FieldSpec};

/// Row-major dense matrix. The owning field is passed to every operation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Felt>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<u16> = self.row(r).iter().map(|x| x.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Felt::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Felt::ONE);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Felt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Mat { rows, cols, data })
    }

    /// Builds a matrix from rows, which must share a length. An empty list
    /// yields a `0 x cols` matrix.
    pub fn from_rows<R: AsRef<[Felt]>>(cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimMismatch { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Mat { rows: rows.len(), cols, data })
    }

    /// Integer entries reduced into the prime subfield.
    pub fn from_ints(f: &FieldSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let felts: Vec<Vec<Felt>> = rows.iter().map(|r| r.iter().map(|&v| f.from_int(v)).collect()).collect();
        Mat::from_rows(cols, &felts)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Felt {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Felt) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Felt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Felt]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn data(&self) -> &[Felt] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols {
            return Err(Error::DimMismatch { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn push_row(&mut self, row: &[Felt]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimMismatch { expected: self.cols, got: row.len() });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Columns `cols` of `self`, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    pub fn mul(&self, f: &FieldSpec, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &FieldSpec, v: &[Felt]) -> Vec<Felt> {
        let mut out = vec![Felt::ZERO; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(k, j)));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

/// Reduced row echelon form with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub mat: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref(f: &FieldSpec, m: &Mat) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = f.mul(a.get(r, j), inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor.is_zero() {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..cols {
                let v = f.add(a.get(i, j), f.mul(nf, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { mat: a, rank: r, pivots }
}

pub fn rank(f: &FieldSpec, m: &Mat) -> usize {
    rref(f, m).rank
}

/// Basis of the right null space `{v : m v = 0}`, one basis vector per row.
pub fn kernel(f: &FieldSpec, m: &Mat) -> Mat {
    let red = rref(f, m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Mat::zeros(0, cols);
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Felt::ZERO; cols];
        v[free] = Felt::ONE;
        for (i, &pc) in red.pivots.iter().enumerate() {
            v[pc] = f.neg(red.mat.get(i, free));
        }
        basis.push_row(&v).expect("row length matches");
    }
    basis
}

/// Determinant of a square matrix by elimination.
pub fn det(f: &FieldSpec, m: &Mat) -> Felt {
    assert_eq!(m.rows, m.cols, "determinant of non-square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut d = Felt::ONE;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
            return Felt::ZERO;
        };
        if pr != c {
            for j in 0..n {
                a.data.swap(pr * n + j, c * n + j);
            }
            d = f.neg(d);
        }
        let pivot = a.get(c, c);
        d = f.mul(d, pivot);
        let inv = f.inv(pivot).expect("pivot is nonzero");
        for i in c + 1..n {
            let factor = f.mul(a.get(i, c), inv);
            if factor.is_zero() {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..n {
                let v = f.add(a.get(i, j), f.mul(nf, a.get(c, j)));
                a.set(i, j, v);
            }
        }
    }
    d
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + m - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// A projective point, always scaled so that its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjVec(Vec<Felt>);

impl ProjVec {
    pub fn coords(&self) -> &[Felt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Felt> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn canonical_projective(f: &FieldSpec, v: &[Felt]) -> Result<ProjVec> {
    let lead = v.iter().copied().find(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
    if lead == Felt::ONE {
        return Ok(ProjVec(v.to_vec()));
    }
    let inv = f.inv(lead)?;
    Ok(ProjVec(v.iter().map(|&x| f.mul(x, inv)).collect()))
}

/// All `k x k` minors of a `k`-row matrix, over lexicographically ordered
/// column subsets.
pub fn plucker_raw(f: &FieldSpec, b: &Mat) -> Vec<Felt> {
    let k = b.rows;
    k_subsets(b.cols, k).iter().map(|cols| det(f, &b.select_cols(cols))).collect()
}

/// Plücker point of the row space of a full-rank `k`-row matrix.
pub fn wedge_minors(f: &FieldSpec, b: &Mat) -> Result<ProjVec> {
    let r = rank(f, b);
    if r != b.rows {
        return Err(Error::RankDeficient { rank: r, expected: b.rows });
    }
    canonical_projective(f, &plucker_raw(f, b))
}

/// Calls `visit` with every vector of `GF(q)^len`, in odometer order
/// (coordinate 0 fastest).
pub fn for_each_vector(f: &FieldSpec, len: usize, mut visit: impl FnMut(&[Felt])) {
    let q = f.q() as u16;
    let mut v = vec![Felt::ZERO; len];
    loop {
        visit(&v);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            v[i].0 += 1;
            if v[i].0 < q {
                break;
            }
            v[i] = Felt::ZERO;
            i += 1;
        }
    }
}

/// Canonical representatives of all points of `PG(len - 1, q)`.
pub fn projective_points(f: &FieldSpec, len: usize) -> Vec<ProjVec> {
    let mut out = Vec::new();
    for lead in 0..len {
        for_each_vector(f, len - lead - 1, |tail| {
            let mut v = vec![Felt::ZERO; len];
            v[lead] = Felt::ONE;
            v[lead + 1..].copy_from_slice(tail);
            out.push(ProjVec(v));
        });
    }
    out
}

/// Every `d`-dimensional subspace of `GF(q)^m`, enumerated through RREF shapes.
pub fn all_subspaces(f: &FieldSpec, m: usize, d: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for pivots in k_subsets(m, d) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                let pivots = &pivots;
                (p + 1..m).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        for_each_vector(f, free.len(), |vals| {
            let mut b = Mat::zeros(d, m);
            for (r, &p) in pivots.iter().enumerate() {
                b.set(r, p, Felt::ONE);
            }
            for (&(r, c), &v) in free.iter().zip(vals) {
                b.set(r, c, v);
            }
            out.push(Subspace { basis: b });
        });
    }
    out
}

/// A subspace of `GF(q)^m`, represented by its RREF basis (no zero rows),
/// so that equal subspaces have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Mat,
}

impl Subspace {
    /// Row space of `m`.
    pub fn span(f: &FieldSpec, m: &Mat) -> Subspace {
        let red = rref(f, m);
        let rows: Vec<&[Felt]> = (0..red.rank).map(|i| red.mat.row(i)).collect();
        Subspace { basis: Mat::from_rows(m.cols, &rows).expect("rows share width") }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { basis: Mat::zeros(0, ambient) }
    }

    pub fn whole(ambient: usize) -> Subspace {
        Subspace { basis: Mat::identity(ambient) }
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis.row_iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect()
    }

    pub fn contains_vector(&self, f: &FieldSpec, v: &[Felt]) -> bool {
        let mut m = self.basis.clone();
        m.push_row(v).expect("ambient dimensions agree");
        rank(f, &m) == self.dim()
    }

    pub fn contains(&self, f: &FieldSpec, other: &Subspace) -> bool {
        let m = self.basis.stack(&other.basis).expect("ambient dimensions agree");
        rank(f, &m) == self.dim()
    }

    pub fn sum(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        Subspace::span(f, &self.basis.stack(&other.basis).expect("ambient dimensions agree"))
    }

    /// Vectors annihilating the subspace under the standard dot product.
    pub fn annihilator(&self, f: &FieldSpec) -> Mat {
        if self.dim() == 0 {
            return Mat::identity(self.ambient());
        }
        kernel(f, &self.basis)
    }

    pub fn intersection(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        let ann = self.annihilator(f).stack(&other.annihilator(f)).expect("ambient dimensions agree");
        if ann.rows() == 0 {
            return Subspace::whole(self.ambient());
        }
        Subspace::span(f, &kernel(f, &ann))
    }

    /// Projective points of the subspace, as canonical vectors.
    pub fn points(&self, f: &FieldSpec) -> Vec<ProjVec> {
        projective_points(f, self.dim())
            .into_iter()
            .map(|c| {
                // coefficient vectors with leading 1 over an RREF basis give
                // vectors that are already canonical
                ProjVec(self.basis.vec_mul(f, c.coords()))
            })
            .collect()
    }
}
