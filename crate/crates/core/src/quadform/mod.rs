//! Quadratic forms, their polarization, and totally singular subspaces.

pub mod intersection;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Felt, FieldSpec};
use crate::linalg::{self, Mat, ProjVec, Subspace};

/// `η(x) = Σ_{i≤j} a_ij x_i x_j`, stored as the packed upper triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm {
    dim: usize,
    coeffs: Vec<Felt>,
    terms: Vec<(usize, usize, Felt)>,
}

/// Position of `(i, j)`, `i ≤ j`, in the packed upper triangle of a `dim`-form.
#[inline]
pub fn tri_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < dim);
    i * dim - i * (i + 1) / 2 + j
}

/// Number of monomials `x_i x_j` with `i ≤ j`.
pub fn monomial_count(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

impl QuadForm {
    pub fn from_coeffs(dim: usize, coeffs: Vec<Felt>) -> Result<Self> {
        if coeffs.len() != monomial_count(dim) {
            return Err(Error::DimMismatch { expected: monomial_count(dim), got: coeffs.len() });
        }
        let mut terms = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                let c = coeffs[tri_index(dim, i, j)];
                if !c.is_zero() {
                    terms.push((i, j, c));
                }
            }
        }
        Ok(QuadForm { dim, coeffs, terms })
    }

    pub fn zero(dim: usize) -> Self {
        QuadForm::from_coeffs(dim, vec![Felt::ZERO; monomial_count(dim)]).expect("sized")
    }

    /// `Σ_{i=1}^n x_i x_{n+i} + x_{2n+1}^2` on a space of dimension `2n + 1`.
    pub fn parabolic(n: usize) -> Self {
        let dim = 2 * n + 1;
        let mut c = vec![Felt::ZERO; monomial_count(dim)];
        for i in 0..n {
            c[tri_index(dim, i, n + i)] = Felt::ONE;
        }
        c[tri_index(dim, 2 * n, 2 * n)] = Felt::ONE;
        QuadForm::from_coeffs(dim, c).expect("sized")
    }

    /// `Σ_{i=1}^m x_i x_{m+i}` on a space of dimension `2m`.
    pub fn hyperbolic(m: usize) -> Self {
        let dim = 2 * m;
        let mut c = vec![Felt::ZERO; monomial_count(dim)];
        for i in 0..m {
            c[tri_index(dim, i, m + i)] = Felt::ONE;
        }
        QuadForm::from_coeffs(dim, c).expect("sized")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Felt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> Felt {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[tri_index(self.dim, i, j)]
    }

    pub fn eval(&self, f: &FieldSpec, x: &[Felt]) -> Result<Felt> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self.eval_unchecked(f, x))
    }

    #[inline]
    pub fn eval_unchecked(&self, f: &FieldSpec, x: &[Felt]) -> Felt {
        self.terms.iter().fold(Felt::ZERO, |acc, &(i, j, c)| f.add(acc, f.mul(c, f.mul(x[i], x[j]))))
    }

    /// Gram matrix of the polar form: `a_ij` off the diagonal, `2 a_ii` on it.
    pub fn gram(&self, f: &FieldSpec) -> Mat {
        let mut g = Mat::zeros(self.dim, self.dim);
        for &(i, j, c) in &self.terms {
            if i == j {
                g.set(i, i, f.add(c, c));
            } else {
                g.set(i, j, c);
                g.set(j, i, c);
            }
        }
        g
    }
}

/// A quadratic form together with its polar bilinear form.
#[derive(Clone, Debug)]
pub struct PolarCtx {
    field: Arc<FieldSpec>,
    form: QuadForm,
    gram: Mat,
}

impl PolarCtx {
    pub fn new(field: Arc<FieldSpec>, form: QuadForm) -> Self {
        let gram = form.gram(&field);
        PolarCtx { field, form, gram }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.form.dim
    }

    #[inline]
    pub fn eta(&self, x: &[Felt]) -> Felt {
        self.form.eval_unchecked(&self.field, x)
    }

    pub fn polar(&self, x: &[Felt], y: &[Felt]) -> Result<Felt> {
        for v in [x, y] {
            if v.len() != self.dim() {
                return Err(Error::DimMismatch { expected: self.dim(), got: v.len() });
            }
        }
        Ok(self.polar_unchecked(x, y))
    }

    #[inline]
    pub fn polar_unchecked(&self, x: &[Felt], y: &[Felt]) -> Felt {
        let gy = self.gram.vec_mul(&self.field, y);
        self.field.dot(x, &gy)
    }

    /// Rows `u G` for each basis vector `u`: the functionals `f(u, ·)`.
    fn functionals(&self, s: &Subspace) -> Mat {
        s.basis().mul(&self.field, &self.gram).expect("ambient dimension")
    }

    pub fn perp(&self, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return Subspace::whole(self.dim());
        }
        Subspace::span(&self.field, &linalg::kernel(&self.field, &self.functionals(s)))
    }

    pub fn is_totally_singular(&self, s: &Subspace) -> bool {
        let b = s.basis();
        for i in 0..b.rows() {
            if !self.eta(b.row(i)).is_zero() {
                return false;
            }
            for j in i + 1..b.rows() {
                if !self.polar_unchecked(b.row(i), b.row(j)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// All projective points where the form vanishes.
    pub fn singular_points(&self) -> Vec<ProjVec> {
        linalg::projective_points(&self.field, self.dim())
            .into_par_iter()
            .filter(|p| self.eta(p.coords()).is_zero())
            .collect()
    }

    /// Totally singular subspaces `Z ⊃ u` with `dim Z = dim u + 1`, each once.
    pub fn extensions(&self, u: &Subspace) -> Vec<Subspace> {
        let f = &*self.field;
        let dim = self.dim();
        // complement of u inside perp(u): vectors of perp(u) vanishing on u's pivots
        let mut eqs = self.functionals(u);
        for p in u.pivots() {
            let mut e = vec![Felt::ZERO; dim];
            e[p] = Felt::ONE;
            eqs.push_row(&e).expect("ambient dimension");
        }
        let w = Subspace::span(f, &linalg::kernel(f, &eqs));
        w.points(f)
            .into_iter()
            .filter(|v| self.eta(v.coords()).is_zero())
            .map(|v| {
                let mut b = u.basis().clone();
                b.push_row(v.coords()).expect("ambient dimension");
                Subspace::span(f, &b)
            })
            .collect()
    }

    /// Every totally singular `k`-subspace, sorted by canonical basis.
    ///
    /// Fails with `BudgetExceeded` as soon as some level of the search holds
    /// more than `cap` subspaces.
    pub fn totally_singular_subspaces(&self, k: usize, cap: usize) -> Result<Vec<Subspace>> {
        if k == 0 {
            return Ok(vec![Subspace::zero(self.dim())]);
        }
        let mut level: Vec<Subspace> = self
            .singular_points()
            .into_iter()
            .map(|p| Subspace::span(&self.field, &Mat::from_rows(self.dim(), &[p.coords()]).expect("width")))
            .collect();
        level.sort_unstable();
        for _ in 1..k {
            if level.len() > cap {
                return Err(Error::budget("totally singular subspaces", level.len() as u128, cap as u128));
            }
            let mut next: Vec<Subspace> = level.par_iter().flat_map_iter(|u| self.extensions(u)).collect();
            next.par_sort_unstable();
            next.dedup();
            level = next;
        }
        if level.len() > cap {
            return Err(Error::budget("totally singular subspaces", level.len() as u128, cap as u128));
        }
        Ok(level)
    }
}

/// `κ(n) = 2 (q+1)(q^2+1)…(q^n+1)`, the number of generators of `Q⁺(2n+1, q)`.
pub fn kappa(n: u32, q: u64) -> u64 {
    (1..=n).fold(2, |acc, i| acc * (q.pow(i) + 1))
}

/// Generators of the hyperbolic quadric `Q⁺(2n+1, q)`, counted by enumeration.
pub fn generator_count_hyperbolic(n: usize, field: Arc<FieldSpec>, cap: usize) -> Result<usize> {
    let ctx = PolarCtx::new(field, QuadForm::hyperbolic(n + 1));
    Ok(ctx.totally_singular_subspaces(n + 1, cap)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(n: usize, q: u64) -> PolarCtx {
        PolarCtx::new(Arc::new(FieldSpec::from_order(q).unwrap()), QuadForm::parabolic(n))
    }

    fn unit(dim: usize, i: usize) -> Vec<Felt> {
        let mut v = vec![Felt::ZERO; dim];
        v[i] = Felt::ONE;
        v
    }

    fn span(c: &PolarCtx, rows: &[Vec<Felt>]) -> Subspace {
        Subspace::span(c.field(), &Mat::from_rows(c.dim(), rows).unwrap())
    }

    #[test]
    fn eval_examples() {
        let c = ctx(2, 3);
        assert_eq!(c.form().eval(c.field(), &unit(5, 0)).unwrap(), Felt::ZERO);
        assert_eq!(c.form().eval(c.field(), &unit(5, 4)).unwrap(), Felt::ONE);
        assert!(c.form().eval(c.field(), &unit(4, 0)).is_err());
        let c = ctx(1, 2);
        let x = [Felt(1), Felt(1), Felt(0)];
        assert_eq!(c.form().eval(c.field(), &x).unwrap(), Felt::ONE);
    }

    #[test]
    fn polar_examples() {
        for q in [2u64, 3, 4, 5] {
            for n in 1..=3 {
                let c = ctx(n, q);
                let dim = 2 * n + 1;
                for i in 0..2 * n {
                    let ip = if i < n { i + n } else { i - n };
                    assert_eq!(c.polar(&unit(dim, i), &unit(dim, ip)).unwrap(), Felt::ONE);
                }
                if n >= 2 {
                    assert_eq!(c.polar(&unit(dim, 0), &unit(dim, 1)).unwrap(), Felt::ZERO);
                }
            }
        }
    }

    #[test]
    fn polar_of_x_with_itself_is_twice_eta() {
        let c = ctx(2, 5);
        let f = c.field();
        linalg::for_each_vector(f, 5, |x| {
            let two_eta = f.add(c.eta(x), c.eta(x));
            assert_eq!(c.polar(x, x).unwrap(), two_eta);
        });
    }

    #[test]
    fn polarization_identity() {
        for q in [2u64, 3, 4] {
            let c = ctx(1, q);
            let f = c.field();
            let pts: Vec<Vec<Felt>> = {
                let mut v = Vec::new();
                linalg::for_each_vector(f, 3, |x| v.push(x.to_vec()));
                v
            };
            for x in &pts {
                for y in &pts {
                    let s: Vec<Felt> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
                    let expected = f.sub(f.sub(c.eta(&s), c.eta(x)), c.eta(y));
                    assert_eq!(c.polar(x, y).unwrap(), expected);
                    assert_eq!(c.polar(x, y).unwrap(), c.polar(y, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn char_two_polar_is_alternating_off_last_coordinate() {
        let c = ctx(2, 4);
        let f = c.field();
        linalg::for_each_vector(f, 4, |x| {
            let mut v = x.to_vec();
            v.push(Felt::ZERO);
            assert!(c.polar(&v, &v).unwrap().is_zero());
        });
    }

    #[test]
    fn homogeneous_of_degree_two() {
        let c = ctx(2, 5);
        let f = c.field();
        linalg::for_each_vector(f, 5, |x| {
            for l in f.elements() {
                let lx: Vec<Felt> = x.iter().map(|&a| f.mul(l, a)).collect();
                assert_eq!(c.eta(&lx), f.mul(f.mul(l, l), c.eta(x)));
            }
        });
    }

    #[test]
    fn perp_examples() {
        let c = ctx(2, 3);
        let whole = Subspace::whole(5);
        assert_eq!(c.perp(&whole).dim(), 0);
        let e1 = span(&c, &[unit(5, 0)]);
        let p = c.perp(&e1);
        assert_eq!(p.dim(), 4);
        for v in p.basis().row_iter() {
            assert!(c.polar(v, &unit(5, 0)).unwrap().is_zero());
        }
        assert!(c.perp(&p).contains(c.field(), &e1));

        // even q: the radical of the polar form is <e_{2n+1}>
        let c2 = ctx(2, 2);
        let rad = c2.perp(&Subspace::whole(5));
        assert_eq!(rad.dim(), 1);
        assert!(rad.contains_vector(c2.field(), &unit(5, 4)));
    }

    #[test]
    fn perp_reverses_inclusion() {
        let c = ctx(2, 3);
        let s = span(&c, &[unit(5, 0)]);
        let t = span(&c, &[unit(5, 0), unit(5, 1)]);
        assert!(c.perp(&s).contains(c.field(), &c.perp(&t)));
    }

    #[test]
    fn totally_singular_examples() {
        for n in 1..=3 {
            let c = ctx(n, 3);
            let dim = 2 * n + 1;
            let rows: Vec<Vec<Felt>> = (0..n).map(|i| unit(dim, i)).collect();
            assert!(c.is_totally_singular(&span(&c, &rows)));
            assert!(!c.is_totally_singular(&span(&c, &[unit(dim, 2 * n)])));
            let mut v = unit(dim, 0);
            v[n] = Felt::ONE;
            assert!(!c.is_totally_singular(&span(&c, &[v])));
        }
    }

    #[test]
    fn witt_index_witness() {
        // exactly the n coordinate vectors e_1..e_n give a maximal totally
        // singular coordinate span; adding any other coordinate vector breaks it
        let c = ctx(3, 3);
        let rows: Vec<Vec<Felt>> = (0..3).map(|i| unit(7, i)).collect();
        assert!(c.is_totally_singular(&span(&c, &rows)));
        for extra in 3..7 {
            let mut r = rows.clone();
            r.push(unit(7, extra));
            assert!(!c.is_totally_singular(&span(&c, &r)));
        }
    }

    #[test]
    fn totally_singular_matches_exhaustive_check() {
        for q in [2u64, 3] {
            let c = ctx(2, q);
            let f = c.field();
            for d in 1..=3 {
                for s in linalg::all_subspaces(f, 5, d) {
                    let mut all_zero = true;
                    linalg::for_each_vector(f, d, |coef| {
                        let v = s.basis().vec_mul(f, coef);
                        if !c.eta(&v).is_zero() {
                            all_zero = false;
                        }
                    });
                    assert_eq!(c.is_totally_singular(&s), all_zero);
                }
            }
        }
    }

    #[test]
    fn singular_point_counts() {
        assert_eq!(ctx(1, 2).singular_points().len(), 3);
        assert_eq!(ctx(2, 2).singular_points().len(), 15);
        assert_eq!(ctx(2, 3).singular_points().len(), 40);
        for (n, q) in [(1usize, 5u64), (2, 4), (3, 2), (3, 3)] {
            let expected = (q.pow(2 * n as u32) - 1) / (q - 1);
            assert_eq!(ctx(n, q).singular_points().len() as u64, expected);
        }
    }

    #[test]
    fn hyperbolic_generators() {
        for (n, q, expected) in [(1usize, 2u64, 6usize), (1, 3, 8), (2, 2, 30)] {
            let f = Arc::new(FieldSpec::from_order(q).unwrap());
            assert_eq!(generator_count_hyperbolic(n, f, 1 << 20).unwrap(), expected);
            assert_eq!(kappa(n as u32, q), expected as u64);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = ctx(3, 3);
        assert!(matches!(c.totally_singular_subspaces(2, 10), Err(Error::BudgetExceeded { .. })));
    }

    proptest! {
        #[test]
        fn extensions_are_totally_singular(seed in 0usize..40) {
            let c = ctx(2, 3);
            let pts = c.singular_points();
            let p = &pts[seed % pts.len()];
            let u = span(&c, &[p.coords().to_vec()]);
            let ext = c.extensions(&u);
            // lines of Q(4,3) through a point: q + 1
            prop_assert_eq!(ext.len(), 4);
            for z in ext {
                prop_assert!(c.is_totally_singular(&z));
                prop_assert!(z.contains(c.field(), &u));
            }
        }
    }
}
