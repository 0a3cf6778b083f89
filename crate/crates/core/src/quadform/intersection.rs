//! Exhaustive search over quadrics of `PG(2n+1, q)` meeting the hyperbolic
//! quadric `Q⁺(2n+1, q)`, plus the eigenvector point-count identity for
//! quadrics with block matrix `[[0, M], [Mᵀ, B]]`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{monomial_count, tri_index, PolarCtx, QuadForm};
use crate::error::{Error, Result};
use crate::field::{Felt, FieldSpec};
use crate::gray;
use crate::linalg::{self, Mat, ProjVec};

/// Default cap on the size of the quadric coefficient space.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every quadric other than `Q⁺` itself.
    All,
    /// Only quadrics containing no generator of `Q⁺`.
    NoSharedGenerator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub lambda: u16,
    pub h1: Vec<u16>,
    pub h2: Vec<u16>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    pub n: usize,
    pub q: u32,
    pub mode: Mode,
    pub max: u64,
    /// Coefficients of the first maximizing quadric in Gray order, over the
    /// monomials `x_i x_j` (`i ≤ j`, row-major), projectively normalized.
    pub witness_coeffs: Vec<u16>,
    /// Closed form: the exact maximum in mode `all`, an upper bound in mode
    /// `no-shared-generator`. Only stated for odd q.
    pub formula_value: Option<u64>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    /// `witness - λ Q⁺ = h1 h2` with distinct hyperplanes, if such λ exists.
    pub witness_split: Option<Split>,
}

/// `(2q^{2n} - q^{2n-1} + 2q^{n+1} - 3q^n + q^{n-1} - 1) / (q - 1)`.
pub fn max_all_formula(n: u32, q: u64) -> u64 {
    let q = q as i128;
    let num = 2 * q.pow(2 * n) - q.pow(2 * n - 1) + 2 * q.pow(n + 1) - 3 * q.pow(n) + q.pow(n - 1) - 1;
    (num / (q - 1)) as u64
}

/// `(2q^n - q^{n-1} - 1)(q^n + 1) / (q - 1)`.
pub fn no_shared_generator_bound(n: u32, q: u64) -> u64 {
    (2 * q.pow(n) - q.pow(n - 1) - 1) * (q.pow(n) + 1) / (q - 1)
}

struct Lab {
    field: Arc<FieldSpec>,
    dim: usize,
    mons: usize,
    points: Vec<ProjVec>,
    /// `delta[d][P]`: change of the value at point `P` when Gray digit `d` steps.
    delta: Vec<Vec<Felt>>,
    generators: Vec<Vec<u64>>,
    plus: Vec<Felt>,
}

#[derive(Clone, Copy, Debug)]
struct Best {
    zeros: u64,
    t: u64,
}

impl Best {
    fn better(self, other: Best) -> Best {
        if other.zeros > self.zeros || (other.zeros == self.zeros && other.t < self.t) {
            other
        } else {
            self
        }
    }
}

impl Lab {
    fn new(n: usize, field: Arc<FieldSpec>) -> Result<Lab> {
        let dim = 2 * n + 2;
        let mons = monomial_count(dim);
        let ctx = PolarCtx::new(field.clone(), QuadForm::hyperbolic(n + 1));
        let mut points = ctx.singular_points();
        points.sort_unstable();
        let index: HashMap<&ProjVec, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let words = points.len().div_ceil(64);
        let generators = ctx
            .totally_singular_subspaces(n + 1, 1 << 20)?
            .iter()
            .map(|g| {
                let mut mask = vec![0u64; words];
                for p in g.points(&field) {
                    let i = index[&p];
                    mask[i / 64] |= 1 << (i % 64);
                }
                mask
            })
            .collect();
        let f = &*field;
        let e = f.e() as usize;
        let mut delta = Vec::with_capacity(mons * e);
        for a in 0..dim {
            for b in a..dim {
                debug_assert_eq!(delta.len(), tri_index(dim, a, b) * e);
                for i in 0..e {
                    let beta = f.basis_element(i as u32);
                    delta.push(points.iter().map(|p| f.mul(beta, f.mul(p.coords()[a], p.coords()[b]))).collect());
                }
            }
        }
        Ok(Lab {
            field: field.clone(),
            dim,
            mons,
            points,
            delta,
            generators,
            plus: QuadForm::hyperbolic(n + 1).coeffs().to_vec(),
        })
    }

    fn digits(&self) -> usize {
        self.mons * self.field.e() as usize
    }

    fn coeffs_at(&self, t: u64) -> Vec<Felt> {
        let f = &*self.field;
        let e = f.e() as usize;
        let g = gray::state(t, f.p(), self.digits());
        (0..self.mons)
            .map(|j| {
                (0..e).fold(Felt::ZERO, |acc, i| {
                    let digit = f.from_int(g[j * e + i] as i64);
                    f.add(acc, f.mul(digit, f.basis_element(i as u32)))
                })
            })
            .collect()
    }

    fn values(&self, c: &[Felt]) -> Vec<Felt> {
        let form = QuadForm::from_coeffs(self.dim, c.to_vec()).expect("sized");
        self.points.iter().map(|p| form.eval_unchecked(&self.field, p.coords())).collect()
    }

    fn is_multiple_of_plus(&self, c: &[Felt]) -> bool {
        let f = &*self.field;
        f.elements().any(|l| c.iter().zip(&self.plus).all(|(&a, &b)| a == f.mul(l, b)))
    }

    fn contains_generator(&self, vals: &[Felt]) -> bool {
        let mut mask = vec![0u64; self.points.len().div_ceil(64)];
        for (i, v) in vals.iter().enumerate() {
            if v.is_zero() {
                mask[i / 64] |= 1 << (i % 64);
            }
        }
        self.generators.iter().any(|g| g.iter().zip(&mask).all(|(&gw, &mw)| gw & !mw == 0))
    }

    fn admissible(&self, mode: Mode, t: u64, zeros: u64, vals: &[Felt]) -> bool {
        if zeros == self.points.len() as u64 && self.is_multiple_of_plus(&self.coeffs_at(t)) {
            return false;
        }
        match mode {
            Mode::All => true,
            Mode::NoSharedGenerator => !self.contains_generator(vals),
        }
    }

    /// Best quadric over Gray counters `lo..hi` (with `lo ≥ 1`).
    fn sweep(&self, mode: Mode, lo: u64, hi: u64) -> Option<Best> {
        let f = &*self.field;
        let p = f.p();
        let mut c = self.coeffs_at(lo - 1);
        let mut vals = self.values(&c);
        let mut zeros = vals.iter().filter(|v| v.is_zero()).count() as u64;
        let e = f.e() as usize;
        let mut best: Option<Best> = None;
        for t in lo..hi {
            let d = gray::step_digit(t, p);
            let j = d / e;
            c[j] = f.add(c[j], f.basis_element((d % e) as u32));
            for (v, &dv) in vals.iter_mut().zip(&self.delta[d]) {
                let nv = f.add(*v, dv);
                zeros = zeros + nv.is_zero() as u64 - v.is_zero() as u64;
                *v = nv;
            }
            if best.is_none_or(|b| zeros > b.zeros) && self.admissible(mode, t, zeros, &vals) {
                best = Some(Best { zeros, t });
            }
        }
        best
    }
}

/// Maximum of `|Q ∩ Q⁺(2n+1, q)|` over quadrics `Q ≠ Q⁺`, by exhaustive
/// enumeration of coefficient vectors (`q^{(2n+2)(2n+3)/2}` of them).
pub fn intersection_max(n: usize, field: Arc<FieldSpec>, mode: Mode, budget: u64) -> Result<IntersectionReport> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let dim = 2 * n + 2;
    let digits = monomial_count(dim) * field.e() as usize;
    let total = gray::space_size(field.p(), digits).filter(|&s| s <= budget).ok_or_else(|| {
        let needed = (field.p() as f64).powi(digits as i32).min(u128::MAX as f64) as u128;
        Error::budget("quadric coefficient space", needed, budget as u128)
    })?;
    let lab = Lab::new(n, field.clone())?;

    let shards = (rayon::current_num_threads() as u64 * 4).clamp(1, total - 1);
    let chunk = (total - 1).div_ceil(shards);
    let best = (0..shards)
        .into_par_iter()
        .filter_map(|s| {
            let lo = 1 + s * chunk;
            let hi = (lo + chunk).min(total);
            (lo < hi).then(|| lab.sweep(mode, lo, hi)).flatten()
        })
        .reduce_with(Best::better)
        .ok_or_else(|| Error::InvalidParams("no admissible quadric".into()))?;

    let witness = linalg::canonical_projective(&field, &lab.coeffs_at(best.t))?;
    let q = field.q() as u64;
    let formula_value = (q % 2 == 1).then(|| match mode {
        Mode::All => max_all_formula(n as u32, q),
        Mode::NoSharedGenerator => no_shared_generator_bound(n as u32, q),
    });
    let matches = formula_value.map(|v| match mode {
        Mode::All => best.zeros == v,
        Mode::NoSharedGenerator => best.zeros <= v,
    });
    let witness_split = split_against_plus(n, &field, witness.coords());
    Ok(IntersectionReport {
        n,
        q: field.q(),
        mode,
        max: best.zeros,
        witness_coeffs: witness.coords().iter().map(|x| x.0).collect(),
        formula_value,
        matches,
        witness_split,
    })
}

/// Coefficients of the product of two linear forms.
fn product(f: &FieldSpec, h1: &[Felt], h2: &[Felt]) -> Vec<Felt> {
    let dim = h1.len();
    let mut out = Vec::with_capacity(monomial_count(dim));
    for a in 0..dim {
        for b in a..dim {
            out.push(if a == b { f.mul(h1[a], h2[a]) } else { f.add(f.mul(h1[a], h2[b]), f.mul(h1[b], h2[a])) });
        }
    }
    out
}

/// Finds `λ` and distinct hyperplanes with `coeffs - λ·Q⁺ = h1·h2` up to a scalar.
pub fn split_against_plus(n: usize, f: &FieldSpec, coeffs: &[Felt]) -> Option<Split> {
    let dim = 2 * n + 2;
    let plus = QuadForm::hyperbolic(n + 1);
    let planes = linalg::projective_points(f, dim);
    for lambda in f.elements() {
        let r: Vec<Felt> = coeffs.iter().zip(plus.coeffs()).map(|(&c, &p)| f.sub(c, f.mul(lambda, p))).collect();
        let Ok(r) = linalg::canonical_projective(f, &r) else {
            continue;
        };
        for (i, h1) in planes.iter().enumerate() {
            for h2 in &planes[i + 1..] {
                let prod = product(f, h1.coords(), h2.coords());
                if let Ok(prod) = linalg::canonical_projective(f, &prod) {
                    if prod == r {
                        let ints = |h: &ProjVec| h.coords().iter().map(|x| x.0).collect();
                        return Some(Split { lambda: lambda.0, h1: ints(h1), h2: ints(h2) });
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub lhs: u64,
    pub rhs: u64,
    /// Nonzero eigenvectors of `M` (any eigenvalue, including 0).
    pub eigenvectors: u64,
    /// Eigenvectors `Y` with `YᵀBY = 0`.
    pub isotropic_eigenvectors: u64,
    pub equal: bool,
}

/// Counts the points of `Q ∩ Q⁺` for `Q = [[0, M], [Mᵀ, B]]` by brute force and
/// compares with the eigenvector formula.
pub fn intersection_formula_check(m: &Mat, b: &Mat, n: usize, f: &FieldSpec) -> Result<FormulaCheck> {
    if f.is_even_char() {
        return Err(Error::EvenCharacteristic);
    }
    let h = n + 1;
    for mat in [m, b] {
        if mat.rows() != h || mat.cols() != h {
            return Err(Error::DimMismatch { expected: h, got: if mat.rows() != h { mat.rows() } else { mat.cols() } });
        }
    }
    if *b != b.transpose() {
        return Err(Error::InvalidParams("B must be symmetric".into()));
    }
    let mt = m.transpose();
    let mut ys = Vec::new();
    linalg::for_each_vector(f, h, |y| ys.push(y.to_vec()));

    let mut affine = 0u64;
    let mut eig = 0u64;
    let mut eig0 = 0u64;
    for y in &ys {
        // M Y as a row vector is Y Mᵀ
        let my = mt.vec_mul(f, y);
        let yby = f.dot(y, &b.vec_mul(f, y));
        if let Some(i) = y.iter().position(|v| !v.is_zero()) {
            let l = f.div(my[i], y[i])?;
            if my.iter().zip(y).all(|(&a, &c)| a == f.mul(l, c)) {
                eig += 1;
                if yby.is_zero() {
                    eig0 += 1;
                }
            }
        }
        let two_my: Vec<Felt> = my.iter().map(|&v| f.add(v, v)).collect();
        linalg::for_each_vector(f, h, |x| {
            if f.dot(x, y).is_zero() && f.add(f.dot(x, &two_my), yby).is_zero() {
                affine += 1;
            }
        });
    }
    let q = f.q() as u64;
    let lhs = (affine - 1) / (q - 1);
    let (nn, qn) = (n as u32, q as i128);
    let num = qn.pow(nn - 1) * (qn.pow(nn + 1) - 1 - eig as i128) + qn.pow(nn) * eig0 as i128;
    let den = qn - 1;
    let rhs = (num / den + (qn.pow(nn + 1) - 1) / den) as u64;
    let equal = num % den == 0 && lhs == rhs;
    Ok(FormulaCheck { lhs, rhs, eigenvectors: eig, isotropic_eigenvectors: eig0, equal })
}
