//! The orthogonal Grassmannian Δ_k of a parabolic quadric: its points
//! (totally singular k-subspaces), its lines, and its Plücker embedding.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::codes::ProjSystem;
use crate::error::{Error, Result};
use crate::field::{Felt, FieldSpec};
use crate::linalg::{self, Mat, Subspace};
use crate::quadform::{PolarCtx, QuadForm};

/// Default cap on the number of subspaces held at any enumeration level.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct GrassCtx {
    n: usize,
    k: usize,
    polar: PolarCtx,
}

impl GrassCtx {
    pub fn new(n: usize, k: usize, field: Arc<FieldSpec>) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParams(format!("need 1 <= k <= n, got n={n} k={k}")));
        }
        Ok(GrassCtx { n, k, polar: PolarCtx::new(field, QuadForm::parabolic(n)) })
    }

    pub fn from_order(n: usize, k: usize, q: u64) -> Result<Self> {
        GrassCtx::new(n, k, Arc::new(FieldSpec::from_order(q)?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &FieldSpec {
        self.polar.field()
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        self.polar.field_arc()
    }

    pub fn polar(&self) -> &PolarCtx {
        &self.polar
    }

    /// Ambient dimension `2n + 1`.
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn with_k(&self, k: usize) -> Result<GrassCtx> {
        if k == 0 || k > self.n {
            return Err(Error::InvalidParams(format!("need 1 <= k <= n, got n={} k={k}", self.n)));
        }
        Ok(GrassCtx { n: self.n, k, polar: self.polar.clone() })
    }

    /// Whether two distinct points of Δ_k lie on a common line.
    pub fn collinear(&self, a: &Subspace, b: &Subspace) -> bool {
        let f = self.field();
        if a == b || a.intersection(f, b).dim() + 1 != self.k {
            return false;
        }
        self.k == self.n || self.polar.is_totally_singular(&a.sum(f, b))
    }
}

/// `Π_{i=0}^{k-1} (q^{2(n-i)} - 1) / (q^{i+1} - 1)`.
pub fn delta_point_count(n: u32, k: u32, q: u64) -> u128 {
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(2 * (n - i)) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// The point set of Δ_k with stable ids (position in sorted order).
#[derive(Clone, Debug)]
pub struct Delta {
    ctx: GrassCtx,
    points: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
}

impl Delta {
    pub fn enumerate(ctx: &GrassCtx, cap: usize) -> Result<Delta> {
        let q = ctx.field().q() as u64;
        let expected = delta_point_count(ctx.n as u32, ctx.k as u32, q);
        if expected > cap as u128 {
            return Err(Error::budget("points of the Grassmannian", expected, cap as u128));
        }
        let points = ctx.polar.totally_singular_subspaces(ctx.k, cap)?;
        Ok(Delta::from_sorted(ctx.clone(), points))
    }

    /// Wraps a sorted, deduplicated point list.
    pub fn from_sorted(ctx: GrassCtx, points: Vec<Subspace>) -> Delta {
        let index = points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Delta { ctx, points, index }
    }

    pub fn ctx(&self) -> &GrassCtx {
        &self.ctx
    }

    pub fn points(&self) -> &[Subspace] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn id(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn enumerate_lines(&self, cap: usize) -> Result<Vec<DeltaLine>> {
        let ctx = &self.ctx;
        let f = ctx.field();
        let lookup = |z: &Subspace| {
            self.id(z).ok_or_else(|| Error::InvalidParams("line point outside the enumerated Grassmannian".into()))
        };
        let mut lines = Vec::new();
        if ctx.k < ctx.n {
            let ys = ctx.polar.totally_singular_subspaces(ctx.k + 1, cap)?;
            let coord_x = linalg::all_subspaces(f, ctx.k + 1, ctx.k - 1);
            let lines_per_y = coord_x.len();
            if ys.len().saturating_mul(lines_per_y) > cap {
                return Err(Error::budget("lines of the Grassmannian", (ys.len() * lines_per_y) as u128, cap as u128));
            }
            let built: Vec<Result<Vec<DeltaLine>>> = ys
                .par_iter()
                .map(|y| {
                    coord_x
                        .iter()
                        .map(|c| {
                            let x = Subspace::span(f, &c.basis().mul(f, y.basis())?);
                            let mut pts = Vec::with_capacity(f.q() as usize + 1);
                            for w in complement_points(f, c) {
                                let mut d = c.basis().clone();
                                d.push_row(w.coords())?;
                                let z = Subspace::span(f, &d.mul(f, y.basis())?);
                                pts.push(lookup(&z)?);
                            }
                            pts.sort_unstable();
                            Ok(DeltaLine { kind: LineKind::Interior { x, y: y.clone() }, points: pts })
                        })
                        .collect()
                })
                .collect();
            for b in built {
                lines.extend(b?);
            }
        } else {
            let xs = ctx.polar.totally_singular_subspaces(ctx.n - 1, cap)?;
            let built: Vec<Result<DeltaLine>> = xs
                .par_iter()
                .map(|x| {
                    let mut pts = ctx.polar.extensions(x).iter().map(&lookup).collect::<Result<Vec<_>>>()?;
                    pts.sort_unstable();
                    Ok(DeltaLine { kind: LineKind::Conic { x: x.clone() }, points: pts })
                })
                .collect();
            for b in built {
                lines.push(b?);
            }
        }
        Ok(lines)
    }

    /// Plücker images, one per point, in id order.
    pub fn embed(&self) -> Result<ProjSystem> {
        let f = self.ctx.field();
        let pts = self.points.par_iter().map(|p| linalg::wedge_minors(f, p.basis())).collect::<Result<Vec<_>>>()?;
        let len = linalg::binomial(self.ctx.dim() as u64, self.ctx.k as u64) as usize;
        ProjSystem::new(self.ctx.field_arc().clone(), len, pts)
    }

    /// Row-major basis matrices of all points, for serialization.
    pub fn point_matrices(&self) -> Vec<Vec<u16>> {
        self.points.iter().map(|p| p.basis().data().iter().map(|x| x.0).collect()).collect()
    }

    /// Rebuilds from row-major basis matrices; each must already be canonical.
    pub fn from_point_matrices(ctx: GrassCtx, rows: &[Vec<u16>]) -> Result<Delta> {
        let (k, dim) = (ctx.k, ctx.dim());
        let f = ctx.field();
        let mut points = Vec::with_capacity(rows.len());
        for r in rows {
            let data = r.iter().map(|&x| f.element(x as u32)).collect::<Result<Vec<Felt>>>()?;
            let m = Mat::from_vec(k, dim, data)?;
            let s = Subspace::span(f, &m);
            if s.basis() != &m || !ctx.polar.is_totally_singular(&s) {
                return Err(Error::InvalidParams("stored point is not a canonical totally singular subspace".into()));
            }
            points.push(s);
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("stored points are not sorted and distinct".into()));
        }
        Ok(Delta::from_sorted(ctx, points))
    }
}

/// Projective points of the complement of `c` formed by vectors vanishing on its pivots.
fn complement_points(f: &FieldSpec, c: &Subspace) -> Vec<linalg::ProjVec> {
    let m = c.ambient();
    let pivots = c.pivots();
    let free: Vec<usize> = (0..m).filter(|i| !pivots.contains(i)).collect();
    let mut rows = Vec::new();
    for &i in &free {
        let mut v = vec![Felt::ZERO; m];
        v[i] = Felt::ONE;
        rows.push(v);
    }
    Subspace::span(f, &Mat::from_rows(m, &rows).expect("width")).points(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineKind {
    /// `{Z : X ⊂ Z ⊂ Y}` with `dim X = k-1`, `dim Y = k+1`, for `k < n`.
    Interior { x: Subspace, y: Subspace },
    /// `{Z : X ⊂ Z ⊂ X^⊥}` with `dim X = n-1`, for `k = n`.
    Conic { x: Subspace },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaLine {
    pub kind: LineKind,
    /// Sorted point ids.
    pub points: Vec<usize>,
}
