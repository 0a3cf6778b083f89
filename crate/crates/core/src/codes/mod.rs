//! Linear codes of projective systems: parameters, exact minimum distance,
//! weight enumerators and distance bounds.

pub mod engine;

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Felt, FieldSpec};
use crate::linalg::{self, Mat, ProjVec};
use engine::Engine;

/// Default cap on enumerated messages.
pub const DEFAULT_BUDGET: u64 = 1 << 30;

/// Distinct projective points given by canonical coordinate vectors.
#[derive(Clone, Debug)]
pub struct ProjSystem {
    field: Arc<FieldSpec>,
    ambient_dim: usize,
    points: Vec<ProjVec>,
}

impl ProjSystem {
    pub fn new(field: Arc<FieldSpec>, ambient_dim: usize, points: Vec<ProjVec>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if p.len() != ambient_dim {
                return Err(Error::DimMismatch { expected: ambient_dim, got: p.len() });
            }
            if !seen.insert(p) {
                return Err(Error::InvalidParams("projective system has a repeated point".into()));
            }
        }
        Ok(ProjSystem { field, ambient_dim, points })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn points(&self) -> &[ProjVec] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The points at `ids`, in that order.
    pub fn subsystem(&self, ids: &[usize]) -> Result<ProjSystem> {
        ProjSystem::new(self.field.clone(), self.ambient_dim, ids.iter().map(|&i| self.points[i].clone()).collect())
    }

    /// `ambient_dim x N` matrix whose columns are the points.
    pub fn column_matrix(&self) -> Mat {
        let mut m = Mat::zeros(self.ambient_dim, self.points.len());
        for (c, p) in self.points.iter().enumerate() {
            for (r, &x) in p.coords().iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Arc<FieldSpec>,
    generator: Mat,
    pub d_exact: Option<u64>,
    pub d_lower: u64,
    pub d_upper: u64,
    pub weights: Option<BTreeMap<u64, u64>>,
}

impl LinearCode {
    /// Wraps a full-rank generator matrix. Distance bounds start at the
    /// trivial `1 ≤ d ≤ min(Singleton, lightest row)`.
    pub fn from_generator(field: Arc<FieldSpec>, generator: Mat) -> Result<Self> {
        let r = linalg::rank(&field, &generator);
        if r != generator.rows() {
            return Err(Error::RankDeficient { rank: r, expected: generator.rows() });
        }
        let mut c = LinearCode { field, generator, d_exact: None, d_lower: 1, d_upper: 0, weights: None };
        c.d_upper = c.singleton().min(c.generator.row_iter().map(weight).min().unwrap_or(0));
        Ok(c)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generator(&self) -> &Mat {
        &self.generator
    }

    /// Length `N`.
    pub fn len(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.generator.cols() == 0
    }

    /// Dimension `K`.
    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn singleton(&self) -> u64 {
        (self.len() - self.dim() + 1) as u64
    }

    pub fn encode(&self, msg: &[Felt]) -> Vec<Felt> {
        self.generator.vec_mul(&self.field, msg)
    }

    fn message_budget(&self, budget: u64) -> Result<u64> {
        let q = self.field.q() as u128;
        let total = q.checked_pow(self.dim() as u32).unwrap_or(u128::MAX);
        if total - 1 > budget as u128 {
            return Err(Error::budget("codeword enumeration", total - 1, budget as u128));
        }
        Ok(total as u64)
    }

    /// Records an exact distance.
    pub fn set_exact(&mut self, d: u64) {
        self.d_exact = Some(d);
        self.d_lower = d;
        self.d_upper = d;
    }

    /// Writes the generator in the text format: `q N K`, then K rows.
    pub fn write_generator<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {} {}", self.field.q(), self.len(), self.dim())?;
        for r in self.generator.row_iter() {
            let line: Vec<String> = r.iter().map(|x| x.0.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_generator<R: BufRead>(r: R) -> Result<LinearCode> {
        let mut lines = r.lines();
        let bad = |m: &str| Error::InvalidParams(format!("generator file: {m}"));
        let header = lines.next().ok_or_else(|| bad("empty"))??;
        let h: Vec<u64> =
            header.split_whitespace().map(|t| t.parse().map_err(|_| bad("header"))).collect::<Result<_>>()?;
        let [q, n, k] = h[..] else {
            return Err(bad("header must be `q N K`"));
        };
        let field = Arc::new(FieldSpec::from_order(q)?);
        let mut rows = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let line = lines.next().ok_or_else(|| bad("missing row"))??;
            let row = line
                .split_whitespace()
                .map(|t| {
                    let v: u32 = t.parse().map_err(|_| bad("entry"))?;
                    field.element(v)
                })
                .collect::<Result<Vec<Felt>>>()?;
            rows.push(row);
        }
        LinearCode::from_generator(field, Mat::from_rows(n as usize, &rows)?)
    }
}

fn weight(v: &[Felt]) -> u64 {
    v.iter().filter(|x| !x.is_zero()).count() as u64
}

/// Generator matrix from the nonzero rows of the RREF of the point-column matrix.
pub fn code_from_system(s: &ProjSystem) -> Result<LinearCode> {
    if s.is_empty() {
        return Err(Error::InvalidParams("empty projective system".into()));
    }
    let red = linalg::rref(&s.field, &s.column_matrix());
    let rows: Vec<&[Felt]> = (0..red.rank).map(|i| red.mat.row(i)).collect();
    LinearCode::from_generator(s.field.clone(), Mat::from_rows(s.len(), &rows)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinDistance {
    pub d: u64,
    /// Message attaining `d`, first in Gray order.
    pub witness: Vec<u16>,
}

/// Exact minimum distance by exhaustive Gray-order enumeration.
pub fn min_distance(c: &LinearCode, budget: u64) -> Result<MinDistance> {
    let total = c.message_budget(budget)?;
    let eng = Engine::new(&c.field, &c.generator);
    let hit = eng.min_weight(total).ok_or_else(|| Error::InvalidParams("code has no nonzero codeword".into()))?;
    Ok(MinDistance { d: hit.weight, witness: eng.message_at(hit.t).iter().map(|x| x.0).collect() })
}

/// Full weight distribution (`weight -> count`, zero weights omitted except 0).
pub fn weight_enumerator(c: &LinearCode, budget: u64) -> Result<BTreeMap<u64, u64>> {
    let total = c.message_budget(budget)?;
    let eng = Engine::new(&c.field, &c.generator);
    Ok(eng.weights(total).into_iter().enumerate().filter(|&(_, n)| n > 0).map(|(w, n)| (w as u64, n)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneScan {
    pub d: u64,
    /// Largest `|Ω ∩ Σ|` over hyperplanes not containing Ω.
    pub max_section: u64,
    /// Weight distribution of the code, read off the hyperplane sections.
    pub weights: BTreeMap<u64, u64>,
}

/// `d = min_Σ (N - |Ω ∩ Σ|)` over hyperplanes `Σ` of the ambient space.
///
/// Hyperplanes are canonical functionals on the ambient coordinates; those
/// containing every point give the zero codeword and are skipped for `d`.
pub fn min_distance_by_hyperplanes(s: &ProjSystem, budget: u64) -> Result<HyperplaneScan> {
    let f = &*s.field;
    let a = s.ambient_dim;
    let q = f.q() as u128;
    let total = q.checked_pow(a as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::budget("hyperplane enumeration", total, budget as u128));
    }
    let n = s.len() as u64;
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for lead in 0..a {
        linalg::for_each_vector(f, a - lead - 1, |tail| {
            let mut h = vec![Felt::ZERO; a];
            h[lead] = Felt::ONE;
            h[lead + 1..].copy_from_slice(tail);
            let z = s.points.iter().filter(|p| f.dot(&h, p.coords()).is_zero()).count() as u64;
            *hist.entry(n - z).or_default() += 1;
        });
    }
    let d = hist
        .keys()
        .copied()
        .find(|&w| w > 0)
        .ok_or_else(|| Error::InvalidParams("every hyperplane contains the system".into()))?;
    // each codeword arises from q^(a - K) ambient functionals
    let k = linalg::rank(f, &s.column_matrix());
    let mult = q.pow((a - k) as u32);
    let mut weights = BTreeMap::new();
    weights.insert(0, 1);
    for (&w, &cnt) in &hist {
        let all = cnt as u128 * (q - 1);
        let c = if w == 0 { (all + 1) / mult - 1 } else { all / mult };
        if c > 0 {
            *weights.entry(w).or_default() += c as u64;
        }
    }
    Ok(HyperplaneScan { d, max_section: n - d, weights })
}

/// `ψ · (q^{k(n-k)} - 1) + 1`, a lower bound on the distance of `C_{k,n}` for
/// `k < n`, given the size `ψ` of a partial spread of `Q(2(n-k), q)`.
pub fn mr1_lower_bound(n: u32, k: u32, q: u64, psi: u64) -> Result<u64> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParams(format!("bound needs 1 <= k < n, got n={n} k={k}")));
    }
    if psi == 0 {
        return Err(Error::InvalidParams("psi must be positive".into()));
    }
    Ok(psi * (q.pow(k * (n - k)) - 1) + 1)
}

/// Tightens `d_upper` with `samples` seeded random messages and a Gray-order
/// prefix of the same length, and sets `d_lower` from `lower` if given.
pub fn bound_distance(c: &mut LinearCode, lower: Option<u64>, samples: u64, seed: u64) {
    let f = c.field.clone();
    let k = c.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best = c.d_upper;
    for _ in 0..samples {
        let msg: Vec<Felt> = (0..k).map(|_| Felt(rng.gen_range(0..f.q()) as u16)).collect();
        let w = weight(&c.encode(&msg));
        if w > 0 {
            best = best.min(w);
        }
    }
    let eng = Engine::new(&f, &c.generator);
    let prefix = eng.messages().map_or(samples + 1, |m| m.min(samples + 1));
    if let Some(hit) = eng.min_weight(prefix) {
        best = best.min(hit.weight);
    }
    c.d_upper = best;
    if let Some(l) = lower {
        c.d_lower = c.d_lower.max(l);
    }
}
