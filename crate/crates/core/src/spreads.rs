//! Partial spreads of the parabolic quadric `Q(2m, q)`: sets of pairwise
//! disjoint generators (totally singular m-subspaces).

use std::sync::Arc;

use serde::Serialize;

use crate::clique::Graph;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{self, Subspace};
use crate::quadform::{PolarCtx, QuadForm};

/// Default cap on the number of generators for the exact search.
pub const DEFAULT_VERTEX_CAP: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Greedy,
}

#[derive(Clone, Debug)]
pub struct SpreadResult {
    pub m: usize,
    pub q: u32,
    pub size: usize,
    /// True when `size` is the maximum (exhaustive clique search).
    pub exact: bool,
    /// The witness covers every point of the quadric.
    pub is_spread: bool,
    pub witness: Vec<Subspace>,
    pub generator_count: usize,
}

impl SpreadResult {
    /// Sizes a full spread would have under the two candidate closed forms
    /// `q^m + 1` and `q^{m+1} + 1`.
    pub fn closed_forms(&self) -> (u64, u64) {
        let q = self.q as u64;
        (q.pow(self.m as u32) + 1, q.pow(self.m as u32 + 1) + 1)
    }
}

fn disjoint(f: &FieldSpec, a: &Subspace, b: &Subspace) -> bool {
    let m = a.basis().stack(b.basis()).expect("same ambient space");
    linalg::rank(f, &m) == a.dim() + b.dim()
}

/// Largest (exact) or a maximal (greedy) partial spread of `Q(2m, q)`.
pub fn max_partial_spread(m: usize, field: Arc<FieldSpec>, method: Method, vertex_cap: usize) -> Result<SpreadResult> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    let ctx = PolarCtx::new(field.clone(), QuadForm::parabolic(m));
    let f = &*field;
    let gens = match method {
        Method::Exact => {
            let g = ctx.totally_singular_subspaces(m, vertex_cap)?;
            if g.len() > vertex_cap {
                return Err(Error::budget("spread search vertices", g.len() as u128, vertex_cap as u128));
            }
            g
        }
        Method::Greedy => ctx.totally_singular_subspaces(m, usize::MAX)?,
    };
    let chosen: Vec<usize> = match method {
        Method::Exact => {
            let mut g = Graph::new(gens.len());
            for a in 0..gens.len() {
                for b in a + 1..gens.len() {
                    if disjoint(f, &gens[a], &gens[b]) {
                        g.add_edge(a, b);
                    }
                }
            }
            g.max_clique()
        }
        Method::Greedy => {
            let mut chosen: Vec<usize> = Vec::new();
            for (i, x) in gens.iter().enumerate() {
                if chosen.iter().all(|&j| disjoint(f, x, &gens[j])) {
                    chosen.push(i);
                }
            }
            chosen
        }
    };
    let q = field.q() as u64;
    let points = (q.pow(2 * m as u32) - 1) / (q - 1);
    let per_gen = (q.pow(m as u32) - 1) / (q - 1);
    Ok(SpreadResult {
        m,
        q: field.q(),
        size: chosen.len(),
        exact: method == Method::Exact,
        is_spread: chosen.len() as u64 * per_gen == points,
        witness: chosen.iter().map(|&i| gens[i].clone()).collect(),
        generator_count: gens.len(),
    })
}
