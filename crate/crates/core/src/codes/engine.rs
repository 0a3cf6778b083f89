//! Exhaustive codeword enumeration in Gray order.
//!
//! Messages are walked as base-p digit strings of length `K·e` (each
//! GF(p^e) message coordinate split over the additive basis `x^i`). Each step
//! adds one precomputed row `x^i · g_r` to the running codeword, so the cost
//! per message is one row update and one weight update. For `q = 2` the
//! rows are bit-packed and a step is a word-wise XOR plus popcount.
//!
//! The counter range `1..p^{K e}` is cut into contiguous shards; each shard
//! computes its starting codeword directly, so results do not depend on the
//! number of workers. Ties go to the smallest counter.

use rayon::prelude::*;

use crate::field::{Felt, FieldSpec};
use crate::gray;
use crate::linalg::Mat;

/// Lowest weight seen and the first counter reaching it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinHit {
    pub weight: u64,
    pub t: u64,
}

impl MinHit {
    fn better(self, o: MinHit) -> MinHit {
        if (o.weight, o.t) < (self.weight, self.t) {
            o
        } else {
            self
        }
    }
}

/// Precomputed step rows for a generator matrix.
pub struct Engine<'a> {
    field: &'a FieldSpec,
    n: usize,
    digits: usize,
    kind: Kind,
}

enum Kind {
    Binary { words: usize, rows: Vec<Vec<u64>> },
    General { rows: Vec<Vec<Felt>> },
}

impl<'a> Engine<'a> {
    pub fn new(field: &'a FieldSpec, g: &Mat) -> Engine<'a> {
        let n = g.cols();
        let e = field.e() as usize;
        let digits = g.rows() * e;
        let kind = if field.q() == 2 {
            let words = n.div_ceil(64).max(1);
            let rows = g
                .row_iter()
                .map(|r| {
                    let mut w = vec![0u64; words];
                    for (i, x) in r.iter().enumerate() {
                        if !x.is_zero() {
                            w[i / 64] |= 1 << (i % 64);
                        }
                    }
                    w
                })
                .collect();
            Kind::Binary { words, rows }
        } else {
            let mut rows = Vec::with_capacity(digits);
            for r in g.row_iter() {
                for i in 0..e {
                    let beta = field.basis_element(i as u32);
                    rows.push(r.iter().map(|&x| field.mul(beta, x)).collect());
                }
            }
            Kind::General { rows }
        };
        Engine { field, n, digits, kind }
    }

    /// Number of messages `q^K`, or `None` on overflow.
    pub fn messages(&self) -> Option<u64> {
        gray::space_size(self.field.p(), self.digits)
    }

    /// Message (one field element per generator row) visited at counter `t`.
    pub fn message_at(&self, t: u64) -> Vec<Felt> {
        let f = self.field;
        let e = f.e() as usize;
        let g = gray::state(t, f.p(), self.digits);
        g.chunks(e)
            .map(|ds| {
                ds.iter()
                    .enumerate()
                    .fold(Felt::ZERO, |acc, (i, &d)| f.add(acc, f.mul(f.from_int(d as i64), f.basis_element(i as u32))))
            })
            .collect()
    }

    fn shards(&self, total: u64) -> Vec<(u64, u64)> {
        if total <= 1 {
            return Vec::new();
        }
        let count = (rayon::current_num_threads() as u64 * 8).clamp(1, total - 1);
        let chunk = (total - 1).div_ceil(count);
        (0..count).map(|s| (1 + s * chunk, (1 + (s + 1) * chunk).min(total))).filter(|(lo, hi)| lo < hi).collect()
    }

    /// Minimum nonzero weight over counters `1..total`.
    pub fn min_weight(&self, total: u64) -> Option<MinHit> {
        self.shards(total).into_par_iter().map(|(lo, hi)| self.min_in(lo, hi)).reduce_with(MinHit::better)
    }

    /// Weight histogram (index = weight) over counters `0..total`.
    pub fn weights(&self, total: u64) -> Vec<u64> {
        let mut hist = self.shards(total).into_par_iter().map(|(lo, hi)| self.hist_in(lo, hi)).reduce(
            || vec![0; self.n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
        hist[0] += 1;
        hist
    }

    fn start_binary(&self, t: u64, words: usize, rows: &[Vec<u64>]) -> Vec<u64> {
        let g = gray::state(t, 2, self.digits);
        let mut cw = vec![0u64; words];
        for (j, &b) in g.iter().enumerate() {
            if b == 1 {
                cw.iter_mut().zip(&rows[j]).for_each(|(c, r)| *c ^= r);
            }
        }
        cw
    }

    fn start_general(&self, t: u64, rows: &[Vec<Felt>]) -> Vec<Felt> {
        let f = self.field;
        let g = gray::state(t, f.p(), self.digits);
        let mut cw = vec![Felt::ZERO; self.n];
        for (j, &d) in g.iter().enumerate() {
            let s = f.from_int(d as i64);
            if !s.is_zero() {
                for (c, &r) in cw.iter_mut().zip(&rows[j]) {
                    *c = f.add(*c, f.mul(s, r));
                }
            }
        }
        cw
    }

    /// Calls `step(t, weight)` for each counter in `lo..hi`.
    #[inline(always)]
    fn run(&self, lo: u64, hi: u64, mut step: impl FnMut(u64, u64)) {
        match &self.kind {
            Kind::Binary { words, rows } => {
                let mut cw = self.start_binary(lo - 1, *words, rows);
                if *words <= 3 {
                    let mut w = [0u64; 3];
                    w[..*words].copy_from_slice(&cw);
                    let packed: Vec<[u64; 3]> = rows
                        .iter()
                        .map(|r| {
                            let mut a = [0u64; 3];
                            a[..*words].copy_from_slice(r);
                            a
                        })
                        .collect();
                    for t in lo..hi {
                        let r = &packed[t.trailing_zeros() as usize];
                        w[0] ^= r[0];
                        w[1] ^= r[1];
                        w[2] ^= r[2];
                        let wt = w[0].count_ones() + w[1].count_ones() + w[2].count_ones();
                        step(t, wt as u64);
                    }
                } else {
                    for t in lo..hi {
                        let r = &rows[t.trailing_zeros() as usize];
                        let mut wt = 0;
                        for (c, &x) in cw.iter_mut().zip(r) {
                            *c ^= x;
                            wt += c.count_ones();
                        }
                        step(t, wt as u64);
                    }
                }
            }
            Kind::General { rows } => {
                let f = self.field;
                let p = f.p();
                let mut cw = self.start_general(lo - 1, rows);
                let mut wt = cw.iter().filter(|x| !x.is_zero()).count() as i64;
                for t in lo..hi {
                    let r = &rows[gray::step_digit(t, p)];
                    for (c, &x) in cw.iter_mut().zip(r) {
                        if x.is_zero() {
                            continue;
                        }
                        let was = !c.is_zero() as i64;
                        *c = f.add(*c, x);
                        wt += !c.is_zero() as i64 - was;
                    }
                    step(t, wt as u64);
                }
            }
        }
    }

    fn min_in(&self, lo: u64, hi: u64) -> MinHit {
        let mut best = MinHit { weight: u64::MAX, t: u64::MAX };
        self.run(lo, hi, |t, w| {
            if w < best.weight && w > 0 {
                best = MinHit { weight: w, t };
            }
        });
        best
    }

    fn hist_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        let mut h = vec![0u64; self.n + 1];
        self.run(lo, hi, |_, w| h[w as usize] += 1);
        h
    }

    /// Sequential walk over counters `1..=steps` using the engine's own step
    /// rows. Reports the generator row touched and the codeword after each
    /// step. Slow; meant for inspection.
    pub fn walk(&self, steps: u64, mut visit: impl FnMut(u64, usize, &[Felt])) {
        let f = self.field;
        let e = f.e() as usize;
        let step_rows: Vec<Vec<Felt>> = match &self.kind {
            Kind::Binary { rows, .. } => {
                rows.iter().map(|r| (0..self.n).map(|i| Felt(((r[i / 64] >> (i % 64)) & 1) as u16)).collect()).collect()
            }
            Kind::General { rows } => rows.clone(),
        };
        let mut cw = vec![Felt::ZERO; self.n];
        for t in 1..=steps {
            let d = gray::step_digit(t, f.p());
            for (c, &x) in cw.iter_mut().zip(&step_rows[d]) {
                *c = f.add(*c, x);
            }
            visit(t, d / e, &cw);
        }
    }
}
