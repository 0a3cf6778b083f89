//! Maximum clique by branch and bound with a greedy colouring bound.

/// Undirected graph on `0..n` with bit-packed adjacency rows.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<Vec<u64>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, adj: vec![vec![0; words]; n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "loops are not allowed");
        self.adj[a][b / 64] |= 1 << (b % 64);
        self.adj[b][a / 64] |= 1 << (a % 64);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b / 64] >> (b % 64) & 1 == 1
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    /// A maximum clique, sorted. Deterministic: among maximum cliques the
    /// one found first in vertex order is returned.
    pub fn max_clique(&self) -> Vec<usize> {
        let mut cand = vec![0u64; self.words];
        for v in 0..self.n {
            cand[v / 64] |= 1 << (v % 64);
        }
        let mut best = Vec::new();
        let mut cur = Vec::new();
        self.expand(&mut cur, cand, &mut best);
        best.sort_unstable();
        best
    }

    /// Greedy colouring of `cand`: vertices in colour order with the running
    /// colour count, which bounds the clique size among the vertex and its
    /// predecessors.
    fn colour(&self, cand: &[u64]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut left = cand.to_vec();
        let mut colour = 0;
        while left.iter().any(|&w| w != 0) {
            colour += 1;
            let mut avail = left.clone();
            while let Some(v) = first_bit(&avail) {
                avail[v / 64] &= !(1 << (v % 64));
                left[v / 64] &= !(1 << (v % 64));
                for (a, &adj) in avail.iter_mut().zip(&self.adj[v]) {
                    *a &= !adj;
                }
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&self, cur: &mut Vec<usize>, mut cand: Vec<u64>, best: &mut Vec<usize>) {
        let order = self.colour(&cand);
        for &(v, bound) in order.iter().rev() {
            if cur.len() + bound <= best.len() {
                return;
            }
            cur.push(v);
            let next: Vec<u64> = cand.iter().zip(&self.adj[v]).map(|(&c, &a)| c & a).collect();
            if next.iter().all(|&w| w == 0) {
                if cur.len() > best.len() {
                    *best = cur.clone();
                }
            } else {
                self.expand(cur, next, best);
            }
            cur.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}
