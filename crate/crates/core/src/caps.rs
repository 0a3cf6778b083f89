//! Polar caps of Δ_k built from hyperbolic index pairs, their truncations,
//! and brute-force cap verifiers.
//!
//! Indices are 1-based as in `I = {1, …, 2n+1}`, with `i' = i ± n` for
//! `i ≤ 2n` and `(2n+1)' = 2n+1`. Under the form `Σ x_i x_{n+i} + x_{2n+1}^2`
//! the pair `e_i, e_{i'}` is hyperbolic for `i ≤ 2n`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::grassmann::GrassCtx;
use crate::linalg::{self, Mat, ProjVec, Subspace};

/// Which table of generators applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Table {
    /// `2n+1 ∉ J`.
    One,
    /// `2n+1 ∈ J`.
    Two,
}

impl Table {
    pub fn number(self) -> u8 {
        match self {
            Table::One => 1,
            Table::Two => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapSpec {
    pub n: usize,
    /// Sorted, 1-based.
    pub j: Vec<usize>,
    /// Hyperbolic pairs `(j_i, j_i')` inside `J`, with `j_i ≤ n`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Unpaired members of `J` other than `2n+1`.
    pub jbar: Vec<usize>,
    /// `m_1 < … < m_r`.
    pub m: Vec<usize>,
    /// Extra index used when `2n+1 ∈ J`.
    pub ell: Option<usize>,
    /// `τ(j_i) = m_{tau[i]}`; the identity by default.
    pub tau: Vec<usize>,
}

/// `i'` for 1-based `i` in a space of dimension `2n+1`.
pub fn prime(n: usize, i: usize) -> usize {
    if i <= n {
        i + n
    } else if i <= 2 * n {
        i - n
    } else {
        i
    }
}

/// Picks `M` (and `ℓ`) as the smallest indices of `{1..n} \ (J ∪ J')`.
pub fn choose_m(n: usize, j: &[usize]) -> Result<(Vec<usize>, Option<usize>)> {
    let spec = CapSpec::new(n, j, None)?;
    Ok((spec.m, spec.ell))
}

impl CapSpec {
    pub fn new(n: usize, j: &[usize], tau: Option<Vec<usize>>) -> Result<CapSpec> {
        let top = 2 * n + 1;
        let mut js = j.to_vec();
        js.sort_unstable();
        if js.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidJ("duplicate index".into()));
        }
        if js.is_empty() {
            return Err(Error::InvalidJ("J is empty".into()));
        }
        if js.iter().any(|&i| i == 0 || i > top) {
            return Err(Error::InvalidJ(format!("indices must lie in 1..={top}")));
        }
        if js.len() > n {
            return Err(Error::InvalidJ(format!("|J| = {} exceeds n = {n}", js.len())));
        }
        let pairs: Vec<(usize, usize)> =
            js.iter().filter(|&&i| i <= n && js.contains(&(i + n))).map(|&i| (i, i + n)).collect();
        let paired: HashSet<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let jbar: Vec<usize> = js.iter().copied().filter(|i| !paired.contains(i) && *i != top).collect();
        let has_top = js.contains(&top);
        let used: HashSet<usize> = js.iter().flat_map(|&i| [i, prime(n, i)]).collect();
        let u: Vec<usize> = (1..=n).filter(|i| !used.contains(i)).collect();
        let r = pairs.len();
        let need = r + has_top as usize;
        if u.len() < need {
            return Err(Error::InvalidJ(format!(
                "only {} free indices in 1..={n} outside J ∪ J', need {need}",
                u.len()
            )));
        }
        let tau = tau.unwrap_or_else(|| (0..r).collect());
        let mut sorted = tau.clone();
        sorted.sort_unstable();
        if sorted != (0..r).collect::<Vec<_>>() {
            return Err(Error::InvalidJ("tau must be a permutation of the pairs".into()));
        }
        Ok(CapSpec { n, j: js, pairs, jbar, m: u[..r].to_vec(), ell: has_top.then(|| u[r]), tau })
    }

    pub fn r(&self) -> usize {
        self.pairs.len()
    }

    pub fn k(&self) -> usize {
        self.j.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn table(&self) -> Table {
        if self.ell.is_some() {
            Table::Two
        } else {
            Table::One
        }
    }

    /// `m_i` paired with `j_i` under `τ`.
    fn partner(&self, i: usize) -> usize {
        self.m[self.tau[i]]
    }

    /// Integer generator rows of `X_S`, in table order. `s` has bit `i` set
    /// when `m_{i+1} ∈ S`.
    pub fn rows(&self, s: usize) -> Vec<Vec<i64>> {
        let dim = self.dim();
        let n = self.n;
        let unit = |terms: &[(usize, i64)]| {
            let mut v = vec![0i64; dim];
            for &(i, c) in terms {
                v[i - 1] += c;
            }
            v
        };
        let mut out = Vec::with_capacity(self.k());
        let r = self.r();
        for (i, &(j, _)) in self.pairs.iter().enumerate() {
            let m = self.partner(i);
            let in_s = s >> self.tau[i] & 1 == 1;
            out.push(if in_s { unit(&[(j, 1), (prime(n, m), -1)]) } else { unit(&[(j, 1), (m, 1)]) });
        }
        for (i, &(_, jp)) in self.pairs.iter().enumerate() {
            let m = self.partner(i);
            let in_s = s >> self.tau[i] & 1 == 1;
            out.push(if in_s { unit(&[(jp, 1), (m, 1)]) } else { unit(&[(jp, 1), (prime(n, m), -1)]) });
        }
        debug_assert_eq!(out.len(), 2 * r);
        if let Some(l) = self.ell {
            out.push(unit(&[(l, 1), (dim, 1), (prime(n, l), -1)]));
        }
        for &j in &self.jbar {
            out.push(unit(&[(j, 1)]));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CapFamily {
    pub spec: CapSpec,
    pub table: Table,
    /// Integer generator rows per member, indexed by the bitmask of `S`.
    pub rows: Vec<Vec<Vec<i64>>>,
    pub members: Vec<Subspace>,
    pub truncated: bool,
}

/// Builds `{X_S : S ⊆ M}`. `table = None` picks the table matching `J`.
pub fn build_cap(f: &FieldSpec, spec: &CapSpec, table: Option<u8>) -> Result<CapFamily> {
    if f.is_even_char() {
        return Err(Error::EvenCharacteristic);
    }
    let actual = spec.table();
    if let Some(t) = table {
        if t != actual.number() {
            return Err(Error::TableMismatch {
                requested: t,
                membership: if actual == Table::Two { "in" } else { "not in" },
            });
        }
    }
    let rows: Vec<Vec<Vec<i64>>> = (0..1usize << spec.r()).map(|s| spec.rows(s)).collect();
    family(f, spec.clone(), actual, rows, false)
}

fn family(f: &FieldSpec, spec: CapSpec, table: Table, rows: Vec<Vec<Vec<i64>>>, truncated: bool) -> Result<CapFamily> {
    let members = rows
        .iter()
        .map(|r| {
            let m = Mat::from_ints(f, r)?;
            let s = Subspace::span(f, &m);
            if s.dim() != r.len() {
                return Err(Error::RankDeficient { rank: s.dim(), expected: r.len() });
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CapFamily { spec, table, rows, members, truncated })
}

impl CapFamily {
    pub fn r(&self) -> usize {
        self.spec.r()
    }

    /// Dimension of each member.
    pub fn member_dim(&self) -> usize {
        self.members.first().map_or(0, |m| m.dim())
    }

    /// Keeps the first `2r` (table 1) or `2r + 1` (table 2) generators.
    pub fn truncate(&self, f: &FieldSpec) -> Result<CapFamily> {
        let keep = 2 * self.r() + (self.table == Table::Two) as usize;
        let rows = self.rows.iter().map(|r| r[..keep].to_vec()).collect();
        family(f, self.spec.clone(), self.table, rows, true)
    }

    /// Plücker images of the members.
    pub fn embed(&self, f: &FieldSpec) -> Result<Vec<ProjVec>> {
        self.members.iter().map(|m| linalg::wedge_minors(f, m.basis())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarCapCheck {
    /// Largest number of the given points on one line of Δ_k.
    pub max_line_incidence: usize,
    /// Indices (into the input) of the points on a line attaining the max,
    /// when that max exceeds 1.
    pub violating_line: Option<Vec<usize>>,
}

/// Line of Δ_k through two collinear points, as a hashable key.
fn line_key(ctx: &GrassCtx, a: &Subspace, b: &Subspace) -> (Subspace, Option<Subspace>) {
    let f = ctx.field();
    let x = a.intersection(f, b);
    if ctx.k() < ctx.n() {
        (x, Some(a.sum(f, b)))
    } else {
        (x, None)
    }
}

/// Maximum number of `points` on a line of Δ_k.
///
/// Lines meeting the set twice or more are found from collinear pairs, so
/// the cost is quadratic in the set rather than linear in the lines of Δ_k.
/// Every point of Δ_k lies on some line, so a nonempty set gives at least 1.
pub fn verify_polar_cap(ctx: &GrassCtx, points: &[Subspace]) -> PolarCapCheck {
    let pairs: Vec<(usize, usize)> =
        (0..points.len()).flat_map(|a| (a + 1..points.len()).map(move |b| (a, b))).collect();
    let keyed: Vec<(usize, usize, (Subspace, Option<Subspace>))> = pairs
        .par_iter()
        .filter(|&&(a, b)| ctx.collinear(&points[a], &points[b]))
        .map(|&(a, b)| (a, b, line_key(ctx, &points[a], &points[b])))
        .collect();
    let mut groups: HashMap<(Subspace, Option<Subspace>), Vec<usize>> = HashMap::new();
    for (a, b, key) in keyed {
        let g = groups.entry(key).or_default();
        for v in [a, b] {
            if !g.contains(&v) {
                g.push(v);
            }
        }
    }
    let worst = groups
        .into_values()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    match worst {
        Some(g) => PolarCapCheck { max_line_incidence: g.len(), violating_line: Some(g) },
        None => PolarCapCheck { max_line_incidence: usize::from(!points.is_empty()), violating_line: None },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveCapCheck {
    pub ok: bool,
    /// Sorted indices of three collinear points, the least such triple.
    pub violating_triple: Option<[usize; 3]>,
}

/// Whether no three of the points are collinear in projective space.
///
/// For each pair `a < b` the other points of the line `ab` are looked up by
/// hash, which is equivalent to testing every triple for rank 3.
pub fn verify_projective_cap(f: &FieldSpec, points: &[ProjVec]) -> ProjectiveCapCheck {
    let index: HashMap<&ProjVec, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let units: Vec<_> = f.elements().skip(1).collect();
    let triple = (0..points.len())
        .into_par_iter()
        .filter_map(|a| {
            let mut found: Option<[usize; 3]> = None;
            for b in a + 1..points.len() {
                for &l in &units {
                    let v: Vec<_> = points[a]
                        .coords()
                        .iter()
                        .zip(points[b].coords())
                        .map(|(&x, &y)| f.add(x, f.mul(l, y)))
                        .collect();
                    let Ok(c) = linalg::canonical_projective(f, &v) else {
                        continue;
                    };
                    if let Some(&i) = index.get(&c) {
                        if i != a && i != b {
                            let mut t = [a, b, i];
                            t.sort_unstable();
                            found = Some(found.map_or(t, |o| o.min(t)));
                        }
                    }
                }
            }
            found
        })
        .min();
    ProjectiveCapCheck { ok: triple.is_none(), violating_triple: triple }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{Delta, DEFAULT_CAP};
    use crate::quadform::{PolarCtx, QuadForm};
    use std::sync::Arc;

    fn gf(q: u64) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::from_order(q).unwrap())
    }

    fn triple_oracle(f: &FieldSpec, pts: &[ProjVec]) -> bool {
        let n = pts.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let m = Mat::from_rows(pts[a].len(), &[pts[a].coords(), pts[b].coords(), pts[c].coords()]).unwrap();
                    if linalg::rank(f, &m) < 3 {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn choose_m_examples() {
        assert_eq!(choose_m(2, &[1, 3]).unwrap(), (vec![2], None));
        assert_eq!(choose_m(3, &[1, 4, 7]).unwrap(), (vec![2], Some(3)));
        assert!(matches!(choose_m(2, &[1, 3, 5]), Err(Error::InvalidJ(_))));
        assert!(matches!(choose_m(3, &[1, 1, 4]), Err(Error::InvalidJ(_))));
        assert!(matches!(choose_m(2, &[9]), Err(Error::InvalidJ(_))));
        // pairs {1,4},{2,5} leave only 3 free, one short
        assert!(matches!(choose_m(3, &[1, 2, 4, 5]), Err(Error::InvalidJ(_))));
    }

    #[test]
    fn table_one_example() {
        let f = gf(3);
        let spec = CapSpec::new(2, &[1, 3], None).unwrap();
        let fam = build_cap(&f, &spec, Some(1)).unwrap();
        assert_eq!(fam.rows[0], vec![vec![1, 1, 0, 0, 0], vec![0, 0, 1, -1, 0]]);
        assert_eq!(fam.rows[1], vec![vec![1, 0, 0, -1, 0], vec![0, 1, 1, 0, 0]]);
        let ctx = GrassCtx::new(2, 2, f.clone()).unwrap();
        for m in &fam.members {
            assert!(ctx.polar().is_totally_singular(m));
        }
        // both spans contain e1 + e2 + e3 - e4, so the two members meet in a
        // point and are collinear in the dual polar space
        let x = fam.members[0].intersection(&f, &fam.members[1]);
        assert_eq!(x.dim(), 1);
        assert!(x.contains_vector(&f, &[1, 1, 1, -1, 0].map(|v| f.from_int(v))));
        assert!(ctx.collinear(&fam.members[0], &fam.members[1]));
    }

    #[test]
    fn table_two_example() {
        let f = gf(3);
        let spec = CapSpec::new(3, &[1, 4, 7], None).unwrap();
        let fam = build_cap(&f, &spec, None).unwrap();
        assert_eq!(fam.table, Table::Two);
        assert_eq!(
            fam.rows[0],
            vec![vec![1, 1, 0, 0, 0, 0, 0], vec![0, 0, 0, 1, -1, 0, 0], vec![0, 0, 1, 0, 0, -1, 1]]
        );
        let ctx = PolarCtx::new(f.clone(), QuadForm::parabolic(3));
        assert!(fam.members.iter().all(|m| ctx.is_totally_singular(m)));
    }

    #[test]
    fn table_and_characteristic_checks() {
        let spec = CapSpec::new(3, &[1, 4, 7], None).unwrap();
        assert!(matches!(build_cap(&gf(3), &spec, Some(1)), Err(Error::TableMismatch { requested: 1, .. })));
        assert!(matches!(build_cap(&gf(2), &spec, None), Err(Error::EvenCharacteristic)));
    }

    #[test]
    fn truncation_dimensions() {
        let f = gf(3);
        let fam = build_cap(&f, &CapSpec::new(2, &[1, 3], None).unwrap(), None).unwrap();
        let t = fam.truncate(&f).unwrap();
        assert_eq!(t.members, fam.members);
        assert!(t.truncated);

        let spec = CapSpec::new(6, &[1, 2, 7, 8, 4], None).unwrap();
        let fam = build_cap(&f, &spec, None).unwrap();
        assert_eq!(fam.member_dim(), 5);
        assert_eq!(fam.truncate(&f).unwrap().member_dim(), 4);

        let spec = CapSpec::new(4, &[1, 5, 9], None).unwrap();
        let fam = build_cap(&f, &spec, None).unwrap();
        assert_eq!(fam.truncate(&f).unwrap().member_dim(), 3);
    }

    #[test]
    fn member_distance_is_symmetric_difference() {
        let f = gf(5);
        for (n, j) in
            [(4usize, vec![1usize, 2, 5, 6]), (4, vec![1, 5, 9]), (5, vec![1, 2, 6, 7, 4]), (6, vec![1, 2, 3, 7, 8, 9])]
        {
            let spec = CapSpec::new(n, &j, None).unwrap();
            let fam = build_cap(&f, &spec, None).unwrap();
            let k = spec.k();
            assert_eq!(fam.members.len(), 1 << spec.r());
            for (a, x) in fam.members.iter().enumerate() {
                assert_eq!(&Subspace::span(&f, x.basis()), x);
                for (b, y) in fam.members.iter().enumerate().skip(a + 1) {
                    let apart = (a ^ b).count_ones() as usize;
                    assert_eq!(x.intersection(&f, y).dim(), k - apart);
                }
            }
        }
    }

    #[test]
    fn tau_permutation_is_accepted() {
        let f = gf(3);
        let spec = CapSpec::new(5, &[1, 2, 6, 7], Some(vec![1, 0])).unwrap();
        let fam = build_cap(&f, &spec, None).unwrap();
        assert_eq!(fam.rows[1][1], vec![0, 1, 0, 0, 0, 0, 0, -1, 0, 0, 0]);
        let ctx = GrassCtx::new(5, 4, f.clone()).unwrap();
        assert!(fam.members.iter().all(|m| ctx.polar().is_totally_singular(m)));
        assert_eq!(verify_polar_cap(&ctx, &fam.members).max_line_incidence, 1);
        assert!(CapSpec::new(4, &[1, 2, 5, 6], Some(vec![0, 0])).is_err());
    }

    #[test]
    fn polar_cap_on_full_dual_polar_space() {
        for q in [2u64, 3] {
            let ctx = GrassCtx::new(2, 2, gf(q)).unwrap();
            let d = Delta::enumerate(&ctx, DEFAULT_CAP).unwrap();
            let r = verify_polar_cap(&ctx, d.points());
            assert_eq!(r.max_line_incidence, q as usize + 1);
            assert_eq!(verify_polar_cap(&ctx, &d.points()[..1]).max_line_incidence, 1);
        }
    }

    #[test]
    fn polar_cap_matches_line_enumeration() {
        // compare the pair-grouping verifier with explicit lines on subsets
        let ctx = GrassCtx::new(3, 2, gf(2)).unwrap();
        let d = Delta::enumerate(&ctx, DEFAULT_CAP).unwrap();
        let lines = d.enumerate_lines(DEFAULT_CAP).unwrap();
        for step in [1usize, 3, 7, 20] {
            let ids: Vec<usize> = (0..d.len()).step_by(step).collect();
            let pts: Vec<Subspace> = ids.iter().map(|&i| d.points()[i].clone()).collect();
            let expected = lines.iter().map(|l| l.points.iter().filter(|p| ids.contains(p)).count()).max().unwrap();
            assert_eq!(verify_polar_cap(&ctx, &pts).max_line_incidence, expected.max(1));
        }
    }

    #[test]
    fn projective_cap_oracle_agreement() {
        let ctx = GrassCtx::new(3, 2, gf(2)).unwrap();
        let d = Delta::enumerate(&ctx, DEFAULT_CAP).unwrap();
        let s = d.embed().unwrap();
        let f = ctx.field();
        for step in [5usize, 11, 17] {
            let pts: Vec<ProjVec> = s.points().iter().step_by(step).cloned().collect();
            assert_eq!(verify_projective_cap(f, &pts).ok, triple_oracle(f, &pts));
        }
        // a full interior line gives a collinear triple
        let line = &d.enumerate_lines(DEFAULT_CAP).unwrap()[0];
        let pts: Vec<ProjVec> = line.points.iter().map(|&i| s.points()[i].clone()).collect();
        let r = verify_projective_cap(f, &pts);
        assert!(!r.ok);
        assert_eq!(r.violating_triple, Some([0, 1, 2]));
    }

    #[test]
    fn dual_polar_images_are_caps() {
        for q in [2u64, 3] {
            let ctx = GrassCtx::new(2, 2, gf(q)).unwrap();
            let s = Delta::enumerate(&ctx, DEFAULT_CAP).unwrap().embed().unwrap();
            assert!(verify_projective_cap(ctx.field(), s.points()).ok);
            assert!(triple_oracle(ctx.field(), s.points()));
        }
    }

    #[test]
    fn cap_families_below_top_rank_are_polar_caps() {
        for (n, q, j) in
            [(3usize, 3u64, vec![1usize, 4]), (4, 3, vec![1, 5, 9]), (5, 3, vec![1, 2, 6, 7]), (3, 5, vec![1, 4])]
        {
            let f = gf(q);
            let spec = CapSpec::new(n, &j, None).unwrap();
            assert!(spec.k() < n);
            let fam = build_cap(&f, &spec, None).unwrap();
            let ctx = GrassCtx::new(n, spec.k(), f.clone()).unwrap();
            assert!(fam.members.iter().all(|m| ctx.polar().is_totally_singular(m)));
            assert_eq!(verify_polar_cap(&ctx, &fam.members).max_line_incidence, 1);
            assert!(verify_projective_cap(&f, &fam.embed(&f).unwrap()).ok);
            let t = fam.truncate(&f).unwrap();
            let tctx = GrassCtx::new(n, t.member_dim(), f.clone()).unwrap();
            assert!(t.members.iter().all(|m| tctx.polar().is_totally_singular(m)));
            if t.member_dim() < n {
                assert_eq!(verify_polar_cap(&tctx, &t.members).max_line_incidence, 1);
            }
        }
    }

    #[test]
    fn cap_families_of_top_rank_have_collinear_neighbours() {
        // with k = n, members differing in one pair meet in an (n-1)-space,
        // which puts them on a common line of the dual polar space
        for (n, q, j) in
            [(2usize, 3u64, vec![1usize, 3]), (3, 3, vec![1, 4, 7]), (4, 3, vec![1, 2, 5, 6]), (2, 5, vec![1, 3])]
        {
            let f = gf(q);
            let spec = CapSpec::new(n, &j, None).unwrap();
            let fam = build_cap(&f, &spec, None).unwrap();
            let ctx = GrassCtx::new(n, n, f.clone()).unwrap();
            let check = verify_polar_cap(&ctx, &fam.members);
            assert_eq!(check.max_line_incidence, 2);
            let pair = check.violating_line.unwrap();
            assert_eq!((pair[0] ^ pair[1]).count_ones(), 1);
            // the images still form a projective cap
            assert!(verify_projective_cap(&f, &fam.embed(&f).unwrap()).ok);
        }
    }
}
