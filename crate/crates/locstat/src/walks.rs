//! Walk-matrix engines: non-backtracking, self-avoiding, and centered
//! non-backtracking counts, plus bad/vexing vertex detection and graph
//! truncation.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{power_iteration, Mat};
use rayon::prelude::*;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    /// Non-backtracking walk counts; equals `q_s(A)` on a d-regular graph.
    Nb,
    /// Self-avoiding walk counts.
    Sa,
    /// Centered non-backtracking walk sums over the complete graph.
    Cnb,
}

impl std::fmt::Display for WalkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WalkKind::Nb => write!(f, "NB"),
            WalkKind::Sa => write!(f, "SA"),
            WalkKind::Cnb => write!(f, "CNB"),
        }
    }
}

/// Symmetric n x n walk-count matrix of a given order.
#[derive(Debug, Clone)]
pub struct WalkMatrix {
    pub order: usize,
    pub kind: WalkKind,
    pub mat: Mat,
}

impl WalkMatrix {
    /// Row-major CSV dump with a `n s kind` header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {} {}", self.mat.rows, self.order, self.kind).unwrap();
        for i in 0..self.mat.rows {
            let row: Vec<String> = self.mat.row(i).iter().map(|x| format!("{x}")).collect();
            writeln!(s, "{}", row.join(",")).unwrap();
        }
        s
    }
}

fn adjacency_matrix(g: &Graph) -> Mat {
    let n = g.n();
    let mut a = Mat::zeros(n, n);
    for u in 0..n {
        for &v in g.neighbors(u) {
            a[(u, v)] = 1.0;
        }
    }
    a
}

/// `A * m` using the adjacency lists of `g` (rows of the product are sums of
/// neighbor rows of `m`), parallelized over rows.
fn sparse_times_dense(g: &Graph, m: &Mat) -> Mat {
    let n = g.n();
    let cols = m.cols;
    let mut out = Mat::zeros(n, cols);
    out.data
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(u, row)| {
            for &v in g.neighbors(u) {
                let src = m.row(v);
                for (o, s) in row.iter_mut().zip(src) {
                    *o += s;
                }
            }
        });
    out
}

/// Non-backtracking walk matrices `NB^(0..=m)` on a d-regular graph via the
/// two-term recurrence `NB^(s) = A NB^(s-1) - (d-1) NB^(s-2)` (with the
/// degenerate `NB^(2) = A^2 - d 1`).
pub fn nb_matrices(g: &Graph, d: usize, m: usize) -> Result<Vec<WalkMatrix>> {
    if !g.is_regular(d) {
        return Err(Error::Precondition(format!(
            "nb_matrices needs a {d}-regular graph; run degree repair first"
        )));
    }
    let n = g.n();
    let mut out = Vec::with_capacity(m + 1);
    out.push(WalkMatrix { order: 0, kind: WalkKind::Nb, mat: Mat::identity(n) });
    if m >= 1 {
        out.push(WalkMatrix { order: 1, kind: WalkKind::Nb, mat: adjacency_matrix(g) });
    }
    for s in 2..=m {
        let mut next = sparse_times_dense(g, &out[s - 1].mat);
        let coeff = if s == 2 { d as f64 } else { d as f64 - 1.0 };
        next.add_assign_scaled(&out[s - 2].mat, -coeff);
        out.push(WalkMatrix { order: s, kind: WalkKind::Nb, mat: next });
    }
    Ok(out)
}

/// Quadratic forms `U^T NB^(s) U` for `s = 0..=m` without materializing the
/// dense walk matrices; `u_cols` are the columns of `U`. Returns one
/// `r x r` matrix per order. Used for band evaluation at large n.
pub fn nb_quadratic_forms(
    g: &Graph,
    d: usize,
    m: usize,
    u_cols: &[Vec<f64>],
) -> Result<Vec<Mat>> {
    if !g.is_regular(d) {
        return Err(Error::Precondition("nb_quadratic_forms needs a d-regular graph".into()));
    }
    let n = g.n();
    let r = u_cols.len();
    for col in u_cols {
        if col.len() != n {
            return Err(Error::Precondition("test vector has wrong length".into()));
        }
    }
    // thin (n x r) recurrence: V_s = A V_{s-1} - c V_{s-2}
    let mut vm2 = Mat::zeros(n, r);
    for (j, col) in u_cols.iter().enumerate() {
        for i in 0..n {
            vm2[(i, j)] = col[i];
        }
    }
    let mut vm1 = sparse_times_dense_cols(g, &vm2);
    let mut out = Vec::with_capacity(m + 1);
    let gram = |v: &Mat| -> Mat {
        let mut q = Mat::zeros(r, r);
        for a in 0..r {
            for b in 0..r {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += u_cols[a][i] * v[(i, b)];
                }
                q[(a, b)] = acc;
            }
        }
        q
    };
    out.push(gram(&vm2)); // s = 0
    if m >= 1 {
        out.push(gram(&vm1));
    }
    for s in 2..=m {
        let mut next = sparse_times_dense_cols(g, &vm1);
        let coeff = if s == 2 { d as f64 } else { d as f64 - 1.0 };
        next.add_assign_scaled(&vm2, -coeff);
        out.push(gram(&next));
        vm2 = vm1;
        vm1 = next;
    }
    Ok(out)
}

fn sparse_times_dense_cols(g: &Graph, m: &Mat) -> Mat {
    sparse_times_dense(g, m)
}

/// Default cap on `sum_u prod_deg` cost estimates for self-avoiding counts.
const SA_COST_CAP: f64 = 5e8;

/// Self-avoiding walk count matrices `SA^(0..=m)` by depth-limited DFS with
/// on-path exclusion.
pub fn sa_matrices(g: &Graph, m: usize) -> Result<Vec<WalkMatrix>> {
    let n = g.n();
    let max_deg = (0..n).map(|u| g.degree(u)).max().unwrap_or(0) as f64;
    let estimate = n as f64 * max_deg.powi(m as i32);
    if estimate > SA_COST_CAP {
        return Err(Error::Resource(format!(
            "self-avoiding enumeration cost estimate {estimate:.2e} exceeds cap {SA_COST_CAP:.0e} \
             (n={n}, max_deg={max_deg}, m={m})"
        )));
    }
    let mut mats: Vec<Mat> = (0..=m).map(|_| Mat::zeros(n, n)).collect();
    let rows: Vec<Vec<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut counts = vec![vec![0.0; n]; m + 1];
            counts[0][u] = 1.0;
            let mut on_path = vec![false; n];
            on_path[u] = true;
            fn dfs(
                g: &Graph,
                cur: usize,
                depth: usize,
                m: usize,
                on_path: &mut Vec<bool>,
                counts: &mut Vec<Vec<f64>>,
            ) {
                if depth == m {
                    return;
                }
                for &w in g.neighbors(cur) {
                    if on_path[w] {
                        continue;
                    }
                    counts[depth + 1][w] += 1.0;
                    on_path[w] = true;
                    dfs(g, w, depth + 1, m, on_path, counts);
                    on_path[w] = false;
                }
            }
            dfs(g, u, 0, m, &mut on_path, &mut counts);
            counts
        })
        .collect();
    for (u, counts) in rows.into_iter().enumerate() {
        for (s, row) in counts.into_iter().enumerate() {
            for (v, c) in row.into_iter().enumerate() {
                mats[s][(u, v)] = c;
            }
        }
    }
    Ok(mats
        .into_iter()
        .enumerate()
        .map(|(s, mat)| WalkMatrix { order: s, kind: WalkKind::Sa, mat })
        .collect())
}

/// Default vertex cap for the dense centered-walk dynamic program.
pub const CNB_DEFAULT_CAP: usize = 500;

/// Centered non-backtracking walk matrix of order `ell` over the complete
/// graph on the survivors of `g` (vertices not in `deleted`), with edge
/// weight `1 - d/n` on edges of `g` and `-d/n` on non-edges.
///
/// Per start vertex the program walks directed-pair states:
/// `t_{l+1}[v -> x] = c(v,x) (sum_w t_l[w -> v] - t_l[x -> v])`.
pub fn centered_nb(g: &Graph, d: f64, ell: usize, deleted: &[usize]) -> Result<WalkMatrix> {
    centered_nb_with_cap(g, d, ell, deleted, CNB_DEFAULT_CAP)
}

pub fn centered_nb_with_cap(
    g: &Graph,
    d: f64,
    ell: usize,
    deleted: &[usize],
    cap: usize,
) -> Result<WalkMatrix> {
    let n = g.n();
    if n > cap {
        return Err(Error::Resource(format!(
            "centered_nb needs O(n^3) work and n^2 memory per start; n={n} exceeds cap {cap}"
        )));
    }
    let mut alive = vec![true; n];
    for &v in deleted {
        if v < n {
            alive[v] = false;
        }
    }
    let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut mat = Mat::zeros(n, n);
    if ell == 0 {
        for &v in &survivors {
            mat[(v, v)] = 1.0;
        }
        return Ok(WalkMatrix { order: 0, kind: WalkKind::Cnb, mat });
    }
    let off = -(d / n as f64);
    let on = 1.0 + off;
    // Weight lookup via the adjacency matrix of g restricted to survivors.
    let mut weight = Mat::zeros(n, n);
    for &u in &survivors {
        for &v in &survivors {
            if u != v {
                weight[(u, v)] = off;
            }
        }
    }
    for u in 0..n {
        if !alive[u] {
            continue;
        }
        for &v in g.neighbors(u) {
            if alive[v] {
                weight[(u, v)] = on;
            }
        }
    }

    let rows: Vec<(usize, Vec<f64>)> = survivors
        .par_iter()
        .map(|&start| {
            // state[(w, v)] = weighted sum over NB walks start -> ... -> w -> v
            let mut state = Mat::zeros(n, n);
            for &v in &survivors {
                if v != start {
                    state[(start, v)] = weight[(start, v)];
                }
            }
            let mut col_sums = vec![0.0; n];
            for _step in 1..ell {
                for &v in &survivors {
                    let mut acc = 0.0;
                    for &w in &survivors {
                        acc += state[(w, v)];
                    }
                    col_sums[v] = acc;
                }
                let mut next = Mat::zeros(n, n);
                for &v in &survivors {
                    let sv = col_sums[v];
                    for &x in &survivors {
                        if x == v {
                            continue;
                        }
                        next[(v, x)] = weight[(v, x)] * (sv - state[(x, v)]);
                    }
                }
                state = next;
            }
            let mut row = vec![0.0; n];
            for &x in &survivors {
                let mut acc = 0.0;
                for &w in &survivors {
                    acc += state[(w, x)];
                }
                row[x] = acc;
            }
            (start, row)
        })
        .collect();
    for (start, row) in rows {
        for (x, val) in row.into_iter().enumerate() {
            mat[(start, x)] = val;
        }
    }
    Ok(WalkMatrix { order: ell, kind: WalkKind::Cnb, mat })
}

/// Vertices at distance at most `l_steps` from a cycle of length at most
/// `c_len`. A vertex is on a short cycle iff one of its edges closes one:
/// edge (u,v) lies on a cycle of length <= c iff u and v stay within
/// distance c-1 after the edge is removed.
pub fn bad_vertices(g: &Graph, c_len: usize, l_steps: usize) -> Vec<usize> {
    let n = g.n();
    let mut on_cycle = vec![false; n];
    let mut work = g.clone();
    for (u, v) in g.edges() {
        if on_cycle[u] && on_cycle[v] {
            continue;
        }
        work.remove_edge(u, v);
        let dist = work.bfs_distances(u, c_len.saturating_sub(1));
        if dist[v] != usize::MAX && dist[v] + 1 <= c_len {
            on_cycle[u] = true;
            on_cycle[v] = true;
        }
        work.add_edge(u, v).expect("edge restoration");
    }
    // Multi-source BFS out to l_steps.
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for v in 0..n {
        if on_cycle[v] {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] >= l_steps {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..n).filter(|&v| dist[v] != usize::MAX).collect()
}

/// Truncation parameters `(t, r, eps)` relative to a reference degree `d`.
#[derive(Debug, Clone, Copy)]
pub struct TruncationParams {
    /// Neighborhood radius for the heaviness test.
    pub t: usize,
    /// Girth cutoff: vertices on cycles shorter than `r` are vexing.
    pub r: usize,
    /// Heaviness slack: a vertex is heavy if `|B_t| >= ((1+eps) d)^t`.
    pub eps: f64,
    /// Reference degree.
    pub d: f64,
}

impl TruncationParams {
    pub fn new(t: usize, r: usize, eps: f64, d: f64) -> Result<Self> {
        if t < 1 || r < 3 || eps <= 0.0 {
            return Err(Error::InvalidParams(
                "need t >= 1, r >= 3, eps > 0 in truncation parameters".into(),
            ));
        }
        Ok(TruncationParams { t, r, eps, d })
    }

    /// Defaults tuned for desk-scale sparse graphs: radius-2 heaviness with
    /// generous slack, no cycle deletion (r = 3 deletes nothing, since
    /// simple graphs have girth >= 3).
    pub fn defaults(d: f64) -> Self {
        TruncationParams { t: 2, r: 3, eps: 0.7, d }
    }
}

/// Vertices that are `(t,eps)`-heavy (ball of radius t, counting the vertex
/// itself, of size at least `(1+eps)^t d^t`) or lie on a cycle of length
/// less than `r`.
pub fn vexing_vertices(g: &Graph, tp: &TruncationParams) -> Vec<usize> {
    let n = g.n();
    let threshold = ((1.0 + tp.eps) * tp.d).powi(tp.t as i32);
    let mut vexing = vec![false; n];
    for v in 0..n {
        let dist = g.bfs_distances(v, tp.t);
        let ball = dist.iter().filter(|&&x| x != usize::MAX).count();
        if ball as f64 >= threshold {
            vexing[v] = true;
        }
    }
    if tp.r > 3 {
        for v in bad_vertices(g, tp.r - 1, 0) {
            vexing[v] = true;
        }
    }
    (0..n).filter(|&v| vexing[v]).collect()
}

/// A graph after single-pass deletion of its vexing set.
#[derive(Debug, Clone)]
pub struct TruncatedGraph {
    pub base: Graph,
    /// Deleted (vexing) vertices of the base graph.
    pub deleted: Vec<usize>,
    /// Surviving subgraph on the same vertex set, with all edges incident to
    /// deleted vertices removed.
    pub surviving: Graph,
}

/// Delete every vexing vertex of the original graph, in one pass (the vexing
/// set is computed against the un-truncated graph, not iterated).
pub fn truncate(g: &Graph, tp: &TruncationParams) -> TruncatedGraph {
    let deleted = vexing_vertices(g, tp);
    let is_deleted: std::collections::HashSet<usize> = deleted.iter().copied().collect();
    let mut surviving = Graph::empty(g.n());
    for (u, v) in g.edges() {
        if !is_deleted.contains(&u) && !is_deleted.contains(&v) {
            surviving.add_edge(u, v).unwrap();
        }
    }
    TruncatedGraph { base: g.clone(), deleted, surviving }
}

/// Per-order growth statistics `||A_c^(l)||^{1/l}` for the centered walk
/// matrices of a (typically truncated) graph.
pub fn spectral_norm_growth(
    g: &Graph,
    d: f64,
    ells: &[usize],
    deleted: &[usize],
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ells.len());
    for &ell in ells {
        if ell == 0 {
            return Err(Error::Precondition("spectral norm growth needs ell >= 1".into()));
        }
        let wm = centered_nb(g, d, ell, deleted)?;
        let (_, mag) = power_iteration(&wm.mat, 3000, 1e-10, 17)?;
        out.push(mag.powf(1.0 / ell as f64));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::samplers::{sample_er, sample_null_regular};

    #[test]
    fn nb_zero_is_identity_and_k4_s2() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let mats = nb_matrices(&g, 3, 2).unwrap();
        assert_eq!(mats[0].mat, Mat::identity(4));
        // K_4 at s=2: two NB walks between each distinct pair, none closed.
        for u in 0..4 {
            for v in 0..4 {
                let want = if u == v { 0.0 } else { 2.0 };
                assert_eq!(mats[2].mat[(u, v)], want);
            }
        }
    }

    #[test]
    fn c5_s2_counts() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let mats = nb_matrices(&g, 2, 2).unwrap();
        for u in 0..5 {
            for v in 0..5 {
                let cycle_dist = (u as i64 - v as i64).rem_euclid(5).min((v as i64 - u as i64).rem_euclid(5));
                let want = if cycle_dist == 2 { 1.0 } else { 0.0 };
                assert_eq!(mats[2].mat[(u, v)], want, "u={u} v={v}");
            }
        }
    }

    #[test]
    fn nb_recurrence_matches_enumeration_on_small_regular_graphs() {
        // Down-sized version of the full acceptance sweep.
        for (n, d) in [(5usize, 2usize), (6, 3)] {
            for g in oracle::enumerate_connected_regular(n, d) {
                let mats = nb_matrices(&g, d, 4).unwrap();
                for s in 0..=4 {
                    let want = oracle::nb_matrix(&g, s);
                    for u in 0..n {
                        for v in 0..n {
                            assert!(
                                (mats[s].mat[(u, v)] - want[u][v] as f64).abs() < 1e-9,
                                "n={n} d={d} s={s} u={u} v={v}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nb_row_sums_are_total_walk_counts() {
        let g = sample_null_regular(40, 3, 5).unwrap();
        let m = 5;
        let mats = nb_matrices(&g, 3, m).unwrap();
        for s in 1..=m {
            let want = 3.0 * 2.0f64.powi(s as i32 - 1);
            for u in 0..40 {
                let sum: f64 = mats[s].mat.row(u).iter().sum();
                assert!((sum - want).abs() < 1e-7, "s={s} u={u}: {sum} vs {want}");
            }
        }
    }

    #[test]
    fn nb_requires_regular_input() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(nb_matrices(&g, 2, 2).is_err());
    }

    #[test]
    fn sa_matches_adjacency_and_triangle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let mats = sa_matrices(&g, 2).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let adj = if g.has_edge(u, v) { 1.0 } else { 0.0 };
                assert_eq!(mats[1].mat[(u, v)], adj);
                let want = if u == v { 0.0 } else { 1.0 };
                assert_eq!(mats[2].mat[(u, v)], want);
            }
        }
    }

    #[test]
    fn sa_equals_nb_below_girth() {
        // 6-cycle has girth 6 > 2s for s = 2.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let nb = nb_matrices(&g, 2, 2).unwrap();
        let sa = sa_matrices(&g, 2).unwrap();
        for u in 0..6 {
            for v in 0..6 {
                assert_eq!(nb[2].mat[(u, v)], sa[2].mat[(u, v)]);
            }
        }
    }

    #[test]
    fn sa_off_bad_rows_agree_with_nb() {
        // Rows of vertices not within 2s of a short cycle agree exactly.
        let g = sample_null_regular(60, 3, 9).unwrap();
        let s = 3;
        let nb = nb_matrices(&g, 3, s).unwrap();
        let sa = sa_matrices(&g, s).unwrap();
        let bad: std::collections::HashSet<usize> =
            bad_vertices(&g, 2 * s, 2 * s).into_iter().collect();
        for u in 0..60 {
            if bad.contains(&u) {
                continue;
            }
            for v in 0..60 {
                assert_eq!(
                    nb[s].mat[(u, v)],
                    sa[s].mat[(u, v)],
                    "u={u} v={v} should agree off the bad set"
                );
            }
        }
    }

    #[test]
    fn centered_identity_and_single_step() {
        let g = sample_er(8, 3.0, 4).unwrap();
        let c0 = centered_nb(&g, 3.0, 0, &[]).unwrap();
        assert_eq!(c0.mat, Mat::identity(8));
        let c1 = centered_nb(&g, 3.0, 1, &[]).unwrap();
        for u in 0..8 {
            for v in 0..8 {
                let want = if u == v {
                    0.0
                } else if g.has_edge(u, v) {
                    1.0 - 3.0 / 8.0
                } else {
                    -3.0 / 8.0
                };
                assert!((c1.mat[(u, v)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn centered_matches_bruteforce() {
        let g = sample_er(6, 3.0, 11).unwrap();
        let survivors: Vec<usize> = (0..6).collect();
        for ell in 0..=3 {
            let got = centered_nb(&g, 3.0, ell, &[]).unwrap();
            for u in 0..6 {
                for v in 0..6 {
                    let want = oracle::weighted_nb_walk_sum(&g, 3.0, &survivors, u, v, ell);
                    assert!(
                        (got.mat[(u, v)] - want).abs() < 1e-9,
                        "ell={ell} u={u} v={v}: {} vs {want}",
                        got.mat[(u, v)]
                    );
                }
            }
        }
    }

    #[test]
    fn centered_respects_deletions() {
        let g = sample_er(6, 2.5, 3).unwrap();
        let deleted = vec![0usize];
        let survivors: Vec<usize> = (1..6).collect();
        let got = centered_nb(&g, 2.5, 2, &deleted).unwrap();
        for u in 0..6 {
            for v in 0..6 {
                let want = if u == 0 || v == 0 {
                    0.0
                } else {
                    oracle::weighted_nb_walk_sum(&g, 2.5, &survivors, u, v, 2)
                };
                assert!((got.mat[(u, v)] - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn centered_zero_degree_counts_nb_walks() {
        let g = sample_er(7, 2.0, 19).unwrap();
        let got = centered_nb(&g, 0.0, 3, &[]).unwrap();
        for u in 0..7 {
            for v in 0..7 {
                assert_eq!(got.mat[(u, v)], oracle::nb_walk_count(&g, u, v, 3) as f64);
            }
        }
    }

    #[test]
    fn centered_cap_enforced() {
        let g = Graph::empty(10);
        assert!(centered_nb_with_cap(&g, 1.0, 1, &[], 5).is_err());
    }

    #[test]
    fn bad_vertices_cases() {
        // Tree: no cycles at all.
        let tree = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert!(bad_vertices(&tree, 6, 3).is_empty());
        // K_4 with C=3, L=0: every vertex on a triangle.
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(bad_vertices(&k4, 3, 0), vec![0, 1, 2, 3]);
        // C_4 with a pendant path of length 2: cycle vertices plus path
        // vertices within L.
        let g = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 7)],
        )
        .unwrap();
        assert_eq!(bad_vertices(&g, 4, 2), vec![0, 1, 2, 3, 4, 5]);
        // L=0 keeps only cycle vertices.
        assert_eq!(bad_vertices(&g, 4, 0), vec![0, 1, 2, 3]);
    }

    #[test]
    fn vexing_cases() {
        let empty = Graph::empty(5);
        let tp = TruncationParams::new(1, 4, 0.1, 3.0).unwrap();
        assert!(vexing_vertices(&empty, &tp).is_empty());
        // Star K_{1,50}: center ball |B_1| = 51 >= 1.1 * 3 = 3.3.
        let mut star = Graph::empty(51);
        for leaf in 1..51 {
            star.add_edge(0, leaf).unwrap();
        }
        let vex = vexing_vertices(&star, &tp);
        assert!(vex.contains(&0));
        // Triangle in a sparse graph with r=4: all three triangle vertices.
        let g = Graph::from_edges(8, &[(0, 1), (1, 2), (2, 0), (3, 4), (5, 6)]).unwrap();
        let tp = TruncationParams::new(2, 4, 5.0, 3.0).unwrap();
        let vex = vexing_vertices(&g, &tp);
        assert_eq!(vex, vec![0, 1, 2]);
    }

    #[test]
    fn truncate_deletes_exactly_the_vexing_set() {
        // Disjoint triangle plus a path, r=4: triangle goes, path stays.
        let g = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 7)],
        )
        .unwrap();
        let tp = TruncationParams::new(2, 4, 5.0, 3.0).unwrap();
        let tg = truncate(&g, &tp);
        assert_eq!(tg.deleted, vec![0, 1, 2]);
        assert_eq!(tg.surviving.num_edges(), 4);
        // No vexing vertex of the base graph survives.
        for v in vexing_vertices(&g, &tp) {
            assert_eq!(tg.surviving.degree(v), 0);
        }
        // Identity on vexing-free graphs.
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let tg = truncate(&path, &TruncationParams::defaults(3.0));
        assert!(tg.deleted.is_empty());
        assert_eq!(tg.surviving.edges(), path.edges());
    }

    #[test]
    fn truncate_er_deletes_few_vertices() {
        // Defaults delete under 5% of a sparse ER graph across seeds.
        for seed in 0..20 {
            let g = sample_er(300, 5.0, seed).unwrap();
            let tg = truncate(&g, &TruncationParams::defaults(5.0));
            assert!(
                (tg.deleted.len() as f64) < 0.05 * 300.0,
                "seed {seed}: deleted {}",
                tg.deleted.len()
            );
        }
    }

    #[test]
    fn growth_statistic_base_case() {
        let g = sample_er(60, 4.0, 2).unwrap();
        let vals = spectral_norm_growth(&g, 4.0, &[1], &[]).unwrap();
        assert!(vals[0] > 0.0);
    }

    #[test]
    fn csv_header_shape() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let mats = sa_matrices(&g, 1).unwrap();
        let csv = mats[1].to_csv();
        assert!(csv.starts_with("3 1 SA\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
