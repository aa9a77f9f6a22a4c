//! Brute-force reference implementations used by the test suites.
//!
//! Everything here is deliberately naive: exhaustive walk enumeration,
//! factorial-time injective-map counting, and backtracking graph
//! enumeration. These are independent of the production code paths they
//! cross-check and must stay that way.

use crate::graph::Graph;

/// Count non-backtracking walks of length `s` from `u` to `v` by exhaustive
/// DFS (a walk may repeat vertices; it only may not immediately reverse the
/// step it just took).
pub fn nb_walk_count(g: &Graph, u: usize, v: usize, s: usize) -> u64 {
    fn go(g: &Graph, cur: usize, prev: Option<usize>, left: usize, target: usize) -> u64 {
        if left == 0 {
            return u64::from(cur == target);
        }
        let mut acc = 0;
        for &w in g.neighbors(cur) {
            if Some(w) == prev {
                continue;
            }
            acc += go(g, w, Some(cur), left - 1, target);
        }
        acc
    }
    go(g, u, None, s, v)
}

/// Dense matrix of `nb_walk_count` values.
pub fn nb_matrix(g: &Graph, s: usize) -> Vec<Vec<u64>> {
    let n = g.n();
    (0..n)
        .map(|u| (0..n).map(|v| nb_walk_count(g, u, v, s)).collect())
        .collect()
}

/// Count self-avoiding walks of length `s` from `u` to `v` (no repeated
/// vertices at all).
pub fn sa_walk_count(g: &Graph, u: usize, v: usize, s: usize) -> u64 {
    fn go(g: &Graph, cur: usize, on_path: &mut Vec<bool>, left: usize, target: usize) -> u64 {
        if left == 0 {
            return u64::from(cur == target);
        }
        let mut acc = 0;
        for &w in g.neighbors(cur) {
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            acc += go(g, w, on_path, left - 1, target);
            on_path[w] = false;
        }
        acc
    }
    let mut on_path = vec![false; g.n()];
    on_path[u] = true;
    go(g, u, &mut on_path, s, v)
}

/// Sum over all length-`ell` non-backtracking walks in the complete graph on
/// the survivor set from `u` to `v` of the product of edge weights, where a
/// present edge weighs `1 - d/n`, an absent pair weighs `-d/n`, and walks
/// may not leave the survivor set.
pub fn weighted_nb_walk_sum(
    g: &Graph,
    d: f64,
    survivors: &[usize],
    u: usize,
    v: usize,
    ell: usize,
) -> f64 {
    let n = g.n() as f64;
    let weight = |a: usize, b: usize| -> f64 {
        if g.has_edge(a, b) {
            1.0 - d / n
        } else {
            -d / n
        }
    };
    fn go(
        weight: &dyn Fn(usize, usize) -> f64,
        survivors: &[usize],
        cur: usize,
        prev: Option<usize>,
        left: usize,
        target: usize,
        acc_w: f64,
    ) -> f64 {
        if left == 0 {
            return if cur == target { acc_w } else { 0.0 };
        }
        let mut acc = 0.0;
        for &w in survivors {
            if w == cur || Some(w) == prev {
                continue;
            }
            acc += go(
                weight,
                survivors,
                w,
                Some(cur),
                left - 1,
                target,
                acc_w * weight(cur, w),
            );
        }
        acc
    }
    if ell == 0 {
        return if u == v { 1.0 } else { 0.0 };
    }
    go(&weight, survivors, u, None, ell, v, 1.0)
}

/// All connected d-regular labelled graphs on n vertices, generated by
/// completing the smallest-index vertex with unfilled degree at each step.
/// Each labelled graph is produced exactly once.
pub fn enumerate_connected_regular(n: usize, d: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    if n * d % 2 != 0 || d >= n {
        return out;
    }
    let mut deg = vec![0usize; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    fn complete(
        n: usize,
        d: usize,
        deg: &mut Vec<usize>,
        edges: &mut Vec<(usize, usize)>,
        out: &mut Vec<Graph>,
    ) {
        // Find the smallest vertex with deficit.
        let u = match (0..n).find(|&v| deg[v] < d) {
            None => {
                let g = Graph::from_edges(n, edges).expect("construction is simple");
                if g.is_connected() {
                    out.push(g);
                }
                return;
            }
            Some(u) => u,
        };
        let need = d - deg[u];
        // Candidate partners: larger index (smaller ones are complete or
        // would have been chosen), spare capacity, not already adjacent.
        let candidates: Vec<usize> = ((u + 1)..n)
            .filter(|&v| deg[v] < d && !edges.contains(&(u, v)))
            .collect();
        if candidates.len() < need {
            return;
        }
        // Choose `need` of them in all ways.
        let mut choice = vec![0usize; need];
        fn choose(
            candidates: &[usize],
            start: usize,
            slot: usize,
            choice: &mut Vec<usize>,
            ctx: &mut (usize, usize, &mut Vec<usize>, &mut Vec<(usize, usize)>, &mut Vec<Graph>, usize),
        ) {
            let need = choice.len();
            if slot == need {
                let (n, d, deg, edges, out, u) = (ctx.0, ctx.1, &mut *ctx.2, &mut *ctx.3, &mut *ctx.4, ctx.5);
                for &v in choice.iter() {
                    deg[u] += 1;
                    deg[v] += 1;
                    edges.push((u, v));
                }
                complete(n, d, deg, edges, out);
                for &v in choice.iter().rev() {
                    deg[u] -= 1;
                    deg[v] -= 1;
                    edges.pop();
                }
                return;
            }
            for i in start..candidates.len() {
                choice[slot] = candidates[i];
                choose(candidates, i + 1, slot + 1, choice, ctx);
            }
        }
        let mut ctx = (n, d, deg, edges, out, u);
        choose(&candidates, 0, 0, &mut choice, &mut ctx);
    }
    complete(n, d, &mut deg, &mut edges, &mut out);
    out
}

/// Count occurrences of a partially labelled pattern by enumerating every
/// injective map `V(H) -> V(G)` (factorial time; small inputs only).
pub fn count_occurrences_bruteforce(
    pat: &crate::localstats::PartiallyLabelledGraph,
    lg: &crate::graph::LabelledGraph,
) -> u64 {
    let hn = pat.h.n();
    let gn = lg.graph.n();
    if hn == 0 {
        return 1;
    }
    let mut phi = vec![usize::MAX; hn];
    let mut used = vec![false; gn];
    fn go(
        pat: &crate::localstats::PartiallyLabelledGraph,
        lg: &crate::graph::LabelledGraph,
        v: usize,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> u64 {
        if v == pat.h.n() {
            // Verify every pattern edge and label.
            for (a, b) in pat.h.edges() {
                if !lg.graph.has_edge(phi[a], phi[b]) {
                    return 0;
                }
            }
            for (a, t) in pat.tau.iter().enumerate() {
                if let Some(want) = t {
                    if lg.sigma[phi[a]] != *want {
                        return 0;
                    }
                }
            }
            return 1;
        }
        let mut acc = 0;
        for cand in 0..lg.graph.n() {
            if used[cand] {
                continue;
            }
            phi[v] = cand;
            used[cand] = true;
            acc += go(pat, lg, v + 1, phi, used);
            used[cand] = false;
            phi[v] = usize::MAX;
        }
        acc
    }
    go(pat, lg, 0, &mut phi, &mut used)
}

/// Random valid model matrix: a symmetric nonnegative `M` with `M pi = e`,
/// produced by diagonal (Sinkhorn-style) scaling of a random positive
/// symmetric seed matrix. Returns `(m, pi)` row-major.
pub fn random_model<R: rand::Rng>(k: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    // Random positive pi.
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let pi: Vec<f64> = raw.iter().map(|x| x / total).collect();
    // Random symmetric positive seed.
    let mut w = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let x = rng.gen_range(0.2..1.0);
            w[i * k + j] = x;
            w[j * k + i] = x;
        }
    }
    // Scale: find diagonal s with Diag(s) W Diag(s) pi = e.
    let mut s = vec![1.0; k];
    for _ in 0..500 {
        let mut err: f64 = 0.0;
        let mut next = s.clone();
        for i in 0..k {
            let row: f64 = (0..k).map(|j| w[i * k + j] * s[j] * pi[j]).sum();
            next[i] = 1.0 / row;
            err = err.max((s[i] * row - 1.0).abs());
        }
        for i in 0..k {
            s[i] = (s[i] * next[i]).sqrt();
        }
        if err < 1e-13 {
            break;
        }
    }
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            m[i * k + j] = s[i] * w[i * k + j] * s[j];
        }
    }
    (m, pi)
}

/// Random forest pattern on at most `max_v` vertices with a random subset of
/// labelled vertices.
pub fn random_forest_pattern<R: rand::Rng>(
    max_v: usize,
    k: usize,
    rng: &mut R,
) -> crate::localstats::PartiallyLabelledGraph {
    let nv = rng.gen_range(1..=max_v);
    let mut g = crate::graph::Graph::empty(nv);
    for v in 1..nv {
        // Attach to an earlier vertex with probability 3/4 (else new root).
        if rng.gen_range(0..4) < 3 {
            let parent = rng.gen_range(0..v);
            g.add_edge(parent, v).unwrap();
        }
    }
    let tau: Vec<Option<usize>> = (0..nv)
        .map(|_| {
            if rng.gen_range(0..3) == 0 {
                Some(rng.gen_range(0..k))
            } else {
                None
            }
        })
        .collect();
    crate::localstats::PartiallyLabelledGraph::new(g, tau).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts() {
        // C_4: NB walks of length 2 go straight around.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(nb_walk_count(&g, 0, 2, 2), 2); // via 1 and via 3
        assert_eq!(nb_walk_count(&g, 0, 0, 2), 0); // backtracking forbidden
        assert_eq!(nb_walk_count(&g, 0, 0, 4), 2); // all the way around
        assert_eq!(sa_walk_count(&g, 0, 0, 4), 0); // SA cannot close
    }

    #[test]
    fn enumeration_counts_match_known_values() {
        // Connected 2-regular graphs on n vertices are the labelled n-cycles:
        // (n-1)!/2 of them.
        assert_eq!(enumerate_connected_regular(5, 2).len(), 12);
        assert_eq!(enumerate_connected_regular(6, 2).len(), 60);
        // Cubic graphs on 4 vertices: K_4 only.
        assert_eq!(enumerate_connected_regular(4, 3).len(), 1);
        // Labelled cubic graphs on 6 vertices: 10 copies of K_3,3 (aut 72)
        // plus 60 of the prism (aut 12) = 70, all connected.
        let sixes = enumerate_connected_regular(6, 3);
        for g in &sixes {
            g.check_simple().unwrap();
            assert!(g.is_regular(3));
            assert!(g.is_connected());
        }
        assert_eq!(sixes.len(), 70);
    }

    #[test]
    fn weighted_walks_zero_degree_reduce_to_nb_counts() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let survivors: Vec<usize> = (0..4).collect();
        for u in 0..4 {
            for v in 0..4 {
                let w = weighted_nb_walk_sum(&g, 0.0, &survivors, u, v, 3);
                assert_eq!(w, nb_walk_count(&g, u, v, 3) as f64);
            }
        }
    }
}
