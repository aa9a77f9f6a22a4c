//! Counting occurrences of partially labelled subgraphs in labelled graphs,
//! and the planted-model moment formulas they concentrate around.
//!
//! An occurrence of a pattern `(H, S, tau)` in `(G, sigma)` is an injective
//! homomorphism `phi : H -> G` with `sigma(phi(v)) = tau(v)` for `v in S`.
//! In the degree-regular planted model the count of a pattern with `O(1)`
//! edges is `n^{chi(H)} L C_H` up to lower order, where `chi = |V| - |E|`,
//! `C_H` is the tree-embedding constant and `L` the label-propagation
//! constant.

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelledGraph};
use crate::model::ModelParams;
use serde::{Deserialize, Serialize};

/// Default cap on pattern edges.
pub const DEFAULT_PATTERN_EDGE_CAP: usize = 8;

/// Cap on the backtracking-search cost estimate.
const SEARCH_COST_CAP: f64 = 2e9;

/// A pattern graph with distinguished labelled vertices.
#[derive(Debug, Clone)]
pub struct PartiallyLabelledGraph {
    pub h: Graph,
    /// `tau[v]` is `Some(group)` for distinguished vertices, `None` else.
    pub tau: Vec<Option<usize>>,
}

/// JSON form: `{"vertices": n, "edges": [[u,v],...], "labels": {"v": g}}`.
#[derive(Serialize, Deserialize)]
struct PatternJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    labels: std::collections::BTreeMap<String, usize>,
}

impl PartiallyLabelledGraph {
    pub fn new(h: Graph, tau: Vec<Option<usize>>) -> Result<Self> {
        if tau.len() != h.n() {
            return Err(Error::InvalidParams("tau length != |V(H)|".into()));
        }
        if h.num_edges() > DEFAULT_PATTERN_EDGE_CAP {
            return Err(Error::InvalidParams(format!(
                "pattern has {} edges, cap is {DEFAULT_PATTERN_EDGE_CAP}",
                h.num_edges()
            )));
        }
        Ok(PartiallyLabelledGraph { h, tau })
    }

    /// Path with `s` edges; endpoints labelled `(i, j)`.
    pub fn labelled_path(s: usize, i: usize, j: usize) -> Self {
        let mut h = Graph::empty(s + 1);
        for v in 0..s {
            h.add_edge(v, v + 1).unwrap();
        }
        let mut tau = vec![None; s + 1];
        tau[0] = Some(i);
        tau[s] = Some(j);
        PartiallyLabelledGraph { h, tau }
    }

    /// Single vertex labelled `i`.
    pub fn labelled_vertex(i: usize) -> Self {
        PartiallyLabelledGraph { h: Graph::empty(1), tau: vec![Some(i)] }
    }

    /// Two disconnected vertices labelled `(i, j)`.
    pub fn labelled_vertex_pair(i: usize, j: usize) -> Self {
        PartiallyLabelledGraph { h: Graph::empty(2), tau: vec![Some(i), Some(j)] }
    }

    pub fn distinguished(&self) -> Vec<usize> {
        (0..self.h.n()).filter(|&v| self.tau[v].is_some()).collect()
    }

    pub fn is_forest(&self) -> bool {
        let comps = self.h.components();
        self.h.n() == self.h.num_edges() + comps.len()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut labels = std::collections::BTreeMap::new();
        for (v, t) in self.tau.iter().enumerate() {
            if let Some(g) = t {
                labels.insert(v.to_string(), *g);
            }
        }
        Ok(serde_json::to_string_pretty(&PatternJson {
            vertices: self.h.n(),
            edges: self.h.edges(),
            labels,
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let pj: PatternJson = serde_json::from_str(text)?;
        let h = Graph::from_edges(pj.vertices, &pj.edges)?;
        let mut tau = vec![None; pj.vertices];
        for (vs, g) in pj.labels {
            let v: usize = vs
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex key {vs:?} in pattern")))?;
            if v >= pj.vertices {
                return Err(Error::Parse(format!("label on out-of-range vertex {v}")));
            }
            tau[v] = Some(g);
        }
        PartiallyLabelledGraph::new(h, tau)
    }
}

/// Derived invariants of a pattern under given model parameters.
#[derive(Debug, Clone)]
pub struct PatternStats {
    /// `chi(H) = |V(H)| - |E(H)|`.
    pub chi: i64,
    /// Number of connected components.
    pub comp: usize,
    /// Tree-embedding constant `prod_v (d)_{deg v} / d^{|E|}`; zero for
    /// patterns containing a cycle.
    pub c_h: f64,
    /// Label-propagation constant (sum over labellings extending tau).
    pub l: f64,
}

/// Search order that respects connectivity: BFS inside each component, so
/// every vertex after the first of its component has a placed neighbor.
fn search_order(h: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(h.n());
    let mut seen = vec![false; h.n()];
    for comp in h.components() {
        let start = comp[0];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in h.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order
}

/// Exact count of occurrences of `pat` in `g` by backtracking search.
pub fn count_occurrences(pat: &PartiallyLabelledGraph, g: &LabelledGraph) -> Result<u64> {
    let h = &pat.h;
    let n = g.graph.n();
    if h.n() == 0 {
        return Ok(1);
    }
    let order = search_order(h);
    // Cost estimate: component starts scan all of [n], later vertices scan a
    // neighbor list.
    let max_deg = (0..n).map(|u| g.graph.degree(u)).max().unwrap_or(0) as f64;
    let mut estimate = 1.0f64;
    let mut placed = vec![false; h.n()];
    for &v in &order {
        let anchored = h.neighbors(v).iter().any(|&w| placed[w]);
        estimate *= if anchored { max_deg } else { n as f64 };
        placed[v] = true;
        if estimate > SEARCH_COST_CAP {
            return Err(Error::Resource(format!(
                "occurrence search estimate exceeds cap {SEARCH_COST_CAP:.0e}"
            )));
        }
    }

    fn backtrack(
        order: &[usize],
        idx: usize,
        h: &Graph,
        tau: &[Option<usize>],
        g: &LabelledGraph,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> u64 {
        if idx == order.len() {
            return 1;
        }
        let v = order[idx];
        // Candidates: neighbors of an already-placed pattern neighbor, or
        // all vertices if v starts a new component.
        let anchor = h.neighbors(v).iter().find(|&&w| phi[w] != usize::MAX).copied();
        let mut count = 0;
        let consider = |cand: usize,
                        phi: &mut Vec<usize>,
                        used: &mut Vec<bool>|
         -> u64 {
            if used[cand] {
                return 0;
            }
            if let Some(want) = tau[v] {
                if g.sigma[cand] != want {
                    return 0;
                }
            }
            for &w in h.neighbors(v) {
                if phi[w] != usize::MAX && !g.graph.has_edge(cand, phi[w]) {
                    return 0;
                }
            }
            phi[v] = cand;
            used[cand] = true;
            let c = backtrack(order, idx + 1, h, tau, g, phi, used);
            used[cand] = false;
            phi[v] = usize::MAX;
            c
        };
        match anchor {
            Some(w) => {
                let base = phi[w];
                // Clone the neighbor list indexes to avoid borrowing issues.
                for i in 0..g.graph.neighbors(base).len() {
                    let cand = g.graph.neighbors(base)[i];
                    count += consider(cand, phi, used);
                }
            }
            None => {
                for cand in 0..g.graph.n() {
                    count += consider(cand, phi, used);
                }
            }
        }
        count
    }
    // Parallelize over the image of the first pattern vertex; each worker
    // owns its assignment scratch, the graph is shared read-only.
    use rayon::prelude::*;
    let root = order[0];
    let total = (0..n)
        .into_par_iter()
        .map(|cand| {
            if let Some(want) = pat.tau[root] {
                if g.sigma[cand] != want {
                    return 0;
                }
            }
            let mut phi = vec![usize::MAX; h.n()];
            let mut used = vec![false; n];
            phi[root] = cand;
            used[cand] = true;
            backtrack(&order, 1, h, &pat.tau, g, &mut phi, &mut used)
        })
        .sum();
    Ok(total)
}

/// Label-propagation constant: sum over all extensions `tau_hat` of `tau`
/// of `prod_v pi(tau_hat(v)) prod_{(u,v) in E} M[tau_hat(u)][tau_hat(v)]`.
pub fn label_constant(pat: &PartiallyLabelledGraph, params: &ModelParams) -> f64 {
    let h = &pat.h;
    let k = params.k;
    let free: Vec<usize> = (0..h.n()).filter(|&v| pat.tau[v].is_none()).collect();
    let mut assign: Vec<usize> = pat.tau.iter().map(|t| t.unwrap_or(0)).collect();
    let edges = h.edges();
    let mut total = 0.0;
    let mut stack = vec![0usize; free.len()];
    let mut depth = 0usize;
    loop {
        if depth == free.len() {
            let mut term = 1.0;
            for v in 0..h.n() {
                term *= params.pi[assign[v]];
            }
            for &(u, v) in &edges {
                term *= params.m_at(assign[u], assign[v]);
            }
            total += term;
            if free.is_empty() {
                break;
            }
            depth -= 1;
            stack[depth] += 1;
            continue;
        }
        if stack[depth] == k {
            stack[depth] = 0;
            if depth == 0 {
                break;
            }
            depth -= 1;
            stack[depth] += 1;
            continue;
        }
        assign[free[depth]] = stack[depth];
        depth += 1;
    }
    total
}

fn falling_factorial(d: f64, s: usize) -> f64 {
    (0..s).map(|i| d - i as f64).product()
}

/// Pattern invariants and the first-order planted moment
/// `n^chi * L * C_H`, returned together.
pub fn theoretical_moment(
    pat: &PartiallyLabelledGraph,
    params: &ModelParams,
) -> Result<(f64, PatternStats)> {
    let h = &pat.h;
    let comps = h.components();
    let chi = h.n() as i64 - h.num_edges() as i64;
    let c_h = if pat.is_forest() {
        let mut prod = 1.0;
        for v in 0..h.n() {
            prod *= falling_factorial(params.d, h.degree(v));
        }
        prod / params.d.powi(h.num_edges() as i32)
    } else {
        // Tree-embedding count: a pattern with a cycle has no occurrence in
        // a tree.
        0.0
    };
    let l = label_constant(pat, params);
    let value = (params.n as f64).powi(chi as i32) * l * c_h;
    Ok((value, PatternStats { chi, comp: comps.len(), c_h, l }))
}

/// Pruning of a forest pattern: iteratively delete unlabelled leaves (degree
/// <= 1 without a label) until every leaf is distinguished. Fully unlabelled
/// trees prune to the empty pattern.
pub fn prune(pat: &PartiallyLabelledGraph) -> Result<PartiallyLabelledGraph> {
    if !pat.is_forest() {
        return Err(Error::Precondition("prune needs a forest pattern".into()));
    }
    let n = pat.h.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| pat.h.degree(v)).collect();
    loop {
        let mut removed = false;
        for v in 0..n {
            if alive[v] && pat.tau[v].is_none() && degree[v] <= 1 {
                alive[v] = false;
                removed = true;
                for &w in pat.h.neighbors(v) {
                    if alive[w] {
                        degree[w] -= 1;
                    }
                }
            }
        }
        if !removed {
            break;
        }
    }
    // Reindex survivors.
    let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut index = vec![usize::MAX; n];
    for (new, &old) in survivors.iter().enumerate() {
        index[old] = new;
    }
    let mut h = Graph::empty(survivors.len());
    for (u, v) in pat.h.edges() {
        if alive[u] && alive[v] {
            h.add_edge(index[u], index[v]).unwrap();
        }
    }
    let tau: Vec<Option<usize>> = survivors.iter().map(|&v| pat.tau[v]).collect();
    Ok(PartiallyLabelledGraph { h, tau })
}

/// Verifies that pruning preserves the label-propagation constant.
pub fn moment_invariance_check(pat: &PartiallyLabelledGraph, params: &ModelParams) -> Result<bool> {
    let pruned = prune(pat)?;
    let a = label_constant(pat, params);
    let b = label_constant(&pruned, params);
    Ok((a - b).abs() <= 1e-10 * a.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;
    use crate::samplers::sample_drbm;

    fn toy_graph() -> LabelledGraph {
        // 6 vertices: triangle 0-1-2 (labels 0,0,1), path 3-4-5 (labels 1,0,1).
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)]).unwrap();
        LabelledGraph::new(g, vec![0, 0, 1, 1, 0, 1], 2).unwrap()
    }

    #[test]
    fn single_vertex_counts_group_size() {
        let lg = toy_graph();
        let pat = PartiallyLabelledGraph::labelled_vertex(0);
        assert_eq!(count_occurrences(&pat, &lg).unwrap(), 3);
        let pat = PartiallyLabelledGraph::labelled_vertex(1);
        assert_eq!(count_occurrences(&pat, &lg).unwrap(), 3);
    }

    #[test]
    fn labelled_edge_counts_cross_edges() {
        let lg = toy_graph();
        // Edges with labels (0,1): (1,2), (0,2), (3,4), (4,5) -> 4 ordered
        // occurrences... pattern edge (a,b) with tau(a)=0, tau(b)=1: each
        // unordered mixed edge matches in exactly one orientation.
        let mut h = Graph::empty(2);
        h.add_edge(0, 1).unwrap();
        let pat = PartiallyLabelledGraph::new(h, vec![Some(0), Some(1)]).unwrap();
        assert_eq!(count_occurrences(&pat, &lg).unwrap(), 4);
    }

    #[test]
    fn unlabelled_edge_counts_both_orientations() {
        let lg = toy_graph();
        let mut h = Graph::empty(2);
        h.add_edge(0, 1).unwrap();
        let pat = PartiallyLabelledGraph::new(h, vec![None, None]).unwrap();
        assert_eq!(count_occurrences(&pat, &lg).unwrap(), 2 * 5);
    }

    #[test]
    fn count_matches_factorial_bruteforce() {
        use crate::oracle::count_occurrences_bruteforce;
        let lg = toy_graph();
        // All patterns on <= 4 vertices with <= 4 edges over a fixed shape
        // set, labelled a few ways.
        let shapes: Vec<Vec<(usize, usize)>> = vec![
            vec![],
            vec![(0, 1)],
            vec![(0, 1), (1, 2)],
            vec![(0, 1), (1, 2), (0, 2)],
            vec![(0, 1), (1, 2), (2, 3)],
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        ];
        for (si, shape) in shapes.iter().enumerate() {
            let nv = shape.iter().flat_map(|&(a, b)| [a, b]).max().map_or(1, |m| m + 1);
            let h = Graph::from_edges(nv, shape).unwrap();
            for labelling in 0..3usize {
                let tau: Vec<Option<usize>> = (0..nv)
                    .map(|v| match labelling {
                        0 => None,
                        1 => if v == 0 { Some(0) } else { None },
                        _ => if v == nv - 1 { Some(1) } else { None },
                    })
                    .collect();
                let pat = PartiallyLabelledGraph::new(h.clone(), tau).unwrap();
                let fast = count_occurrences(&pat, &lg).unwrap();
                let slow = count_occurrences_bruteforce(&pat, &lg);
                assert_eq!(fast, slow, "shape {si} labelling {labelling}");
            }
        }
    }

    #[test]
    fn theoretical_moment_examples() {
        let params = ModelParams::symmetric(80, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        // Path of length s labelled (i, j): pi(i) T^s_ij d(d-1)^{s-1} n.
        for s in 1..=4usize {
            let pat = PartiallyLabelledGraph::labelled_path(s, 0, 1);
            let (value, stats) = theoretical_moment(&pat, &params).unwrap();
            // T^s off-diagonal entry for the symmetric 2-group chain.
            let t_ij = (1.0 - 0.5f64.powi(s as i32)) / 2.0;
            let want = 0.5 * t_ij * 10.0 * 9.0f64.powi(s as i32 - 1) * 80.0;
            assert!(
                (value - want).abs() < 1e-6 * want.abs(),
                "s={s}: {value} vs {want}"
            );
            assert_eq!(stats.chi, 1);
            assert_eq!(stats.comp, 1);
        }
        // Single labelled vertex: pi(i) n.
        let pat = PartiallyLabelledGraph::labelled_vertex(0);
        let (value, _) = theoretical_moment(&pat, &params).unwrap();
        assert!((value - 0.5 * 80.0).abs() < 1e-9);
        // Two disjoint labelled vertices: pi(i) pi(j) n^2.
        let pat = PartiallyLabelledGraph::labelled_vertex_pair(0, 1);
        let (value, stats) = theoretical_moment(&pat, &params).unwrap();
        assert!((value - 0.25 * 6400.0).abs() < 1e-9);
        assert_eq!(stats.comp, 2);
        assert_eq!(stats.chi, 2);
    }

    #[test]
    fn cyclic_pattern_has_zero_tree_constant() {
        let params = ModelParams::symmetric(80, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let h = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let pat = PartiallyLabelledGraph::new(h, vec![None, None, None]).unwrap();
        let (value, stats) = theoretical_moment(&pat, &params).unwrap();
        assert_eq!(stats.c_h, 0.0);
        assert_eq!(value, 0.0);
    }

    #[test]
    fn label_constant_marginalizes() {
        // Sum over tau : S -> [k] of L equals L of the unlabelled pattern.
        let params = ModelParams::symmetric(80, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let mut h = Graph::empty(3);
        h.add_edge(0, 1).unwrap();
        h.add_edge(1, 2).unwrap();
        let unlabelled =
            PartiallyLabelledGraph::new(h.clone(), vec![None, None, None]).unwrap();
        let total = label_constant(&unlabelled, &params);
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let pat = PartiallyLabelledGraph::new(
                    h.clone(),
                    vec![Some(i), None, Some(j)],
                )
                .unwrap();
                acc += label_constant(&pat, &params);
            }
        }
        assert!((acc - total).abs() < 1e-12);
    }

    #[test]
    fn prune_cases() {
        // Path of length 3 with one labelled endpoint -> single vertex.
        let pat = {
            let mut h = Graph::empty(4);
            h.add_edge(0, 1).unwrap();
            h.add_edge(1, 2).unwrap();
            h.add_edge(2, 3).unwrap();
            PartiallyLabelledGraph::new(h, vec![Some(1), None, None, None]).unwrap()
        };
        let p = prune(&pat).unwrap();
        assert_eq!(p.h.n(), 1);
        assert_eq!(p.tau, vec![Some(1)]);
        // Both endpoints labelled -> unchanged.
        let pat = PartiallyLabelledGraph::labelled_path(3, 0, 1);
        let p = prune(&pat).unwrap();
        assert_eq!(p.h.n(), 4);
        assert_eq!(p.h.num_edges(), 3);
        // Star K_{1,4} with one labelled leaf: unlabelled leaves go, then
        // the center becomes an unlabelled leaf and goes too.
        let pat = {
            let mut h = Graph::empty(5);
            for leaf in 1..5 {
                h.add_edge(0, leaf).unwrap();
            }
            PartiallyLabelledGraph::new(h, vec![None, Some(0), None, None, None]).unwrap()
        };
        let p = prune(&pat).unwrap();
        assert_eq!(p.h.n(), 1);
        assert_eq!(p.tau, vec![Some(0)]);
        // Fully unlabelled tree -> empty.
        let pat = {
            let mut h = Graph::empty(3);
            h.add_edge(0, 1).unwrap();
            h.add_edge(1, 2).unwrap();
            PartiallyLabelledGraph::new(h, vec![None, None, None]).unwrap()
        };
        let p = prune(&pat).unwrap();
        assert_eq!(p.h.n(), 0);
        // Non-forest rejected.
        let pat = {
            let h = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
            PartiallyLabelledGraph::new(h, vec![None, None, None]).unwrap()
        };
        assert!(prune(&pat).is_err());
    }

    #[test]
    fn pruning_preserves_label_constant() {
        let params = ModelParams::symmetric(80, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let pat = {
            let mut h = Graph::empty(4);
            h.add_edge(0, 1).unwrap();
            h.add_edge(1, 2).unwrap();
            h.add_edge(2, 3).unwrap();
            PartiallyLabelledGraph::new(h, vec![Some(0), None, None, None]).unwrap()
        };
        assert!(moment_invariance_check(&pat, &params).unwrap());
        // L of the pruned single labelled vertex is pi(0).
        let p = prune(&pat).unwrap();
        assert!((label_constant(&p, &params) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn counts_concentrate_on_drbm_sample() {
        // Single moderate check; the full Monte-Carlo sweep lives in the
        // acceptance suite.
        let params = ModelParams::symmetric(512, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let lg = sample_drbm(&params, 77).unwrap();
        let pat = PartiallyLabelledGraph::labelled_path(2, 0, 0);
        let (want, _) = theoretical_moment(&pat, &params).unwrap();
        let got = count_occurrences(&pat, &lg).unwrap() as f64;
        assert!(
            (got - want).abs() < 0.10 * want,
            "count {got} vs theoretical {want}"
        );
    }

    #[test]
    fn pattern_json_roundtrip() {
        let pat = PartiallyLabelledGraph::labelled_path(3, 0, 1);
        let s = pat.to_json().unwrap();
        let q = PartiallyLabelledGraph::from_json(&s).unwrap();
        assert_eq!(q.h.edges(), pat.h.edges());
        assert_eq!(q.tau, pat.tau);
    }

    #[test]
    fn edge_cap_enforced() {
        let mut h = Graph::empty(10);
        for v in 0..9 {
            h.add_edge(v, v + 1).unwrap();
        }
        assert!(PartiallyLabelledGraph::new(h, vec![None; 10]).is_err());
    }
}
