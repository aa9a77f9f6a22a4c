//! End-to-end detection pipelines (spectral, certificate, solver, path
//! statistics) with the robustness harness: adversarial perturbation and
//! repair preprocessing.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{lanczos_extremes, SymOp};
use crate::model::{derive_spectrum, ModelParams, Variant};
use crate::samplers::{rng_from_seed, sample_drbm, sample_er, sample_null_regular, sample_sbm};
use crate::sdp::{
    build_path_stats_sbm, build_sps, refute, solve_feasibility, ResolutionSummary, SdpVerdict,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Spectral,
    SpsCertificate,
    SpsSolver,
    PathStatsSbm,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Spectral => write!(f, "spectral"),
            Method::SpsCertificate => write!(f, "sps-certificate"),
            Method::SpsSolver => write!(f, "sps-solver"),
            Method::PathStatsSbm => write!(f, "path-stats-sbm"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DetectorConfig {
    pub method: Method,
    /// Walk depth.
    pub m: usize,
    /// Band tolerance.
    pub delta: f64,
    /// Spectral margin above the bulk edge.
    pub eta: f64,
    /// Solver iteration cap (solver methods only).
    pub solver_iters: usize,
    /// Solver residual tolerance.
    pub solver_tol: f64,
    /// Degree cap for irregular-model truncation preprocessing.
    pub degree_cap: Option<usize>,
}

impl DetectorConfig {
    pub fn new(method: Method, m: usize, delta: f64, eta: f64) -> Result<Self> {
        if m < 1 || delta <= 0.0 || eta <= 0.0 {
            return Err(Error::InvalidParams(
                "need m >= 1, delta > 0, eta > 0 in detector config".into(),
            ));
        }
        Ok(DetectorConfig {
            method,
            m,
            delta,
            eta,
            solver_iters: 1200,
            solver_tol: 1e-2,
            degree_cap: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    Planted,
    Null,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Planted => write!(f, "PLANTED"),
            Label::Null => write!(f, "NULL"),
        }
    }
}

/// Method-specific diagnostics attached to a verdict.
#[derive(Debug, Clone, Serialize)]
pub enum Evidence {
    Spectral {
        /// Largest non-trivial eigenvalue modulus of the adjacency matrix.
        top_modulus: f64,
        threshold: f64,
    },
    Sdp {
        summary: ResolutionSummary,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub label: Label,
    pub method: Method,
    pub evidence: Evidence,
}

impl Verdict {
    /// Signed score: positive leans planted, negative leans null.
    pub fn margin(&self) -> f64 {
        match &self.evidence {
            Evidence::Spectral { top_modulus, threshold } => top_modulus - threshold,
            Evidence::Sdp { summary } => summary.margin.map_or(0.0, |m| -m),
        }
    }
}

/// Centered adjacency `A - (d/n) J`: deflates the single trivial Perron
/// direction. Disjoint regular components leave extra eigenvalues at d,
/// which is exactly the non-robustness the spectral detector suffers from.
struct CenteredAdjacency<'a> {
    g: &'a Graph,
    d: f64,
}

impl SymOp for CenteredAdjacency<'_> {
    fn dim(&self) -> usize {
        self.g.n()
    }
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = self.g.n();
        let mean: f64 = v.iter().sum::<f64>() / n as f64;
        let shift = self.d * mean;
        for u in 0..n {
            let mut acc = 0.0;
            for &w in self.g.neighbors(u) {
                acc += v[w];
            }
            out[u] = acc - shift;
        }
    }
}

/// Spectral detection: planted iff some eigenvalue other than the top
/// trivial one has modulus above `2 sqrt(d-1) + eta`.
pub fn spectral_detect(g: &Graph, d: usize, eta: f64) -> Result<Verdict> {
    let op = CenteredAdjacency { g, d: d as f64 };
    let (lo, hi) = lanczos_extremes(&op, 180, 23)?;
    let top_modulus = lo.abs().max(hi.abs());
    let threshold = 2.0 * ((d as f64) - 1.0).sqrt() + eta;
    let label = if top_modulus > threshold { Label::Planted } else { Label::Null };
    Ok(Verdict {
        label,
        method: Method::Spectral,
        evidence: Evidence::Spectral { top_modulus, threshold },
    })
}

/// SDP-based detection with degree-repair preprocessing.
pub fn sdp_detect(g: &Graph, params: &ModelParams, cfg: &DetectorConfig) -> Result<Verdict> {
    let d = params.d as usize;
    let spectrum = derive_spectrum(params)?;
    let lambda = spectrum.second_eigenvalue();
    match cfg.method {
        Method::SpsCertificate => {
            let repaired = degree_repair(g, d)?;
            let r = refute(&repaired, d, lambda, cfg.m, cfg.delta)?;
            let label = if r.verdict == SdpVerdict::RefutedByCertificate {
                Label::Null
            } else {
                Label::Planted
            };
            Ok(Verdict {
                label,
                method: cfg.method,
                evidence: Evidence::Sdp { summary: r.summary() },
            })
        }
        Method::SpsSolver => {
            let repaired = degree_repair(g, d)?;
            let inst = build_sps(&repaired, d, lambda, cfg.m, cfg.delta)?;
            let r = solve_feasibility(&inst, cfg.solver_iters, cfg.solver_tol)?;
            let label = if r.verdict == SdpVerdict::FeasibleWitness {
                Label::Planted
            } else {
                Label::Null
            };
            Ok(Verdict {
                label,
                method: cfg.method,
                evidence: Evidence::Sdp { summary: r.summary() },
            })
        }
        Method::PathStatsSbm => {
            let pre = match cfg.degree_cap {
                Some(b) => sbm_degree_truncate(g, b),
                None => g.clone(),
            };
            let inst = build_path_stats_sbm(&pre, params, &spectrum, cfg.m, cfg.delta)?;
            let r = solve_feasibility(&inst, cfg.solver_iters, cfg.solver_tol)?;
            let label = if r.verdict == SdpVerdict::FeasibleWitness {
                Label::Planted
            } else {
                Label::Null
            };
            Ok(Verdict {
                label,
                method: cfg.method,
                evidence: Evidence::Sdp { summary: r.summary() },
            })
        }
        Method::Spectral => spectral_detect(g, d, cfg.eta),
    }
}

/// Delete all edges at vertices of degree above d, then greedily pair
/// degree-deficient vertices in ascending index order; a bounded edge-swap
/// fallback finishes the corners greedy pairing cannot.
pub fn degree_repair(g: &Graph, d: usize) -> Result<Graph> {
    let n = g.n();
    if n * d % 2 != 0 {
        return Err(Error::RepairFailure("n*d is odd; no d-regular graph exists".into()));
    }
    let mut h = g.clone();
    let over: Vec<usize> = (0..n).filter(|&u| h.degree(u) > d).collect();
    for &u in &over {
        let nbrs: Vec<usize> = h.neighbors(u).to_vec();
        for v in nbrs {
            h.remove_edge(u, v);
        }
    }
    // Greedy pairing of deficient vertices, ascending order.
    loop {
        let deficient: Vec<usize> = (0..n).filter(|&u| h.degree(u) < d).collect();
        if deficient.is_empty() {
            break;
        }
        let mut progressed = false;
        'outer: for i in 0..deficient.len() {
            let u = deficient[i];
            if h.degree(u) >= d {
                continue;
            }
            for &v in deficient.iter().skip(i + 1) {
                if h.degree(v) >= d || h.has_edge(u, v) {
                    continue;
                }
                h.add_edge(u, v)?;
                progressed = true;
                break 'outer;
            }
        }
        if !progressed {
            // Swap fallback: route deficits through an existing edge.
            let mut budget = 4 * n;
            while budget > 0 {
                budget -= 1;
                let deficient: Vec<usize> = (0..n).filter(|&u| h.degree(u) < d).collect();
                if deficient.is_empty() {
                    break;
                }
                let u = deficient[0];
                // Find an edge (x, y) disjoint from u with x, y not adjacent
                // to u; replace it by (u, x), (u, y) if u needs two, or pull
                // a second deficient vertex in if it needs one.
                let need_two = d - h.degree(u) >= 2;
                let partner = deficient.iter().skip(1).copied().find(|&v| !h.has_edge(u, v));
                let edges = h.edges();
                let mut done = false;
                for &(x, y) in &edges {
                    if x == u || y == u {
                        continue;
                    }
                    if need_two {
                        if !h.has_edge(u, x) && !h.has_edge(u, y) {
                            h.remove_edge(x, y);
                            h.add_edge(u, x)?;
                            h.add_edge(u, y)?;
                            done = true;
                            break;
                        }
                    } else if let Some(v) = partner {
                        if x == v || y == v {
                            continue;
                        }
                        if !h.has_edge(u, x) && !h.has_edge(v, y) {
                            h.remove_edge(x, y);
                            h.add_edge(u, x)?;
                            h.add_edge(v, y)?;
                            done = true;
                            break;
                        }
                    } else {
                        // Single deficient vertex with deficit 1 cannot
                        // happen when n*d is even, but guard anyway.
                        break;
                    }
                }
                if !done {
                    return Err(Error::RepairFailure(
                        "edge-swap fallback found no usable edge".into(),
                    ));
                }
                if (0..n).all(|v| h.degree(v) == d) {
                    break;
                }
            }
            if budget == 0 {
                return Err(Error::RepairFailure("edge-swap budget exhausted".into()));
            }
        }
    }
    if !h.is_regular(d) {
        return Err(Error::RepairFailure("repair finished non-regular".into()));
    }
    Ok(h)
}

/// Delete edges incident to vertices of degree above the cap. Single pass
/// over the original degrees; idempotent because deletion only lowers
/// degrees.
pub fn sbm_degree_truncate(g: &Graph, b: usize) -> Graph {
    let n = g.n();
    let heavy: Vec<usize> = (0..n).filter(|&u| g.degree(u) > b).collect();
    let mut h = g.clone();
    for &u in &heavy {
        let nbrs: Vec<usize> = h.neighbors(u).to_vec();
        for v in nbrs {
            h.remove_edge(u, v);
        }
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Adversary {
    /// Flip `budget` distinct vertex pairs (add if absent, delete if
    /// present).
    RandomFlips,
    /// Carve out d+1 vertices and rewire them into a disjoint complete
    /// graph.
    PlantClique,
    /// Delete up to `budget` edges across a random balanced bipartition.
    TargetedCut,
}

impl std::fmt::Display for Adversary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Adversary::RandomFlips => write!(f, "random-flips"),
            Adversary::PlantClique => write!(f, "plant-clique"),
            Adversary::TargetedCut => write!(f, "targeted-cut"),
        }
    }
}

/// Edit distance between two graphs on the same vertex set.
pub fn edit_distance(a: &Graph, b: &Graph) -> usize {
    let ea = a.edge_set();
    let eb = b.edge_set();
    ea.symmetric_difference(&eb).count()
}

/// Apply an adversarial perturbation with edit distance at most `budget`.
/// `d` parameterizes the clique adversary.
pub fn perturb(g: &Graph, mode: Adversary, budget: usize, d: usize, seed: u64) -> Result<Graph> {
    let n = g.n();
    let mut rng = rng_from_seed(seed);
    let mut h = g.clone();
    if budget == 0 {
        return Ok(h);
    }
    match mode {
        Adversary::RandomFlips => {
            let max_pairs = n * (n - 1) / 2;
            let picks = budget.min(max_pairs);
            let mut chosen: HashSet<(usize, usize)> = HashSet::new();
            while chosen.len() < picks {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u == v {
                    continue;
                }
                let pair = (u.min(v), u.max(v));
                if !chosen.insert(pair) {
                    continue;
                }
                if h.has_edge(pair.0, pair.1) {
                    h.remove_edge(pair.0, pair.1);
                } else {
                    h.add_edge(pair.0, pair.1)?;
                }
            }
        }
        Adversary::PlantClique => {
            if d + 1 > n {
                return Err(Error::InvalidParams("clique larger than the graph".into()));
            }
            // Choose d+1 distinct vertices.
            let mut pool: Vec<usize> = (0..n).collect();
            for i in 0..=d {
                let j = rng.gen_range(i..n);
                pool.swap(i, j);
            }
            let clique: Vec<usize> = pool[..=d].to_vec();
            let cset: HashSet<usize> = clique.iter().copied().collect();
            // Cost: external incident edges plus missing internal pairs.
            let mut cost = 0usize;
            for &u in &clique {
                for &v in g.neighbors(u) {
                    if !cset.contains(&v) {
                        cost += 1;
                    }
                }
            }
            for i in 0..clique.len() {
                for j in (i + 1)..clique.len() {
                    if !g.has_edge(clique[i], clique[j]) {
                        cost += 1;
                    }
                }
            }
            if cost > budget {
                return Err(Error::InvalidParams(format!(
                    "clique rewiring needs {cost} edits, budget is {budget}"
                )));
            }
            for &u in &clique {
                let nbrs: Vec<usize> = h.neighbors(u).to_vec();
                for v in nbrs {
                    if !cset.contains(&v) {
                        h.remove_edge(u, v);
                    }
                }
            }
            for i in 0..clique.len() {
                for j in (i + 1)..clique.len() {
                    if !h.has_edge(clique[i], clique[j]) {
                        h.add_edge(clique[i], clique[j])?;
                    }
                }
            }
        }
        Adversary::TargetedCut => {
            let mut side = vec![false; n];
            let mut pool: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                pool.swap(i, j);
            }
            for &u in pool.iter().take(n / 2) {
                side[u] = true;
            }
            let crossing: Vec<(usize, usize)> = h
                .edges()
                .into_iter()
                .filter(|&(u, v)| side[u] != side[v])
                .collect();
            for &(u, v) in crossing.iter().take(budget) {
                h.remove_edge(u, v);
            }
        }
    }
    let dist = edit_distance(g, &h);
    debug_assert!(dist <= budget, "edit distance {dist} exceeded budget {budget}");
    Ok(h)
}

/// One row of a robustness trial table.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub seed: u64,
    pub model: String,
    pub adversary: String,
    pub method: String,
    pub verdict_clean: String,
    pub verdict_perturbed: String,
    pub margin: f64,
    pub runtime_ms: u128,
}

pub fn trial_rows_to_csv(rows: &[TrialRow]) -> String {
    let mut s = String::from(
        "seed,model,adversary,method,verdict_clean,verdict_perturbed,margin,runtime_ms\n",
    );
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.seed,
            r.model,
            r.adversary,
            r.method,
            r.verdict_clean,
            r.verdict_perturbed,
            r.margin,
            r.runtime_ms
        ));
    }
    s
}

/// For each trial seed: sample null and planted graphs, apply the adversary
/// to each, run the detector on clean and perturbed versions, and record
/// verdicts plus margins.
pub fn robustness_trial(
    params: &ModelParams,
    cfg: &DetectorConfig,
    adversary: Adversary,
    budget: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialRow>> {
    let d = params.d as usize;
    let rows: Vec<Result<Vec<TrialRow>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = seed.wrapping_add(t);
            let mut out = Vec::with_capacity(2);
            let null_graph = match params.variant {
                Variant::Drbm => sample_null_regular(params.n, d, trial_seed)?,
                Variant::Sbm => sample_er(params.n, params.d, trial_seed)?,
            };
            let planted_graph = match params.variant {
                Variant::Drbm => sample_drbm(params, trial_seed)?.graph,
                Variant::Sbm => sample_sbm(params, trial_seed)?.graph,
            };
            for (model, graph) in [("null", null_graph), ("planted", planted_graph)] {
                let start = std::time::Instant::now();
                let perturbed = perturb(&graph, adversary, budget, d, trial_seed ^ 0x5eed)?;
                let clean = run_method(&graph, params, cfg)?;
                let noisy = run_method(&perturbed, params, cfg)?;
                out.push(TrialRow {
                    seed: trial_seed,
                    model: model.into(),
                    adversary: adversary.to_string(),
                    method: cfg.method.to_string(),
                    verdict_clean: clean.label.to_string(),
                    verdict_perturbed: noisy.label.to_string(),
                    margin: clean.margin(),
                    runtime_ms: start.elapsed().as_millis(),
                });
            }
            Ok(out)
        })
        .collect();
    let mut flat = Vec::new();
    for r in rows {
        flat.extend(r?);
    }
    Ok(flat)
}

fn run_method(g: &Graph, params: &ModelParams, cfg: &DetectorConfig) -> Result<Verdict> {
    match cfg.method {
        Method::Spectral => spectral_detect(g, params.d as usize, cfg.eta),
        _ => sdp_detect(g, params, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;

    #[test]
    fn spectral_on_k4_is_null() {
        // K_4 eigenvalues {3, -1, -1, -1}: bulk edge 2 sqrt 2 > 1.
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let v = spectral_detect(&k4, 3, 0.1).unwrap();
        assert_eq!(v.label, Label::Null);
    }

    #[test]
    fn spectral_fooled_by_disjoint_clique() {
        // d-regular graph plus a disjoint K_{d+1}: second Perron eigenvalue
        // at d trips the detector.
        let base = sample_null_regular(60, 4, 3).unwrap();
        let mut edges = base.edges();
        for i in 0..5usize {
            for j in (i + 1)..5 {
                edges.push((60 + i, 60 + j));
            }
        }
        let g = Graph::from_edges(65, &edges).unwrap();
        let v = spectral_detect(&g, 4, 0.2).unwrap();
        assert_eq!(v.label, Label::Planted);
        // The clean base graph reads null.
        let v = spectral_detect(&base, 4, 0.2).unwrap();
        assert_eq!(v.label, Label::Null);
    }

    #[test]
    fn spectral_detects_planted_structure() {
        let params = ModelParams::symmetric(400, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let lg = sample_drbm(&params, 12).unwrap();
        let v = spectral_detect(&lg.graph, 10, 0.2).unwrap();
        assert_eq!(v.label, Label::Planted);
    }

    #[test]
    fn certificate_detector_both_sides() {
        let params = ModelParams::symmetric(400, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let cfg = DetectorConfig::new(Method::SpsCertificate, 10, 0.01, 0.2).unwrap();
        let null = sample_null_regular(400, 10, 31).unwrap();
        assert_eq!(sdp_detect(&null, &params, &cfg).unwrap().label, Label::Null);
        let planted = sample_drbm(&params, 31).unwrap();
        assert_eq!(
            sdp_detect(&planted.graph, &params, &cfg).unwrap().label,
            Label::Planted
        );
    }

    #[test]
    fn repair_identity_on_regular() {
        let g = sample_null_regular(50, 4, 7).unwrap();
        let h = degree_repair(&g, 4).unwrap();
        assert_eq!(h.edges(), g.edges());
    }

    #[test]
    fn repair_fixes_added_edge() {
        // d-regular plus one extra edge: both endpoints over-degree, all
        // their edges deleted, then patched back to regular.
        let g = sample_null_regular(10, 3, 5).unwrap();
        let mut broken = g.clone();
        let extra = (0..10)
            .flat_map(|u| ((u + 1)..10).map(move |v| (u, v)))
            .find(|&(u, v)| !g.has_edge(u, v))
            .unwrap();
        broken.add_edge(extra.0, extra.1).unwrap();
        let h = degree_repair(&broken, 3).unwrap();
        assert!(h.is_regular(3));
        h.check_simple().unwrap();
    }

    #[test]
    fn repair_after_random_flips() {
        let g = sample_null_regular(200, 10, 9).unwrap();
        let noisy = perturb(&g, Adversary::RandomFlips, 20, 10, 42).unwrap();
        let h = degree_repair(&noisy, 10).unwrap();
        assert!(h.is_regular(10));
        // The repair blow-up stays within a constant multiple of the edit
        // budget: deleting all edges at an over-degree vertex costs about
        // 2(d+1) edits per flipped edge before patching.
        let dist = edit_distance(&g, &h);
        assert!(dist <= 20 * (4 * 10 + 4), "repair moved {dist} edges");
    }

    #[test]
    fn truncate_caps_degree_and_is_idempotent() {
        let mut g = Graph::empty(10);
        for v in 1..8 {
            g.add_edge(0, v).unwrap();
        }
        g.add_edge(8, 9).unwrap();
        let h = sbm_degree_truncate(&g, 5);
        assert_eq!(h.degree(0), 0);
        assert!(h.has_edge(8, 9));
        let h2 = sbm_degree_truncate(&h, 5);
        assert_eq!(h.edges(), h2.edges());
        // Max degree <= cap already: unchanged.
        let same = sbm_degree_truncate(&g, 7);
        assert_eq!(same.edges(), g.edges());
    }

    #[test]
    fn perturb_zero_budget_is_identity() {
        let g = sample_null_regular(30, 3, 2).unwrap();
        let h = perturb(&g, Adversary::RandomFlips, 0, 3, 9).unwrap();
        assert_eq!(g.edges(), h.edges());
    }

    #[test]
    fn perturb_flips_exact_budget() {
        let g = sample_null_regular(40, 3, 4).unwrap();
        let h = perturb(&g, Adversary::RandomFlips, 15, 3, 4).unwrap();
        assert_eq!(edit_distance(&g, &h), 15);
    }

    #[test]
    fn plant_clique_creates_component() {
        let g = sample_null_regular(80, 4, 6).unwrap();
        let h = perturb(&g, Adversary::PlantClique, 4 * 5 + 10, 4, 8).unwrap();
        // Some component of size exactly d+1 that is complete.
        let has_clique = h.components().iter().any(|comp| {
            comp.len() == 5
                && comp
                    .iter()
                    .all(|&u| comp.iter().all(|&v| u == v || h.has_edge(u, v)))
        });
        assert!(has_clique);
        assert!(edit_distance(&g, &h) <= 30);
    }

    #[test]
    fn plant_clique_needs_budget() {
        let g = sample_null_regular(80, 4, 6).unwrap();
        assert!(perturb(&g, Adversary::PlantClique, 3, 4, 8).is_err());
    }

    #[test]
    fn targeted_cut_respects_budget() {
        let g = sample_null_regular(60, 4, 11).unwrap();
        let h = perturb(&g, Adversary::TargetedCut, 12, 4, 3).unwrap();
        assert!(edit_distance(&g, &h) <= 12);
    }

    #[test]
    fn detector_is_deterministic() {
        let params = ModelParams::symmetric(200, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let g = sample_null_regular(200, 10, 77).unwrap();
        let cfg = DetectorConfig::new(Method::SpsCertificate, 8, 0.01, 0.2).unwrap();
        let a = sdp_detect(&g, &params, &cfg).unwrap();
        let b = sdp_detect(&g, &params, &cfg).unwrap();
        assert_eq!(a.label, b.label);
        let sa = spectral_detect(&g, 10, 0.2).unwrap();
        let sb = spectral_detect(&g, 10, 0.2).unwrap();
        assert_eq!(sa.label, sb.label);
        assert_eq!(sa.margin(), sb.margin());
    }

    #[test]
    fn robustness_zero_budget_always_agrees() {
        let params = ModelParams::symmetric(96, 10.0, 2, 0.5, Variant::Drbm).unwrap();
        let cfg = DetectorConfig::new(Method::Spectral, 4, 0.1, 0.2).unwrap();
        let rows = robustness_trial(&params, &cfg, Adversary::RandomFlips, 0, 3, 5).unwrap();
        assert_eq!(rows.len(), 6);
        for r in &rows {
            assert_eq!(r.verdict_clean, r.verdict_perturbed, "row {r:?}");
        }
        let csv = trial_rows_to_csv(&rows);
        assert!(csv.starts_with("seed,model,adversary"));
        assert_eq!(csv.lines().count(), 7);
    }
}
