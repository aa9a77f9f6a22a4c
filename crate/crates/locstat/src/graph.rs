//! Simple undirected graphs with adjacency lists, plus the labelled variant
//! and the plain-text edge-list format shared by the CLI and the samplers.

use crate::error::{Error, Result};
use std::collections::HashSet;
use std::fmt::Write as _;

/// Simple undirected graph. No self-loops, no duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].contains(&b)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::InvalidParams(format!("self-loop at {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidParams(format!("edge ({u},{v}) out of range")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidParams(format!("duplicate edge ({u},{v})")));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.m += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        let pos_u = self.adj[u].iter().position(|&x| x == v);
        if let Some(p) = pos_u {
            self.adj[u].swap_remove(p);
            let q = self.adj[v].iter().position(|&x| x == u).expect("asymmetric adjacency");
            self.adj[v].swap_remove(q);
            self.m -= 1;
            true
        } else {
            false
        }
    }

    /// Edges as sorted `(min, max)` pairs, in deterministic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn edge_set(&self) -> HashSet<(usize, usize)> {
        self.edges().into_iter().collect()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.n).all(|u| self.degree(u) == d)
    }

    /// Checks internal consistency: symmetric adjacency, no loops, no dups.
    pub fn check_simple(&self) -> Result<()> {
        for u in 0..self.n {
            let mut seen = HashSet::new();
            for &v in &self.adj[u] {
                if v == u {
                    return Err(Error::InvalidParams(format!("loop at {u}")));
                }
                if !seen.insert(v) {
                    return Err(Error::InvalidParams(format!("duplicate edge ({u},{v})")));
                }
                if !self.adj[v].contains(&u) {
                    return Err(Error::InvalidParams(format!("asymmetric edge ({u},{v})")));
                }
            }
        }
        Ok(())
    }

    /// Connected components; returns a vector of vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(u) = stack.pop() {
                members.push(u);
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().len() == 1
    }

    /// BFS distances from `start`, capped at `max_depth` (`usize::MAX` for
    /// unreachable or beyond-cap vertices).
    pub fn bfs_distances(&self, start: usize, max_depth: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= max_depth {
                continue;
            }
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Plain-text serialization: first line `n m`, then one `u v` line per
    /// edge with 0-based endpoints in sorted order.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}", self.n, self.m).unwrap();
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<(Graph, Option<Vec<usize>>)> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge-list file".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected 'n m'".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected 'n m'".into()))?;
        let mut g = Graph::empty(n);
        let mut labels: Vec<(usize, usize)> = Vec::new();
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [u, v] => {
                    let u: usize = u.parse().map_err(|_| Error::Parse(format!("bad edge line: {line}")))?;
                    let v: usize = v.parse().map_err(|_| Error::Parse(format!("bad edge line: {line}")))?;
                    g.add_edge(u, v)?;
                }
                ["label", u, l] => {
                    let u: usize = u.parse().map_err(|_| Error::Parse(format!("bad label line: {line}")))?;
                    let l: usize = l.parse().map_err(|_| Error::Parse(format!("bad label line: {line}")))?;
                    labels.push((u, l));
                }
                _ => return Err(Error::Parse(format!("unrecognized line: {line}"))),
            }
        }
        if g.m != m {
            return Err(Error::Parse(format!("header said {m} edges, found {}", g.m)));
        }
        let labels = if labels.is_empty() {
            None
        } else {
            let mut sigma = vec![usize::MAX; n];
            for (u, l) in labels {
                if u >= n {
                    return Err(Error::Parse(format!("label for out-of-range vertex {u}")));
                }
                sigma[u] = l;
            }
            if sigma.iter().any(|&l| l == usize::MAX) {
                return Err(Error::Parse("labels present but incomplete".into()));
            }
            Some(sigma)
        };
        Ok((g, labels))
    }
}

/// A graph together with a vertex labelling `sigma : [n] -> [k]`.
#[derive(Debug, Clone)]
pub struct LabelledGraph {
    pub graph: Graph,
    pub sigma: Vec<usize>,
    pub k: usize,
}

impl LabelledGraph {
    pub fn new(graph: Graph, sigma: Vec<usize>, k: usize) -> Result<Self> {
        if sigma.len() != graph.n() {
            return Err(Error::InvalidParams("labelling length != n".into()));
        }
        if sigma.iter().any(|&l| l >= k) {
            return Err(Error::InvalidParams("label out of range".into()));
        }
        Ok(LabelledGraph { graph, sigma, k })
    }

    /// The n x k 0/1 indicator matrix; row u has a single 1 at sigma(u).
    pub fn indicator(&self) -> Vec<Vec<f64>> {
        let mut x = vec![vec![0.0; self.k]; self.graph.n()];
        for (u, &l) in self.sigma.iter().enumerate() {
            x[u][l] = 1.0;
        }
        x
    }

    pub fn group(&self, i: usize) -> Vec<usize> {
        (0..self.graph.n()).filter(|&u| self.sigma[u] == i).collect()
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &l in &self.sigma {
            sizes[l] += 1;
        }
        sizes
    }

    /// Edge-list text with `label u l` lines appended.
    pub fn to_edge_list(&self) -> String {
        let mut s = self.graph.to_edge_list();
        for (u, &l) in self.sigma.iter().enumerate() {
            writeln!(s, "label {u} {l}").unwrap();
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let (graph, labels) = Graph::from_edge_list(text)?;
        let sigma = labels.ok_or_else(|| Error::Parse("no labels in file".into()))?;
        let k = sigma.iter().max().map_or(1, |&m| m + 1);
        LabelledGraph::new(graph, sigma, k)
    }
}
