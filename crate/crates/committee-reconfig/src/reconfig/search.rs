//! Exact breadth-first search, isolation radii and the restricted committee graph.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use super::{require, Path, Predicate};
use crate::combin::{binomial, Subsets};
use crate::{CandidateSet, Error, Instance};

/// Default cap on committees examined by [`isolation_radius`].
pub const ISOLATION_LIMIT: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BfsOutcome {
    Found { path: Path },
    /// The whole component of the start committee was explored.
    Disconnected { explored: usize },
    BudgetExceeded { explored: usize },
}

impl BfsOutcome {
    pub fn path(&self) -> Option<&Path> {
        match self {
            BfsOutcome::Found { path } => Some(path),
            _ => None,
        }
    }
}

/// Shortest path from `w` to `w2` through committees satisfying `pred`.
///
/// `node_budget` caps the number of committees expanded.
pub fn bfs_connect(
    inst: &Instance,
    w: &CandidateSet,
    w2: &CandidateSet,
    pred: &Predicate,
    node_budget: usize,
) -> Result<BfsOutcome, Error> {
    require(inst, w, pred, "start")?;
    require(inst, w2, pred, "target")?;
    if w == w2 {
        let v = pred.evaluate(inst, w);
        return Ok(BfsOutcome::Found { path: Path { predicate: pred.label(), steps: vec![w.clone()], log: vec![v] } });
    }
    // parent index per discovered committee; usize::MAX marks the root
    let mut nodes: Vec<CandidateSet> = vec![w.clone()];
    let mut parent: Vec<usize> = vec![usize::MAX];
    let mut index: HashMap<CandidateSet, Option<usize>> = HashMap::new();
    index.insert(w.clone(), Some(0));
    let mut queue = VecDeque::from([0usize]);
    let mut explored = 0usize;
    let m = inst.m();
    while let Some(u) = queue.pop_front() {
        if explored >= node_budget {
            return Ok(BfsOutcome::BudgetExceeded { explored });
        }
        explored += 1;
        let cur = nodes[u].clone();
        let members = cur.to_vec();
        for &out in &members {
            for inc in 0..m {
                if cur.contains(inc) {
                    continue;
                }
                let next = cur.swapped(out, inc);
                if index.contains_key(&next) {
                    continue;
                }
                if !pred.holds(inst, &next) {
                    index.insert(next, None);
                    continue;
                }
                let id = nodes.len();
                index.insert(next.clone(), Some(id));
                nodes.push(next.clone());
                parent.push(u);
                if next == *w2 {
                    let mut steps = vec![next];
                    let mut p = u;
                    while p != usize::MAX {
                        steps.push(nodes[p].clone());
                        p = parent[p];
                    }
                    steps.reverse();
                    let log = steps.iter().map(|s| pred.evaluate(inst, s)).collect();
                    return Ok(BfsOutcome::Found { path: Path { predicate: pred.label(), steps, log } });
                }
                queue.push_back(id);
            }
        }
    }
    Ok(BfsOutcome::Disconnected { explored })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolationReport {
    /// Largest `r <= max_r` with no other satisfying committee within distance `r`.
    pub radius: usize,
    /// Closest other satisfying committee found, if any within `max_r`.
    pub nearest: Option<CandidateSet>,
    pub nearest_distance: Option<usize>,
    pub checked: u128,
}

impl IsolationReport {
    /// No satisfying committee lies one swap away.
    pub fn is_isolated(&self) -> bool {
        self.radius >= 1
    }
}

/// Distance-layered search for the closest other committee satisfying `pred`.
pub fn isolation_radius(inst: &Instance, w: &CandidateSet, pred: &Predicate, max_r: usize, limit: u128) -> Result<IsolationReport, Error> {
    require(inst, w, pred, "committee")?;
    let k = inst.k();
    let inside = w.to_vec();
    let outside: Vec<usize> = (0..inst.m()).filter(|&c| !w.contains(c)).collect();
    let max_r = max_r.min(k).min(outside.len());
    let mut total: u128 = 0;
    for d in 1..=max_r {
        total = total.saturating_add(binomial(k as u64, d as u64).saturating_mul(binomial(outside.len() as u64, d as u64)));
    }
    if total > limit {
        return Err(Error::TooLarge { what: "isolation search", size: total, limit });
    }
    let mut checked = 0u128;
    for d in 1..=max_r {
        for outs in Subsets::new(inside.len(), d) {
            let mut base = w.clone();
            for &i in &outs {
                base.remove(inside[i]);
            }
            for ins in Subsets::new(outside.len(), d) {
                let mut cand = base.clone();
                for &i in &ins {
                    cand.insert(outside[i]);
                }
                checked += 1;
                if pred.holds(inst, &cand) {
                    return Ok(IsolationReport { radius: d - 1, nearest: Some(cand), nearest_distance: Some(d), checked });
                }
            }
        }
    }
    Ok(IsolationReport { radius: max_r, nearest: None, nearest_distance: None, checked })
}

/// Committees satisfying a predicate and the single-swap edges between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommitteeGraph {
    pub predicate: String,
    pub nodes: Vec<CandidateSet>,
    pub edges: Vec<(usize, usize)>,
}

impl CommitteeGraph {
    /// Connected components as lists of node indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::new();
        for s in 0..self.nodes.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &t in &adj[comp[i]] {
                    if !seen[t] {
                        seen[t] = true;
                        comp.push(t);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph committees {\n");
        let _ = writeln!(s, "  label=\"{}\";", self.predicate);
        for (i, w) in self.nodes.iter().enumerate() {
            let members: Vec<String> = w.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "  n{i} [label=\"{{{}}}\"];", members.join(","));
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// Enumerates every committee, keeps those satisfying `pred`, and links pairs one swap apart.
pub fn committee_graph(inst: &Instance, pred: &Predicate, limit: u128) -> Result<CommitteeGraph, Error> {
    let total = binomial(inst.m() as u64, inst.k() as u64);
    if total > limit {
        return Err(Error::TooLarge { what: "committee graph", size: total, limit });
    }
    let nodes: Vec<CandidateSet> = Subsets::new(inst.m(), inst.k())
        .map(|s| CandidateSet::from_indices(inst.m(), s))
        .filter(|w| pred.holds(inst, w))
        .collect();
    let index: HashMap<&CandidateSet, usize> = nodes.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut edges = Vec::new();
    for (i, w) in nodes.iter().enumerate() {
        for out in w.iter() {
            for inc in 0..inst.m() {
                if w.contains(inc) {
                    continue;
                }
                if let Some(&j) = index.get(&w.swapped(out, inc)) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(CommitteeGraph { predicate: pred.label(), nodes, edges })
}
