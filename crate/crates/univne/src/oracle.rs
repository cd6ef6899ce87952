//! Exhaustive reference solver for small instances.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Result, UnivneError};
use crate::netgraph::{mapping_cost, Mapping, NodeId, SolveOutcome, SubstrateNetwork, SubstratePath, VirtualNetwork};

pub const SOLVER_ID: &str = "oracle";

/// Enumeration budgets. Exceeding one aborts with an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_placements: u64,
    pub max_paths_per_edge: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_placements: 10_000_000, max_paths_per_edge: 10_000 }
    }
}

/// Every loop-free path from `a` to `b` in lexicographic node order; the
/// empty path when `a == b`.
pub fn enumerate_simple_paths(s: &SubstrateNetwork, a: NodeId, b: NodeId, limits: &OracleLimits) -> Result<Vec<SubstratePath>> {
    Ok(enumerate_options(s, a, b, limits)?.into_iter().map(|o| o.path).collect())
}

#[derive(Debug, Clone)]
struct RouteOption {
    path: SubstratePath,
    edges: Vec<usize>,
    cost: u64,
}

fn enumerate_options(s: &SubstrateNetwork, a: NodeId, b: NodeId, limits: &OracleLimits) -> Result<Vec<RouteOption>> {
    let n = s.node_count();
    if a >= n || b >= n {
        return Err(UnivneError::InvalidNetwork(format!("path endpoints ({a}, {b}) outside 0..{n}")));
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut nodes = vec![a];
    let mut edges = Vec::new();
    on_path[a] = true;

    struct Walk<'a> {
        s: &'a SubstrateNetwork,
        target: NodeId,
        limit: usize,
    }
    fn dfs(w: &Walk, on_path: &mut [bool], nodes: &mut Vec<NodeId>, edges: &mut Vec<usize>, out: &mut Vec<RouteOption>) -> Result<()> {
        let u = *nodes.last().expect("non-empty walk");
        if u == w.target {
            if out.len() == w.limit {
                return Err(UnivneError::BudgetExceeded(format!("more than {} simple paths between two substrate nodes", w.limit)));
            }
            let cost = edges.iter().map(|&e| w.s.edge_cost(e)).fold(0u64, u64::saturating_add);
            out.push(RouteOption { path: SubstratePath::from_nodes(nodes.clone())?, edges: edges.clone(), cost });
            return Ok(());
        }
        for &(v, e) in w.s.graph().adjacency(u) {
            if on_path[v] {
                continue;
            }
            on_path[v] = true;
            nodes.push(v);
            edges.push(e);
            dfs(w, on_path, nodes, edges, out)?;
            edges.pop();
            nodes.pop();
            on_path[v] = false;
        }
        Ok(())
    }
    dfs(&Walk { s, target: b, limit: limits.max_paths_per_edge }, &mut on_path, &mut nodes, &mut edges, &mut out)?;
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    MinCost,
    AnyFeasible,
}

struct Search<'a> {
    v: &'a VirtualNetwork,
    s: &'a SubstrateNetwork,
    limits: &'a OracleLimits,
    goal: Goal,
    cache: HashMap<(NodeId, NodeId), Rc<Vec<RouteOption>>>,
    /// `closing[i]`: virtual edges whose later endpoint is node `i`.
    closing: Vec<Vec<usize>>,
    /// `twin_floor[i]`: an earlier node interchangeable with `i`, whose host
    /// bounds the host of `i` from below.
    twin_floor: Vec<Option<usize>>,
    placements_seen: u64,
    placement: Vec<NodeId>,
    used: Vec<u64>,
    load: Vec<u64>,
    choice: Vec<usize>,
    best: Option<(u64, Vec<NodeId>, Vec<usize>)>,
}

impl Search<'_> {
    fn options(&mut self, a: NodeId, b: NodeId) -> Result<Rc<Vec<RouteOption>>> {
        if let Some(o) = self.cache.get(&(a, b)) {
            return Ok(o.clone());
        }
        let o = Rc::new(enumerate_options(self.s, a, b, self.limits)?);
        self.cache.insert((a, b), o.clone());
        Ok(o)
    }

    fn done(&self) -> bool {
        self.goal == Goal::AnyFeasible && self.best.is_some()
    }

    fn pruned(&self, cost: u64) -> bool {
        self.goal == Goal::MinCost && self.best.as_ref().is_some_and(|(b, _, _)| cost >= *b)
    }

    /// Places virtual node `i`, routing each edge as soon as both of its
    /// endpoints are placed.
    fn place(&mut self, i: usize, cost: u64) -> Result<()> {
        if i == self.v.node_count() {
            if !self.pruned(cost) {
                self.best = Some((cost, self.placement.clone(), self.choice.clone()));
            }
            return Ok(());
        }
        let lowest = self.twin_floor[i].map_or(0, |t| self.placement[t]);
        for u in lowest..self.s.node_count() {
            if self.used[u] >= self.s.node_capacity(u) {
                continue;
            }
            let next = cost.saturating_add(self.s.node_cost(u));
            if self.pruned(next) {
                continue;
            }
            if i + 1 == self.v.node_count() {
                self.placements_seen += 1;
                if self.placements_seen > self.limits.max_placements {
                    return Err(UnivneError::BudgetExceeded(format!("more than {} placements enumerated", self.limits.max_placements)));
                }
            }
            self.used[u] += 1;
            self.placement[i] = u;
            self.route(i, 0, next)?;
            self.used[u] -= 1;
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    fn route(&mut self, i: usize, j: usize, cost: u64) -> Result<()> {
        let Some(&e) = self.closing[i].get(j) else {
            return self.place(i + 1, cost);
        };
        let (a, b) = self.v.graph().edge(e);
        let options = self.options(self.placement[a], self.placement[b])?;
        for (k, opt) in options.iter().enumerate() {
            let next = cost.saturating_add(opt.cost);
            if self.pruned(next) {
                continue;
            }
            if opt.edges.iter().any(|&x| self.load[x] >= self.s.edge_capacity(x)) {
                continue;
            }
            for &x in &opt.edges {
                self.load[x] += 1;
            }
            self.choice[e] = k;
            let r = self.route(i, j + 1, next);
            for &x in &opt.edges {
                self.load[x] -= 1;
            }
            r?;
            if self.done() {
                break;
            }
        }
        Ok(())
    }
}

/// Nodes with equal neighbourhoods apart from each other; swapping them is
/// an automorphism.
fn twins(v: &VirtualNetwork, a: NodeId, b: NodeId) -> bool {
    let g = v.graph();
    let side = |x: NodeId, y: NodeId| {
        let mut n: Vec<NodeId> = g.neighbors(x).filter(|&z| z != y).collect();
        n.sort_unstable();
        n
    };
    side(a, b) == side(b, a)
}

fn run(v: &VirtualNetwork, s: &SubstrateNetwork, limits: &OracleLimits, goal: Goal) -> Result<Option<Mapping>> {
    let mut closing = vec![Vec::new(); v.node_count()];
    for (e, &(a, b)) in v.graph().edges().iter().enumerate() {
        closing[a.max(b)].push(e);
    }
    let twin_floor = (0..v.node_count()).map(|i| (0..i).rev().find(|&t| twins(v, t, i))).collect();
    let mut search = Search {
        v,
        s,
        limits,
        goal,
        cache: HashMap::new(),
        closing,
        twin_floor,
        placements_seen: 0,
        placement: vec![0; v.node_count()],
        used: vec![0; s.node_count()],
        load: vec![0; s.graph().edge_count()],
        choice: vec![0; v.edge_count()],
        best: None,
    };
    search.place(0, 0)?;
    let Some((_, placement, choice)) = search.best.take() else {
        return Ok(None);
    };
    let mut routing = Vec::with_capacity(choice.len());
    for (&(a, b), &k) in v.graph().edges().iter().zip(&choice) {
        routing.push(search.options(placement[a], placement[b])?[k].path.clone());
    }
    Ok(Some(Mapping { placement, routing }))
}

/// Minimum-cost feasible mapping by exhaustive search. Among optimal
/// mappings the first one in search order wins: hosts and routes are tried
/// in index order, virtual node by virtual node.
pub fn brute_force_solve(v: &VirtualNetwork, s: &SubstrateNetwork, limits: &OracleLimits) -> Result<SolveOutcome> {
    match run(v, s, limits, Goal::MinCost)? {
        Some(mapping) => {
            let cost = mapping_cost(v, s, &mapping)?;
            Ok(SolveOutcome::feasible(SOLVER_ID, mapping, cost))
        }
        None => Ok(SolveOutcome::infeasible(SOLVER_ID)),
    }
}

/// Whether any feasible mapping exists, costs ignored.
pub fn brute_force_decide_existence(v: &VirtualNetwork, s: &SubstrateNetwork, limits: &OracleLimits) -> Result<bool> {
    Ok(run(v, s, limits, Goal::AnyFeasible)?.is_some())
}

/// First feasible mapping in enumeration order, costs ignored.
pub fn brute_force_find_feasible(v: &VirtualNetwork, s: &SubstrateNetwork, limits: &OracleLimits) -> Result<SolveOutcome> {
    match run(v, s, limits, Goal::AnyFeasible)? {
        Some(mapping) => {
            let cost = mapping_cost(v, s, &mapping)?;
            Ok(SolveOutcome::feasible(SOLVER_ID, mapping, cost))
        }
        None => Ok(SolveOutcome::infeasible(SOLVER_ID)),
    }
}
