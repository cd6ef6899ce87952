//! Min-cost integer flow by successive shortest paths, and the star solver.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Result, UnivneError};
use crate::netgraph::{classify, mapping_cost, Mapping, NodeId, SolveOutcome, SubstrateNetwork, SubstratePath, VirtualNetwork};

pub const STAR_SOLVER_ID: &str = "star-flow";

/// Arc of a flow network. An undirected arc carries flow either way and both
/// directions draw on the same capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
    pub cost: u64,
    pub directed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    pub node_count: usize,
    pub arcs: Vec<FlowArc>,
    pub source: usize,
    pub sink: usize,
    pub demand: u64,
    /// Reject solutions costing more than this.
    pub budget: Option<u64>,
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize, demand: u64) -> Self {
        FlowNetwork { node_count, arcs: Vec::new(), source, sink, demand, budget: None }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u64, cost: u64) {
        self.arcs.push(FlowArc { from, to, capacity, cost, directed: true });
    }

    pub fn add_edge(&mut self, a: usize, b: usize, capacity: u64, cost: u64) {
        self.arcs.push(FlowArc { from: a, to: b, capacity, cost, directed: false });
    }
}

/// `units` parallel units of flow along the node sequence `nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    pub nodes: Vec<usize>,
    pub units: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowAssignment {
    /// Paths from source to sink, ordered by first-hop node.
    pub paths: Vec<FlowPath>,
    pub cost: u64,
}

impl FlowAssignment {
    /// One entry per unit, in path order.
    pub fn unit_paths(&self) -> impl Iterator<Item = &[usize]> {
        self.paths.iter().flat_map(|p| std::iter::repeat_n(p.nodes.as_slice(), p.units as usize))
    }

    /// Load on every arc of `net`, counted in either direction.
    pub fn arc_loads(&self, net: &FlowNetwork) -> Vec<u64> {
        let mut load = vec![0u64; net.arcs.len()];
        for p in &self.paths {
            for w in p.nodes.windows(2) {
                if let Some(i) = cheapest_arc(net, w[0], w[1]) {
                    load[i] += p.units;
                }
            }
        }
        load
    }
}

fn cheapest_arc(net: &FlowNetwork, a: usize, b: usize) -> Option<usize> {
    net.arcs
        .iter()
        .enumerate()
        .filter(|(_, arc)| (arc.from == a && arc.to == b) || (!arc.directed && arc.from == b && arc.to == a))
        .min_by_key(|(i, arc)| (arc.cost, *i))
        .map(|(i, _)| i)
}

struct Residual {
    to: Vec<usize>,
    cap: Vec<u64>,
    cost: Vec<i64>,
    head: Vec<Vec<usize>>,
}

impl Residual {
    fn push(&mut self, a: usize, b: usize, cap: u64, cost: i64) {
        for (x, y, c, w) in [(a, b, cap, cost), (b, a, 0, -cost)] {
            self.head[x].push(self.to.len());
            self.to.push(y);
            self.cap.push(c);
            self.cost.push(w);
        }
    }
}

/// Minimum-cost integral flow of `net.demand` units, decomposed into paths.
/// `None` when the maximum flow is short of the demand or the budget is exceeded.
pub fn min_cost_integer_flow(net: &FlowNetwork) -> Option<FlowAssignment> {
    let n = net.node_count;
    let mut r = Residual { to: Vec::new(), cap: Vec::new(), cost: Vec::new(), head: vec![Vec::new(); n] };
    for arc in &net.arcs {
        let cost = i64::try_from(arc.cost).ok()?;
        r.push(arc.from, arc.to, arc.capacity, cost);
        if !arc.directed {
            r.push(arc.to, arc.from, arc.capacity, cost);
        }
    }
    let mut potential = vec![0i64; n];
    let mut sent = 0u64;
    while sent < net.demand {
        let mut dist = vec![i64::MAX; n];
        let mut via = vec![usize::MAX; n];
        dist[net.source] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, net.source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &e in &r.head[u] {
                if r.cap[e] == 0 {
                    continue;
                }
                let v = r.to[e];
                let nd = d + r.cost[e] + potential[u] - potential[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    via[v] = e;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        if dist[net.sink] == i64::MAX {
            return None;
        }
        for u in 0..n {
            if dist[u] != i64::MAX {
                potential[u] += dist[u];
            }
        }
        let mut push = net.demand - sent;
        let mut v = net.sink;
        while v != net.source {
            let e = via[v];
            push = push.min(r.cap[e]);
            v = r.to[e ^ 1];
        }
        let mut v = net.sink;
        while v != net.source {
            let e = via[v];
            r.cap[e] -= push;
            r.cap[e ^ 1] += push;
            v = r.to[e ^ 1];
        }
        sent += push;
    }

    // net flow on every residual forward arc
    let mut flow: Vec<Vec<(usize, u64, i64)>> = vec![Vec::new(); n];
    for u in 0..n {
        for &e in &r.head[u] {
            if e % 2 == 0 && r.cap[e ^ 1] > 0 {
                flow[u].push((r.to[e], r.cap[e ^ 1], r.cost[e]));
            }
        }
    }
    // cancel opposite flows between the same pair of nodes
    for u in 0..n {
        for i in 0..flow[u].len() {
            let (v, f, _) = flow[u][i];
            if f == 0 || v == u {
                continue;
            }
            for j in 0..flow[v].len() {
                if flow[v][j].0 == u && flow[v][j].1 > 0 {
                    let m = flow[u][i].1.min(flow[v][j].1);
                    flow[u][i].1 -= m;
                    flow[v][j].1 -= m;
                }
            }
        }
    }
    for row in &mut flow {
        row.retain(|&(_, f, _)| f > 0);
        row.sort_by_key(|&(v, _, c)| (v, c));
    }

    let mut units: Vec<(Vec<usize>, i64)> = Vec::new();
    while (units.len() as u64) < net.demand {
        let mut walk = vec![net.source];
        let mut taken: Vec<usize> = Vec::new();
        let mut on_walk = vec![usize::MAX; n];
        on_walk[net.source] = 0;
        loop {
            let u = *walk.last().expect("walk");
            if u == net.sink {
                break;
            }
            let j = flow[u].iter().position(|&(_, f, _)| f > 0)?;
            let v = flow[u][j].0;
            if on_walk[v] != usize::MAX {
                // drop a cycle of flow and retry from where it started
                let start = on_walk[v];
                flow[u][j].1 -= 1;
                for k in start..taken.len() {
                    let (a, idx) = (walk[k], taken[k]);
                    flow[a][idx].1 -= 1;
                }
                for &x in &walk[start + 1..] {
                    on_walk[x] = usize::MAX;
                }
                walk.truncate(start + 1);
                taken.truncate(start);
                continue;
            }
            taken.push(j);
            on_walk[v] = walk.len();
            walk.push(v);
        }
        let mut cost = 0i64;
        for (k, &j) in taken.iter().enumerate() {
            let u = walk[k];
            flow[u][j].1 -= 1;
            cost += flow[u][j].2;
        }
        units.push((walk, cost));
    }

    let total: i64 = units.iter().map(|(_, c)| c).sum();
    let cost = u64::try_from(total).ok()?;
    if net.budget.is_some_and(|b| cost > b) {
        return None;
    }
    let mut paths: Vec<FlowPath> = Vec::new();
    for (nodes, _) in units {
        match paths.last_mut() {
            Some(p) if p.nodes == nodes => p.units += 1,
            _ => paths.push(FlowPath { nodes, units: 1 }),
        }
    }
    Some(FlowAssignment { paths, cost })
}

/// Center and leaves of a star-shaped graph (a center adjacent to every other
/// node, all others of degree one). A single node is a star without leaves.
pub(crate) fn star_parts(v: &VirtualNetwork) -> Option<(NodeId, Vec<NodeId>)> {
    let g = v.graph();
    let n = g.node_count();
    if n == 1 {
        return Some((0, Vec::new()));
    }
    if n == 2 {
        return Some((0, vec![1]));
    }
    let center = classify(g).star_center?;
    Some((center, (0..n).filter(|&u| u != center).collect()))
}

/// Optimal embedding of a virtual star on any substrate: one min-cost flow
/// per candidate center host.
pub fn solve_star_on_general(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    let (center, leaves) = star_parts(v).ok_or(UnivneError::TopologyMismatch {
        solver: STAR_SOLVER_ID,
        expected: "a virtual star",
    })?;
    let ns = s.node_count();
    let g = s.graph();
    let mut best: Option<(u64, NodeId, FlowAssignment)> = None;
    for u in 0..ns {
        if s.node_capacity(u) == 0 {
            continue;
        }
        let source = ns;
        let mut net = FlowNetwork::new(ns + 1, source, u, leaves.len() as u64);
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            net.add_edge(a, b, s.edge_capacity(e), s.edge_cost(e));
        }
        for x in 0..ns {
            let cap = s.node_capacity(x) - u64::from(x == u);
            if cap > 0 {
                net.add_arc(source, x, cap, s.node_cost(x));
            }
        }
        let Some(flow) = min_cost_integer_flow(&net) else {
            continue;
        };
        let total = flow.cost.checked_add(s.node_cost(u)).ok_or(UnivneError::Overflow)?;
        if best.as_ref().is_none_or(|(b, _, _)| total < *b) {
            best = Some((total, u, flow));
        }
    }
    let Some((total, u, flow)) = best else {
        return Ok(SolveOutcome::infeasible(STAR_SOLVER_ID));
    };
    let mut placement = vec![u; v.node_count()];
    let mut route_of = vec![SubstratePath::empty_at(u); v.node_count()];
    for (&leaf, unit) in leaves.iter().zip(flow.unit_paths()) {
        placement[leaf] = unit[1];
        route_of[leaf] = SubstratePath::from_nodes(unit[1..].to_vec())?;
    }
    placement[center] = u;
    let routing = v
        .graph()
        .edges()
        .iter()
        .map(|&(a, b)| {
            let leaf = if a == center { b } else { a };
            let path = &route_of[leaf];
            if path.start() == placement[a] {
                path.clone()
            } else {
                path.reversed()
            }
        })
        .collect();
    let mapping = Mapping { placement, routing };
    let cost = mapping_cost(v, s, &mapping)?;
    if cost != total {
        return Err(UnivneError::Internal(format!("star flow cost {total} differs from mapping cost {cost}")));
    }
    Ok(SolveOutcome::feasible(STAR_SOLVER_ID, mapping, cost))
}
