//! Networks, mappings, feasibility, cost and topology classification.

use std::fmt;

use crate::error::{Result, UnivneError};

/// Dense 0-based node index within its owning graph.
pub type NodeId = usize;

/// Simple connected undirected graph. Edges keep their construction order and
/// are stored with the smaller endpoint first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    adj: Vec<Vec<(NodeId, usize)>>,
}

impl UndirectedGraph {
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        if node_count == 0 {
            return Err(UnivneError::InvalidGraph("graph has no nodes".into()));
        }
        let mut adj: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); node_count];
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(UnivneError::InvalidGraph(format!(
                    "edge ({a}, {b}) references a node outside 0..{node_count}"
                )));
            }
            if a == b {
                return Err(UnivneError::InvalidGraph(format!("self-loop on node {a}")));
            }
            let (lo, hi) = (a.min(b), a.max(b));
            if adj[lo].iter().any(|&(x, _)| x == hi) {
                return Err(UnivneError::InvalidGraph(format!("duplicate edge ({lo}, {hi})")));
            }
            let id = list.len();
            list.push((lo, hi));
            adj[lo].push((hi, id));
            adj[hi].push((lo, id));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        let g = UndirectedGraph { node_count, edges: list, adj };
        if !g.is_connected() {
            return Err(UnivneError::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path graph")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(UnivneError::InvalidGraph("a cycle needs at least 3 nodes".into()));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star graph")
    }

    /// Wheel with outer cycle 0..outer and hub `outer`.
    pub fn wheel(outer: usize) -> Result<Self> {
        if outer < 3 {
            return Err(UnivneError::InvalidGraph("a wheel needs an outer cycle of at least 3 nodes".into()));
        }
        let rim = (0..outer).map(|i| (i, (i + 1) % outer));
        let spokes = (0..outer).map(|i| (i, outer));
        Self::new(outer + 1, rim.chain(spokes))
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Self::new(n, edges).expect("complete graph")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (NodeId, NodeId) {
        self.edges[id]
    }

    /// Neighbors of `u` with the connecting edge id, sorted by neighbor.
    pub fn adjacency(&self, u: NodeId) -> &[(NodeId, usize)] {
        &self.adj[u]
    }

    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[u].iter().map(|&(v, _)| v)
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u].len()
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<usize> {
        let row = self.adj.get(a)?;
        row.binary_search_by_key(&b, |&(x, _)| x).ok().map(|i| row[i].1)
    }

    /// Copy of the graph where node `i` is renamed `perm[i]`.
    pub fn relabeled(&self, perm: &[NodeId]) -> Result<Self> {
        Self::new(self.node_count, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.node_count
    }
}

/// Substrate graph with integer capacities and costs on nodes and edges.
///
/// Node capacities may be zero (transit-only nodes); edge capacities are
/// at least one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstrateNetwork {
    graph: UndirectedGraph,
    node_capacity: Vec<u64>,
    node_cost: Vec<u64>,
    edge_capacity: Vec<u64>,
    edge_cost: Vec<u64>,
}

impl SubstrateNetwork {
    pub fn new(
        graph: UndirectedGraph,
        node_capacity: Vec<u64>,
        node_cost: Vec<u64>,
        edge_capacity: Vec<u64>,
        edge_cost: Vec<u64>,
    ) -> Result<Self> {
        let n = graph.node_count();
        let m = graph.edge_count();
        if node_capacity.len() != n || node_cost.len() != n {
            return Err(UnivneError::InvalidNetwork(format!(
                "expected {n} node capacities and costs, got {} and {}",
                node_capacity.len(),
                node_cost.len()
            )));
        }
        if edge_capacity.len() != m || edge_cost.len() != m {
            return Err(UnivneError::InvalidNetwork(format!(
                "expected {m} edge capacities and costs, got {} and {}",
                edge_capacity.len(),
                edge_cost.len()
            )));
        }
        if let Some(e) = edge_capacity.iter().position(|&c| c == 0) {
            let (a, b) = graph.edge(e);
            return Err(UnivneError::InvalidNetwork(format!("edge ({a}, {b}) has zero capacity")));
        }
        Ok(SubstrateNetwork { graph, node_capacity, node_cost, edge_capacity, edge_cost })
    }

    pub fn uniform(graph: UndirectedGraph, node_capacity: u64, node_cost: u64, edge_capacity: u64, edge_cost: u64) -> Result<Self> {
        let n = graph.node_count();
        let m = graph.edge_count();
        Self::new(graph, vec![node_capacity; n], vec![node_cost; n], vec![edge_capacity; m], vec![edge_cost; m])
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn node_capacity(&self, u: NodeId) -> u64 {
        self.node_capacity[u]
    }

    pub fn node_cost(&self, u: NodeId) -> u64 {
        self.node_cost[u]
    }

    pub fn edge_capacity(&self, e: usize) -> u64 {
        self.edge_capacity[e]
    }

    pub fn edge_cost(&self, e: usize) -> u64 {
        self.edge_cost[e]
    }

    pub fn node_capacities(&self) -> &[u64] {
        &self.node_capacity
    }

    pub fn node_costs(&self) -> &[u64] {
        &self.node_cost
    }

    pub fn edge_capacities(&self) -> &[u64] {
        &self.edge_capacity
    }

    pub fn edge_costs(&self) -> &[u64] {
        &self.edge_cost
    }

    pub fn total_node_capacity(&self) -> u64 {
        self.node_capacity.iter().sum()
    }

    /// Same network with every cost multiplied by `factor`.
    pub fn with_scaled_costs(&self, factor: u64) -> Result<Self> {
        let scale = |v: &[u64]| -> Result<Vec<u64>> {
            v.iter().map(|&c| c.checked_mul(factor).ok_or(UnivneError::Overflow)).collect()
        };
        Ok(SubstrateNetwork {
            graph: self.graph.clone(),
            node_capacity: self.node_capacity.clone(),
            node_cost: scale(&self.node_cost)?,
            edge_capacity: self.edge_capacity.clone(),
            edge_cost: scale(&self.edge_cost)?,
        })
    }

    /// Same network with the capacity of one node or edge replaced.
    pub fn with_node_capacity(&self, u: NodeId, capacity: u64) -> Self {
        let mut s = self.clone();
        s.node_capacity[u] = capacity;
        s
    }

    pub fn with_edge_capacity(&self, e: usize, capacity: u64) -> Result<Self> {
        let mut s = self.clone();
        s.edge_capacity[e] = capacity;
        Self::new(s.graph, s.node_capacity, s.node_cost, s.edge_capacity, s.edge_cost)
    }
}

/// Virtual graph; every node and edge has unit demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualNetwork {
    graph: UndirectedGraph,
}

impl VirtualNetwork {
    pub fn new(graph: UndirectedGraph) -> Self {
        VirtualNetwork { graph }
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}

/// Loop-free substrate walk, stored as its node sequence. A single node is
/// the empty path between co-located endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubstratePath {
    nodes: Vec<NodeId>,
}

impl SubstratePath {
    pub fn empty_at(u: NodeId) -> Self {
        SubstratePath { nodes: vec![u] }
    }

    pub fn from_nodes(nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(UnivneError::MalformedMapping("path has no nodes".into()));
        }
        Ok(SubstratePath { nodes })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn start(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeId {
        *self.nodes.last().expect("non-empty path")
    }

    pub fn hop_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn reversed(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        SubstratePath { nodes }
    }

    /// Edge ids along the path; fails on a non-adjacent step or a repeated node.
    pub fn edge_ids(&self, g: &UndirectedGraph) -> Result<Vec<usize>> {
        let mut seen = vec![false; g.node_count()];
        for &u in &self.nodes {
            if u >= g.node_count() {
                return Err(UnivneError::MalformedMapping(format!("path node {u} out of range")));
            }
            if std::mem::replace(&mut seen[u], true) {
                return Err(UnivneError::MalformedMapping(format!("path {:?} repeats node {u}", self.nodes)));
            }
        }
        self.nodes
            .windows(2)
            .map(|w| {
                g.edge_between(w[0], w[1]).ok_or_else(|| {
                    UnivneError::MalformedMapping(format!("path steps over missing edge ({}, {})", w[0], w[1]))
                })
            })
            .collect()
    }
}

/// Node placement plus one routing path per virtual edge (indexed like the
/// virtual graph's edge list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    pub placement: Vec<NodeId>,
    pub routing: Vec<SubstratePath>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Usage {
    pub load: u64,
    pub capacity: u64,
}

impl Usage {
    pub fn violated(&self) -> bool {
        self.load > self.capacity
    }
}

/// Per-node and per-edge load against capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub nodes: Vec<Usage>,
    pub edges: Vec<Usage>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.nodes.iter().chain(&self.edges).all(|u| !u.violated())
    }

    pub fn node_violations(&self) -> Vec<NodeId> {
        self.nodes.iter().enumerate().filter(|(_, u)| u.violated()).map(|(i, _)| i).collect()
    }

    pub fn edge_violations(&self) -> Vec<usize> {
        self.edges.iter().enumerate().filter(|(_, u)| u.violated()).map(|(i, _)| i).collect()
    }
}

fn routed_edges(v: &VirtualNetwork, s: &SubstrateNetwork, m: &Mapping) -> Result<Vec<Vec<usize>>> {
    let (nr, ns) = (v.node_count(), s.node_count());
    if m.placement.len() != nr {
        return Err(UnivneError::MalformedMapping(format!(
            "placement covers {} nodes, virtual graph has {nr}",
            m.placement.len()
        )));
    }
    if let Some(&u) = m.placement.iter().find(|&&u| u >= ns) {
        return Err(UnivneError::MalformedMapping(format!("placement uses substrate node {u} outside 0..{ns}")));
    }
    if m.routing.len() != v.edge_count() {
        return Err(UnivneError::MalformedMapping(format!(
            "routing covers {} edges, virtual graph has {}",
            m.routing.len(),
            v.edge_count()
        )));
    }
    v.graph()
        .edges()
        .iter()
        .zip(&m.routing)
        .map(|(&(a, b), path)| {
            let (pa, pb) = (m.placement[a], m.placement[b]);
            let ends = (path.start(), path.end());
            if ends != (pa, pb) && ends != (pb, pa) {
                return Err(UnivneError::MalformedMapping(format!(
                    "route of virtual edge ({a}, {b}) runs {} -> {} but endpoints sit on {pa} and {pb}",
                    ends.0, ends.1
                )));
            }
            path.edge_ids(s.graph())
        })
        .collect()
}

/// Loads induced by `m` against substrate capacities.
pub fn check_feasible(v: &VirtualNetwork, s: &SubstrateNetwork, m: &Mapping) -> Result<FeasibilityReport> {
    let routes = routed_edges(v, s, m)?;
    let mut node_load = vec![0u64; s.node_count()];
    for &u in &m.placement {
        node_load[u] += 1;
    }
    let mut edge_load = vec![0u64; s.graph().edge_count()];
    for route in &routes {
        for &e in route {
            edge_load[e] += 1;
        }
    }
    Ok(FeasibilityReport {
        nodes: node_load.iter().zip(s.node_capacities()).map(|(&load, &capacity)| Usage { load, capacity }).collect(),
        edges: edge_load.iter().zip(s.edge_capacities()).map(|(&load, &capacity)| Usage { load, capacity }).collect(),
    })
}

/// Placement cost plus routing cost of `m`.
pub fn mapping_cost(v: &VirtualNetwork, s: &SubstrateNetwork, m: &Mapping) -> Result<u64> {
    let routes = routed_edges(v, s, m)?;
    let mut total: u64 = 0;
    let add = |total: u64, c: u64| total.checked_add(c).ok_or(UnivneError::Overflow);
    for &u in &m.placement {
        total = add(total, s.node_cost(u))?;
    }
    for route in &routes {
        for &e in route {
            total = add(total, s.edge_cost(e))?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Topology {
    Path,
    Cycle,
    Star,
    Wheel,
    Tree,
    Clique,
    General,
}

impl Topology {
    pub const ALL: [Topology; 7] = [
        Topology::Path,
        Topology::Cycle,
        Topology::Star,
        Topology::Wheel,
        Topology::Tree,
        Topology::Clique,
        Topology::General,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Path => "Path",
            Topology::Cycle => "Cycle",
            Topology::Star => "Star",
            Topology::Wheel => "Wheel",
            Topology::Tree => "Tree",
            Topology::Clique => "Clique",
            Topology::General => "General",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Set of topology classes a graph belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TopologySet {
    bits: u8,
}

impl TopologySet {
    /// Builds a set from named classes; `General` is kept only when nothing else is present.
    pub fn from_flags(flags: &[Topology]) -> Self {
        let bits = flags.iter().filter(|&&t| t != Topology::General).fold(0, |acc, t| acc | t.bit());
        if bits == 0 {
            TopologySet { bits: Topology::General.bit() }
        } else {
            TopologySet { bits }
        }
    }

    pub fn contains(&self, t: Topology) -> bool {
        self.bits & t.bit() != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Topology> + '_ {
        Topology::ALL.into_iter().filter(|&t| self.contains(t))
    }
}

impl fmt::Display for TopologySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.iter().map(Topology::name).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

/// Topology classes together with the positional numbering the solvers use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub set: TopologySet,
    /// Nodes in path order, starting from the lower-index extremity.
    pub path_order: Option<Vec<NodeId>>,
    /// Nodes in cycle order, starting at node 0 towards its smaller neighbor.
    pub cycle_order: Option<Vec<NodeId>>,
    /// Outer cycle order followed by the hub.
    pub wheel_order: Option<Vec<NodeId>>,
    pub star_center: Option<NodeId>,
}

fn walk_cycle(g: &UndirectedGraph, start: NodeId, allowed: impl Fn(NodeId) -> bool) -> Vec<NodeId> {
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = g.neighbors(cur).find(|&x| x != prev && allowed(x));
        match next {
            Some(x) if x != start => {
                order.push(x);
                prev = cur;
                cur = x;
            }
            _ => break,
        }
    }
    order
}

pub fn classify(g: &UndirectedGraph) -> Classification {
    let n = g.node_count();
    let m = g.edge_count();
    let deg: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
    let mut flags = Vec::new();

    let tree = m + 1 == n;
    if tree {
        flags.push(Topology::Tree);
    }

    let mut path_order = None;
    if n == 1 || (tree && deg.iter().all(|&d| d <= 2)) {
        flags.push(Topology::Path);
        let start = (0..n).find(|&u| deg[u] <= 1).unwrap_or(0);
        path_order = Some(walk_cycle(g, start, |_| true));
    }

    let mut cycle_order = None;
    if n >= 3 && deg.iter().all(|&d| d == 2) {
        flags.push(Topology::Cycle);
        cycle_order = Some(walk_cycle(g, 0, |_| true));
    }

    let mut star_center = None;
    if n >= 3 && tree {
        if let Some(c) = (0..n).find(|&u| deg[u] == n - 1) {
            flags.push(Topology::Star);
            star_center = Some(c);
        }
    }

    let mut wheel_order = None;
    if n >= 4 {
        for hub in (0..n).filter(|&u| deg[u] == n - 1) {
            if (0..n).any(|u| u != hub && deg[u] != 3) {
                continue;
            }
            let start = if hub == 0 { 1 } else { 0 };
            let outer = walk_cycle(g, start, |x| x != hub);
            if outer.len() == n - 1 {
                let mut order = outer;
                order.push(hub);
                flags.push(Topology::Wheel);
                wheel_order = Some(order);
                break;
            }
        }
    }

    if n >= 2 && m == n * (n - 1) / 2 {
        flags.push(Topology::Clique);
    }

    Classification { set: TopologySet::from_flags(&flags), path_order, cycle_order, wheel_order, star_center }
}

pub fn classify_topology(g: &UndirectedGraph) -> TopologySet {
    classify(g).set
}

/// Rotates a cycle mapping: the virtual node at canonical position `i` takes
/// the placement and routes of position `i - offset`.
pub fn shift_virtual_indices(v: &VirtualNetwork, m: &Mapping, offset: i64) -> Result<Mapping> {
    let order = classify(v.graph()).cycle_order.ok_or(UnivneError::TopologyMismatch {
        solver: "shift_virtual_indices",
        expected: "a virtual cycle",
    })?;
    let n = order.len();
    let g = v.graph();
    if m.placement.len() != n || m.routing.len() != n {
        return Err(UnivneError::MalformedMapping("mapping does not cover the virtual cycle".into()));
    }
    let shift = offset.rem_euclid(n as i64) as usize;
    let mut placement = vec![0; n];
    for i in 0..n {
        placement[order[(i + shift) % n]] = m.placement[order[i]];
    }
    let mut routing = vec![SubstratePath::empty_at(0); n];
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        let old = &m.routing[g.edge_between(a, b).expect("cycle edge")];
        let (na, nb) = (order[(i + shift) % n], order[(i + 1 + shift) % n]);
        let id = g.edge_between(na, nb).expect("cycle edge");
        routing[id] = if old.start() == m.placement[a] { old.clone() } else { old.reversed() };
    }
    Ok(Mapping { placement, routing })
}

/// Result of a solver call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Infeasible,
    Feasible { mapping: Mapping, cost: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub solver: &'static str,
}

impl SolveOutcome {
    pub fn infeasible(solver: &'static str) -> Self {
        SolveOutcome { verdict: Verdict::Infeasible, solver }
    }

    pub fn feasible(solver: &'static str, mapping: Mapping, cost: u64) -> Self {
        SolveOutcome { verdict: Verdict::Feasible { mapping, cost }, solver }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Verdict::Feasible { .. })
    }

    pub fn cost(&self) -> Option<u64> {
        match &self.verdict {
            Verdict::Feasible { cost, .. } => Some(*cost),
            Verdict::Infeasible => None,
        }
    }

    pub fn mapping(&self) -> Option<&Mapping> {
        match &self.verdict {
            Verdict::Feasible { mapping, .. } => Some(mapping),
            Verdict::Infeasible => None,
        }
    }

    /// Re-checks a feasible outcome: the mapping must respect capacities and
    /// the reported cost must match.
    pub fn verify(&self, v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<()> {
        if let Verdict::Feasible { mapping, cost } = &self.verdict {
            let report = check_feasible(v, s, mapping)?;
            if !report.is_feasible() {
                return Err(UnivneError::Internal(format!("{} returned a mapping that violates capacities", self.solver)));
            }
            let actual = mapping_cost(v, s, mapping)?;
            if actual != *cost {
                return Err(UnivneError::Internal(format!(
                    "{} reported cost {cost} but the mapping costs {actual}",
                    self.solver
                )));
            }
        }
        Ok(())
    }
}

/// Builds a mapping from a placement and per-edge routes given as node walks.
/// Existence question or minimum-cost question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Existence,
    Cost,
}

impl Variant {
    /// One-letter tag used in problem cell names.
    pub fn letter(self) -> char {
        match self {
            Variant::Existence => 'E',
            Variant::Cost => 'C',
        }
    }
}

pub(crate) fn mapping_from_routes(v: &VirtualNetwork, placement: Vec<NodeId>, mut route: impl FnMut(NodeId, NodeId) -> Vec<NodeId>) -> Mapping {
    let routing = v
        .graph()
        .edges()
        .iter()
        .map(|&(a, b)| SubstratePath { nodes: route(placement[a], placement[b]) })
        .collect();
    Mapping { placement, routing }
}
