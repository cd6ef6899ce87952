//! Solvers for substrate cycles and the fill-along-a-Hamiltonian-cycle
//! construction.
//!
//! Ring positions follow the canonical cycle order of the substrate:
//! position `i` is joined to position `i + 1` by ring edge `i`, and clockwise
//! means increasing position.

use crate::error::{Result, UnivneError};
use crate::flow::{min_cost_integer_flow, FlowNetwork};
use crate::netgraph::{classify, mapping_cost, Mapping, NodeId, SolveOutcome, SubstrateNetwork, SubstratePath, VirtualNetwork};
use crate::tree_embed::cheapest_single;

pub const HAMILTONIAN_SOLVER_ID: &str = "hamiltonian-fill";
pub const PATH_SOLVER_ID: &str = "cycle-path-greedy";
pub const CYCLE_SOLVER_ID: &str = "cycle-cycle-greedy";
pub const WHEEL_SOLVER_ID: &str = "cycle-wheel-flow";
pub const CLIQUE_SOLVER_ID: &str = "cycle-clique-dp";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Clockwise,
    Counterclockwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArcSpec {
    pub start: NodeId,
    pub end: NodeId,
    pub direction: Direction,
}

struct Ring {
    nodes: Vec<NodeId>,
    pos: Vec<usize>,
    /// Ring edge `i` joins positions `i` and `i + 1`.
    edges: Vec<usize>,
}

impl Ring {
    fn new(s: &SubstrateNetwork, solver: &'static str) -> Result<Self> {
        let g = s.graph();
        let nodes = classify(g).cycle_order.ok_or(UnivneError::TopologyMismatch { solver, expected: "a substrate cycle" })?;
        let m = nodes.len();
        let mut pos = vec![0; m];
        for (i, &u) in nodes.iter().enumerate() {
            pos[u] = i;
        }
        let edges = (0..m).map(|i| g.edge_between(nodes[i], nodes[(i + 1) % m]).expect("ring edge")).collect();
        Ok(Ring { nodes, pos, edges })
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Ring edge indices walked from position `p` to position `q`.
    fn edge_walk(&self, p: usize, q: usize, dir: Direction) -> Vec<usize> {
        let m = self.len();
        match dir {
            Direction::Clockwise => (0..(q + m - p) % m).map(|j| (p + j) % m).collect(),
            Direction::Counterclockwise => (0..(p + m - q) % m).map(|j| (p + m - 1 - j) % m).collect(),
        }
    }

    /// Substrate nodes walked from position `p` to position `q`.
    fn node_walk(&self, p: usize, q: usize, dir: Direction) -> Vec<NodeId> {
        let m = self.len();
        let steps = match dir {
            Direction::Clockwise => (q + m - p) % m,
            Direction::Counterclockwise => (p + m - q) % m,
        };
        (0..=steps)
            .map(|j| match dir {
                Direction::Clockwise => self.nodes[(p + j) % m],
                Direction::Counterclockwise => self.nodes[(p + m - j) % m],
            })
            .collect()
    }

    /// Positions of the clockwise arc from `p` to `q`, both included.
    fn arc(&self, p: usize, q: usize) -> Vec<usize> {
        let m = self.len();
        (0..=(q + m - p) % m).map(|j| (p + j) % m).collect()
    }
}

fn path_of(nodes: Vec<NodeId>) -> SubstratePath {
    SubstratePath::from_nodes(nodes).expect("walks are non-empty")
}

/// The clockwise or counterclockwise walk between two substrate nodes.
pub fn directed_arc(s: &SubstrateNetwork, spec: ArcSpec) -> Result<SubstratePath> {
    let ring = Ring::new(s, "directed-arc")?;
    if spec.start >= ring.len() || spec.end >= ring.len() {
        return Err(UnivneError::InvalidNetwork("arc endpoint out of range".into()));
    }
    Ok(path_of(ring.node_walk(ring.pos[spec.start], ring.pos[spec.end], spec.direction)))
}

/// Routing for every virtual edge, given routes between positions of a
/// virtual ordering. `route(i, j)` gets `i < j`.
fn routes_by_index(v: &VirtualNetwork, order: &[NodeId], mut route: impl FnMut(usize, usize) -> Vec<NodeId>) -> Vec<SubstratePath> {
    let mut index = vec![0; v.node_count()];
    for (i, &x) in order.iter().enumerate() {
        index[x] = i;
    }
    v.graph()
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (i, j) = (index[a].min(index[b]), index[a].max(index[b]));
            path_of(route(i, j))
        })
        .collect()
}

fn finish(v: &VirtualNetwork, s: &SubstrateNetwork, mapping: Mapping, expected: Option<u128>, solver: &'static str) -> Result<SolveOutcome> {
    let cost = mapping_cost(v, s, &mapping)?;
    if let Some(e) = expected {
        if e != cost as u128 {
            return Err(UnivneError::Internal(format!("{solver}: optimum {e} differs from witness cost {cost}")));
        }
    }
    Ok(SolveOutcome::feasible(solver, mapping, cost))
}

/// Feasible embedding of a virtual path or cycle along a Hamiltonian cycle
/// `ham` of the substrate: hosts are filled to capacity in cycle order.
pub fn embed_via_hamiltonian(v: &VirtualNetwork, s: &SubstrateNetwork, ham: &[NodeId]) -> Result<SolveOutcome> {
    let ns = s.node_count();
    let g = s.graph();
    let mut seen = vec![false; ns];
    let is_perm = ham.len() == ns && ham.iter().all(|&u| u < ns && !std::mem::replace(&mut seen[u], true));
    let closed = ns == 1 || (ns >= 3 && (0..ns).all(|i| g.edge_between(ham[i], ham[(i + 1) % ns]).is_some()));
    if !is_perm || !closed {
        return Err(UnivneError::InvalidNetwork("the given order is not a Hamiltonian cycle of the substrate".into()));
    }
    let cls = classify(v.graph());
    let order = match cls.cycle_order.or(cls.path_order) {
        Some(o) => o,
        None => return Err(UnivneError::TopologyMismatch { solver: HAMILTONIAN_SOLVER_ID, expected: "a virtual path or cycle" }),
    };
    let n = order.len();
    if s.total_node_capacity() < n as u64 {
        return Ok(SolveOutcome::infeasible(HAMILTONIAN_SOLVER_ID));
    }
    // ham index of the host of each ordered virtual node
    let mut slot = Vec::with_capacity(n);
    for (i, &u) in ham.iter().enumerate() {
        let free = (s.node_capacity(u) as usize).min(n - slot.len());
        slot.extend(std::iter::repeat_n(i, free));
    }
    let mut placement = vec![0; n];
    for (j, &x) in order.iter().enumerate() {
        placement[x] = ham[slot[j]];
    }
    let routing = routes_by_index(v, &order, |i, j| {
        if j == i + 1 {
            ham[slot[i]..=slot[j]].to_vec()
        } else {
            // closing edge of a virtual cycle, forward around the rest of ham
            let (last, first) = (slot[n - 1], slot[0]);
            if last == first {
                vec![ham[first]]
            } else {
                let mut w: Vec<NodeId> = ham[last..].to_vec();
                w.extend_from_slice(&ham[..=first]);
                w
            }
        }
    });
    finish(v, s, Mapping { placement, routing }, None, HAMILTONIAN_SOLVER_ID)
}

/// Virtual node counts per arc position and their total node cost, filling
/// the clockwise arc from `sp` to `tp` with `n` nodes: one at each end and
/// the rest on the cheapest free slots.
fn fill_arc(ring: &Ring, s: &SubstrateNetwork, sp: usize, tp: usize, n: usize) -> Option<(Vec<usize>, Vec<usize>, u128)> {
    let arc = ring.arc(sp, tp);
    let cap = |p: usize| s.node_capacity(ring.nodes[p]) as usize;
    let cost = |p: usize| s.node_cost(ring.nodes[p]) as u128;
    let mut count = vec![0usize; arc.len()];
    if arc.len() == 1 {
        if cap(sp) < n {
            return None;
        }
        count[0] = n;
    } else {
        if n < 2 || cap(sp) < 1 || cap(tp) < 1 {
            return None;
        }
        count[0] = 1;
        count[arc.len() - 1] = 1;
        let mut rest = n - 2;
        let mut cheap: Vec<usize> = (0..arc.len()).collect();
        cheap.sort_by_key(|&j| (cost(arc[j]), j));
        for j in cheap {
            if rest == 0 {
                break;
            }
            let take = (cap(arc[j]) - count[j]).min(rest);
            count[j] += take;
            rest -= take;
        }
        if rest > 0 {
            return None;
        }
    }
    let total = arc.iter().zip(&count).map(|(&p, &c)| cost(p) * c as u128).sum();
    Some((arc, count, total))
}

fn hosts_along(arc: &[usize], count: &[usize]) -> Vec<usize> {
    arc.iter().zip(count).flat_map(|(&p, &c)| std::iter::repeat_n(p, c)).collect()
}

fn edge_cost_sum(ring: &Ring, s: &SubstrateNetwork, walk: &[usize]) -> u128 {
    walk.iter().map(|&i| s.edge_cost(ring.edges[i]) as u128).sum()
}

/// Best embedding of the virtual path as a clockwise elementary walk from
/// `u_s` to `u_t`.
pub fn elementary_path_embed(v: &VirtualNetwork, s: &SubstrateNetwork, u_s: NodeId, u_t: NodeId) -> Result<SolveOutcome> {
    let ring = Ring::new(s, PATH_SOLVER_ID)?;
    let order = classify(v.graph()).path_order.ok_or(UnivneError::TopologyMismatch { solver: PATH_SOLVER_ID, expected: "a virtual path" })?;
    if u_s >= ring.len() || u_t >= ring.len() {
        return Err(UnivneError::InvalidNetwork("arc endpoint out of range".into()));
    }
    let (sp, tp) = (ring.pos[u_s], ring.pos[u_t]);
    let Some((arc, count, node_cost)) = fill_arc(&ring, s, sp, tp, order.len()) else {
        return Ok(SolveOutcome::infeasible(PATH_SOLVER_ID));
    };
    let total = node_cost + edge_cost_sum(&ring, s, &ring.edge_walk(sp, tp, Direction::Clockwise));
    let hosts = hosts_along(&arc, &count);
    let mapping = arc_mapping(v, &ring, &order, &hosts, None);
    finish(v, s, mapping, Some(total), PATH_SOLVER_ID)
}

/// Mapping for an ordered virtual path or cycle laid clockwise on `hosts`
/// (ring positions), with an optional closing walk.
fn arc_mapping(v: &VirtualNetwork, ring: &Ring, order: &[NodeId], hosts: &[usize], closing: Option<Vec<NodeId>>) -> Mapping {
    let mut placement = vec![0; order.len()];
    for (j, &x) in order.iter().enumerate() {
        placement[x] = ring.nodes[hosts[j]];
    }
    let routing = routes_by_index(v, order, |i, j| {
        if j == i + 1 {
            ring.node_walk(hosts[i], hosts[j], Direction::Clockwise)
        } else {
            closing.clone().expect("closing walk")
        }
    });
    Mapping { placement, routing }
}

pub fn solve_path_on_cycle(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    let ring = Ring::new(s, PATH_SOLVER_ID)?;
    let order = classify(v.graph()).path_order.ok_or(UnivneError::TopologyMismatch { solver: PATH_SOLVER_ID, expected: "a virtual path" })?;
    let n = order.len();
    if n == 1 {
        return Ok(cheapest_single(v, s, PATH_SOLVER_ID));
    }
    let m = ring.len();
    let mut best: Option<(u128, Vec<usize>)> = None;
    for su in 0..m {
        for tu in 0..m {
            let (sp, tp) = (ring.pos[su], ring.pos[tu]);
            let Some((arc, count, node_cost)) = fill_arc(&ring, s, sp, tp, n) else { continue };
            let total = node_cost + edge_cost_sum(&ring, s, &ring.edge_walk(sp, tp, Direction::Clockwise));
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                best = Some((total, hosts_along(&arc, &count)));
            }
        }
    }
    let Some((total, hosts)) = best else {
        return Ok(SolveOutcome::infeasible(PATH_SOLVER_ID));
    };
    let mapping = arc_mapping(v, &ring, &order, &hosts, None);
    finish(v, s, mapping, Some(total), PATH_SOLVER_ID)
}

pub fn solve_cycle_on_cycle(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    let ring = Ring::new(s, CYCLE_SOLVER_ID)?;
    let order = classify(v.graph()).cycle_order.ok_or(UnivneError::TopologyMismatch { solver: CYCLE_SOLVER_ID, expected: "a virtual cycle" })?;
    let n = order.len();
    let m = ring.len();
    let mut best: Option<(u128, Vec<usize>, Vec<NodeId>)> = None;
    for su in 0..m {
        for tu in 0..m {
            let (sp, tp) = (ring.pos[su], ring.pos[tu]);
            let Some((arc, count, node_cost)) = fill_arc(&ring, s, sp, tp, n) else { continue };
            let along = ring.edge_walk(sp, tp, Direction::Clockwise);
            let base = node_cost + edge_cost_sum(&ring, s, &along);
            let mut options: Vec<(u128, Vec<NodeId>)> = Vec::new();
            if sp == tp {
                options.push((0, vec![su]));
            } else {
                let around = ring.edge_walk(tp, sp, Direction::Clockwise);
                options.push((edge_cost_sum(&ring, s, &around), ring.node_walk(tp, sp, Direction::Clockwise)));
                if along.iter().all(|&i| s.edge_capacity(ring.edges[i]) >= 2) {
                    options.push((edge_cost_sum(&ring, s, &along), ring.node_walk(tp, sp, Direction::Counterclockwise)));
                }
            }
            for (extra, closing) in options {
                let total = base + extra;
                if best.as_ref().is_none_or(|(b, _, _)| total < *b) {
                    best = Some((total, hosts_along(&arc, &count), closing));
                }
            }
        }
    }
    let Some((total, hosts, closing)) = best else {
        return Ok(SolveOutcome::infeasible(CYCLE_SOLVER_ID));
    };
    let mapping = arc_mapping(v, &ring, &order, &hosts, Some(closing));
    finish(v, s, mapping, Some(total), CYCLE_SOLVER_ID)
}

/// Walk options between two positions: the empty walk when they coincide,
/// otherwise clockwise then counterclockwise.
fn walk_options(ring: &Ring, p: usize, q: usize) -> Vec<(Vec<usize>, Vec<NodeId>)> {
    if p == q {
        vec![(Vec::new(), vec![ring.nodes[p]])]
    } else {
        [Direction::Clockwise, Direction::Counterclockwise].into_iter().map(|d| (ring.edge_walk(p, q, d), ring.node_walk(p, q, d))).collect()
    }
}

struct WheelPlan {
    total: u128,
    outer_hosts: Vec<usize>,
    hub: usize,
    closing: Vec<NodeId>,
    spokes: Vec<Vec<NodeId>>,
}

pub fn solve_wheel_on_cycle(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    let ring = Ring::new(s, WHEEL_SOLVER_ID)?;
    let order = classify(v.graph()).wheel_order.ok_or(UnivneError::TopologyMismatch { solver: WHEEL_SOLVER_ID, expected: "a virtual wheel" })?;
    let n = order.len() - 1;
    let m = ring.len();
    let mut best: Option<WheelPlan> = None;
    for su in 0..m {
        for tu in 0..m {
            for cu in 0..m {
                let (sp, tp, cp) = (ring.pos[su], ring.pos[tu], ring.pos[cu]);
                let mut demand = vec![0u64; m];
                for p in [sp, tp, cp] {
                    demand[p] += 1;
                }
                if (0..m).any(|p| demand[p] > s.node_capacity(ring.nodes[p])) {
                    continue;
                }
                let arc = ring.arc(sp, tp);
                let along = ring.edge_walk(sp, tp, Direction::Clockwise);
                let fixed_nodes: u128 = [sp, tp, cp].iter().map(|&p| s.node_cost(ring.nodes[p]) as u128).sum();
                let closings = if sp == tp {
                    vec![(Vec::new(), vec![su])]
                } else {
                    [Direction::Clockwise, Direction::Counterclockwise].into_iter().map(|d| (ring.edge_walk(tp, sp, d), ring.node_walk(tp, sp, d))).collect()
                };
                for (close_edges, close_nodes) in &closings {
                    for (first_edges, first_nodes) in walk_options(&ring, sp, cp) {
                        for (last_edges, last_nodes) in walk_options(&ring, tp, cp) {
                            let mut load = vec![0u64; m];
                            for &i in along.iter().chain(close_edges).chain(&first_edges).chain(&last_edges) {
                                load[i] += 1;
                            }
                            if (0..m).any(|i| load[i] > s.edge_capacity(ring.edges[i])) {
                                continue;
                            }
                            let fixed = fixed_nodes + (0..m).map(|i| load[i] as u128 * s.edge_cost(ring.edges[i]) as u128).sum::<u128>();
                            let mut net = FlowNetwork::new(m + 1, m, cu, (n - 2) as u64);
                            for &p in &arc {
                                let free = s.node_capacity(ring.nodes[p]) - demand[p];
                                if free > 0 {
                                    net.add_arc(m, ring.nodes[p], free, s.node_cost(ring.nodes[p]));
                                }
                            }
                            for i in 0..m {
                                let free = s.edge_capacity(ring.edges[i]) - load[i];
                                if free > 0 {
                                    net.add_edge(ring.nodes[i], ring.nodes[(i + 1) % m], free, s.edge_cost(ring.edges[i]));
                                }
                            }
                            let Some(flow) = min_cost_integer_flow(&net) else { continue };
                            let total = fixed + flow.cost as u128;
                            if best.as_ref().is_some_and(|b| total >= b.total) {
                                continue;
                            }
                            let offset = |u: NodeId| (ring.pos[u] + m - sp) % m;
                            let mut units: Vec<&[usize]> = flow.unit_paths().collect();
                            units.sort_by_key(|u| offset(u[1]));
                            let mut outer_hosts = vec![sp];
                            let mut spokes = vec![first_nodes.clone()];
                            for u in units {
                                outer_hosts.push(ring.pos[u[1]]);
                                spokes.push(u[1..].to_vec());
                            }
                            outer_hosts.push(tp);
                            spokes.push(last_nodes.clone());
                            best = Some(WheelPlan { total, outer_hosts, hub: cp, closing: close_nodes.clone(), spokes });
                        }
                    }
                }
            }
        }
    }
    let Some(plan) = best else {
        return Ok(SolveOutcome::infeasible(WHEEL_SOLVER_ID));
    };
    let mut placement = vec![0; n + 1];
    for (j, &x) in order[..n].iter().enumerate() {
        placement[x] = ring.nodes[plan.outer_hosts[j]];
    }
    placement[order[n]] = ring.nodes[plan.hub];
    let routing = routes_by_index(v, &order, |i, j| {
        if j == n {
            plan.spokes[i].clone()
        } else if j == i + 1 {
            ring.node_walk(plan.outer_hosts[i], plan.outer_hosts[j], Direction::Clockwise)
        } else {
            plan.closing.clone()
        }
    });
    finish(v, s, Mapping { placement, routing }, Some(plan.total), WHEEL_SOLVER_ID)
}

/// Clique DP state after deciding positions `0..=i`: `k` nodes placed, and
/// the numbers of internal (both ends placed), cut and external (no end
/// placed) virtual edges whose route crosses ring edge `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CliqueDpState {
    pub i: usize,
    pub k: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

/// `l` nodes placed on the next position; `gamma` of the cut edges ending
/// there were routed clockwise, and `delta` of the new cut edges were
/// routed counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CliqueTransition {
    pub l: usize,
    pub gamma: usize,
    pub delta: usize,
}

fn pairs(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

fn for_each_transition(k: usize, a: usize, b: usize, c: usize, n: usize, mut f: impl FnMut(CliqueTransition, usize, usize, usize, usize)) {
    for l in 0..=n - k {
        let r = n - k - l;
        for gamma in 0..=(k * l).min(b) {
            if b - gamma > k * r {
                continue;
            }
            for delta in 0..=(r * l).min(c) {
                if c - delta > pairs(r) {
                    continue;
                }
                let t = CliqueTransition { l, gamma, delta };
                f(t, k + l, a + k * l - gamma, b - gamma + r * l - delta, c - delta);
            }
        }
    }
}

/// Every successor of `state` for a clique on `n` nodes.
pub fn clique_dp_transitions(state: CliqueDpState, n: usize) -> Vec<(CliqueTransition, CliqueDpState)> {
    let mut out = Vec::new();
    if state.k > n {
        return out;
    }
    for_each_transition(state.k, state.a, state.b, state.c, n, |t, k, a, b, c| {
        out.push((t, CliqueDpState { i: state.i + 1, k, a, b, c }));
    });
    out
}

/// Per-position counts of the optimal witness, read as a chain of the
/// recurrence above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTrace {
    pub states: Vec<CliqueDpState>,
    /// `transitions[i]` leads from `states[i]` to `states[i + 1]`.
    pub transitions: Vec<CliqueTransition>,
}

/// Clockwise pattern over virtual nodes numbered in placement order: node
/// `v` routes clockwise exactly to nodes `v + 1..=reach[v]`. `reach` is
/// nondecreasing, which loses no optimal solution.
struct Pattern {
    reach: Vec<usize>,
    /// Load of a ring edge with `k` nodes placed before it.
    load: Vec<usize>,
}

fn for_each_pattern(n: usize, mut f: impl FnMut(&Pattern)) {
    fn rec(v: usize, n: usize, reach: &mut Vec<usize>, f: &mut dyn FnMut(&Pattern)) {
        if v == n {
            let total = pairs(n);
            let cw: usize = reach.iter().enumerate().map(|(v, &r)| r - v).sum();
            let ccw = total - cw;
            let load = (0..=n)
                .map(|k| {
                    let crossing_cw: usize = reach[..k].iter().map(|&r| (r + 1).saturating_sub(k)).sum();
                    ccw + 2 * crossing_cw - k * (n - k)
                })
                .collect();
            f(&Pattern { reach: reach.clone(), load });
            return;
        }
        let low = reach.last().copied().unwrap_or(0).max(v);
        for r in low..n {
            reach.push(r);
            rec(v + 1, n, reach, f);
            reach.pop();
        }
    }
    if n == 0 {
        f(&Pattern { reach: Vec::new(), load: vec![0] });
        return;
    }
    rec(0, n, &mut Vec::with_capacity(n), &mut f);
}

const INF: u128 = u128::MAX;

/// Cheapest placement for a fixed pattern. Returns the total cost and the
/// number of nodes at each position.
fn place_pattern(p: &Pattern, n: usize, ring: &Ring, s: &SubstrateNetwork, best_known: u128) -> Option<(u128, Vec<usize>)> {
    let m = ring.len();
    let cap = |i: usize| (s.node_capacity(ring.nodes[i]).min(n as u64)) as usize;
    let wv = |i: usize| s.node_cost(ring.nodes[i]) as u128;
    // a block of `l` co-located nodes starting at `k` must be clockwise among itself
    let block_ok = |k: usize, l: usize| l == 0 || p.reach[k] + 1 >= k + l;
    let edge_term = |i: usize, k: usize| -> u128 {
        let e = ring.edges[i];
        if p.load[k] as u64 > s.edge_capacity(e) {
            INF
        } else {
            p.load[k] as u128 * s.edge_cost(e) as u128
        }
    };
    let mut dp = vec![vec![INF; n + 1]; m];
    let mut from = vec![vec![0usize; n + 1]; m];
    for l in 0..=cap(0).min(n) {
        if block_ok(0, l) {
            dp[0][l] = wv(0) * l as u128;
        }
    }
    for i in 0..m - 1 {
        for k in 0..=n {
            let base = dp[i][k];
            if base == INF {
                continue;
            }
            let edge = edge_term(i, k);
            if edge == INF {
                continue;
            }
            let base = base + edge;
            if base >= best_known {
                continue;
            }
            for l in 0..=cap(i + 1).min(n - k) {
                if !block_ok(k, l) {
                    break;
                }
                let cost = base + wv(i + 1) * l as u128;
                if cost < dp[i + 1][k + l] {
                    dp[i + 1][k + l] = cost;
                    from[i + 1][k + l] = k;
                }
            }
        }
    }
    let last = dp[m - 1][n];
    let wrap = edge_term(m - 1, n);
    if last == INF || wrap == INF {
        return None;
    }
    let total = last + wrap;
    if total >= best_known {
        return None;
    }
    let mut sizes = vec![0; m];
    let mut k = n;
    for i in (1..m).rev() {
        let prev = from[i][k];
        sizes[i] = k - prev;
        k = prev;
    }
    sizes[0] = k;
    Some((total, sizes))
}

pub fn solve_clique_on_cycle(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    solve_clique_on_cycle_traced(v, s).map(|(out, _)| out)
}

/// Clique solver that also reports the recurrence chain of its witness.
pub fn solve_clique_on_cycle_traced(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<(SolveOutcome, Option<CliqueTrace>)> {
    let ring = Ring::new(s, CLIQUE_SOLVER_ID)?;
    let n = v.node_count();
    if v.edge_count() != pairs(n) {
        return Err(UnivneError::TopologyMismatch { solver: CLIQUE_SOLVER_ID, expected: "a virtual clique" });
    }
    let m = ring.len();
    let mut best: Option<(u128, Vec<usize>, Vec<usize>)> = None;
    for_each_pattern(n, |p| {
        let bound = best.as_ref().map_or(INF, |b| b.0);
        if let Some((total, sizes)) = place_pattern(p, n, &ring, s, bound) {
            best = Some((total, sizes, p.reach.clone()));
        }
    });
    let Some((total, sizes, reach)) = best else {
        return Ok((SolveOutcome::infeasible(CLIQUE_SOLVER_ID), None));
    };

    let mut position = Vec::with_capacity(n);
    for (p, &l) in sizes.iter().enumerate() {
        position.extend(std::iter::repeat_n(p, l));
    }
    let placement: Vec<NodeId> = position.iter().map(|&p| ring.nodes[p]).collect();
    let routing = v
        .graph()
        .edges()
        .iter()
        .map(|&(x, y)| {
            let (lo, hi) = (x.min(y), x.max(y));
            let dir = if hi <= reach[lo] { Direction::Clockwise } else { Direction::Counterclockwise };
            path_of(ring.node_walk(position[lo], position[hi], dir))
        })
        .collect();
    let mapping = Mapping { placement, routing };
    let out = finish(v, s, mapping, Some(total), CLIQUE_SOLVER_ID)?;
    let trace = witness_trace(&position, &reach, m);
    Ok((out, Some(trace)))
}

/// Reads the counts `(k, a, b, c)` after every position and the steps
/// between them off a placement and clockwise pattern.
fn witness_trace(position: &[usize], reach: &[usize], m: usize) -> CliqueTrace {
    let n = position.len();
    let mut states = Vec::with_capacity(m);
    let mut transitions = Vec::with_capacity(m.saturating_sub(1));
    for i in 0..m {
        let (mut k, mut a, mut b, mut c) = (0, 0, 0, 0);
        let (mut l, mut gamma, mut delta) = (0, 0, 0);
        for x in 0..n {
            if position[x] <= i {
                k += 1;
            }
            if position[x] == i {
                l += 1;
            }
            for y in x + 1..n {
                let (p, q) = (position[x], position[y]);
                if p == q {
                    continue;
                }
                let cw = y <= reach[x];
                match (cw, q <= i, p > i) {
                    (false, true, _) => a += 1,
                    (true, false, false) => b += 1,
                    (false, _, true) => c += 1,
                    _ => {}
                }
                if i > 0 && cw && q == i {
                    gamma += 1;
                }
                if i > 0 && !cw && p == i {
                    delta += 1;
                }
            }
        }
        states.push(CliqueDpState { i, k, a, b, c });
        if i > 0 {
            transitions.push(CliqueTransition { l, gamma, delta });
        }
    }
    CliqueTrace { states, transitions }
}
