//! Generators turning instances of classic hard problems into embedding
//! instances whose answer matches the source answer.

use serde::{Deserialize, Serialize};

use crate::error::{Result, UnivneError};
use crate::netgraph::{NodeId, SubstrateNetwork, UndirectedGraph, Variant, VirtualNetwork};

/// Hamiltonian cycle question on a simple connected graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HgpInstance {
    pub nodes: usize,
    pub edges: Vec<(NodeId, NodeId)>,
}

/// Travelling salesman question: is there a tour (or, for the path
/// generator, a Hamiltonian path) of length at most `bound`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TspInstance {
    /// Symmetric matrix of positive distances; the diagonal is ignored.
    pub distances: Vec<Vec<u64>>,
    pub bound: u64,
}

/// Bin packing question: can `items` be split into `bins` groups of total
/// size at most `size` each?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BppInstance {
    pub items: Vec<u64>,
    pub bins: u64,
    pub size: u64,
}

/// Edge-disjoint paths question for terminal pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdppInstance {
    pub nodes: usize,
    pub edges: Vec<(NodeId, NodeId)>,
    pub pairs: Vec<(NodeId, NodeId)>,
}

/// Minimum cut linear arrangement question: is there an ordering of the
/// nodes where every prefix cut has at most `bound` edges?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MclaInstance {
    pub nodes: usize,
    pub edges: Vec<(NodeId, NodeId)>,
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub virtual_network: VirtualNetwork,
    pub substrate: SubstrateNetwork,
    pub variant: Variant,
    /// Cost bound for the cost variant.
    pub budget: Option<u64>,
    /// Name of the construction that produced the instance.
    pub construction: &'static str,
}

impl GeneratedInstance {
    fn existence(virtual_network: VirtualNetwork, substrate: SubstrateNetwork, construction: &'static str) -> Self {
        GeneratedInstance { virtual_network, substrate, variant: Variant::Existence, budget: None, construction }
    }
}

fn invalid(msg: impl Into<String>) -> UnivneError {
    UnivneError::InvalidSource(msg.into())
}

fn source_graph(nodes: usize, edges: &[(NodeId, NodeId)]) -> Result<UndirectedGraph> {
    UndirectedGraph::new(nodes, edges.iter().copied()).map_err(|e| invalid(e.to_string()))
}

fn hgp_graph(h: &HgpInstance) -> Result<UndirectedGraph> {
    let g = source_graph(h.nodes, &h.edges)?;
    if let Some(u) = (0..g.node_count()).find(|&u| g.degree(u) > 3) {
        return Err(invalid(format!("node {u} has degree {} > 3", g.degree(u))));
    }
    Ok(g)
}

/// Virtual cycle on the source graph with unit capacities.
pub fn hgp_to_cycle(h: &HgpInstance) -> Result<GeneratedInstance> {
    let g = hgp_graph(h)?;
    let n = g.node_count();
    if n < 3 {
        return Err(invalid("a Hamiltonian cycle needs at least 3 nodes"));
    }
    let s = SubstrateNetwork::uniform(g, 1, 0, 1, 0)?;
    Ok(GeneratedInstance::existence(VirtualNetwork::new(UndirectedGraph::cycle(n)?), s, "hamiltonian-cycle-to-cycle"))
}

/// Virtual wheel on the source graph plus a universal hub, unit capacities.
pub fn hgp_to_wheel(h: &HgpInstance) -> Result<GeneratedInstance> {
    let g = hgp_graph(h)?;
    let n = g.node_count();
    if n < 4 {
        return Err(invalid("the wheel construction needs at least 4 nodes"));
    }
    let edges = g.edges().iter().copied().chain((0..n).map(|u| (u, n)));
    let s = SubstrateNetwork::uniform(UndirectedGraph::new(n + 1, edges)?, 1, 0, 1, 0)?;
    Ok(GeneratedInstance::existence(VirtualNetwork::new(UndirectedGraph::wheel(n)?), s, "hamiltonian-cycle-to-wheel"))
}

fn edpp_parts(e: &EdppInstance) -> Result<(UndirectedGraph, Vec<Option<usize>>)> {
    let g = source_graph(e.nodes, &e.edges)?;
    if e.pairs.is_empty() {
        return Err(invalid("at least one terminal pair is required"));
    }
    let mut pair_of = vec![None; g.node_count()];
    for (l, &(s, t)) in e.pairs.iter().enumerate() {
        for x in [s, t] {
            if x >= g.node_count() {
                return Err(invalid(format!("terminal {x} out of range")));
            }
            if pair_of[x].replace(l).is_some() {
                return Err(invalid(format!("node {x} is a terminal more than once")));
            }
        }
    }
    Ok((g, pair_of))
}

/// Virtual clique on the terminals; the substrate adds links between
/// terminals of different pairs. Only terminals can host, and a source edge
/// joining terminals of different pairs gets one extra unit of capacity.
pub fn edpp_to_clique(e: &EdppInstance) -> Result<GeneratedInstance> {
    let (g, pair_of) = edpp_parts(e)?;
    let n = g.node_count();
    let cross = |a: NodeId, b: NodeId| matches!((pair_of[a], pair_of[b]), (Some(x), Some(y)) if x != y);
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().to_vec();
    let mut edge_capacity: Vec<u64> = edges.iter().map(|&(a, b)| 1 + u64::from(cross(a, b))).collect();
    for a in 0..n {
        for b in a + 1..n {
            if cross(a, b) && g.edge_between(a, b).is_none() {
                edges.push((a, b));
                edge_capacity.push(1);
            }
        }
    }
    let m = edges.len();
    let node_capacity = pair_of.iter().map(|p| u64::from(p.is_some())).collect();
    let s = SubstrateNetwork::new(UndirectedGraph::new(n, edges)?, node_capacity, vec![0; n], edge_capacity, vec![0; m])?;
    let v = VirtualNetwork::new(UndirectedGraph::complete(2 * e.pairs.len()));
    Ok(GeneratedInstance::existence(v, s, "edge-disjoint-paths-to-clique"))
}

/// Virtual clique with one node per source node plus one per terminal, on a
/// substrate clique over the source nodes. Terminals host two virtual
/// nodes, others one. An edge carries every virtual edge between the nodes
/// hosted at its ends, except the one joining a terminal pair, plus one unit
/// if it is a source edge.
pub fn edpp_to_clique_on_clique(e: &EdppInstance) -> Result<GeneratedInstance> {
    let (g, pair_of) = edpp_parts(e)?;
    let n = g.node_count();
    let hosted = |x: NodeId| if pair_of[x].is_some() { 2 } else { 1 };
    let k = UndirectedGraph::complete(n);
    let edge_capacity = k
        .edges()
        .iter()
        .map(|&(a, b)| {
            let same = pair_of[a].is_some() && pair_of[a] == pair_of[b];
            hosted(a) * hosted(b) - u64::from(same) + u64::from(g.edge_between(a, b).is_some())
        })
        .collect();
    let m = k.edge_count();
    let node_capacity = (0..n).map(hosted).collect();
    let s = SubstrateNetwork::new(k, node_capacity, vec![0; n], edge_capacity, vec![0; m])?;
    let v = VirtualNetwork::new(UndirectedGraph::complete(n + 2 * e.pairs.len()));
    Ok(GeneratedInstance::existence(v, s, "edge-disjoint-paths-to-clique-on-clique"))
}

fn tsp_substrate(t: &TspInstance, with_hub: bool) -> Result<SubstrateNetwork> {
    let n = t.distances.len();
    if t.distances.iter().any(|row| row.len() != n) {
        return Err(invalid("distance matrix is not square"));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && (t.distances[i][j] == 0 || t.distances[i][j] != t.distances[j][i]) {
                return Err(invalid(format!("distance ({i}, {j}) must be positive and symmetric")));
            }
        }
    }
    let size = n + usize::from(with_hub);
    let k = UndirectedGraph::complete(size);
    let edge_cost = k
        .edges()
        .iter()
        .map(|&(a, b)| if b == n { Ok(0) } else { t.bound.checked_add(t.distances[a][b]).ok_or(UnivneError::Overflow) })
        .collect::<Result<Vec<u64>>>()?;
    let m = k.edge_count();
    SubstrateNetwork::new(k, vec![1; size], vec![0; size], vec![1; m], edge_cost)
}

fn tsp_budget(t: &TspInstance, multiplier: usize) -> Result<u64> {
    t.bound.checked_mul(multiplier as u64).ok_or(UnivneError::Overflow)
}

/// Virtual cycle on the distance clique; a tour of length at most the bound
/// exists iff some mapping costs at most `(n + 1) * bound`.
pub fn tsp_to_cycle(t: &TspInstance) -> Result<GeneratedInstance> {
    let n = t.distances.len();
    if n < 3 {
        return Err(invalid("a tour needs at least 3 cities"));
    }
    Ok(GeneratedInstance {
        virtual_network: VirtualNetwork::new(UndirectedGraph::cycle(n)?),
        substrate: tsp_substrate(t, false)?,
        variant: Variant::Cost,
        budget: Some(tsp_budget(t, n + 1)?),
        construction: "travelling-salesman-to-cycle",
    })
}

/// Virtual path on the distance clique; a Hamiltonian path of length at most
/// the bound exists iff some mapping costs at most `n * bound`.
pub fn tsp_to_path(t: &TspInstance) -> Result<GeneratedInstance> {
    let n = t.distances.len();
    if n == 0 {
        return Err(invalid("at least one city is required"));
    }
    Ok(GeneratedInstance {
        virtual_network: VirtualNetwork::new(UndirectedGraph::path(n)),
        substrate: tsp_substrate(t, false)?,
        variant: Variant::Cost,
        budget: Some(tsp_budget(t, n)?),
        construction: "travelling-salesman-to-path",
    })
}

/// Virtual wheel on the distance clique plus a hub joined by free edges.
pub fn tsp_to_wheel(t: &TspInstance) -> Result<GeneratedInstance> {
    let n = t.distances.len();
    if n < 3 {
        return Err(invalid("a tour needs at least 3 cities"));
    }
    Ok(GeneratedInstance {
        virtual_network: VirtualNetwork::new(UndirectedGraph::wheel(n)?),
        substrate: tsp_substrate(t, true)?,
        variant: Variant::Cost,
        budget: Some(tsp_budget(t, n + 1)?),
        construction: "travelling-salesman-to-wheel",
    })
}

/// Items padded with unit items so that they fill every bin exactly.
fn bpp_items(b: &BppInstance) -> Result<Vec<u64>> {
    if b.bins < 3 {
        return Err(invalid("at least 3 bins are required"));
    }
    if b.size == 0 || b.items.contains(&0) {
        return Err(invalid("bin size and items must be positive"));
    }
    let total: u64 = b.items.iter().sum();
    let room = b.bins.checked_mul(b.size).ok_or(UnivneError::Overflow)?;
    if total > room {
        return Err(invalid(format!("items total {total} exceeds bins * size = {room}")));
    }
    let mut items = b.items.clone();
    items.extend(std::iter::repeat_n(1, (room - total) as usize));
    Ok(items)
}

/// Root joined to one star per item and to `bins * size - items` singletons.
fn bpp_virtual_tree(b: &BppInstance, items: &[u64]) -> Result<VirtualNetwork> {
    let singles = (b.bins * b.size) as usize - items.len();
    let mut edges = Vec::new();
    let mut next = 1;
    for &a in items {
        let center = next;
        edges.push((0, center));
        for j in 1..=a as usize {
            edges.push((center, center + j));
        }
        next = center + a as usize + 1;
    }
    for _ in 0..singles {
        edges.push((0, next));
        next += 1;
    }
    Ok(VirtualNetwork::new(UndirectedGraph::new(next, edges)?))
}

/// The item tree on a star with one leaf per bin.
pub fn bpp_to_tree_on_star(b: &BppInstance) -> Result<GeneratedInstance> {
    let items = bpp_items(b)?;
    let v = bpp_virtual_tree(b, &items)?;
    let k = b.bins as usize;
    let cap = b.size.checked_mul(2).ok_or(UnivneError::Overflow)?;
    let mut node_capacity = vec![cap; k + 1];
    node_capacity[0] = 1;
    let s = SubstrateNetwork::new(UndirectedGraph::star(k), node_capacity, vec![0; k + 1], vec![b.size; k], vec![0; k])?;
    Ok(GeneratedInstance::existence(v, s, "bin-packing-to-tree-on-star"))
}

/// The item tree on a substrate tree of the same size: a root joined to one
/// star with `2 * size - 1` leaves per bin, unit node capacities and edge
/// capacity `size`.
pub fn bpp_to_tree_on_tree(b: &BppInstance) -> Result<GeneratedInstance> {
    let items = bpp_items(b)?;
    let v = bpp_virtual_tree(b, &items)?;
    let gadget = 2 * b.size as usize;
    let n = 1 + b.bins as usize * gadget;
    let mut edges = Vec::with_capacity(n - 1);
    for bin in 0..b.bins as usize {
        let center = 1 + bin * gadget;
        edges.push((0, center));
        for j in 1..gadget {
            edges.push((center, center + j));
        }
    }
    let s = SubstrateNetwork::new(UndirectedGraph::new(n, edges)?, vec![1; n], vec![0; n], vec![b.size; n - 1], vec![0; n - 1])?;
    Ok(GeneratedInstance::existence(v, s, "bin-packing-to-tree-on-tree"))
}

/// The source graph on a path with unit node capacities and edge capacity
/// equal to the cut bound.
pub fn mcla_to_general_on_path(m: &MclaInstance) -> Result<GeneratedInstance> {
    let g = source_graph(m.nodes, &m.edges)?;
    if m.bound == 0 {
        return Err(invalid("the cut bound must be at least 1"));
    }
    let n = g.node_count();
    let s = SubstrateNetwork::uniform(UndirectedGraph::path(n), 1, 0, m.bound, 0)?;
    Ok(GeneratedInstance::existence(VirtualNetwork::new(g), s, "cut-arrangement-to-path"))
}
