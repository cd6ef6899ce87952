//! Exact dynamic programs for virtual cycles, paths, wheels and cliques on
//! substrate trees.
//!
//! The substrate is rooted and binarized so that only leaves carry capacity.
//! In an optimal embedding every subtree hosts a cyclic block of consecutive
//! virtual nodes, so the number of virtual edges crossing a tree edge depends
//! only on the block size and a small topology-specific flag.

use crate::error::{Result, UnivneError};
use crate::netgraph::{classify, mapping_cost, mapping_from_routes, NodeId, SolveOutcome, SubstrateNetwork, Topology, UndirectedGraph, VirtualNetwork};

pub const CYCLE_SOLVER_ID: &str = "tree-dp-cycle";
pub const PATH_SOLVER_ID: &str = "tree-dp-path";
pub const WHEEL_SOLVER_ID: &str = "tree-dp-wheel";
pub const CLIQUE_SOLVER_ID: &str = "tree-dp-clique";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryTreeNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Substrate node this node stands for.
    pub original: NodeId,
    /// Added leaf or chain node.
    pub dummy: bool,
    pub capacity: u64,
    pub cost: u64,
    /// Substrate edge to the parent, `None` for added edges and the root.
    pub up_edge: Option<usize>,
    pub up_capacity: u64,
    pub up_cost: u64,
}

/// Rooted tree with at most two children per node and capacity on leaves
/// only. Nodes are numbered in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBinaryTree {
    pub nodes: Vec<BinaryTreeNode>,
    pub root: usize,
}

impl RootedBinaryTree {
    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&u| self.nodes[u].children.is_empty())
    }

    /// The binarized tree as a standalone substrate.
    pub fn to_substrate(&self) -> Result<SubstrateNetwork> {
        let edges: Vec<(usize, usize)> = self.nodes.iter().enumerate().filter_map(|(i, x)| x.parent.map(|p| (p, i))).collect();
        let up: Vec<&BinaryTreeNode> = self.nodes.iter().filter(|x| x.parent.is_some()).collect();
        SubstrateNetwork::new(
            UndirectedGraph::new(self.nodes.len(), edges)?,
            self.nodes.iter().map(|x| x.capacity).collect(),
            self.nodes.iter().map(|x| x.cost).collect(),
            up.iter().map(|x| x.up_capacity).collect(),
            up.iter().map(|x| x.up_cost).collect(),
        )
    }
}

fn is_tree(g: &UndirectedGraph) -> bool {
    g.edge_count() + 1 == g.node_count()
}

/// Parent edge and depth of every substrate node with the tree rooted at `root`.
struct RootedOriginal {
    parent: Vec<Option<(NodeId, usize)>>,
    depth: Vec<usize>,
}

impl RootedOriginal {
    fn new(g: &UndirectedGraph, root: NodeId) -> Self {
        let n = g.node_count();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut order = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            for &(x, e) in g.adjacency(u) {
                if !seen[x] {
                    seen[x] = true;
                    parent[x] = Some((u, e));
                    depth[x] = depth[u] + 1;
                    order.push(x);
                }
            }
            i += 1;
        }
        RootedOriginal { parent, depth }
    }

    fn path(&self, a: NodeId, b: NodeId) -> Vec<NodeId> {
        let (mut x, mut y) = (a, b);
        let mut left = vec![x];
        let mut right = vec![y];
        while x != y {
            if self.depth[x] >= self.depth[y] {
                x = self.parent[x].expect("non-root").0;
                left.push(x);
            } else {
                y = self.parent[y].expect("non-root").0;
                right.push(y);
            }
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left
    }
}

#[derive(Clone, Copy)]
enum Item {
    Own,
    Child(NodeId, usize),
}

struct Builder<'a> {
    s: &'a SubstrateNetwork,
    rooted: &'a RootedOriginal,
    dummy_capacity: u64,
    nodes: Vec<BinaryTreeNode>,
}

impl Builder<'_> {
    fn push(&mut self, node: BinaryTreeNode) -> usize {
        let id = self.nodes.len();
        if let Some(p) = node.parent {
            self.nodes[p].children.push(id);
        }
        self.nodes.push(node);
        id
    }

    fn dummy(&self, parent: usize, original: NodeId, capacity: u64, cost: u64) -> BinaryTreeNode {
        BinaryTreeNode {
            parent: Some(parent),
            children: Vec::new(),
            original,
            dummy: true,
            capacity,
            cost,
            up_edge: None,
            up_capacity: self.dummy_capacity,
            up_cost: 0,
        }
    }

    fn items(&self, u: NodeId) -> Vec<Item> {
        let g = self.s.graph();
        let mut items: Vec<Item> = g
            .adjacency(u)
            .iter()
            .filter(|&&(x, _)| self.rooted.parent[x].is_some_and(|(p, _)| p == u))
            .map(|&(x, e)| Item::Child(x, e))
            .collect();
        if !items.is_empty() && self.s.node_capacity(u) > 0 {
            items.insert(0, Item::Own);
        }
        items
    }

    fn original(&mut self, u: NodeId, parent: Option<usize>, up_edge: Option<usize>) {
        let internal = !self.items(u).is_empty();
        let node = BinaryTreeNode {
            parent,
            children: Vec::new(),
            original: u,
            dummy: false,
            capacity: if internal { 0 } else { self.s.node_capacity(u) },
            cost: self.s.node_cost(u),
            up_edge,
            up_capacity: up_edge.map_or(0, |e| self.s.edge_capacity(e)),
            up_cost: up_edge.map_or(0, |e| self.s.edge_cost(e)),
        };
        let id = self.push(node);
        let items = self.items(u);
        self.attach(id, u, &items);
    }

    fn make(&mut self, item: Item, parent: usize, u: NodeId) {
        match item {
            Item::Own => {
                let leaf = self.dummy(parent, u, self.s.node_capacity(u), self.s.node_cost(u));
                self.push(leaf);
            }
            Item::Child(x, e) => self.original(x, Some(parent), Some(e)),
        }
    }

    fn attach(&mut self, id: usize, u: NodeId, items: &[Item]) {
        if items.len() <= 2 {
            for &it in items {
                self.make(it, id, u);
            }
            return;
        }
        let mid = items.len().div_ceil(2);
        for half in [&items[..mid], &items[mid..]] {
            if half.len() == 1 {
                self.make(half[0], id, u);
            } else {
                let chain = self.dummy(id, u, 0, 0);
                let c = self.push(chain);
                self.attach(c, u, half);
            }
        }
    }
}

/// Roots the substrate tree at `root` and rewrites it so that every node has
/// at most two children and only leaves carry capacity. Added edges get
/// `dummy_capacity` and cost zero.
pub fn binarize(s: &SubstrateNetwork, root: NodeId, dummy_capacity: u64) -> Result<RootedBinaryTree> {
    if !is_tree(s.graph()) {
        return Err(UnivneError::InvalidNetwork("substrate is not a tree".into()));
    }
    if root >= s.node_count() {
        return Err(UnivneError::InvalidNetwork(format!("root {root} out of range")));
    }
    let rooted = RootedOriginal::new(s.graph(), root);
    let mut b = Builder { s, rooted: &rooted, dummy_capacity, nodes: Vec::new() };
    b.original(root, None, None);
    Ok(RootedBinaryTree { nodes: b.nodes, root: 0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Cycle(usize),
    Path(usize),
    /// Number of outer nodes; the hub is tracked by the flag.
    Wheel(usize),
    Clique(usize),
}

impl Shape {
    fn size(self) -> usize {
        match self {
            Shape::Cycle(n) | Shape::Path(n) | Shape::Wheel(n) | Shape::Clique(n) => n,
        }
    }

    fn extras(self) -> usize {
        match self {
            Shape::Path(_) => 3,
            Shape::Wheel(_) => 2,
            _ => 1,
        }
    }

    fn valid(self, k: usize, x: usize) -> bool {
        let n = self.size();
        if k > n || x >= self.extras() {
            return false;
        }
        match self {
            Shape::Path(_) => x <= k.min(2) && (k < n || x == 2) && (k == n || 2 - x <= n - k),
            _ => true,
        }
    }

    fn crossing(self, k: usize, x: usize) -> u64 {
        let n = self.size();
        let c = match self {
            Shape::Cycle(_) => {
                if k == 0 || k == n {
                    0
                } else {
                    2
                }
            }
            Shape::Path(_) => {
                if k == 0 || k == n {
                    0
                } else if x == 2 {
                    2
                } else {
                    2 - x
                }
            }
            Shape::Wheel(_) => match (k, x) {
                (0, 0) => 0,
                (0, _) => n,
                (k, 1) if k == n => 0,
                (k, _) if k == n => n,
                (k, 1) => 2 + n - k,
                (k, _) => 2 + k,
            },
            Shape::Clique(_) => k * (n - k),
        };
        c as u64
    }

    fn combine(self, xa: usize, xb: usize) -> Option<usize> {
        let x = xa + xb;
        match self {
            Shape::Path(_) if x <= 2 => Some(x),
            Shape::Wheel(_) if x <= 1 => Some(x),
            Shape::Cycle(_) | Shape::Clique(_) => Some(0),
            _ => None,
        }
    }

    fn demand(self, k: usize, x: usize) -> u64 {
        match self {
            Shape::Wheel(_) => (k + x) as u64,
            _ => k as u64,
        }
    }

    fn final_extra(self) -> usize {
        match self {
            Shape::Path(_) => 2,
            Shape::Wheel(_) => 1,
            _ => 0,
        }
    }

    /// Whether the cyclic block `[start, start + k)` agrees with flag `x`.
    fn block_ok(self, start: usize, k: usize, x: usize) -> bool {
        match self {
            Shape::Path(n) => {
                let has = |p: usize| (p + n - start) % n < k;
                usize::from(has(0)) + usize::from(has(n - 1)) == x
            }
            _ => true,
        }
    }
}

/// Number of virtual edges crossing a substrate edge whose lower side hosts a
/// block of `k` consecutive virtual nodes.
///
/// `extra` is the number of path extremities inside the block for paths, and
/// whether the hub is inside for wheels (where `n` and `k` count outer nodes
/// only). Cycles and cliques take `extra = 0`.
pub fn crossing_count(topology: Topology, n: usize, k: usize, extra: usize) -> Result<u64> {
    let shape = match topology {
        Topology::Cycle => Shape::Cycle(n),
        Topology::Path => Shape::Path(n),
        Topology::Wheel => Shape::Wheel(n),
        Topology::Clique => Shape::Clique(n),
        other => return Err(UnivneError::InvalidGraph(format!("no crossing rule for {}", other.name()))),
    };
    if !shape.valid(k, extra) {
        return Err(UnivneError::InvalidGraph(format!("state k={k}, extra={extra} is invalid for {} of size {n}", topology.name())));
    }
    Ok(shape.crossing(k, extra))
}

const INF: u128 = u128::MAX;

#[derive(Clone, Copy)]
struct Choice {
    ka: usize,
    xa: usize,
    xb: usize,
}

struct Dp<'a> {
    tree: &'a RootedBinaryTree,
    shape: Shape,
    width: usize,
    /// Cost inside the subtree, indexed by `k * width + x`.
    inner: Vec<Vec<u128>>,
    choice: Vec<Vec<Option<Choice>>>,
    reach: Vec<usize>,
}

impl<'a> Dp<'a> {
    fn run(tree: &'a RootedBinaryTree, shape: Shape) -> Self {
        let n = shape.size();
        let width = shape.extras();
        let cells = (n + 1) * width;
        let count = tree.nodes.len();
        let mut dp = Dp { tree, shape, width, inner: vec![Vec::new(); count], choice: vec![Vec::new(); count], reach: vec![0; count] };
        let mut outer: Vec<Vec<u128>> = vec![Vec::new(); count];
        for u in (0..count).rev() {
            let node = &tree.nodes[u];
            let mut f = vec![INF; cells];
            let mut ch = vec![None; cells];
            match node.children.as_slice() {
                [] => {
                    let reach = n.min(node.capacity as usize);
                    dp.reach[u] = reach;
                    for k in 0..=reach {
                        for x in 0..width {
                            if shape.valid(k, x) && shape.demand(k, x) <= node.capacity {
                                f[k * width + x] = node.cost as u128 * shape.demand(k, x) as u128;
                            }
                        }
                    }
                }
                [a] => {
                    dp.reach[u] = dp.reach[*a];
                    f.clone_from(&outer[*a]);
                }
                [a, b] => {
                    let (a, b) = (*a, *b);
                    dp.reach[u] = n.min(dp.reach[a] + dp.reach[b]);
                    for ka in 0..=dp.reach[a] {
                        for xa in 0..width {
                            let ga = outer[a][ka * width + xa];
                            if ga == INF {
                                continue;
                            }
                            for kb in 0..=dp.reach[b].min(n - ka) {
                                for xb in 0..width {
                                    let gb = outer[b][kb * width + xb];
                                    if gb == INF {
                                        continue;
                                    }
                                    let Some(x) = shape.combine(xa, xb) else { continue };
                                    let k = ka + kb;
                                    if !shape.valid(k, x) {
                                        continue;
                                    }
                                    let cell = k * width + x;
                                    if ga + gb < f[cell] {
                                        f[cell] = ga + gb;
                                        ch[cell] = Some(Choice { ka, xa, xb });
                                    }
                                }
                            }
                        }
                    }
                }
                _ => unreachable!("binarized nodes have at most two children"),
            }
            if node.parent.is_some() {
                let mut g = vec![INF; cells];
                for k in 0..=dp.reach[u] {
                    for x in 0..width {
                        let cell = k * width + x;
                        let cross = shape.crossing(k, x);
                        if f[cell] != INF && cross <= node.up_capacity {
                            g[cell] = f[cell] + cross as u128 * node.up_cost as u128;
                        }
                    }
                }
                outer[u] = g;
            }
            dp.inner[u] = f;
            dp.choice[u] = ch;
        }
        dp
    }

    fn optimum(&self) -> u128 {
        self.inner[self.tree.root][self.shape.size() * self.width + self.shape.final_extra()]
    }

    /// Block size and flag of every node along the optimal choice.
    fn states(&self) -> Vec<(usize, usize)> {
        let mut state = vec![(0, 0); self.tree.nodes.len()];
        state[self.tree.root] = (self.shape.size(), self.shape.final_extra());
        for u in 0..self.tree.nodes.len() {
            let (k, x) = state[u];
            match self.tree.nodes[u].children.as_slice() {
                [a] => state[*a] = (k, x),
                [a, b] => {
                    let c = self.choice[u][k * self.width + x].expect("finite state has a choice");
                    state[*a] = (c.ka, c.xa);
                    state[*b] = (k - c.ka, c.xb);
                }
                _ => {}
            }
        }
        state
    }
}

/// Assigns each subtree a cyclic block consistent with the chosen flags.
struct Blocks<'a> {
    tree: &'a RootedBinaryTree,
    shape: Shape,
    state: Vec<(usize, usize)>,
    /// 0 unknown, 1 impossible, 2 first child first, 3 second child first.
    memo: Vec<u8>,
}

impl Blocks<'_> {
    fn fits(&mut self, u: usize, start: usize) -> bool {
        let n = self.shape.size();
        let key = u * n + start;
        if self.memo[key] != 0 {
            return self.memo[key] >= 2;
        }
        let (k, x) = self.state[u];
        let mut verdict = 1;
        if self.shape.block_ok(start, k, x) {
            match self.tree.nodes[u].children.clone().as_slice() {
                [] => verdict = 2,
                [a] => {
                    if self.fits(*a, start) {
                        verdict = 2;
                    }
                }
                [a, b] => {
                    let ka = self.state[*a].0;
                    let kb = self.state[*b].0;
                    if self.fits(*a, start) && self.fits(*b, (start + ka) % n) {
                        verdict = 2;
                    } else if self.fits(*b, start) && self.fits(*a, (start + kb) % n) {
                        verdict = 3;
                    }
                }
                _ => unreachable!(),
            }
        }
        self.memo[key] = verdict;
        verdict >= 2
    }

    /// Leaf blocks as `(leaf, start)` after a successful `fits` from the root.
    fn collect(&self, root_start: usize) -> Vec<(usize, usize)> {
        let n = self.shape.size();
        let mut out = Vec::new();
        let mut stack = vec![(self.tree.root, root_start)];
        while let Some((u, start)) = stack.pop() {
            match self.tree.nodes[u].children.as_slice() {
                [] => out.push((u, start)),
                [a] => stack.push((*a, start)),
                [a, b] => {
                    let (first, second) = if self.memo[u * n + start] == 2 { (*a, *b) } else { (*b, *a) };
                    stack.push((first, start));
                    stack.push((second, (start + self.state[first].0) % n));
                }
                _ => unreachable!(),
            }
        }
        out
    }
}

fn solve_shape(v: &VirtualNetwork, s: &SubstrateNetwork, shape: Shape, order: &[NodeId], solver: &'static str) -> Result<SolveOutcome> {
    let dummy_capacity = 2 * v.edge_count() as u64;
    let tree = binarize(s, 0, dummy_capacity)?;
    let dp = Dp::run(&tree, shape);
    let best = dp.optimum();
    if best == INF {
        return Ok(SolveOutcome::infeasible(solver));
    }
    let total = u64::try_from(best).map_err(|_| UnivneError::Overflow)?;

    let n = shape.size();
    let mut blocks = Blocks { tree: &tree, shape, state: dp.states(), memo: vec![0; tree.nodes.len() * n] };
    let root_start = (0..n)
        .find(|&st| blocks.fits(tree.root, st))
        .ok_or_else(|| UnivneError::Internal("no block layout realizes the optimal tree state".into()))?;
    let mut placement = vec![usize::MAX; v.node_count()];
    for (leaf, start) in blocks.collect(root_start) {
        let (k, x) = blocks.state[leaf];
        let host = tree.nodes[leaf].original;
        for i in 0..k {
            placement[order[(start + i) % n]] = host;
        }
        if matches!(shape, Shape::Wheel(_)) && x == 1 {
            placement[order[n]] = host;
        }
    }
    if placement.contains(&usize::MAX) {
        return Err(UnivneError::Internal("tree reconstruction left a virtual node unplaced".into()));
    }
    let rooted = RootedOriginal::new(s.graph(), 0);
    let mapping = mapping_from_routes(v, placement, |a, b| rooted.path(a, b));
    let cost = mapping_cost(v, s, &mapping)?;
    if cost != total {
        return Err(UnivneError::Internal(format!("tree optimum {total} differs from witness cost {cost}")));
    }
    Ok(SolveOutcome::feasible(solver, mapping, cost))
}

fn require_tree(s: &SubstrateNetwork, solver: &'static str) -> Result<()> {
    if is_tree(s.graph()) {
        Ok(())
    } else {
        Err(UnivneError::TopologyMismatch { solver, expected: "a substrate tree" })
    }
}

pub fn solve_cycle_on_tree(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    require_tree(s, CYCLE_SOLVER_ID)?;
    let order = classify(v.graph()).cycle_order.ok_or(UnivneError::TopologyMismatch { solver: CYCLE_SOLVER_ID, expected: "a virtual cycle" })?;
    solve_shape(v, s, Shape::Cycle(order.len()), &order, CYCLE_SOLVER_ID)
}

pub fn solve_path_on_tree(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    require_tree(s, PATH_SOLVER_ID)?;
    let order = classify(v.graph()).path_order.ok_or(UnivneError::TopologyMismatch { solver: PATH_SOLVER_ID, expected: "a virtual path" })?;
    if order.len() == 1 {
        return Ok(cheapest_single(v, s, PATH_SOLVER_ID));
    }
    solve_shape(v, s, Shape::Path(order.len()), &order, PATH_SOLVER_ID)
}

pub fn solve_wheel_on_tree(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    require_tree(s, WHEEL_SOLVER_ID)?;
    let order = classify(v.graph()).wheel_order.ok_or(UnivneError::TopologyMismatch { solver: WHEEL_SOLVER_ID, expected: "a virtual wheel" })?;
    solve_shape(v, s, Shape::Wheel(order.len() - 1), &order, WHEEL_SOLVER_ID)
}

pub fn solve_clique_on_tree(v: &VirtualNetwork, s: &SubstrateNetwork) -> Result<SolveOutcome> {
    require_tree(s, CLIQUE_SOLVER_ID)?;
    let n = v.node_count();
    if v.edge_count() != n * (n - 1) / 2 {
        return Err(UnivneError::TopologyMismatch { solver: CLIQUE_SOLVER_ID, expected: "a virtual clique" });
    }
    let order: Vec<NodeId> = (0..n).collect();
    solve_shape(v, s, Shape::Clique(n), &order, CLIQUE_SOLVER_ID)
}

/// A single virtual node goes to the cheapest node with free capacity.
pub(crate) fn cheapest_single(v: &VirtualNetwork, s: &SubstrateNetwork, solver: &'static str) -> SolveOutcome {
    match (0..s.node_count()).filter(|&u| s.node_capacity(u) >= 1).min_by_key(|&u| (s.node_cost(u), u)) {
        Some(u) => {
            let mapping = mapping_from_routes(v, vec![u], |a, _| vec![a]);
            SolveOutcome::feasible(solver, mapping, s.node_cost(u))
        }
        None => SolveOutcome::infeasible(solver),
    }
}
