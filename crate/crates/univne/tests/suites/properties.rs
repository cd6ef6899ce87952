#![allow(dead_code)]

use crate::common::*;
use proptest::prelude::*;
use rand::Rng;
use univne::cycle_embed::{clique_dp_transitions, elementary_path_embed, solve_clique_on_cycle_traced, solve_cycle_on_cycle, solve_path_on_cycle};
use univne::dispatch::{dispatch, solve_instance, SolveOptions};
use univne::flow::solve_star_on_general;
use univne::oracle::{brute_force_decide_existence, brute_force_solve, OracleLimits};
use univne::reductions::{bpp_to_tree_on_star, bpp_to_tree_on_tree, BppInstance};
use univne::tree_embed::{solve_cycle_on_tree, solve_path_on_tree};
use univne::{check_feasible, classify, mapping_cost, shift_virtual_indices, SubstrateNetwork, Topology, UndirectedGraph, Variant};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() }
}

fn zero_costs(s: &SubstrateNetwork) -> SubstrateNetwork {
    s.with_scaled_costs(0).unwrap()
}

fn connected(g: &UndirectedGraph) -> bool {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for x in g.neighbors(u) {
            if !seen[x] {
                seen[x] = true;
                stack.push(x);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

proptest! {
    #![proptest_config(config())]

    fn classification_agrees_with_degree_counts(seed in any::<u64>(), n in 1usize..9, p in 0.0f64..1.0) {
        let mut r = rng(seed);
        let g = random_connected(&mut r, n, p);
        prop_assert!(connected(&g));
        let m = g.edge_count();
        let deg: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
        let set = classify(&g).set;
        let tree = m + 1 == n;
        prop_assert_eq!(set.contains(Topology::Tree), tree);
        prop_assert_eq!(set.contains(Topology::Path), tree && deg.iter().all(|&d| d <= 2));
        prop_assert_eq!(set.contains(Topology::Cycle), n >= 3 && deg.iter().all(|&d| d == 2));
        prop_assert_eq!(set.contains(Topology::Star), n >= 3 && tree && deg.contains(&(n - 1)));
        prop_assert_eq!(set.contains(Topology::Clique), n >= 2 && m == n * (n - 1) / 2);
        let hubs = deg.iter().filter(|&&d| d == n - 1).count();
        let wheel_degrees = n >= 4 && hubs >= 1 && deg.iter().filter(|&&d| d == 3).count() >= n - 1;
        if set.contains(Topology::Wheel) {
            prop_assert!(wheel_degrees && m == 2 * (n - 1));
        }
        let named = [Topology::Path, Topology::Cycle, Topology::Star, Topology::Wheel, Topology::Tree, Topology::Clique];
        prop_assert_eq!(set.contains(Topology::General), !named.iter().any(|&t| set.contains(t)));
    }

    fn scaling_costs_scales_the_optimum(seed in any::<u64>(), nr in 3usize..8, ns in 2usize..8, f in 0u64..6) {
        let mut r = rng(seed);
        let g = random_tree(&mut r, ns);
        let s = weigh(&mut r, g);
        let v = virtual_of(random_cycle(&mut r, nr));
        let base = solve_cycle_on_tree(&v, &s).unwrap();
        let scaled = solve_cycle_on_tree(&v, &s.with_scaled_costs(f).unwrap()).unwrap();
        prop_assert_eq!(scaled.cost(), base.cost().map(|c| c * f));
    }

    fn shifting_a_cycle_mapping_keeps_cost_and_feasibility(seed in any::<u64>(), nr in 3usize..8, ns in 3usize..8, offset in -20i64..20) {
        let mut r = rng(seed);
        let g = random_cycle(&mut r, ns);
        let s = weigh(&mut r, g);
        let v = virtual_of(random_cycle(&mut r, nr));
        let out = solve_cycle_on_cycle(&v, &s).unwrap();
        if let Some(m) = out.mapping() {
            let shifted = shift_virtual_indices(&v, m, offset).unwrap();
            prop_assert!(check_feasible(&v, &s, &shifted).unwrap().is_feasible());
            prop_assert_eq!(mapping_cost(&v, &s, &shifted).unwrap(), out.cost().unwrap());
        }
    }

    fn more_capacity_never_hurts(seed in any::<u64>(), nr in 2usize..5, ns in 2usize..5, extra in 1u64..3) {
        let mut r = rng(seed);
        let g = random_connected(&mut r, ns, 0.4);
        let s = weigh(&mut r, g);
        let v = virtual_of(random_connected(&mut r, nr, 0.4));
        let limits = OracleLimits::default();
        let before = brute_force_solve(&v, &s, &limits).unwrap();
        let u = r.gen_range(0..ns);
        let e = r.gen_range(0..s.graph().edge_count());
        let roomier = s.with_node_capacity(u, s.node_capacity(u) + extra);
        let roomier = roomier.with_edge_capacity(e, s.edge_capacity(e) + extra).unwrap();
        let after = brute_force_solve(&v, &roomier, &limits).unwrap();
        if let Some(c) = before.cost() {
            prop_assert!(after.cost().is_some_and(|d| d <= c));
        }
    }

    fn existence_matches_zero_cost_optimisation(seed in any::<u64>(), nr in 2usize..7, ns in 2usize..7, cycle in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_tree(&mut r, ns);
        let s = weigh(&mut r, g);
        let v = if cycle && nr >= 3 { virtual_of(random_cycle(&mut r, nr)) } else { virtual_of(UndirectedGraph::path(nr)) };
        let exists = brute_force_decide_existence(&v, &s, &OracleLimits::default()).unwrap();
        let free = zero_costs(&s);
        let out = if cycle && nr >= 3 { solve_cycle_on_tree(&v, &free) } else { solve_path_on_tree(&v, &free) }.unwrap();
        prop_assert_eq!(out.is_feasible(), exists);
        if exists {
            prop_assert_eq!(out.cost(), Some(0));
        }
    }

    fn tree_witness_splits_every_edge_into_cyclic_intervals(seed in any::<u64>(), nr in 3usize..9, ns in 2usize..9) {
        let mut r = rng(seed);
        let g = random_tree(&mut r, ns);
        let s = weigh(&mut r, g);
        let v = virtual_of(random_cycle(&mut r, nr));
        let out = solve_cycle_on_tree(&v, &s).unwrap();
        let Some(m) = out.mapping() else { return Ok(()) };
        let order = classify(v.graph()).cycle_order.unwrap();
        let g = s.graph();
        for e in 0..g.edge_count() {
            let (a, b) = g.edge(e);
            let mut side = vec![false; ns];
            side[a] = true;
            let mut stack = vec![a];
            while let Some(u) = stack.pop() {
                for x in g.neighbors(u) {
                    if !side[x] && !(u == a && x == b) {
                        side[x] = true;
                        stack.push(x);
                    }
                }
            }
            let inside: Vec<bool> = order.iter().map(|&x| side[m.placement[x]]).collect();
            let changes = (0..nr).filter(|&i| inside[i] != inside[(i + 1) % nr]).count();
            prop_assert!(changes <= 2, "edge {} splits the cycle into {} runs", e, changes);
        }
    }

    fn cycle_optimum_is_invariant_under_relabelling(seed in any::<u64>(), nr in 3usize..8, ns in 3usize..8) {
        let mut r = rng(seed);
        let ring = random_cycle(&mut r, ns);
        let s = weigh(&mut r, ring.clone());
        let v = virtual_of(random_cycle(&mut r, nr));
        let base = solve_cycle_on_cycle(&v, &s).unwrap().cost();
        let mut perm: Vec<usize> = (0..ns).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut r);
        let moved = ring.relabeled(&perm).unwrap();
        let mut node_capacity = vec![0; ns];
        let mut node_cost = vec![0; ns];
        for u in 0..ns {
            node_capacity[perm[u]] = s.node_capacity(u);
            node_cost[perm[u]] = s.node_cost(u);
        }
        let (mut edge_capacity, mut edge_cost) = (Vec::new(), Vec::new());
        for &(a, b) in moved.edges() {
            let inv = |x: usize| perm.iter().position(|&y| y == x).unwrap();
            let e = ring.edge_between(inv(a), inv(b)).unwrap();
            edge_capacity.push(s.edge_capacity(e));
            edge_cost.push(s.edge_cost(e));
        }
        let s2 = SubstrateNetwork::new(moved, node_capacity, node_cost, edge_capacity, edge_cost).unwrap();
        let v2 = virtual_of(relabel(&mut r, v.graph()));
        prop_assert_eq!(solve_cycle_on_cycle(&v2, &s2).unwrap().cost(), base);
    }

    fn clique_trace_matches_ring_loads(seed in any::<u64>(), nr in 1usize..6, ns in 3usize..7) {
        let mut r = rng(seed);
        let g = random_cycle(&mut r, ns);
        let s = weigh(&mut r, g);
        let v = virtual_of(UndirectedGraph::complete(nr));
        let (out, trace) = solve_clique_on_cycle_traced(&v, &s).unwrap();
        let Some(m) = out.mapping() else {
            prop_assert!(trace.is_none());
            return Ok(());
        };
        let trace = trace.unwrap();
        let ring = classify(s.graph()).cycle_order.unwrap();
        let report = check_feasible(&v, &s, m).unwrap();
        prop_assert_eq!(trace.states.len(), ns);
        for (i, st) in trace.states.iter().enumerate() {
            let e = s.graph().edge_between(ring[i], ring[(i + 1) % ns]).unwrap();
            prop_assert_eq!((st.a + st.b + st.c) as u64, report.edges[e].load);
        }
        let last = trace.states[ns - 1];
        prop_assert_eq!((last.k, last.b, last.c), (nr, 0, 0));
        for (i, t) in trace.transitions.iter().enumerate() {
            let next = clique_dp_transitions(trace.states[i], nr);
            prop_assert!(next.contains(&(*t, trace.states[i + 1])));
        }
    }

    fn clique_transitions_conserve_edges(k in 0usize..7, a in 0usize..12, b in 0usize..12, c in 0usize..12, extra in 0usize..4) {
        let n = k + extra;
        let pairs = |x: usize| x * x.saturating_sub(1) / 2;
        let state = univne::cycle_embed::CliqueDpState { i: 0, k, a, b, c };
        let next = clique_dp_transitions(state, n);
        let bound: usize = (0..=n - k).map(|l| (k * l).min(b) + 1).map(|g| g * (c + 1)).sum();
        prop_assert!(next.len() <= bound);
        for (t, s) in next {
            let r = n - k - t.l;
            prop_assert_eq!(s.i, 1);
            prop_assert_eq!(s.k, k + t.l);
            prop_assert_eq!(s.a + t.gamma, a + k * t.l);
            prop_assert_eq!(s.b + t.gamma + t.delta, b + r * t.l);
            prop_assert_eq!(s.c + t.delta, c);
            prop_assert!(s.b <= s.k * r && s.c <= pairs(r));
        }
    }

    fn star_flow_cost_falls_as_capacity_grows(seed in any::<u64>(), leaves in 1usize..6, ns in 2usize..7, extra in 1u64..4) {
        let mut r = rng(seed);
        let g = random_connected(&mut r, ns, 0.4);
        let s = weigh(&mut r, g);
        let v = virtual_of(UndirectedGraph::star(leaves));
        let before = solve_star_on_general(&v, &s).unwrap();
        let e = r.gen_range(0..s.graph().edge_count());
        let after = solve_star_on_general(&v, &s.with_edge_capacity(e, s.edge_capacity(e) + extra).unwrap()).unwrap();
        if let Some(c) = before.cost() {
            prop_assert!(after.cost().is_some_and(|d| d <= c));
        }
    }

    fn dispatch_is_total_and_exact_on_small_cells(seed in any::<u64>(), nr in 1usize..5, ns in 1usize..5, cost in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_connected(&mut r, ns, 0.5);
        let s = weigh(&mut r, g);
        let v = virtual_of(random_connected(&mut r, nr, 0.5));
        let variant = if cost { Variant::Cost } else { Variant::Existence };
        let choice = dispatch(&v, &s, variant);
        prop_assert!(!choice.solver_id.is_empty());
        let (_, out) = solve_instance(&v, &s, variant, &SolveOptions::default()).unwrap();
        out.verify(&v, &s).unwrap();
        let oracle = brute_force_solve(&v, &s, &OracleLimits::default()).unwrap();
        prop_assert_eq!(out.is_feasible(), oracle.is_feasible());
        if cost {
            prop_assert_eq!(out.cost(), oracle.cost());
        }
    }

    fn elementary_path_walk_is_clockwise_and_simple(seed in any::<u64>(), nr in 1usize..7, ns in 3usize..8) {
        let mut r = rng(seed);
        let g = random_cycle(&mut r, ns);
        let s = weigh(&mut r, g);
        let v = virtual_of(UndirectedGraph::path(nr));
        let (us, ut) = (r.gen_range(0..ns), r.gen_range(0..ns));
        let out = elementary_path_embed(&v, &s, us, ut).unwrap();
        let Some(m) = out.mapping() else { return Ok(()) };
        let order = classify(v.graph()).path_order.unwrap();
        prop_assert_eq!(m.placement[order[0]], us);
        prop_assert_eq!(m.placement[order[nr - 1]], ut);
        let ring = classify(s.graph()).cycle_order.unwrap();
        let pos = |u: usize| ring.iter().position(|&x| x == u).unwrap();
        let arc = (pos(ut) + ns - pos(us)) % ns;
        let report = check_feasible(&v, &s, m).unwrap();
        prop_assert!(report.edges.iter().all(|u| u.load <= 1));
        prop_assert_eq!(report.edges.iter().map(|u| u.load).sum::<u64>(), arc as u64);
        let best = solve_path_on_cycle(&v, &s).unwrap();
        prop_assert!(best.cost().is_some_and(|c| c <= out.cost().unwrap()));
    }

    fn bin_packing_instances_have_matching_sizes(items in prop::collection::vec(1u64..4, 1..6), bins in 3u64..5, slack in 0u64..3) {
        let need = items.iter().sum::<u64>().div_ceil(bins);
        let size = need.max(*items.iter().max().unwrap()) + slack;
        let b = BppInstance { items, bins, size };
        let expected = 1 + 2 * bins * size;
        let star = bpp_to_tree_on_star(&b).unwrap();
        let tree = bpp_to_tree_on_tree(&b).unwrap();
        prop_assert_eq!(star.virtual_network.node_count() as u64, expected);
        prop_assert_eq!(star.substrate.total_node_capacity(), expected);
        prop_assert_eq!(tree.virtual_network.node_count() as u64, expected);
        prop_assert_eq!(tree.substrate.node_count() as u64, expected);
        prop_assert!(classify(star.virtual_network.graph()).set.contains(Topology::Tree));
        prop_assert_eq!(star.virtual_network, tree.virtual_network);
    }
}

/// Public entry points for the properties above.
pub mod cases {
    pub fn classification_agrees_with_degree_counts() {
        super::classification_agrees_with_degree_counts();
    }
    pub fn scaling_costs_scales_the_optimum() {
        super::scaling_costs_scales_the_optimum();
    }
    pub fn shifting_a_cycle_mapping_keeps_cost_and_feasibility() {
        super::shifting_a_cycle_mapping_keeps_cost_and_feasibility();
    }
    pub fn more_capacity_never_hurts() {
        super::more_capacity_never_hurts();
    }
    pub fn existence_matches_zero_cost_optimisation() {
        super::existence_matches_zero_cost_optimisation();
    }
    pub fn tree_witness_splits_every_edge_into_cyclic_intervals() {
        super::tree_witness_splits_every_edge_into_cyclic_intervals();
    }
    pub fn cycle_optimum_is_invariant_under_relabelling() {
        super::cycle_optimum_is_invariant_under_relabelling();
    }
    pub fn clique_trace_matches_ring_loads() {
        super::clique_trace_matches_ring_loads();
    }
    pub fn clique_transitions_conserve_edges() {
        super::clique_transitions_conserve_edges();
    }
    pub fn star_flow_cost_falls_as_capacity_grows() {
        super::star_flow_cost_falls_as_capacity_grows();
    }
    pub fn dispatch_is_total_and_exact_on_small_cells() {
        super::dispatch_is_total_and_exact_on_small_cells();
    }
    pub fn elementary_path_walk_is_clockwise_and_simple() {
        super::elementary_path_walk_is_clockwise_and_simple();
    }
    pub fn bin_packing_instances_have_matching_sizes() {
        super::bin_packing_instances_have_matching_sizes();
    }
}

pub const SUITES: &[(&str, fn())] = &[
    ("classification_agrees_with_degree_counts", cases::classification_agrees_with_degree_counts),
    ("scaling_costs_scales_the_optimum", cases::scaling_costs_scales_the_optimum),
    ("shifting_a_cycle_mapping_keeps_cost_and_feasibility", cases::shifting_a_cycle_mapping_keeps_cost_and_feasibility),
    ("more_capacity_never_hurts", cases::more_capacity_never_hurts),
    ("existence_matches_zero_cost_optimisation", cases::existence_matches_zero_cost_optimisation),
    ("tree_witness_splits_every_edge_into_cyclic_intervals", cases::tree_witness_splits_every_edge_into_cyclic_intervals),
    ("cycle_optimum_is_invariant_under_relabelling", cases::cycle_optimum_is_invariant_under_relabelling),
    ("clique_trace_matches_ring_loads", cases::clique_trace_matches_ring_loads),
    ("clique_transitions_conserve_edges", cases::clique_transitions_conserve_edges),
    ("star_flow_cost_falls_as_capacity_grows", cases::star_flow_cost_falls_as_capacity_grows),
    ("dispatch_is_total_and_exact_on_small_cells", cases::dispatch_is_total_and_exact_on_small_cells),
    ("elementary_path_walk_is_clockwise_and_simple", cases::elementary_path_walk_is_clockwise_and_simple),
    ("bin_packing_instances_have_matching_sizes", cases::bin_packing_instances_have_matching_sizes),
];
