#![allow(dead_code)]

use crate::common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use univne::oracle::{brute_force_decide_existence, brute_force_solve, OracleLimits};
use univne::reductions::*;
use univne::{NodeId, UndirectedGraph, Variant};

fn generated_answer(g: &GeneratedInstance) -> bool {
    let limits = OracleLimits::default();
    match g.variant {
        Variant::Existence => brute_force_decide_existence(&g.virtual_network, &g.substrate, &limits).unwrap(),
        Variant::Cost => {
            let budget = g.budget.expect("cost instances carry a budget");
            brute_force_solve(&g.virtual_network, &g.substrate, &limits).unwrap().cost().is_some_and(|c| c <= budget)
        }
    }
}

/// Calls `f` on every permutation of `0..n`.
fn permutations(n: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if prefix.len() == used.len() {
            return f(prefix);
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                let stop = rec(prefix, used, f);
                prefix.pop();
                used[x] = false;
                if stop {
                    return true;
                }
            }
        }
        false
    }
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], f)
}

fn has_hamiltonian_cycle(n: usize, edges: &[(NodeId, NodeId)]) -> bool {
    let g = UndirectedGraph::new(n, edges.iter().copied()).unwrap();
    permutations(n, &mut |p| p[0] == 0 && (0..n).all(|i| g.edge_between(p[i], p[(i + 1) % n]).is_some()))
}

fn random_subcubic(rng: &mut ChaCha8Rng, n: usize) -> Vec<(NodeId, NodeId)> {
    loop {
        let g = random_connected(rng, n, 0.5);
        if (0..n).all(|u| g.degree(u) <= 3) {
            return g.edges().to_vec();
        }
    }
}

fn check(name: &str, cases: usize, seed: u64, mut make: impl FnMut(&mut ChaCha8Rng) -> Option<(bool, GeneratedInstance)>) {
    let mut rng = rng(seed);
    let (mut yes, mut no) = (0, 0);
    let mut done = 0;
    while done < cases {
        let Some((source, generated)) = make(&mut rng) else { continue };
        let target = generated_answer(&generated);
        assert_eq!(source, target, "{name}: case {done}");
        if source {
            yes += 1;
        } else {
            no += 1;
        }
        done += 1;
    }
    assert!(yes > 0 && no > 0, "{name}: {yes} yes / {no} no cases");
}

pub fn hamiltonian_cycle_to_cycle() {
    check("hgp-cycle", 60, 1, |rng| {
        let n = rng.gen_range(3..=6);
        let edges = random_subcubic(rng, n);
        let h = HgpInstance { nodes: n, edges: edges.clone() };
        Some((has_hamiltonian_cycle(n, &edges), hgp_to_cycle(&h).unwrap()))
    });
}

pub fn hamiltonian_cycle_to_wheel() {
    check("hgp-wheel", 40, 2, |rng| {
        let n = rng.gen_range(4..=6);
        let edges = random_subcubic(rng, n);
        let h = HgpInstance { nodes: n, edges: edges.clone() };
        Some((has_hamiltonian_cycle(n, &edges), hgp_to_wheel(&h).unwrap()))
    });
}

fn simple_paths(g: &UndirectedGraph, a: NodeId, b: NodeId) -> Vec<Vec<usize>> {
    fn dfs(g: &UndirectedGraph, u: NodeId, b: NodeId, seen: &mut [bool], edges: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if u == b {
            out.push(edges.clone());
            return;
        }
        for &(x, e) in g.adjacency(u) {
            if !seen[x] {
                seen[x] = true;
                edges.push(e);
                dfs(g, x, b, seen, edges, out);
                edges.pop();
                seen[x] = false;
            }
        }
    }
    let mut seen = vec![false; g.node_count()];
    seen[a] = true;
    let mut out = Vec::new();
    dfs(g, a, b, &mut seen, &mut Vec::new(), &mut out);
    out
}

fn has_disjoint_paths(e: &EdppInstance) -> bool {
    let g = UndirectedGraph::new(e.nodes, e.edges.iter().copied()).unwrap();
    let options: Vec<_> = e.pairs.iter().map(|&(s, t)| simple_paths(&g, s, t)).collect();
    fn rec(i: usize, options: &[Vec<Vec<usize>>], used: &mut [bool]) -> bool {
        if i == options.len() {
            return true;
        }
        for p in &options[i] {
            if p.iter().all(|&e| !used[e]) {
                p.iter().for_each(|&e| used[e] = true);
                let ok = rec(i + 1, options, used);
                p.iter().for_each(|&e| used[e] = false);
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(0, &options, &mut vec![false; g.edge_count()])
}

fn random_edpp(rng: &mut ChaCha8Rng, max_nodes: usize, max_pairs: usize) -> EdppInstance {
    let n = rng.gen_range(2..=max_nodes);
    let g = random_connected(rng, n, 0.3);
    let k = rng.gen_range(1..=max_pairs.min(n / 2));
    let mut labels: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(labels.as_mut_slice(), rng);
    let pairs = (0..k).map(|l| (labels[2 * l], labels[2 * l + 1])).collect();
    EdppInstance { nodes: n, edges: g.edges().to_vec(), pairs }
}

pub fn disjoint_paths_to_clique() {
    check("edpp-clique", 60, 3, |rng| {
        let e = random_edpp(rng, 6, 3);
        Some((has_disjoint_paths(&e), edpp_to_clique(&e).unwrap()))
    });
}

pub fn disjoint_paths_to_clique_on_clique() {
    check("edpp-clique-on-clique", 40, 4, |rng| {
        let e = random_edpp(rng, 4, 2);
        Some((has_disjoint_paths(&e), edpp_to_clique_on_clique(&e).unwrap()))
    });
}

fn random_tsp(rng: &mut ChaCha8Rng, n: usize) -> TspInstance {
    let mut d = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.gen_range(1..=4);
            d[i][j] = x;
            d[j][i] = x;
        }
    }
    TspInstance { distances: d, bound: 0 }
}

fn best_tour(t: &TspInstance, closed: bool) -> u64 {
    let n = t.distances.len();
    let mut best = u64::MAX;
    permutations(n, &mut |p| {
        let hops = if closed { n } else { n - 1 };
        let len = (0..hops).map(|i| t.distances[p[i]][p[(i + 1) % n]]).sum();
        best = best.min(len);
        false
    });
    best
}

fn tsp_case(rng: &mut ChaCha8Rng, sizes: std::ops::RangeInclusive<usize>, closed: bool) -> TspInstance {
    let n = rng.gen_range(sizes);
    let mut t = random_tsp(rng, n);
    let opt = best_tour(&t, closed);
    t.bound = (opt + rng.gen_range(0..=1)).saturating_sub(rng.gen_range(0..=1)).max(1);
    t
}

pub fn travelling_salesman_to_cycle() {
    check("tsp-cycle", 40, 5, |rng| {
        let t = tsp_case(rng, 3..=5, true);
        Some((best_tour(&t, true) <= t.bound, tsp_to_cycle(&t).unwrap()))
    });
}

pub fn travelling_salesman_to_path() {
    check("tsp-path", 40, 6, |rng| {
        let t = tsp_case(rng, 2..=5, false);
        Some((best_tour(&t, false) <= t.bound, tsp_to_path(&t).unwrap()))
    });
}

pub fn travelling_salesman_to_wheel() {
    check("tsp-wheel", 30, 7, |rng| {
        let t = tsp_case(rng, 3..=4, true);
        Some((best_tour(&t, true) <= t.bound, tsp_to_wheel(&t).unwrap()))
    });
}

fn packs(b: &BppInstance) -> bool {
    fn rec(i: usize, items: &[u64], load: &mut [u64], size: u64) -> bool {
        if i == items.len() {
            return true;
        }
        for bin in 0..load.len() {
            if load[bin] + items[i] <= size {
                load[bin] += items[i];
                let ok = rec(i + 1, items, load, size);
                load[bin] -= items[i];
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(0, &b.items, &mut vec![0; b.bins as usize], b.size)
}

fn random_bpp(rng: &mut ChaCha8Rng, size: u64) -> Option<BppInstance> {
    let count = rng.gen_range(1..=4);
    let items: Vec<u64> = (0..count).map(|_| rng.gen_range(1..=size + 1)).collect();
    let b = BppInstance { items, bins: 3, size };
    (b.items.iter().sum::<u64>() <= b.bins * b.size).then_some(b)
}

pub fn bin_packing_to_tree_on_star() {
    check("bpp-star", 24, 8, |rng| {
        let size = rng.gen_range(1..=2);
        let b = random_bpp(rng, size)?;
        let g = bpp_to_tree_on_star(&b).unwrap();
        let padded = b.items.len() as u64 + (b.bins * b.size - b.items.iter().sum::<u64>());
        let total: u64 = b.bins * b.size;
        assert_eq!(g.virtual_network.node_count() as u64, 1 + (total + padded) + (b.bins * b.size - padded));
        Some((packs(&b), g))
    });
}

pub fn bin_packing_to_tree_on_tree() {
    check("bpp-tree", 30, 9, |rng| {
        let b = random_bpp(rng, 1)?;
        let g = bpp_to_tree_on_tree(&b).unwrap();
        assert_eq!(g.virtual_network.node_count(), g.substrate.node_count());
        Some((packs(&b), g))
    });
}

fn min_cut_arrangement(n: usize, edges: &[(NodeId, NodeId)]) -> u64 {
    let mut best = u64::MAX;
    permutations(n, &mut |p| {
        let mut at = vec![0; n];
        for (i, &x) in p.iter().enumerate() {
            at[x] = i;
        }
        let worst = (0..n.saturating_sub(1))
            .map(|cut| edges.iter().filter(|&&(a, b)| (at[a] <= cut) != (at[b] <= cut)).count() as u64)
            .max()
            .unwrap_or(0);
        best = best.min(worst);
        false
    });
    best
}

pub fn cut_arrangement_to_path() {
    check("mcla-path", 60, 10, |rng| {
        let n = rng.gen_range(2..=6);
        let g = random_connected(rng, n, 0.4);
        let edges = g.edges().to_vec();
        let opt = min_cut_arrangement(n, &edges);
        let bound = (opt + rng.gen_range(0..=1)).saturating_sub(rng.gen_range(0..=1)).max(1);
        let m = MclaInstance { nodes: n, edges, bound };
        Some((opt <= bound, mcla_to_general_on_path(&m).unwrap()))
    });
}

pub const SUITES: &[(&str, fn())] = &[
    ("hamiltonian_cycle_to_cycle", hamiltonian_cycle_to_cycle),
    ("hamiltonian_cycle_to_wheel", hamiltonian_cycle_to_wheel),
    ("disjoint_paths_to_clique", disjoint_paths_to_clique),
    ("disjoint_paths_to_clique_on_clique", disjoint_paths_to_clique_on_clique),
    ("travelling_salesman_to_cycle", travelling_salesman_to_cycle),
    ("travelling_salesman_to_path", travelling_salesman_to_path),
    ("travelling_salesman_to_wheel", travelling_salesman_to_wheel),
    ("bin_packing_to_tree_on_star", bin_packing_to_tree_on_star),
    ("bin_packing_to_tree_on_tree", bin_packing_to_tree_on_tree),
    ("cut_arrangement_to_path", cut_arrangement_to_path),
];
