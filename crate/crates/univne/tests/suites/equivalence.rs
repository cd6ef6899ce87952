#![allow(dead_code)]

use crate::common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use univne::cycle_embed::{embed_via_hamiltonian, solve_clique_on_cycle, solve_cycle_on_cycle, solve_path_on_cycle, solve_wheel_on_cycle};
use univne::flow::solve_star_on_general;
use univne::oracle::{brute_force_decide_existence, brute_force_solve, OracleLimits};
use univne::tree_embed::{solve_clique_on_tree, solve_cycle_on_tree, solve_path_on_tree, solve_wheel_on_tree};
use univne::{classify, Result, SolveOutcome, SubstrateNetwork, Topology, UndirectedGraph, VirtualNetwork};

const SAMPLES: usize = 200;

type Solver = fn(&VirtualNetwork, &SubstrateNetwork) -> Result<SolveOutcome>;

fn check_suite(seed: u64, solver: Solver, mut make: impl FnMut(&mut ChaCha8Rng) -> (VirtualNetwork, SubstrateNetwork)) {
    let mut rng = rng(seed);
    let limits = OracleLimits::default();
    let mut feasible = 0;
    for sample in 0..SAMPLES {
        let (v, s) = make(&mut rng);
        let got = solver(&v, &s).unwrap();
        got.verify(&v, &s).unwrap();
        let want = brute_force_solve(&v, &s, &limits).unwrap();
        assert_eq!(got.cost(), want.cost(), "sample {sample}: {v:?} on {s:?}");
        feasible += usize::from(want.is_feasible());
    }
    assert!(feasible > 0, "suite never produced a feasible instance");
}

fn virtual_cycle(rng: &mut ChaCha8Rng) -> VirtualNetwork {
    let n = rng.gen_range(3..=5);
    VirtualNetwork::new(relabel(rng, &UndirectedGraph::cycle(n).unwrap()))
}

fn virtual_path(rng: &mut ChaCha8Rng) -> VirtualNetwork {
    let n = rng.gen_range(1..=5);
    VirtualNetwork::new(relabel(rng, &UndirectedGraph::path(n)))
}

fn virtual_wheel(rng: &mut ChaCha8Rng) -> VirtualNetwork {
    let outer = rng.gen_range(3..=4);
    VirtualNetwork::new(relabel(rng, &UndirectedGraph::wheel(outer).unwrap()))
}

fn virtual_clique(rng: &mut ChaCha8Rng) -> VirtualNetwork {
    VirtualNetwork::new(UndirectedGraph::complete(rng.gen_range(2..=5)))
}

fn tree_substrate(rng: &mut ChaCha8Rng) -> SubstrateNetwork {
    let n = rng.gen_range(1..=6);
    let g = random_tree(rng, n);
    weigh(rng, g)
}

fn cycle_substrate(rng: &mut ChaCha8Rng) -> SubstrateNetwork {
    let n = rng.gen_range(3..=6);
    let g = random_cycle(rng, n);
    weigh(rng, g)
}

pub fn cycle_on_tree_matches_oracle() {
    check_suite(11, solve_cycle_on_tree, |r| (virtual_cycle(r), tree_substrate(r)));
}

pub fn path_on_tree_matches_oracle() {
    check_suite(12, solve_path_on_tree, |r| (virtual_path(r), tree_substrate(r)));
}

pub fn wheel_on_tree_matches_oracle() {
    check_suite(13, solve_wheel_on_tree, |r| (virtual_wheel(r), tree_substrate(r)));
}

pub fn clique_on_tree_matches_oracle() {
    check_suite(14, solve_clique_on_tree, |r| (virtual_clique(r), tree_substrate(r)));
}

pub fn path_on_cycle_matches_oracle() {
    check_suite(21, solve_path_on_cycle, |r| (virtual_path(r), cycle_substrate(r)));
}

pub fn cycle_on_cycle_matches_oracle() {
    check_suite(22, solve_cycle_on_cycle, |r| (virtual_cycle(r), cycle_substrate(r)));
}

pub fn wheel_on_cycle_matches_oracle() {
    check_suite(23, solve_wheel_on_cycle, |r| (virtual_wheel(r), cycle_substrate(r)));
}

pub fn clique_on_cycle_matches_oracle() {
    check_suite(24, solve_clique_on_cycle, |r| (virtual_clique(r), cycle_substrate(r)));
}

pub fn star_on_general_matches_oracle() {
    check_suite(31, solve_star_on_general, |r| {
        let leaves = r.gen_range(1..=4);
        let v = VirtualNetwork::new(relabel(r, &UndirectedGraph::star(leaves)));
        let n = r.gen_range(1..=6);
        let g = random_connected(r, n, 0.4);
        (v, weigh(r, g))
    });
}

fn hamiltonian_order(s: &SubstrateNetwork) -> Vec<usize> {
    let c = classify(s.graph());
    if let Some(order) = c.cycle_order {
        order
    } else if c.set.contains(Topology::Clique) {
        (0..s.node_count()).collect()
    } else {
        c.wheel_order.unwrap()
    }
}

pub fn hamiltonian_fill_matches_oracle_feasibility() {
    let mut rng = rng(41);
    let limits = OracleLimits::default();
    let mut feasible = 0;
    for sample in 0..SAMPLES {
        let v = if rng.gen_bool(0.5) { virtual_path(&mut rng) } else { virtual_cycle(&mut rng) };
        let kind = rng.gen_range(0..3);
        let n = rng.gen_range(3..=6);
        let g = match kind {
            0 => random_cycle(&mut rng, n),
            1 => relabel(&mut rng, &UndirectedGraph::complete(n)),
            _ => relabel(&mut rng, &UndirectedGraph::wheel(n.max(4) - 1).unwrap()),
        };
        let s = weigh(&mut rng, g);
        let got = embed_via_hamiltonian(&v, &s, &hamiltonian_order(&s)).unwrap();
        got.verify(&v, &s).unwrap();
        let want = brute_force_decide_existence(&v, &s, &limits).unwrap();
        assert_eq!(got.is_feasible(), want, "sample {sample}: {v:?} on {s:?}");
        feasible += usize::from(want);
    }
    assert!(feasible > 0);
}

pub const SUITES: &[(&str, fn())] = &[
    ("cycle_on_tree_matches_oracle", cycle_on_tree_matches_oracle),
    ("path_on_tree_matches_oracle", path_on_tree_matches_oracle),
    ("wheel_on_tree_matches_oracle", wheel_on_tree_matches_oracle),
    ("clique_on_tree_matches_oracle", clique_on_tree_matches_oracle),
    ("path_on_cycle_matches_oracle", path_on_cycle_matches_oracle),
    ("cycle_on_cycle_matches_oracle", cycle_on_cycle_matches_oracle),
    ("wheel_on_cycle_matches_oracle", wheel_on_cycle_matches_oracle),
    ("clique_on_cycle_matches_oracle", clique_on_cycle_matches_oracle),
    ("star_on_general_matches_oracle", star_on_general_matches_oracle),
    ("hamiltonian_fill_matches_oracle_feasibility", hamiltonian_fill_matches_oracle_feasibility),
];
