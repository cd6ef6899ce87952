//! Scaling runs on seeded random instances.

use std::time::Instant;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use univne::cycle_embed::solve_clique_on_cycle;
use univne::flow::solve_star_on_general;
use univne::tree_embed::{solve_cycle_on_tree, solve_path_on_tree};
use univne::{Result, SolveOutcome, SubstrateNetwork, UndirectedGraph, VirtualNetwork};

use crate::Failure;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    /// Virtual cycles on random trees, sweeping n_r then n_s.
    CycleOnTree,
    /// Virtual paths on random trees, sweeping n_r then n_s.
    PathOnTree,
    /// Virtual cliques on a cycle of 50 nodes.
    CliqueOnCycle,
    /// Virtual stars on random connected graphs.
    StarFlow,
}

type Solver = fn(&VirtualNetwork, &SubstrateNetwork) -> Result<SolveOutcome>;

pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> UndirectedGraph {
    let edges: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    UndirectedGraph::new(n, edges).expect("random tree is simple")
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> UndirectedGraph {
    let mut edges: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let e = (a.min(b), a.max(b));
        if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
            edges.push(e);
        }
    }
    UndirectedGraph::new(n, edges).expect("generated graph is simple")
}

/// Random costs 0..=5, node capacity enough to host the virtual network
/// twice over, edge capacity large enough to never bind.
fn network(rng: &mut ChaCha8Rng, g: UndirectedGraph, n_r: usize) -> SubstrateNetwork {
    let n = g.node_count();
    let m = g.edge_count();
    let node_cap = (2 * n_r).div_ceil(n).max(1) as u64;
    let edge_cap = (n_r * n_r) as u64;
    SubstrateNetwork::new(
        g,
        vec![node_cap; n],
        (0..n).map(|_| rng.gen_range(0..=5)).collect(),
        vec![edge_cap; m],
        (0..m).map(|_| rng.gen_range(0..=5)).collect(),
    )
    .expect("generated network is valid")
}

fn time(solver: Solver, v: &VirtualNetwork, s: &SubstrateNetwork, reps: usize) -> std::result::Result<u128, Failure> {
    let mut best = u128::MAX;
    for _ in 0..reps {
        let start = Instant::now();
        solver(v, s)?;
        best = best.min(start.elapsed().as_nanos());
    }
    Ok(best)
}

pub fn run_suite(suite: Suite, seed: u64, reps: usize) -> std::result::Result<String, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<(usize, usize, &'static str, u128)> = Vec::new();
    match suite {
        Suite::CycleOnTree | Suite::PathOnTree => {
            let (solver, name, virt): (Solver, &'static str, fn(usize) -> UndirectedGraph) = match suite {
                Suite::CycleOnTree => (solve_cycle_on_tree, univne::tree_embed::CYCLE_SOLVER_ID, |n| UndirectedGraph::cycle(n).expect("n >= 3")),
                _ => (solve_path_on_tree, univne::tree_embed::PATH_SOLVER_ID, UndirectedGraph::path),
            };
            let mut points: Vec<(usize, usize)> = [8, 16, 32, 64].iter().map(|&n_r| (n_r, 32)).collect();
            points.extend([16, 32, 64, 128].iter().map(|&n_s| (16, n_s)));
            points.sort_unstable();
            points.dedup();
            for (n_r, n_s) in points {
                let v = VirtualNetwork::new(virt(n_r));
                let g = random_tree(&mut rng, n_s);
                let s = network(&mut rng, g, n_r);
                rows.push((n_r, n_s, name, time(solver, &v, &s, reps)?));
            }
        }
        Suite::CliqueOnCycle => {
            for n_r in 2..=8 {
                let v = VirtualNetwork::new(UndirectedGraph::complete(n_r));
                let s = network(&mut rng, UndirectedGraph::cycle(50).expect("n >= 3"), n_r);
                rows.push((n_r, 50, univne::cycle_embed::CLIQUE_SOLVER_ID, time(solve_clique_on_cycle, &v, &s, reps)?));
            }
        }
        Suite::StarFlow => {
            for (n_r, n_s) in [(4, 16), (8, 16), (16, 16), (8, 32), (8, 64)] {
                let v = VirtualNetwork::new(UndirectedGraph::star(n_r - 1));
                let g = random_connected(&mut rng, n_s, n_s);
                let s = network(&mut rng, g, n_r);
                rows.push((n_r, n_s, univne::flow::STAR_SOLVER_ID, time(solve_star_on_general, &v, &s, reps)?));
            }
        }
    }
    let mut out = String::from("n_r,n_s,solver,ns\n");
    for (n_r, n_s, solver, ns) in rows {
        out.push_str(&format!("{n_r},{n_s},{solver},{ns}\n"));
    }
    Ok(out)
}
