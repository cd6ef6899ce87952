//! Solver selection by topology cell and the oracle size guard.

use std::fmt;

use crate::cycle_embed;
use crate::error::{Result, UnivneError};
use crate::flow;
use crate::netgraph::{classify, Classification, SolveOutcome, SubstrateNetwork, Topology, Variant, VirtualNetwork};
use crate::oracle::{self, OracleLimits};
use crate::tree_embed;

/// Largest `n_s^n_r` the oracle fallback accepts without `force_oracle`.
pub const ORACLE_GUARD: u64 = 10_000_000;

/// Known complexity of a topology cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Polynomial,
    NpComplete,
    Open,
}

impl CellStatus {
    pub fn describe(self) -> &'static str {
        match self {
            CellStatus::Polynomial => "polynomial",
            CellStatus::NpComplete => "NP-complete",
            CellStatus::Open => "open problem",
        }
    }
}

/// Row and column of the complexity table an instance falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub variant: Variant,
    pub virtual_class: Topology,
    pub substrate_class: Topology,
}

fn letter(t: Topology) -> char {
    match t {
        Topology::Path => 'P',
        Topology::Cycle => 'C',
        Topology::Star => 'S',
        Topology::Wheel => 'W',
        Topology::Tree => 'T',
        Topology::Clique => 'K',
        Topology::General => 'G',
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-<{}_r -> {}_s>", self.variant.letter(), letter(self.virtual_class), letter(self.substrate_class))
    }
}

impl Cell {
    /// Table entry for this cell. Wheel substrates fall in the general column.
    pub fn status(&self) -> CellStatus {
        use CellStatus::*;
        use Topology::*;
        let e = self.variant == Variant::Existence;
        match (self.virtual_class, self.substrate_class) {
            (Star, _) => Polynomial,
            (Tree, Star) | (Tree, Tree) => NpComplete,
            (Tree, Path) | (Tree, Cycle) => Open,
            (Tree, Clique) => {
                if e {
                    Open
                } else {
                    NpComplete
                }
            }
            (Path | Cycle, Clique) => {
                if e {
                    Polynomial
                } else {
                    NpComplete
                }
            }
            (Wheel, Clique) => {
                if e {
                    Open
                } else {
                    NpComplete
                }
            }
            (Clique, Clique) => NpComplete,
            (General, Cycle) => Open,
            (General, _) => NpComplete,
            (_, General) => NpComplete,
            _ => Polynomial,
        }
    }
}

fn virtual_row(c: &Classification) -> Topology {
    [Topology::Star, Topology::Path, Topology::Cycle, Topology::Wheel, Topology::Clique, Topology::Tree]
        .into_iter()
        .find(|&t| c.set.contains(t))
        .unwrap_or(Topology::General)
}

fn substrate_column(c: &Classification) -> Topology {
    [Topology::Path, Topology::Star, Topology::Tree, Topology::Cycle, Topology::Clique]
        .into_iter()
        .find(|&t| c.set.contains(t))
        .unwrap_or(Topology::General)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    CycleOnTree,
    PathOnTree,
    WheelOnTree,
    CliqueOnTree,
    PathOnCycle,
    CycleOnCycle,
    WheelOnCycle,
    CliqueOnCycle,
    Star,
    Hamiltonian,
    Oracle,
}

/// Selected solver together with the cell that selected it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverChoice {
    pub solver_id: &'static str,
    pub cell: Cell,
    pub rationale: String,
    /// Set when no polynomial solver applies and the oracle is used.
    pub fallback: bool,
    route: Route,
}

/// Picks the solver for an instance. Total: every input yields a choice.
pub fn dispatch(v: &VirtualNetwork, s: &SubstrateNetwork, variant: Variant) -> SolverChoice {
    let vc = classify(v.graph());
    let sc = classify(s.graph());
    let cell = Cell { variant, virtual_class: virtual_row(&vc), substrate_class: substrate_column(&sc) };
    let has = |c: &Classification, t| c.set.contains(t);

    let mut chosen: Option<(Route, &'static str, &str)> = None;
    if has(&sc, Topology::Tree) || has(&sc, Topology::Path) {
        chosen = [
            (Topology::Cycle, Route::CycleOnTree, tree_embed::CYCLE_SOLVER_ID),
            (Topology::Path, Route::PathOnTree, tree_embed::PATH_SOLVER_ID),
            (Topology::Wheel, Route::WheelOnTree, tree_embed::WHEEL_SOLVER_ID),
            (Topology::Clique, Route::CliqueOnTree, tree_embed::CLIQUE_SOLVER_ID),
        ]
        .into_iter()
        .find(|&(t, _, _)| has(&vc, t))
        .map(|(_, r, id)| (r, id, "tree substrate dynamic program"));
    }
    if chosen.is_none() && has(&sc, Topology::Cycle) {
        chosen = [
            (Topology::Path, Route::PathOnCycle, cycle_embed::PATH_SOLVER_ID),
            (Topology::Cycle, Route::CycleOnCycle, cycle_embed::CYCLE_SOLVER_ID),
            (Topology::Wheel, Route::WheelOnCycle, cycle_embed::WHEEL_SOLVER_ID),
            (Topology::Clique, Route::CliqueOnCycle, cycle_embed::CLIQUE_SOLVER_ID),
        ]
        .into_iter()
        .find(|&(t, _, _)| has(&vc, t))
        .map(|(_, r, id)| (r, id, "cycle substrate solver"));
    }
    if chosen.is_none()
        && variant == Variant::Existence
        && (has(&vc, Topology::Path) || has(&vc, Topology::Cycle))
        && (has(&sc, Topology::Wheel) || (has(&sc, Topology::Clique) && s.node_count() >= 3))
    {
        chosen = Some((Route::Hamiltonian, cycle_embed::HAMILTONIAN_SOLVER_ID, "existence on a Hamiltonian substrate"));
    }
    if chosen.is_none() && flow::star_parts(v).is_some() {
        chosen = Some((Route::Star, flow::STAR_SOLVER_ID, "star virtual network by min-cost flow"));
    }
    match chosen {
        Some((route, solver_id, why)) => SolverChoice { solver_id, cell, rationale: format!("{cell}: {why}"), fallback: false, route },
        None => SolverChoice {
            solver_id: oracle::SOLVER_ID,
            cell,
            rationale: format!("{cell}: {}, exhaustive search", cell.status().describe()),
            fallback: true,
            route: Route::Oracle,
        },
    }
}

/// Number of placements the oracle would enumerate, saturating.
pub fn placement_count(v: &VirtualNetwork, s: &SubstrateNetwork) -> u64 {
    let n_r = u32::try_from(v.node_count()).unwrap_or(u32::MAX);
    (s.node_count() as u64).saturating_pow(n_r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct SolveOptions {
    /// Run the oracle even when the instance exceeds the size guard.
    pub force_oracle: bool,
    pub oracle_limits: OracleLimits,
}


fn hamiltonian_order(s: &SubstrateNetwork) -> Result<Vec<usize>> {
    let c = classify(s.graph());
    if let Some(order) = c.cycle_order {
        return Ok(order);
    }
    if c.set.contains(Topology::Clique) {
        return Ok((0..s.node_count()).collect());
    }
    c.wheel_order.ok_or_else(|| UnivneError::Internal("substrate has no Hamiltonian witness".into()))
}

/// Runs the solver chosen by [`dispatch`]. The outcome is re-verified before
/// being returned.
pub fn solve_with(v: &VirtualNetwork, s: &SubstrateNetwork, choice: &SolverChoice, opts: &SolveOptions) -> Result<SolveOutcome> {
    let outcome = match choice.route {
        Route::CycleOnTree => tree_embed::solve_cycle_on_tree(v, s)?,
        Route::PathOnTree => tree_embed::solve_path_on_tree(v, s)?,
        Route::WheelOnTree => tree_embed::solve_wheel_on_tree(v, s)?,
        Route::CliqueOnTree => tree_embed::solve_clique_on_tree(v, s)?,
        Route::PathOnCycle => cycle_embed::solve_path_on_cycle(v, s)?,
        Route::CycleOnCycle => cycle_embed::solve_cycle_on_cycle(v, s)?,
        Route::WheelOnCycle => cycle_embed::solve_wheel_on_cycle(v, s)?,
        Route::CliqueOnCycle => cycle_embed::solve_clique_on_cycle(v, s)?,
        Route::Star => flow::solve_star_on_general(v, s)?,
        Route::Hamiltonian => cycle_embed::embed_via_hamiltonian(v, s, &hamiltonian_order(s)?)?,
        Route::Oracle => {
            let size = placement_count(v, s);
            if size > ORACLE_GUARD && !opts.force_oracle {
                return Err(UnivneError::SizeGuard(format!(
                    "{} {}: oracle limit exceeded ({}^{} placements > {ORACLE_GUARD})",
                    choice.cell,
                    choice.cell.status().describe(),
                    s.node_count(),
                    v.node_count()
                )));
            }
            let mut limits = opts.oracle_limits;
            if opts.force_oracle {
                limits.max_placements = limits.max_placements.max(size);
            }
            match choice.cell.variant {
                Variant::Existence => oracle::brute_force_find_feasible(v, s, &limits)?,
                Variant::Cost => oracle::brute_force_solve(v, s, &limits)?,
            }
        }
    };
    outcome.verify(v, s)?;
    Ok(outcome)
}

/// Dispatches and solves in one call.
pub fn solve_instance(v: &VirtualNetwork, s: &SubstrateNetwork, variant: Variant, opts: &SolveOptions) -> Result<(SolverChoice, SolveOutcome)> {
    let choice = dispatch(v, s, variant);
    let outcome = solve_with(v, s, &choice, opts)?;
    Ok((choice, outcome))
}
