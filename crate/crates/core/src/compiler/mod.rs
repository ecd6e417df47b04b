//! Synthesis of refocussing sign matrices.
//!
//! A spin's chemical shift is refocused when its row is balanced, and the
//! coupling between two spins is refocused when their rows are orthogonal.
//! The compiler colors the coupling graph, gives each color one row of a
//! normalized Hadamard matrix, and lets every spin inherit its color's row.
//! Uncoupled spins may share a row; spins whose interaction must survive get
//! a dedicated color.

mod assign;
mod report;
mod sign_matrix;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use report::{efficiency_report, ComparisonReport, ConventionalCounts, SequenceCounts};
pub use sign_matrix::SignMatrix;
pub use verify::{
    verify_combinatorial, CombinatorialReport, CouplingEntry, InteractionStatus, ShiftEntry,
};

use crate::error::{Error, Result};
use crate::graphmodel::{exact_coloring, greedy_coloring, Coloring, CouplingGraph};
use crate::hadamard::{hadamard_of_order, smallest_admissible_order, MAX_ADMISSIBLE_ORDER};

/// Largest spin count accepted by [`conventional_nested`].
pub const MAX_CONVENTIONAL_SPINS: usize = 16;

pub const DEFAULT_SEARCH_LIMIT: u64 = 100_000;

/// The effective Hamiltonian a sequence should leave behind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    /// Keep the chemical shift of one spin; refocus everything else.
    RetainShift(usize),
    /// Keep one J-coupling; refocus everything else.
    RetainCoupling(usize, usize),
    RefocusAll,
}

impl TargetSpec {
    /// Checks that referenced spins exist and a retained coupling is an edge.
    pub fn validate(&self, g: &CouplingGraph) -> Result<()> {
        let n = g.spin_count();
        match *self {
            TargetSpec::RetainShift(s) if s >= n => Err(Error::InvalidTarget(format!(
                "spin #{s} does not exist ({n} spins)"
            ))),
            TargetSpec::RetainCoupling(a, b) if a >= n || b >= n => Err(Error::InvalidTarget(
                format!("coupling ({a}, {b}) references a missing spin ({n} spins)"),
            )),
            TargetSpec::RetainCoupling(a, b) if a == b => Err(Error::InvalidTarget(format!(
                "coupling needs two distinct spins, got `{}` twice",
                g.name(a)
            ))),
            TargetSpec::RetainCoupling(a, b) if !g.has_edge(a, b) => Err(Error::InvalidTarget(
                format!("spins `{}` and `{}` are not coupled", g.name(a), g.name(b)),
            )),
            _ => Ok(()),
        }
    }

    /// Whether the shift of `spin` should survive the sequence.
    pub fn retains_shift(&self, spin: usize) -> bool {
        matches!(*self, TargetSpec::RetainShift(s) if s == spin)
    }

    /// Whether the coupling `(a, b)` should survive the sequence.
    pub fn retains_coupling(&self, a: usize, b: usize) -> bool {
        matches!(*self, TargetSpec::RetainCoupling(x, y)
            if (x, y) == (a, b) || (y, x) == (a, b))
    }

    /// Human-readable form using the graph's spin names.
    pub fn describe(&self, g: &CouplingGraph) -> String {
        match *self {
            TargetSpec::RetainShift(s) => format!("retain shift {}", g.name(s)),
            TargetSpec::RetainCoupling(a, b) => {
                format!("retain coupling {}:{}", g.name(a), g.name(b))
            }
            TargetSpec::RefocusAll => "refocus all".to_string(),
        }
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::RetainShift(s) => write!(f, "retain-shift({s})"),
            TargetSpec::RetainCoupling(a, b) => write!(f, "retain-coupling({a},{b})"),
            TargetSpec::RefocusAll => f.write_str("refocus-all"),
        }
    }
}

/// What the row assignment minimizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Internal pulses summed over all spins.
    #[default]
    TotalPulses,
    /// Largest number of spins pulsed at one boundary.
    MaxSimultaneous,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColoringMethod {
    #[default]
    Greedy,
    /// Minimum coloring by backtracking; graphs of at most 12 spins.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub objective: Objective,
    /// Exhaustive row search runs only when the number of candidate
    /// assignments is at most this.
    pub exhaustive_row_search_limit: u64,
    pub coloring: ColoringMethod,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            objective: Objective::TotalPulses,
            exhaustive_row_search_limit: DEFAULT_SEARCH_LIMIT,
            coloring: ColoringMethod::Greedy,
        }
    }
}

impl CompileOptions {
    fn validate(&self) -> Result<()> {
        if self.exhaustive_row_search_limit == 0 {
            return Err(Error::InvalidParameter(
                "exhaustive row search limit must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// A compiled sequence plus the bookkeeping that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compilation {
    pub matrix: SignMatrix,
    pub coloring: Coloring,
    pub hadamard_order: usize,
    /// Hadamard row used by each color.
    pub row_of_color: Vec<usize>,
    /// False when the greedy fallback chose the rows.
    pub exhaustive: bool,
    /// Objective value of the chosen assignment.
    pub cost: usize,
}

impl Compilation {
    /// Hadamard row used by each spin.
    pub fn row_of_spin(&self, spin: usize) -> usize {
        self.row_of_color[self.coloring.color_of(spin)]
    }
}

/// The recursively nested baseline on `n_spins` spins: `2^(n-1)` intervals,
/// row 0 constant, row `i` flipping at the odd multiples of `C / 2^i`.
pub fn conventional_nested(n_spins: usize) -> Result<SignMatrix> {
    if n_spins == 0 || n_spins > MAX_CONVENTIONAL_SPINS {
        return Err(Error::SizeLimit {
            what: "spin count for the nested sequence",
            value: n_spins,
            max: MAX_CONVENTIONAL_SPINS,
        });
    }
    let cols = 1usize << (n_spins - 1);
    let boundaries: Vec<Vec<usize>> = (0..n_spins)
        .map(|i| {
            if i == 0 {
                return Vec::new();
            }
            let step = cols >> i;
            (0..1usize << (i - 1)).map(|j| (2 * j + 1) * step).collect()
        })
        .collect();
    SignMatrix::from_boundaries(cols, &boundaries)
}

/// Compiles a refocussing sign matrix for `target` on graph `g`.
pub fn compile(g: &CouplingGraph, target: TargetSpec, opts: &CompileOptions) -> Result<SignMatrix> {
    compile_with_details(g, target, opts).map(|c| c.matrix)
}

pub fn compile_with_details(
    g: &CouplingGraph,
    target: TargetSpec,
    opts: &CompileOptions,
) -> Result<Compilation> {
    opts.validate()?;
    target.validate(g)?;

    let (graph, pinned) = match target {
        TargetSpec::RetainShift(s) => (g.clone(), vec![vec![s]]),
        TargetSpec::RetainCoupling(a, b) => (g.without_edge(a, b), vec![vec![a.min(b), a.max(b)]]),
        TargetSpec::RefocusAll => (g.clone(), Vec::new()),
    };
    let coloring = match opts.coloring {
        ColoringMethod::Greedy => greedy_coloring(&graph, &pinned)?,
        ColoringMethod::Exact => exact_coloring(&graph, &pinned)?,
    };
    let colors = coloring.color_count();

    // Color 0 keeps the all-ones row when a shift is retained; every other
    // color needs its own balanced row.
    let keeps_ones = matches!(target, TargetSpec::RetainShift(_));
    let first_balanced = usize::from(keeps_ones);
    let balanced = colors - first_balanced;
    let order = smallest_admissible_order(balanced + 1).ok_or(Error::Capacity {
        required: balanced,
        max_order: MAX_ADMISSIBLE_ORDER,
    })?;
    let h = hadamard_of_order(order)?;

    let groups = coloring.groups();
    let weights: Vec<usize> = groups[first_balanced..].iter().map(Vec::len).collect();
    let choice = assign::choose_rows(
        &h,
        &weights,
        opts.objective,
        opts.exhaustive_row_search_limit,
    );

    let mut row_of_color = Vec::with_capacity(colors);
    if keeps_ones {
        row_of_color.push(0);
    }
    row_of_color.extend_from_slice(&choice.rows);

    let rows: Vec<&[i8]> = (0..g.spin_count())
        .map(|spin| h.row(row_of_color[coloring.color_of(spin)]))
        .collect();
    let matrix = SignMatrix::from_rows(&rows)?;

    Ok(Compilation {
        matrix,
        coloring,
        hadamard_order: order,
        row_of_color,
        exhaustive: choice.exhaustive,
        cost: choice.cost,
    })
}
