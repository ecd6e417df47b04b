use serde::Serialize;

use crate::error::Result;
use crate::graphmodel::CouplingGraph;

use super::{compile_with_details, CompileOptions, TargetSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceCounts {
    pub intervals: usize,
    pub internal_pulses: usize,
}

/// Size of the nested baseline. Counts grow as `2^N`, so they are computed in
/// closed form rather than by building the matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConventionalCounts {
    /// Spins in the nested sequence the baseline is cut from.
    pub nested_spins: usize,
    pub intervals: u128,
    pub internal_pulses: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinAssignment {
    pub spin: String,
    pub color: usize,
    pub hadamard_row: usize,
}

/// Compiled sequence versus the recursively nested one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub target: String,
    pub spins: usize,
    pub colors: usize,
    pub hadamard_order: usize,
    pub efficient: SequenceCounts,
    pub conventional: ConventionalCounts,
    /// Conventional intervals divided by efficient intervals.
    pub interval_ratio: f64,
    pub assignment: Vec<SpinAssignment>,
}

impl ConventionalCounts {
    /// Baseline for a fully coupled `n`-spin system.
    ///
    /// A retained shift uses the nested sequence as is; a retained coupling
    /// copies one row's pulses onto its partner; refocusing everything drops
    /// the constant row of the `n + 1` spin sequence.
    pub fn for_target(n: usize, target: TargetSpec) -> Self {
        let pow = |e: usize| 1u128 << e;
        match target {
            TargetSpec::RetainShift(_) => ConventionalCounts {
                nested_spins: n,
                intervals: pow(n - 1),
                internal_pulses: pow(n - 1) - 1,
            },
            TargetSpec::RetainCoupling(..) => ConventionalCounts {
                nested_spins: n,
                intervals: pow(n - 1),
                internal_pulses: pow(n - 1),
            },
            TargetSpec::RefocusAll => ConventionalCounts {
                nested_spins: n + 1,
                intervals: pow(n),
                internal_pulses: pow(n) - 1,
            },
        }
    }
}

pub fn efficiency_report(
    g: &CouplingGraph,
    target: TargetSpec,
    opts: &CompileOptions,
) -> Result<ComparisonReport> {
    let compiled = compile_with_details(g, target, opts)?;
    let conventional = ConventionalCounts::for_target(g.spin_count(), target);
    let efficient = SequenceCounts {
        intervals: compiled.matrix.cols(),
        internal_pulses: compiled.matrix.internal_pulse_count(),
    };
    let assignment = (0..g.spin_count())
        .map(|spin| SpinAssignment {
            spin: g.name(spin).to_string(),
            color: compiled.coloring.color_of(spin),
            hadamard_row: compiled.row_of_spin(spin),
        })
        .collect();
    Ok(ComparisonReport {
        target: target.describe(g),
        spins: g.spin_count(),
        colors: compiled.coloring.color_count(),
        hadamard_order: compiled.hadamard_order,
        interval_ratio: conventional.intervals as f64 / efficient.intervals as f64,
        efficient,
        conventional,
        assignment,
    })
}
