use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphmodel::CouplingGraph;

use super::{SignMatrix, TargetSpec};

/// What a sequence does to one interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionStatus {
    Refocused,
    Retained,
    /// Neither fully refocused nor fully retained.
    Partial,
}

impl InteractionStatus {
    fn from_sum(sum: i64, cols: usize) -> Self {
        if sum == 0 {
            InteractionStatus::Refocused
        } else if sum == cols as i64 {
            InteractionStatus::Retained
        } else {
            InteractionStatus::Partial
        }
    }

    fn expected(retain: bool) -> Self {
        if retain {
            InteractionStatus::Retained
        } else {
            InteractionStatus::Refocused
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftEntry {
    pub spin: String,
    pub index: usize,
    pub row_sum: i64,
    pub status: InteractionStatus,
    pub expected: InteractionStatus,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingEntry {
    pub spins: [String; 2],
    pub indices: [usize; 2],
    pub dot: i64,
    pub status: InteractionStatus,
    pub expected: InteractionStatus,
    pub ok: bool,
}

/// Per-interaction refocussing table for a sign matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinatorialReport {
    pub pass: bool,
    pub intervals: usize,
    pub shifts: Vec<ShiftEntry>,
    pub couplings: Vec<CouplingEntry>,
    /// Pairs without a resolved coupling; reported, never checked.
    pub non_edges: Vec<CouplingEntry>,
    /// One line per interaction whose status differs from the target.
    pub failures: Vec<String>,
}

/// Checks row balance and pairwise orthogonality against `target`.
pub fn verify_combinatorial(
    m: &SignMatrix,
    g: &CouplingGraph,
    target: TargetSpec,
) -> Result<CombinatorialReport> {
    let n = g.spin_count();
    if m.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    target.validate(g)?;
    let cols = m.cols();

    let shifts: Vec<ShiftEntry> = (0..n)
        .map(|i| {
            let row_sum = m.row_sum(i);
            let status = InteractionStatus::from_sum(row_sum, cols);
            let expected = InteractionStatus::expected(target.retains_shift(i));
            ShiftEntry {
                spin: g.name(i).to_string(),
                index: i,
                row_sum,
                status,
                expected,
                ok: status == expected,
            }
        })
        .collect();

    let mut couplings = Vec::with_capacity(g.edge_count());
    let mut non_edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let dot = m.row_dot(a, b);
            let status = InteractionStatus::from_sum(dot, cols);
            let edge = g.has_edge(a, b);
            let expected = if edge {
                InteractionStatus::expected(target.retains_coupling(a, b))
            } else {
                status
            };
            let entry = CouplingEntry {
                spins: [g.name(a).to_string(), g.name(b).to_string()],
                indices: [a, b],
                dot,
                status,
                expected,
                ok: status == expected,
            };
            if edge {
                couplings.push(entry);
            } else {
                non_edges.push(entry);
            }
        }
    }

    let mut failures = Vec::new();
    for s in shifts.iter().filter(|s| !s.ok) {
        failures.push(format!(
            "shift {}: {:?}, expected {:?} (row sum {} of {cols})",
            s.spin, s.status, s.expected, s.row_sum
        ));
    }
    for c in couplings.iter().filter(|c| !c.ok) {
        failures.push(format!(
            "coupling {}:{}: {:?}, expected {:?} (row dot {} of {cols})",
            c.spins[0], c.spins[1], c.status, c.expected, c.dot
        ));
    }

    Ok(CombinatorialReport {
        pass: failures.is_empty(),
        intervals: cols,
        shifts,
        couplings,
        non_edges,
        failures,
    })
}
