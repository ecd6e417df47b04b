//! Timed π-pulse schedules derived from sign matrices.
//!
//! Pulses sit on interval boundaries only: boundary `k` is at time `k·T/C`.
//! Internal pulses use boundaries `1..C`; a parity pulse at boundary `C`
//! (time `T`) makes a spin's pulse count even.

mod json;
mod render;

use serde::{Deserialize, Serialize};

pub use json::{from_json, to_json};
#[cfg(feature = "svg")]
pub use render::render_svg;
pub use render::{render_ascii, render_ascii_width, DEFAULT_CELLS_PER_INTERVAL};

use crate::compiler::SignMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub boundary: usize,
    pub time: f64,
    /// Added only to make the spin's pulse count even.
    pub parity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinPulses {
    pub name: String,
    pub pulses: Vec<Pulse>,
}

impl SpinPulses {
    /// Boundaries of internal (non-parity) pulses.
    pub fn internal_boundaries(&self) -> Vec<usize> {
        self.pulses
            .iter()
            .filter(|p| !p.parity)
            .map(|p| p.boundary)
            .collect()
    }

    pub fn has_parity_pulse(&self) -> bool {
        self.pulses.iter().any(|p| p.parity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub total_time: f64,
    pub intervals: usize,
    pub spins: Vec<SpinPulses>,
}

/// Time of boundary `k` in a schedule of `intervals` equal periods.
pub fn boundary_time(total_time: f64, intervals: usize, k: usize) -> f64 {
    total_time * (k as f64 / intervals as f64)
}

/// Places a pulse at every boundary where a row changes sign, plus a parity
/// pulse at `T` for rows with an odd count unless `omit_final` is set.
/// Spins are named `I0`, `I1`, …; see [`PulseSchedule::with_names`].
pub fn schedule_from_sign_matrix(
    m: &SignMatrix,
    total_time: f64,
    omit_final: bool,
) -> Result<PulseSchedule> {
    if !(total_time.is_finite() && total_time > 0.0) {
        return Err(Error::InvalidInput(format!(
            "total time must be positive and finite, got {total_time}"
        )));
    }
    let c = m.cols();
    let spins = (0..m.rows())
        .map(|i| {
            let mut pulses: Vec<Pulse> = m
                .flip_boundaries(i)
                .into_iter()
                .map(|k| Pulse {
                    boundary: k,
                    time: boundary_time(total_time, c, k),
                    parity: false,
                })
                .collect();
            if !omit_final && pulses.len() % 2 == 1 {
                pulses.push(Pulse {
                    boundary: c,
                    time: boundary_time(total_time, c, c),
                    parity: true,
                });
            }
            SpinPulses {
                name: format!("I{i}"),
                pulses,
            }
        })
        .collect();
    Ok(PulseSchedule {
        total_time,
        intervals: c,
        spins,
    })
}

/// Total pulses across spins, with or without parity pulses.
pub fn pulse_count(s: &PulseSchedule, include_final: bool) -> usize {
    s.spins
        .iter()
        .flat_map(|sp| &sp.pulses)
        .filter(|p| include_final || !p.parity)
        .count()
}

impl PulseSchedule {
    /// Replaces the spin names, which must match the spin count.
    pub fn with_names<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self> {
        if names.len() != self.spins.len() {
            return Err(Error::DimensionMismatch {
                expected: self.spins.len(),
                found: names.len(),
            });
        }
        for (sp, name) in self.spins.iter_mut().zip(names) {
            sp.name = name.as_ref().to_string();
        }
        Ok(self)
    }

    pub fn spin_count(&self) -> usize {
        self.spins.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.spins.iter().map(|s| s.name.clone()).collect()
    }

    /// Rebuilds the sign matrix from internal pulses; parity pulses ignored.
    pub fn to_sign_matrix(&self) -> Result<SignMatrix> {
        let boundaries: Vec<Vec<usize>> = self
            .spins
            .iter()
            .map(SpinPulses::internal_boundaries)
            .collect();
        SignMatrix::from_boundaries(self.intervals, &boundaries)
    }

    /// Spins whose total pulse count (parity pulses included) is odd; these
    /// end the sequence flipped.
    pub fn residual_flips(&self) -> Vec<usize> {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, s)| s.pulses.len() % 2 == 1)
            .map(|(i, _)| i)
            .collect()
    }

    /// Largest number of spins pulsed at a single boundary.
    pub fn max_simultaneous(&self) -> usize {
        let mut load = vec![0usize; self.intervals + 1];
        for p in self.spins.iter().flat_map(|s| &s.pulses) {
            load[p.boundary] += 1;
        }
        load.into_iter().max().unwrap_or(0)
    }

    /// Checks the structural invariants of a schedule.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSchedule(msg));
        if !(self.total_time.is_finite() && self.total_time > 0.0) {
            return bad(format!("total_time {} is not positive", self.total_time));
        }
        if self.intervals == 0 {
            return bad("intervals must be at least 1".to_string());
        }
        if self.spins.is_empty() {
            return bad("no spins".to_string());
        }
        let c = self.intervals;
        for (i, name) in self.names().iter().enumerate() {
            if self.spins[..i].iter().any(|s| &s.name == name) {
                return bad(format!("duplicate spin name `{name}`"));
            }
        }
        for sp in &self.spins {
            let mut last = 0;
            for p in &sp.pulses {
                if p.boundary <= last {
                    return bad(format!(
                        "spin `{}`: boundaries must be strictly increasing and >= 1",
                        sp.name
                    ));
                }
                last = p.boundary;
                if p.parity && p.boundary != c {
                    return bad(format!(
                        "spin `{}`: parity pulse at boundary {} instead of {c}",
                        sp.name, p.boundary
                    ));
                }
                if !p.parity && p.boundary >= c {
                    return bad(format!(
                        "spin `{}`: internal pulse at boundary {} outside 1..{c}",
                        sp.name, p.boundary
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> SignMatrix {
        SignMatrix::from_rows(&[[1, 1], [1, -1]]).unwrap()
    }

    fn h4() -> SignMatrix {
        SignMatrix::from_rows(&[[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]])
            .unwrap()
    }

    #[test]
    fn two_spin_schedule_has_dashed_final_pulse() {
        let s = schedule_from_sign_matrix(&m2(), 1.0, false).unwrap();
        assert!(s.spins[0].pulses.is_empty());
        assert_eq!(
            s.spins[1].pulses,
            vec![
                Pulse {
                    boundary: 1,
                    time: 0.5,
                    parity: false
                },
                Pulse {
                    boundary: 2,
                    time: 1.0,
                    parity: true
                },
            ]
        );
        assert_eq!(pulse_count(&s, true), 2);
        assert_eq!(pulse_count(&s, false), 1);
        assert!(s.residual_flips().is_empty());
    }

    #[test]
    fn four_spin_layout() {
        let s = schedule_from_sign_matrix(&h4(), 4.0, true).unwrap();
        let b: Vec<Vec<usize>> = s
            .spins
            .iter()
            .map(SpinPulses::internal_boundaries)
            .collect();
        assert_eq!(b, vec![vec![], vec![1, 2, 3], vec![2], vec![1, 3]]);
        let times: Vec<f64> = s.spins[1].pulses.iter().map(|p| p.time).collect();
        assert_eq!(times, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.residual_flips(), vec![1, 2]);
        assert_eq!(s.max_simultaneous(), 2);
    }

    #[test]
    fn no_pulses_for_constant_row() {
        let s =
            schedule_from_sign_matrix(&SignMatrix::from_rows(&[[1, 1, 1]]).unwrap(), 1.0, false)
                .unwrap();
        assert_eq!(pulse_count(&s, true), 0);
        let empty = PulseSchedule {
            total_time: 1.0,
            intervals: 1,
            spins: vec![],
        };
        assert_eq!(pulse_count(&empty, true), 0);
    }

    #[test]
    fn reconstructs_source_matrix() {
        for omit in [false, true] {
            let s = schedule_from_sign_matrix(&h4(), 0.3, omit).unwrap();
            assert_eq!(s.to_sign_matrix().unwrap(), h4());
            s.validate().unwrap();
        }
    }

    #[test]
    fn rejects_bad_time() {
        assert!(schedule_from_sign_matrix(&m2(), 0.0, false).is_err());
        assert!(schedule_from_sign_matrix(&m2(), f64::NAN, false).is_err());
    }

    #[test]
    fn names() {
        let s = schedule_from_sign_matrix(&m2(), 1.0, false).unwrap();
        let s = s.with_names(&["H", "C"]).unwrap();
        assert_eq!(s.names(), vec!["H", "C"]);
        assert!(s.clone().with_names(&["x"]).is_err());
    }

    #[test]
    fn validation() {
        let mut s = schedule_from_sign_matrix(&h4(), 1.0, false).unwrap();
        s.validate().unwrap();
        s.spins[1].pulses.swap(0, 1);
        assert!(s.validate().is_err());
        let mut s = schedule_from_sign_matrix(&h4(), 1.0, false).unwrap();
        s.spins[2].pulses[0].parity = true;
        assert!(s.validate().is_err());
        let mut s = schedule_from_sign_matrix(&h4(), 1.0, false).unwrap();
        s.spins[3].name = "I0".into();
        assert!(s.validate().is_err());
    }
}
