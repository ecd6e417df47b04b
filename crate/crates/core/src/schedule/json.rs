use crate::error::{Error, Result};

use super::{boundary_time, Pulse, PulseSchedule, SpinPulses};

/// Relative slack allowed between a serialized time and `k·T/C`.
const TIME_TOLERANCE: f64 = 1e-9;

/// Rounds to 12 significant digits; the shortest-repr printer then emits at
/// most 12 digits.
fn round_sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Serializes a schedule with fields in the order `total_time`, `intervals`,
/// `spins[].name`, `spins[].pulses[].{boundary, time, parity}`.
pub fn to_json(s: &PulseSchedule) -> String {
    let rounded = PulseSchedule {
        total_time: round_sig12(s.total_time),
        intervals: s.intervals,
        spins: s
            .spins
            .iter()
            .map(|sp| SpinPulses {
                name: sp.name.clone(),
                pulses: sp
                    .pulses
                    .iter()
                    .map(|p| Pulse {
                        time: round_sig12(p.time),
                        ..p.clone()
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&rounded).expect("schedule serializes")
}

/// Parses and validates a schedule document.
///
/// Pulse times must agree with their boundary index; the stored time is
/// recomputed from the index so no decimal rounding survives the parse.
pub fn from_json(document: &str) -> Result<PulseSchedule> {
    let mut s: PulseSchedule =
        serde_json::from_str(document).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    s.validate()?;
    let (t, c) = (s.total_time, s.intervals);
    for sp in &mut s.spins {
        for p in &mut sp.pulses {
            let exact = boundary_time(t, c, p.boundary);
            if (p.time - exact).abs() > TIME_TOLERANCE * t {
                return Err(Error::InvalidSchedule(format!(
                    "spin `{}`: time {} does not match boundary {} (expected {exact})",
                    sp.name, p.time, p.boundary
                )));
            }
            p.time = exact;
        }
    }
    Ok(s)
}
