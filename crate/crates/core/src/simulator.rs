//! Numerical check of a pulse sequence against its target Hamiltonian.
//!
//! The weak-coupling Hamiltonian is diagonal in the computational basis and
//! an ideal π pulse about x is `-i` times a bit flip, so every propagator the
//! sequence builds is a phase times a permutation. It is tracked in that form
//! and expanded to a dense `2^N × 2^N` matrix only for comparison.
//!
//! Basis index bit `N-1-i` holds spin `i` (spin 0 is the most significant
//! bit); a clear bit is the `I_z = +1/2` state.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::compiler::{InteractionStatus, SignMatrix, TargetSpec};
use crate::error::{Error, Result};
use crate::graphmodel::CouplingGraph;
use crate::schedule::{schedule_from_sign_matrix, PulseSchedule};

pub const MAX_SIMULATED_SPINS: usize = 10;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Below this magnitude an entry counts as zero when fixing the global phase.
const ZERO_AMPLITUDE: f64 = 1e-12;

/// Numeric shifts, couplings and duration for simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystemParams {
    /// Angular frequency per spin, rad/s.
    shifts: Vec<f64>,
    /// J per edge, Hz, keyed `(i, j)` with `i < j`.
    couplings: BTreeMap<(usize, usize), f64>,
    total_time: f64,
}

impl SpinSystemParams {
    /// Couplings must be given for exactly the edges of `g`, each nonzero.
    pub fn new(
        g: &CouplingGraph,
        shifts: Vec<f64>,
        couplings: BTreeMap<(usize, usize), f64>,
        total_time: f64,
    ) -> Result<Self> {
        if shifts.len() != g.spin_count() {
            return Err(Error::DimensionMismatch {
                expected: g.spin_count(),
                found: shifts.len(),
            });
        }
        if let Some(w) = shifts.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("shift {w} is not finite")));
        }
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total time must be positive, got {total_time}"
            )));
        }
        let mut normalized = BTreeMap::new();
        for (&(a, b), &j) in &couplings {
            if !g.has_edge(a, b) {
                return Err(Error::InvalidParameter(format!(
                    "coupling constant given for uncoupled pair ({a}, {b})"
                )));
            }
            if !j.is_finite() || j == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "coupling ({a}, {b}) must be finite and nonzero, got {j}"
                )));
            }
            normalized.insert((a.min(b), a.max(b)), j);
        }
        if normalized.len() != g.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "{} coupling constants for {} edges",
                normalized.len(),
                g.edge_count()
            )));
        }
        Ok(SpinSystemParams {
            shifts,
            couplings: normalized,
            total_time,
        })
    }

    /// Random shifts of magnitude 5–500 rad/s and couplings of 1–20 Hz,
    /// each with a random sign.
    pub fn random<R: Rng + ?Sized>(
        g: &CouplingGraph,
        total_time: f64,
        rng: &mut R,
    ) -> Result<Self> {
        Self::fill(
            g,
            &vec![None; g.spin_count()],
            &BTreeMap::new(),
            total_time,
            rng,
        )
    }

    /// Uses the declared values and draws the rest at random. All random
    /// values are drawn either way, so declaring one value does not change
    /// the draws for the others.
    pub fn fill<R: Rng + ?Sized>(
        g: &CouplingGraph,
        declared_shifts: &[Option<f64>],
        declared_couplings: &BTreeMap<(usize, usize), f64>,
        total_time: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut signed = |lo: f64, hi: f64| {
            let v = rng.random_range(lo..hi);
            if rng.random_bool(0.5) {
                v
            } else {
                -v
            }
        };
        let shifts = (0..g.spin_count())
            .map(|i| {
                let drawn = signed(5.0, 500.0);
                declared_shifts.get(i).copied().flatten().unwrap_or(drawn)
            })
            .collect();
        let couplings = g
            .edges()
            .map(|e| {
                let drawn = signed(1.0, 20.0);
                (e, declared_couplings.get(&e).copied().unwrap_or(drawn))
            })
            .collect();
        Self::new(g, shifts, couplings, total_time)
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn coupling(&self, a: usize, b: usize) -> Option<f64> {
        self.couplings.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    /// Same system with every frequency scaled by `factor` and the duration
    /// divided by it.
    pub fn time_scaled(&self, factor: f64) -> Self {
        SpinSystemParams {
            shifts: self.shifts.iter().map(|w| w * factor).collect(),
            couplings: self
                .couplings
                .iter()
                .map(|(&k, &j)| (k, j * factor))
                .collect(),
            total_time: self.total_time / factor,
        }
    }

    /// Keeps only the chosen shift and coupling; used to probe one
    /// interaction at a time.
    fn isolate(&self, shift: Option<usize>, coupling: Option<(usize, usize)>) -> Self {
        SpinSystemParams {
            shifts: (0..self.shifts.len())
                .map(|i| {
                    if Some(i) == shift {
                        self.shifts[i]
                    } else {
                        0.0
                    }
                })
                .collect(),
            couplings: self
                .couplings
                .iter()
                .filter(|(&k, _)| Some(k) == coupling)
                .map(|(&k, &j)| (k, j))
                .collect(),
            total_time: self.total_time,
        }
    }
}

#[inline]
fn z_value(x: usize, n: usize, spin: usize) -> f64 {
    if (x >> (n - 1 - spin)) & 1 == 0 {
        0.5
    } else {
        -0.5
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_SIMULATED_SPINS {
        return Err(Error::SizeLimit {
            what: "spin count for simulation",
            value: n,
            max: MAX_SIMULATED_SPINS,
        });
    }
    Ok(())
}

/// Diagonal of `Σ ω_i I_z^i + Σ 2π J_ij · 2 I_z^i I_z^j`.
pub fn build_hamiltonian(g: &CouplingGraph, p: &SpinSystemParams) -> Result<Vec<f64>> {
    let n = g.spin_count();
    check_size(n)?;
    if p.shifts.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.shifts.len(),
        });
    }
    Ok(diagonal(n, p))
}

fn diagonal(n: usize, p: &SpinSystemParams) -> Vec<f64> {
    (0..1usize << n)
        .map(|x| {
            let single: f64 = p
                .shifts
                .iter()
                .enumerate()
                .map(|(i, w)| w * z_value(x, n, i))
                .sum();
            let pair: f64 = p
                .couplings
                .iter()
                .map(|(&(a, b), j)| 2.0 * PI * j * 2.0 * z_value(x, n, a) * z_value(x, n, b))
                .sum();
            single + pair
        })
        .collect()
}

/// A phase times a permutation: column `x` has its single nonzero entry
/// `phase[x]` in row `image[x]`.
#[derive(Debug, Clone)]
struct Monomial {
    n: usize,
    image: Vec<usize>,
    phase: Vec<Complex64>,
}

impl Monomial {
    fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        Monomial {
            n,
            image: (0..dim).collect(),
            phase: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    /// Left-multiplies by `exp(-i·diag·dt)`.
    fn evolve(&mut self, diag: &[f64], dt: f64) {
        for (ph, &y) in self.phase.iter_mut().zip(&self.image) {
            *ph *= Complex64::from_polar(1.0, -diag[y] * dt);
        }
    }

    /// Left-multiplies by π_x pulses on the given spins.
    fn pulse(&mut self, spins: &[usize]) {
        if spins.is_empty() {
            return;
        }
        let mask = spins
            .iter()
            .fold(0usize, |m, &s| m | (1 << (self.n - 1 - s)));
        let factor = Complex64::new(0.0, -1.0).powu(spins.len() as u32);
        for (ph, y) in self.phase.iter_mut().zip(self.image.iter_mut()) {
            *y ^= mask;
            *ph *= factor;
        }
    }

    fn dense(&self) -> PropagatorResult {
        let dim = self.image.len();
        let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (x, (&y, &ph)) in self.image.iter().zip(&self.phase).enumerate() {
            matrix[y * dim + x] = ph;
        }
        PropagatorResult { dim, matrix }
    }
}

/// Dense propagator, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorResult {
    dim: usize,
    matrix: Vec<Complex64>,
}

impl PropagatorResult {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.matrix
    }

    /// Multiplies by the phase that makes the first nonzero entry (row-major)
    /// real and positive.
    pub fn normalized_global_phase(&self) -> Self {
        let first = self
            .matrix
            .iter()
            .find(|z| z.norm() > ZERO_AMPLITUDE)
            .copied()
            .unwrap_or(Complex64::new(1.0, 0.0));
        let rot = first.conj() / first.norm();
        PropagatorResult {
            dim: self.dim,
            matrix: self.matrix.iter().map(|z| z * rot).collect(),
        }
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "propagator dimensions differ");
        self.matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Distance after removing the global phase of both operands.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        self.normalized_global_phase()
            .frobenius_distance(&other.normalized_global_phase())
    }

    /// `‖U·U† − I‖_F`.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim;
        let mut sum = 0.0;
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.get(r, k) * self.get(c, k).conj();
                }
                if r == c {
                    acc -= 1.0;
                }
                sum += acc.norm_sqr();
            }
        }
        sum.sqrt()
    }
}

fn propagate(s: &PulseSchedule, g: &CouplingGraph, p: &SpinSystemParams) -> Result<Monomial> {
    let n = g.spin_count();
    check_size(n)?;
    if s.spin_count() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.spin_count(),
        });
    }
    if p.shifts.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.shifts.len(),
        });
    }
    s.validate()?;
    let c = s.intervals;
    let mut at_boundary = vec![Vec::new(); c + 1];
    for (i, sp) in s.spins.iter().enumerate() {
        for pulse in &sp.pulses {
            at_boundary[pulse.boundary].push(i);
        }
    }
    let diag = diagonal(n, p);
    let dt = p.total_time / c as f64;
    let mut u = Monomial::identity(n);
    for spins in &at_boundary[1..] {
        u.evolve(&diag, dt);
        u.pulse(spins);
    }
    Ok(u)
}

/// Propagator of a schedule's actual pulses, omitted parity pulses included
/// as omitted. The schedule's own `total_time` is ignored in favour of the
/// parameters'.
pub fn simulate_schedule(
    s: &PulseSchedule,
    g: &CouplingGraph,
    p: &SpinSystemParams,
) -> Result<PropagatorResult> {
    propagate(s, g, p).map(|u| u.dense())
}

/// Propagator of a sign matrix, with parity pulses so every spin is pulsed
/// an even number of times.
pub fn simulate(
    m: &SignMatrix,
    g: &CouplingGraph,
    p: &SpinSystemParams,
) -> Result<PropagatorResult> {
    let s = schedule_from_sign_matrix(m, p.total_time, false)?;
    simulate_schedule(&s, g, p)
}

/// Ideal propagator for `target`, followed by bit flips on `residual` spins.
fn target_monomial(
    n: usize,
    target: TargetSpec,
    p: &SpinSystemParams,
    residual: &[usize],
) -> Monomial {
    let mut kept = p.isolate(None, None);
    match target {
        TargetSpec::RetainShift(s) => kept.shifts[s] = p.shifts[s],
        TargetSpec::RetainCoupling(a, b) => {
            if let Some(j) = p.coupling(a, b) {
                kept.couplings.insert((a.min(b), a.max(b)), j);
            }
        }
        TargetSpec::RefocusAll => {}
    }
    let mut u = Monomial::identity(n);
    u.evolve(&diagonal(n, &kept), p.total_time);
    u.pulse(residual);
    u
}

/// Outcome of one numerical comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveCheck {
    pub pass: bool,
    pub frobenius_distance: f64,
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Compares the simulated propagator of a sign matrix with the target's,
/// up to global phase.
pub fn verify_effective(
    m: &SignMatrix,
    g: &CouplingGraph,
    target: TargetSpec,
    p: &SpinSystemParams,
    tol: f64,
) -> Result<EffectiveCheck> {
    let s = schedule_from_sign_matrix(m, p.total_time, false)?;
    verify_schedule_effective(&s, g, target, p, tol)
}

/// Like [`verify_effective`] for a concrete schedule. When parity pulses are
/// omitted the spins left flipped are applied to the target as well.
pub fn verify_schedule_effective(
    s: &PulseSchedule,
    g: &CouplingGraph,
    target: TargetSpec,
    p: &SpinSystemParams,
    tol: f64,
) -> Result<EffectiveCheck> {
    check_tolerance(tol)?;
    target.validate(g)?;
    let actual = propagate(s, g, p)?.dense();
    let expected = target_monomial(g.spin_count(), target, p, &s.residual_flips()).dense();
    let distance = actual.distance_up_to_phase(&expected);
    Ok(EffectiveCheck {
        pass: distance <= tol,
        frobenius_distance: distance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulatedShift {
    pub spin: String,
    pub index: usize,
    pub status: InteractionStatus,
    pub expected: InteractionStatus,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulatedCoupling {
    pub spins: [String; 2],
    pub indices: [usize; 2],
    pub status: InteractionStatus,
    pub expected: InteractionStatus,
    pub ok: bool,
}

/// Numerical counterpart of the combinatorial report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveReport {
    pub pass: bool,
    pub intervals: usize,
    pub shifts: Vec<SimulatedShift>,
    pub couplings: Vec<SimulatedCoupling>,
    pub failures: Vec<String>,
    /// Largest distance over all parameter samples.
    pub frobenius_distance: f64,
    pub tolerance: f64,
    pub samples: usize,
}

/// Runs the full comparison for every parameter sample and, using the first
/// sample, probes each shift and coupling on its own to name the
/// interactions that misbehave.
pub fn effective_report(
    s: &PulseSchedule,
    g: &CouplingGraph,
    target: TargetSpec,
    samples: &[SpinSystemParams],
    tol: f64,
) -> Result<EffectiveReport> {
    check_tolerance(tol)?;
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidParameter("no parameter samples".to_string()))?;
    let mut distance: f64 = 0.0;
    for p in samples {
        distance =
            distance.max(verify_schedule_effective(s, g, target, p, tol)?.frobenius_distance);
    }

    let n = g.spin_count();
    let residual = s.residual_flips();
    let classify = |p: &SpinSystemParams, retained: TargetSpec| -> Result<InteractionStatus> {
        let actual = propagate(s, g, p)?.dense();
        let refocused = target_monomial(n, TargetSpec::RefocusAll, p, &residual).dense();
        if actual.distance_up_to_phase(&refocused) <= tol {
            return Ok(InteractionStatus::Refocused);
        }
        let kept = target_monomial(n, retained, p, &residual).dense();
        if actual.distance_up_to_phase(&kept) <= tol {
            Ok(InteractionStatus::Retained)
        } else {
            Ok(InteractionStatus::Partial)
        }
    };
    let expect = |retain: bool| {
        if retain {
            InteractionStatus::Retained
        } else {
            InteractionStatus::Refocused
        }
    };

    let mut shifts = Vec::with_capacity(n);
    let mut failures = Vec::new();
    for i in 0..n {
        let status = classify(&first.isolate(Some(i), None), TargetSpec::RetainShift(i))?;
        let expected = expect(target.retains_shift(i));
        if status != expected {
            failures.push(format!(
                "shift {}: {status:?}, expected {expected:?}",
                g.name(i)
            ));
        }
        shifts.push(SimulatedShift {
            spin: g.name(i).to_string(),
            index: i,
            status,
            expected,
            ok: status == expected,
        });
    }
    let mut couplings = Vec::with_capacity(g.edge_count());
    for (a, b) in g.edges() {
        let status = classify(
            &first.isolate(None, Some((a, b))),
            TargetSpec::RetainCoupling(a, b),
        )?;
        let expected = expect(target.retains_coupling(a, b));
        if status != expected {
            failures.push(format!(
                "coupling {}:{}: {status:?}, expected {expected:?}",
                g.name(a),
                g.name(b)
            ));
        }
        couplings.push(SimulatedCoupling {
            spins: [g.name(a).to_string(), g.name(b).to_string()],
            indices: [a, b],
            status,
            expected,
            ok: status == expected,
        });
    }

    let pass = distance <= tol;
    if !pass && failures.is_empty() {
        failures.push(format!(
            "propagator differs from target by {distance:e} (tolerance {tol:e})"
        ));
    }
    Ok(EffectiveReport {
        pass,
        intervals: s.intervals,
        shifts,
        couplings,
        failures,
        frobenius_distance: distance,
        tolerance: tol,
        samples: samples.len(),
    })
}
