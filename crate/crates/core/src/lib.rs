//! Compiler for spin-echo refocussing sequences.
//!
//! Given a spin-coupling graph and a target effective Hamiltonian (keep one
//! chemical shift, keep one coupling, or refocus everything), the compiler
//! colors the graph, assigns rows of a Hadamard matrix to the colors and
//! emits a sign matrix whose rows are the coherence signs of each spin over
//! equal free-evolution intervals. The result can be turned into a timed
//! π-pulse schedule and checked two independent ways: combinatorially (row
//! balance and orthogonality) and by simulating the weak-coupling
//! Hamiltonian.
//!
//! ```
//! use refocus::compiler::{compile, CompileOptions, TargetSpec};
//! use refocus::graphmodel::CouplingGraph;
//! use refocus::schedule::{pulse_count, schedule_from_sign_matrix};
//!
//! let g = CouplingGraph::complete(8).unwrap();
//! let m = compile(&g, TargetSpec::RetainShift(0), &CompileOptions::default()).unwrap();
//! assert_eq!(m.cols(), 8);
//! let s = schedule_from_sign_matrix(&m, 1.0, true).unwrap();
//! assert_eq!(pulse_count(&s, false), 28);
//! ```

pub mod compiler;
pub mod error;
pub mod graphmodel;
pub mod hadamard;
pub mod schedule;
pub mod simulator;

pub use error::{Error, Result};
