//! Digital simulation of 1-D quantum tunneling on a qubit lattice.
//!
//! A particle in a periodic double-well potential is discretized onto the
//! 2^n basis states of an n-qubit register and evolved by split steps
//! `F^{-1} D F Q`: a diagonal potential kick `Q`, a QFT into the momentum
//! register, a diagonal kinetic phase `D`, and the inverse QFT. The crate
//! provides
//!
//! * [`state`]: statevectors, density matrices, fidelity, and the Pauli
//!   tomography identity;
//! * [`gates`]: the symbolic gate set, an O(2^n) application kernel, dense
//!   export, and the circuit text format;
//! * [`spectral`]: momentum grids, the swapless QFT ladder, the
//!   bit-reversed kinetic diagonal, and its published gate decompositions;
//! * [`potential`]: double-well and custom diagonal potentials with their
//!   Pauli-Z decompositions;
//! * [`evolve`]: split-step and exact evolution with probability traces
//!   and Trotter-vs-exact overlap reports;
//! * [`nmr`]: spin Hamiltonians, idealized pulse sequences, and
//!   gate-equivalence verification;
//! * [`runner`]: canned experiments, CSV/SVG emission, and the invariant
//!   suite behind `qtunnel verify`.

pub mod error;
pub mod evolve;
pub mod gates;
pub mod linalg;
pub mod nmr;
pub mod potential;
pub mod runner;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use evolve::{evolve, trotter_step, Mode, ProbabilityTrace, TrotterConfig};
pub use gates::{Circuit, Gate, GateKind};
pub use potential::{double_well, PotentialSpec};
pub use spectral::{kinetic_diag, momentum_grid, MomentumConvention};
pub use state::{DensityMatrix, LatticeSpec, StateVector};
