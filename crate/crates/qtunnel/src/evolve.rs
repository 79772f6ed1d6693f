//! Time evolution: the split-step `F^{-1} D F Q`, multi-step runs with
//! probability traces, the free-particle variant, and the exact dense
//! propagator used as the reference for every Trotter run.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::potential::{self, PotentialSpec};
use crate::spectral::{self, MomentumConvention};
use crate::state::StateVector;

/// Default particle mass used throughout the double-well runs.
pub const DEFAULT_MASS: f64 = 0.5;

/// Evolution backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Trotter,
    Exact,
    /// Trotter step with the potential factor dropped.
    Free,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trotter" => Some(Mode::Trotter),
            "exact" => Some(Mode::Exact),
            "free" => Some(Mode::Free),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Trotter => "trotter",
            Mode::Exact => "exact",
            Mode::Free => "free",
        }
    }
}

/// Operator splitting order. `PotentialFirst` is the published one-step
/// circuit; `Strang` symmetrizes with half potential kicks and is kept as
/// an extension, off by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Splitting {
    #[default]
    PotentialFirst,
    Strang,
}

/// Step size, count, mass, and backend for one evolution run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterConfig {
    pub dt: f64,
    pub steps: usize,
    pub mass: f64,
    pub mode: Mode,
    pub splitting: Splitting,
    pub convention: MomentumConvention,
}

impl TrotterConfig {
    pub fn new(dt: f64, steps: usize, mass: f64, mode: Mode) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::NonPositive {
                what: "time step",
                value: dt,
            });
        }
        if steps == 0 {
            return Err(Error::NonPositive {
                what: "step count",
                value: 0.0,
            });
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::NonPositive {
                what: "mass",
                value: mass,
            });
        }
        Ok(Self {
            dt,
            steps,
            mass,
            mode,
            splitting: Splitting::default(),
            convention: MomentumConvention::default(),
        })
    }

    /// Same total time with the step halved and the count doubled.
    pub fn refined(&self) -> Self {
        Self {
            dt: self.dt / 2.0,
            steps: self.steps * 2,
            ..*self
        }
    }

    pub fn total_time(&self) -> f64 {
        self.dt * self.steps as f64
    }
}

/// Per-step site probability rows; row 0 is the prepared initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTrace {
    n_qubits: usize,
    rows: Vec<Vec<f64>>,
}

impl ProbabilityTrace {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn sites(&self) -> usize {
        1 << self.n_qubits
    }

    /// Number of evolution steps (rows minus the initial one).
    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, step: usize) -> &[f64] {
        &self.rows[step]
    }

    /// Probability of 1-based `site` after `step` steps.
    pub fn site_probability(&self, step: usize, site: usize) -> f64 {
        self.rows[step][site - 1]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }
}

/// Trace plus the final statevector (retained for density-matrix export).
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub trace: ProbabilityTrace,
    pub final_state: StateVector,
}

fn check_shapes(state: &StateVector, pot: &PotentialSpec) -> Result<()> {
    if state.n_qubits() != pot.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: state.n_qubits(),
            right: pot.n_qubits(),
        });
    }
    Ok(())
}

/// Multiply the state by the potential phases `exp(-i V dt)`.
fn potential_pass(state: &mut StateVector, pot: &PotentialSpec, dt: f64) {
    let phases = potential::propagator_phases(pot, dt);
    for (amp, phase) in state.amplitudes_mut().iter_mut().zip(phases) {
        *amp *= phase;
    }
}

/// The kinetic factor: QFT ladder, momentum-ordered phases, inverse ladder.
fn kinetic_pass(state: &mut StateVector, dt: f64, mass: f64, conv: MomentumConvention) -> Result<()> {
    let kin = spectral::kinetic_diag_with(state.n_qubits(), dt, mass, conv)?;
    let phases = kin.momentum_ordered();
    spectral::qft_apply_in_place(state);
    for (amp, phase) in state.amplitudes_mut().iter_mut().zip(phases) {
        *amp *= phase;
    }
    spectral::qft_apply_inverse_in_place(state);
    Ok(())
}

/// One split step applied to `state`. In `Free` mode the potential factor
/// is skipped; `Exact` mode is not a stepper and is rejected here.
pub fn trotter_step(state: &StateVector, pot: &PotentialSpec, cfg: &TrotterConfig) -> Result<StateVector> {
    let mut out = state.clone();
    trotter_step_in_place(&mut out, pot, cfg)?;
    Ok(out)
}

pub fn trotter_step_in_place(
    state: &mut StateVector,
    pot: &PotentialSpec,
    cfg: &TrotterConfig,
) -> Result<()> {
    check_shapes(state, pot)?;
    if cfg.mode == Mode::Exact {
        return Err(Error::InvalidMode {
            mode: "exact",
            why: "the exact propagator is not a split step; use evolve",
        });
    }
    let with_potential = cfg.mode == Mode::Trotter;
    match cfg.splitting {
        Splitting::PotentialFirst => {
            if with_potential {
                potential_pass(state, pot, cfg.dt);
            }
            kinetic_pass(state, cfg.dt, cfg.mass, cfg.convention)?;
        }
        Splitting::Strang => {
            if with_potential {
                potential_pass(state, pot, cfg.dt / 2.0);
            }
            kinetic_pass(state, cfg.dt, cfg.mass, cfg.convention)?;
            if with_potential {
                potential_pass(state, pot, cfg.dt / 2.0);
            }
        }
    }
    Ok(())
}

/// Inverse of [`trotter_step`]: the same factors with negated time in
/// reversed order, so `reversed(step(psi)) == psi`.
pub fn trotter_step_reversed(
    state: &StateVector,
    pot: &PotentialSpec,
    cfg: &TrotterConfig,
) -> Result<StateVector> {
    check_shapes(state, pot)?;
    if cfg.mode == Mode::Exact {
        return Err(Error::InvalidMode {
            mode: "exact",
            why: "the exact propagator is not a split step; use evolve",
        });
    }
    let with_potential = cfg.mode == Mode::Trotter;
    let mut out = state.clone();
    match cfg.splitting {
        Splitting::PotentialFirst => {
            kinetic_pass(&mut out, -cfg.dt, cfg.mass, cfg.convention)?;
            if with_potential {
                potential_pass(&mut out, pot, -cfg.dt);
            }
        }
        Splitting::Strang => {
            if with_potential {
                potential_pass(&mut out, pot, -cfg.dt / 2.0);
            }
            kinetic_pass(&mut out, -cfg.dt, cfg.mass, cfg.convention)?;
            if with_potential {
                potential_pass(&mut out, pot, -cfg.dt / 2.0);
            }
        }
    }
    Ok(out)
}

/// Dense lattice Hamiltonian `F^{-1} diag(p^2/2m) F + diag(V)`.
pub fn exact_hamiltonian(pot: &PotentialSpec, mass: f64) -> Result<CMatrix> {
    exact_hamiltonian_with(pot, mass, MomentumConvention::Standard)
}

pub fn exact_hamiltonian_with(
    pot: &PotentialSpec,
    mass: f64,
    conv: MomentumConvention,
) -> Result<CMatrix> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::NonPositive {
            what: "mass",
            value: mass,
        });
    }
    let n = pot.n_qubits();
    let f = spectral::qft_matrix(n)?;
    let grid = spectral::momentum_grid_with(n, conv)?;
    let p2: Vec<Complex64> = grid
        .values()
        .iter()
        .map(|p| Complex64::new(p * p / (2.0 * mass), 0.0))
        .collect();
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(p2));
    let mut h = f.adjoint() * diag * f;
    for (k, v) in pot.values().iter().enumerate() {
        h[(k, k)] += Complex64::new(*v, 0.0);
    }
    Ok(h)
}

/// `exp(-i H dt)` for the lattice Hamiltonian, via eigendecomposition.
pub fn exact_propagator(pot: &PotentialSpec, dt: f64, mass: f64) -> Result<CMatrix> {
    exact_propagator_with(pot, dt, mass, MomentumConvention::Standard)
}

pub fn exact_propagator_with(
    pot: &PotentialSpec,
    dt: f64,
    mass: f64,
    conv: MomentumConvention,
) -> Result<CMatrix> {
    let h = exact_hamiltonian_with(pot, mass, conv)?;
    linalg::expm_minus_i_hermitian(&h, dt)
}

/// Real part of `<psi| h |psi>`.
pub fn energy_expectation(state: &StateVector, h: &CMatrix) -> f64 {
    let amps = state.amplitudes();
    let mut acc = Complex64::ZERO;
    for r in 0..amps.len() {
        let mut row = Complex64::ZERO;
        for k in 0..amps.len() {
            row += h[(r, k)] * amps[k];
        }
        acc += amps[r].conj() * row;
    }
    acc.re
}

fn dense_apply(u: &CMatrix, state: &StateVector) -> StateVector {
    let amps = state.amplitudes();
    let dim = amps.len();
    let mut out = vec![Complex64::ZERO; dim];
    for (r, slot) in out.iter_mut().enumerate() {
        for k in 0..dim {
            *slot += u[(r, k)] * amps[k];
        }
    }
    StateVector::from_unitary_output(state.n_qubits(), out)
}

/// Run `cfg.steps` steps from `initial`, recording the site probability
/// distribution after every step.
pub fn evolve(
    initial: &StateVector,
    pot: &PotentialSpec,
    cfg: &TrotterConfig,
) -> Result<EvolutionResult> {
    check_shapes(initial, pot)?;
    let mut rows = Vec::with_capacity(cfg.steps + 1);
    rows.push(initial.probabilities());
    let mut state = initial.clone();
    match cfg.mode {
        Mode::Trotter | Mode::Free => {
            for _ in 0..cfg.steps {
                trotter_step_in_place(&mut state, pot, cfg)?;
                rows.push(state.probabilities());
            }
        }
        Mode::Exact => {
            let u = exact_propagator_with(pot, cfg.dt, cfg.mass, cfg.convention)?;
            for _ in 0..cfg.steps {
                state = dense_apply(&u, &state);
                rows.push(state.probabilities());
            }
        }
    }
    Ok(EvolutionResult {
        trace: ProbabilityTrace {
            n_qubits: initial.n_qubits(),
            rows,
        },
        final_state: state,
    })
}

/// Per-step overlap `|<psi_exact(t dt)|psi_trotter(t)>|^2` between the
/// split-step run and the exact propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    overlaps: Vec<f64>,
}

impl OverlapReport {
    /// Overlap after step `t` (1-based).
    pub fn overlap(&self, step: usize) -> f64 {
        self.overlaps[step - 1]
    }

    pub fn overlaps(&self) -> &[f64] {
        &self.overlaps
    }

    pub fn final_overlap(&self) -> f64 {
        *self.overlaps.last().expect("at least one step")
    }
}

pub fn trotter_vs_exact_report(
    pot: &PotentialSpec,
    cfg: &TrotterConfig,
    initial: &StateVector,
) -> Result<OverlapReport> {
    check_shapes(initial, pot)?;
    let free = cfg.mode == Mode::Free;
    let step_cfg = TrotterConfig {
        mode: if free { Mode::Free } else { Mode::Trotter },
        ..*cfg
    };
    // a free-mode run drops the potential factor, so the matching exact
    // evolution is kinetic-only
    let exact_pot = if free {
        potential::free_potential(pot.n_qubits())?
    } else {
        pot.clone()
    };
    let u = exact_propagator_with(&exact_pot, cfg.dt, cfg.mass, cfg.convention)?;
    let mut trotter = initial.clone();
    let mut exact = initial.clone();
    let mut overlaps = Vec::with_capacity(cfg.steps);
    for _ in 0..cfg.steps {
        trotter_step_in_place(&mut trotter, pot, &step_cfg)?;
        exact = dense_apply(&u, &exact);
        overlaps.push(exact.inner(&trotter)?.norm_sqr());
    }
    Ok(OverlapReport { overlaps })
}
