//! Spin-system Hamiltonians, idealized pulse/delay sequences, sequence
//! simulation, and gate-equivalence checking.
//!
//! Pulses are zero-duration rotations `exp(-i angle/2 sigma_axis)`. Delays
//! evolve under the diagonal natural Hamiltonian restricted to the
//! couplings declared active for that delay (refocusing is modeled
//! declaratively; echoed-away couplings are simply not listed). Chemical
//! shifts always evolve during delays; the default systems are
//! on-resonance, so this only matters when shifts are set explicitly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::global_phase_residual;
use crate::linalg::{self, CMatrix};

/// Largest spin system the dense simulator accepts.
pub const MAX_SPINS: usize = 4;

/// H-C coupling of the two-qubit processor molecule, recovered from the
/// published delay relation t1 = 1/(8J) = 580.9 us.
pub const CHLOROFORM_J_HZ: f64 = 215.15;

/// Chemical shifts and scalar couplings of a small spin system, in the
/// rotating frame (`shift = 0` means on resonance).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    n_spins: usize,
    shifts_hz: Vec<f64>,
    j_hz: Vec<Vec<f64>>,
}

impl SpinSystem {
    /// All shifts zero, all couplings zero.
    pub fn on_resonance(n_spins: usize) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::InvalidSize);
        }
        if n_spins > MAX_SPINS {
            return Err(Error::CapacityExceeded {
                n_qubits: n_spins,
                max: MAX_SPINS,
                what: "spin system",
            });
        }
        Ok(Self {
            n_spins,
            shifts_hz: vec![0.0; n_spins],
            j_hz: vec![vec![0.0; n_spins]; n_spins],
        })
    }

    /// Two-spin processor: 1H and 13C of chloroform, on resonance, with the
    /// heteronuclear J coupling.
    pub fn chloroform() -> Self {
        let mut sys = Self::on_resonance(2).expect("two spins");
        sys.set_coupling(1, 2, CHLOROFORM_J_HZ).expect("valid pair");
        sys
    }

    /// Three-spin processor: 1H, 13C, 19F of diethyl fluoromalonate. The
    /// published parameter table is not available in text form, so shifts
    /// and couplings default to zero placeholders; set them from a spin
    /// system file for realism studies.
    pub fn diethyl_fluoromalonate() -> Self {
        Self::on_resonance(3).expect("three spins")
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn shift_hz(&self, spin: usize) -> f64 {
        self.shifts_hz[spin - 1]
    }

    pub fn coupling_hz(&self, a: usize, b: usize) -> f64 {
        self.j_hz[a - 1][b - 1]
    }

    fn check_spin(&self, spin: usize) -> Result<()> {
        if spin == 0 || spin > self.n_spins {
            return Err(Error::QubitOutOfRange {
                qubit: spin,
                n_qubits: self.n_spins,
            });
        }
        Ok(())
    }

    pub fn set_shift(&mut self, spin: usize, hz: f64) -> Result<()> {
        self.check_spin(spin)?;
        self.shifts_hz[spin - 1] = hz;
        Ok(())
    }

    pub fn set_coupling(&mut self, a: usize, b: usize, hz: f64) -> Result<()> {
        self.check_spin(a)?;
        self.check_spin(b)?;
        if a == b {
            return Err(Error::QubitOutOfRange {
                qubit: a,
                n_qubits: self.n_spins,
            });
        }
        self.j_hz[a - 1][b - 1] = hz;
        self.j_hz[b - 1][a - 1] = hz;
        Ok(())
    }

    fn dim(&self) -> usize {
        1 << self.n_spins
    }

    /// sigma_z eigenvalue of `spin` on basis index `k` (spin 1 = MSB).
    fn z_sign(&self, k: usize, spin: usize) -> f64 {
        if k >> (self.n_spins - spin) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Rotation axis of an ideal pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    MinusX,
    MinusY,
}

impl Axis {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" | "+x" => Some(Axis::X),
            "y" | "+y" => Some(Axis::Y),
            "-x" => Some(Axis::MinusX),
            "-y" => Some(Axis::MinusY),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::MinusX => "-x",
            Axis::MinusY => "-y",
        }
    }
}

/// One event of a pulse program.
#[derive(Debug, Clone, PartialEq)]
pub enum PulseEvent {
    /// Ideal rotation `exp(-i angle/2 sigma_axis)` on one spin.
    Pulse { spin: usize, axis: Axis, angle: f64 },
    /// Free evolution for `duration` seconds under the shifts plus the
    /// couplings listed in `active`.
    Delay {
        duration: f64,
        active: Vec<(usize, usize)>,
    },
}

/// Ordered pulse/delay program.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    events: Vec<PulseEvent>,
}

impl PulseSequence {
    pub fn new(events: Vec<PulseEvent>) -> Self {
        Self { events }
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn push(&mut self, event: PulseEvent) {
        self.events.push(event);
    }

    pub fn extend(&mut self, events: Vec<PulseEvent>) {
        self.events.extend(events);
    }
}

/// Natural Hamiltonian: `-sum_i pi nu_i sigma_z^i + sum_{i<j} (pi/2) J_ij
/// sigma_z^i sigma_z^j`. Diagonal by construction.
pub fn nmr_hamiltonian(sys: &SpinSystem) -> CMatrix {
    let diag = delay_hamiltonian_diag(sys, &all_pairs(sys));
    CMatrix::from_fn(sys.dim(), sys.dim(), |r, c| {
        if r == c {
            Complex64::new(diag[r], 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

fn all_pairs(sys: &SpinSystem) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for a in 1..=sys.n_spins() {
        for b in (a + 1)..=sys.n_spins() {
            pairs.push((a, b));
        }
    }
    pairs
}

/// Diagonal of the delay Hamiltonian with only `active` couplings kept.
fn delay_hamiltonian_diag(sys: &SpinSystem, active: &[(usize, usize)]) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    (0..sys.dim())
        .map(|k| {
            let mut h = 0.0;
            for spin in 1..=sys.n_spins() {
                h -= pi * sys.shift_hz(spin) * sys.z_sign(k, spin);
            }
            for &(a, b) in active {
                h += pi / 2.0 * sys.coupling_hz(a, b) * sys.z_sign(k, a) * sys.z_sign(k, b);
            }
            h
        })
        .collect()
}

fn pulse_matrix(sys: &SpinSystem, spin: usize, axis: Axis, angle: f64) -> CMatrix {
    let half = angle / 2.0;
    let (c, s) = (half.cos(), half.sin());
    let m = match axis {
        // cos I - i sin sigma_axis
        Axis::X => [
            Complex64::new(c, 0.0),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            Complex64::new(c, 0.0),
        ],
        Axis::MinusX => [
            Complex64::new(c, 0.0),
            Complex64::new(0.0, s),
            Complex64::new(0.0, s),
            Complex64::new(c, 0.0),
        ],
        Axis::Y => [
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ],
        Axis::MinusY => [
            Complex64::new(c, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(c, 0.0),
        ],
    };
    let n = sys.n_spins();
    let dim = sys.dim();
    let bit = n - spin;
    CMatrix::from_fn(dim, dim, |r, col| {
        if r & !(1 << bit) != col & !(1 << bit) {
            Complex64::ZERO
        } else {
            m[((r >> bit & 1) << 1) | (col >> bit & 1)]
        }
    })
}

/// Dense unitary of a pulse program; later events multiply on the left.
pub fn simulate_sequence(sys: &SpinSystem, seq: &PulseSequence) -> Result<CMatrix> {
    let dim = sys.dim();
    let mut u = linalg::identity(dim);
    for event in seq.events() {
        let m = match event {
            PulseEvent::Pulse { spin, axis, angle } => {
                sys.check_spin(*spin)?;
                if !angle.is_finite() {
                    return Err(Error::NonPositive {
                        what: "pulse angle (must be finite)",
                        value: *angle,
                    });
                }
                pulse_matrix(sys, *spin, *axis, *angle)
            }
            PulseEvent::Delay { duration, active } => {
                if !(duration.is_finite() && *duration >= 0.0) {
                    return Err(Error::NonPositive {
                        what: "delay duration",
                        value: *duration,
                    });
                }
                for &(a, b) in active {
                    sys.check_spin(a)?;
                    sys.check_spin(b)?;
                    if a == b {
                        return Err(Error::QubitOutOfRange {
                            qubit: a,
                            n_qubits: sys.n_spins(),
                        });
                    }
                }
                let diag = delay_hamiltonian_diag(sys, active);
                CMatrix::from_fn(dim, dim, |r, c| {
                    if r == c {
                        Complex64::from_polar(1.0, -diag[r] * duration)
                    } else {
                        Complex64::ZERO
                    }
                })
            }
        };
        u = m * u;
    }
    Ok(u)
}

/// Result of checking a sequence against a target unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceCheck {
    pub matches: bool,
    pub residual: f64,
}

/// Simulate `seq` and compare with `target` up to a global phase.
pub fn verify_sequence(
    sys: &SpinSystem,
    seq: &PulseSequence,
    target: &CMatrix,
    tol: f64,
) -> Result<SequenceCheck> {
    let sim = simulate_sequence(sys, seq)?;
    if sim.shape() != target.shape() {
        return Err(Error::DimensionMismatch {
            left: sim.nrows(),
            right: target.nrows(),
        });
    }
    let residual = global_phase_residual(&sim, target)?;
    Ok(SequenceCheck {
        matches: residual <= tol,
        residual,
    })
}

/// The two published delay durations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingConstants {
    pub t1_seconds: f64,
    pub t2_seconds: f64,
}

/// `t1 = 1/(8J)`, `t2 = pi/(40J)`.
pub fn timing_constants(j_hz: f64) -> Result<TimingConstants> {
    if !(j_hz.is_finite() && j_hz > 0.0) {
        return Err(Error::NonPositive {
            what: "J coupling",
            value: j_hz,
        });
    }
    Ok(TimingConstants {
        t1_seconds: 1.0 / (8.0 * j_hz),
        t2_seconds: std::f64::consts::PI / (40.0 * j_hz),
    })
}

// ---------------------------------------------------------------------------
// Composite-rotation builders
// ---------------------------------------------------------------------------

/// Event builders that realize the simulation gates out of x/y pulses and
/// J-coupling delays. Each builder is verified against its gate unitary in
/// the test suite; they are reconstructions of the published sequences, not
/// transcriptions.
pub mod sequences {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// `Rz(angle) = Rx(pi/2) Ry(angle) Rx(-pi/2)`, rightmost first.
    pub fn z_rotation(spin: usize, angle: f64) -> Vec<PulseEvent> {
        vec![
            PulseEvent::Pulse {
                spin,
                axis: Axis::MinusX,
                angle: FRAC_PI_2,
            },
            PulseEvent::Pulse {
                spin,
                axis: Axis::Y,
                angle,
            },
            PulseEvent::Pulse {
                spin,
                axis: Axis::X,
                angle: FRAC_PI_2,
            },
        ]
    }

    /// Hadamard up to a global phase: `Ry(pi/2)` then `Rx(pi)`.
    pub fn hadamard(spin: usize) -> Vec<PulseEvent> {
        vec![
            PulseEvent::Pulse {
                spin,
                axis: Axis::Y,
                angle: FRAC_PI_2,
            },
            PulseEvent::Pulse {
                spin,
                axis: Axis::X,
                angle: PI,
            },
        ]
    }

    /// `exp(i theta sigma_z sigma_z)` on spins (a, b) from one J delay.
    /// A negative generator angle is a plain delay; a positive one is a
    /// pi-pulse echo sandwich that flips the coupling sign.
    pub fn zz_phase(a: usize, b: usize, theta: f64, j_hz: f64) -> Result<Vec<PulseEvent>> {
        if !(j_hz.is_finite() && j_hz > 0.0) {
            return Err(Error::NonPositive {
                what: "J coupling",
                value: j_hz,
            });
        }
        if theta == 0.0 {
            return Ok(Vec::new());
        }
        let duration = 2.0 * theta.abs() / (PI * j_hz);
        let delay = PulseEvent::Delay {
            duration,
            active: vec![(a, b)],
        };
        if theta < 0.0 {
            Ok(vec![delay])
        } else {
            let flip = PulseEvent::Pulse {
                spin: b,
                axis: Axis::X,
                angle: PI,
            };
            Ok(vec![flip.clone(), delay, flip])
        }
    }

    /// Controlled phase `diag(1,1,1,e^{i phi})` up to a global phase:
    /// z rotations by `phi/2` on both spins plus a `phi/4` zz generator.
    pub fn controlled_phase(a: usize, b: usize, phi: f64, j_hz: f64) -> Result<Vec<PulseEvent>> {
        let mut events = z_rotation(a, phi / 2.0);
        events.extend(z_rotation(b, phi / 2.0));
        events.extend(zz_phase(a, b, phi / 4.0, j_hz)?);
        Ok(events)
    }

    /// `exp(i theta diag(1,1,1,-1))` on (a, b) up to a global phase:
    /// z rotations by `-theta` plus a `-theta/2` zz generator.
    pub fn controlled_z_phase(a: usize, b: usize, theta: f64, j_hz: f64) -> Result<Vec<PulseEvent>> {
        let mut events = z_rotation(a, -theta);
        events.extend(z_rotation(b, -theta));
        events.extend(zz_phase(a, b, -theta / 2.0, j_hz)?);
        Ok(events)
    }

    /// The two-qubit swapless QFT: H1, controlled phase pi/2, H2.
    pub fn qft_2q(j_hz: f64) -> Result<PulseSequence> {
        let mut events = hadamard(1);
        events.extend(controlled_phase(1, 2, FRAC_PI_2, j_hz)?);
        events.extend(hadamard(2));
        Ok(PulseSequence::new(events))
    }

    /// The kinetic step gates for two qubits at mass 1/2.
    pub fn kinetic_2q(dt: f64, j_hz: f64) -> Result<PulseSequence> {
        let pi2 = PI * PI;
        // ZPhase(theta) on a spin is Rz(-2 theta).
        let mut events = z_rotation(1, -pi2 / 4.0 * dt);
        events.extend(z_rotation(2, -pi2 * dt));
        events.extend(controlled_z_phase(1, 2, -pi2 / 2.0 * dt, j_hz)?);
        Ok(PulseSequence::new(events))
    }

    /// The potential kick for a double well: one z rotation by `2 V0 dt`
    /// on the well-defining spin.
    pub fn potential_kick_2q(v0: f64, dt: f64) -> PulseSequence {
        PulseSequence::new(z_rotation(2, 2.0 * v0 * dt))
    }
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

/// Parse a pulse program:
///
/// ```text
/// P <spin> <axis> <angle>      # axis in {x, y, -x, -y}, angle like pi/2
/// D <seconds> [<i>-<j>,...]    # delay with active couplings
/// ```
pub fn parse_pulse_sequence(text: &str) -> Result<PulseSequence> {
    let mut events = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens[0].to_ascii_uppercase().as_str() {
            "P" => {
                if tokens.len() != 4 {
                    return Err(Error::parse(line, "usage: P <spin> <axis> <angle>"));
                }
                let spin: usize = tokens[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad spin `{}`", tokens[1])))?;
                if spin == 0 {
                    return Err(Error::parse(line, "spins are numbered from 1"));
                }
                let axis = Axis::parse(tokens[2])
                    .ok_or_else(|| Error::parse(line, format!("unknown axis `{}`", tokens[2])))?;
                let angle = crate::gates::parse_angle(tokens[3])
                    .map_err(|m| Error::parse(line, m))?;
                events.push(PulseEvent::Pulse { spin, axis, angle });
            }
            "D" => {
                if tokens.len() < 2 || tokens.len() > 3 {
                    return Err(Error::parse(line, "usage: D <seconds> [i-j,...]"));
                }
                let duration: f64 = tokens[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad duration `{}`", tokens[1])))?;
                if !(duration.is_finite() && duration >= 0.0) {
                    return Err(Error::parse(line, "delay duration must be non-negative"));
                }
                let mut active = Vec::new();
                if tokens.len() == 3 {
                    for pair in tokens[2].split(',') {
                        let (a, b) = pair.split_once('-').ok_or_else(|| {
                            Error::parse(line, format!("bad coupling pair `{pair}`"))
                        })?;
                        let a: usize = a.parse().map_err(|_| {
                            Error::parse(line, format!("bad coupling pair `{pair}`"))
                        })?;
                        let b: usize = b.parse().map_err(|_| {
                            Error::parse(line, format!("bad coupling pair `{pair}`"))
                        })?;
                        if a == 0 || b == 0 || a == b {
                            return Err(Error::parse(
                                line,
                                format!("coupling pair `{pair}` must name two distinct spins"),
                            ));
                        }
                        active.push((a, b));
                    }
                }
                events.push(PulseEvent::Delay { duration, active });
            }
            other => return Err(Error::parse(line, format!("unknown event `{other}`"))),
        }
    }
    Ok(PulseSequence::new(events))
}

/// Parse a spin-system file:
///
/// ```text
/// spins 2            # optional; otherwise the largest index wins
/// nu 1 0.0           # chemical shift in Hz
/// J 1 2 215.15       # coupling in Hz
/// ```
pub fn parse_spin_system(text: &str) -> Result<SpinSystem> {
    enum Entry {
        Shift(usize, f64),
        Coupling(usize, usize, f64),
    }
    let mut declared: Option<usize> = None;
    let mut entries: Vec<(usize, Entry)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens[0].to_ascii_lowercase().as_str() {
            "spins" => {
                if tokens.len() != 2 || declared.is_some() {
                    return Err(Error::parse(line, "usage: spins <n> (once, first)"));
                }
                let n: usize = tokens[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad spin count `{}`", tokens[1])))?;
                declared = Some(n);
            }
            "nu" => {
                if tokens.len() != 3 {
                    return Err(Error::parse(line, "usage: nu <spin> <Hz>"));
                }
                let spin: usize = tokens[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad spin `{}`", tokens[1])))?;
                let hz: f64 = tokens[2]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad shift `{}`", tokens[2])))?;
                if spin == 0 || !hz.is_finite() {
                    return Err(Error::parse(line, "bad shift entry"));
                }
                entries.push((line, Entry::Shift(spin, hz)));
            }
            "j" => {
                if tokens.len() != 4 {
                    return Err(Error::parse(line, "usage: J <spin> <spin> <Hz>"));
                }
                let a: usize = tokens[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad spin `{}`", tokens[1])))?;
                let b: usize = tokens[2]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad spin `{}`", tokens[2])))?;
                let hz: f64 = tokens[3]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad coupling `{}`", tokens[3])))?;
                if a == 0 || b == 0 || a == b || !hz.is_finite() {
                    return Err(Error::parse(line, "bad coupling entry"));
                }
                entries.push((line, Entry::Coupling(a, b, hz)));
            }
            other => return Err(Error::parse(line, format!("unknown entry `{other}`"))),
        }
    }
    let max_index = entries
        .iter()
        .map(|(_, e)| match e {
            Entry::Shift(s, _) => *s,
            Entry::Coupling(a, b, _) => (*a).max(*b),
        })
        .max();
    let n_spins = match (declared, max_index) {
        (Some(n), _) => n,
        (None, Some(m)) => m,
        (None, None) => return Err(Error::parse(0, "empty spin system and no `spins` header")),
    };
    let mut sys = SpinSystem::on_resonance(n_spins)?;
    for (line, entry) in entries {
        let result = match entry {
            Entry::Shift(s, hz) => sys.set_shift(s, hz),
            Entry::Coupling(a, b, hz) => sys.set_coupling(a, b, hz),
        };
        result.map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok(sys)
}
