//! Symbolic gate set and application kernel for the simulation circuits:
//! Hadamards, controlled phases, single-qubit Z phases, two-qubit
//! controlled-Z-type phases, and explicit diagonal phase lists.
//!
//! Conventions:
//! * qubits are numbered 1..=n with qubit 1 the most significant bit;
//! * `ZPhase(theta)` is the generator convention `exp(i theta sigma_z)`,
//!   so |0> picks up `+theta`;
//! * `ZzPhase(theta)` is `exp(i theta diag(1,1,1,-1))` on its two targets;
//! * gate application is index-pair iteration over the statevector,
//!   O(2^n) per gate. Dense export exists only for verification and
//!   multiplies later gates on the left.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::StateVector;

/// Gate family plus its angle parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    Hadamard,
    /// Phase `e^{i phi}` on the |11> component of the two targets.
    ControlledPhase(f64),
    /// `exp(i theta sigma_z)` on one target.
    ZPhase(f64),
    /// `exp(i theta diag(1,1,1,-1))` on two targets.
    ZzPhase(f64),
    /// Explicit phase angles, one per sub-basis state of the targets;
    /// the first target is the most significant sub-index bit.
    DiagonalPhase(Vec<f64>),
}

impl GateKind {
    fn arity(&self) -> Option<usize> {
        match self {
            GateKind::Hadamard | GateKind::ZPhase(_) => Some(1),
            GateKind::ControlledPhase(_) | GateKind::ZzPhase(_) => Some(2),
            GateKind::DiagonalPhase(_) => None,
        }
    }
}

/// One gate with ordered 1-based qubit targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self> {
        let expected = match &kind {
            GateKind::DiagonalPhase(phases) => {
                if phases.is_empty() || !phases.len().is_power_of_two() {
                    return Err(Error::DimensionMismatch {
                        left: phases.len(),
                        right: targets.len().max(1) * 2,
                    });
                }
                phases.len().trailing_zeros() as usize
            }
            other => other.arity().expect("fixed arity"),
        };
        if targets.len() != expected {
            return Err(Error::DimensionMismatch {
                left: targets.len(),
                right: expected,
            });
        }
        if targets.contains(&0) {
            return Err(Error::QubitOutOfRange {
                qubit: 0,
                n_qubits: 0,
            });
        }
        let mut seen = targets.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                left: seen.len(),
                right: targets.len(),
            });
        }
        Ok(Self { kind, targets })
    }

    pub fn hadamard(qubit: usize) -> Self {
        Self::new(GateKind::Hadamard, vec![qubit]).expect("single target")
    }

    pub fn controlled_phase(phi: f64, a: usize, b: usize) -> Self {
        Self::new(GateKind::ControlledPhase(phi), vec![a, b]).expect("two targets")
    }

    pub fn z_phase(theta: f64, qubit: usize) -> Self {
        Self::new(GateKind::ZPhase(theta), vec![qubit]).expect("single target")
    }

    pub fn zz_phase(theta: f64, a: usize, b: usize) -> Self {
        Self::new(GateKind::ZzPhase(theta), vec![a, b]).expect("two targets")
    }

    pub fn diagonal_phase(angles: Vec<f64>, targets: Vec<usize>) -> Result<Self> {
        Self::new(GateKind::DiagonalPhase(angles), targets)
    }

    fn check_targets(&self, n_qubits: usize) -> Result<()> {
        for &q in &self.targets {
            if q == 0 || q > n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        Ok(())
    }

    /// Whether the gate is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        !matches!(self.kind, GateKind::Hadamard)
    }
}

/// Ordered list of gates over a fixed register width.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidSize);
        }
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check_targets(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut circuit = Self::new(n_qubits)?;
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    /// Apply every gate in order to a copy of `state`.
    pub fn apply_to(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub fn apply_in_place(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: state.n_qubits(),
                right: self.n_qubits,
            });
        }
        for gate in &self.gates {
            apply_gate_in_place(state, gate)?;
        }
        Ok(())
    }
}

fn bit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - qubit)
}

/// Apply one gate to `state`, returning the transformed state.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    apply_gate_in_place(&mut out, gate)?;
    Ok(out)
}

/// In-place kernel behind [`apply_gate`].
pub fn apply_gate_in_place(state: &mut StateVector, gate: &Gate) -> Result<()> {
    let n = state.n_qubits();
    gate.check_targets(n)?;
    let dim = state.len();
    let amps = state.amplitudes_mut();
    match &gate.kind {
        GateKind::Hadamard => {
            let mask = bit_mask(n, gate.targets[0]);
            let inv = std::f64::consts::FRAC_1_SQRT_2;
            for k in 0..dim {
                if k & mask == 0 {
                    let a = amps[k];
                    let b = amps[k | mask];
                    amps[k] = (a + b) * inv;
                    amps[k | mask] = (a - b) * inv;
                }
            }
        }
        GateKind::ControlledPhase(phi) => {
            let m = bit_mask(n, gate.targets[0]) | bit_mask(n, gate.targets[1]);
            let phase = Complex64::from_polar(1.0, *phi);
            for (k, amp) in amps.iter_mut().enumerate() {
                if k & m == m {
                    *amp *= phase;
                }
            }
        }
        GateKind::ZPhase(theta) => {
            let mask = bit_mask(n, gate.targets[0]);
            let plus = Complex64::from_polar(1.0, *theta);
            let minus = plus.conj();
            for (k, amp) in amps.iter_mut().enumerate() {
                *amp *= if k & mask == 0 { plus } else { minus };
            }
        }
        GateKind::ZzPhase(theta) => {
            let m = bit_mask(n, gate.targets[0]) | bit_mask(n, gate.targets[1]);
            let plus = Complex64::from_polar(1.0, *theta);
            let minus = plus.conj();
            for (k, amp) in amps.iter_mut().enumerate() {
                *amp *= if k & m == m { minus } else { plus };
            }
        }
        GateKind::DiagonalPhase(angles) => {
            let phases: Vec<Complex64> = angles
                .iter()
                .map(|&t| Complex64::from_polar(1.0, t))
                .collect();
            for (k, amp) in amps.iter_mut().enumerate() {
                *amp *= phases[sub_index(k, n, &gate.targets)];
            }
        }
    }
    Ok(())
}

/// Sub-basis index of `k` restricted to `targets`, first target most
/// significant.
fn sub_index(k: usize, n_qubits: usize, targets: &[usize]) -> usize {
    let mut sub = 0usize;
    for &q in targets {
        sub = (sub << 1) | ((k >> (n_qubits - q)) & 1);
    }
    sub
}

/// Dense unitary of one gate embedded on an n-qubit register.
///
/// Built entrywise from the gate's small matrix, independently of the
/// statevector kernel, so the two routes can check each other.
pub fn gate_matrix(gate: &Gate, n_qubits: usize) -> Result<CMatrix> {
    gate.check_targets(n_qubits)?;
    linalg::check_dense_cap(n_qubits, "gate matrix")?;
    let small = small_matrix(&gate.kind);
    let dim = 1 << n_qubits;
    let outside_mask: usize = {
        let mut m = dim - 1;
        for &q in &gate.targets {
            m &= !bit_mask(n_qubits, q);
        }
        m
    };
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        for row in 0..dim {
            if row & outside_mask == col & outside_mask {
                let v = small[(
                    sub_index(row, n_qubits, &gate.targets),
                    sub_index(col, n_qubits, &gate.targets),
                )];
                if v != Complex64::ZERO {
                    out[(row, col)] = v;
                }
            }
        }
    }
    Ok(out)
}

fn small_matrix(kind: &GateKind) -> CMatrix {
    let phase = |t: f64| Complex64::from_polar(1.0, t);
    match kind {
        GateKind::Hadamard => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
        }
        GateKind::ControlledPhase(phi) => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            vec![Complex64::ONE, Complex64::ONE, Complex64::ONE, phase(*phi)],
        )),
        GateKind::ZPhase(theta) => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            phase(*theta),
            phase(-*theta),
        ])),
        GateKind::ZzPhase(theta) => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            phase(*theta),
            phase(*theta),
            phase(*theta),
            phase(-*theta),
        ])),
        GateKind::DiagonalPhase(angles) => CMatrix::from_diagonal(
            &nalgebra::DVector::from_vec(angles.iter().map(|&t| phase(t)).collect()),
        ),
    }
}

/// Ordered dense product of a circuit; later gates multiply on the left.
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMatrix> {
    linalg::check_dense_cap(circuit.n_qubits(), "circuit unitary")?;
    let dim = 1 << circuit.n_qubits();
    let mut u = linalg::identity(dim);
    for gate in circuit.gates() {
        u = gate_matrix(gate, circuit.n_qubits())? * u;
    }
    Ok(u)
}

/// Smallest max-entry residual `|a - c b|` over the unit-modulus scalar `c`
/// picked from the largest-magnitude entry of `b`.
pub fn global_phase_residual(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            left: a.nrows() * a.ncols(),
            right: b.nrows() * b.ncols(),
        });
    }
    let (mut best, mut best_mag) = (0, 0.0f64);
    for (idx, v) in b.iter().enumerate() {
        if v.norm() > best_mag {
            best_mag = v.norm();
            best = idx;
        }
    }
    if best_mag == 0.0 || a.iter().all(|v| *v == Complex64::ZERO) {
        return Err(Error::ZeroMatrix);
    }
    let ratio = a[best] / b[best];
    if ratio.norm() == 0.0 {
        // a vanishes where b peaks; no phase can reconcile the two.
        return Ok(best_mag.max(linalg::max_abs_diff(a, b)));
    }
    let c = ratio / ratio.norm();
    let shifted = b.map(|v| v * c);
    Ok(linalg::max_abs_diff(a, &shifted))
}

/// True iff `a == c b` for some unit-modulus scalar within `tol`.
pub fn unitaries_equal_up_to_global_phase(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<bool> {
    Ok(global_phase_residual(a, b)? <= tol)
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Parse an angle literal: a float, `pi`, `pi/4`, `2pi`, `-3pi/8`, ...
pub fn parse_angle(token: &str) -> std::result::Result<f64, String> {
    let t = token.trim().to_ascii_lowercase();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
    };
    if body.is_empty() {
        return Err(format!("empty angle `{token}`"));
    }
    let value = match body.find("pi") {
        None => body
            .parse::<f64>()
            .map_err(|_| format!("bad angle `{token}`"))?,
        Some(pos) => {
            let coeff = &body[..pos];
            let tail = &body[pos + 2..];
            let c = if coeff.is_empty() {
                1.0
            } else {
                coeff
                    .parse::<f64>()
                    .map_err(|_| format!("bad angle coefficient in `{token}`"))?
            };
            let d = if tail.is_empty() {
                1.0
            } else if let Some(den) = tail.strip_prefix('/') {
                let d = den
                    .parse::<f64>()
                    .map_err(|_| format!("bad angle denominator in `{token}`"))?;
                if d == 0.0 {
                    return Err(format!("zero denominator in `{token}`"));
                }
                d
            } else {
                return Err(format!("bad angle `{token}`"));
            };
            c * std::f64::consts::PI / d
        }
    };
    if !value.is_finite() {
        return Err(format!("non-finite angle `{token}`"));
    }
    Ok(sign * value)
}

fn parse_qubit(token: &str) -> std::result::Result<usize, String> {
    let body = token
        .strip_prefix('q')
        .or_else(|| token.strip_prefix('Q'))
        .ok_or_else(|| format!("expected qubit token like `q1`, got `{token}`"))?;
    let q: usize = body
        .parse()
        .map_err(|_| format!("bad qubit token `{token}`"))?;
    if q == 0 {
        return Err("qubits are numbered from 1".into());
    }
    Ok(q)
}

/// Parse the one-gate-per-line circuit format:
///
/// ```text
/// qubits 2        # optional width header
/// H q1
/// CP pi/2 q1 q2
/// ZP -0.5 q2
/// ZZ pi/8 q1 q2
/// DIAG 0 pi/2 pi -pi/2 q1 q2
/// ```
///
/// Without a header the width is the largest qubit mentioned.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut declared: Option<usize> = None;
    let mut gates: Vec<(usize, Gate)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let op = tokens[0].to_ascii_uppercase();
        match op.as_str() {
            "QUBITS" => {
                if tokens.len() != 2 {
                    return Err(Error::parse(line, "usage: qubits <n>"));
                }
                if !gates.is_empty() || declared.is_some() {
                    return Err(Error::parse(line, "qubits header must come first"));
                }
                let n: usize = tokens[1]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad width `{}`", tokens[1])))?;
                if n == 0 {
                    return Err(Error::parse(line, "width must be at least 1"));
                }
                declared = Some(n);
            }
            "H" => {
                if tokens.len() != 2 {
                    return Err(Error::parse(line, "usage: H q<i>"));
                }
                let q = parse_qubit(tokens[1]).map_err(|m| Error::parse(line, m))?;
                gates.push((line, Gate::hadamard(q)));
            }
            "CP" | "ZZ" => {
                if tokens.len() != 4 {
                    return Err(Error::parse(line, format!("usage: {op} <angle> q<i> q<j>")));
                }
                let angle = parse_angle(tokens[1]).map_err(|m| Error::parse(line, m))?;
                let a = parse_qubit(tokens[2]).map_err(|m| Error::parse(line, m))?;
                let b = parse_qubit(tokens[3]).map_err(|m| Error::parse(line, m))?;
                if a == b {
                    return Err(Error::parse(line, "two-qubit gate needs distinct targets"));
                }
                let gate = if op == "CP" {
                    Gate::controlled_phase(angle, a, b)
                } else {
                    Gate::zz_phase(angle, a, b)
                };
                gates.push((line, gate));
            }
            "ZP" => {
                if tokens.len() != 3 {
                    return Err(Error::parse(line, "usage: ZP <angle> q<i>"));
                }
                let angle = parse_angle(tokens[1]).map_err(|m| Error::parse(line, m))?;
                let q = parse_qubit(tokens[2]).map_err(|m| Error::parse(line, m))?;
                gates.push((line, Gate::z_phase(angle, q)));
            }
            "DIAG" => {
                let mut angles = Vec::new();
                let mut qubits = Vec::new();
                for tok in &tokens[1..] {
                    if tok.starts_with('q') || tok.starts_with('Q') {
                        qubits.push(parse_qubit(tok).map_err(|m| Error::parse(line, m))?);
                    } else if qubits.is_empty() {
                        angles.push(parse_angle(tok).map_err(|m| Error::parse(line, m))?);
                    } else {
                        return Err(Error::parse(line, "phases must precede qubit targets"));
                    }
                }
                if qubits.is_empty() {
                    return Err(Error::parse(line, "DIAG needs at least one qubit target"));
                }
                if angles.len() != 1 << qubits.len() {
                    return Err(Error::parse(
                        line,
                        format!(
                            "DIAG on {} qubit(s) needs {} phases, got {}",
                            qubits.len(),
                            1 << qubits.len(),
                            angles.len()
                        ),
                    ));
                }
                let gate = Gate::diagonal_phase(angles, qubits)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
                gates.push((line, gate));
            }
            other => {
                return Err(Error::parse(line, format!("unknown gate `{other}`")));
            }
        }
    }

    let max_target = gates
        .iter()
        .flat_map(|(_, g)| g.targets.iter().copied())
        .max();
    let n_qubits = match (declared, max_target) {
        (Some(n), _) => n,
        (None, Some(m)) => m,
        (None, None) => return Err(Error::parse(0, "empty circuit and no `qubits` header")),
    };
    let mut circuit = Circuit::new(n_qubits)?;
    for (line, gate) in gates {
        circuit
            .push(gate)
            .map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok(circuit)
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GateKind::Hadamard => write!(f, "H q{}", self.targets[0]),
            GateKind::ControlledPhase(phi) => {
                write!(f, "CP {} q{} q{}", phi, self.targets[0], self.targets[1])
            }
            GateKind::ZPhase(theta) => write!(f, "ZP {} q{}", theta, self.targets[0]),
            GateKind::ZzPhase(theta) => {
                write!(f, "ZZ {} q{} q{}", theta, self.targets[0], self.targets[1])
            }
            GateKind::DiagonalPhase(angles) => {
                write!(f, "DIAG")?;
                for a in angles {
                    write!(f, " {a}")?;
                }
                for q in &self.targets {
                    write!(f, " q{q}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for gate in &self.gates {
            writeln!(f, "{gate}")?;
        }
        Ok(())
    }
}
