//! Momentum grid, bit-swapped QFT, kinetic propagator diagonal, and the
//! explicit two- and three-qubit gate decompositions of the kinetic step.
//!
//! The QFT here is the Hadamard/controlled-phase ladder *without* terminal
//! swap gates, so its output register is bit-reversed relative to the plain
//! transform: `<j|F|k> = 2^{-n/2} exp(2 pi i rev(j) k / 2^n)`. The kinetic
//! diagonal compensates by storing its phases in bit-reversed order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate};
use crate::linalg::{self, CMatrix};
use crate::state::StateVector;

/// Which reading of the momentum eigenvalue table to use.
///
/// `Standard` is the usual DFT frequency layout, `p_j = 2 pi (j - 2^n)/2^n`
/// on the upper half. `LiteralEq6` mirrors the upper half instead
/// (`2 pi (2^{n-1} - j)/2^n`); it is retained for documentation because it
/// disagrees with the three-qubit gate decomposition (the two agree for
/// n <= 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentumConvention {
    #[default]
    Standard,
    LiteralEq6,
}

impl MomentumConvention {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Some(Self::Standard),
            "literal-eq6" | "literal" => Some(Self::LiteralEq6),
            _ => None,
        }
    }
}

/// Momentum eigenvalues, one per lattice basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    n_qubits: usize,
    p: Vec<f64>,
}

impl MomentumGrid {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }
}

/// Momentum grid in the standard DFT convention.
pub fn momentum_grid(n_qubits: usize) -> Result<MomentumGrid> {
    momentum_grid_with(n_qubits, MomentumConvention::Standard)
}

pub fn momentum_grid_with(n_qubits: usize, conv: MomentumConvention) -> Result<MomentumGrid> {
    if n_qubits == 0 {
        return Err(Error::InvalidSize);
    }
    let sites = 1usize << n_qubits;
    let half = sites / 2;
    let step = 2.0 * std::f64::consts::PI / sites as f64;
    let p = (0..sites)
        .map(|j| {
            if j <= half {
                step * j as f64
            } else {
                match conv {
                    MomentumConvention::Standard => step * (j as f64 - sites as f64),
                    MomentumConvention::LiteralEq6 => step * (half as f64 - j as f64),
                }
            }
        })
        .collect();
    Ok(MomentumGrid { n_qubits, p })
}

/// Index permutation reversing each n-bit string; an involution.
pub fn bit_reversal_permutation(n_qubits: usize) -> Vec<usize> {
    let sites = 1usize << n_qubits;
    (0..sites)
        .map(|k| {
            let mut r = 0usize;
            for b in 0..n_qubits {
                if k >> b & 1 == 1 {
                    r |= 1 << (n_qubits - 1 - b);
                }
            }
            r
        })
        .collect()
}

/// Diagonal of the kinetic propagator, bit-reversed to pair with the
/// swapless QFT ladder: entry k is `exp(-i p_{rev(k)}^2 dt / (2m))`.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticDiag {
    n_qubits: usize,
    dt: f64,
    mass: f64,
    phases: Vec<Complex64>,
}

impl KineticDiag {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Bit-reversed phases, entry k = `exp(-i p_{rev(k)}^2 dt/(2m))`.
    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    /// Phases reordered to plain momentum order, entry j = `exp(-i p_j^2 dt/(2m))`.
    pub fn momentum_ordered(&self) -> Vec<Complex64> {
        let rev = bit_reversal_permutation(self.n_qubits);
        (0..self.phases.len())
            .map(|j| self.phases[rev[j]])
            .collect()
    }

    /// Dense diagonal matrix of the phases.
    pub fn as_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.phases.clone()))
    }
}

/// Kinetic diagonal in the standard momentum convention.
pub fn kinetic_diag(n_qubits: usize, dt: f64, mass: f64) -> Result<KineticDiag> {
    kinetic_diag_with(n_qubits, dt, mass, MomentumConvention::Standard)
}

pub fn kinetic_diag_with(
    n_qubits: usize,
    dt: f64,
    mass: f64,
    conv: MomentumConvention,
) -> Result<KineticDiag> {
    if mass <= 0.0 || !mass.is_finite() {
        return Err(Error::NonPositive {
            what: "mass",
            value: mass,
        });
    }
    if !dt.is_finite() {
        return Err(Error::NonPositive {
            what: "time step",
            value: dt,
        });
    }
    let grid = momentum_grid_with(n_qubits, conv)?;
    let rev = bit_reversal_permutation(n_qubits);
    let phases = (0..grid.values().len())
        .map(|k| {
            let p = grid.values()[rev[k]];
            Complex64::from_polar(1.0, -p * p * dt / (2.0 * mass))
        })
        .collect();
    Ok(KineticDiag {
        n_qubits,
        dt,
        mass,
        phases,
    })
}

/// The swapless QFT gate ladder: for each qubit i, a Hadamard followed by
/// controlled phases `pi / 2^{j-i}` against every later qubit j.
pub fn qft_circuit(n_qubits: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(n_qubits)?;
    for i in 1..=n_qubits {
        circuit.push(Gate::hadamard(i))?;
        for j in (i + 1)..=n_qubits {
            let angle = std::f64::consts::PI / (1u64 << (j - i)) as f64;
            circuit.push(Gate::controlled_phase(angle, i, j))?;
        }
    }
    Ok(circuit)
}

/// Dense matrix of the swapless ladder: row j of the plain transform moved
/// to row rev(j).
pub fn qft_matrix(n_qubits: usize) -> Result<CMatrix> {
    if n_qubits == 0 {
        return Err(Error::InvalidSize);
    }
    linalg::check_dense_cap(n_qubits, "QFT matrix")?;
    let sites = 1usize << n_qubits;
    let rev = bit_reversal_permutation(n_qubits);
    let scale = 1.0 / (sites as f64).sqrt();
    let step = 2.0 * std::f64::consts::PI / sites as f64;
    Ok(CMatrix::from_fn(sites, sites, |j, k| {
        Complex64::from_polar(scale, step * (rev[j] * k) as f64)
    }))
}

/// Apply the ladder in O(n 2^n): Hadamard on qubit i, then one fused pass
/// accumulating every controlled phase that targets i.
pub fn qft_apply_in_place(state: &mut StateVector) {
    let n = state.n_qubits();
    for i in 1..=n {
        hadamard_pass(state, i);
        fused_phase_pass(state, i, 1.0);
    }
}

/// Inverse ladder: same gates, reversed order, negated phases.
pub fn qft_apply_inverse_in_place(state: &mut StateVector) {
    let n = state.n_qubits();
    for i in (1..=n).rev() {
        fused_phase_pass(state, i, -1.0);
        hadamard_pass(state, i);
    }
}

pub fn qft_apply(state: &StateVector) -> StateVector {
    let mut out = state.clone();
    qft_apply_in_place(&mut out);
    out
}

pub fn qft_apply_inverse(state: &StateVector) -> StateVector {
    let mut out = state.clone();
    qft_apply_inverse_in_place(&mut out);
    out
}

fn hadamard_pass(state: &mut StateVector, qubit: usize) {
    let n = state.n_qubits();
    let mask = 1usize << (n - qubit);
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let amps = state.amplitudes_mut();
    for k in 0..amps.len() {
        if k & mask == 0 {
            let a = amps[k];
            let b = amps[k | mask];
            amps[k] = (a + b) * inv;
            amps[k | mask] = (a - b) * inv;
        }
    }
}

/// All controlled phases between `qubit` and later qubits in one pass: for
/// an index with the qubit bit set, the accumulated angle is
/// `pi * low / 2^{bit}` where `low` is the value of the lower bits.
fn fused_phase_pass(state: &mut StateVector, qubit: usize, sign: f64) {
    let n = state.n_qubits();
    let bit = n - qubit;
    if bit == 0 {
        return;
    }
    let mask = 1usize << bit;
    let low_mask = mask - 1;
    let unit = sign * std::f64::consts::PI / mask as f64;
    let amps = state.amplitudes_mut();
    for (k, amp) in amps.iter_mut().enumerate() {
        if k & mask != 0 {
            let low = k & low_mask;
            if low != 0 {
                *amp *= Complex64::from_polar(1.0, unit * low as f64);
            }
        }
    }
}

/// The published diagonal-gate decompositions of the kinetic step for two
/// and three qubits. Angle coefficients are pi^2/k; the product reproduces
/// [`kinetic_diag`] at mass 1/2 up to a global phase.
pub fn methods_decomposition_d(n_qubits: usize, dt: f64) -> Result<Circuit> {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    match n_qubits {
        2 => Circuit::from_gates(
            2,
            vec![
                Gate::z_phase(pi2 / 8.0 * dt, 1),
                Gate::z_phase(pi2 / 2.0 * dt, 2),
                Gate::zz_phase(-pi2 / 2.0 * dt, 1, 2),
            ],
        ),
        3 => Circuit::from_gates(
            3,
            vec![
                Gate::z_phase(pi2 / 32.0 * dt, 1),
                Gate::z_phase(pi2 / 8.0 * dt, 2),
                Gate::z_phase(pi2 / 2.0 * dt, 3),
                Gate::zz_phase(-pi2 / 2.0 * dt, 2, 3),
                Gate::zz_phase(-pi2 / 4.0 * dt, 1, 3),
                Gate::zz_phase(pi2 / 8.0 * dt, 1, 2),
            ],
        ),
        other => Err(Error::UnsupportedSize {
            n_qubits: other,
            what: "kinetic gate decomposition",
            supported: "2 or 3",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{circuit_unitary, global_phase_residual};
    use std::f64::consts::PI;

    #[test]
    fn momentum_grid_small_cases() {
        assert_eq!(momentum_grid(1).unwrap().values(), &[0.0, PI]);
        let g2 = momentum_grid(2).unwrap();
        let expect2 = [0.0, PI / 2.0, PI, -PI / 2.0];
        for (a, b) in g2.values().iter().zip(expect2) {
            assert!((a - b).abs() < 1e-15);
        }
        let g3 = momentum_grid(3).unwrap();
        let expect3 = [
            0.0,
            PI / 4.0,
            PI / 2.0,
            3.0 * PI / 4.0,
            PI,
            -3.0 * PI / 4.0,
            -PI / 2.0,
            -PI / 4.0,
        ];
        for (a, b) in g3.values().iter().zip(expect3) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn literal_convention_mirrors_upper_half() {
        let lit = momentum_grid_with(3, MomentumConvention::LiteralEq6).unwrap();
        let expect = [
            0.0,
            PI / 4.0,
            PI / 2.0,
            3.0 * PI / 4.0,
            PI,
            -PI / 4.0,
            -PI / 2.0,
            -3.0 * PI / 4.0,
        ];
        for (a, b) in lit.values().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        // both conventions coincide for n <= 2
        for n in 1..=2 {
            let s = momentum_grid(n).unwrap();
            let l = momentum_grid_with(n, MomentumConvention::LiteralEq6).unwrap();
            assert_eq!(s.values(), l.values());
        }
    }

    #[test]
    fn momentum_grid_rejects_zero_width() {
        assert!(matches!(momentum_grid(0), Err(Error::InvalidSize)));
    }

    #[test]
    fn grid_endpoints_and_parity() {
        for n in 1..=6 {
            let g = momentum_grid(n).unwrap();
            let sites = 1 << n;
            assert_eq!(g.values()[0], 0.0);
            assert_eq!(g.values()[sites / 2], PI);
            let max = g.values().iter().cloned().fold(0.0_f64, |m, p| m.max(p.abs()));
            assert!((max - PI).abs() < 1e-15);
            for j in 1..sites / 2 {
                assert!((g.values()[j] + g.values()[sites - j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bit_reversal_small_cases_and_involution() {
        assert_eq!(bit_reversal_permutation(2), vec![0, 2, 1, 3]);
        assert_eq!(bit_reversal_permutation(3), vec![0, 4, 2, 6, 1, 5, 3, 7]);
        for n in 1..=8 {
            let rev = bit_reversal_permutation(n);
            for k in 0..rev.len() {
                assert_eq!(rev[rev[k]], k);
            }
        }
    }

    #[test]
    fn kinetic_diag_two_qubit_values() {
        let kin = kinetic_diag(2, 0.1, 0.5).unwrap();
        let pi2 = PI * PI;
        let expected = [
            Complex64::ONE,
            Complex64::from_polar(1.0, -pi2 * 0.1),
            Complex64::from_polar(1.0, -pi2 * 0.025),
            Complex64::from_polar(1.0, -pi2 * 0.025),
        ];
        for (a, b) in kin.phases().iter().zip(expected) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn kinetic_diag_zero_dt_is_identity() {
        let kin = kinetic_diag(4, 0.0, 0.5).unwrap();
        for p in kin.phases() {
            assert!((p - Complex64::ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn kinetic_diag_three_qubit_entry_one() {
        // rev(1) = 4 and p_4 = pi, so entry 1 carries the full pi^2 phase.
        let kin = kinetic_diag(3, 0.4, 0.5).unwrap();
        let expected = Complex64::from_polar(1.0, -PI * PI * 0.4);
        assert!((kin.phases()[1] - expected).norm() < 1e-14);
    }

    #[test]
    fn kinetic_diag_rejects_bad_mass() {
        assert!(matches!(
            kinetic_diag(2, 0.1, 0.0),
            Err(Error::NonPositive { .. })
        ));
        assert!(matches!(
            kinetic_diag(2, 0.1, -1.0),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn kinetic_phases_unit_modulus_and_pair_symmetric() {
        for n in 1..=6 {
            let kin = kinetic_diag(n, 0.37, 0.5).unwrap();
            let rev = bit_reversal_permutation(n);
            let sites = 1 << n;
            assert!((kin.phases()[0] - Complex64::ONE).norm() < 1e-14);
            for p in kin.phases() {
                assert!((p.norm() - 1.0).abs() < 1e-14);
            }
            for j in 1..sites / 2 {
                let a = kin.phases()[rev[j]];
                let b = kin.phases()[rev[sites - j]];
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn momentum_ordered_view_inverts_the_bit_reversal() {
        let kin = kinetic_diag(3, 0.2, 0.5).unwrap();
        let grid = momentum_grid(3).unwrap();
        for (j, phase) in kin.momentum_ordered().iter().enumerate() {
            let p = grid.values()[j];
            let expected = Complex64::from_polar(1.0, -p * p * 0.2);
            assert!((phase - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn qft_of_ground_state_is_uniform() {
        for n in 1..=5 {
            let s = StateVector::basis_state(n, &"0".repeat(n)).unwrap();
            let out = qft_apply(&s);
            let expected = (1.0 / (1usize << n) as f64).sqrt();
            for a in out.amplitudes() {
                assert!((a - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn qft_matrix_two_qubit_entries_are_bit_swapped_dft() {
        let f = qft_matrix(2).unwrap();
        let rev = bit_reversal_permutation(2);
        for j in 0..4 {
            for k in 0..4 {
                let expected = Complex64::from_polar(0.5, PI * (rev[j] * k) as f64 / 2.0);
                assert!((f[(j, k)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn qft_matrix_is_unitary_for_small_widths() {
        for n in 1..=6 {
            let f = qft_matrix(n).unwrap();
            assert!(linalg::unitarity_defect(&f) < 1e-12);
        }
    }

    #[test]
    fn ladder_circuit_matches_dense_matrix() {
        for n in 1..=6 {
            let circuit = qft_circuit(n).unwrap();
            let via_gates = circuit_unitary(&circuit).unwrap();
            let direct = qft_matrix(n).unwrap();
            assert!(linalg::max_abs_diff(&via_gates, &direct) < 1e-12);
        }
    }

    #[test]
    fn fast_apply_matches_dense_matrix() {
        for n in 1..=5 {
            let dim = 1usize << n;
            let amps: Vec<Complex64> = (0..dim)
                .map(|k| Complex64::new(0.3 + k as f64, (k % 3) as f64 - 1.0))
                .collect();
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let amps: Vec<Complex64> = amps.into_iter().map(|a| a / norm).collect();
            let s = StateVector::new(n, amps).unwrap();

            let fast = qft_apply(&s);
            let f = qft_matrix(n).unwrap();
            for r in 0..dim {
                let dense: Complex64 = (0..dim).map(|k| f[(r, k)] * s.amplitudes()[k]).sum();
                assert!((dense - fast.amplitudes()[r]).norm() < 1e-12);
            }

            let back = qft_apply_inverse(&fast);
            for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kinetic_conjugation_keeps_the_eigenphase_multiset() {
        // F^{-1} D F has the same diagonal multiset as exp(-i p^2 dt / 2m).
        let n = 3;
        let dt = 0.4;
        let kin = kinetic_diag(n, dt, 0.5).unwrap();
        let grid = momentum_grid(n).unwrap();
        let mut got: Vec<(i64, i64)> = kin
            .phases()
            .iter()
            .map(|z| ((z.re * 1e10) as i64, (z.im * 1e10) as i64))
            .collect();
        let mut want: Vec<(i64, i64)> = grid
            .values()
            .iter()
            .map(|p| {
                let z = Complex64::from_polar(1.0, -p * p * dt);
                ((z.re * 1e10) as i64, (z.im * 1e10) as i64)
            })
            .collect();
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want);

        let f = qft_matrix(n).unwrap();
        let conj = f.adjoint() * kin.as_matrix() * &f;
        assert!(linalg::unitarity_defect(&conj) < 1e-12);
    }

    #[test]
    fn decomposition_matches_kinetic_diag_up_to_global_phase() {
        for (n, dts) in [(2usize, vec![0.05, 0.1, 0.7]), (3, vec![0.1, 0.4])] {
            for dt in dts {
                let circuit = methods_decomposition_d(n, dt).unwrap();
                let product = circuit_unitary(&circuit).unwrap();
                let target = kinetic_diag(n, dt, 0.5).unwrap().as_matrix();
                let residual = global_phase_residual(&product, &target).unwrap();
                assert!(residual < 1e-10, "n={n} dt={dt} residual={residual}");
            }
        }
    }

    #[test]
    fn decomposition_zero_dt_is_identity() {
        let circuit = methods_decomposition_d(2, 0.0).unwrap();
        let product = circuit_unitary(&circuit).unwrap();
        assert!(linalg::max_abs_diff(&product, &linalg::identity(4)) < 1e-14);
    }

    #[test]
    fn literal_convention_breaks_three_qubit_decomposition() {
        let circuit = methods_decomposition_d(3, 0.4).unwrap();
        let product = circuit_unitary(&circuit).unwrap();
        let literal = kinetic_diag_with(3, 0.4, 0.5, MomentumConvention::LiteralEq6)
            .unwrap()
            .as_matrix();
        let residual = global_phase_residual(&product, &literal).unwrap();
        assert!(residual > 0.1, "literal residual unexpectedly small: {residual}");
    }

    #[test]
    fn decomposition_rejects_other_widths() {
        assert!(matches!(
            methods_decomposition_d(4, 0.1),
            Err(Error::UnsupportedSize { .. })
        ));
    }
}
