//! Diagonal potentials on the lattice, their Pauli-Z decomposition, and the
//! exact potential propagator Q.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::state::MAX_STATE_QUBITS;

/// How a potential was built; the double-well tag remembers its amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialTag {
    DoubleWell { v0: f64 },
    Free,
    Custom,
}

/// Diagonal potential: one real energy per lattice site.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    n_qubits: usize,
    values: Vec<f64>,
    tag: PotentialTag,
}

impl PotentialSpec {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tag(&self) -> PotentialTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidSize);
    }
    if n_qubits > MAX_STATE_QUBITS {
        return Err(Error::CapacityExceeded {
            n_qubits,
            max: MAX_STATE_QUBITS,
            what: "potential",
        });
    }
    Ok(())
}

/// The double-well potential `V0 * I (x) sigma_z [(x) I]`: +V0 where the
/// qubit-2 bit is 0, -V0 where it is 1. Total well-to-peak amplitude 2*V0.
pub fn double_well(n_qubits: usize, v0: f64) -> Result<PotentialSpec> {
    if !(n_qubits == 2 || n_qubits == 3) {
        return Err(Error::UnsupportedSize {
            n_qubits,
            what: "double-well potential",
            supported: "2 or 3 (use a custom potential otherwise)",
        });
    }
    if v0 < 0.0 || !v0.is_finite() {
        return Err(Error::NonPositive {
            what: "well amplitude V0",
            value: v0,
        });
    }
    let sites = 1usize << n_qubits;
    let bit2 = n_qubits - 2;
    let values = (0..sites)
        .map(|k| if k >> bit2 & 1 == 0 { v0 } else { -v0 })
        .collect();
    Ok(PotentialSpec {
        n_qubits,
        values,
        tag: PotentialTag::DoubleWell { v0 },
    })
}

/// Zero potential (free particle).
pub fn free_potential(n_qubits: usize) -> Result<PotentialSpec> {
    check_width(n_qubits)?;
    Ok(PotentialSpec {
        n_qubits,
        values: vec![0.0; 1 << n_qubits],
        tag: PotentialTag::Free,
    })
}

/// Arbitrary diagonal potential from explicit site energies.
pub fn custom_potential(n_qubits: usize, values: Vec<f64>) -> Result<PotentialSpec> {
    check_width(n_qubits)?;
    if values.len() != 1 << n_qubits {
        return Err(Error::DimensionMismatch {
            left: values.len(),
            right: 1 << n_qubits,
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonPositive {
            what: "potential entry (must be finite)",
            value: f64::NAN,
        });
    }
    Ok(PotentialSpec {
        n_qubits,
        values,
        tag: PotentialTag::Custom,
    })
}

/// Coefficients of a diagonal operator over {I, Z}^n strings, keyed by
/// strings like `"IZ"`, first character = qubit 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliZDecomposition {
    n_qubits: usize,
    coefficients: BTreeMap<String, f64>,
}

impl PauliZDecomposition {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Nonzero coefficients only.
    pub fn coefficients(&self) -> &BTreeMap<String, f64> {
        &self.coefficients
    }

    pub fn coefficient(&self, string: &str) -> f64 {
        self.coefficients.get(string).copied().unwrap_or(0.0)
    }

    /// Rebuild the diagonal: entry k = sum_s c_s * sign_s(k).
    pub fn reconstruct(&self) -> Vec<f64> {
        let sites = 1usize << self.n_qubits;
        let mut out = vec![0.0; sites];
        for (string, coeff) in &self.coefficients {
            for (k, slot) in out.iter_mut().enumerate() {
                *slot += coeff * string_sign(string, k, self.n_qubits);
            }
        }
        out
    }
}

fn string_sign(string: &str, k: usize, n_qubits: usize) -> f64 {
    let mut sign = 1.0;
    for (q, ch) in string.bytes().enumerate() {
        if ch == b'Z' && k >> (n_qubits - 1 - q) & 1 == 1 {
            sign = -sign;
        }
    }
    sign
}

/// Decompose a diagonal potential over {I, Z}^n:
/// `c_s = 2^{-n} sum_k V_k sign_s(k)`.
pub fn pauli_decompose(pot: &PotentialSpec) -> PauliZDecomposition {
    let n = pot.n_qubits();
    let sites = 1usize << n;
    let scale = 1.0 / sites as f64;
    let mut coefficients = BTreeMap::new();
    // Enumerate strings by bitmask: bit set means Z on that qubit.
    for s in 0..sites {
        let string: String = (0..n)
            .map(|q| if s >> (n - 1 - q) & 1 == 1 { 'Z' } else { 'I' })
            .collect();
        let mut c = 0.0;
        for (k, v) in pot.values().iter().enumerate() {
            // sign is -1 iff an odd number of Z positions see a 1 bit
            let parity = (s & k).count_ones() & 1;
            c += if parity == 1 { -v } else { *v };
        }
        c *= scale;
        if c != 0.0 {
            coefficients.insert(string, c);
        }
    }
    PauliZDecomposition {
        n_qubits: n,
        coefficients,
    }
}

impl fmt::Display for PauliZDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return writeln!(f, "(zero operator)");
        }
        for (string, coeff) in &self.coefficients {
            writeln!(f, "{string} {coeff}")?;
        }
        Ok(())
    }
}

/// Unit-modulus diagonal of Q = exp(-i V dt), one entry per site.
pub fn propagator_phases(pot: &PotentialSpec, dt: f64) -> Vec<Complex64> {
    pot.values()
        .iter()
        .map(|v| Complex64::from_polar(1.0, -v * dt))
        .collect()
}

/// Q as a symbolic diagonal gate over the full register.
pub fn potential_propagator(pot: &PotentialSpec, dt: f64) -> Gate {
    let angles = pot.values().iter().map(|v| -v * dt).collect();
    let targets = (1..=pot.n_qubits()).collect();
    Gate::diagonal_phase(angles, targets).expect("2^n angles for n targets")
}

/// If Q factorizes as a z-phase on a single qubit, return `(qubit, theta)`
/// with Q = exp(i theta sigma_z) on that qubit. Holds for the double-well
/// tags, where the potential is V0 times a single-qubit sigma_z.
pub fn factor_as_single_zphase(pot: &PotentialSpec, dt: f64) -> Option<(usize, f64)> {
    let n = pot.n_qubits();
    let phases = propagator_phases(pot, dt);
    'qubit: for q in 1..=n {
        let bit = n - q;
        // candidate theta from the first site with that bit clear
        let theta = -pot.values()[0] * dt * if 0 >> bit & 1 == 0 { 1.0 } else { -1.0 };
        let plus = Complex64::from_polar(1.0, theta);
        let minus = plus.conj();
        for (k, phase) in phases.iter().enumerate() {
            let expected = if k >> bit & 1 == 0 { plus } else { minus };
            if (phase - expected).norm() > 1e-12 {
                continue 'qubit;
            }
        }
        return Some((q, theta));
    }
    None
}

/// Parse a potential file: one real per line, 2^n lines total. Blank lines
/// and `#` comments are skipped.
pub fn parse_potential_file(text: &str) -> Result<PotentialSpec> {
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: f64 = body
            .parse()
            .map_err(|_| Error::parse(lineno + 1, format!("bad potential value `{body}`")))?;
        if !v.is_finite() {
            return Err(Error::parse(lineno + 1, "potential values must be finite"));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::parse(0, "potential file holds no values"));
    }
    if !values.len().is_power_of_two() {
        return Err(Error::parse(
            0,
            format!("{} values is not a power of two", values.len()),
        ));
    }
    let n_qubits = values.len().trailing_zeros() as usize;
    if n_qubits == 0 {
        return Err(Error::parse(0, "at least two sites required"));
    }
    custom_potential(n_qubits, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn double_well_two_qubit_pattern() {
        let pot = double_well(2, 10.0).unwrap();
        assert_eq!(pot.values(), &[10.0, -10.0, 10.0, -10.0]);
        assert_eq!(pot.tag(), PotentialTag::DoubleWell { v0: 10.0 });
    }

    #[test]
    fn double_well_three_qubit_pattern() {
        let pot = double_well(3, 100.0).unwrap();
        assert_eq!(
            pot.values(),
            &[100.0, 100.0, -100.0, -100.0, 100.0, 100.0, -100.0, -100.0]
        );
    }

    #[test]
    fn double_well_zero_amplitude_is_flat() {
        let pot = double_well(2, 0.0).unwrap();
        assert!(pot.is_zero());
    }

    #[test]
    fn double_well_rejects_other_widths() {
        assert!(matches!(
            double_well(4, 1.0),
            Err(Error::UnsupportedSize { .. })
        ));
        assert!(matches!(
            double_well(1, 1.0),
            Err(Error::UnsupportedSize { .. })
        ));
    }

    #[test]
    fn half_peaks_half_troughs() {
        for n in [2usize, 3] {
            let pot = double_well(n, 7.5).unwrap();
            let peaks = pot.values().iter().filter(|v| **v > 0.0).count();
            assert_eq!(peaks, 1 << (n - 1));
        }
    }

    #[test]
    fn decompose_double_well_is_single_iz_term() {
        let dec = pauli_decompose(&double_well(2, 10.0).unwrap());
        assert_eq!(dec.coefficients().len(), 1);
        assert_eq!(dec.coefficient("IZ"), 10.0);

        let dec3 = pauli_decompose(&double_well(3, 100.0).unwrap());
        assert_eq!(dec3.coefficients().len(), 1);
        assert_eq!(dec3.coefficient("IZI"), 100.0);
    }

    #[test]
    fn decompose_constant_is_identity_term() {
        let pot = custom_potential(2, vec![3.25; 4]).unwrap();
        let dec = pauli_decompose(&pot);
        assert_eq!(dec.coefficients().len(), 1);
        assert_eq!(dec.coefficient("II"), 3.25);
    }

    #[test]
    fn propagator_phases_for_paper_parameters() {
        // V0 dt = 1 rad exactly
        let pot = double_well(2, 10.0).unwrap();
        let q = propagator_phases(&pot, 0.1);
        let minus = Complex64::from_polar(1.0, -1.0);
        let plus = Complex64::from_polar(1.0, 1.0);
        for (k, phase) in q.iter().enumerate() {
            let expected = if k % 2 == 0 { minus } else { plus };
            assert!((phase - expected).norm() < 1e-14);
        }

        // 3-qubit: V0 dt = 40 rad, patterned by the qubit-2 bit
        let pot3 = double_well(3, 100.0).unwrap();
        let q3 = propagator_phases(&pot3, 0.4);
        for (k, phase) in q3.iter().enumerate() {
            let sign = if k >> 1 & 1 == 0 { -1.0 } else { 1.0 };
            let expected = Complex64::from_polar(1.0, sign * 40.0);
            assert!((phase - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn propagator_zero_dt_is_identity() {
        let pot = double_well(3, 100.0).unwrap();
        for phase in propagator_phases(&pot, 0.0) {
            assert_eq!(phase, Complex64::ONE);
        }
    }

    #[test]
    fn double_well_q_factors_on_qubit_two() {
        let pot = double_well(2, 10.0).unwrap();
        let (q, theta) = factor_as_single_zphase(&pot, 0.1).unwrap();
        assert_eq!(q, 2);
        assert!((theta - (-1.0)).abs() < 1e-14);

        let pot3 = double_well(3, 100.0).unwrap();
        let (q3, theta3) = factor_as_single_zphase(&pot3, 0.4).unwrap();
        assert_eq!(q3, 2);
        assert!((theta3 - (-40.0)).abs() < 1e-12);
    }

    #[test]
    fn generic_potential_does_not_factor() {
        let pot = custom_potential(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(factor_as_single_zphase(&pot, 0.3).is_none());
    }

    #[test]
    fn potential_gate_covers_all_qubits() {
        let pot = double_well(2, 10.0).unwrap();
        let gate = potential_propagator(&pot, 0.1);
        assert_eq!(gate.targets, vec![1, 2]);
    }

    #[test]
    fn decompose_reconstruct_holds_at_eight_qubits() {
        let values: Vec<f64> = (0..256)
            .map(|k| ((k * 2654435761u64 as usize) % 997) as f64 / 31.0 - 16.0)
            .collect();
        let pot = custom_potential(8, values.clone()).unwrap();
        let rebuilt = pauli_decompose(&pot).reconstruct();
        for (a, b) in rebuilt.iter().zip(&values) {
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn parse_potential_file_roundtrip() {
        let text = "# double well\n10\n-10\n10\n-10\n";
        let pot = parse_potential_file(text).unwrap();
        assert_eq!(pot.n_qubits(), 2);
        assert_eq!(pot.values(), &[10.0, -10.0, 10.0, -10.0]);
    }

    #[test]
    fn parse_potential_file_rejects_bad_input() {
        assert!(matches!(
            parse_potential_file("1\n2\n3\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_potential_file("1\nbogus\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_potential_file(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_potential_file("inf\n1\n"),
            Err(Error::Parse { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn decompose_reconstruct_is_identity(
            n in 1usize..=6,
            seed in proptest::collection::vec(-50.0f64..50.0, 64),
        ) {
            let sites = 1usize << n;
            let values: Vec<f64> = seed.into_iter().take(sites).collect();
            prop_assume!(values.len() == sites);
            let pot = custom_potential(n, values.clone()).unwrap();
            let dec = pauli_decompose(&pot);
            prop_assert!(dec.coefficients().len() <= sites);
            let rebuilt = dec.reconstruct();
            for (a, b) in rebuilt.iter().zip(&values) {
                prop_assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
            }
        }

        #[test]
        fn propagator_is_unit_modulus(
            n in 1usize..=5,
            dt in -2.0f64..2.0,
            seed in proptest::collection::vec(-30.0f64..30.0, 32),
        ) {
            let sites = 1usize << n;
            let values: Vec<f64> = seed.into_iter().take(sites).collect();
            prop_assume!(values.len() == sites);
            let pot = custom_potential(n, values).unwrap();
            for phase in propagator_phases(&pot, dt) {
                prop_assert!((phase.norm() - 1.0).abs() < 1e-14);
            }
        }
    }
}
