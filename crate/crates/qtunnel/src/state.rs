//! Lattice-encoded wavefunction state: statevectors, density matrices,
//! probability readout, fidelity, and the Pauli tomography identity.
//!
//! Basis convention: index `k` is the binary value of the label with
//! **qubit 1 as most significant bit**, so `|01>` is index 1 (lattice
//! site 2) and `|110>` is index 6 (site 7). Site numbering in outputs is
//! `k + 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Hard cap on register width for the flat amplitude array.
pub const MAX_STATE_QUBITS: usize = 24;

/// Norm tolerance accepted by [`StateVector::new`].
pub const NORM_TOL: f64 = 1e-12;

/// Uniform 1-D lattice the register encodes. The spacing is fixed to 1 so
/// site coordinates and the momentum grid share one unit system.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    n_qubits: usize,
    spacing: f64,
}

impl LatticeSpec {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(Self {
            n_qubits,
            spacing: 1.0,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of lattice sites, 2^n.
    pub fn sites(&self) -> usize {
        1 << self.n_qubits
    }

    /// Periodic box length L = 2^n * spacing.
    pub fn length(&self) -> f64 {
        self.sites() as f64 * self.spacing
    }

    /// Site-centre coordinate x_k = (k + 1/2) * spacing.
    pub fn site_coord(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.spacing
    }

    pub fn site_coords(&self) -> Vec<f64> {
        (0..self.sites()).map(|k| self.site_coord(k)).collect()
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
            what: "statevector",
        });
    }
    Ok(())
}

/// Normalized n-qubit statevector over the lattice basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wrap an amplitude vector, validating length and unit norm.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_width(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                left: amplitudes.len(),
                right: 1 << n_qubits,
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state from a bitstring label such as `"01"`.
    pub fn basis_state(n_qubits: usize, label: &str) -> Result<Self> {
        check_width(n_qubits)?;
        if label.len() != n_qubits || !label.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::InvalidLabel {
                label: label.to_string(),
                n_qubits,
            });
        }
        let index = usize::from_str_radix(label, 2).expect("validated bitstring");
        let mut amplitudes = vec![Complex64::ZERO; 1 << n_qubits];
        amplitudes[index] = Complex64::ONE;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Crate-internal constructor for amplitudes produced by unitary
    /// application, where the norm is preserved by construction; skips the
    /// norm check so slow float drift in long runs stays observable
    /// instead of being rejected.
    pub(crate) fn from_unitary_output(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Dimension 2^n; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// |amplitude_k|^2 for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Bitstring label of basis index `k`, qubit 1 first.
    pub fn label_of(&self, k: usize) -> String {
        (0..self.n_qubits)
            .map(|q| {
                if (k >> (self.n_qubits - 1 - q)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    /// Bit of basis index `k` belonging to 1-based `qubit` (qubit 1 = MSB).
    pub fn qubit_bit(&self, k: usize, qubit: usize) -> bool {
        (k >> (self.n_qubits - qubit)) & 1 == 1
    }

    /// Dense |psi><psi| projector.
    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        linalg::check_dense_cap(self.n_qubits, "density matrix")?;
        let dim = self.len();
        let entries = CMatrix::from_fn(dim, dim, |r, c| {
            self.amplitudes[r] * self.amplitudes[c].conj()
        });
        Ok(DensityMatrix {
            n_qubits: self.n_qubits,
            entries,
        })
    }
}

/// Dense density matrix (Hermitian, unit trace).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Wrap a matrix, validating hermiticity and unit trace. Positivity is
    /// checked where it matters, in [`fidelity`].
    pub fn new(n_qubits: usize, entries: CMatrix) -> Result<Self> {
        check_width(n_qubits)?;
        linalg::check_dense_cap(n_qubits, "density matrix")?;
        let dim = 1 << n_qubits;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: entries.nrows(),
                right: dim,
            });
        }
        let defect = linalg::hermiticity_defect(&entries);
        if defect > 1e-12 {
            return Err(Error::NotHermitian { defect });
        }
        let trace: Complex64 = entries.diagonal().iter().sum();
        if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
            return Err(Error::NotNormalized { norm: trace.re });
        }
        Ok(Self { n_qubits, entries })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Diagonal of the density matrix: the site probability distribution.
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }
}

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
///
/// For pure states this reduces to |<psi|phi>|^2.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::DimensionMismatch {
            left: a.entries.nrows(),
            right: b.entries.nrows(),
        });
    }
    let root_a = linalg::sqrtm_psd(&a.entries, 1e-10)?;
    // Reject a non-PSD second argument before taking eigenvalues of the product.
    let (b_eigs, _) = linalg::eigh(&b.entries)?;
    let min_b = b_eigs.iter().copied().fold(f64::INFINITY, f64::min);
    if min_b < -1e-10 {
        return Err(Error::NotPositiveSemidefinite { min_eig: min_b });
    }
    let inner = &root_a * &b.entries * &root_a;
    let (eigs, _) = linalg::eigh(&inner)?;
    let trace_sqrt: f64 = eigs.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok((trace_sqrt * trace_sqrt).clamp(0.0, 1.0))
}

/// One Pauli operator on a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pauli {
    I,
    X,
    Y,
    Z,
}

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// Reconstruct |psi><psi| from all 4^n Pauli-string expectation values:
/// rho = 2^{-n} sum_P <P> P.
///
/// This is the tomography self-check: the result equals the outer product
/// of the input up to numerical noise.
pub fn pauli_tomography_roundtrip(state: &StateVector) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    linalg::check_dense_cap(n, "tomography reconstruction")?;
    let dim = state.len();
    let amps = state.amplitudes();
    let mut rho = CMatrix::zeros(dim, dim);
    let scale = 1.0 / dim as f64;

    let mut string = vec![Pauli::I; n];
    for code in 0..4usize.pow(n as u32) {
        let mut c = code;
        for slot in string.iter_mut() {
            *slot = PAULIS[c % 4];
            c /= 4;
        }
        // P|k> = phase(k) |k ^ flip_mask>
        let mut flip_mask = 0usize;
        for (q, p) in string.iter().enumerate() {
            if matches!(p, Pauli::X | Pauli::Y) {
                flip_mask |= 1 << (n - 1 - q);
            }
        }
        let phase = |k: usize| -> Complex64 {
            let mut ph = Complex64::ONE;
            for (q, p) in string.iter().enumerate() {
                let bit = (k >> (n - 1 - q)) & 1;
                match p {
                    Pauli::I | Pauli::X => {}
                    Pauli::Y => {
                        ph *= if bit == 0 {
                            Complex64::I
                        } else {
                            -Complex64::I
                        }
                    }
                    Pauli::Z => {
                        if bit == 1 {
                            ph = -ph;
                        }
                    }
                }
            }
            ph
        };
        let expectation: Complex64 = (0..dim)
            .map(|k| amps[k ^ flip_mask].conj() * phase(k) * amps[k])
            .sum();
        let weight = expectation * scale;
        for k in 0..dim {
            rho[(k ^ flip_mask, k)] += weight * phase(k);
        }
    }
    DensityMatrix::new(n, rho)
}
