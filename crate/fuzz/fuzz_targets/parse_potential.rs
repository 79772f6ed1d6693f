#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(pot) = qtunnel::potential::parse_potential_file(data) {
        if pot.n_qubits() <= 8 {
            // the Pauli view reconstructs every accepted diagonal
            let rebuilt = qtunnel::potential::pauli_decompose(&pot).reconstruct();
            for (a, b) in rebuilt.iter().zip(pot.values()) {
                assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
            }
        }
    }
});
