#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(sys) = qtunnel::nmr::parse_spin_system(data) {
        // the natural Hamiltonian of any accepted system is diagonal
        let h = qtunnel::nmr::nmr_hamiltonian(&sys);
        for r in 0..h.nrows() {
            for c in 0..h.ncols() {
                if r != c {
                    assert_eq!(h[(r, c)].norm(), 0.0);
                }
            }
        }
    }
});
