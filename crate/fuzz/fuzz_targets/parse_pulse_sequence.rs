#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(seq) = qtunnel::nmr::parse_pulse_sequence(data) {
        // accepted programs simulate to a unitary on a small system
        if seq.events().len() <= 64 {
            let sys = qtunnel::nmr::SpinSystem::chloroform();
            if let Ok(u) = qtunnel::nmr::simulate_sequence(&sys, &seq) {
                assert!(qtunnel::linalg::unitarity_defect(&u) < 1e-9);
            }
        }
    }
});
