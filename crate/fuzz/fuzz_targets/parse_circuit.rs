#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(circuit) = qtunnel::gates::parse_circuit(data) {
        // print/reparse is lossless for every accepted circuit
        let printed = circuit.to_string();
        let reparsed = qtunnel::gates::parse_circuit(&printed).expect("printed form must parse");
        assert_eq!(circuit, reparsed);
    }
});
