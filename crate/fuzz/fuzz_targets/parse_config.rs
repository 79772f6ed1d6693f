#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = qtunnel::runner::parse_config(data) {
        // parse_config only returns validated configs
        assert!(cfg.validate().is_ok());
    }
});
