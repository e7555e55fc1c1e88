//! Instance JSON must never panic; valid parses must round-trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(instance) = lbu::io::instance_from_json(text) {
            let serialized = lbu::io::instance_to_json(&instance);
            let again = lbu::io::instance_from_json(&serialized)
                .expect("serialized instances must reparse");
            assert_eq!(instance, again);
        }
    }
});
