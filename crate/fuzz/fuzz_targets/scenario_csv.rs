//! Scenario CSV must never panic; valid parses must round-trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(scenarios) = lbu::io::scenarios_from_csv(text) {
            let serialized = lbu::io::scenarios_to_csv(&scenarios);
            let again = lbu::io::scenarios_from_csv(&serialized)
                .expect("serialized scenarios must reparse");
            assert_eq!(scenarios, again);
        }
    }
});
