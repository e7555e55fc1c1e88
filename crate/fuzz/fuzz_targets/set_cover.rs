//! Set cover JSON parsing must never panic, and accepted instances must
//! pass their own validation.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cover) = lbu::io::set_cover_from_json(text) {
            cover.validate().expect("parsed covers are valid");
            // Generation may reject uncovered elements; must not panic.
            let _ = lbu::sampling::gen_from_set_cover(&cover);
        }
    }
});
