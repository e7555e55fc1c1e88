//! DIMACS-style CNF parsing must never panic, and every accepted formula
//! must pass its own validation and feed the 3-SAT generator.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(formula) = lbu::io::cnf_from_text(text) {
            formula.validate().expect("parsed formulas are valid");
            lbu::sampling::gen_from_3sat(&formula).expect("valid formulas generate");
        }
    }
});
