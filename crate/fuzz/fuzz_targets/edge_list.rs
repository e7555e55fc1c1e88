//! Plain edge lists must never panic, and accepted graphs must be valid
//! inputs to the vertex cover generator's own validation.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(graph) = lbu::io::edge_list_from_text(text) {
            assert!(!graph.edges.is_empty());
            // May legitimately reject (duplicates, loops); must not panic.
            let _ = lbu::sampling::gen_from_vertex_cover(&graph);
        }
    }
});
