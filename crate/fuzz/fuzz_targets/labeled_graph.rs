//! Labeled graph files must never panic; valid parses must round-trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(labeled) = lbu::io::labeled_graph_from_text(text) {
            let serialized = lbu::io::labeled_graph_to_text(
                &labeled.graph,
                &labeled.region_of,
                &labeled.region_labels,
            );
            let again = lbu::io::labeled_graph_from_text(&serialized)
                .expect("serialized graphs must reparse");
            assert_eq!(labeled.graph, again.graph);
            assert_eq!(labeled.region_of, again.region_of);
        }
    }
});
