#![no_main]

use libfuzzer_sys::fuzz_target;
use matchclust::graph_io::{parse_graph, write_graph, GraphFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_graph(text) {
        // Anything accepted must survive a write/parse round trip.
        for f in [GraphFormat::Edges, GraphFormat::Matrix] {
            assert_eq!(parse_graph(&write_graph(&g, f)).expect("written graph parses"), g);
        }
    }
});
