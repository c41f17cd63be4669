#![no_main]

use libfuzzer_sys::fuzz_target;
use vdecomp::io::{decode_graph6, encode_graph6};

fuzz_target!(|data: &[u8]| {
    if let Ok(mut graph) = decode_graph6(data) {
        let line = encode_graph6(&graph).expect("decoded graph encodes");
        let mut again = decode_graph6(line.as_bytes()).expect("encoded graph decodes");
        graph.edges.sort_unstable();
        again.edges.sort_unstable();
        assert_eq!(again, graph);
    }
});
