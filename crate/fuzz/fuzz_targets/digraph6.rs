#![no_main]

use libfuzzer_sys::fuzz_target;
use vdecomp::io::{decode_digraph6, encode_record};

// accepted records re-encode to the trimmed input
fuzz_target!(|data: &[u8]| {
    if let Ok(record) = decode_digraph6(data) {
        let line = encode_record(&record).expect("decoded record encodes");
        let again = decode_digraph6(line.as_bytes()).expect("encoded record decodes");
        assert_eq!(again, record);
        if let Ok(t) = record.to_tournament("fuzz") {
            assert!(t.is_tournament());
        }
    }
});
