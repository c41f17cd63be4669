#![no_main]

use libfuzzer_sys::fuzz_target;
use vdecomp::ratio::{fmt_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(text) {
        assert_eq!(parse_rational(&fmt_rational(&q)).expect("formatted value parses"), q);
    }
});
