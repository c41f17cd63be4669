#![no_main]

use libfuzzer_sys::fuzz_target;
use vdecomp::lp::{dump_problem, parse_problem};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_problem(text) {
        // keep solving out of the loop; parsing and dumping are what is under test
        let back = parse_problem(&dump_problem(&p)).expect("dump parses");
        assert_eq!(back, p);
    }
});
