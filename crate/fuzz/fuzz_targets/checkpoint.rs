#![no_main]

use libfuzzer_sys::fuzz_target;
use vdecomp::io::checkpoint;

fuzz_target!(|data: &[u8]| {
    if let Ok(state) = checkpoint::decode(data) {
        let bytes = checkpoint::encode(&state).expect("decoded state encodes");
        assert_eq!(checkpoint::decode(&bytes).expect("re-encoded state decodes"), state);
    }
});
