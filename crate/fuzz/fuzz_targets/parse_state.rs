#![no_main]

use libfuzzer_sys::fuzz_target;
use lpst_core::io::{parse_state, write_state};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse_state(text) {
        assert_eq!(parse_state(&write_state(&s)).expect("written state parses"), s);
    }
});
