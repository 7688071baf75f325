#![no_main]

use libfuzzer_sys::fuzz_target;
use lpst_core::io::{parse_uhf_spec, write_uhf_spec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = parse_uhf_spec(text) {
        assert_eq!(parse_uhf_spec(&write_uhf_spec(&f)).expect("written spec parses"), f);
    }
});
