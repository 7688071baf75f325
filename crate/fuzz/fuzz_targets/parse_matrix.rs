#![no_main]

use libfuzzer_sys::fuzz_target;
use lpst_core::io::{parse_matrix, write_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(a) = parse_matrix(text) {
        let back = parse_matrix(&write_matrix(&a)).expect("written matrix parses");
        assert_eq!(back.entries(), a.entries());
        assert_eq!(back.domain().weights(), a.domain().weights());
        assert_eq!(back.codomain().weights(), a.codomain().weights());
    }
});
