#![no_main]

use libfuzzer_sys::fuzz_target;
use lpst_cli::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::from_toml(text, None) {
        let back = RunConfig::from_toml(&cfg.to_toml(), None).expect("written config parses");
        assert_eq!(back, cfg);
    }
});
