#![no_main]

use libfuzzer_sys::fuzz_target;
use vkg_core::catalogue::{format_presentation, parse_catalogue, parse_raw};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let raw = parse_raw(text, "fuzz");
    let full = parse_catalogue(text, "fuzz");
    // anything the full loader accepts the tokenizer accepts too
    if full.is_ok() {
        assert!(raw.is_ok());
    }
    if let Ok(cat) = full {
        for e in cat.entries() {
            let _ = format_presentation(&e.presentation);
        }
    }
});
