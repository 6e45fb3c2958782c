#![no_main]

use libfuzzer_sys::fuzz_target;
use vkg_cli::cache::{decode_record, encode_record};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((record, hash)) = decode_record(text) {
        // accepted records survive a round trip unchanged
        let (again, hash2) = decode_record(&encode_record(&record, &hash)).expect("re-decode");
        assert_eq!(again, record);
        assert_eq!(hash2, hash);
    }
});
