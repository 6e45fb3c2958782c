//! Runs the checked-in fuzz seeds through the same entry points as the fuzz
//! targets so the corpus stays meaningful without cargo-fuzz installed.

use std::fs;
use std::path::PathBuf;

use vkg_cli::cache::{decode_record, encode_record};
use vkg_core::catalogue::{parse_catalogue, parse_raw};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn catalogue_seeds() {
    let mut accepted = Vec::new();
    for (name, text) in seeds("catalogue_parse") {
        let full = parse_catalogue(&text, &name);
        if full.is_ok() {
            assert!(parse_raw(&text, &name).is_ok());
            accepted.push(name);
        }
    }
    assert_eq!(accepted, ["c2", "comment", "full", "g16_3"]);
}

#[test]
fn cache_seeds() {
    let mut accepted = Vec::new();
    for (name, text) in seeds("cache_decode") {
        if let Ok((record, hash)) = decode_record(&text) {
            assert_eq!(decode_record(&encode_record(&record, &hash)).unwrap(), (record, hash));
            accepted.push(name);
        }
    }
    assert_eq!(accepted, ["g16_6", "g32_13_partial"]);
}
