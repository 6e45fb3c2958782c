use std::io::Write;

use vkg_core::catalogue::{embedded_catalogue_text, load_catalogue};
use vkg_core::Error;

fn write(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn shipped_file_loads_from_disk() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/catalogue.txt");
    let c = load_catalogue(path).unwrap();
    assert_eq!(c.len(), 73);
    c.check_complete().unwrap();
}

#[test]
fn family_4_group_13_alone() {
    let text = embedded_catalogue_text();
    let start = text.find("group 32 13\n").unwrap();
    let end = start + text[start..].find("end\n").unwrap() + 4;
    let f = write(&text[start..end]);
    let c = load_catalogue(f.path()).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(c.get(32, 13).unwrap().fingerprint.exponent, 8);
    assert!(c.check_complete().is_err());
}

#[test]
fn truncated_file_reports_position() {
    let text = embedded_catalogue_text();
    let cut = text.find("group 32 13\n").unwrap() + "group 32 13\nngens 5\np 1 : 4\n".len();
    let f = write(&text[..cut]);
    match load_catalogue(f.path()) {
        Err(Error::Parse { path, line, .. }) => {
            assert_eq!(path, f.path().display().to_string());
            assert_eq!(line, text[..cut].lines().count() + 1);
        }
        other => panic!("expected a parse error, got {:?}", other.map(|c| c.len())),
    }
}

#[test]
fn missing_file_is_io_error() {
    assert!(matches!(load_catalogue("/nonexistent/catalogue.txt"), Err(Error::Io(_))));
}
