use std::path::Path;
use std::process::{Command, Output};

fn vkg(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vkg"));
    cmd.args(args).env_remove("VKG_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    cmd.output().expect("run vkg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn catalogue_verify() {
    let o = vkg(&["catalogue", "verify"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("order 32: 51 groups, 41 eligible"));
}

#[test]
fn split_16_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for k in 0..2 {
        let md = dir.path().join(format!("r{k}.md"));
        let csv = dir.path().join(format!("r{k}.csv"));
        let o = vkg(&["split", "--order", "16", "--report", md.to_str().unwrap(), "--csv", csv.to_str().unwrap()], None);
        assert!(o.status.success(), "{}", stderr(&o));
        reports.push(std::fs::read_to_string(md).unwrap());
        let csv = std::fs::read_to_string(csv).unwrap();
        assert!(csv.starts_with("order,id,invariant,value,runtime_ms\n"));
        assert!(csv.contains("16,3,involutions,5119,"));
    }
    assert_eq!(reports[0], reports[1]);
    assert!(reports[0].contains("## Unresolved pairs\n\nNone."));
}

#[test]
fn invariants_csv_for_one_group() {
    let o = vkg(&["invariants", "--order", "16", "--id", "13", "--tiers", "1,3"], None);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("16,13,frattini_order_log2,7,"));
    assert!(out.contains("16,13,involutions,3583,"));
    assert!(!out.contains("p_class"));
}

#[test]
fn oracle_refuses_order_32() {
    let o = vkg(&["oracle", "--order", "16", "--id", "6"], None);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("MISMATCH"));
    let o = vkg(&["oracle", "--order", "32", "--id", "13"], None);
    assert!(!o.status.success());
}

#[test]
fn unknown_group_fails() {
    let o = vkg(&["invariants", "--order", "16", "--id", "15"], None);
    assert!(!o.status.success());
    let o = vkg(&["split", "--order", "8", "--report", "/dev/null"], None);
    assert!(!o.status.success());
}

#[test]
fn stale_cache_record_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["invariants", "--order", "16", "--id", "11"];
    let first = vkg(&args, Some(dir.path()));
    assert!(first.status.success());
    let path = dir.path().join("g16_11.toml");
    let text = std::fs::read_to_string(&path).unwrap();

    let again = vkg(&args, Some(dir.path()));
    assert!(stderr(&again).contains("cached"));

    std::fs::write(&path, text.replace("schema = 1", "schema = 7")).unwrap();
    let o = vkg(&args, Some(dir.path()));
    assert!(o.status.success());
    assert!(stderr(&o).contains("ignoring cache record"), "{}", stderr(&o));
    assert!(stdout(&o).contains("16,11,involutions,6143,"));
    assert!(std::fs::read_to_string(&path).unwrap().contains("schema = 1"));
}

#[test]
fn count_involutions_writes_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = vkg(&["count-involutions", "--order", "16", "--id", "12", "--split-bits", "3"], Some(dir.path()));
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4095");
    let o = vkg(&["count-involutions", "--order", "16", "--id", "12"], Some(dir.path()));
    assert!(stderr(&o).starts_with("cached"));
    assert_eq!(stdout(&o).trim(), "4095");
}
