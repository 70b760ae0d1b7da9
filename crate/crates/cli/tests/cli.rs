use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lr_honeycomb::{enumerate_fillings, Hive, LrFilling, Partition};

fn lrsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrsum")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(v: &[u64]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn put<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

fn small() -> LrFilling {
    LrFilling::new(p(&[2, 1]), p(&[2, 1]), p(&[3, 3]), vec![vec![1], vec![1, 1]]).unwrap()
}

/// Two 1's stacked in the second column.
fn repeated_column() -> LrFilling {
    LrFilling::new(p(&[1, 1]), p(&[2]), p(&[2, 2]), vec![vec![1], vec![1, 0]]).unwrap()
}

fn sample_hive() -> Hive {
    Hive::new(vec![
        vec![0],
        vec![10, 18],
        vec![19, 27, 34],
        vec![24, 34, 42, 46],
        vec![27, 38, 48, 54, 57],
        vec![28, 40, 51, 58, 64, 65],
    ])
    .unwrap()
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn count_with_both_oracles() {
    let o = lrsum(&["count", "--mu", "2,1", "--nu", "2,1", "--lambda", "3,3", "--oracle", "both"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1 1\n");
    let o = lrsum(&["count", "--mu", "2,1", "--nu", "2,1", "--lambda", "3,2,1"]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn count_rejects_bad_partition() {
    let o = lrsum(&["count", "--mu", "1,2", "--nu", "1", "--lambda", "3"]);
    assert_ne!(code(&o), 0);
    assert!(!o.stderr.is_empty());
}

#[test]
fn validate_hive_filling() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "f.json", &sample_hive().to_filling().unwrap());
    let o = lrsum(&["validate", s(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "ok\n");
    let h = put(dir.path(), "h.json", &sample_hive());
    assert_eq!(code(&lrsum(&["validate", "--hive", s(&h)])), 0);
}

#[test]
fn validate_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    let bad = repeated_column();
    let path = put(dir.path(), "bad.json", &bad);
    let o = lrsum(&["validate", s(&path)]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "LR2(1,2)\n");
}

#[test]
fn malformed_json_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    fs::write(&path, "{\"mu\": [1,").unwrap();
    let o = lrsum(&["validate", s(&path)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parsing"));
}

#[test]
fn hive_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "f.json", &sample_hive().to_filling().unwrap());
    let o = lrsum(&["to-hive", s(&f)]);
    assert_eq!(code(&o), 0);
    let h: Hive = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(h, sample_hive());
    let hp = dir.path().join("h.json");
    fs::write(&hp, stdout(&o)).unwrap();
    let back = lrsum(&["from-hive", s(&hp)]);
    assert_eq!(code(&back), 0);
    let g: LrFilling = serde_json::from_str(&stdout(&back)).unwrap();
    assert_eq!(g, sample_hive().to_filling().unwrap());
}

#[test]
fn enumerate_writes_every_filling() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = lrsum(&["enumerate", "--mu", "2,1", "--nu", "2,1", "--lambda", "3,2,1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let mut names: Vec<String> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["filling-0001.json", "filling-0002.json"]);
    let want = enumerate_fillings(&p(&[2, 1]), &p(&[2, 1]), &p(&[3, 2, 1]));
    for (name, f) in names.iter().zip(&want) {
        let got: LrFilling = serde_json::from_str(&fs::read_to_string(out.join(name)).unwrap()).unwrap();
        assert_eq!(&got, f);
        assert_eq!(code(&lrsum(&["validate", s(&out.join(name))])), 0);
    }
}

#[test]
fn sum_of_worked_types() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = enumerate_fillings(&p(&[10, 6, 1]), &p(&[13, 7, 1]), &p(&[17, 12, 9])).remove(0);
    let f2 = enumerate_fillings(&p(&[9, 4]), &p(&[12, 6]), &p(&[18, 13])).remove(0);
    let (a, b) = (put(dir.path(), "a.json", &f1), put(dir.path(), "b.json", &f2));
    let (trace, svg) = (dir.path().join("t.json"), dir.path().join("s.svg"));
    let o = lrsum(&["sum", s(&a), s(&b), "--trace", s(&trace), "--svg", s(&svg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(10,9,6,4,1) (13,12,7,6,1) (18,17,13,12,9)"));
    let sum: LrFilling = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(sum.validate().ok());
    let steps: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(steps.is_array());
    assert!(fs::read_to_string(&svg).unwrap().contains("<svg"));
    // the printed sum reads back
    let sp = dir.path().join("sum.json");
    fs::write(&sp, stdout(&o)).unwrap();
    assert_eq!(code(&lrsum(&["validate", s(&sp)])), 0);
}

#[test]
fn sum_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = put(dir.path(), "a.json", &small());
    let b = put(dir.path(), "b.json", &sample_hive().to_filling().unwrap());
    let run = |tag: &str| {
        let svg = dir.path().join(format!("{tag}.svg"));
        let o = lrsum(&["sum", s(&a), s(&b), "--svg", s(&svg)]);
        assert_eq!(code(&o), 0);
        (o.stdout, fs::read(&svg).unwrap())
    };
    assert_eq!(run("one"), run("two"));
}

#[test]
fn flow_and_honeycomb_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let f = put(dir.path(), "f.json", &sample_hive().to_filling().unwrap());
    let o = lrsum(&["flow", s(&f)]);
    assert_eq!(code(&o), 0);
    let fp = dir.path().join("flow.json");
    fs::write(&fp, stdout(&o)).unwrap();
    assert_eq!(stdout(&lrsum(&["validate", "--flow", s(&fp)])), "ok\n");

    let svg = dir.path().join("h.svg");
    let o = lrsum(&["honeycomb", s(&f), "--svg", s(&svg)]);
    assert_eq!(code(&o), 0);
    let hp = dir.path().join("h.json");
    fs::write(&hp, stdout(&o)).unwrap();
    let v = lrsum(&["validate", "--honeycomb", s(&hp)]);
    assert_eq!(stdout(&v), "ok (10,9,5,3,1) (12,11,7,6,1) (18,16,12,11,8)\n");
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert!(text.contains(r#"version="1.1""#));
}

#[test]
fn overlay_check_passes_on_a_switch() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = LrFilling::new(p(&[1]), p(&[3]), p(&[4]), vec![vec![3]]).unwrap();
    let (a, b) = (put(dir.path(), "a.json", &f1), put(dir.path(), "b.json", &small()));
    let o = lrsum(&["overlay-check", s(&a), s(&b)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o), "honeycombs equal\nreplayed flow consistent\nreplayed flow canonical\n");
}

#[test]
fn sum_rejects_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = repeated_column();
    let (a, b) = (put(dir.path(), "a.json", &bad), put(dir.path(), "b.json", &small()));
    assert_eq!(code(&lrsum(&["sum", s(&a), s(&b)])), 1);
}

#[test]
fn overlay_check_flags_noncanonical_replay() {
    // rows 2 and 3 of the sum share both their inner and outer parts
    let dir = tempfile::tempdir().unwrap();
    let f1 = LrFilling::new(p(&[3, 1, 1]), p(&[4, 2]), p(&[5, 3, 3]), vec![vec![2], vec![2, 0], vec![0, 2, 0]]).unwrap();
    let f2 = LrFilling::new(p(&[5, 3]), p(&[5, 1]), p(&[9, 5]), vec![vec![4], vec![1, 1]]).unwrap();
    let (a, b) = (put(dir.path(), "a.json", &f1), put(dir.path(), "b.json", &f2));
    let o = lrsum(&["overlay-check", s(&a), s(&b)]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout(&o), "honeycombs equal\nreplayed flow consistent\nreplayed flow not canonical\n");
}
