//! JSON layouts of fillings, hives, traces and honeycombs.

mod common;

use common::p;
use lr_honeycomb::honeycomb::{honeycomb_from_filling, Honeycomb};
use lr_honeycomb::{sum_fillings, Hive, LrFilling};
use serde_json::{json, Value};

fn small() -> LrFilling {
    LrFilling::new(p(&[2, 1]), p(&[2, 1]), p(&[3, 3]), vec![vec![1], vec![1, 1]]).unwrap()
}

#[test]
fn filling_json() {
    let v = serde_json::to_value(small()).unwrap();
    assert_eq!(v, json!({"mu": [2, 1], "nu": [2, 1], "lambda": [3, 3], "k": [[1], [1, 1]]}));
    let bad = json!({"mu": [1, 2], "nu": [1], "lambda": [3], "k": [[1]]});
    assert!(serde_json::from_value::<LrFilling>(bad).is_err());
    let ragged = json!({"mu": [1], "nu": [1], "lambda": [2], "k": [[1, 0]]});
    assert!(serde_json::from_value::<LrFilling>(ragged).is_err());
}

#[test]
fn hive_json() {
    let h = Hive::from_filling(&small()).unwrap();
    assert_eq!(serde_json::to_value(&h).unwrap(), json!({"h": [[0], [2, 3], [3, 5, 6]]}));
    assert!(serde_json::from_value::<Hive>(json!({"h": [[0], [2]]})).is_err());
}

#[test]
fn trace_json() {
    let f1 = LrFilling::new(p(&[1]), p(&[3]), p(&[4]), vec![vec![3]]).unwrap();
    let (_, trace) = sum_fillings(&f1, &small()).unwrap();
    let v = serde_json::to_value(&trace).unwrap();
    let steps = v.as_array().unwrap();
    assert!(!steps.is_empty());
    for step in steps {
        let obj = step.as_object().unwrap();
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        assert_eq!(keys, ["kind", "labels", "strand_a", "strand_b"]);
        for cells in [&obj["strand_a"], &obj["strand_b"]] {
            assert!(cells.as_array().unwrap().iter().all(|c| c.as_array().map(Vec::len) == Some(2)));
        }
    }
    let back: lr_honeycomb::StepTrace = serde_json::from_value(v).unwrap();
    assert_eq!(back, trace);
}

#[test]
fn honeycomb_json() {
    let h = honeycomb_from_filling(&small()).unwrap();
    let v = serde_json::to_value(&h).unwrap();
    assert_eq!(v["vertices"][0], json!([2, 1]));
    let rays = v["segments"].as_array().unwrap().iter().filter(|s| s["ray"] == Value::Bool(true)).count();
    assert_eq!(rays, 6);
    let back: Honeycomb = serde_json::from_value(v).unwrap();
    assert_eq!(back, h);
    let off_line = json!({"vertices": [], "segments": [{"a": [0, 0], "b": [1, 1], "class": "Mu", "mult": 1}]});
    assert!(serde_json::from_value::<Honeycomb>(off_line).is_err());
}
