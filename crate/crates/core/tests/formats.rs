use std::path::PathBuf;

use serde_json::{json, Value};

use ffkakeya_core::brkset::generate_set;
use ffkakeya_core::ffield::{Field, FieldSpec};
use ffkakeya_core::json::{parse_doc, InstanceDoc, PolyDoc, SetDoc};
use ffkakeya_core::replay::{self, Certificate, Trials};

fn example(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn example_documents_parse() {
    for name in ["g_q3.json", "g_q5.json"] {
        let doc: PolyDoc = parse_doc(&example(name), name).unwrap();
        assert!(doc.to_poly().unwrap().is_homogeneous());
    }
    let inst = parse_doc::<InstanceDoc>(&example("instance_q3.json"), "instance").unwrap().to_instance().unwrap();
    assert_eq!(generate_set(&inst).len(), 6);
}

#[test]
fn field_spec_shape() {
    let f9 = Field::with_order(9).unwrap();
    let v = serde_json::to_value(f9.spec()).unwrap();
    assert_eq!(v["p"], 3);
    assert_eq!(v["m"], 2);
    let modulus = v["modulus"].as_array().unwrap();
    assert_eq!(modulus.len(), 3);
    assert_eq!(modulus[2], 1);
    let f7 = serde_json::to_value(Field::prime(7).unwrap().spec()).unwrap();
    assert_eq!(f7, json!({"p": 7, "m": 1}));
    let spec: FieldSpec = serde_json::from_value(json!({"p": 2, "m": 3, "modulus": [1, 1, 0, 1]})).unwrap();
    assert_eq!(spec.build().unwrap().q(), 8);
}

#[test]
fn malformed_polynomials_are_rejected() {
    let bad = [
        json!({"field": {"p": 5, "m": 1}, "arity": 1, "terms": [{"exp": [1, 0], "coeff": 1}]}),
        json!({"field": {"p": 5, "m": 1}, "arity": 1, "terms": [{"exp": [1], "coeff": 1}, {"exp": [1], "coeff": 2}]}),
        json!({"field": {"p": 5, "m": 1}, "arity": 1, "terms": [{"exp": [1], "coeff": 5}]}),
        json!({"field": {"p": 6, "m": 1}, "arity": 1, "terms": []}),
        json!({"field": {"p": 3, "m": 2, "modulus": [1, 2, 1]}, "arity": 1, "terms": []}),
    ];
    for doc in bad {
        let parsed: PolyDoc = serde_json::from_value(doc.clone()).unwrap();
        assert!(parsed.to_poly().is_err(), "accepted {doc}");
    }
    let unknown = json!({"field": {"p": 5, "m": 1}, "arity": 1, "terms": [], "extra": 0});
    assert!(serde_json::from_value::<PolyDoc>(unknown).is_err());
}

#[test]
fn parse_errors_name_source_and_position() {
    let err = parse_doc::<SetDoc>("{\"field\": {\"p\": 3, \"m\": 1},\n\"n\": }", "sets/a.json").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("sets/a.json"), "{msg}");
    assert!(msg.contains("line 2"), "{msg}");
}

#[test]
fn certificate_schema() {
    let f = Field::prime(3).unwrap();
    let cert = replay::check_warmup(&f, 3, 11, 1).unwrap();
    let v: Value = serde_json::from_str(&cert.to_json_string()).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["check", "inputs", "seed", "steps", "verdict"]);
    assert_eq!(v["check"], "warmup");
    assert_eq!(v["seed"], 11);
    assert!(v["steps"].is_array());
    assert!(cert.to_json_string().ends_with("}\n"));

    let back: Certificate = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(back.to_json_string(), cert.to_json_string());
    let mut extra = v;
    extra["note"] = json!("x");
    assert!(serde_json::from_value::<Certificate>(extra).is_err());
}

#[test]
fn verdict_and_witness_fields() {
    // real checks do not fail, so edit a passing certificate
    let cert = replay::check_key_lemma(Trials::new(3, 1), &Field::prime(5).unwrap(), 2, 2).unwrap();
    let mut v = serde_json::to_value(&cert).unwrap();
    assert!(v.get("witness").is_none());
    v["verdict"] = json!("maybe");
    assert!(serde_json::from_value::<Certificate>(v.clone()).is_err());
    v["verdict"] = json!("fail");
    v["witness"] = json!({"trial": 0});
    let parsed: Certificate = serde_json::from_value(v).unwrap();
    assert!(!parsed.passed());
}
