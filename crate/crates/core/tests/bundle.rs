use divclass::bundle::{bundle_from_json, bundle_to_json};
use divclass::curve::{gen_fixture, gen_hyperelliptic, gen_rep_b0, GenOptions};
use divclass::{load_bundle, save_bundle, CurveRep, Error, PrimeField, Sampler};

#[test]
fn fixture_round_trip() {
    let b = gen_fixture(1009).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.json");
    save_bundle(&b, &path).unwrap();
    let back = load_bundle(&path).unwrap();
    assert_eq!(back, b);
    assert!(CurveRep::A(back.rep_a).validate().passed());
}

#[test]
fn generated_round_trip_with_points() {
    let f = PrimeField::new(1009).unwrap();
    let mut s = Sampler::new(f, 3);
    let b = gen_rep_b0(gen_hyperelliptic(f, 2, None, &GenOptions::default(), &mut s).unwrap(), &mut s).unwrap();
    let text = bundle_to_json(&b).unwrap();
    let back = bundle_from_json(&text).unwrap();
    assert_eq!(back, b);
    assert_eq!(bundle_to_json(&back).unwrap(), text);
    assert!(CurveRep::B0(back.rep_b0.unwrap().rep).validate().passed());
}

#[test]
fn characteristic_two_round_trip() {
    let f = PrimeField::new(2).unwrap();
    let mut s = Sampler::new(f, 4);
    let b = gen_hyperelliptic(f, 3, None, &GenOptions { with_cubic: false, h: None }, &mut s).unwrap();
    assert_eq!(bundle_from_json(&bundle_to_json(&b).unwrap()).unwrap(), b);
}

#[test]
fn damaged_files_rejected() {
    let b = gen_fixture(1009).unwrap();
    let text = bundle_to_json(&b).unwrap();
    let truncated = &text[..text.len() / 2];
    assert!(matches!(bundle_from_json(truncated), Err(Error::MalformedFile(_))));
    let v2 = text.replacen("\"version\":1", "\"version\":2", 1);
    assert_eq!(bundle_from_json(&v2), Err(Error::VersionMismatch { found: 2, expected: 1 }));
    let other = text.replacen("divclass-bundle", "something-else", 1);
    assert!(matches!(bundle_from_json(&other), Err(Error::MalformedFile(_))));
    // drop one table
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["tables"].as_array_mut().unwrap().pop();
    assert!(matches!(bundle_from_json(&v.to_string()), Err(Error::MalformedFile(_))));
    // unreduced entry
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["tables"][0][0][0] = serde_json::json!(5000);
    assert!(matches!(bundle_from_json(&v.to_string()), Err(Error::MalformedFile(_))));
    // claims point data it does not have
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["rep"] = serde_json::json!("b0");
    assert!(matches!(bundle_from_json(&v.to_string()), Err(Error::MalformedFile(_))));
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_bundle(&dir.path().join("missing.json")), Err(Error::Io(_))));
}
