use fuzzsmooth_wasm::{classify, convergence, fixture_names, fixture_text, smooth};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("exports return JSON")
}

fn doc(name: &str) -> String {
    parse(fixture_text(name))["text"].as_str().unwrap().to_string()
}

#[test]
fn lists_the_bundled_examples() {
    let names = parse(fixture_names());
    let names: Vec<&str> = names.as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(names.contains(&"kinked") && names.contains(&"jump"));
    assert!(parse(fixture_text("nope")).get("error").is_some());
}

#[test]
fn classify_finds_the_kinks() {
    let v = parse(classify(&doc("kinked")));
    assert_eq!(v["classes"]["F_D"], false);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    assert!(v["curve"].as_array().unwrap().len() >= 512);
}

#[test]
fn smooth_refuses_then_accepts() {
    let refused = parse(smooth(&doc("kinked"), "parabola", 0.5));
    assert!(refused["theorem"].is_null());
    assert!(refused["refusal"].as_str().unwrap().contains("(iv-1)"));
    let ok = parse(smooth(&doc("kinked"), "synthesize", 0.5));
    assert_eq!(ok["theorem"], "continuous");
    assert_eq!(ok["result_smooth"], true);
    assert!(ok["distance"].as_f64().unwrap() <= 0.5 + 1e-12);
}

#[test]
fn convergence_rows_meet_the_bound() {
    let v = parse(convergence(&doc("jump"), "synthesize", 5));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["satisfied"] == true && r["smooth"] == true));
}

#[test]
fn bad_input_is_reported_not_thrown() {
    let v = parse(smooth("name: x\nrepr: cuts\nleft [0, 1] inc: a +\n", "parabola", 1.0));
    assert_eq!(v["error"]["kind"], "parse");
    let v = parse(smooth(&doc("kinked"), "parabola", -1.0));
    assert_eq!(v["error"]["kind"], "precondition");
}
