use lvhecke_demo::{act_json, fibers_json, klv_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn klv_for_builtin_and_generated_data() {
    let j = parse(&klv_json("sl2r", false).unwrap());
    assert_eq!(j["summary"], "valid; quadratic OK; braid N/A (rank 1)");
    let rendered = j["rendered"].as_array().unwrap();
    assert!(rendered
        .iter()
        .any(|r| r["param"] == "O_triv" && r["class"] == "v*^Q0 + v*^Qinf + ^O_triv"));
    let a2 = parse(&klv_json("complex:A2", false).unwrap());
    assert_eq!(a2["report"]["classes"].as_array().unwrap().len(), 6);
    assert!(klv_json("sl5r", false).is_err());
}

#[test]
fn actions_parse_sums() {
    let j = parse(&act_json("sl2r", "O_sgn", "0", "bs").unwrap());
    assert_eq!(j["result"], "0");
    let j = parse(&act_json("sl2r", "Q0 + (v + v^-1)*Qinf", "", "ts").unwrap());
    assert_eq!(j["terms"].as_array().unwrap().len(), 2);
    let twice = parse(&act_json("sl2r", "Q0", "0 0", "ts").unwrap());
    let once = parse(&act_json("sl2r", "Q0", "0", "ts").unwrap());
    assert_ne!(twice, once);
    assert!(act_json("sl2r", "Q0", "3", "ts").is_err());
    assert!(act_json("sl2r", "Q0", "0", "xx").is_err());
    assert!(act_json("sl2r", "Nope", "0", "ts").is_err());
}

#[test]
fn fibers_of_a_resolution() {
    let j = parse(&fibers_json("sl2r", r#"{"x0": "Q0", "xs": [[0]], "Js": [[]], "J": [], "I": []}"#).unwrap());
    let polys: Vec<&str> = j
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["poincare"].as_str().unwrap())
        .collect();
    assert_eq!(polys, vec!["1", "1", "1"]);
    assert!(fibers_json("sl2r", "{").is_err());
}
