use haarnet_wasm::{haar_level_json, l2_json, points_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("operation succeeds")).unwrap()
}

#[test]
fn points_of_small_net() {
    let v = parse(points_json("pa", 2, "1", "00", false));
    assert_eq!(v["side"], 4);
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    let sym = parse(points_json("pa", 2, "1", "00", true));
    assert_eq!(sym["points"].as_array().unwrap().len(), 8);
}

#[test]
fn three_routes_agree() {
    let v = parse(l2_json("pa", 1, "", "0", false));
    assert_eq!(v["formula"]["exact"], "91/144");
    assert_eq!(v["agree"], true);
    for (family, params, sym) in [("pa", "1011", true), ("pc", "0110", false), ("tri", "1010110101", false)] {
        let v = parse(l2_json(family, 5, params, "10011", sym));
        assert_eq!(v["agree"], true, "{family}");
        assert_eq!(v["parseval"], v["warnock"]);
    }
    assert!(parse(l2_json("tri", 3, "101", "", false))["formula"].is_null());
}

#[test]
fn heatmap_shape_and_mass() {
    let v = parse(haar_level_json("pa", 4, "101", "0110", false, 2, 1));
    assert_eq!(v["width"], 4);
    assert_eq!(v["height"], 2);
    let grid = v["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 2);
    // level mass is 2^{j1+j2} times the sum of squares
    let sum_sq: f64 = grid.iter().flat_map(|r| r.as_array().unwrap()).map(|x| x.as_f64().unwrap().powi(2)).sum();
    let mass = v["mass"]["approx"].as_f64().unwrap();
    assert!((mass - 8.0 * sum_sq).abs() < 1e-15, "{mass} vs {sum_sq}");
}

#[test]
fn errors_are_reported() {
    assert!(points_json("pa", 3, "1", "", false).is_err());
    assert!(points_json("xx", 3, "", "", false).is_err());
    assert!(l2_json("pa", 40, "", "", false).is_err());
    assert!(haar_level_json("pa", 3, "00", "", false, 9, 0).is_err());
}
