use num_rational::Rational64;
use serde_json::json;
use unorm_cli::json::{module_value, padic_value, parse_module, parse_padic, parse_series, series_value};
use unorm_cli::{load_preset, CliError, PRESET_FILES};
use unorm_padic::scalar::{max_rel, EXACT};
use unorm_padic::{Padic, UnramifiedField};
use unorm_phimod::presets::{modular_form_module, preset, PRESETS};

fn schema(e: CliError) -> (String, String) {
    match e {
        CliError::Schema { path, msg } => (path, msg),
        other => panic!("expected a schema error, got {other}"),
    }
}

#[test]
fn preset_files_match_the_constructors() {
    assert_eq!(PRESET_FILES.len(), PRESETS.len());
    for name in PRESETS {
        let from_file = load_preset(name, 20, 4).unwrap();
        let built = preset(name, 20).unwrap();
        assert_eq!(module_value(&from_file), module_value(&built), "{name}");
    }
}

#[test]
fn supersingular_file_round_trips() {
    let m = load_preset("supersingular", 20, 4).unwrap();
    let k = UnramifiedField::qp(5, 20).unwrap();
    let direct = modular_form_module(&k, 2, Rational64::from(0), None).unwrap();
    assert_eq!(module_value(&m), module_value(&direct));
    let half = Rational64::new(-1, 2);
    assert_eq!(m.newton_slopes().unwrap().slopes, vec![half, half]);
    let again = parse_module(&module_value(&m), 20, 4).unwrap();
    assert_eq!(module_value(&again), module_value(&m));
}

fn qp_module(phi: serde_json::Value, filtration: serde_json::Value) -> serde_json::Value {
    json!({"p": 5, "f": 1, "defpoly": [0], "dim": 2, "phi": phi, "filtration": filtration})
}

#[test]
fn singular_phi_is_rejected() {
    let v = qp_module(json!([[1, 2], [2, 4]]), json!([{"jump": 0, "basis": [[1, 0], [0, 1]]}]));
    let (path, msg) = schema(parse_module(&v, 20, 4).unwrap_err());
    assert_eq!(path, "$.phi");
    assert_eq!(msg, "phi not invertible");
}

#[test]
fn out_of_order_jumps_name_the_pair() {
    let fil = json!([
        {"jump": 1, "basis": [[1, 0], [0, 1]]},
        {"jump": 0, "basis": [[1, 0]]}
    ]);
    let v = qp_module(json!([[1, 0], [0, 5]]), fil);
    let (path, msg) = schema(parse_module(&v, 20, 4).unwrap_err());
    assert!(path.starts_with("$.filtration"), "{path}");
    assert!(msg.contains('1') && msg.contains('0') && msg.contains("increasing"), "{msg}");
}

#[test]
fn bad_entries_report_their_path() {
    let v = qp_module(json!([[1, 0], [0, "x"]]), json!([{"jump": 0, "basis": [[1, 0], [0, 1]]}]));
    let (path, _) = schema(parse_module(&v, 20, 4).unwrap_err());
    assert_eq!(path, "$.phi[1][1]");
    let v = json!({"p": 5, "dim": 3, "phi": [[1]], "filtration": []});
    let (path, _) = schema(parse_module(&v, 20, 4).unwrap_err());
    assert_eq!(path, "$.dim");
}

#[test]
fn padic_strings() {
    let x = parse_padic(5, &json!("3/10 + O(5^6)"), "$").unwrap();
    assert_eq!(x.val(), Some(-1));
    assert_eq!(x.prec(), 6);
    let z = parse_padic(5, &json!("O(5^3)"), "$").unwrap();
    assert!(z.is_zero());
    assert_eq!(z.prec(), 3);
    let e = parse_padic(5, &json!("-7/3"), "$").unwrap();
    assert_eq!(e.rel(), max_rel(5));
    assert_eq!(padic_value(&e), json!("-7/3"));
    assert_eq!(padic_value(&Padic::exact(5, 12)), json!(12));
    assert_eq!(padic_value(&Padic::zero(5, EXACT).shift(-1)), json!(0));
    assert!(parse_padic(5, &json!("1 + O(7^2)"), "$").is_err());
}

#[test]
fn series_round_trip() {
    let k = UnramifiedField::qp(5, 20).unwrap();
    let v = json!({"trunc": 10, "bound": 2, "log_rate": 1, "coeffs": [1, "1/5", 0, -3]});
    let s = parse_series(&k, &v, "$").unwrap();
    assert_eq!(s.trunc(), 10);
    let back = parse_series(&k, &series_value(&s), "$").unwrap();
    assert!(back.eq_at(&s));
    assert_eq!(back.bound_pair(), s.bound_pair());
}
