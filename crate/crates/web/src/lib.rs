//! wasm-bindgen surface for the static demo in `www/`.
//!
//! Every export returns a JSON report document (the same bytes the CLI
//! prints with `--format json`) or throws a string on input errors.

use wasm_bindgen::prelude::*;

use wlab_core::report::{classify_report, flexes_report, tables_report, CurveSpecFile};
use wlab_core::scalar::FieldDescriptor;

fn field(kind: &str, precision_bits: usize) -> Result<FieldDescriptor, String> {
    match kind {
        "rational" => Ok(FieldDescriptor::Rational),
        "complex" if precision_bits >= 64 => Ok(FieldDescriptor::Complex { precision_bits }),
        "complex" => Err("precision must be at least 64 bits".into()),
        other => Err(format!("unknown field {other:?}")),
    }
}

/// Flex locus of `X^6 + Y^6 + Z^6 + a X^3Y^3 + b X^3Z^3 + c Y^3Z^3`.
pub fn kuribayashi_flexes(a: &str, b: &str, c: &str, kind: &str, precision_bits: usize) -> Result<String, String> {
    let spec = CurveSpecFile::kuribayashi(a, b, c, field(kind, precision_bits)?)
        .build()
        .map_err(|e| e.to_string())?;
    flexes_report(&spec).map(|d| d.to_json()).map_err(|e| e.to_string())
}

/// Classify one point (`x : y : z`) of a curve given as a curve-spec JSON file.
pub fn classify_point(curve_json: &str, point: &str) -> Result<String, String> {
    let spec = CurveSpecFile::from_json(curve_json)
        .and_then(|f| f.build())
        .map_err(|e| e.to_string())?;
    let p = spec.parse_point(point).map_err(|e| e.to_string())?;
    Ok(classify_report(&spec, &[p]).to_json())
}

/// The maximal-count tables with expected gap sequences.
pub fn bound_tables() -> String {
    tables_report().to_json()
}

#[wasm_bindgen(js_name = kuribayashiFlexes)]
pub fn js_kuribayashi_flexes(a: &str, b: &str, c: &str, kind: &str, precision_bits: usize) -> Result<String, JsValue> {
    kuribayashi_flexes(a, b, c, kind, precision_bits).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = classifyPoint)]
pub fn js_classify_point(curve_json: &str, point: &str) -> Result<String, JsValue> {
    classify_point(curve_json, point).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = boundTables)]
pub fn js_bound_tables() -> String {
    bound_tables()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_contain_flex_bound() {
        assert!(bound_tables().contains("495"));
    }

    #[test]
    fn rational_fermat_scan() {
        let json = kuribayashi_flexes("0", "0", "0", "rational", 0).unwrap();
        assert!(json.contains("\"command\": \"flexes\""));
        assert!(kuribayashi_flexes("x", "0", "0", "rational", 0).is_err());
        assert!(kuribayashi_flexes("0", "0", "0", "complex", 8).is_err());
    }

    #[test]
    fn classify_rejects_off_curve_point() {
        let curve = r#"{"degree":6,"field":{"kind":"rational"},"coefficients":[
            {"exponents":[6,0,0],"value":"1"},{"exponents":[0,6,0],"value":"-1"},
            {"exponents":[0,0,6],"value":"1"}]}"#;
        let ok = classify_point(curve, "1 : 1 : 0").unwrap();
        assert!(ok.contains("flex"), "{ok}");
        assert!(classify_point(curve, "1 : 2 : 3").unwrap().contains("not on the curve"));
    }
}
