//! Browser bindings. Each exported function takes plain strings and returns
//! a JSON document, so the page needs no bundler and no framework. The
//! `*_json` functions hold the logic and run natively too.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use lvhecke::fiber::{fiber_table, ResolutionSpec};
use lvhecke::klv::{compute_klv, KlvOptions, KlvReport};
use lvhecke::lv::{builtin, gen_complex, Datum, LVVector, ValidatedDatum};
use lvhecke::Laurent;

/// `sl2r`, `psl2r`, `sl2c`, `complex:<type>` (e.g. `complex:A2`), or the
/// JSON text of a datum.
fn load(source: &str) -> Result<ValidatedDatum, String> {
    let source = source.trim();
    let d = if source.starts_with('{') {
        Datum::from_json(source).and_then(Datum::into_validated)
    } else if let Some(t) = source.strip_prefix("complex:") {
        gen_complex(t)
    } else {
        builtin(source)
    };
    d.map_err(|e| e.to_string())
}

pub fn klv_json(source: &str, raw: bool) -> Result<String, String> {
    let d = load(source)?;
    let table = compute_klv(&d, &KlvOptions::default()).map_err(|e| e.to_string())?;
    let report = KlvReport::new(&d, &table, raw).map_err(|e| e.to_string())?;
    let rendered: Vec<Value> = table
        .classes()
        .map(|c| json!({ "param": d.param(c.param).id, "class": d.render_hat(&c.vector) }))
        .collect();
    Ok(json!({
        "summary": d.report().summary(),
        "report": report,
        "rendered": rendered,
    })
    .to_string())
}

/// Applies `T_s` (or `b_s` when `op` is `"bs"`) along `word`, a list of
/// 0-based generator indices separated by spaces or commas. `elem` is a sum
/// like `O_triv + (v + v^-1)*Q0`.
pub fn act_json(source: &str, elem: &str, word: &str, op: &str) -> Result<String, String> {
    let d = load(source)?;
    let mut v = parse_vector(&d, elem)?;
    let word: Vec<usize> = word
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("bad generator `{t}`")))
        .collect::<Result<_, _>>()?;
    for &s in &word {
        v = match op {
            "ts" => d.apply_ts(&v, s),
            "bs" => d.apply_bs(&v, s),
            other => return Err(format!("unknown operator `{other}` (use ts or bs)")),
        }
        .map_err(|e| e.to_string())?;
    }
    let terms: Vec<Value> = v
        .iter()
        .map(|(i, c)| json!({ "param": d.param(i).id, "coeff": c }))
        .collect();
    Ok(json!({ "result": d.render(&v), "terms": terms }).to_string())
}

/// Splits `a*X + b*Y + Z` at top-level `+` signs outside parentheses.
fn parse_vector(d: &ValidatedDatum, text: &str) -> Result<LVVector, String> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    let mut v = LVVector::zero();
    for part in parts.into_iter().map(str::trim).filter(|p| !p.is_empty()) {
        let (coeff, id) = match part.rsplit_once('*') {
            Some((c, id)) => {
                let c = c.trim().trim_start_matches('(').trim_end_matches(')');
                (
                    c.parse::<Laurent>()
                        .map_err(|e| format!("bad coefficient `{c}`: {e}"))?,
                    id.trim(),
                )
            }
            None => (Laurent::one(), part),
        };
        let i = d.index_of(id).map_err(|e| e.to_string())?;
        v.add_term(i, coeff);
    }
    Ok(v)
}

pub fn fibers_json(source: &str, spec: &str) -> Result<String, String> {
    let d = load(source)?;
    let spec = ResolutionSpec::from_json(spec).map_err(|e| e.to_string())?;
    let table = fiber_table(&d, &spec).map_err(|e| e.to_string())?;
    let rows: Vec<Value> = table
        .into_iter()
        .map(|(orbit, f)| json!({ "orbit": orbit, "poincare": f }))
        .collect();
    Ok(Value::Array(rows).to_string())
}

#[wasm_bindgen]
pub fn klv_table(source: &str, raw: bool) -> Result<String, JsError> {
    klv_json(source, raw).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn hecke_action(source: &str, elem: &str, word: &str, op: &str) -> Result<String, JsError> {
    act_json(source, elem, word, op).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fiber_polynomials(source: &str, spec: &str) -> Result<String, JsError> {
    fibers_json(source, spec).map_err(|e| JsError::new(&e))
}
