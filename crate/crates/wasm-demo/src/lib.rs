//! WebAssembly bindings behind `www/index.html`.
//!
//! Every export takes plain numbers or strings and returns JSON text, so the
//! page needs no generated TypeScript types.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use multicorr::correlations::{dual_total_correlation, j_n, jtilde_n, total_correlation};
use multicorr::entropy::ExtendedReal;
use multicorr::lab::{compute_state, derive_seed, Computed, Ensemble, Quantity, ReportRecord};
use multicorr::states::{
    ghz, maximally_mixed, mixture, parse_state_json, random_mixed, random_pure, w_state,
};
use multicorr::{correlations, Error, Result, Settings};

fn to_js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

fn encode(v: ExtendedReal) -> Value {
    match v {
        ExtendedReal::Finite(x) => json!(x),
        ExtendedReal::PositiveInfinity => json!("inf"),
    }
}

/// `I_3`, `T_3`, `J_3` and `J̃_3` along `(1 − p)|ψ⟩⟨ψ| + p·I/8` for
/// `family` ∈ {`ghz`, `w`} and `points` evenly spaced values of `p` in [0, 1].
pub fn noisy_curve(family: &str, points: usize) -> Result<Value> {
    let pure = match family {
        "ghz" => ghz(3, 2)?,
        "w" => w_state(3)?,
        other => return Err(Error::Config(format!("unknown family {other:?} (ghz, w)"))),
    };
    let noise = maximally_mixed(vec![2, 2, 2])?;
    let settings = Settings::default();
    let points = points.clamp(2, 201);
    let rows = (0..points)
        .map(|i| {
            let p = i as f64 / (points - 1) as f64;
            let s = mixture(&pure, &noise, p)?;
            Ok(json!({
                "p": p,
                "i_n": dual_total_correlation(&s, &settings)?.value,
                "t_n": encode(total_correlation(&s, &settings)?),
                "j_n": encode(j_n(&s, &settings)?),
                "jtilde_n": encode(jtilde_n(&s, &settings)?),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Value::Array(rows))
}

/// Gap report for a seeded random three-qubit state: the first sample a
/// sweep with the same master seed would draw.
pub fn random_report(ensemble: &str, seed: u64) -> Result<Value> {
    let ensemble: Ensemble = ensemble.parse()?;
    let dims = vec![2, 2, 2];
    let seed = derive_seed(seed, 0);
    let state = match ensemble {
        Ensemble::Pure => random_pure(dims, seed)?,
        Ensemble::FullRank => random_mixed(dims, 8, seed)?,
        Ensemble::Rank(r) => random_mixed(dims, r, seed)?,
    };
    let report = correlations::gap_report(&state, &Settings::default())?;
    let mut record = ReportRecord::new(format!("{ensemble} seed {seed}"), report);
    record.seed = Some(seed);
    Ok(record.to_json(false))
}

/// Evaluates `quantity` (as on the command line) on a pasted state file.
pub fn compute_text(state_json: &str, quantity: &str) -> Result<Value> {
    let state = parse_state_json(state_json)?;
    let quantity: Quantity = quantity.parse()?;
    Ok(
        match compute_state(&state, quantity, &Settings::default())? {
            Computed::Scalar { value, base } => json!({
                "text": multicorr::lab::format_scalar(value, base),
                "value": encode(value),
            }),
            Computed::Report(record) => {
                json!({ "text": record.render(), "report": record.to_json(false) })
            }
        },
    )
}

#[wasm_bindgen(js_name = noisyCurve)]
pub fn noisy_curve_js(family: &str, points: u32) -> std::result::Result<String, JsError> {
    noisy_curve(family, points as usize)
        .map(|v| v.to_string())
        .map_err(to_js)
}

#[wasm_bindgen(js_name = randomReport)]
pub fn random_report_js(ensemble: &str, seed: u32) -> std::result::Result<String, JsError> {
    random_report(ensemble, u64::from(seed))
        .map(|v| v.to_string())
        .map_err(to_js)
}

#[wasm_bindgen(js_name = computeText)]
pub fn compute_text_js(state_json: &str, quantity: &str) -> std::result::Result<String, JsError> {
    compute_text(state_json, quantity)
        .map(|v| v.to_string())
        .map_err(to_js)
}
