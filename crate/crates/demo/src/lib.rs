//! Browser bindings for the interactive page in `www/`.
//!
//! Each exported function returns a JSON string. The `*_json` functions hold
//! the logic so they can be tested natively.

use bargmann::criteria::{
    c3_facet_check, commutator_gap, qubit_criterion, FACET_TOL, GAP_COMMUTE_TOL,
};
use bargmann::estimator::{estimate_invariant, EstimatorConfig, Settings};
use bargmann::invariants::{bargmann_invariant, Word};
use bargmann::states::{qubit_from_bloch, PositiveOperator};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn qubits(components: &[f64], count: usize) -> Result<Vec<PositiveOperator>, String> {
    if components.len() != 3 * count {
        return Err(format!(
            "expected {} Bloch components, got {}",
            3 * count,
            components.len()
        ));
    }
    components
        .chunks(3)
        .map(|r| qubit_from_bloch([r[0], r[1], r[2]]).map_err(|e| e.to_string()))
        .collect()
}

fn word(letters: &[usize]) -> Word {
    Word::new(letters.to_vec()).expect("static words are valid")
}

/// Commutator gap and overlap-polynomial residual of two qubits given by Bloch vectors.
pub fn qubit_pair_json(r1: &[f64], r2: &[f64]) -> Result<String, String> {
    let s = qubits(&[r1, r2].concat(), 2)?;
    let d = |l: &[usize]| {
        bargmann_invariant(&s, &word(l))
            .map(|z| z.re)
            .map_err(|e| e.to_string())
    };
    let (d11, d22, d12) = (d(&[1, 1])?, d(&[2, 2])?, d(&[1, 2])?);
    let gap = commutator_gap(&s[0], &s[1], GAP_COMMUTE_TOL).map_err(|e| e.to_string())?;
    let check = qubit_criterion(d11, d22, d12, GAP_COMMUTE_TOL);
    Ok(json!({
        "d11": d11, "d22": d22, "d12": d12,
        "delta1122": gap.delta_llkk, "delta1212": gap.delta_lklk,
        "gap": gap.gap, "residual": check.residual, "commutes": gap.commutes,
    })
    .to_string())
}

/// Three-cycle facet report for an overlap triple.
pub fn facets_json(z12: f64, z13: f64, z23: f64) -> String {
    serde_json::to_string(&c3_facet_check(z12, z13, z23, FACET_TOL)).expect("report serializes")
}

/// Exact and simulated `tr(ρ₁ρ₂ρ₃)` for three qubits (9 Bloch components).
pub fn estimate_triple_json(bloch: &[f64], shots: u32, seed: u32) -> Result<String, String> {
    let s = qubits(bloch, 3)?;
    let w = word(&[1, 2, 3]);
    let exact = bargmann_invariant(&s, &w).map_err(|e| e.to_string())?;
    let config = EstimatorConfig::new(u64::from(shots), u64::from(seed), Settings::RealAndImag)
        .map_err(|e| e.to_string())?;
    let est = estimate_invariant(&s, &w, &config).map_err(|e| e.to_string())?;
    Ok(json!({"exact_re": exact.re, "exact_im": exact.im, "estimate": est}).to_string())
}

#[wasm_bindgen]
pub fn qubit_pair(r1: &[f64], r2: &[f64]) -> Result<String, JsError> {
    qubit_pair_json(r1, r2).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn facets(z12: f64, z13: f64, z23: f64) -> String {
    facets_json(z12, z13, z23)
}

#[wasm_bindgen]
pub fn estimate_triple(bloch: &[f64], shots: u32, seed: u32) -> Result<String, JsError> {
    estimate_triple_json(bloch, shots, seed).map_err(|e| JsError::new(&e))
}
