//! Browser demo bindings: a `2F1` evaluator, the Meixner–Pollaczek Poisson
//! kernel in both forms, and a seeded identity check.
//!
//! The `wasm_bindgen` exports are thin wrappers over plain functions so the
//! logic can be tested natively.

use num_complex::Complex;
use qkl_core::hyper::{hyp2f1, TruncationPolicy};
use qkl_core::identities::{run_case, sample_params, IdentityId};
use qkl_core::kernels::{mp_kernel_closed, mp_kernel_sum, KernelPoint};
use wasm_bindgen::prelude::*;

/// `[re, im, terms_used, tail_estimate]` of `2F1(a, b; c; z)`.
pub fn hyp2f1_values(a: [f64; 2], b: [f64; 2], c: [f64; 2], z: [f64; 2]) -> Result<Vec<f64>, String> {
    let cx = |v: [f64; 2]| Complex::new(v[0], v[1]);
    let e = hyp2f1(cx(a), cx(b), cx(c), cx(z), &TruncationPolicy::default()).map_err(|e| e.to_string())?;
    Ok(vec![e.value.re, e.value.im, e.terms_used as f64, e.tail_estimate])
}

/// `[sum, closed, terms_used]` of the kernel at real `t`: the bilinear sum
/// and the closed form, real parts.
pub fn mp_kernel_values(k: f64, phi: f64, t: f64, x: f64, y: f64) -> Result<Vec<f64>, String> {
    let policy = TruncationPolicy::default();
    let pt = KernelPoint::new(Complex::new(t, 0.0), x, y);
    let sum = mp_kernel_sum(k, phi, pt, &policy).map_err(|e| e.to_string())?;
    let closed = mp_kernel_closed(k, phi, pt, &policy).map_err(|e| e.to_string())?;
    Ok(vec![sum.value.re, closed.value.re, sum.terms_used as f64])
}

/// Runs one seeded case of an identity and returns a one-line summary.
pub fn check_summary(identity: &str, seed: u64) -> Result<String, String> {
    let id: IdentityId = identity.parse().map_err(|e: qkl_core::QklError| e.to_string())?;
    let r = run_case(&sample_params(id, seed)).map_err(|e| e.to_string())?;
    let params: Vec<String> = r
        .params
        .iter()
        .map(|(k, v)| if v.im == 0.0 { format!("{k}={:.6}", v.re) } else { format!("{k}={:.6}{:+.6}i", v.re, v.im) })
        .collect();
    Ok(format!(
        "{} seed {seed}: {}\n  {}\n  lhs = {:.15e} {:+.3e}i\n  rhs = {:.15e} {:+.3e}i\n  rel_err = {:.3e} (tol {:.0e}), {}",
        id,
        if r.pass { "pass" } else { "FAIL" },
        params.join(", "),
        r.lhs.re,
        r.lhs.im,
        r.rhs.re,
        r.rhs.im,
        r.rel_err,
        r.tol_rel,
        r.precision_used.as_str(),
    ))
}

/// Names of all registered identities.
pub fn identity_names() -> Vec<String> {
    IdentityId::ALL.iter().map(|id| id.as_str().to_string()).collect()
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn hyp2f1_eval(
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    c_re: f64,
    c_im: f64,
    z_re: f64,
    z_im: f64,
) -> Result<Vec<f64>, JsError> {
    hyp2f1_values([a_re, a_im], [b_re, b_im], [c_re, c_im], [z_re, z_im]).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mp_kernel(k: f64, phi: f64, t: f64, x: f64, y: f64) -> Result<Vec<f64>, JsError> {
    mp_kernel_values(k, phi, t, x, y).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check_identity(identity: &str, seed: u32) -> Result<String, JsError> {
    check_summary(identity, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn identities() -> Vec<String> {
    identity_names()
}
