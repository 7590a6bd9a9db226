//! `qkl ortho`: Gram matrix of an orthonormal family by quadrature.

use anyhow::{bail, Result};
use qkl_core::quadrature::{ortho_gram, OrthoFamily};
use serde_json::{json, Value};

use crate::params::Assignments;
use crate::report::float;

/// Default absolute tolerance of the quadrature itself.
pub const QUAD_TOL: f64 = 1e-10;

/// Returns the report record and whether every entry is within `tol` of the
/// identity matrix.
pub fn run(a: &Assignments, tol: f64) -> Result<(Value, bool)> {
    if !(tol > 0.0) {
        bail!("--tol must be positive");
    }
    let family = a.word("family")?;
    let fam = match family.as_str() {
        "mp" => OrthoFamily::MeixnerPollaczek { k: a.real("k")?, phi: a.real("phi")? },
        "asc" => OrthoFamily::AlSalamChihara { q: a.real("q")?, a: a.cx("a")?, b: a.cx_or("b", 0.0)? },
        other => bail!("unknown family '{other}' for ortho (mp, asc)"),
    };
    let nmax = a.count("nmax")?;
    let quad_tol = if a.has("quad_tol") { a.real("quad_tol")? } else { QUAD_TOL };
    a.finish()?;
    let g = ortho_gram(fam, nmax, quad_tol)?;
    let dev = g.max_deviation();
    let ok = dev <= tol;
    let record = json!({
        "family": family,
        "params": a.numbers_json(),
        "nmax": nmax,
        "max_offdiag": float(g.max_offdiag),
        "max_diag_dev": float(g.max_diag_dev),
        "max_deviation": float(dev),
        "tol": float(tol),
        "pass": ok,
        "error_estimate": float(g.error_estimate),
        "evaluations": g.evaluations,
        "range": [float(g.range.0), float(g.range.1)],
        "matrix": g.matrix.iter().map(|row| row.iter().map(|&v| float(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok((record, ok))
}
