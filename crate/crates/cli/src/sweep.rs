//! `qkl sweep`: one identity over a Cartesian grid of parameter values.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use num_complex::Complex;
use qkl_core::hyper::TruncationPolicy;
use qkl_core::identities::{run_case, sample_params, IdentityCase, IdentityId, PrecisionPolicy};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::params::{load_file, to_param_map};
use crate::report::{float, Report};

/// One grid axis, `name=v1,v2,…`.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

pub fn parse_axis(s: &str) -> Result<Axis, String> {
    let (name, list) = s.split_once('=').ok_or_else(|| format!("expected name=v1,v2,…, got '{s}'"))?;
    let values = list
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| format!("'{v}' in grid '{name}' is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    if name.is_empty() || values.is_empty() {
        return Err(format!("empty grid '{s}'"));
    }
    Ok(Axis { name: name.trim().into(), values })
}

pub struct SweepConfig {
    pub id: IdentityId,
    pub axes: Vec<Axis>,
    pub params: Option<PathBuf>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub precision: PrecisionPolicy,
    pub policy: TruncationPolicy,
}

/// Grid points in lexicographic order, first axis outermost.
fn grid(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![vec![]], |acc, axis| {
        acc.into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

pub fn run(cfg: &SweepConfig) -> Result<Report> {
    if cfg.axes.is_empty() {
        bail!("give at least one --grid axis");
    }
    let mut base = match &cfg.params {
        Some(path) => IdentityCase::new(cfg.id, to_param_map(&load_file(path)?)?),
        None => sample_params(cfg.id, cfg.seed),
    };
    if let Some(t) = cfg.tol {
        if !(t > 0.0) {
            bail!("--tol must be positive");
        }
        base.tol_rel = t;
    }
    base.precision = cfg.precision;
    base.policy = cfg.policy;
    for (i, axis) in cfg.axes.iter().enumerate() {
        if !base.params.contains_key(&axis.name) {
            let known: Vec<&str> = base.params.keys().map(String::as_str).collect();
            return Err(anyhow!("{} has no parameter '{}' (parameters: {})", cfg.id, axis.name, known.join(", ")));
        }
        if cfg.axes[..i].iter().any(|a| a.name == axis.name) {
            bail!("grid axis '{}' given twice", axis.name);
        }
    }
    let points = grid(&cfg.axes);
    let cases: Vec<IdentityCase> = points
        .iter()
        .map(|pt| {
            let mut case = base.clone();
            for (axis, &v) in cfg.axes.iter().zip(pt) {
                case.params.insert(axis.name.clone(), Complex::new(v, 0.0));
            }
            case
        })
        .collect();
    let outcomes: Vec<_> = cases.par_iter().map(run_case).collect();
    let results = points
        .iter()
        .zip(outcomes)
        .map(|(pt, res)| {
            let mut row: Map<String, Value> =
                cfg.axes.iter().zip(pt).map(|(a, &v)| (a.name.clone(), float(v))).collect();
            let (rel, abs, pass, err, msg) = match res {
                Ok(r) => (float(r.rel_err), float(r.abs_err), json!(r.pass), Value::Null, Value::Null),
                Err(e) => (Value::Null, Value::Null, json!(false), json!(e.kind()), json!(e.to_string())),
            };
            row.insert("rel_err".into(), rel);
            row.insert("abs_err".into(), abs);
            row.insert("pass".into(), pass);
            row.insert("error".into(), err);
            row.insert("message".into(), msg);
            Value::Object(row)
        })
        .collect();
    let config = json!({
        "identity": cfg.id.as_str(),
        "grid": cfg.axes.iter().map(|a| json!({"name": a.name, "values": a.values.iter().map(|&v| float(v)).collect::<Vec<_>>()})).collect::<Vec<_>>(),
        "params": cfg.params.as_ref().map(|p| p.display().to_string()),
        "seed": cfg.params.is_none().then_some(cfg.seed),
        "base": crate::params::params_json(&base.params),
        "tol": float(base.tol_rel),
        "precision": cfg.precision.as_str(),
        "max_terms": cfg.policy.max_terms,
    });
    Ok(Report { command: "sweep", config, results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_lexicographic() {
        let axes = vec![
            Axis { name: "a".into(), values: vec![1.0, 2.0] },
            Axis { name: "b".into(), values: vec![10.0, 20.0, 30.0] },
        ];
        let g = grid(&axes);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![1.0, 10.0]);
        assert_eq!(g[1], vec![1.0, 20.0]);
        assert_eq!(g[3], vec![2.0, 10.0]);
    }

    #[test]
    fn axis_parsing() {
        assert_eq!(parse_axis("t=0,0.5").unwrap().values, vec![0.0, 0.5]);
        assert!(parse_axis("t").is_err());
        assert!(parse_axis("t=0,x").is_err());
    }
}
