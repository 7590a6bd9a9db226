//! `qkl check`: seeded identity suites, single parameter files, and exact
//! coefficient checks.

use std::path::PathBuf;

use anyhow::{bail, Result};
use num_rational::BigRational;
use qkl_core::exact::{
    reference_hahn_sets, reference_mult_2f1_sets, verify_hahn_exact, verify_mult_2f1_exact, GaussianRational,
};
use qkl_core::hyper::TruncationPolicy;
use qkl_core::identities::{
    run_case, sample_params, IdentityCase, IdentityId, IdentityReport, PrecisionPolicy, SideTerms,
};
use qkl_core::QklError;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::params::{gaussian_json, load_file, params_json, rational_json, to_param_map, Literals};
use crate::report::{complex, float, Report};

pub const DEFAULT_SEEDS: (u64, u64) = (0, 49);
const EXACT_IDS: [IdentityId; 3] =
    [IdentityId::Mult2f1, IdentityId::BurchnallChaundy, IdentityId::HahnBilinearDiscrete];

pub struct CheckConfig {
    pub ids: Vec<IdentityId>,
    pub all: bool,
    pub seeds: Option<(u64, u64)>,
    pub params: Option<PathBuf>,
    pub tol: Option<f64>,
    pub precision: PrecisionPolicy,
    pub policy: TruncationPolicy,
    pub exact: bool,
    pub big_k: usize,
}

/// Tally of a check run. `input_error` is set when a user-supplied parameter
/// set was rejected, which maps to its own exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
    pub input_error: Option<QklError>,
}

impl Outcome {
    pub fn summary(&self) -> String {
        format!("{} passed / {} failed / {} errored", self.passed, self.failed, self.errored)
    }
}

impl CheckConfig {
    fn selected(&self) -> Result<Vec<IdentityId>> {
        let mut ids = match (self.all, self.ids.is_empty()) {
            (true, true) if self.exact => EXACT_IDS.to_vec(),
            (true, true) => IdentityId::ALL.to_vec(),
            (false, false) => self.ids.clone(),
            (true, false) => bail!("--all and --identity are mutually exclusive"),
            (false, true) => bail!("name an identity with --identity, or pass --all"),
        };
        ids.sort();
        ids.dedup();
        if self.exact {
            if let Some(id) = ids.iter().find(|id| !EXACT_IDS.contains(id)) {
                bail!(
                    "identity {id} has no exact check (available: mult_2f1, burchnall_chaundy, hahn_bilinear_discrete)"
                );
            }
        }
        if self.params.is_some() && ids.len() != 1 {
            bail!("--params applies to exactly one identity");
        }
        if self.params.is_some() && self.seeds.is_some() {
            bail!("--params and --seeds are mutually exclusive");
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                bail!("--tol must be positive");
            }
        }
        Ok(ids)
    }

    fn config_json(&self, ids: &[IdentityId]) -> Value {
        let seeds = match (&self.params, self.exact) {
            (None, false) => {
                let (a, b) = self.seeds.unwrap_or(DEFAULT_SEEDS);
                json!([a, b])
            }
            _ => Value::Null,
        };
        json!({
            "identities": ids.iter().map(|id| id.as_str()).collect::<Vec<_>>(),
            "all": self.all,
            "seeds": seeds,
            "params": self.params.as_ref().map(|p| p.display().to_string()),
            "tol": self.tol.map(float),
            "precision": self.precision.as_str(),
            "max_terms": self.policy.max_terms,
            "exact": self.exact,
            "K": self.exact.then_some(self.big_k),
        })
    }
}

pub fn run(cfg: &CheckConfig) -> Result<(Report, Outcome)> {
    let ids = cfg.selected()?;
    let file = cfg.params.as_deref().map(load_file).transpose()?;
    let (results, outcome) =
        if cfg.exact { run_exact(&ids, file.as_ref(), cfg.big_k)? } else { run_numeric(cfg, &ids, file.as_ref())? };
    let report = Report { command: "check", config: cfg.config_json(&ids), results };
    Ok((report, outcome))
}

fn run_numeric(cfg: &CheckConfig, ids: &[IdentityId], file: Option<&Literals>) -> Result<(Vec<Value>, Outcome)> {
    let finish = |mut case: IdentityCase| {
        if let Some(t) = cfg.tol {
            case.tol_rel = t;
        }
        case.precision = cfg.precision;
        case.policy = cfg.policy;
        case
    };
    let cases: Vec<IdentityCase> = match file {
        Some(lits) => vec![finish(IdentityCase::new(ids[0], to_param_map(lits)?))],
        None => {
            let (a, b) = cfg.seeds.unwrap_or(DEFAULT_SEEDS);
            ids.iter().flat_map(|&id| (a..=b).map(move |seed| sample_params(id, seed))).map(finish).collect()
        }
    };
    let outcomes: Vec<_> = cases.par_iter().map(run_case).collect();
    let mut tally = Outcome::default();
    let mut records = Vec::with_capacity(cases.len());
    for (case, res) in cases.iter().zip(outcomes) {
        match res {
            Ok(r) => {
                if r.pass {
                    tally.passed += 1;
                } else {
                    tally.failed += 1;
                }
                records.push(report_json(&r));
            }
            Err(e) => {
                tally.errored += 1;
                records.push(error_json(case, &e));
                if file.is_some() {
                    tally.input_error = Some(e);
                }
            }
        }
    }
    Ok((records, tally))
}

fn terms_json(t: &SideTerms) -> Value {
    json!({
        "terms_used": t.terms_used,
        "tail_estimate": float(t.tail_estimate),
        "status": t.status.as_str(),
    })
}

pub fn report_json(r: &IdentityReport) -> Value {
    json!({
        "identity": r.id.as_str(),
        "seed": r.seed,
        "params": params_json(&r.params),
        "lhs": complex(r.lhs),
        "rhs": complex(r.rhs),
        "abs_err": float(r.abs_err),
        "rel_err": float(r.rel_err),
        "tol_rel": float(r.tol_rel),
        "pass": r.pass,
        "precision_used": r.precision_used.as_str(),
        "lhs_terms": terms_json(&r.lhs_terms),
        "rhs_terms": terms_json(&r.rhs_terms),
        "note": r.note,
    })
}

fn error_json(case: &IdentityCase, e: &QklError) -> Value {
    json!({
        "identity": case.id.as_str(),
        "seed": case.seed,
        "params": params_json(&case.params),
        "pass": false,
        "error": e.kind(),
        "message": e.to_string(),
    })
}

fn exact_param(lits: &Literals, name: &str) -> Result<GaussianRational> {
    match lits.get(name) {
        Some(l) => l.exact(name),
        None => bail!("missing parameter '{name}'"),
    }
}

fn exact_count(lits: &Literals, name: &str) -> Result<usize> {
    let g = exact_param(lits, name)?;
    let zero = BigRational::from_integer(0.into());
    if g.im != zero || !g.re.is_integer() || g.re < zero {
        bail!("parameter '{name}' must be a nonnegative integer");
    }
    Ok(g.re.to_integer().try_into()?)
}

fn exact_real(lits: &Literals, name: &str) -> Result<BigRational> {
    let g = exact_param(lits, name)?;
    if g.im != BigRational::from_integer(0.into()) {
        bail!("parameter '{name}' must be real");
    }
    Ok(g.re)
}

fn check_names(lits: &Literals, names: &[&str]) -> Result<()> {
    if let Some(k) = lits.keys().find(|k| !names.contains(&k.as_str())) {
        bail!("unknown parameter '{k}' (expected {})", names.join(", "));
    }
    Ok(())
}

const MULT_NAMES: [&str; 6] = ["a", "b", "c", "ap", "bp", "cp"];

fn mult_sets(id: IdentityId, file: Option<&Literals>) -> Result<Vec<[GaussianRational; 6]>> {
    let bc = id == IdentityId::BurchnallChaundy;
    match file {
        Some(lits) if bc => {
            check_names(lits, &MULT_NAMES[..3])?;
            let [a, b, c] = [0, 1, 2].map(|i| exact_param(lits, MULT_NAMES[i]));
            let (a, b, c) = (a?, b?, c?);
            Ok(vec![[a.clone(), b.clone(), c.clone(), a, b, c]])
        }
        Some(lits) => {
            check_names(lits, &MULT_NAMES)?;
            let v = MULT_NAMES.iter().map(|n| exact_param(lits, n)).collect::<Result<Vec<_>>>()?;
            Ok(vec![v.try_into().expect("six parameters")])
        }
        None if bc => Ok(reference_mult_2f1_sets()
            .into_iter()
            .map(|[a, b, c, ..]| [a.clone(), b.clone(), c.clone(), a, b, c])
            .collect()),
        None => Ok(reference_mult_2f1_sets()),
    }
}

type HahnSet = (BigRational, BigRational, usize, usize, BigRational);

fn hahn_sets(file: Option<&Literals>) -> Result<Vec<HahnSet>> {
    match file {
        Some(lits) => {
            check_names(lits, &["alpha", "beta", "M", "N", "z"])?;
            Ok(vec![(
                exact_real(lits, "alpha")?,
                exact_real(lits, "beta")?,
                exact_count(lits, "M")?,
                exact_count(lits, "N")?,
                exact_real(lits, "z")?,
            )])
        }
        None => Ok(reference_hahn_sets()),
    }
}

fn run_exact(ids: &[IdentityId], file: Option<&Literals>, big_k: usize) -> Result<(Vec<Value>, Outcome)> {
    let mut tally = Outcome::default();
    let mut records = Vec::new();
    let mut settle = |rec: Value, res: std::result::Result<bool, QklError>, tally: &mut Outcome| {
        let mut rec = rec;
        match res {
            Ok(true) => tally.passed += 1,
            Ok(false) => tally.failed += 1,
            Err(e) => {
                tally.errored += 1;
                rec["error"] = json!(e.kind());
                rec["message"] = json!(e.to_string());
                if file.is_some() {
                    tally.input_error = Some(e);
                }
            }
        }
        records.push(rec);
    };
    for &id in ids {
        if id == IdentityId::HahnBilinearDiscrete {
            for (set, (al, be, m, n, z)) in hahn_sets(file)?.into_iter().enumerate() {
                let mut mismatches = Vec::new();
                let res = (0..=m)
                    .flat_map(|x| (0..=n).map(move |y| (x, y)))
                    .try_for_each(|(x, y)| {
                        if !verify_hahn_exact(&al, &be, m, n, x, y, &z)? {
                            mismatches.push(json!([x, y]));
                        }
                        Ok(())
                    })
                    .map(|()| mismatches.is_empty());
                let rec = json!({
                    "identity": id.as_str(),
                    "set": set,
                    "params": {"alpha": rational_json(&al), "beta": rational_json(&be), "M": m, "N": n, "z": rational_json(&z)},
                    "points": (m + 1) * (n + 1),
                    "mismatches": mismatches,
                    "equal": res.as_ref().ok(),
                });
                settle(rec, res, &mut tally);
            }
        } else {
            for (set, p) in mult_sets(id, file)?.into_iter().enumerate() {
                let verdict = verify_mult_2f1_exact(&p, big_k);
                let params: serde_json::Map<String, Value> =
                    MULT_NAMES.iter().zip(&p).map(|(n, v)| (n.to_string(), gaussian_json(v))).collect();
                let rec = json!({
                    "identity": id.as_str(),
                    "set": set,
                    "params": params,
                    "K": big_k,
                    "equal": verdict.as_ref().ok().map(|v| v.equal),
                    "first_failure": verdict.as_ref().ok().and_then(|v| v.first_failure),
                    "checked": verdict.as_ref().ok().map(|v| v.checked),
                });
                settle(rec, verdict.map(|v| v.equal), &mut tally);
            }
        }
    }
    Ok((records, tally))
}
