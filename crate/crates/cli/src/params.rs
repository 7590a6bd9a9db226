//! Parameter input: `name=value` assignments on the command line and flat
//! JSON parameter files.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use qkl_core::exact::{parse_rational, GaussianRational};
use qkl_core::identities::ParamMap;
use serde_json::Value;

/// A numeric parameter kept as literal text, so exact checks read the decimal
/// the user wrote rather than its nearest double.
#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub re: String,
    pub im: String,
}

impl Literal {
    pub fn real(text: impl Into<String>) -> Self {
        Literal { re: text.into(), im: "0".into() }
    }

    pub fn value(&self, name: &str) -> Result<Complex<f64>> {
        let part = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| anyhow!("parameter '{name}': '{s}' is not a finite number"))
        };
        Ok(Complex::new(part(&self.re)?, part(&self.im)?))
    }

    pub fn exact(&self, name: &str) -> Result<GaussianRational> {
        let part = |s: &str| parse_rational(s).with_context(|| format!("parameter '{name}'"));
        Ok(GaussianRational::new(part(&self.re)?, part(&self.im)?))
    }

    pub fn is_real(&self) -> bool {
        self.im.parse::<f64>().map(|v| v == 0.0).unwrap_or(false)
    }

    pub fn to_json(&self) -> Value {
        let num = |s: &str| serde_json::from_str::<Value>(s).unwrap_or_else(|_| Value::String(s.into()));
        if self.is_real() {
            num(&self.re)
        } else {
            Value::Array(vec![num(&self.re), num(&self.im)])
        }
    }
}

pub type Literals = BTreeMap<String, Literal>;

fn number_text(v: &Value) -> Option<String> {
    match v {
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn literal_from_json(name: &str, v: &Value) -> Result<Literal> {
    if let Some(re) = number_text(v) {
        return Ok(Literal::real(re));
    }
    if let Value::Array(parts) = v {
        if let [re, im] = parts.as_slice() {
            if let (Some(re), Some(im)) = (number_text(re), number_text(im)) {
                return Ok(Literal { re, im });
            }
        }
    }
    bail!("parameter '{name}' must be a number or a [re, im] pair, got {v}")
}

/// Reads a flat JSON object of `name → number` or `name → [re, im]`.
pub fn load_file(path: &Path) -> Result<Literals> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let json: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let Value::Object(map) = json else {
        bail!("{}: expected a JSON object of parameters", path.display());
    };
    map.iter().map(|(k, v)| Ok((k.clone(), literal_from_json(k, v)?))).collect()
}

pub fn to_param_map(lits: &Literals) -> Result<ParamMap> {
    lits.iter().map(|(k, v)| Ok((k.clone(), v.value(k)?))).collect()
}

pub fn params_json(params: &ParamMap) -> Value {
    let map = params
        .iter()
        .map(|(k, v)| {
            let val = if v.im == 0.0 { crate::report::float(v.re) } else { crate::report::complex(*v) };
            (k.clone(), val)
        })
        .collect();
    Value::Object(map)
}

/// `name=value` assignments. Values that read as JSON numbers or `[re, im]`
/// pairs are numeric; anything else is a word such as `family=mp`.
#[derive(Debug, Default)]
pub struct Assignments {
    nums: Literals,
    words: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Assignments {
    pub fn parse(items: &[String]) -> Result<Self> {
        let mut out = Assignments::default();
        for item in items {
            let (name, text) = item.split_once('=').ok_or_else(|| anyhow!("expected name=value, got '{item}'"))?;
            let name = name.trim();
            if name.is_empty() {
                bail!("empty parameter name in '{item}'");
            }
            if out.nums.contains_key(name) || out.words.contains_key(name) {
                bail!("parameter '{name}' given twice");
            }
            match serde_json::from_str::<Value>(text.trim()) {
                Ok(v @ (Value::Number(_) | Value::Array(_))) => {
                    out.nums.insert(name.into(), literal_from_json(name, &v)?);
                }
                _ => {
                    out.words.insert(name.into(), text.trim().into());
                }
            }
        }
        Ok(out)
    }

    /// Adds file parameters that the command line does not already set.
    pub fn merge_file(&mut self, lits: Literals) {
        for (k, v) in lits {
            if !self.words.contains_key(&k) {
                self.nums.entry(k).or_insert(v);
            }
        }
    }

    fn mark(&self, name: &str) {
        self.used.borrow_mut().insert(name.to_string());
    }

    pub fn has(&self, name: &str) -> bool {
        self.nums.contains_key(name)
    }

    pub fn word(&self, name: &str) -> Result<String> {
        self.mark(name);
        self.words.get(name).cloned().ok_or_else(|| anyhow!("missing '{name}='"))
    }

    pub fn word_or(&self, name: &str, default: &str) -> Result<String> {
        if self.nums.contains_key(name) {
            bail!("'{name}' expects a word, not a number");
        }
        self.mark(name);
        Ok(self.words.get(name).cloned().unwrap_or_else(|| default.into()))
    }

    pub fn cx(&self, name: &str) -> Result<Complex<f64>> {
        self.mark(name);
        match self.nums.get(name) {
            Some(l) => l.value(name),
            None if self.words.contains_key(name) => bail!("parameter '{name}' is not a number"),
            None => bail!("missing parameter '{name}'"),
        }
    }

    pub fn cx_or(&self, name: &str, default: f64) -> Result<Complex<f64>> {
        if self.has(name) {
            self.cx(name)
        } else {
            Ok(Complex::new(default, 0.0))
        }
    }

    pub fn real(&self, name: &str) -> Result<f64> {
        let v = self.cx(name)?;
        if v.im != 0.0 {
            bail!("parameter '{name}' must be real");
        }
        Ok(v.re)
    }

    pub fn count(&self, name: &str) -> Result<usize> {
        let v = self.real(name)?;
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            bail!("parameter '{name}' = {v} must be a nonnegative integer");
        }
        Ok(v as usize)
    }

    pub fn flag(&self, name: &str) -> Result<bool> {
        if !self.has(name) {
            self.mark(name);
            return Ok(false);
        }
        match self.count(name)? {
            0 => Ok(false),
            1 => Ok(true),
            _ => bail!("parameter '{name}' must be 0 or 1"),
        }
    }

    /// Parameters `prefix1, prefix2, …` up to the first gap.
    pub fn indexed(&self, prefix: &str) -> Result<Vec<Complex<f64>>> {
        (1..).map(|i| format!("{prefix}{i}")).take_while(|n| self.has(n)).map(|n| self.cx(&n)).collect()
    }

    /// Rejects parameters nothing asked for, which are usually typos.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&str> =
            self.nums.keys().chain(self.words.keys()).filter(|k| !used.contains(*k)).map(String::as_str).collect();
        if !unknown.is_empty() {
            bail!("unknown parameter(s): {}", unknown.join(", "));
        }
        Ok(())
    }

    /// All numeric parameters in input form, for echoing in reports.
    pub fn numbers_json(&self) -> Value {
        Value::Object(self.nums.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
    }

    pub fn words_json(&self) -> Value {
        Value::Object(self.words.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect())
    }
}

fn rational_text(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_json(r: &BigRational) -> Value {
    Value::String(rational_text(r))
}

/// Exact values as text: `p/q`, or `p/q+r/si` for Gaussian rationals.
pub fn gaussian_json(g: &GaussianRational) -> Value {
    let zero = BigRational::from_integer(0.into());
    if g.im == zero {
        return rational_json(&g.re);
    }
    let sign = if g.im < zero { "" } else { "+" };
    Value::String(format!("{}{sign}{}i", rational_text(&g.re), rational_text(&g.im)))
}
