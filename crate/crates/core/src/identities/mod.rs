//! Registry of the bilinear generating-function identities. Each entry
//! evaluates its two sides along separate code paths and reports the residual.

mod basic;
mod classical;
mod sample;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::dd::Dd;
use crate::error::{QklError, Result};
use crate::hyper::{SeriesEval, SeriesStatus, TruncationPolicy};
use crate::real::{absf, to_c64, PrecisionMode, Real};

pub use sample::{degenerate_case, sample_params};

macro_rules! identity_ids {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum IdentityId {
            $($variant,)*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $name,)*
                }
            }
        }

        impl FromStr for IdentityId {
            type Err = QklError;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(IdentityId::$variant),)*
                    _ => Err(QklError::Param(format!("unknown identity '{s}'"))),
                }
            }
        }
    };
}

identity_ids! {
    MpPoisson => "mp_poisson",
    MpRecurrence => "mp_recurrence",
    HahnProduct => "hahn_product",
    ChahnBilinear => "chahn_bilinear",
    JacobiBessel => "jacobi_bessel",
    ChahnFinite => "chahn_finite",
    ChahnFiniteWhipple => "chahn_finite_whipple",
    Mult2f1 => "mult_2f1",
    BurchnallChaundy => "burchnall_chaundy",
    Conf1f1 => "conf_1f1",
    HahnBilinearDiscrete => "hahn_bilinear_discrete",
    AcPoisson => "ac_poisson",
    AcPoissonAlt => "ac_poisson_alt",
    AcSpoisson => "ac_spoisson",
    AwBilinear => "aw_bilinear",
    CdqhBilinear => "cdqh_bilinear",
    AscBilinear => "asc_bilinear",
    CbqhReduction => "cbqh_reduction",
    MpSpoisson => "mp_spoisson",
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl IdentityId {
    /// Default relative tolerance of the seeded suite.
    pub fn default_tol(self) -> f64 {
        use IdentityId::*;
        match self {
            MpPoisson | MpRecurrence | ChahnFinite | ChahnFiniteWhipple | Mult2f1 | BurchnallChaundy
            | HahnBilinearDiscrete | AcPoisson | AcPoissonAlt | CbqhReduction => 1e-9,
            AwBilinear => 1e-7,
            _ => 1e-8,
        }
    }

    /// A remark attached to every report of this identity.
    fn note(self) -> Option<&'static str> {
        match self {
            IdentityId::HahnBilinearDiscrete => {
                Some("the j-th coefficient includes a factor 1/j!; without it the two sides differ from j = 1 on")
            }
            _ => None,
        }
    }
}

/// Parameter values by name. Real parameters have zero imaginary part.
pub type ParamMap = BTreeMap<String, Complex<f64>>;

/// How the two sides are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrecisionPolicy {
    Standard,
    Extended,
    /// Standard, retried in Extended when the residual lands just above tolerance.
    #[default]
    Auto,
}

impl FromStr for PrecisionPolicy {
    type Err = QklError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(PrecisionPolicy::Standard),
            "extended" => Ok(PrecisionPolicy::Extended),
            "auto" => Ok(PrecisionPolicy::Auto),
            _ => Err(QklError::Param(format!("unknown precision '{s}'"))),
        }
    }
}

impl PrecisionPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            PrecisionPolicy::Standard => "standard",
            PrecisionPolicy::Extended => "extended",
            PrecisionPolicy::Auto => "auto",
        }
    }
}

/// One parameterised instance of an identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCase {
    pub id: IdentityId,
    pub params: ParamMap,
    pub tol_rel: f64,
    pub policy: TruncationPolicy,
    pub seed: Option<u64>,
    pub precision: PrecisionPolicy,
}

impl IdentityCase {
    pub fn new(id: IdentityId, params: ParamMap) -> Self {
        IdentityCase {
            id,
            params,
            tol_rel: id.default_tol(),
            policy: TruncationPolicy::default(),
            seed: None,
            precision: PrecisionPolicy::Auto,
        }
    }
}

/// Truncation metadata of one side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SideTerms {
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub status: SeriesStatus,
}

impl<R: Real> From<&SeriesEval<R>> for SideTerms {
    fn from(e: &SeriesEval<R>) -> Self {
        SideTerms { terms_used: e.terms_used, tail_estimate: e.tail_estimate, status: e.status }
    }
}

/// Two-sided evaluation with residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub seed: Option<u64>,
    pub params: ParamMap,
    pub lhs: Complex<f64>,
    pub rhs: Complex<f64>,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol_rel: f64,
    pub pass: bool,
    pub lhs_terms: SideTerms,
    pub rhs_terms: SideTerms,
    pub precision_used: PrecisionMode,
    pub note: Option<String>,
}

/// `|lhs − rhs| / max(|lhs|, |rhs|, 1e−300)`.
pub fn relative_error(lhs: Complex<f64>, rhs: Complex<f64>) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300)
}

/// Evaluates both sides of `case` and compares them. Hypotheses are
/// checked first; a violation is a [`QklError::Hypothesis`].
pub fn run_case(case: &IdentityCase) -> Result<IdentityReport> {
    if !(case.tol_rel > 0.0) {
        return Err(QklError::Param(format!("tol_rel = {} must be positive", case.tol_rel)));
    }
    let report = match case.precision {
        PrecisionPolicy::Standard => evaluate::<f64>(case)?,
        PrecisionPolicy::Extended => evaluate::<Dd>(case)?,
        PrecisionPolicy::Auto => {
            let first = evaluate::<f64>(case)?;
            let retry =
                !first.rel_err.is_finite() || (first.rel_err > case.tol_rel && first.rel_err < 1e3 * case.tol_rel);
            if retry {
                evaluate::<Dd>(case)?
            } else {
                first
            }
        }
    };
    Ok(report)
}

fn evaluate<R: Real>(case: &IdentityCase) -> Result<IdentityReport> {
    let args = Args(&case.params);
    // The tail tolerance is read relative to double precision; extended runs
    // tighten it by the same factor as the working precision.
    let scaled = TruncationPolicy { tail_tol: case.policy.tail_tol * (R::EPS / <f64 as Real>::EPS), ..case.policy };
    let policy = &scaled;
    use IdentityId::*;
    let (lhs, rhs): (SeriesEval<R>, SeriesEval<R>) = match case.id {
        MpPoisson => classical::mp_poisson(&args, policy)?,
        MpRecurrence => classical::mp_recurrence(&args)?,
        HahnProduct => classical::hahn_product(&args, policy)?,
        ChahnBilinear => classical::chahn_bilinear(&args, policy)?,
        JacobiBessel => classical::jacobi_bessel(&args, policy)?,
        ChahnFinite => classical::chahn_finite(&args, policy)?,
        ChahnFiniteWhipple => classical::chahn_finite_whipple(&args, policy)?,
        Mult2f1 => classical::mult_2f1(&args, policy, false)?,
        BurchnallChaundy => classical::mult_2f1(&args, policy, true)?,
        Conf1f1 => classical::conf_1f1(&args, policy)?,
        HahnBilinearDiscrete => classical::hahn_bilinear_discrete(&args, policy)?,
        MpSpoisson => classical::mp_spoisson(&args, policy)?,
        AcPoisson => basic::ac_poisson(&args, policy, false)?,
        AcPoissonAlt => basic::ac_poisson(&args, policy, true)?,
        AcSpoisson => basic::ac_spoisson(&args, policy)?,
        AwBilinear => basic::aw_bilinear(&args, policy)?,
        CdqhBilinear => basic::cdqh_bilinear(&args, policy)?,
        AscBilinear => basic::asc_bilinear(&args, policy)?,
        CbqhReduction => basic::cbqh_reduction(&args, policy)?,
    };
    let l = to_c64(lhs.value);
    let r = to_c64(rhs.value);
    let finite = l.re.is_finite() && l.im.is_finite() && r.re.is_finite() && r.im.is_finite();
    let abs_err = if finite { absf(lhs.value - rhs.value) } else { f64::NAN };
    let rel_err = abs_err / l.norm().max(r.norm()).max(1e-300);
    let mut notes: Vec<String> = case.id.note().map(String::from).into_iter().collect();
    for (side, e) in [("lhs", &lhs), ("rhs", &rhs)] {
        if e.status == SeriesStatus::MaxTermsReached {
            notes.push(format!("{side} stopped at its term cap after {} terms", e.terms_used));
        }
    }
    Ok(IdentityReport {
        id: case.id,
        seed: case.seed,
        params: case.params.clone(),
        lhs: l,
        rhs: r,
        abs_err,
        rel_err,
        tol_rel: case.tol_rel,
        pass: rel_err <= case.tol_rel,
        lhs_terms: SideTerms::from(&lhs),
        rhs_terms: SideTerms::from(&rhs),
        precision_used: R::MODE,
        note: if notes.is_empty() { None } else { Some(notes.join("; ")) },
    })
}

/// Typed access to a [`ParamMap`].
pub(crate) struct Args<'a>(&'a ParamMap);

impl Args<'_> {
    fn get(&self, name: &str) -> Result<Complex<f64>> {
        let v = self.0.get(name).copied().ok_or_else(|| QklError::Param(format!("missing parameter '{name}'")))?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(QklError::Param(format!("parameter '{name}' is not finite")));
        }
        Ok(v)
    }

    fn opt(&self, name: &str) -> Result<Option<Complex<f64>>> {
        if self.0.contains_key(name) {
            self.get(name).map(Some)
        } else {
            Ok(None)
        }
    }

    pub(crate) fn cx<R: Real>(&self, name: &str) -> Result<Complex<R>> {
        let v = self.get(name)?;
        Ok(Complex::new(R::from_f64(v.re), R::from_f64(v.im)))
    }

    pub(crate) fn real<R: Real>(&self, name: &str) -> Result<R> {
        let v = self.get(name)?;
        if v.im != 0.0 {
            return Err(QklError::Param(format!("parameter '{name}' must be real")));
        }
        Ok(R::from_f64(v.re))
    }

    pub(crate) fn count(&self, name: &str) -> Result<usize> {
        let v = self.get(name)?;
        if v.im != 0.0 || v.re < 0.0 || v.re != v.re.round() || v.re > 1e6 {
            return Err(QklError::Param(format!("parameter '{name}' must be a nonnegative integer")));
        }
        Ok(v.re as usize)
    }
}

/// A series argument outside the unit disc makes the sum diverge; that is
/// reported as divergence rather than as a broken hypothesis.
pub(crate) fn inside_unit_disc(name: &str, modulus: f64) -> Result<()> {
    if modulus < 1.0 {
        Ok(())
    } else {
        Err(QklError::Divergence(format!("|{name}| = {modulus} must be below 1")))
    }
}

pub(crate) fn hypothesis(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(QklError::Hypothesis(what()))
    }
}

/// Product of two evaluations, with first-order propagation of the tails.
pub(crate) fn mul_eval<R: Real>(a: SeriesEval<R>, b: SeriesEval<R>) -> SeriesEval<R> {
    SeriesEval {
        value: a.value * b.value,
        terms_used: a.terms_used + b.terms_used,
        tail_estimate: a.tail_estimate * absf(b.value) + b.tail_estimate * absf(a.value),
        status: worse(a.status, b.status),
        precision: a.precision.max(b.precision),
    }
}

/// `factor · e`, for closed-form factors.
pub(crate) fn scale_eval<R: Real>(factor: Complex<R>, e: SeriesEval<R>) -> SeriesEval<R> {
    SeriesEval { value: factor * e.value, tail_estimate: e.tail_estimate * absf(factor), ..e }
}

fn worse(a: SeriesStatus, b: SeriesStatus) -> SeriesStatus {
    use SeriesStatus::*;
    match (a, b) {
        (MaxTermsReached, _) | (_, MaxTermsReached) => MaxTermsReached,
        (Converged, _) | (_, Converged) => Converged,
        _ => TerminatedFinite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        assert_eq!(IdentityId::ALL.len(), 19);
        for &id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!("nope".parse::<IdentityId>().is_err());
    }

    #[test]
    fn relative_error_floor() {
        let z = Complex::new(0.0, 0.0);
        assert_eq!(relative_error(z, z), 0.0);
        assert_eq!(relative_error(Complex::new(2.0, 0.0), Complex::new(1.0, 0.0)), 0.5);
    }
}
