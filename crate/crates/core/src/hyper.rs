//! Generalized hypergeometric series `pFq`, basic hypergeometric series `rφs`
//! and the very-well-poised `8W7`, all summed by running term ratios under a
//! shared [`TruncationPolicy`].

use num_complex::Complex;

use crate::dd::Dd;
use crate::error::{QklError, Result};
use crate::real::{convert, cr, CxExt, PrecisionMode, Real};
use crate::series_core::QBase;

/// Tolerance for recognising a parameter as `−n` or `q^{−n}`.
pub const PARAM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub tail_tol: f64,
    pub quiet_window: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { max_terms: 10_000, tail_tol: 1e-15, quiet_window: 3 }
    }
}

impl TruncationPolicy {
    pub fn new(max_terms: usize, tail_tol: f64, quiet_window: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(QklError::Param("max_terms must be positive".into()));
        }
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(QklError::Param(format!("tail_tol = {tail_tol} must lie in (0, 1)")));
        }
        if quiet_window == 0 {
            return Err(QklError::Param("quiet_window must be at least 1".into()));
        }
        Ok(TruncationPolicy { max_terms, tail_tol, quiet_window })
    }

    /// The policy used for the extended-precision retry near `|z| = 1`.
    pub fn near_boundary(self) -> Self {
        TruncationPolicy { max_terms: self.max_terms.max(100_000), ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesStatus {
    Converged,
    TerminatedFinite,
    MaxTermsReached,
}

impl SeriesStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesStatus::Converged => "converged",
            SeriesStatus::TerminatedFinite => "terminated",
            SeriesStatus::MaxTermsReached => "max_terms_reached",
        }
    }
}

/// Value of a series with its truncation metadata.
#[derive(Clone, Copy, Debug)]
pub struct SeriesEval<R: Real> {
    pub value: Complex<R>,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub status: SeriesStatus,
    pub precision: PrecisionMode,
}

impl<R: Real> SeriesEval<R> {
    pub fn convert<S: Real>(self) -> SeriesEval<S> {
        SeriesEval {
            value: convert(self.value),
            terms_used: self.terms_used,
            tail_estimate: self.tail_estimate,
            status: self.status,
            precision: self.precision.max(S::MODE),
        }
    }

    /// A closed-form value with no truncation.
    pub fn exact(value: Complex<R>) -> Self {
        SeriesEval {
            value,
            terms_used: 0,
            tail_estimate: 0.0,
            status: SeriesStatus::TerminatedFinite,
            precision: R::MODE,
        }
    }
}

/// Smallest `n ≥ 0` such that a parameter equals `−n` (classical, `q = None`)
/// or `q^{−n}` (basic).
pub fn detect_termination<R: Real>(params: &[Complex<R>], q: Option<QBase<R>>) -> Option<usize> {
    params.iter().filter_map(|&p| termination_index(p, q)).min()
}

fn termination_index<R: Real>(p: Complex<R>, q: Option<QBase<R>>) -> Option<usize> {
    let re = p.re.to_f64();
    let im = p.im.to_f64();
    let scale = 1f64.max(re.hypot(im));
    match q {
        None => {
            let n = re.round();
            (n <= 0.0 && im.abs() <= PARAM_TOL * scale && (re - n).abs() <= PARAM_TOL * scale).then_some(-n as usize)
        }
        Some(q) => {
            if re <= 0.0 || im.abs() > PARAM_TOL * scale {
                return None;
            }
            let qf = q.get().to_f64();
            let n = (-(re.ln()) / qf.ln()).round();
            if n < 0.0 {
                return None;
            }
            let target = q.get().powi(-(n as i32));
            let diff = (p - cr(target)).modulus().to_f64();
            (diff <= PARAM_TOL * target.to_f64()).then_some(n as usize)
        }
    }
}

/// Checks the termination/pole interplay and returns the termination index.
fn termination_and_poles<R: Real>(
    upper: &[Complex<R>],
    lower: &[Complex<R>],
    q: Option<QBase<R>>,
) -> Result<Option<usize>> {
    let term = detect_termination(upper, q);
    if let Some(pole) = detect_termination(lower, q) {
        match term {
            Some(t) if t <= pole => {}
            _ => return Err(QklError::DenominatorPole { index: pole }),
        }
    }
    Ok(term)
}

/// Sums `Σ_n weight(n)·base_n` with `base_0 = 1`, `base_{n+1} = base_n·ratio(n)`.
/// `ratio` and `weight` are called once per index, in increasing order.
fn sum_series<R: Real>(
    last_index: Option<usize>,
    policy: &TruncationPolicy,
    mut ratio: impl FnMut(usize) -> Complex<R>,
    mut weight: impl FnMut(usize) -> Complex<R>,
) -> SeriesEval<R> {
    let mut base = cr(R::one());
    let mut partial = cr(R::zero());
    let mut quiet = 0usize;
    let mut recent = std::collections::VecDeque::with_capacity(policy.quiet_window + 1);
    let mut n = 0usize;
    loop {
        let term = base * weight(n);
        partial = partial + term;
        let term_abs = term.modulus().to_f64();
        if last_index == Some(n) {
            return SeriesEval {
                value: partial,
                terms_used: n + 1,
                tail_estimate: 0.0,
                status: SeriesStatus::TerminatedFinite,
                precision: R::MODE,
            };
        }
        let rho = recent.iter().copied().fold(0.0f64, f64::max);
        // a geometric tail with ratio rho adds rho/(1-rho) more of the last term
        let tail_factor = if rho < 1.0 { 1.0 / (1.0 - rho) } else { 1.0 };
        if term_abs * tail_factor <= policy.tail_tol * partial.modulus().to_f64() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        let converged = last_index.is_none() && quiet >= policy.quiet_window;
        let exhausted = last_index.is_none() && n + 1 >= policy.max_terms;
        if converged || exhausted {
            let tail = if rho < 1.0 { term_abs * rho / (1.0 - rho) } else { term_abs };
            return SeriesEval {
                value: partial,
                terms_used: n + 1,
                tail_estimate: tail,
                status: if converged { SeriesStatus::Converged } else { SeriesStatus::MaxTermsReached },
                precision: R::MODE,
            };
        }
        let r = ratio(n);
        if recent.len() == policy.quiet_window.max(1) {
            recent.pop_front();
        }
        recent.push_back(r.modulus().to_f64());
        base = base * r;
        n += 1;
    }
}

/// Sums `Σ_n term(n)` for terms whose size decays at least like `rate^n`
/// up to slowly varying factors. The stopping test runs on the envelope
/// `e_n = max(|term_n|, rate·e_{n−1})`, so an isolated small term (a near
/// zero of an oscillating factor) cannot end the sum early.
pub fn sum_terms<R: Real>(
    policy: &TruncationPolicy,
    rate: f64,
    mut term: impl FnMut(usize) -> Result<Complex<R>>,
) -> Result<SeriesEval<R>> {
    if !(0.0..1.0).contains(&rate) {
        return Err(QklError::Divergence(format!("term ratio {rate} is not below 1")));
    }
    let mut partial = cr(R::zero());
    let mut envelope = 0.0f64;
    let mut quiet = 0usize;
    for n in 0..policy.max_terms {
        let t = term(n)?;
        partial = partial + t;
        envelope = t.modulus().to_f64().max(envelope * rate);
        if envelope <= policy.tail_tol * (1.0 - rate) * partial.modulus().to_f64() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= policy.quiet_window {
            return Ok(SeriesEval {
                value: partial,
                terms_used: n + 1,
                tail_estimate: envelope * rate / (1.0 - rate),
                status: SeriesStatus::Converged,
                precision: R::MODE,
            });
        }
    }
    Ok(SeriesEval {
        value: partial,
        terms_used: policy.max_terms,
        tail_estimate: envelope * rate / (1.0 - rate),
        status: SeriesStatus::MaxTermsReached,
        precision: R::MODE,
    })
}

fn near_boundary(z: f64) -> bool {
    z > 0.9 && z < 1.0
}

fn to_dd_vec<R: Real>(v: &[Complex<R>]) -> Vec<Complex<Dd>> {
    v.iter().map(|&x| convert(x)).collect()
}

/// `pFq(upper; lower; z)`.
pub fn hyp_pfq<R: Real>(
    upper: &[Complex<R>],
    lower: &[Complex<R>],
    z: Complex<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    let last = termination_and_poles(upper, lower, None)?;
    let zabs = z.modulus().to_f64();
    let (p, qn) = (upper.len(), lower.len());
    if last.is_none() && zabs > 0.0 {
        if p > qn + 1 || (p == qn + 1 && zabs >= 1.0) {
            return Err(QklError::Divergence(format!("{p}F{qn} with |z| = {zabs} does not terminate")));
        }
        if p == qn + 1 && near_boundary(zabs) {
            let pol = policy.near_boundary();
            if R::MODE == PrecisionMode::Standard {
                let v = hyp_pfq::<Dd>(&to_dd_vec(upper), &to_dd_vec(lower), convert(z), &pol)?;
                return Ok(v.convert());
            }
            return Ok(pfq_sum(upper, lower, z, None, &pol));
        }
    }
    Ok(pfq_sum(upper, lower, z, last, policy))
}

fn pfq_sum<R: Real>(
    upper: &[Complex<R>],
    lower: &[Complex<R>],
    z: Complex<R>,
    last: Option<usize>,
    policy: &TruncationPolicy,
) -> SeriesEval<R> {
    let one = cr(R::one());
    sum_series(
        last,
        policy,
        |n| {
            let nr = cr(R::from_usize(n));
            let mut num = z;
            let mut den = nr + one;
            for &u in upper {
                num = num * (u + nr);
            }
            for &l in lower {
                den = den * (l + nr);
            }
            num / den
        },
        |_| one,
    )
}

/// `2F1(a, b; c; z)`.
pub fn hyp2f1<R: Real>(
    a: Complex<R>,
    b: Complex<R>,
    c: Complex<R>,
    z: Complex<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    hyp_pfq(&[a, b], &[c], z, policy)
}

/// Basic hypergeometric series `rφs(upper; lower; q, z)` with the factor
/// `[(−1)^n q^{n(n−1)/2}]^{1+s−r}`.
pub fn bhs_rphis<R: Real>(
    upper: &[Complex<R>],
    lower: &[Complex<R>],
    q: QBase<R>,
    z: Complex<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    let last = termination_and_poles(upper, lower, Some(q))?;
    let zabs = z.modulus().to_f64();
    let excess = 1 + lower.len() as i32 - upper.len() as i32;
    if last.is_none() && zabs > 0.0 {
        if excess < 0 || (excess == 0 && zabs >= 1.0) {
            return Err(QklError::Divergence(format!(
                "{}φ{} with |z| = {zabs} does not terminate",
                upper.len(),
                lower.len()
            )));
        }
        if excess == 0 && near_boundary(zabs) {
            let pol = policy.near_boundary();
            if R::MODE == PrecisionMode::Standard {
                let v = bhs_rphis::<Dd>(&to_dd_vec(upper), &to_dd_vec(lower), q.convert(), convert(z), &pol)?;
                return Ok(v.convert());
            }
            return Ok(rphis_sum(upper, lower, q, z, None, &pol));
        }
    }
    Ok(rphis_sum(upper, lower, q, z, last, policy))
}

fn rphis_sum<R: Real>(
    upper: &[Complex<R>],
    lower: &[Complex<R>],
    q: QBase<R>,
    z: Complex<R>,
    last: Option<usize>,
    policy: &TruncationPolicy,
) -> SeriesEval<R> {
    let one = cr(R::one());
    let excess = 1 + lower.len() as i32 - upper.len() as i32;
    let qv = q.get();
    let mut qn = R::one();
    sum_series(
        last,
        policy,
        move |_| {
            let mut num = z;
            let mut den = one - cr(qn * qv);
            for &u in upper {
                num = num * (one - u * qn);
            }
            for &l in lower {
                den = den * (one - l * qn);
            }
            let mut r = num / den;
            if excess != 0 {
                r = r * cr((-qn).powi(excess));
            }
            qn *= qv;
            r
        },
        |_| one,
    )
}

fn vwp_lower<R: Real>(a: Complex<R>, b5: &[Complex<R>; 5], q: QBase<R>) -> Result<[Complex<R>; 5]> {
    let aq = a * q.get();
    let mut lower = [cr(R::zero()); 5];
    for (l, &b) in lower.iter_mut().zip(b5) {
        if b.modulus().is_zero() {
            return Err(QklError::Param("8W7 numerator parameter is zero".into()));
        }
        *l = aq / b;
    }
    Ok(lower)
}

/// Very-well-poised `8W7(a; b1, …, b5; q, z)`.
pub fn vwp_8w7<R: Real>(
    a: Complex<R>,
    b5: &[Complex<R>; 5],
    q: QBase<R>,
    z: Complex<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    let one = cr(R::one());
    if (one - a).modulus().to_f64() <= PARAM_TOL {
        return Err(QklError::VwPole);
    }
    let lower = vwp_lower(a, b5, q)?;
    let mut upper = vec![a];
    upper.extend_from_slice(b5);
    let last = termination_and_poles(&upper, &lower, Some(q))?;
    let zabs = z.modulus().to_f64();
    if last.is_none() && zabs > 0.0 {
        if zabs >= 1.0 {
            return Err(QklError::Divergence(format!("8W7 with |z| = {zabs} does not terminate")));
        }
        if near_boundary(zabs) {
            let pol = policy.near_boundary();
            if R::MODE == PrecisionMode::Standard {
                let b: [Complex<Dd>; 5] = std::array::from_fn(|i| convert(b5[i]));
                let v = vwp_8w7::<Dd>(convert(a), &b, q.convert(), convert(z), &pol)?;
                return Ok(v.convert());
            }
            return Ok(vwp_sum(a, b5, &lower, q, z, None, &pol));
        }
    }
    Ok(vwp_sum(a, b5, &lower, q, z, last, policy))
}

fn vwp_ratio_fn<R: Real>(
    a: Complex<R>,
    b5: [Complex<R>; 5],
    lower: [Complex<R>; 5],
    q: QBase<R>,
    z: Complex<R>,
) -> impl FnMut(usize) -> Complex<R> {
    let one = cr(R::one());
    let qv = q.get();
    let mut qn = R::one();
    move |_| {
        let mut num = z * (one - a * qn);
        let mut den = one - cr(qn * qv);
        for i in 0..5 {
            num = num * (one - b5[i] * qn);
            den = den * (one - lower[i] * qn);
        }
        qn *= qv;
        num / den
    }
}

fn vwp_weight_fn<R: Real>(a: Complex<R>, q: QBase<R>) -> impl FnMut(usize) -> Complex<R> {
    let one = cr(R::one());
    let q2 = q.get() * q.get();
    let mut q2n = R::one();
    move |_| {
        let w = (one - a * q2n) / (one - a);
        q2n *= q2;
        w
    }
}

fn vwp_sum<R: Real>(
    a: Complex<R>,
    b5: &[Complex<R>; 5],
    lower: &[Complex<R>; 5],
    q: QBase<R>,
    z: Complex<R>,
    last: Option<usize>,
    policy: &TruncationPolicy,
) -> SeriesEval<R> {
    sum_series(last, policy, vwp_ratio_fn(a, *b5, *lower, q, z), vwp_weight_fn(a, q))
}

/// The first `count` terms of the `8W7` series, without convergence checks.
pub fn vwp_8w7_terms<R: Real>(
    a: Complex<R>,
    b5: &[Complex<R>; 5],
    q: QBase<R>,
    z: Complex<R>,
    count: usize,
) -> Result<Vec<Complex<R>>> {
    let lower = vwp_lower(a, b5, q)?;
    let mut ratio = vwp_ratio_fn(a, *b5, lower, q, z);
    let mut weight = vwp_weight_fn(a, q);
    let mut base = cr(R::one());
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        out.push(base * weight(n));
        base = base * ratio(n);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::cx;
    use crate::series_core::q_shifted_inf_list;
    use approx::assert_relative_eq;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn pfq_examples() {
        let v = hyp_pfq(&[cx(0.3, 0.1), cx(2.0, 0.0)], &[cx(1.5, 0.0)], cx::<f64>(0.0, 0.0), &pol()).unwrap();
        assert_eq!(v.value, cx(1.0, 0.0));
        let v = hyp_pfq(&[cx(-1.0, 0.0), cx(2.0, 0.0)], &[cx(4.0, 0.0)], cx::<f64>(0.5, 0.0), &pol()).unwrap();
        assert_relative_eq!(v.value.re, 0.75, max_relative = 1e-15);
        assert_eq!(v.status, SeriesStatus::TerminatedFinite);
        let v = hyp_pfq(&[cx(1.0, 0.0), cx(1.0, 0.0)], &[cx(2.0, 0.0)], cx::<f64>(0.5, 0.0), &pol()).unwrap();
        assert_relative_eq!(v.value.re, 2.0 * 2f64.ln(), max_relative = 1e-14);
        assert_eq!(v.status, SeriesStatus::Converged);
        assert!(v.tail_estimate < 1e-14);
    }

    #[test]
    fn pfq_errors() {
        let e = hyp_pfq(&[cx(1.0, 0.0), cx(1.0, 0.0)], &[cx(-2.0, 0.0)], cx::<f64>(0.5, 0.0), &pol());
        assert_eq!(e.unwrap_err(), QklError::DenominatorPole { index: 2 });
        // termination before the pole is fine
        let v = hyp_pfq(&[cx(-2.0, 0.0), cx(1.0, 0.0)], &[cx(-3.0, 0.0)], cx::<f64>(0.5, 0.0), &pol()).unwrap();
        assert_relative_eq!(v.value.re, 1.0 + 1.0 / 3.0 + 1.0 / 12.0, max_relative = 1e-15);
        let e = hyp_pfq(&[cx(1.0, 0.0), cx(1.0, 0.0)], &[cx(2.0, 0.0)], cx::<f64>(1.0, 0.0), &pol());
        assert!(matches!(e, Err(QklError::Divergence(_))));
    }

    #[test]
    fn pfq_escalates_near_the_unit_circle() {
        let v = hyp_pfq(&[cx(1.0, 0.0), cx(1.0, 0.0)], &[cx(2.0, 0.0)], cx::<f64>(0.95, 0.0), &pol()).unwrap();
        assert_eq!(v.precision, PrecisionMode::Extended);
        assert_relative_eq!(v.value.re, -(0.05f64.ln()) / 0.95, max_relative = 1e-14);
    }

    #[test]
    fn termination_detection() {
        assert_eq!(detect_termination(&[cx::<f64>(-3.0, 0.0), cx(1.5, 0.0)], None), Some(3));
        let q = QBase::new(0.5).unwrap();
        assert_eq!(detect_termination(&[cx::<f64>(4.0, 0.0), cx(0.3, 0.0)], Some(q)), Some(2));
        assert_eq!(detect_termination(&[cx::<f64>(0.7, 0.0)], None), None);
        assert_eq!(detect_termination(&[cx::<f64>(1.0, 0.0)], Some(q)), Some(0));
    }

    #[test]
    fn rphis_examples() {
        let q = QBase::new(0.5).unwrap();
        let v = bhs_rphis(&[cx(0.3, 0.0), cx(0.2, 0.0)], &[cx(0.1, 0.0)], q, cx::<f64>(0.0, 0.0), &pol()).unwrap();
        assert_eq!(v.value, cx(1.0, 0.0));
        let v = bhs_rphis(&[cx(1.0, 0.0), cx(0.2, 0.0)], &[cx(0.1, 0.0)], q, cx::<f64>(0.4, 0.0), &pol()).unwrap();
        assert_eq!(v.value, cx(1.0, 0.0));
        // q-binomial theorem
        let v = bhs_rphis(&[cx(0.3, 0.0)], &[], q, cx::<f64>(0.4, 0.0), &pol()).unwrap();
        let expect = q_shifted_inf_list(&[cx(0.12, 0.0)], q) / q_shifted_inf_list(&[cx(0.4, 0.0)], q);
        assert_relative_eq!(v.value.re, expect.re, max_relative = 1e-14);
    }

    #[test]
    fn vwp_examples() {
        let q = QBase::new(0.5).unwrap();
        // b4 = 0.15 rather than 0.1, which would make aq/b4 = 1 a pole
        let b = [cx(0.3, 0.0), cx(0.4, 0.0), cx(0.5, 0.0), cx(0.15, 0.0), cx(0.25, 0.0)];
        assert!(matches!(
            vwp_8w7(cx(0.2, 0.0), &[b[0], b[1], b[2], cx(0.1, 0.0), b[4]], q, cx::<f64>(0.3, 0.0), &pol()),
            Err(QklError::DenominatorPole { index: 0 })
        ));
        let v = vwp_8w7(cx(0.2, 0.0), &b, q, cx::<f64>(0.0, 0.0), &pol()).unwrap();
        assert_eq!(v.value, cx(1.0, 0.0));
        let b1 = [cx(1.0, 0.0), cx(0.4, 0.0), cx(0.5, 0.0), cx(0.1, 0.0), cx(0.25, 0.0)];
        let v = vwp_8w7(cx(0.2, 0.0), &b1, q, cx::<f64>(0.3, 0.0), &pol()).unwrap();
        assert_eq!(v.value, cx(1.0, 0.0));
        assert!(matches!(vwp_8w7(cx(1.0, 0.0), &b, q, cx::<f64>(0.3, 0.0), &pol()), Err(QklError::VwPole)));
        // against 500 direct terms summed in double-double
        let v = vwp_8w7(cx(0.2, 0.0), &b, q, cx::<f64>(0.3, 0.0), &pol()).unwrap();
        let bd: [Complex<Dd>; 5] = std::array::from_fn(|i| convert(b[i]));
        let terms =
            vwp_8w7_terms(convert(cx::<f64>(0.2, 0.0)), &bd, q.convert(), convert(cx::<f64>(0.3, 0.0)), 500).unwrap();
        let direct = terms.iter().fold(cr(Dd::ZERO), |s, &t| s + t);
        assert_relative_eq!(v.value.re, direct.re.to_f64(), max_relative = 1e-13);
    }
}
