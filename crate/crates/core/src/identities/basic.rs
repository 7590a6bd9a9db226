//! Identities for the Al-Salam–Chihara and Askey–Wilson families.

use num_complex::Complex;

use super::{hypothesis, inside_unit_disc, mul_eval, scale_eval, Args};
use crate::error::Result;
use crate::hyper::{bhs_rphis, sum_terms, vwp_8w7, SeriesEval, TruncationPolicy};
use crate::kernels::{ac_kernel_closed, ac_kernel_closed_alt, ac_kernel_sum, KernelPoint};
use crate::polys::{sj_ac_seq, theta_of, AscParams, AscRecurrence, AwParams, AwRecurrence};
use crate::real::{absf, cr, CxExt, Real};
use crate::series_core::{q_product_ratio, q_shifted_list, QBase};

type Sides<R> = (SeriesEval<R>, SeriesEval<R>);

fn base<R: Real>(a: &Args) -> Result<QBase<R>> {
    let q = a.real::<R>("q")?;
    hypothesis(q > R::zero() && q < R::one(), || format!("q = {q} must lie in (0, 1)"))?;
    QBase::new(q)
}

fn unit<R: Real>(x: R) -> Result<Complex<R>> {
    Ok(<Complex<R> as CxExt<R>>::cis(theta_of(x)?))
}

fn check_unit_interval<R: Real>(names: &[(&str, R)]) -> Result<()> {
    for &(name, v) in names {
        let f = v.to_f64();
        hypothesis((-1.0..=1.0).contains(&f), || format!("{name} = {f} must lie in [-1, 1]"))?;
    }
    Ok(())
}

fn check_scale<R: Real>(name: &str, s: Complex<R>, k: R, q: QBase<R>) -> Result<()> {
    let m = absf(s);
    let qk = q.get().powf(k).to_f64();
    hypothesis((m - 1.0).abs() <= 1e-12 || (m > qk && m < 1.0 / qk), || {
        format!("|{name}| = {m} must lie in (q^k, q^-k) = ({qk}, {}) or equal 1", 1.0 / qk)
    })
}

fn check_below_one<R: Real>(names: &[(&str, Complex<R>)]) -> Result<()> {
    for &(name, v) in names {
        hypothesis(absf(v) < 1.0, || format!("|{name}| = {} must be below 1", absf(v)))?;
    }
    Ok(())
}

fn check_nonzero<R: Real>(names: &[(&str, Complex<R>)]) -> Result<()> {
    for &(name, v) in names {
        hypothesis(absf(v) > 0.0, || format!("{name} must be nonzero"))?;
    }
    Ok(())
}

/// `8W7(a; b; q, z)`, equal to 1 at `z = 0` even when parameters vanish.
fn w87<R: Real>(
    a: Complex<R>,
    b5: &[Complex<R>; 5],
    q: QBase<R>,
    z: Complex<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    if absf(z) == 0.0 {
        return Ok(SeriesEval::exact(cr(R::one())));
    }
    vwp_8w7(a, b5, q, z, policy)
}

/// Kernel sum against its closed form, or the closed form against the
/// transformed closed form when `alt` is set.
pub(super) fn ac_poisson<R: Real>(a: &Args, policy: &TruncationPolicy, alt: bool) -> Result<Sides<R>> {
    let q = base::<R>(a)?;
    let k = a.real::<R>("k")?;
    let (s, sigma, t) = (a.cx::<R>("s")?, a.cx::<R>("sigma")?, a.cx::<R>("t")?);
    let (x, y) = (a.real::<R>("x")?, a.real::<R>("y")?);
    hypothesis(k > R::zero(), || format!("k = {k} must be positive"))?;
    inside_unit_disc("t", absf(t))?;
    check_unit_interval(&[("x", x), ("y", y)])?;
    check_scale("s", s, k, q)?;
    check_scale("sigma", sigma, k, q)?;
    let pt = KernelPoint::new(t, x, y).with_scales(s, sigma);
    let closed = ac_kernel_closed(k, q, pt, policy)?;
    if alt {
        Ok((closed, ac_kernel_closed_alt(k, q, pt, policy)?))
    } else {
        Ok((ac_kernel_sum(k, q, pt, policy)?, closed))
    }
}

/// Product of two kernel sums against `Σ_j t^j v^{(k1+k2+j)} S_j S_j`.
pub(super) fn ac_spoisson<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let q = base::<R>(a)?;
    let (k1, k2) = (a.real::<R>("k1")?, a.real::<R>("k2")?);
    let (s, sigma, t) = (a.cx::<R>("s")?, a.cx::<R>("sigma")?, a.cx::<R>("t")?);
    let (x1, x2, y1, y2) = (a.real::<R>("x1")?, a.real::<R>("x2")?, a.real::<R>("y1")?, a.real::<R>("y2")?);
    hypothesis(k1 > R::zero() && k2 > R::zero(), || format!("k1 = {k1}, k2 = {k2} must be positive"))?;
    inside_unit_disc("t", absf(t))?;
    check_unit_interval(&[("x1", x1), ("x2", x2), ("y1", y1), ("y2", y2)])?;
    check_scale("s", s, k2, q)?;
    check_scale("sigma", sigma, k2, q)?;
    let inner = KernelPoint::new(t, x1, y1).with_scales(unit(x2)?, unit(y2)?);
    let lhs = mul_eval(
        ac_kernel_sum(k1, q, inner, policy)?,
        ac_kernel_sum(k2, q, KernelPoint::new(t, x2, y2).with_scales(s, sigma), policy)?,
    );
    let jmax = policy.max_terms.min(400);
    let sx = sj_ac_seq(k1, k2, jmax, x1, x2, s, q)?;
    let sy = sj_ac_seq(k1, k2, jmax, y1, y2, sigma, q)?;
    let outer = KernelPoint::new(t, x1, y1).with_scales(s, sigma);
    let mut tj = cr(R::one());
    let capped = TruncationPolicy { max_terms: jmax + 1, ..*policy };
    let rhs = sum_terms(&capped, absf(t), |j| {
        let v = ac_kernel_closed(k1 + k2 + R::from_usize(j), q, outer, policy)?;
        let term = tj * v.value * sx[j] * sy[j];
        tj = tj * t;
        Ok(term)
    })?;
    Ok((lhs, rhs))
}

/// `ab = a'b'`, `cd = c'd'`: the primed `b', d'` are derived from the
/// others unless given, in which case the constraint is checked.
fn derived<R: Real>(a: &Args, name: &str, value: Complex<R>) -> Result<Complex<R>> {
    match a.opt(name)? {
        None => Ok(value),
        Some(v) => {
            let given = Complex::new(R::from_f64(v.re), R::from_f64(v.im));
            let gap = absf(given - value);
            hypothesis(gap <= 1e-12 * absf(value).max(1e-300), || {
                format!("{name} = {v} breaks the product constraint (expected {value})")
            })?;
            Ok(given)
        }
    }
}

/// Angular data shared by the right-hand sides.
struct Angles<R: Real> {
    eth: Complex<R>,
    eph: Complex<R>,
}

impl<R: Real> Angles<R> {
    fn new(x: R, y: R) -> Result<Self> {
        Ok(Angles { eth: unit(x)?, eph: unit(y)? })
    }
}

/// Askey–Wilson bilinear sum with coefficients `H_j` against its product form.
pub(super) fn aw_bilinear<R: Real>(args: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let q = base::<R>(args)?;
    let [a, b, c, d, ap, cp] = ["a", "b", "c", "d", "ap", "cp"].map(|n| args.cx::<R>(n));
    let (a, b, c, d, ap, cp) = (a?, b?, c?, d?, ap?, cp?);
    let (x, y, t) = (args.real::<R>("x")?, args.real::<R>("y")?, args.cx::<R>("t")?);
    check_nonzero(&[("a'", ap), ("c'", cp)])?;
    let bp = derived(args, "bp", a * b / ap)?;
    let dp = derived(args, "dp", c * d / cp)?;
    check_nonzero(&[("b", b)])?;
    check_below_one(&[("a", a), ("b", b), ("c", c), ("d", d), ("a'", ap), ("b'", bp), ("c'", cp), ("d'", dp)])?;
    inside_unit_disc("t", absf(t))?;
    inside_unit_disc("a't/b", absf(ap * t / b))?;
    check_unit_interval(&[("x", x), ("y", y)])?;
    let one = cr(R::one());
    let qc = cr(q.get());
    let z = ap * t / b;
    let btap = b * t / ap;
    let mut px = AwRecurrence::new(AwParams { q, a, b, c, d }, x);
    let mut py = AwRecurrence::new(AwParams { q, a: ap, b: bp, c: cp, d: dp }, y);
    let mut qj = one;
    let mut tj = one;
    let lhs = sum_terms(policy, absf(t), |j| {
        let qjt = qj * t;
        let h =
            q_product_ratio(&[b * cp * qjt, bp * c * qjt, b * dp * qjt, bp * d * qjt], &[b * bp * c * d * qj * qjt], q)
                / q_shifted_list(&[qc, a * b, c * d, a * b * c * d * qj / qc], q, j);
        let w = w87(
            b * bp * c * d * qj * qjt / qc,
            &[b * c * qj, b * d * qj, bp * cp * qj, bp * dp * qj, btap],
            q,
            z,
            policy,
        )?;
        let term = h * w.value * px.next().unwrap_or(one) * py.next().unwrap_or(one) * tj;
        qj = qj * qc;
        tj = tj * t;
        Ok(term)
    })?;
    let Angles { eth, eph } = Angles::new(x, y)?;
    let tt = t / (eth * eph);
    let pre = q_product_ratio(
        &[b * t * eph, b * t / eph, c * t / eph, d * t / eph, bp * t * eth, bp * t / eth, cp * t / eth, dp * t / eth],
        &[b * bp * t, t * eth / eph, t * eph / eth, tt, c * d * tt],
        q,
    );
    let w1 = w87(b * bp * t / qc, &[b * eth, b / eth, bp * eph, bp / eph, btap], q, z, policy)?;
    let w2 = w87(c * d * tt / qc, &[c / eth, d / eth, cp / eph, dp / eph, tt], q, t * eth * eph, policy)?;
    Ok((lhs, scale_eval(pre, mul_eval(w1, w2))))
}

/// The `d = d' = 0` case, with coefficients `G_j`.
pub(super) fn cdqh_bilinear<R: Real>(args: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let q = base::<R>(args)?;
    let [a, b, c, ap, cp] = ["a", "b", "c", "ap", "cp"].map(|n| args.cx::<R>(n));
    let (a, b, c, ap, cp) = (a?, b?, c?, ap?, cp?);
    let (x, y, t) = (args.real::<R>("x")?, args.real::<R>("y")?, args.cx::<R>("t")?);
    check_nonzero(&[("a'", ap)])?;
    let bp = derived(args, "bp", a * b / ap)?;
    check_nonzero(&[("b", b)])?;
    check_below_one(&[("a", a), ("b", b), ("c", c), ("a'", ap), ("b'", bp), ("c'", cp)])?;
    inside_unit_disc("t", absf(t))?;
    inside_unit_disc("a't/b", absf(ap * t / b))?;
    check_unit_interval(&[("x", x), ("y", y)])?;
    let zero = cr(R::zero());
    let one = cr(R::one());
    let qc = cr(q.get());
    let z = ap * t / b;
    let btap = b * t / ap;
    let mut px = AwRecurrence::new(AwParams { q, a, b, c, d: zero }, x);
    let mut py = AwRecurrence::new(AwParams { q, a: ap, b: bp, c: cp, d: zero }, y);
    let mut qj = one;
    let mut tj = one;
    let lhs = sum_terms(policy, absf(t), |j| {
        let qjt = qj * t;
        let g = q_product_ratio(&[b * cp * qjt, bp * c * qjt], &[], q) / q_shifted_list(&[qc, a * b], q, j);
        let f = bhs_rphis(&[b * c * qj, bp * cp * qj, btap], &[b * cp * qjt, bp * c * qjt], q, z, policy)?;
        let term = g * f.value * px.next().unwrap_or(one) * py.next().unwrap_or(one) * tj;
        qj = qj * qc;
        tj = tj * t;
        Ok(term)
    })?;
    let Angles { eth, eph } = Angles::new(x, y)?;
    let tt = t / (eth * eph);
    let pre = q_product_ratio(
        &[b * t * eph, b * t / eph, c * t / eph, bp * t * eth, bp * t / eth, cp * t / eth],
        &[b * bp * t, t * eth / eph, t * eph / eth, tt],
        q,
    );
    let w = w87(b * bp * t / qc, &[b * eth, b / eth, bp * eph, bp / eph, btap], q, z, policy)?;
    let f = bhs_rphis(&[c / eth, cp / eph, tt], &[c * t / eph, cp * t / eth], q, t * eth * eph, policy)?;
    Ok((lhs, scale_eval(pre, mul_eval(w, f))))
}

/// Right-hand side of the Al-Salam–Chihara bilinear formula.
#[allow(clippy::too_many_arguments)]
fn asc_product_form<R: Real>(
    q: QBase<R>,
    a: Complex<R>,
    c: Complex<R>,
    ap: Complex<R>,
    cp: Complex<R>,
    x: R,
    y: R,
    t: Complex<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    let Angles { eth, eph } = Angles::new(x, y)?;
    let tt = t / (eth * eph);
    let pre = q_product_ratio(
        &[c * t / eph, cp * t / eth, a * t * eph, ap * t * eth],
        &[t * eth / eph, t * eph / eth, cp * t / c, ap * c * t],
        q,
    );
    let f1 = bhs_rphis(&[ap * eph, a * eth, t * eth * eph], &[a * t * eph, ap * t * eth], q, tt, policy)?;
    let f2 = bhs_rphis(&[c / eth, cp / eph, tt], &[c * t / eph, cp * t / eth], q, t * eth * eph, policy)?;
    Ok(scale_eval(pre, mul_eval(f1, f2)))
}

struct AscArgs<R: Real> {
    q: QBase<R>,
    c: Complex<R>,
    cp: Complex<R>,
    x: R,
    y: R,
    t: Complex<R>,
}

fn asc_args<R: Real>(args: &Args) -> Result<AscArgs<R>> {
    let q = base::<R>(args)?;
    let (c, cp) = (args.cx::<R>("c")?, args.cx::<R>("cp")?);
    let (x, y, t) = (args.real::<R>("x")?, args.real::<R>("y")?, args.cx::<R>("t")?);
    check_nonzero(&[("c", c), ("c'", cp)])?;
    check_below_one(&[("c", c), ("c'", cp)])?;
    inside_unit_disc("t", absf(t))?;
    inside_unit_disc("c't/c", absf(cp * t / c))?;
    check_unit_interval(&[("x", x), ("y", y)])?;
    Ok(AscArgs { q, c, cp, x, y, t })
}

/// Al-Salam–Chihara bilinear sum with `2φ1` coefficients against its
/// product form.
pub(super) fn asc_bilinear<R: Real>(args: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let AscArgs { q, c, cp, x, y, t } = asc_args::<R>(args)?;
    let (a, ap) = (args.cx::<R>("a")?, args.cx::<R>("ap")?);
    check_below_one(&[("a", a), ("a'", ap)])?;
    let one = cr(R::one());
    let qc = cr(q.get());
    let mut rx = AscRecurrence::new(AscParams { q, a, b: c }, x);
    let mut ry = AscRecurrence::new(AscParams { q, a: ap, b: cp }, y);
    let mut qj = one;
    let mut tj = one;
    let lhs = sum_terms(policy, absf(t), |j| {
        let f = bhs_rphis(&[c * t / cp, a * c * qj], &[ap * c * t * qj], q, t * cp / c, policy)?;
        let term = tj / q_shifted_list(&[qc, ap * c * t], q, j)
            * f.value
            * rx.next().unwrap_or(one)
            * ry.next().unwrap_or(one);
        qj = qj * qc;
        tj = tj * t;
        Ok(term)
    })?;
    Ok((lhs, asc_product_form(q, a, c, ap, cp, x, y, t, policy)?))
}

/// The `a = a' = 0` case summed directly as a continuous big q-Hermite
/// kernel, against the product form at `a = a' = 0`.
pub(super) fn cbqh_reduction<R: Real>(args: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let AscArgs { q, c, cp, x, y, t } = asc_args::<R>(args)?;
    let zero = cr(R::zero());
    let one = cr(R::one());
    let qc = cr(q.get());
    let hermite = |e: Complex<R>| AwParams { q, a: e, b: zero, c: zero, d: zero };
    let mut hx = AwRecurrence::new(hermite(c), x);
    let mut hy = AwRecurrence::new(hermite(cp), y);
    let mut scale = one;
    let sum = sum_terms(policy, absf(t), |j| {
        let term = scale * hx.next().unwrap_or(one) * hy.next().unwrap_or(one);
        scale = scale * t / (one - qc * cr(q.get().powi(j as i32)));
        Ok(term)
    })?;
    let pre = q_product_ratio(&[t * t], &[t * cp / c], q);
    Ok((scale_eval(pre, sum), asc_product_form(q, zero, c, zero, cp, x, y, t, policy)?))
}
