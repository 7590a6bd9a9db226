//! Poisson kernels `Σ_n p_n(x) p_n(y) t^n` for the Meixner–Pollaczek and
//! Al-Salam–Chihara families, as bilinear sums and in closed form.

use num_complex::Complex;

use crate::error::{QklError, Result};
use crate::hyper::{hyp2f1, sum_terms, vwp_8w7, SeriesEval, TruncationPolicy};
use crate::polys::{AscParams, AscRecurrence, MpParams, MpRecurrence};
use crate::real::{cr, CxExt, Real};
use crate::series_core::{complex_pow_principal, gamma_real, q_product_ratio, QBase};

/// Evaluation point of a kernel. `s` and `sigma` only enter the q-kernels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelPoint<R: Real = f64> {
    pub t: Complex<R>,
    pub x: R,
    pub y: R,
    pub s: Complex<R>,
    pub sigma: Complex<R>,
}

impl<R: Real> KernelPoint<R> {
    pub fn new(t: Complex<R>, x: R, y: R) -> Self {
        KernelPoint { t, x, y, s: cr(R::one()), sigma: cr(R::one()) }
    }

    pub fn with_scales(self, s: Complex<R>, sigma: Complex<R>) -> Self {
        KernelPoint { s, sigma, ..self }
    }

    /// The point with the roles of `(x, s)` and `(y, σ)` exchanged.
    pub fn swapped(self) -> Self {
        KernelPoint { x: self.y, y: self.x, s: self.sigma, sigma: self.s, ..self }
    }

    fn check_t(&self) -> Result<f64> {
        let at = self.t.modulus().to_f64();
        if !self.t.is_finite_c() || !self.x.is_finite() || !self.y.is_finite() {
            return Err(QklError::Param("kernel point is not finite".into()));
        }
        if at >= 1.0 {
            return Err(QklError::Divergence(format!("|t| = {at} must be below 1")));
        }
        Ok(at)
    }

    fn check_q(&self, k: R, q: QBase<R>) -> Result<f64> {
        let at = self.check_t()?;
        for (name, v) in [("x", self.x), ("y", self.y)] {
            if !(-1.0..=1.0).contains(&v.to_f64()) {
                return Err(QklError::Domain(format!("{name} = {v} must lie in [-1, 1]")));
            }
        }
        let qk = q.get().powf(k).to_f64();
        for (name, v) in [("s", self.s), ("sigma", self.sigma)] {
            let m = v.modulus().to_f64();
            let on_circle = (m - 1.0).abs() <= 1e-12;
            if !on_circle && !(m > qk && m < 1.0 / qk) {
                return Err(QklError::Param(format!(
                    "|{name}| = {m} must lie in (q^k, q^-k) = ({qk}, {}) or equal 1",
                    1.0 / qk
                )));
            }
        }
        Ok(at)
    }
}

/// `Σ_n p_n(x;φ) p_n(y;φ) t^n` with orthonormal Meixner–Pollaczek
/// polynomials from two recurrence streams.
pub fn mp_kernel_sum<R: Real>(k: R, phi: R, pt: KernelPoint<R>, policy: &TruncationPolicy) -> Result<SeriesEval<R>> {
    let p = MpParams::new(k, phi)?;
    let rate = pt.check_t()?;
    let mut px = MpRecurrence::new(p, pt.x)?;
    let mut py = MpRecurrence::new(p, pt.y)?;
    let mut tn = cr(R::one());
    sum_terms(policy, rate, |_| {
        let (a, b) = (px.next().unwrap_or_else(R::zero), py.next().unwrap_or_else(R::zero));
        let term = tn * (a * b);
        tn = tn * pt.t;
        Ok(term)
    })
}

/// `Γ(2k)^{−1} (1−te^{2iφ})^{i(x+y)} (1−t)^{−2k−ix−iy} 2F1(k+ix, k+iy; 2k; r)`
/// with `r = −4t sin²φ/(1−t)²`. When `|r| ≥ 1` the series is continued through
/// `2F1(a,b;c;r) = (1−r)^{−a} 2F1(a, c−b; c; r/(r−1))`.
pub fn mp_kernel_closed<R: Real>(k: R, phi: R, pt: KernelPoint<R>, policy: &TruncationPolicy) -> Result<SeriesEval<R>> {
    let mut v = mp_kernel_closed_unnormalised(k, phi, pt, policy)?;
    v.value = v.value / cr(gamma_real(R::from_f64(2.0) * k)?);
    Ok(v)
}

/// `Γ(2k) · v^{(k)}`, finite for every `k` where the kernel is.
pub(crate) fn mp_kernel_closed_unnormalised<R: Real>(
    k: R,
    phi: R,
    pt: KernelPoint<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    MpParams::new(k, phi)?;
    pt.check_t()?;
    let one = cr(R::one());
    let two = R::from_f64(2.0);
    let t = pt.t;
    let e2 = <Complex<R> as CxExt<R>>::cis(two * phi);
    let base1 = one - t * e2;
    let base2 = one - t;
    if !(base1.re > R::zero() && base2.re > R::zero()) {
        return Err(QklError::Domain("power base left the right half-plane".into()));
    }
    let ixy = Complex::new(R::zero(), pt.x + pt.y);
    let pref = complex_pow_principal(base1, ixy)? * complex_pow_principal(base2, cr(-two * k) - ixy)?;
    let sphi = phi.sin();
    let r = -t * (R::from_f64(4.0) * sphi * sphi) / (base2 * base2);
    let a = Complex::new(k, pt.x);
    let b = Complex::new(k, pt.y);
    let c = cr(two * k);
    let ar = r.modulus().to_f64();
    let w = r / (r - one);
    let aw = w.modulus().to_f64();
    let f = if ar < 1.0 && ar <= aw {
        hyp2f1(a, b, c, r, policy)?
    } else if aw < 1.0 {
        let mut f = hyp2f1(a, c - b, c, w, policy)?;
        f.value = f.value * complex_pow_principal(one - r, -a)?;
        f
    } else {
        return Err(QklError::Divergence(format!(
            "2F1 argument r = {} is outside the region of convergence",
            r.modulus()
        )));
    };
    Ok(SeriesEval { value: pref * f.value, ..f })
}

fn asc_family<R: Real>(k: R, q: QBase<R>, s: Complex<R>) -> AscParams<R> {
    let qk = cr(q.get().powf(k));
    AscParams { q, a: qk * s, b: qk / s }
}

/// `Σ_n r_n(x; q^k s, q^k/s | q) r_n(y; q^k σ, q^k/σ | q) t^n` with
/// orthonormal Al-Salam–Chihara polynomials `r_n = R_n/√((q, q^{2k};q)_n)`.
pub fn ac_kernel_sum<R: Real>(
    k: R,
    q: QBase<R>,
    pt: KernelPoint<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    if !(k > R::zero()) {
        return Err(QklError::Param(format!("k = {k} must be positive")));
    }
    let rate = pt.check_q(k, q)?;
    let one = cr(R::one());
    let qv = q.get();
    let q2k = qv.powf(R::from_f64(2.0) * k);
    let mut rx = AscRecurrence::new(asc_family(k, q, pt.s), pt.x);
    let mut ry = AscRecurrence::new(asc_family(k, q, pt.sigma), pt.y);
    let mut scale = one;
    let mut qn = R::one();
    sum_terms(policy, rate, |_| {
        let (a, b) = (rx.next().unwrap_or(one), ry.next().unwrap_or(one));
        let term = a * b * scale;
        qn *= qv;
        scale = scale * pt.t / cr((R::one() - qn) * (R::one() - q2k * qn / qv));
        Ok(term)
    })
}

struct AngleFactors<R: Real> {
    qk: Complex<R>,
    eth: Complex<R>,
    eph: Complex<R>,
}

fn angle_factors<R: Real>(k: R, q: QBase<R>, pt: &KernelPoint<R>) -> AngleFactors<R> {
    AngleFactors {
        qk: cr(q.get().powf(k)),
        eth: <Complex<R> as CxExt<R>>::cis(pt.x.acos()),
        eph: <Complex<R> as CxExt<R>>::cis(pt.y.acos()),
    }
}

/// Closed form of [`ac_kernel_sum`]: a ratio of eight infinite q-products
/// times `8W7(q^{2k−1}te^{−iθ−iφ}; q^k e^{−iθ}s, q^k e^{−iθ}/s, q^k e^{−iφ}σ,
/// q^k e^{−iφ}/σ, te^{−iθ−iφ}; q, te^{iθ+iφ})`, `x = cos θ`, `y = cos φ`.
pub fn ac_kernel_closed<R: Real>(
    k: R,
    q: QBase<R>,
    pt: KernelPoint<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    pt.check_q(k, q)?;
    if pt.t.modulus().is_zero() {
        return Ok(SeriesEval::exact(cr(R::one())));
    }
    let AngleFactors { qk, eth, eph } = angle_factors(k, q, &pt);
    let (t, s, sg) = (pt.t, pt.s, pt.sigma);
    let (ith, iph) = (eth.conj(), eph.conj());
    let q2k = qk * qk;
    let pref = q_product_ratio(
        &[qk * t * iph * s, qk * t * iph / s, qk * t * ith * sg, qk * t * ith / sg],
        &[t * eth * iph, t * eph * ith, t * ith * iph, q2k * t * ith * iph],
        q,
    );
    let w = vwp_8w7(
        q2k / q.get() * t * ith * iph,
        &[qk * ith * s, qk * ith / s, qk * iph * sg, qk * iph / sg, t * ith * iph],
        q,
        t * eth * eph,
        policy,
    )?;
    Ok(SeriesEval { value: pref * w.value, ..w })
}

/// The same kernel after a Bailey transformation of the `8W7`:
/// `8W7(q^{k−1}st²e^{iθ}; te^{iθ+iφ}, te^{iθ−iφ}, q^k se^{iθ}, st/σ, stσ; q,
/// q^k e^{−iθ}/s)` with its own product prefactor.
pub fn ac_kernel_closed_alt<R: Real>(
    k: R,
    q: QBase<R>,
    pt: KernelPoint<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    pt.check_q(k, q)?;
    if pt.t.modulus().is_zero() {
        return Ok(SeriesEval::exact(cr(R::one())));
    }
    let AngleFactors { qk, eth, eph } = angle_factors(k, q, &pt);
    let (t, s, sg) = (pt.t, pt.s, pt.sigma);
    let (ith, iph) = (eth.conj(), eph.conj());
    let t2 = t * t;
    let pref = q_product_ratio(
        &[t2, qk * ith / s, qk * t * eth * sg, qk * t * eth / sg, qk * t * s * eph, qk * t * s * iph],
        &[qk * qk, qk * s * t2 * eth, t * eth * eph, t * eth * iph, t * ith * iph, t * ith * eph],
        q,
    );
    let w = vwp_8w7(
        qk / q.get() * s * t2 * eth,
        &[t * eth * eph, t * eth * iph, qk * s * eth, s * t / sg, s * t * sg],
        q,
        qk * ith / s,
        policy,
    )?;
    Ok(SeriesEval { value: pref * w.value, ..w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{absf, cx};
    use approx::assert_relative_eq;

    fn rel(a: Complex<f64>, b: Complex<f64>) -> f64 {
        absf(a - b) / absf(a).max(absf(b))
    }

    #[test]
    fn mp_kernel_agreement() {
        let pol = TruncationPolicy::default();
        let pt = KernelPoint::new(cx(0.4, 0.0), 0.5, -0.3);
        let sum = mp_kernel_sum(0.8, 1.1, pt, &pol).unwrap();
        let closed = mp_kernel_closed(0.8, 1.1, pt, &pol).unwrap();
        let reference = 1.125872299222305967914364436922808;
        assert_relative_eq!(sum.value.re, reference, max_relative = 1e-13);
        assert_relative_eq!(closed.value.re, reference, max_relative = 1e-13);
        assert!(closed.value.im.abs() < 1e-13);
        assert!(sum.tail_estimate < 1e-14);
    }

    #[test]
    fn mp_kernel_at_zero() {
        let pol = TruncationPolicy::default();
        let pt = KernelPoint::new(cx(0.0, 0.0), 1.5, -2.0);
        let g = 1.0 / gamma_real(2.6f64).unwrap();
        assert_relative_eq!(mp_kernel_sum(1.3, 0.7, pt, &pol).unwrap().value.re, g, max_relative = 1e-15);
        assert_relative_eq!(mp_kernel_closed(1.3, 0.7, pt, &pol).unwrap().value.re, g, max_relative = 1e-15);
        let diag = KernelPoint::new(cx(0.3, 0.0), 0.0, 0.0);
        let v = mp_kernel_sum(1.0, std::f64::consts::FRAC_PI_2, diag, &pol).unwrap();
        assert!(v.value.re > 0.0);
    }

    #[test]
    fn mp_kernel_continued_branch() {
        // real t beyond 3 − 2√2 puts r outside the unit disc
        let pol = TruncationPolicy::default();
        let pt = KernelPoint::new(cx(0.55, 0.0), 1.2, 2.0);
        let sum = mp_kernel_sum(1.4, 1.9, pt, &pol).unwrap();
        let closed = mp_kernel_closed(1.4, 1.9, pt, &pol).unwrap();
        assert!(rel(sum.value, closed.value) < 1e-10);
        let complex_t = KernelPoint::new(cx(-0.3, 0.4), 0.7, -1.0);
        let sum = mp_kernel_sum(0.9, 0.6, complex_t, &pol).unwrap();
        let closed = mp_kernel_closed(0.9, 0.6, complex_t, &pol).unwrap();
        assert!(rel(sum.value, closed.value) < 1e-10);
    }

    #[test]
    fn mp_kernel_rejects_unit_t() {
        let pol = TruncationPolicy::default();
        let pt = KernelPoint::new(cx(1.0, 0.0), 0.0, 0.0);
        assert!(mp_kernel_sum(1.0, 1.0, pt, &pol).unwrap_err().is_divergence());
        assert!(mp_kernel_closed(1.0, 1.0, pt, &pol).unwrap_err().is_divergence());
    }

    #[test]
    fn ac_kernel_agreement() {
        let pol = TruncationPolicy::default();
        let q = QBase::new(0.5).unwrap();
        let pt = KernelPoint::new(cx(0.35, 0.0), 0.2, -0.4).with_scales(cx(1.1, 0.0), cx(0.9, 0.0));
        let reference = 2.441024075639277352038;
        let sum = ac_kernel_sum(0.7, q, pt, &pol).unwrap();
        let closed = ac_kernel_closed(0.7, q, pt, &pol).unwrap();
        let alt = ac_kernel_closed_alt(0.7, q, pt, &pol).unwrap();
        for v in [sum.value, closed.value, alt.value] {
            assert_relative_eq!(v.re, reference, max_relative = 1e-12);
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn ac_kernel_symmetry_and_zero() {
        let pol = TruncationPolicy::default();
        let q = QBase::new(0.3).unwrap();
        let pt = KernelPoint::new(cx(0.25, 0.1), -0.6, 0.8).with_scales(Complex::cis(0.4), cx(1.2, 0.0));
        let a = ac_kernel_closed(1.1, q, pt, &pol).unwrap().value;
        let b = ac_kernel_closed(1.1, q, pt.swapped(), &pol).unwrap().value;
        let c = ac_kernel_sum(1.1, q, pt, &pol).unwrap().value;
        assert!(rel(a, b) < 1e-11);
        assert!(rel(a, c) < 1e-11);
        let zero = KernelPoint { t: cx(0.0, 0.0), ..pt };
        assert_eq!(ac_kernel_closed(1.1, q, zero, &pol).unwrap().value, cx(1.0, 0.0));
        assert_eq!(ac_kernel_sum(1.1, q, zero, &pol).unwrap().value, cx(1.0, 0.0));
    }

    #[test]
    fn ac_kernel_rejects_out_of_range_scale() {
        let pol = TruncationPolicy::default();
        let q = QBase::new(0.5).unwrap();
        let pt = KernelPoint::new(cx(0.2, 0.0), 0.1, 0.1).with_scales(cx(2.0, 0.0), cx(1.0, 0.0));
        assert!(matches!(ac_kernel_sum(0.7, q, pt, &pol), Err(QklError::Param(_))));
    }
}
