//! Identities for the Meixner–Pollaczek, continuous Hahn, Jacobi and Hahn
//! families, and the `2F1` multiplication formula.

use num_complex::Complex;

use super::{hypothesis, inside_unit_disc, mul_eval, scale_eval, Args};
use crate::error::Result;
use crate::hyper::{hyp2f1, hyp_pfq, sum_terms, SeriesEval, SeriesStatus, TruncationPolicy};
use crate::kernels::{mp_kernel_closed, mp_kernel_closed_unnormalised, mp_kernel_sum, KernelPoint};
use crate::polys::{
    chahn_poly, chahn_scale_ratio, hahn_poly, jacobi_polys_rec, mp_poly, ChahnParams, ChahnRecurrence, HahnParams,
    MpParams,
};
use crate::real::{absf, cr, to_c64, CxExt, Real};
use crate::series_core::{bessel_j, gamma_real, pochhammer};

type Sides<R> = (SeriesEval<R>, SeriesEval<R>);

fn ir<R: Real>(y: R) -> Complex<R> {
    Complex::new(R::zero(), y)
}

fn nr<R: Real>(n: usize) -> Complex<R> {
    cr(R::from_usize(n))
}

fn finite<R: Real>(value: Complex<R>, terms_used: usize) -> SeriesEval<R> {
    SeriesEval { terms_used, ..SeriesEval::exact(value) }
}

fn mp_hypotheses<R: Real>(k: R, phi: R, t: Complex<R>) -> Result<()> {
    hypothesis(k > R::zero(), || format!("k = {k} must be positive"))?;
    hypothesis(phi > R::zero() && phi < R::pi(), || format!("phi = {phi} must lie in (0, pi)"))?;
    inside_unit_disc("t", absf(t))
}

/// Kernel as a bilinear sum of orthonormal polynomials against its closed form.
pub(super) fn mp_poisson<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let (k, phi, t) = (a.real::<R>("k")?, a.real::<R>("phi")?, a.cx::<R>("t")?);
    mp_hypotheses(k, phi, t)?;
    let pt = KernelPoint::new(t, a.real("x")?, a.real("y")?);
    Ok((mp_kernel_sum(k, phi, pt, policy)?, mp_kernel_closed(k, phi, pt, policy)?))
}

/// `2y sinφ p_n = a_n p_{n+1} − 2(n+k) cosφ p_n + a_{n−1} p_{n−1}` with every
/// `p_n` from the hypergeometric definition.
pub(super) fn mp_recurrence<R: Real>(a: &Args) -> Result<Sides<R>> {
    let (k, phi, y) = (a.real::<R>("k")?, a.real::<R>("phi")?, a.real::<R>("y")?);
    let n = a.count("n")?;
    mp_hypotheses(k, phi, cr(R::zero()))?;
    let p = MpParams::new(k, phi)?;
    let two = R::from_f64(2.0);
    let nf = R::from_usize(n);
    let p_n = mp_poly(p, n, y, true)?;
    let p_next = mp_poly(p, n + 1, y, true)?;
    let (p_prev, a_prev) = if n == 0 {
        (R::zero(), R::zero())
    } else {
        (mp_poly(p, n - 1, y, true)?, (nf * (nf - R::one() + two * k)).sqrt())
    };
    let a_n = ((nf + R::one()) * (nf + two * k)).sqrt();
    let lhs = two * y * phi.sin() * p_n;
    let rhs = a_n * p_next - two * (nf + k) * phi.cos() * p_n + a_prev * p_prev;
    Ok((finite(cr(lhs), n + 1), finite(cr(rhs), n + 2)))
}

/// `Σ_j (−1)^j j! / ((2a)_j (b+d)_j (2a+b+d+j−1)_j) · 2F1(a+d+j, a+d'+j; 2a+b+d+2j; r)
/// · p_j(x; a,b,a,d) p_j(y; a,b',a,d') r^j`. The polynomials run through their
/// normalised recurrence; the growing scale factors are folded into the
/// coefficient ratio so nothing overflows.
#[allow(clippy::too_many_arguments)]
fn chahn_bilinear_sum<R: Real>(
    a: R,
    b: Complex<R>,
    d: Complex<R>,
    bp: Complex<R>,
    dp: Complex<R>,
    x: R,
    y: R,
    r: Complex<R>,
    policy: &TruncationPolicy,
) -> Result<SeriesEval<R>> {
    let one = cr(R::one());
    let two = cr(R::from_f64(2.0));
    let ac = cr(a);
    let px = ChahnParams { a: ac, b, c: ac, d };
    let py = ChahnParams { a: ac, b: bp, c: ac, d: dp };
    let mut rx = ChahnRecurrence::new(px, x);
    let mut ry = ChahnRecurrence::new(py, y);
    let big_a = two * ac + b + d;
    let mut w = one;
    sum_terms(policy, absf(r), |j| {
        let jr = nr::<R>(j);
        let f = hyp2f1(ac + d + jr, ac + dp + jr, big_a + two * jr, r, policy)?;
        let (vx, vy) = (rx.next().unwrap_or(one), ry.next().unwrap_or(one));
        let term = w * f.value * vx * vy;
        // (A+j)_{j+1} / (A+j−1)_j
        let shifted = if j == 0 { big_a } else { (big_a + two * jr) * (big_a + two * jr - one) / (big_a + jr - one) };
        w = w * (-r) * (jr + one) / ((two * ac + jr) * (b + d + jr) * shifted)
            * chahn_scale_ratio(&px, j)
            * chahn_scale_ratio(&py, j);
        Ok(term)
    })
}

fn check_r<R: Real>(r: Complex<R>) -> Result<()> {
    inside_unit_disc("r", absf(r))
}

/// Product of two `2F1` against the continuous Hahn bilinear sum, in the
/// `(k1, k2, x1, x2, y1, y2)` parametrisation.
pub(super) fn hahn_product<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let (k1, k2) = (a.real::<R>("k1")?, a.real::<R>("k2")?);
    let (x1, x2, y1, y2) = (a.real::<R>("x1")?, a.real::<R>("x2")?, a.real::<R>("y1")?, a.real::<R>("y2")?);
    let r = a.cx::<R>("r")?;
    hypothesis(k1 > R::zero() && k2 > R::zero(), || format!("k1 = {k1}, k2 = {k2} must be positive"))?;
    check_r(r)?;
    let two = R::from_f64(2.0);
    let lhs = mul_eval(
        hyp2f1(Complex::new(k1, x1), Complex::new(k1, y1), cr(two * k1), r, policy)?,
        hyp2f1(Complex::new(k2, x2), Complex::new(k2, y2), cr(two * k2), r, policy)?,
    );
    let (xs, ys) = (x1 + x2, y1 + y2);
    let rhs = chahn_bilinear_sum(
        k1,
        Complex::new(k2, -xs),
        Complex::new(k2, xs),
        Complex::new(k2, -ys),
        Complex::new(k2, ys),
        x1,
        y1,
        r,
        policy,
    )?;
    Ok((lhs, rhs))
}

/// Shared parameters of the continuous Hahn identities: `a > 0`, `b, b'`
/// with equal positive real parts, `d = conj b`, `d' = conj b'`.
fn chahn_family<R: Real>(a: &Args, primed: bool) -> Result<(R, Complex<R>, Complex<R>)> {
    let av = a.real::<R>("a")?;
    let b = a.cx::<R>("b")?;
    hypothesis(av > R::zero(), || format!("a = {av} must be positive"))?;
    hypothesis(b.re > R::zero(), || format!("Re b = {} must be positive", b.re))?;
    let bp = if primed { a.cx::<R>("bp")? } else { b.conj() };
    let gap = (b.re - bp.re).abs().to_f64();
    hypothesis(gap <= 1e-12 * (1.0 + b.re.abs().to_f64()), || {
        format!("b + conj(b) = {} differs from b' + conj(b') = {}", b.re + b.re, bp.re + bp.re)
    })?;
    Ok((av, b, bp))
}

/// Continuous Hahn bilinear sum against the product of two `2F1`.
pub(super) fn chahn_bilinear<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let (av, b, bp) = chahn_family::<R>(a, true)?;
    let (x, y, r) = (a.real::<R>("x")?, a.real::<R>("y")?, a.cx::<R>("r")?);
    check_r(r)?;
    let (d, dp) = (b.conj(), bp.conj());
    let ac = cr(av);
    let lhs = chahn_bilinear_sum(av, b, d, bp, dp, x, y, r, policy)?;
    let rhs =
        mul_eval(hyp2f1(ac + ir(x), ac + ir(y), ac + ac, r, policy)?, hyp2f1(d - ir(x), dp - ir(y), b + d, r, policy)?);
    Ok((lhs, rhs))
}

/// Jacobi bilinear sum weighted by Bessel functions against the product of
/// two Bessel functions.
pub(super) fn jacobi_bessel<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let (al, be) = (a.real::<R>("alpha")?, a.real::<R>("beta")?);
    let (x, y, z) = (a.real::<R>("x")?, a.real::<R>("y")?, a.real::<R>("z")?);
    let one = R::one();
    let two = R::from_f64(2.0);
    hypothesis(al > -one && be > -one, || format!("alpha = {al}, beta = {be} must exceed -1"))?;
    for (name, v) in [("x", x), ("y", y)] {
        hypothesis(v > -one && v < one, || format!("{name} = {v} must lie in (-1, 1)"))?;
    }
    hypothesis(z >= R::zero() && z <= R::from_f64(30.0), || format!("z = {z} must lie in [0, 30]"))?;
    let nmax = policy.max_terms.min(200);
    let px = jacobi_polys_rec(al, be, nmax, x);
    let py = jacobi_polys_rec(al, be, nmax, y);
    let ab = al + be;
    let g0 = gamma_real(ab + two)? / (gamma_real(al + one)? * gamma_real(be + one)?);
    // G_j = j! Γ(α+β+j+1) / (Γ(α+j+1) Γ(β+j+1)), started at j = 1
    let mut g = gamma_real(ab + two)? / (gamma_real(al + two)? * gamma_real(be + two)?);
    // Past the turning point J_ν(z) decays superexponentially in ν, so the
    // sum ends at the first term below the cutoff relative to the partial sum.
    let cutoff = 1e-18 * (R::EPS / <f64 as Real>::EPS);
    let mut lhs = SeriesEval {
        value: cr(R::zero()),
        terms_used: nmax + 1,
        tail_estimate: f64::INFINITY,
        status: SeriesStatus::MaxTermsReached,
        precision: R::MODE,
    };
    for j in 0..=nmax {
        let jr = R::from_usize(j);
        let coef = if j == 0 {
            g0
        } else {
            let c = (ab + two * jr + one) * g;
            g = g * (jr + one) * (ab + jr + one) / ((al + jr + one) * (be + jr + one));
            if j % 2 == 1 {
                -c
            } else {
                c
            }
        };
        let nu = ab + two * jr + one;
        let bj = bessel_j(nu, z)?;
        let term = coef * px[j] * py[j] * bj;
        if nu > z && term.abs().to_f64() < cutoff * absf(lhs.value) {
            lhs.terms_used = j;
            lhs.tail_estimate = term.abs().to_f64();
            lhs.status = SeriesStatus::Converged;
            break;
        }
        lhs.value = lhs.value + cr(term);
    }
    let (lo, hi) = ((one - x) * (one - y), (one + x) * (one + y));
    let pref = two.powf(ab - one) * lo.powf(-al / two) * hi.powf(-be / two) * z;
    let rhs = pref * bessel_j(al, z / two * lo.sqrt())? * bessel_j(be, z / two * hi.sqrt())?;
    Ok((lhs, SeriesEval::exact(cr(rhs))))
}

/// `Σ_{j≤K} (−K)_j (A)_{2j} j! / ((2a)_j (b+d)_j (A+j−1)_j (a+d)_j (a+d')_j (A+K)_j)
/// · p_j(x; a,b,a,d) p_j(y; a,b',a,d')`, `A = 2a+b+d`, with polynomials
/// from their definition.
#[allow(clippy::too_many_arguments)]
fn chahn_finite_sum<R: Real>(
    a: R,
    b: Complex<R>,
    d: Complex<R>,
    bp: Complex<R>,
    dp: Complex<R>,
    x: R,
    y: R,
    big_k: usize,
) -> Result<SeriesEval<R>> {
    let one = cr(R::one());
    let ac = cr(a);
    let big_a = ac + ac + b + d;
    let px = ChahnParams { a: ac, b, c: ac, d };
    let py = ChahnParams { a: ac, b: bp, c: ac, d: dp };
    let kk = nr::<R>(big_k);
    let mut sum = cr(R::zero());
    for j in 0..=big_k {
        let jr = nr::<R>(j);
        let num = pochhammer(-kk, j) * pochhammer(big_a, 2 * j) * pochhammer(one, j);
        let den = pochhammer(ac + ac, j)
            * pochhammer(b + d, j)
            * pochhammer(big_a + jr - one, j)
            * pochhammer(ac + d, j)
            * pochhammer(ac + dp, j)
            * pochhammer(big_a + kk, j);
        sum = sum + num / den * chahn_poly(px, j, x)? * chahn_poly(py, j, y)?;
    }
    Ok(finite(sum, big_k + 1))
}

/// Finite continuous Hahn sum against a terminating balanced `4F3`.
pub(super) fn chahn_finite<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let (av, b, bp) = chahn_family::<R>(a, true)?;
    let (x, y, big_k) = (a.real::<R>("x")?, a.real::<R>("y")?, a.count("K")?);
    let (d, dp) = (b.conj(), bp.conj());
    let lhs = chahn_finite_sum(av, b, d, bp, dp, x, y, big_k)?;
    let one = cr(R::one());
    let ac = cr(av);
    let kk = nr::<R>(big_k);
    let big_a = ac + ac + b + d;
    let pref = pochhammer(d - ir(x), big_k) * pochhammer(dp - ir(y), big_k) * pochhammer(big_a, big_k)
        / (pochhammer(ac + d, big_k) * pochhammer(ac + dp, big_k) * pochhammer(b + d, big_k));
    let f = hyp_pfq(
        &[-kk, one - kk - b - d, ac + ir(x), ac + ir(y)],
        &[ac + ac, one - kk - d + ir(x), one - kk - dp + ir(y)],
        one,
        policy,
    )?;
    Ok((lhs, scale_eval(pref, f)))
}

/// The finite sum at `b' = d`, `d' = b` against its Whipple-transformed `4F3`.
pub(super) fn chahn_finite_whipple<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let (av, b, _) = chahn_family::<R>(a, false)?;
    let (x, y, big_k) = (a.real::<R>("x")?, a.real::<R>("y")?, a.count("K")?);
    let d = b.conj();
    let lhs = chahn_finite_sum(av, b, d, d, b, x, y, big_k)?;
    let one = cr(R::one());
    let ac = cr(av);
    let kk = nr::<R>(big_k);
    let big_a = ac + ac + b + d;
    let shift = ac + b + ir(x - y);
    let pref =
        pochhammer(big_a, big_k) * pochhammer(shift, big_k) / (pochhammer(ac + b, big_k) * pochhammer(b + d, big_k));
    let f = hyp_pfq(&[-kk, big_a + kk - one, ac + ir(x), ac - ir(y)], &[ac + ac, ac + d, shift], one, policy)?;
    Ok((lhs, scale_eval(pref, f)))
}

/// Square root of `f_{j+1} / f_j` where `f_j = (c)_j / (j! (c')_j (c+c'+j−1)_j)`.
/// The running product of these roots squares to `f_j` exactly, which keeps
/// the normalised recurrences below free of overflow.
fn front_root_ratio<R: Real>(c: Complex<R>, cp: Complex<R>, j: usize) -> Complex<R> {
    let one = cr(R::one());
    let jr = nr::<R>(j);
    let s = c + cp;
    // (s+j)_{j+1} / (s+j−1)_j
    let shifted = if j == 0 { s } else { (s + jr + jr) * (s + jr + jr - one) / (s + jr - one) };
    ((c + jr) / ((jr + one) * (cp + jr) * shifted)).csqrt()
}

/// `h_j M_j` for `j = 0, 1, …`, where
/// `M_j = Σ_m (−j)_m (a)_m (c+c'+j−1)_m (a+a'+m)_{j−m} / ((c)_m m!)`
/// and `h_j` is the running product of [`front_root_ratio`].
/// `M_j` is a Hahn polynomial in `j` up to a Pochhammer factor, so the
/// three-term recurrence in `j` replaces the cancelling direct sum.
struct MergedHahn<R: Real> {
    a: Complex<R>,
    sum: Complex<R>,
    c: Complex<R>,
    cp: Complex<R>,
    n: usize,
    prev: Complex<R>,
    cur: Complex<R>,
    root_prev: Complex<R>,
}

impl<R: Real> MergedHahn<R> {
    fn new(a: Complex<R>, ap: Complex<R>, c: Complex<R>, cp: Complex<R>) -> Self {
        MergedHahn { a, sum: a + ap, c, cp, n: 0, prev: cr(R::zero()), cur: cr(R::one()), root_prev: cr(R::one()) }
    }
}

impl<R: Real> Iterator for MergedHahn<R> {
    type Item = Complex<R>;

    fn next(&mut self) -> Option<Complex<R>> {
        let out = self.cur;
        let n = self.n;
        let one = cr(R::one());
        let root = front_root_ratio(self.c, self.cp, n);
        let next = if n == 0 {
            root * (self.sum - self.a * (self.c + self.cp) / self.c)
        } else {
            let nn = nr::<R>(n);
            let s = self.c + self.cp - one;
            let two_n = nn + nn;
            let up = -(nn + s) * (nn + self.c) * (self.sum + nn) / ((two_n + s) * (two_n + s + one));
            let down = nn * (nn + s - self.sum) * (nn + self.cp - one) / ((two_n + s - one) * (two_n + s));
            let lead = -(two_n + s) * (two_n + s + one) / ((nn + s) * (nn + self.c));
            root * lead * ((self.a + up + down) * self.cur - down * (self.sum + nn - one) * self.root_prev * self.prev)
        };
        self.prev = self.cur;
        self.cur = next;
        self.root_prev = root;
        self.n += 1;
        Some(out)
    }
}

/// `(x+y)^j 2F1(−j, c+c'+j−1; c; x/(x+y))` for `j = 0, 1, …` by the Jacobi
/// recurrence in homogeneous form, so that `x + y = 0` is allowed.
struct ScaledJacobi<R: Real> {
    c: Complex<R>,
    cp: Complex<R>,
    x: Complex<R>,
    s: Complex<R>,
    n: usize,
    prev: Complex<R>,
    cur: Complex<R>,
}

impl<R: Real> ScaledJacobi<R> {
    fn new(c: Complex<R>, cp: Complex<R>, x: Complex<R>, y: Complex<R>) -> Self {
        ScaledJacobi { c, cp, x, s: x + y, n: 0, prev: cr(R::zero()), cur: cr(R::one()) }
    }
}

impl<R: Real> Iterator for ScaledJacobi<R> {
    type Item = Complex<R>;

    fn next(&mut self) -> Option<Complex<R>> {
        let out = self.cur;
        let n = self.n;
        let (one, two) = (cr(R::one()), cr(R::from_f64(2.0)));
        let next = if n == 0 {
            self.s - (self.c + self.cp) * self.x / self.c
        } else {
            let nn = nr::<R>(n);
            let (al, be) = (self.c - one, self.cp - one);
            let ab = al + be;
            let m = two * nn + ab;
            let d1 = two * (nn + one) * (nn + ab + one) * m;
            let e = (m + one) * (m + two) * m;
            let e0 = (m + one) * (al * al - be * be);
            let d2 = two * (nn + al) * (nn + be) * (m + two);
            let diff = self.s - two * self.x;
            ((e * diff + e0 * self.s) * self.cur - d2 * nn / (nn + al) * self.s * self.s * self.prev)
                / (d1 * (nn + al + one) / (nn + one))
        };
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

fn check_lower(name: &str, v: Complex<f64>) -> Result<()> {
    let bad = v.im == 0.0 && v.re <= 0.0 && v.re == v.re.round();
    hypothesis(!bad, || format!("{name} = {} is a nonpositive integer", v.re))
}

/// Product of two `2F1` against `Σ_j C_j z^j 2F1(a+a'+j, b+b'+j; c+c'+2j; z)`.
/// With `square` the primed parameters equal the unprimed ones.
pub(super) fn mult_2f1<R: Real>(a: &Args, policy: &TruncationPolicy, square: bool) -> Result<Sides<R>> {
    let names: [&str; 6] = if square { ["a", "b", "c", "a", "b", "c"] } else { ["a", "b", "c", "ap", "bp", "cp"] };
    let mut p = Vec::with_capacity(6);
    for name in names {
        p.push(a.cx::<R>(name)?);
    }
    let z = a.cx::<R>("z")?;
    inside_unit_disc("z", absf(z))?;
    check_lower("c", to_c64(p[2]))?;
    check_lower("c'", to_c64(p[5]))?;
    check_lower_sum(p[2] + p[5])?;
    let lhs = mul_eval(hyp2f1(p[0], p[1], p[2], z, policy)?, hyp2f1(p[3], p[4], p[5], z, policy)?);
    let two = cr(R::from_f64(2.0));
    let mut zj = cr(R::one());
    let mut left = MergedHahn::new(p[0], p[3], p[2], p[5]);
    let mut right = MergedHahn::new(p[1], p[4], p[2], p[5]);
    let rhs = sum_terms(policy, absf(z), |j| {
        let jr = nr::<R>(j);
        let cj = left.next().unwrap_or_default() * right.next().unwrap_or_default();
        let term = if cj == cr(R::zero()) {
            cj
        } else {
            cj * zj * hyp2f1(p[0] + p[3] + jr, p[1] + p[4] + jr, p[2] + p[5] + two * jr, z, policy)?.value
        };
        zj = zj * z;
        Ok(term)
    })?;
    Ok((lhs, rhs))
}

fn check_lower_sum<R: Real>(s: Complex<R>) -> Result<()> {
    let s = to_c64(s);
    hypothesis(s.re > 0.0 || s.im != 0.0, || format!("c + c' = {} must be positive", s.re))
}

/// Product of two `1F1` against the confluent multiplication formula.
pub(super) fn conf_1f1<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let mut p = Vec::with_capacity(4);
    for name in ["a", "c", "ap", "cp"] {
        p.push(a.cx::<R>(name)?);
    }
    let (x, y) = (a.cx::<R>("x")?, a.cx::<R>("y")?);
    check_lower("c", to_c64(p[1]))?;
    check_lower("c'", to_c64(p[3]))?;
    check_lower_sum(p[1] + p[3])?;
    let lhs = mul_eval(hyp_pfq(&[p[0]], &[p[1]], x, policy)?, hyp_pfq(&[p[2]], &[p[3]], y, policy)?);
    let two = cr(R::from_f64(2.0));
    let mut merged = MergedHahn::new(p[0], p[2], p[1], p[3]);
    let mut jacobi = ScaledJacobi::new(p[1], p[3], x, y);
    let mut root = cr(R::one());
    let rhs = sum_terms(policy, 0.5, |j| {
        let jr = nr::<R>(j);
        // D_j = h_j^2 M_j = h_j (h_j M_j)
        let dj = root * merged.next().unwrap_or_default();
        let pj = jacobi.next().unwrap_or_default();
        root = root * front_root_ratio(p[1], p[3], j);
        if dj == cr(R::zero()) {
            return Ok(dj);
        }
        let f = hyp_pfq(&[p[0] + p[2] + jr], &[p[1] + p[3] + two * jr], x + y, policy)?;
        Ok(dj * pj * f.value)
    })?;
    Ok((lhs, rhs))
}

/// Finite Hahn bilinear sum against the product of two terminating `2F1`.
pub(super) fn hahn_bilinear_discrete<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let (al, be, z) = (a.cx::<R>("alpha")?, a.cx::<R>("beta")?, a.cx::<R>("z")?);
    let (m, n) = (a.count("M")?, a.count("N")?);
    let (x, y) = (a.count("x")?, a.count("y")?);
    hypothesis(m >= 1 && n >= 1, || format!("M = {m}, N = {n} must be positive"))?;
    hypothesis(x <= m && y <= n, || format!("x = {x} must lie in 0..={m} and y = {y} in 0..={n}"))?;
    let one = cr(R::one());
    let two = cr(R::from_f64(2.0));
    for (name, v) in [("alpha", al), ("beta", be)] {
        hypothesis(v.im != R::zero() || v.re > -R::one(), || format!("{name} = {v} must exceed -1"))?;
    }
    let pm = HahnParams { alpha: al, beta: be, big_n: m };
    let pn = HahnParams { alpha: al, beta: be, big_n: n };
    let (mr, nr_, xr, yr) = (nr::<R>(m), nr::<R>(n), nr::<R>(x), nr::<R>(y));
    let mut sum = cr(R::zero());
    let mut zj = one;
    for j in 0..=m.min(n) {
        let jr = nr::<R>(j);
        let coef = pochhammer(al + one, j) * pochhammer(-mr, j) * pochhammer(-nr_, j)
            / (pochhammer(one, j) * pochhammer(be + one, j) * pochhammer(al + be + jr + one, j));
        let f = hyp2f1(jr - mr, jr - nr_, al + be + two * jr + two, z, policy)?;
        let qx = hahn_poly(pm, j, R::from_usize(x))?;
        let qy = hahn_poly(pn, j, R::from_usize(y))?;
        sum = sum + coef * f.value * zj * qx * qy;
        zj = zj * z;
    }
    let lhs = finite(sum, m.min(n) + 1);
    let rhs = mul_eval(hyp2f1(-xr, -yr, al + one, z, policy)?, hyp2f1(xr - mr, yr - nr_, be + one, z, policy)?);
    Ok((lhs, rhs))
}

/// Product of two kernels against `Σ_j t^j v^{(k1+k2+j)} S_j S_j`. The
/// `Γ` factors of `v`, the normalisations of `S_j` and the continuous Hahn
/// scale factors are carried as one running weight.
pub(super) fn mp_spoisson<R: Real>(a: &Args, policy: &TruncationPolicy) -> Result<Sides<R>> {
    let (k1, k2, phi, t) = (a.real::<R>("k1")?, a.real::<R>("k2")?, a.real::<R>("phi")?, a.cx::<R>("t")?);
    let (x1, x2, y1, y2) = (a.real::<R>("x1")?, a.real::<R>("x2")?, a.real::<R>("y1")?, a.real::<R>("y2")?);
    mp_hypotheses(k1, phi, t)?;
    mp_hypotheses(k2, phi, t)?;
    let one = cr(R::one());
    let two = cr(R::from_f64(2.0));
    let sin2 = phi.sin() * phi.sin();
    let r = -t * cr(R::from_f64(4.0) * sin2) / ((one - t) * (one - t));
    check_r(r)?;
    let lhs = mul_eval(
        mp_kernel_sum(k1, phi, KernelPoint::new(t, x1, y1), policy)?,
        mp_kernel_sum(k2, phi, KernelPoint::new(t, x2, y2), policy)?,
    );
    let (xs, ys) = (x1 + x2, y1 + y2);
    let (k1c, k2c) = (cr(k1), cr(k2));
    let kk = k1c + k2c;
    let px = ChahnParams { a: k1c, b: Complex::new(k2, -xs), c: k1c, d: Complex::new(k2, xs) };
    let py = ChahnParams { a: k1c, b: Complex::new(k2, -ys), c: k1c, d: Complex::new(k2, ys) };
    let mut rx = ChahnRecurrence::new(px, x1);
    let mut ry = ChahnRecurrence::new(py, y1);
    let mut w = cr(R::one() / (gamma_real(R::from_f64(2.0) * k1)? * gamma_real(R::from_f64(2.0) * k2)?));
    let step = t * cr(R::from_f64(4.0) * sin2);
    let pt = KernelPoint::new(t, xs, ys);
    let rhs = sum_terms(policy, absf(r), |j| {
        let jr = nr::<R>(j);
        let v = mp_kernel_closed_unnormalised(k1 + k2 + R::from_usize(j), phi, pt, policy)?;
        let (vx, vy) = (rx.next().unwrap_or(one), ry.next().unwrap_or(one));
        let term = w * v.value * vx * vy;
        // N²_{j+1}/N²_j; (j+2K−1)/(2j+2K−1) is 1 at j = 0
        let frac = if j == 0 { one } else { (jr + two * kk - one) / (two * jr + two * kk - one) };
        let norm = (jr + one) * (two * jr + two * kk + one) * frac / ((two * k1c + jr) * (two * k2c + jr));
        w = w * step * norm * chahn_scale_ratio(&px, j) * chahn_scale_ratio(&py, j)
            / ((two * kk + two * jr) * (two * kk + two * jr + one));
        Ok(term)
    })?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::super::{run_case, IdentityCase, IdentityId, ParamMap};
    use num_complex::Complex;

    fn params(list: &[(&str, f64)]) -> ParamMap {
        list.iter().map(|&(k, v)| (k.to_string(), Complex::new(v, 0.0))).collect()
    }

    #[test]
    fn mult_2f1_polynomial_case() {
        let p = params(&[("a", -1.0), ("b", 1.0), ("c", 1.0), ("ap", -1.0), ("bp", 1.0), ("cp", 1.0), ("z", 0.5)]);
        let rep = run_case(&IdentityCase::new(IdentityId::Mult2f1, p)).unwrap();
        assert!((rep.lhs.re - 0.25).abs() < 1e-15);
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn chahn_bilinear_at_zero() {
        let mut p = params(&[("a", 0.7), ("x", 0.3), ("y", -1.1), ("r", 0.0)]);
        p.insert("b".into(), Complex::new(1.2, 0.4));
        p.insert("bp".into(), Complex::new(1.2, -0.9));
        let rep = run_case(&IdentityCase::new(IdentityId::ChahnBilinear, p)).unwrap();
        assert!((rep.lhs - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(rep.rel_err < 1e-14);
    }
}
