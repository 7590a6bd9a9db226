use num_complex::Complex;

use super::{enforce_real, terminating_pfq};
use crate::dd::Dd;
use crate::error::{QklError, Result};
use crate::real::{cr, CxExt, Real};
use crate::series_core::gamma_real;

/// Meixner–Pollaczek parameters, `k > 0` and `0 < φ < π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpParams<R: Real = f64> {
    pub k: R,
    pub phi: R,
}

impl<R: Real> MpParams<R> {
    pub fn new(k: R, phi: R) -> Result<Self> {
        if !(k > R::zero()) {
            return Err(QklError::Param(format!("k = {k} must be positive")));
        }
        if !(phi > R::zero() && phi < R::pi()) {
            return Err(QklError::Param(format!("phi = {phi} must lie in (0, pi)")));
        }
        Ok(MpParams { k, phi })
    }
}

/// `P_n^{(k)}(x;φ) = (2k)_n/n! · e^{inφ} · 2F1(−n, k+ix; 2k; 1−e^{−2iφ})`,
/// optionally scaled by `√(n!/Γ(n+2k))` to the orthonormal `p_n`.
pub fn mp_poly<R: Real>(p: MpParams<R>, n: usize, x: R, orthonormal: bool) -> Result<R> {
    let k = p.k.to_dd();
    let phi = p.phi.to_dd();
    let xd = x.to_dd();
    let one = cr(Dd::ONE);
    let z = one - Complex::<Dd>::cis(-(phi.ldexp(1)));
    let s = terminating_pfq(&[cr(-Dd::from_f64(n as f64)), Complex::new(k, xd)], &[cr(k.ldexp(1))], z)?;
    // (2k)_n / n! as a running ratio
    let mut pref = Dd::ONE;
    for i in 0..n {
        pref = pref * (k.ldexp(1) + Dd::from_f64(i as f64)) / Dd::from_f64((i + 1) as f64);
    }
    let phase = Complex::<Dd>::cis(phi * Dd::from_f64(n as f64));
    let v = s.value * phase * pref;
    let mut val = enforce_real(v, s.magnitude * pref.abs().to_f64())?;
    if orthonormal {
        val *= orthonormal_factor(k, n)?;
    }
    Ok(R::from_dd(val))
}

/// `√(n!/Γ(n+2k))`, built as a running ratio from `1/√Γ(2k)`.
fn orthonormal_factor(k: Dd, n: usize) -> Result<Dd> {
    let mut f2 = Dd::ONE / gamma_real(k.ldexp(1))?;
    for i in 0..n {
        f2 = f2 * Dd::from_f64((i + 1) as f64) / (k.ldexp(1) + Dd::from_f64(i as f64));
    }
    Ok(f2.sqrt())
}

/// Orthonormal `p_n^{(k)}(y;φ)`, `n = 0, 1, …`, from the recurrence
/// `2y sinφ p_n = a_n p_{n+1} − 2(n+k)cosφ p_n + a_{n−1} p_{n−1}`,
/// `a_n = √((n+1)(n+2k))`, started at `p_0 = 1/√Γ(2k)`.
#[derive(Clone, Debug)]
pub struct MpRecurrence<R: Real> {
    k: R,
    sin: R,
    cos: R,
    y: R,
    n: usize,
    cur: R,
    prev: R,
    a_prev: R,
}

impl<R: Real> MpRecurrence<R> {
    pub fn new(p: MpParams<R>, y: R) -> Result<Self> {
        let (sin, cos) = p.phi.sin_cos();
        let p0 = R::one() / gamma_real(R::from_f64(2.0) * p.k)?.sqrt();
        Ok(MpRecurrence { k: p.k, sin, cos, y, n: 0, cur: p0, prev: R::zero(), a_prev: R::zero() })
    }
}

impl<R: Real> Iterator for MpRecurrence<R> {
    type Item = R;

    fn next(&mut self) -> Option<R> {
        let out = self.cur;
        let two = R::from_f64(2.0);
        let nr = R::from_usize(self.n);
        let a_n = ((nr + R::one()) * (nr + two * self.k)).sqrt();
        let next =
            ((two * self.y * self.sin + two * (nr + self.k) * self.cos) * self.cur - self.a_prev * self.prev) / a_n;
        self.prev = self.cur;
        self.cur = next;
        self.a_prev = a_n;
        self.n += 1;
        Some(out)
    }
}

/// Orthonormal `p_n^{(k)}(y;φ)` for `n = 0..=nmax`, see [`MpRecurrence`].
pub fn mp_polys_rec<R: Real>(p: MpParams<R>, nmax: usize, y: R) -> Result<Vec<R>> {
    Ok(MpRecurrence::new(p, y)?.take(nmax + 1).collect())
}

/// Orthonormal `p_n^{(k)}(y;φ)` from the recurrence.
pub fn mp_poly_rec<R: Real>(p: MpParams<R>, n: usize, y: R) -> Result<R> {
    Ok(mp_polys_rec(p, n, y)?[n])
}
