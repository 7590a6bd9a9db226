use num_complex::Complex;

use super::classical::chahn_dd;
use super::{aw_poly, aw_polys_rec, chahn_polys_rec, enforce_real, theta_of, AwParams, ChahnParams};
use crate::error::Result;
use crate::real::{cr, CxExt, Real};
use crate::series_core::{gamma_real, q_shifted, QBase};

/// Continuous Hahn parameters `(k1, k2 − iX, k1, k2 + iX)` with `X = x1 + x2`.
fn sj_chahn_params<R: Real>(k1: R, k2: R, x1: R, x2: R) -> ChahnParams<R> {
    let sum = x1 + x2;
    ChahnParams { a: cr(k1), b: Complex::new(k2, -sum), c: cr(k1), d: Complex::new(k2, sum) }
}

/// Squared normalisations `j!(2j+2K−1)Γ(j+2K−1)/(Γ(2k1+j)Γ(2k2+j))`,
/// `K = k1 + k2`, for `j = 0..=jmax`, built by running ratios from
/// `Γ(2K)/(Γ(2k1)Γ(2k2))`.
fn sj_mp_norms_sq<R: Real>(k1: R, k2: R, jmax: usize) -> Result<Vec<R>> {
    let one = R::one();
    let two = R::from_f64(2.0);
    let kk = k1 + k2;
    let mut out = Vec::with_capacity(jmax + 1);
    out.push(gamma_real(two * kk)? / (gamma_real(two * k1)? * gamma_real(two * k2)?));
    for j in 0..jmax {
        let jr = R::from_usize(j);
        // (j+2K−1)/(2j+2K−1) is 1 at j = 0, where both vanish for K = 1/2
        let frac = if j == 0 { one } else { (jr + two * kk - one) / (two * jr + two * kk - one) };
        let r = (jr + one) * (two * jr + two * kk + one) * frac / ((two * k1 + jr) * (two * k2 + jr));
        out.push(out[j] * r);
    }
    Ok(out)
}

/// `S_j(x1, x2) = (−2 sinφ)^j · N_j · p_j(x1; k1, k2−i(x1+x2), k1, k2+i(x1+x2))`
/// with the continuous Hahn polynomial from its definition.
pub fn sj_mp<R: Real>(k1: R, k2: R, j: usize, x1: R, x2: R, phi: R) -> Result<R> {
    let norm = sj_mp_norms_sq(k1.to_dd(), k2.to_dd(), j)?[j].sqrt();
    let factor = (-(phi.to_dd().sin().ldexp(1))).powi(j as i32) * norm;
    let p = chahn_dd(sj_chahn_params(k1, k2, x1, x2), j, x1)?;
    let v = enforce_real(p.value * factor, p.magnitude * factor.abs().to_f64())?;
    Ok(R::from_dd(v))
}

/// `S_j` for `j = 0..=jmax` from the continuous Hahn recurrence.
pub fn sj_mp_seq<R: Real>(k1: R, k2: R, jmax: usize, x1: R, x2: R, phi: R) -> Result<Vec<R>> {
    let norms = sj_mp_norms_sq(k1, k2, jmax)?;
    let polys = chahn_polys_rec(sj_chahn_params(k1, k2, x1, x2), jmax, x1);
    let base = -(R::from_f64(2.0) * phi.sin());
    let mut pw = R::one();
    let mut out = Vec::with_capacity(jmax + 1);
    for (p, n2) in polys.iter().zip(&norms) {
        out.push(pw * n2.sqrt() * p.re);
        pw *= base;
    }
    Ok(out)
}

fn sj_ac_params<R: Real>(k1: R, k2: R, x1: R, s: Complex<R>, q: QBase<R>) -> Result<AwParams<R>> {
    let th = theta_of(x1)?;
    let qk1 = q.get().powf(k1);
    let qk2 = q.get().powf(k2);
    Ok(AwParams { q, a: Complex::<R>::cis(th) * qk1, b: Complex::<R>::cis(-th) * qk1, c: s * qk2, d: cr(qk2) / s })
}

/// `(q, q^{2k1}, q^{2k2}, q^{2k1+2k2+j−1}; q)_j`.
fn sj_ac_norm_sq<R: Real>(k1: R, k2: R, j: usize, q: QBase<R>) -> R {
    let qv = q.get();
    let two = R::from_f64(2.0);
    let bases = [qv, qv.powf(two * k1), qv.powf(two * k2), qv.powf(two * (k1 + k2) + R::from_usize(j) - R::one())];
    bases.iter().fold(R::one(), |acc, &b| acc * q_shifted(cr(b), q, j).re)
}

/// `S_j = p_j(x2; q^{k1}e^{iθ1}, q^{k1}e^{−iθ1}, q^{k2}s, q^{k2}/s | q) /
/// √((q, q^{2k1}, q^{2k2}, q^{2k1+2k2+j−1}; q)_j)` with `x1 = cos θ1`.
pub fn sj_ac<R: Real>(k1: R, k2: R, j: usize, x1: R, x2: R, s: Complex<R>, q: QBase<R>) -> Result<Complex<R>> {
    let p = sj_ac_params(k1, k2, x1, s, q)?;
    let v = aw_poly(p, j, x2)?;
    Ok(v / cr(sj_ac_norm_sq(k1, k2, j, q).sqrt()))
}

/// `S_j` for `j = 0..=jmax` from the Askey–Wilson recurrence.
pub fn sj_ac_seq<R: Real>(
    k1: R,
    k2: R,
    jmax: usize,
    x1: R,
    x2: R,
    s: Complex<R>,
    q: QBase<R>,
) -> Result<Vec<Complex<R>>> {
    let p = sj_ac_params(k1, k2, x1, s, q)?;
    let polys = aw_polys_rec(p, jmax, x2);
    Ok(polys.iter().enumerate().map(|(j, &v)| v / cr(sj_ac_norm_sq(k1, k2, j, q).sqrt())).collect())
}
