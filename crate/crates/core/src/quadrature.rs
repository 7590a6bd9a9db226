//! Orthonormality checks: Gram matrices of the Meixner–Pollaczek and
//! Al-Salam–Chihara polynomials against their weights, by adaptive
//! Gauss–Kronrod quadrature.

use num_complex::Complex;

use crate::error::{QklError, Result};
use crate::polys::{AscParams, AscRecurrence, AwParams, MpParams, MpRecurrence};
use crate::real::cr;
use crate::series_core::{ln_abs_gamma, q_product_ratio, QBase};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: f64,
}

fn kronrod_panel(f: &impl Fn(f64) -> Vec<f64>, a: f64, b: f64, dim: usize) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    let centre = f(c);
    for i in 0..dim {
        k[i] = KRONROD_WEIGHTS[7] * centre[i];
        g[i] = GAUSS_WEIGHTS[3] * centre[i];
    }
    for (j, &x) in KRONROD_NODES[..7].iter().enumerate() {
        let lo = f(c - h * x);
        let hi = f(c + h * x);
        for i in 0..dim {
            let s = lo[i] + hi[i];
            k[i] += KRONROD_WEIGHTS[j] * s;
            if j % 2 == 1 {
                g[i] += GAUSS_WEIGHTS[j / 2] * s;
            }
        }
    }
    let mut error = 0.0f64;
    for i in 0..dim {
        k[i] *= h;
        g[i] *= h;
        error = error.max((k[i] - g[i]).abs());
    }
    Panel { a, b, value: k, error }
}

/// Integrates a vector-valued function over `[a, b]`, starting from
/// `initial_panels` equal panels and bisecting the panel with the largest
/// error until the summed error (max over components) is below `tol`.
/// Returns the integrals, the summed error and the number of evaluations.
pub fn integrate_vec(
    f: impl Fn(f64) -> Vec<f64>,
    a: f64,
    b: f64,
    dim: usize,
    initial_panels: usize,
    tol: f64,
) -> Result<(Vec<f64>, f64, usize)> {
    const MAX_PANELS: usize = 20_000;
    let n0 = initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut panels: Vec<Panel> = (0..n0)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == n0 { b } else { lo + width };
            kronrod_panel(&f, lo, hi, dim)
        })
        .collect();
    let mut evaluations = 15 * n0;
    loop {
        let total: f64 = panels.iter().map(|p| p.error).sum();
        if total <= tol || panels.len() >= MAX_PANELS {
            if total > tol {
                return Err(QklError::Convergence { estimate: total, tol });
            }
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            let mut sum = vec![0.0; dim];
            for p in &panels {
                for (s, v) in sum.iter_mut().zip(&p.value) {
                    *s += v;
                }
            }
            return Ok((sum, total, evaluations));
        }
        let worst =
            panels.iter().enumerate().max_by(|x, y| x.1.error.total_cmp(&y.1.error)).map(|(i, _)| i).unwrap_or(0);
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(kronrod_panel(&f, p.a, mid, dim));
        panels.push(kronrod_panel(&f, mid, p.b, dim));
        evaluations += 30;
    }
}

/// Scalar adaptive integral over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    let (v, error_estimate, evaluations) = integrate_vec(|x| vec![f(x)], a, b, 1, 1, tol)?;
    Ok(QuadratureResult { value: v[0], error_estimate, evaluations })
}

fn ln_mp_weight(k: f64, phi: f64, x: f64) -> Result<f64> {
    let lg = ln_abs_gamma(Complex::new(k, x))?;
    Ok(2.0 * k * (2.0 * phi.sin()).ln() - (2.0 * std::f64::consts::PI).ln()
        + (2.0 * phi - std::f64::consts::PI) * x
        + 2.0 * lg)
}

/// `(2 sinφ)^{2k}/(2π) · e^{(2φ−π)x} |Γ(k+ix)|²`.
pub fn mp_weight(k: f64, phi: f64, x: f64) -> Result<f64> {
    MpParams::new(k, phi)?;
    Ok(ln_mp_weight(k, phi, x)?.exp())
}

/// `w(cos θ)` with `h(x,α) = (αe^{iθ}, αe^{−iθ}; q)_∞`.
fn aw_weight_theta(p: &AwParams<f64>, theta: f64) -> f64 {
    let e = Complex::<f64>::cis(theta);
    let ei = e.conj();
    let sq = p.q.get().sqrt();
    let mut nums = Vec::with_capacity(8);
    for al in [1.0, -1.0, sq, -sq] {
        nums.push(e * al);
        nums.push(ei * al);
    }
    let mut dens = Vec::with_capacity(8);
    for al in [p.a, p.b, p.c, p.d] {
        if al.norm() > 0.0 {
            dens.push(e * al);
            dens.push(ei * al);
        }
    }
    q_product_ratio(&nums, &dens, p.q).re
}

/// `w(x) = h(x,1)h(x,−1)h(x,q^{1/2})h(x,−q^{1/2}) / (h(x,a)h(x,b)h(x,c)h(x,d))`.
/// The endpoints `x = ±1` are rejected; integrals substitute `x = cos θ`.
pub fn aw_weight(p: &AwParams<f64>, x: f64) -> Result<f64> {
    p.check_measure_regime()?;
    if !(x > -1.0 && x < 1.0) {
        return Err(QklError::Range(format!("x = {x} must lie in the open interval (-1, 1)")));
    }
    Ok(aw_weight_theta(p, x.acos()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrthoFamily {
    MeixnerPollaczek { k: f64, phi: f64 },
    AlSalamChihara { q: f64, a: Complex<f64>, b: Complex<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    pub matrix: Vec<Vec<f64>>,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// Integration range in the integration variable (`x` for MP, `θ` for ASC).
    pub range: (f64, f64),
    pub max_offdiag: f64,
    pub max_diag_dev: f64,
}

impl GramReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_offdiag.max(self.max_diag_dev)
    }
}

const MAX_GRAM_DEGREE: usize = 12;

/// Gram matrix `G[m][n] = ∫ p_m p_n dμ`, `0 ≤ m, n ≤ nmax`, of the orthonormal
/// polynomials of `family`.
pub fn ortho_gram(family: OrthoFamily, nmax: usize, tol: f64) -> Result<GramReport> {
    if nmax > MAX_GRAM_DEGREE {
        return Err(QklError::Param(format!("nmax = {nmax} exceeds {MAX_GRAM_DEGREE}")));
    }
    if !(tol > 0.0) {
        return Err(QklError::Param(format!("tol = {tol} must be positive")));
    }
    let dim = (nmax + 1) * (nmax + 2) / 2;
    let (values, err, evals, range) = match family {
        OrthoFamily::MeixnerPollaczek { k, phi } => mp_gram(k, phi, nmax, dim, tol)?,
        OrthoFamily::AlSalamChihara { q, a, b } => asc_gram(q, a, b, nmax, dim, tol)?,
    };
    let mut matrix = vec![vec![0.0; nmax + 1]; nmax + 1];
    let mut idx = 0;
    let (mut max_offdiag, mut max_diag_dev) = (0.0f64, 0.0f64);
    for m in 0..=nmax {
        for n in m..=nmax {
            let v = values[idx];
            matrix[m][n] = v;
            matrix[n][m] = v;
            if m == n {
                max_diag_dev = max_diag_dev.max((v - 1.0).abs());
            } else {
                max_offdiag = max_offdiag.max(v.abs());
            }
            idx += 1;
        }
    }
    Ok(GramReport { matrix, error_estimate: err, evaluations: evals, range, max_offdiag, max_diag_dev })
}

fn upper_products(p: &[f64], out: &mut Vec<f64>, scale: f64) {
    for m in 0..p.len() {
        for n in m..p.len() {
            out.push(p[m] * p[n] * scale);
        }
    }
}

type GramParts = (Vec<f64>, f64, usize, (f64, f64));

fn mp_gram(k: f64, phi: f64, nmax: usize, dim: usize, tol: f64) -> Result<GramParts> {
    let params = MpParams::new(k, phi)?;
    // ln of weight·(1+x²)^nmax, the envelope of every integrand
    let envelope = |x: f64| -> Result<f64> { Ok(ln_mp_weight(k, phi, x)? + nmax as f64 * (1.0 + x * x).ln()) };
    let mut peak = f64::NEG_INFINITY;
    let mut mode = 0.0;
    let mut x = -200.0;
    while x <= 200.0 {
        let v = envelope(x)?;
        if v > peak {
            peak = v;
            mode = x;
        }
        x += 0.5;
    }
    let cutoff = peak + (1e-18f64).ln();
    let mut lo = mode;
    while envelope(lo)? >= cutoff {
        lo -= 1.0;
    }
    let mut hi = mode;
    while envelope(hi)? >= cutoff {
        hi += 1.0;
    }
    let integrand = |x: f64| {
        let w = ln_mp_weight(k, phi, x).map(f64::exp).unwrap_or(0.0);
        let p: Vec<f64> = match MpRecurrence::new(params, x) {
            Ok(it) => it.take(nmax + 1).collect(),
            Err(_) => vec![0.0; nmax + 1],
        };
        let mut out = Vec::with_capacity(dim);
        upper_products(&p, &mut out, w);
        out
    };
    let panels = ((hi - lo) / 2.0).ceil() as usize;
    let (v, e, n) = integrate_vec(integrand, lo, hi, dim, panels, tol)?;
    Ok((v, e, n, (lo, hi)))
}

fn asc_gram(q: f64, a: Complex<f64>, b: Complex<f64>, nmax: usize, dim: usize, tol: f64) -> Result<GramParts> {
    let qb = QBase::new(q)?;
    let params = AscParams { q: qb, a, b };
    params.check_measure_regime()?;
    let ab = a * b;
    if ab.im.abs() > 1e-14 || (a + b).im.abs() > 1e-14 {
        return Err(QklError::Param("a and b must be real or a complex-conjugate pair for a positive measure".into()));
    }
    let aw = AwParams { q: qb, a, b, c: cr(0.0), d: cr(0.0) };
    let norm = q_product_ratio(&[cr(q), ab], &[], qb).re / (2.0 * std::f64::consts::PI);
    // (q, ab; q)_n for the orthonormal scaling
    let mut scale = Vec::with_capacity(nmax + 1);
    let mut acc = 1.0f64;
    let mut qn = 1.0;
    for _ in 0..=nmax {
        scale.push(1.0 / acc.sqrt());
        qn *= q;
        acc *= (1.0 - qn) * (1.0 - ab.re * qn / q);
    }
    let integrand = |theta: f64| {
        let w = aw_weight_theta(&aw, theta) * norm;
        let p: Vec<f64> =
            AscRecurrence::new(params, theta.cos()).take(nmax + 1).zip(&scale).map(|(r, s)| r.re * s).collect();
        let mut out = Vec::with_capacity(dim);
        upper_products(&p, &mut out, w);
        out
    };
    let (v, e, n) = integrate_vec(integrand, 0.0, std::f64::consts::PI, dim, 8, tol)?;
    Ok((v, e, n, (0.0, std::f64::consts::PI)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn scalar_integrals() {
        let r = integrate(|x| x.exp(), 0.0, 1.0, 1e-13).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::E - 1.0, max_relative = 1e-14);
        assert!(r.error_estimate <= 1e-13);
        let r = integrate(|x| (1.0 - x * x).sqrt(), -1.0, 1.0, 1e-9).unwrap();
        assert_relative_eq!(r.value, PI / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn mp_weight_examples() {
        assert_relative_eq!(mp_weight(1.0, PI / 2.0, 0.0).unwrap(), 2.0 / PI, max_relative = 1e-14);
        let (phi, x) = (0.9, 1.7);
        let expect =
            (2.0 * f64::sin(phi)).powi(2) / (2.0 * PI) * ((2.0 * phi - PI) * x).exp() * PI * x / (PI * x).sinh();
        assert_relative_eq!(mp_weight(1.0, phi, x).unwrap(), expect, max_relative = 1e-12);
    }

    #[test]
    fn aw_weight_examples() {
        let q = QBase::new(0.5).unwrap();
        let p = AwParams { q, a: cr(0.4), b: cr(0.3), c: cr(0.0), d: cr(0.0) };
        let w = aw_weight(&p, 0.2).unwrap();
        // brute-force 100-factor product
        let th = 0.2f64.acos();
        let h = |al: f64| {
            let mut v = Complex::new(1.0, 0.0);
            for m in 0..100 {
                let qm = 0.5f64.powi(m);
                v *= (Complex::new(1.0, 0.0) - Complex::cis(th) * al * qm)
                    * (Complex::new(1.0, 0.0) - Complex::cis(-th) * al * qm);
            }
            v.re
        };
        let s = 0.5f64.sqrt();
        let brute = h(1.0) * h(-1.0) * h(s) * h(-s) / (h(0.4) * h(0.3));
        assert!(w > 0.0);
        assert_relative_eq!(w, brute, max_relative = 1e-13);
        assert!(matches!(aw_weight(&p, 1.0), Err(QklError::Range(_))));
    }

    #[test]
    fn mp_gram_is_identity() {
        let g = ortho_gram(OrthoFamily::MeixnerPollaczek { k: 0.8, phi: 1.1 }, 8, 1e-10).unwrap();
        assert!(g.max_deviation() < 1e-7, "{}", g.max_deviation());
    }

    #[test]
    fn asc_gram_is_identity() {
        let fam = OrthoFamily::AlSalamChihara { q: 0.5, a: cr(0.4), b: cr(0.3) };
        let g = ortho_gram(fam, 8, 1e-10).unwrap();
        assert!(g.max_deviation() < 1e-7, "{}", g.max_deviation());
        let bad = OrthoFamily::AlSalamChihara { q: 0.5, a: cr(1.2), b: cr(0.3) };
        assert!(matches!(ortho_gram(bad, 4, 1e-10), Err(QklError::Param(_))));
    }
}
