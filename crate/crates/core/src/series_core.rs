//! Scalar building blocks: Pochhammer symbols, q-shifted factorials, complex
//! Gamma, principal complex powers and the Bessel function of the first kind.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::dd::Dd;
use crate::error::{QklError, Result};
use crate::real::{cr, CxExt, PrecisionMode, Real};

/// Base of a q-series, validated to lie in (0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QBase<R: Real = f64>(R);

impl<R: Real> QBase<R> {
    pub fn new(q: R) -> Result<Self> {
        if q > R::zero() && q < R::one() {
            Ok(QBase(q))
        } else {
            Err(QklError::Param(format!("q = {q} must lie in (0, 1)")))
        }
    }

    pub fn get(self) -> R {
        self.0
    }

    pub fn convert<S: Real>(self) -> QBase<S> {
        QBase(S::from_dd(self.0.to_dd()))
    }
}

/// Rising factorial `a(a+1)⋯(a+n−1)`, multiplied in ascending order.
pub fn pochhammer<R: Real>(a: Complex<R>, n: usize) -> Complex<R> {
    let mut acc = cr(R::one());
    for i in 0..n {
        acc = acc * (a + cr(R::from_usize(i)));
    }
    acc
}

/// Finite q-shifted factorial `(a;q)_n = ∏_{m<n} (1 − a q^m)`.
pub fn q_shifted<R: Real>(a: Complex<R>, q: QBase<R>, n: usize) -> Complex<R> {
    let one = cr(R::one());
    let mut acc = one;
    let mut aqm = a;
    for _ in 0..n {
        acc = acc * (one - aqm);
        aqm = aqm * q.get();
    }
    acc
}

/// Value of `(a;q)_∞` together with the number of explicit factors used.
#[derive(Clone, Copy, Debug)]
pub struct QProduct<R: Real> {
    pub value: Complex<R>,
    pub truncation_index: usize,
}

/// Default truncation threshold for infinite products at precision `R`.
pub fn default_product_eps<R: Real>() -> f64 {
    R::EPS * 1e-2
}

/// `(a;q)_∞`, truncated at the first `m` with `|a| q^m < eps·(1−q)`; the
/// remaining factors are folded in through the first-order tail
/// `exp(−a q^M/(1−q))`.
pub fn q_shifted_inf<R: Real>(a: Complex<R>, q: QBase<R>, eps: f64) -> QProduct<R> {
    let one = cr(R::one());
    let qv = q.get();
    let cut = eps * (1.0 - qv.to_f64());
    let mut acc = one;
    let mut aqm = a;
    let mut m = 0usize;
    while aqm.modulus().to_f64() >= cut {
        acc = acc * (one - aqm);
        aqm = aqm * qv;
        m += 1;
    }
    let tail = -aqm / cr(R::one() - qv);
    QProduct { value: acc * tail.cexp(), truncation_index: m }
}

/// `∏_i (a_i;q)_n` over a list of bases.
pub fn q_shifted_list<R: Real>(bases: &[Complex<R>], q: QBase<R>, n: usize) -> Complex<R> {
    bases.iter().fold(cr(R::one()), |acc, &a| acc * q_shifted(a, q, n))
}

/// `∏_i (a_i;q)_∞` over a list of bases.
pub fn q_shifted_inf_list<R: Real>(bases: &[Complex<R>], q: QBase<R>) -> Complex<R> {
    let eps = default_product_eps::<R>();
    bases.iter().fold(cr(R::one()), |acc, &a| acc * q_shifted_inf(a, q, eps).value)
}

/// `∏(n_i;q)_∞ / ∏(d_j;q)_∞`, multiplied out factor by factor at matched
/// `m` so that numerator and denominator share one truncation index.
pub fn q_product_ratio<R: Real>(nums: &[Complex<R>], dens: &[Complex<R>], q: QBase<R>) -> Complex<R> {
    let one = cr(R::one());
    let qv = q.get();
    let cut = default_product_eps::<R>() * (1.0 - qv.to_f64());
    let mut acc = one;
    let mut num: Vec<Complex<R>> = nums.to_vec();
    let mut den: Vec<Complex<R>> = dens.to_vec();
    loop {
        let largest = num.iter().chain(den.iter()).map(|z| z.modulus().to_f64()).fold(0.0, f64::max);
        if largest < cut {
            break;
        }
        let mut f = one;
        for n in num.iter_mut() {
            f = f * (one - *n);
            *n = *n * qv;
        }
        for d in den.iter_mut() {
            f = f / (one - *d);
            *d = *d * qv;
        }
        acc = acc * f;
    }
    let excess = num.iter().fold(cr(R::zero()), |s, &n| s + n) - den.iter().fold(cr(R::zero()), |s, &d| s + d);
    acc * (-excess / cr(R::one() - qv)).cexp()
}

/// `(sin πx, cos πx)` with the argument reduced exactly modulo 2.
pub fn sin_cos_pi<R: Real>(x: R) -> (R, R) {
    let two = R::from_f64(2.0);
    let r = x - two * (x / two).round();
    (r * R::pi()).sin_cos()
}

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

/// Lanczos approximation of `ln Γ(z)` for `Re z ≥ 0.5`.
fn ln_gamma_lanczos(z: Complex<f64>) -> Complex<f64> {
    let z = z - 1.0;
    let mut sum = Complex::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.cln() - t + sum.cln()
}

fn bernoulli_even() -> &'static [Dd] {
    static TABLE: OnceLock<Vec<Dd>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_0..B_40 from sum_{k<=n} C(n+1,k) B_k = 0
        let n_max = 40usize;
        let mut b: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        b.push(BigRational::one());
        for n in 1..=n_max {
            let mut s = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                s += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-s / BigRational::from_integer(BigInt::from(n + 1)));
        }
        (1..=n_max / 2).map(|k| dd_from_ratio(&b[2 * k])).collect()
    })
}

/// Double-double value of an exact rational.
pub fn dd_from_ratio(r: &BigRational) -> Dd {
    // Both parts are cut to about 120 bits so that huge numerators and
    // denominators do not overflow on the way to the quotient.
    let top = |n: &BigInt| -> (Dd, i64) {
        let drop = n.bits().saturating_sub(120);
        (dd_from_bigint(&(n >> drop)), drop as i64)
    };
    let (num, en) = top(r.numer());
    let (den, ed) = top(r.denom());
    let shift = (en - ed).clamp(-4000, 4000) as i32;
    (num / den).ldexp(shift)
}

/// Double-double value of a big integer, exact to 106 bits.
pub fn dd_from_bigint(n: &BigInt) -> Dd {
    let hi = n.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() {
        return Dd::from_f64(hi);
    }
    let rem = n - BigInt::from_f64(hi).unwrap_or_default();
    Dd::from_pair(hi, rem.to_f64().unwrap_or(0.0))
}

/// Stirling series for `ln Γ(z)`, `Re z ≥ 0.5`, shifted to `Re z ≥ 30`.
fn ln_gamma_stirling(z: Complex<Dd>) -> Complex<Dd> {
    let mut shift = cr(Dd::ONE);
    let mut w = z;
    while w.re < Dd::from_f64(30.0) {
        shift = shift * w;
        w = w + cr(Dd::ONE);
    }
    let half = Dd::from_f64(0.5);
    let ln2pi = (Dd::PI.ldexp(1)).ln();
    let mut s = (w - cr(half)) * w.cln() - w + cr(half * ln2pi);
    let inv = cr(Dd::ONE) / w;
    let inv2 = inv * inv;
    let mut pw = inv;
    for (i, &b) in bernoulli_even().iter().enumerate() {
        let k = (i + 1) as f64;
        s = s + pw * (b / Dd::from_f64(2.0 * k * (2.0 * k - 1.0)));
        pw = pw * inv2;
    }
    s - shift.cln()
}

fn nonpositive_integer(z: Complex<f64>) -> bool {
    z.re <= 0.5 && z.im.abs() < 1e-14 && (z.re - z.re.round()).abs() < 1e-14
}

/// Complex Gamma function. Lanczos in Standard precision, a shifted Stirling
/// series in Extended precision; reflection for `Re z < 0.5`.
pub fn complex_gamma<R: Real>(z: Complex<R>) -> Result<Complex<R>> {
    let zf = Complex::new(z.re.to_f64(), z.im.to_f64());
    if nonpositive_integer(zf) {
        return Err(QklError::Pole(format!("Gamma at nonpositive integer {}", zf.re)));
    }
    let half = R::from_f64(0.5);
    if z.re < half {
        // Γ(z) = π / (sin(πz) Γ(1−z))
        let (sp, cp) = sin_cos_pi(z.re);
        let y = z.im * R::pi();
        let ey = y.exp();
        let (ch, sh) = ((ey + R::one() / ey) * half, (ey - R::one() / ey) * half);
        let sin_pz = Complex::new(sp * ch, cp * sh);
        let g = complex_gamma(cr(R::one()) - z)?;
        return Ok(cr(R::pi()) / (sin_pz * g));
    }
    Ok(match R::MODE {
        PrecisionMode::Standard => {
            let v = ln_gamma_lanczos(zf).cexp();
            Complex::new(R::from_f64(v.re), R::from_f64(v.im))
        }
        PrecisionMode::Extended => {
            let zd = Complex::new(z.re.to_dd(), z.im.to_dd());
            let v = ln_gamma_stirling(zd).cexp();
            Complex::new(R::from_dd(v.re), R::from_dd(v.im))
        }
    })
}

/// `ln|Γ(z)|` in double precision, finite far beyond the range where `|Γ|`
/// itself under- or overflows.
pub fn ln_abs_gamma(z: Complex<f64>) -> Result<f64> {
    if nonpositive_integer(z) {
        return Err(QklError::Pole(format!("Gamma at nonpositive integer {}", z.re)));
    }
    let mut w = z;
    let mut shift = 0.0;
    while w.re < 0.5 {
        shift += w.norm().ln();
        w += 1.0;
    }
    Ok(ln_gamma_lanczos(w).re - shift)
}

/// Gamma function of a real argument.
pub fn gamma_real<R: Real>(x: R) -> Result<R> {
    Ok(complex_gamma(cr(x))?.re)
}

/// Principal power `exp(e · Log b)` with `Im Log b ∈ (−π, π]`.
pub fn complex_pow_principal<R: Real>(base: Complex<R>, exponent: Complex<R>) -> Result<Complex<R>> {
    if base.re.is_zero() && base.im.is_zero() {
        if exponent.re > R::zero() {
            return Ok(cr(R::zero()));
        }
        return Err(QklError::Domain("zero base with exponent of non-positive real part".into()));
    }
    Ok(base.cpow(exponent))
}

/// Bessel function `J_ν(z)` from its ascending series, summed internally in
/// double-double to absorb the cancellation at large `|z|`.
pub fn bessel_j<R: Real>(nu: R, z: R) -> Result<R> {
    let zf = z.to_f64();
    let nuf = nu.to_f64();
    if zf.abs() > 30.0 {
        return Err(QklError::Range(format!("|z| = {} exceeds 30", zf.abs())));
    }
    if nuf <= -1.0 {
        return Err(QklError::Domain(format!("order {nuf} must exceed -1")));
    }
    if zf == 0.0 {
        if nuf < 0.0 {
            return Err(QklError::Domain(format!("J of order {nuf} is unbounded at 0")));
        }
        return Ok(if nuf == 0.0 { R::one() } else { R::zero() });
    }
    let nu_int = nuf == nuf.round();
    if zf < 0.0 && !nu_int {
        return Err(QklError::Domain("negative argument with non-integer order".into()));
    }
    let nud = nu.to_dd();
    let half_z = z.abs().to_dd().ldexp(-1);
    let mut term = if nuf < 150.0 {
        half_z.powf(nud) / complex_gamma(cr(nud + Dd::ONE))?.re
    } else {
        // Γ(ν+1) overflows here; build the leading term from logarithms
        (nud * half_z.ln() - ln_gamma_stirling(cr(nud + Dd::ONE)).re).exp()
    };
    let mut sum = term;
    let hz2 = half_z.sqr();
    let mut quiet = 0;
    let mut m = 0.0;
    while quiet < 3 {
        m += 1.0;
        term = -(term * hz2) / (Dd::from_f64(m) * (nud + Dd::from_f64(m)));
        sum += term;
        if term.abs().hi() <= 1e-32 * sum.abs().hi() || term.hi() == 0.0 {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if m > 10_000.0 {
            break;
        }
    }
    if zf < 0.0 && (nuf as i64) % 2 != 0 {
        sum = -sum;
    }
    Ok(R::from_dd(sum))
}
