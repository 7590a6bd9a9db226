//! Orthogonal polynomial families.
//!
//! Every family has a definitional evaluator (its hypergeometric series, summed
//! in double-double because the alternating terms cancel heavily) and a
//! three-term recurrence that produces all degrees up to `nmax` at once.

mod aw;
mod classical;
mod mp;
mod sj;

pub use aw::{
    asc_poly, asc_polys_rec, aw_poly, aw_polys_rec, qhermite_poly, AscParams, AscRecurrence, AwParams, AwRecurrence,
};
pub use classical::{
    chahn_poly, chahn_polys_rec, chahn_scale_ratio, hahn_poly, jacobi_poly, jacobi_polys_rec, ChahnParams,
    ChahnRecurrence, HahnParams,
};
pub use mp::{mp_poly, mp_poly_rec, mp_polys_rec, MpParams, MpRecurrence};
pub use sj::{sj_ac, sj_ac_seq, sj_mp, sj_mp_seq};

use num_complex::Complex;

use crate::dd::Dd;
use crate::error::{QklError, Result};
use crate::hyper::detect_termination;
use crate::real::{cr, CxExt, Real};
use crate::series_core::QBase;

/// Reality threshold for values that are real by construction.
pub const REALITY_TOL: f64 = 1e-10;

/// Sum of a terminating series together with the sum of the moduli of its
/// terms, the natural scale for rounding noise.
pub(crate) struct TermSum {
    pub value: Complex<Dd>,
    pub magnitude: f64,
}

/// Terminating `pFq` summed in double-double.
pub(crate) fn terminating_pfq(upper: &[Complex<Dd>], lower: &[Complex<Dd>], z: Complex<Dd>) -> Result<TermSum> {
    let last =
        detect_termination(upper, None).ok_or_else(|| QklError::Param("series is expected to terminate".into()))?;
    if let Some(pole) = detect_termination(lower, None) {
        if pole < last {
            return Err(QklError::DenominatorPole { index: pole });
        }
    }
    let one = cr(Dd::ONE);
    let mut term = one;
    let mut sum = one;
    let mut magnitude = 1.0;
    for n in 0..last {
        let nd = cr(Dd::from_f64(n as f64));
        let mut num = z;
        let mut den = nd + one;
        for &u in upper {
            num = num * (u + nd);
        }
        for &l in lower {
            den = den * (l + nd);
        }
        term = term * num / den;
        sum = sum + term;
        magnitude += term.modulus().to_f64();
    }
    Ok(TermSum { value: sum, magnitude })
}

/// Terminating `rφs` (with `r = s + 1`) summed in double-double.
pub(crate) fn terminating_rphis(
    upper: &[Complex<Dd>],
    lower: &[Complex<Dd>],
    q: QBase<Dd>,
    z: Complex<Dd>,
) -> Result<TermSum> {
    let last =
        detect_termination(upper, Some(q)).ok_or_else(|| QklError::Param("series is expected to terminate".into()))?;
    if let Some(pole) = detect_termination(lower, Some(q)) {
        if pole < last {
            return Err(QklError::DenominatorPole { index: pole });
        }
    }
    let one = cr(Dd::ONE);
    let qv = q.get();
    let mut qn = Dd::ONE;
    let mut term = one;
    let mut sum = one;
    let mut magnitude = 1.0;
    for _ in 0..last {
        let mut num = z;
        let mut den = one - cr(qn * qv);
        for &u in upper {
            num = num * (one - u * qn);
        }
        for &l in lower {
            den = den * (one - l * qn);
        }
        term = term * num / den;
        sum = sum + term;
        magnitude += term.modulus().to_f64();
        qn *= qv;
    }
    Ok(TermSum { value: sum, magnitude })
}

/// Returns the real part of a value that must be real, or a reality error.
/// `scale` is the magnitude at which rounding noise is measured.
pub(crate) fn enforce_real(v: Complex<Dd>, scale: f64) -> Result<Dd> {
    let re = v.re.to_f64();
    let im = v.im.to_f64();
    if im.abs() > REALITY_TOL * re.abs().max(1e-20 * scale) {
        return Err(QklError::Reality { re, im });
    }
    Ok(v.re)
}

pub(crate) fn to_dd<R: Real>(z: Complex<R>) -> Complex<Dd> {
    crate::real::convert(z)
}

pub(crate) fn from_dd<R: Real>(z: Complex<Dd>) -> Complex<R> {
    crate::real::convert(z)
}

/// `θ = arccos x` on `[0, π]`, rejecting `|x| > 1`.
pub(crate) fn theta_of<R: Real>(x: R) -> Result<R> {
    let xf = x.to_f64();
    if !(-1.0..=1.0).contains(&xf) {
        return Err(QklError::Domain(format!("x = {xf} must lie in [-1, 1]")));
    }
    Ok(x.acos())
}
