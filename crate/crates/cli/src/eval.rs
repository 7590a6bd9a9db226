//! `qkl eval`: a single polynomial, kernel or series value.

use anyhow::{bail, Result};
use clap::ValueEnum;
use num_complex::Complex;
use qkl_core::hyper::{bhs_rphis, hyp_pfq, vwp_8w7, SeriesEval, TruncationPolicy};
use qkl_core::identities::PrecisionPolicy;
use qkl_core::kernels::{
    ac_kernel_closed, ac_kernel_closed_alt, ac_kernel_sum, mp_kernel_closed, mp_kernel_sum, KernelPoint,
};
use qkl_core::polys::{
    asc_poly, aw_poly, chahn_poly, hahn_poly, jacobi_poly, mp_poly, qhermite_poly, AscParams, AwParams, ChahnParams,
    HahnParams, MpParams,
};
use qkl_core::real::{cr, from_c64};
use qkl_core::series_core::QBase;
use qkl_core::{Dd, Real};
use serde_json::{json, Value};

use crate::params::Assignments;
use crate::report::{complex, float};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Poly,
    Kernel,
    Series,
}

impl Target {
    fn as_str(self) -> &'static str {
        match self {
            Target::Poly => "poly",
            Target::Kernel => "kernel",
            Target::Series => "series",
        }
    }
}

/// Evaluates `target` and returns its report record.
pub fn evaluate(
    target: Target,
    args: &Assignments,
    precision: PrecisionPolicy,
    policy: &TruncationPolicy,
) -> Result<Value> {
    let e = match precision {
        PrecisionPolicy::Extended => dispatch::<Dd>(target, args, policy)?.convert::<f64>(),
        PrecisionPolicy::Standard | PrecisionPolicy::Auto => dispatch::<f64>(target, args, policy)?,
    };
    args.finish()?;
    Ok(json!({
        "target": target.as_str(),
        "options": args.words_json(),
        "params": args.numbers_json(),
        "value": complex(e.value),
        "terms_used": e.terms_used,
        "tail_estimate": float(e.tail_estimate),
        "status": e.status.as_str(),
        "precision": e.precision.as_str(),
    }))
}

fn dispatch<R: Real>(target: Target, a: &Assignments, policy: &TruncationPolicy) -> Result<SeriesEval<R>> {
    match target {
        Target::Poly => poly(a),
        Target::Kernel => kernel(a, policy),
        Target::Series => series(a, policy),
    }
}

fn re<R: Real>(a: &Assignments, name: &str) -> Result<R> {
    Ok(R::from_f64(a.real(name)?))
}

fn cx<R: Real>(a: &Assignments, name: &str) -> Result<Complex<R>> {
    Ok(from_c64(a.cx(name)?))
}

fn base<R: Real>(a: &Assignments) -> Result<QBase<R>> {
    Ok(QBase::new(re(a, "q")?)?)
}

fn cxs<R: Real>(v: Vec<Complex<f64>>) -> Vec<Complex<R>> {
    v.into_iter().map(from_c64).collect()
}

fn poly<R: Real>(a: &Assignments) -> Result<SeriesEval<R>> {
    let family = a.word("family")?;
    let value = match family.as_str() {
        "mp" => {
            let p = MpParams::new(re(a, "k")?, re(a, "phi")?)?;
            cr(mp_poly(p, a.count("n")?, re(a, "x")?, a.flag("orthonormal")?)?)
        }
        "chahn" => {
            let p = ChahnParams { a: cx(a, "a")?, b: cx(a, "b")?, c: cx(a, "c")?, d: cx(a, "d")? };
            chahn_poly(p, a.count("n")?, re(a, "x")?)?
        }
        "hahn" => {
            let p = HahnParams { alpha: cx(a, "alpha")?, beta: cx(a, "beta")?, big_n: a.count("N")? };
            hahn_poly(p, a.count("n")?, re(a, "x")?)?
        }
        "jacobi" => cr(jacobi_poly(re(a, "alpha")?, re(a, "beta")?, a.count("n")?, re(a, "x")?)?),
        "aw" => {
            let p = AwParams { q: base(a)?, a: cx(a, "a")?, b: cx(a, "b")?, c: cx(a, "c")?, d: cx(a, "d")? };
            aw_poly(p, a.count("n")?, re(a, "x")?)?
        }
        "asc" => {
            let p = AscParams { q: base(a)?, a: cx(a, "a")?, b: cx(a, "b")? };
            asc_poly(p, a.count("n")?, re(a, "x")?, a.flag("orthonormal")?)?
        }
        "qhermite" => cr(qhermite_poly(base(a)?, a.count("n")?, re(a, "x")?)?),
        other => bail!("unknown polynomial family '{other}' (mp, chahn, hahn, jacobi, aw, asc, qhermite)"),
    };
    Ok(SeriesEval::exact(value))
}

fn kernel<R: Real>(a: &Assignments, policy: &TruncationPolicy) -> Result<SeriesEval<R>> {
    let family = a.word("family")?;
    let form = a.word_or("form", "closed")?;
    let pt =
        |a: &Assignments| -> Result<KernelPoint<R>> { Ok(KernelPoint::new(cx(a, "t")?, re(a, "x")?, re(a, "y")?)) };
    match family.as_str() {
        "mp" => {
            let (k, phi, pt) = (re(a, "k")?, re(a, "phi")?, pt(a)?);
            match form.as_str() {
                "closed" => Ok(mp_kernel_closed(k, phi, pt, policy)?),
                "sum" => Ok(mp_kernel_sum(k, phi, pt, policy)?),
                other => bail!("unknown form '{other}' for the mp kernel (closed, sum)"),
            }
        }
        "ac" => {
            let (k, q) = (re(a, "k")?, base(a)?);
            let s = from_c64(a.cx_or("s", 1.0)?);
            let sigma = from_c64(a.cx_or("sigma", 1.0)?);
            let pt = pt(a)?.with_scales(s, sigma);
            match form.as_str() {
                "closed" => Ok(ac_kernel_closed(k, q, pt, policy)?),
                "alt" => Ok(ac_kernel_closed_alt(k, q, pt, policy)?),
                "sum" => Ok(ac_kernel_sum(k, q, pt, policy)?),
                other => bail!("unknown form '{other}' for the ac kernel (closed, alt, sum)"),
            }
        }
        other => bail!("unknown kernel family '{other}' (mp, ac)"),
    }
}

fn series<R: Real>(a: &Assignments, policy: &TruncationPolicy) -> Result<SeriesEval<R>> {
    let kind = a.word("type")?;
    match kind.as_str() {
        "2F1" => {
            let upper = [cx(a, "a")?, cx(a, "b")?];
            Ok(hyp_pfq(&upper, &[cx(a, "c")?], cx(a, "z")?, policy)?)
        }
        "pFq" => {
            let (upper, lower) = (cxs(a.indexed("a")?), cxs(a.indexed("b")?));
            Ok(hyp_pfq(&upper, &lower, cx(a, "z")?, policy)?)
        }
        "rphis" => {
            let (upper, lower) = (cxs(a.indexed("a")?), cxs(a.indexed("b")?));
            Ok(bhs_rphis(&upper, &lower, base(a)?, cx(a, "z")?, policy)?)
        }
        "8W7" => {
            let b = cxs::<R>(a.indexed("b")?);
            let Ok(b5) = <[Complex<R>; 5]>::try_from(b) else {
                bail!("8W7 takes exactly five parameters b1..b5");
            };
            Ok(vwp_8w7(cx(a, "a")?, &b5, base(a)?, cx(a, "z")?, policy)?)
        }
        other => bail!("unknown series type '{other}' (2F1, pFq, rphis, 8W7)"),
    }
}
