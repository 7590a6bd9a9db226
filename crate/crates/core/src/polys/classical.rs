use num_complex::Complex;

use super::{from_dd, terminating_pfq, to_dd, TermSum};
use crate::dd::Dd;
use crate::error::{QklError, Result};
use crate::real::{cr, CxExt, Real};

/// Continuous Hahn parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChahnParams<R: Real = f64> {
    pub a: Complex<R>,
    pub b: Complex<R>,
    pub c: Complex<R>,
    pub d: Complex<R>,
}

/// `p_n(x; a,b,c,d) = i^n (a+c)_n (a+d)_n / n! ·
/// 3F2(−n, n+a+b+c+d−1, a+ix; a+c, a+d; 1)`.
pub fn chahn_poly<R: Real>(p: ChahnParams<R>, n: usize, x: R) -> Result<Complex<R>> {
    Ok(from_dd(chahn_dd(p, n, x)?.value))
}

/// [`chahn_poly`] in double-double, with the magnitude of the summed terms.
pub(crate) fn chahn_dd<R: Real>(p: ChahnParams<R>, n: usize, x: R) -> Result<TermSum> {
    let (a, b, c, d) = (to_dd(p.a), to_dd(p.b), to_dd(p.c), to_dd(p.d));
    let nd = Dd::from_f64(n as f64);
    let one = cr(Dd::ONE);
    let ix = Complex::new(Dd::ZERO, x.to_dd());
    let s = terminating_pfq(&[cr(-nd), cr(nd) + a + b + c + d - one, a + ix], &[a + c, a + d], one)?;
    let mut pref = one;
    for i in 0..n {
        let id = cr(Dd::from_f64(i as f64));
        pref = pref * Complex::new(Dd::ZERO, Dd::ONE) * (a + c + id) * (a + d + id) / cr(Dd::from_f64((i + 1) as f64));
    }
    let scale = pref.modulus().to_f64();
    Ok(TermSum { value: pref * s.value, magnitude: s.magnitude * scale })
}

/// The normalised `3F2` part `p̃_n = 3F2(−n, n+a+b+c+d−1, a+ix; a+c, a+d; 1)`
/// of the continuous Hahn polynomial, `n = 0, 1, …`, from the recurrence
/// `(a+ix) p̃_n = A_n p̃_{n+1} − (A_n+C_n) p̃_n + C_n p̃_{n−1}`.
/// `p_n = i^n (a+c)_n (a+d)_n / n! · p̃_n`, see [`chahn_scale_ratio`].
#[derive(Clone, Debug)]
pub struct ChahnRecurrence<R: Real> {
    p: ChahnParams<R>,
    lhs: Complex<R>,
    n: usize,
    cur: Complex<R>,
    prev: Complex<R>,
}

impl<R: Real> ChahnRecurrence<R> {
    pub fn new(p: ChahnParams<R>, x: R) -> Self {
        ChahnRecurrence { p, lhs: p.a + Complex::new(R::zero(), x), n: 0, cur: cr(R::one()), prev: cr(R::zero()) }
    }
}

impl<R: Real> Iterator for ChahnRecurrence<R> {
    type Item = Complex<R>;

    fn next(&mut self) -> Option<Complex<R>> {
        let ChahnParams { a, b, c, d } = self.p;
        let one = cr(R::one());
        let two = cr(R::from_f64(2.0));
        let s = a + b + c + d;
        let n = self.n;
        let nr = cr(R::from_usize(n));
        let a_n = if n == 0 {
            // the factor (s−1) cancels between numerator and denominator
            -(a + c) * (a + d) / s
        } else {
            -(nr + s - one) * (nr + a + c) * (nr + a + d) / ((two * nr + s - one) * (two * nr + s))
        };
        let c_n = if n == 0 {
            cr(R::zero())
        } else {
            nr * (nr + b + c - one) * (nr + b + d - one) / ((two * nr + s - two) * (two * nr + s - one))
        };
        let out = self.cur;
        let next = ((self.lhs + a_n + c_n) * self.cur - c_n * self.prev) / a_n;
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

/// `p_{n+1}/p̃_{n+1} ÷ p_n/p̃_n = i (a+c+n)(a+d+n)/(n+1)`.
pub fn chahn_scale_ratio<R: Real>(p: &ChahnParams<R>, n: usize) -> Complex<R> {
    let nr = cr(R::from_usize(n));
    Complex::new(R::zero(), R::one()) * (p.a + p.c + nr) * (p.a + p.d + nr) / (nr + cr(R::one()))
}

/// Continuous Hahn `p_n(x)` for `n = 0..=nmax`, see [`ChahnRecurrence`].
pub fn chahn_polys_rec<R: Real>(p: ChahnParams<R>, nmax: usize, x: R) -> Vec<Complex<R>> {
    let mut scale = cr(R::one());
    ChahnRecurrence::new(p, x)
        .take(nmax + 1)
        .enumerate()
        .map(|(n, v)| {
            let out = scale * v;
            scale = scale * chahn_scale_ratio(&p, n);
            out
        })
        .collect()
}

/// Hahn parameters `α, β` and the lattice size `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HahnParams<R: Real = f64> {
    pub alpha: Complex<R>,
    pub beta: Complex<R>,
    pub big_n: usize,
}

/// `Q_n(x; α, β, N) = 3F2(−n, n+α+β+1, −x; α+1, −N; 1)`.
pub fn hahn_poly<R: Real>(p: HahnParams<R>, n: usize, x: R) -> Result<Complex<R>> {
    if n > p.big_n {
        return Err(QklError::Degree { n, big_n: p.big_n });
    }
    let one = cr(Dd::ONE);
    let (al, be) = (to_dd(p.alpha), to_dd(p.beta));
    let nd = cr(Dd::from_f64(n as f64));
    let s = terminating_pfq(
        &[-nd, nd + al + be + one, cr(-x.to_dd())],
        &[al + one, cr(-Dd::from_f64(p.big_n as f64))],
        one,
    )?;
    Ok(from_dd(s.value))
}

/// `P_n^{(α,β)}(x) = (α+1)_n/n! · 2F1(−n, n+α+β+1; α+1; (1−x)/2)`.
pub fn jacobi_poly<R: Real>(alpha: R, beta: R, n: usize, x: R) -> Result<R> {
    let (al, be) = (alpha.to_dd(), beta.to_dd());
    let nd = Dd::from_f64(n as f64);
    let z = (Dd::ONE - x.to_dd()).ldexp(-1);
    let s = terminating_pfq(&[cr(-nd), cr(nd + al + be + Dd::ONE)], &[cr(al + Dd::ONE)], cr(z))?;
    let mut pref = Dd::ONE;
    for i in 0..n {
        pref = pref * (al + Dd::from_f64((i + 1) as f64)) / Dd::from_f64((i + 1) as f64);
    }
    Ok(R::from_dd(s.value.re * pref))
}

/// Jacobi `P_n^{(α,β)}(x)` for `n = 0..=nmax` from the standard recurrence.
pub fn jacobi_polys_rec<R: Real>(alpha: R, beta: R, nmax: usize, x: R) -> Vec<R> {
    let one = R::one();
    let two = R::from_f64(2.0);
    let ab = alpha + beta;
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(one);
    if nmax == 0 {
        return out;
    }
    out.push((alpha + one) + (ab + two) * (x - one) / two);
    for n in 1..nmax {
        let nr = R::from_usize(n);
        let c2 = two * nr + ab;
        let lead = two * (nr + one) * (nr + ab + one) * c2;
        let mid = (c2 + one) * ((c2 + two) * c2 * x + alpha * alpha - beta * beta);
        let back = two * (nr + alpha) * (nr + beta) * (c2 + two);
        let next = (mid * out[n] - back * out[n - 1]) / lead;
        out.push(next);
    }
    out
}
