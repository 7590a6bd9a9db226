use num_complex::Complex;
use num_traits::Zero;

use super::{from_dd, terminating_rphis, theta_of, to_dd};
use crate::dd::Dd;
use crate::error::{QklError, Result};
use crate::real::{cr, CxExt, Real};
use crate::series_core::{q_shifted, QBase};

/// Askey–Wilson parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AwParams<R: Real = f64> {
    pub q: QBase<R>,
    pub a: Complex<R>,
    pub b: Complex<R>,
    pub c: Complex<R>,
    pub d: Complex<R>,
}

impl<R: Real> AwParams<R> {
    /// Checks the absolutely continuous regime: all moduli below one.
    pub fn check_measure_regime(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)] {
            if v.modulus().to_f64() >= 1.0 {
                return Err(QklError::Param(format!(
                    "|{name}| = {} must be below 1 for an absolutely continuous measure",
                    v.modulus().to_f64()
                )));
            }
        }
        Ok(())
    }
}

/// Al-Salam–Chihara parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AscParams<R: Real = f64> {
    pub q: QBase<R>,
    pub a: Complex<R>,
    pub b: Complex<R>,
}

impl<R: Real> AscParams<R> {
    pub fn check_measure_regime(&self) -> Result<()> {
        AwParams { q: self.q, a: self.a, b: self.b, c: cr(R::zero()), d: cr(R::zero()) }.check_measure_regime()
    }
}

/// Continuous q-Hermite `H_n(x|q) = Σ_k [n,k]_q e^{i(n−2k)θ}`.
pub fn qhermite_poly<R: Real>(q: QBase<R>, n: usize, x: R) -> Result<R> {
    let theta = theta_of(x.to_dd())?;
    let qv = q.get().to_dd();
    let mut binom = Dd::ONE;
    let mut sum = Dd::ZERO;
    for k in 0..=n {
        let arg = theta * Dd::from_f64(n as f64 - 2.0 * k as f64);
        sum += binom * arg.cos();
        if k < n {
            binom = binom * (Dd::ONE - qv.powi((n - k) as i32)) / (Dd::ONE - qv.powi(k as i32 + 1));
        }
    }
    Ok(R::from_dd(sum))
}

/// Askey–Wilson `p_n(x; a,b,c,d | q) = a^{−n}(ab,ac,ad;q)_n ·
/// 4φ3(q^{−n}, abcdq^{n−1}, ae^{iθ}, ae^{−iθ}; ab, ac, ad; q, q)`, `x = cos θ`.
///
/// The polynomial is symmetric in its four parameters; the one of largest
/// modulus is used in the `a` slot, and the all-zero case is `H_n(x|q)`.
pub fn aw_poly<R: Real>(p: AwParams<R>, n: usize, x: R) -> Result<Complex<R>> {
    let theta = theta_of(x.to_dd())?;
    let mut params = [to_dd(p.a), to_dd(p.b), to_dd(p.c), to_dd(p.d)];
    let lead = (0..4)
        .max_by(|&i, &j| params[i].modulus().partial_cmp(&params[j].modulus()).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    params.swap(0, lead);
    let [a, b, c, d] = params;
    if a.modulus().is_zero() {
        return Ok(cr(qhermite_poly(p.q, n, x)?));
    }
    let q: QBase<Dd> = p.q.convert();
    let qv = q.get();
    let e = Complex::<Dd>::cis(theta);
    let abcd = a * b * c * d;
    let s = terminating_rphis(
        &[cr(qv.powi(-(n as i32))), abcd * qv.powi(n as i32 - 1), a * e, a / e],
        &[a * b, a * c, a * d],
        q,
        cr(qv),
    )?;
    let pref = (a * b, a * c, a * d);
    let qf = q_shifted(pref.0, q, n) * q_shifted(pref.1, q, n) * q_shifted(pref.2, q, n);
    Ok(from_dd(s.value * qf * a.cpowi(-(n as i32))))
}

/// Askey–Wilson `p_n(x)`, `n = 0, 1, …`, from the three-term recurrence
/// `2x p_n = α_n p_{n+1} + β_n p_n + γ_n p_{n−1}`, with `β_n` written so that
/// no coefficient divides by a parameter.
#[derive(Clone, Debug)]
pub struct AwRecurrence<R: Real> {
    p: AwParams<R>,
    two_x: Complex<R>,
    n: usize,
    cur: Complex<R>,
    prev: Complex<R>,
}

impl<R: Real> AwRecurrence<R> {
    pub fn new(p: AwParams<R>, x: R) -> Self {
        AwRecurrence { p, two_x: cr(R::from_f64(2.0) * x), n: 0, cur: cr(R::one()), prev: cr(R::zero()) }
    }
}

impl<R: Real> Iterator for AwRecurrence<R> {
    type Item = Complex<R>;

    fn next(&mut self) -> Option<Complex<R>> {
        let AwParams { q, a, b, c, d } = self.p;
        let qv = q.get();
        let one = cr(R::one());
        let e = b * c * d;
        let s1 = b + c + d;
        let s2 = b * c + b * d + c * d;
        let abcd = a * e;
        let qp = |k: i32| cr(qv.powi(k));
        let n = self.n;
        let ni = n as i32;
        let d1 = one - abcd * qp(2 * ni - 1);
        let d2 = one - abcd * qp(2 * ni);
        let alpha = (one - abcd * qp(ni - 1)) / (d1 * d2);
        let n_over_a = qp(ni) * s1
            + e * qp(ni - 1) * (one - qp(ni) - qp(ni + 1))
            + a * (e * e * qp(4 * ni - 1) - qp(2 * ni) * s2 - qp(2 * ni - 1) * s1 * e)
            + a * a * (qp(3 * ni) * e + qp(3 * ni - 1) * s2 * e)
            - a * a * a * qp(4 * ni - 1) * e * e;
        let (c_tilde, gamma) = if n == 0 {
            (cr(R::zero()), cr(R::zero()))
        } else {
            let qm = qp(ni - 1);
            let den = (one - abcd * qp(2 * ni - 2)) * d1;
            let common = (one - qp(ni)) * (one - b * c * qm) * (one - b * d * qm) * (one - c * d * qm) / den;
            (a * common, common * (one - a * b * qm) * (one - a * c * qm) * (one - a * d * qm))
        };
        let beta = a + n_over_a / (d1 * d2) - c_tilde;
        let out = self.cur;
        let next = ((self.two_x - beta) * self.cur - gamma * self.prev) / alpha;
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

/// Askey–Wilson `p_n(x)` for `n = 0..=nmax`, see [`AwRecurrence`].
pub fn aw_polys_rec<R: Real>(p: AwParams<R>, nmax: usize, x: R) -> Vec<Complex<R>> {
    AwRecurrence::new(p, x).take(nmax + 1).collect()
}

/// Al-Salam–Chihara `R_n(x; a, b | q) = a^{−n}(ab;q)_n ·
/// 3φ2(q^{−n}, ae^{iθ}, ae^{−iθ}; ab, 0; q, q)`, divided by `√((q,ab;q)_n)`
/// when `orthonormal` is set.
pub fn asc_poly<R: Real>(p: AscParams<R>, n: usize, x: R, orthonormal: bool) -> Result<Complex<R>> {
    let theta = theta_of(x.to_dd())?;
    let (mut a, mut b) = (to_dd(p.a), to_dd(p.b));
    if a.modulus() < b.modulus() {
        std::mem::swap(&mut a, &mut b);
    }
    let q: QBase<Dd> = p.q.convert();
    let ab = a * b;
    let value = if a.modulus().is_zero() {
        cr(qhermite_poly(q, n, x.to_dd())?)
    } else {
        let e = Complex::<Dd>::cis(theta);
        let s = terminating_rphis(&[cr(q.get().powi(-(n as i32))), a * e, a / e], &[ab, cr(Dd::ZERO)], q, cr(q.get()))?;
        s.value * q_shifted(ab, q, n) * a.cpowi(-(n as i32))
    };
    let value = if orthonormal { value / (q_shifted(cr(q.get()), q, n) * q_shifted(ab, q, n)).csqrt() } else { value };
    Ok(from_dd(value))
}

/// Al-Salam–Chihara `R_n(x)`, `n = 0, 1, …`, from
/// `R_{n+1} = (2x − (a+b)q^n) R_n − (1−q^n)(1−abq^{n−1}) R_{n−1}`.
#[derive(Clone, Debug)]
pub struct AscRecurrence<R: Real> {
    q: R,
    sum: Complex<R>,
    prod: Complex<R>,
    two_x: Complex<R>,
    qn: R,
    qnm1: R,
    cur: Complex<R>,
    prev: Complex<R>,
}

impl<R: Real> AscRecurrence<R> {
    pub fn new(p: AscParams<R>, x: R) -> Self {
        let qv = p.q.get();
        AscRecurrence {
            q: qv,
            sum: p.a + p.b,
            prod: p.a * p.b,
            two_x: cr(R::from_f64(2.0) * x),
            qn: R::one(),
            qnm1: R::one() / qv,
            cur: cr(R::one()),
            prev: cr(R::zero()),
        }
    }
}

impl<R: Real> Iterator for AscRecurrence<R> {
    type Item = Complex<R>;

    fn next(&mut self) -> Option<Complex<R>> {
        let out = self.cur;
        let one = cr(R::one());
        let next = (self.two_x - self.sum * self.qn) * self.cur
            - (one - cr(self.qn)) * (one - self.prod * self.qnm1) * self.prev;
        self.prev = self.cur;
        self.cur = next;
        self.qnm1 = self.qn;
        self.qn *= self.q;
        Some(out)
    }
}

/// Al-Salam–Chihara `R_n(x)` for `n = 0..=nmax`, see [`AscRecurrence`].
pub fn asc_polys_rec<R: Real>(p: AscParams<R>, nmax: usize, x: R) -> Vec<Complex<R>> {
    AscRecurrence::new(p, x).take(nmax + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{absf, cx};
    use approx::assert_relative_eq;

    fn params() -> AwParams<f64> {
        let q = QBase::new(0.5).unwrap();
        AwParams {
            q,
            a: Complex::from_polar(0.4, 0.5),
            b: Complex::from_polar(0.4, -0.5),
            c: cx(0.35, 0.0),
            d: cx(0.5 / 0.7, 0.0),
        }
    }

    #[test]
    fn aw_low_degrees() {
        let p = params();
        assert_eq!(aw_poly(p, 0, 0.3).unwrap(), cx(1.0, 0.0));
        let (a, b, c, d) = (p.a, p.b, p.c, p.d);
        let abcd = a * b * c * d;
        let x = 0.3;
        let sigma3 = a * b * c + a * b * d + a * c * d + b * c * d;
        let expect = 2.0 * x * (1.0 - abcd) - (a + b + c + d) + sigma3;
        assert!(absf(aw_poly(p, 1, x).unwrap() - expect) < 1e-14);
    }

    #[test]
    fn aw_recurrence_matches_definition() {
        let p = params();
        let rec = aw_polys_rec(p, 8, 0.3);
        for (n, r) in rec.iter().enumerate() {
            let d = aw_poly(p, n, 0.3).unwrap();
            assert!(absf(d - r) < 1e-12 * absf(d).max(1.0), "n={n}: {d} vs {r}");
        }
    }

    #[test]
    fn qhermite_cases_agree() {
        let q = QBase::new(0.5).unwrap();
        let z = cx(0.0, 0.0);
        let p = AwParams { q, a: z, b: z, c: z, d: z };
        let rec = aw_polys_rec(p, 6, 0.3);
        let expect = [1.0, 0.6, -0.14, -0.534, -0.1979, 0.381885, 0.420846625];
        for n in 0..=6 {
            assert_relative_eq!(qhermite_poly(q, n, 0.3).unwrap(), expect[n], max_relative = 1e-13);
            assert_relative_eq!(aw_poly(p, n, 0.3).unwrap().re, expect[n], max_relative = 1e-13);
            assert_relative_eq!(rec[n].re, expect[n], max_relative = 1e-13);
        }
    }

    #[test]
    fn asc_matches_aw_and_recurrence() {
        let q = QBase::new(0.3).unwrap();
        let p = AscParams { q, a: cx(0.4, 0.0), b: cx(0.2, 0.0) };
        assert_relative_eq!(asc_poly(p, 1, 0.3, false).unwrap().re, 0.6 - 0.6, epsilon = 1e-15);
        let rec = asc_polys_rec(p, 8, -0.45);
        let z = cx(0.0, 0.0);
        let aw = AwParams { q, a: p.a, b: p.b, c: z, d: z };
        for n in 0..=8 {
            let d = asc_poly(p, n, -0.45, false).unwrap();
            assert!(absf(d - rec[n]) < 1e-12 * absf(d).max(1.0));
            assert!(absf(d - aw_poly(aw, n, -0.45).unwrap()) < 1e-12 * absf(d).max(1.0));
        }
    }
}
