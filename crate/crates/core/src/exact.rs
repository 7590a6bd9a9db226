//! Exact rational verification of the product formula for two `2F1` series
//! and of the discrete Hahn bilinear formula.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dd::Dd;
use crate::error::{QklError, Result};
use crate::series_core::dd_from_ratio;

/// Exact complex number with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    /// `num/den + 0i`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    /// The exact binary value of a finite `f64` pair.
    pub fn from_c64(z: Complex<f64>) -> Result<Self> {
        let conv =
            |v: f64| BigRational::from_float(v).ok_or_else(|| QklError::Param(format!("{v} is not a finite number")));
        Ok(GaussianRational { re: conv(z.re)?, im: conv(z.im)? })
    }

    pub fn to_c64(&self) -> Complex<f64> {
        let c = self.to_cdd();
        Complex::new(c.re.hi(), c.im.hi())
    }

    pub fn to_cdd(&self) -> Complex<Dd> {
        Complex::new(ratio_to_dd(&self.re), ratio_to_dd(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// The nonnegative integer `n` with `self = −n`, if any.
    pub fn as_nonpositive_integer(&self) -> Option<usize> {
        (self.im.is_zero() && self.re.is_integer() && !self.re.is_positive())
            .then(|| (-self.re.to_integer()).to_usize())
            .flatten()
    }

    fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn ratio_to_dd(r: &BigRational) -> Dd {
    dd_from_ratio(r)
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero; callers check poles first.
    fn div(self, o: &GaussianRational) -> GaussianRational {
        let n = o.norm_sqr();
        let p = self * &o.conj();
        GaussianRational { re: p.re / &n, im: p.im / n }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational { (&self).$m(&o) }
        }
        impl $tr<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational { (&self).$m(o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::from_int(0)
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

fn add_int(a: &GaussianRational, n: usize) -> GaussianRational {
    GaussianRational { re: &a.re + BigRational::from_integer(n.into()), im: a.im.clone() }
}

/// `(a)_n`.
pub fn pochhammer_exact(a: &GaussianRational, n: usize) -> GaussianRational {
    (0..n).fold(GaussianRational::one(), |acc, i| acc * add_int(a, i))
}

fn nonzero_pochhammer(c: &GaussianRational, n: usize, what: &str) -> Result<GaussianRational> {
    let p = pochhammer_exact(c, n);
    if p.is_zero() {
        return Err(QklError::Pole(format!("({what})_{n} = 0 with {what} = {c}")));
    }
    Ok(p)
}

/// Coefficient of `z^k` in `2F1(a, b; c; z)`: `(a)_k (b)_k / ((c)_k k!)`.
pub fn coeff_2f1(
    a: &GaussianRational,
    b: &GaussianRational,
    c: &GaussianRational,
    k: usize,
) -> Result<GaussianRational> {
    let den = nonzero_pochhammer(c, k, "c")? * pochhammer_exact(&GaussianRational::one(), k);
    Ok(pochhammer_exact(a, k) * pochhammer_exact(b, k) / den)
}

/// All coefficients `0..=kmax` of `2F1(a, b; c; z)` by running ratios.
fn coeffs_2f1(
    a: &GaussianRational,
    b: &GaussianRational,
    c: &GaussianRational,
    kmax: usize,
) -> Result<Vec<GaussianRational>> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut cur = GaussianRational::one();
    for k in 0..=kmax {
        out.push(cur.clone());
        if k == kmax {
            break;
        }
        let den = add_int(c, k) * GaussianRational::from_int(k as i64 + 1);
        if den.is_zero() {
            if (add_int(a, k) * add_int(b, k)).is_zero() {
                // the series has terminated; later coefficients vanish
                out.resize(kmax + 1, GaussianRational::zero());
                break;
            }
            return Err(QklError::Pole(format!("(c)_{} = 0 with c = {c}", k + 1)));
        }
        cur = cur * add_int(a, k) * add_int(b, k) / den;
    }
    Ok(out)
}

/// `(a+a')_j · 3F2(−j, a, c+c'+j−1; a+a', c; 1)` in the merged form
/// `Σ_m (−j)_m (a)_m (c+c'+j−1)_m (a+a'+m)_{j−m} / ((c)_m m!)`, which stays
/// finite when `a + a'` is a nonpositive integer.
fn merged_3f2(
    a: &GaussianRational,
    ap: &GaussianRational,
    c: &GaussianRational,
    cp: &GaussianRational,
    j: usize,
) -> Result<GaussianRational> {
    let s = a + ap;
    let upper = add_int(&(c + cp), j) - GaussianRational::one();
    let mut fronts = Vec::with_capacity(j + 1);
    let mut front = GaussianRational::one();
    for m in 0..=j {
        fronts.push(front.clone());
        if m == j {
            break;
        }
        let den = add_int(c, m) * GaussianRational::from_int(m as i64 + 1);
        if den.is_zero() {
            return Err(QklError::Pole(format!("(c)_{} = 0 with c = {c}", m + 1)));
        }
        let minus_j = GaussianRational::from_int(m as i64 - j as i64);
        front = front * minus_j * add_int(a, m) * add_int(&upper, m) / den;
    }
    // (s+m)_{j−m} built downward from m = j
    let mut tail = GaussianRational::one();
    let mut sum = GaussianRational::zero();
    for m in (0..=j).rev() {
        if m < j {
            tail = tail * add_int(&s, m);
        }
        sum = sum + &fronts[m] * &tail;
    }
    Ok(sum)
}

fn coefficient_front(c: &GaussianRational, cp: &GaussianRational, j: usize) -> Result<GaussianRational> {
    let cc = add_int(&(c + cp), j) - GaussianRational::one();
    let den = pochhammer_exact(&GaussianRational::one(), j)
        * nonzero_pochhammer(cp, j, "c'")?
        * nonzero_pochhammer(&cc, j, "c+c'+j-1")?;
    Ok(pochhammer_exact(c, j) / den)
}

/// Coefficient `C_j` of
/// `2F1(a,b;c;z) 2F1(a',b';c';z) = Σ_j C_j z^j 2F1(a+a'+j, b+b'+j; c+c'+2j; z)`,
/// `C_j = (c)_j / (j! (c')_j (c+c'+j−1)_j) · F(a,a') · F(b,b')` with `F` the
/// merged `3F2` above. Parameters are `[a, b, c, a', b', c']`.
pub fn mult_2f1_coefficient(p: &[GaussianRational; 6], j: usize) -> Result<GaussianRational> {
    let [a, b, c, ap, bp, cp] = p;
    Ok(coefficient_front(c, cp, j)? * merged_3f2(a, ap, c, cp, j)? * merged_3f2(b, bp, c, cp, j)?)
}

/// `C_j` for `j = 0..=jmax`, see [`mult_2f1_coefficient`].
pub fn mult_2f1_coefficients(p: &[GaussianRational; 6], jmax: usize) -> Result<Vec<GaussianRational>> {
    (0..=jmax).map(|j| mult_2f1_coefficient(p, j)).collect()
}

/// Coefficient `D_j` of the confluent limit
/// `1F1(a;c;x) 1F1(a';c';y) = Σ_j D_j (x+y)^j 2F1(−j, c+c'+j−1; c; x/(x+y)) 1F1(a+a'+j; c+c'+2j; x+y)`.
/// Parameters are `[a, c, a', c']`.
pub fn conf_1f1_coefficient(p: &[GaussianRational; 4], j: usize) -> Result<GaussianRational> {
    let [a, c, ap, cp] = p;
    Ok(coefficient_front(c, cp, j)? * merged_3f2(a, ap, c, cp, j)?)
}

/// `D_j` for `j = 0..=jmax`, see [`conf_1f1_coefficient`].
pub fn conf_1f1_coefficients(p: &[GaussianRational; 4], jmax: usize) -> Result<Vec<GaussianRational>> {
    (0..=jmax).map(|j| conf_1f1_coefficient(p, j)).collect()
}

/// Outcome of a coefficient-by-coefficient exact comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactVerdict {
    pub equal: bool,
    pub first_failure: Option<usize>,
    pub checked: usize,
}

/// Compares the coefficients of `z^0, …, z^K` on both sides of the `2F1`
/// product formula. Parameters are `[a, b, c, a', b', c']`.
pub fn verify_mult_2f1_exact(p: &[GaussianRational; 6], big_k: usize) -> Result<ExactVerdict> {
    let [a, b, c, ap, bp, cp] = p;
    for (name, v) in [("c", c), ("c'", cp)] {
        if let Some(n) = v.as_nonpositive_integer() {
            return Err(QklError::Pole(format!("{name} = -{n} is a nonpositive integer")));
        }
    }
    let left1 = coeffs_2f1(a, b, c, big_k)?;
    let left2 = coeffs_2f1(ap, bp, cp, big_k)?;
    let cj = mult_2f1_coefficients(p, big_k)?;
    let (sa, sb, sc) = (a + ap, b + bp, c + cp);
    let inner: Vec<Vec<GaussianRational>> = (0..=big_k)
        .map(|j| coeffs_2f1(&add_int(&sa, j), &add_int(&sb, j), &add_int(&sc, 2 * j), big_k - j))
        .collect::<Result<_>>()?;
    for k in 0..=big_k {
        let lhs = (0..=k).fold(GaussianRational::zero(), |acc, i| acc + &left1[i] * &left2[k - i]);
        let rhs = (0..=k).fold(GaussianRational::zero(), |acc, j| acc + &cj[j] * &inner[j][k - j]);
        if lhs != rhs {
            return Ok(ExactVerdict { equal: false, first_failure: Some(k), checked: k + 1 });
        }
    }
    Ok(ExactVerdict { equal: true, first_failure: None, checked: big_k + 1 })
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pochhammer_rat(a: &BigRational, n: usize) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, i| acc * (a + rat(i as i64)))
}

/// Terminating `Σ_m Π(upper)_m / (Π(lower)_m m!) z^m` over `m = 0..=last`.
fn terminating_rat(upper: &[BigRational], lower: &[BigRational], z: &BigRational, last: usize) -> Result<BigRational> {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for m in 0..last {
        let mut den = rat(m as i64 + 1);
        for l in lower {
            den *= l + rat(m as i64);
        }
        if den.is_zero() {
            return Err(QklError::Pole(format!("lower parameter pole at index {}", m + 1)));
        }
        let mut num = z.clone();
        for u in upper {
            num *= u + rat(m as i64);
        }
        term = term * num / den;
        sum += &term;
    }
    Ok(sum)
}

/// `Q_n(x; α, β, N) = 3F2(−n, n+α+β+1, −x; α+1, −N; 1)` at integer `x`.
pub fn hahn_exact(alpha: &BigRational, beta: &BigRational, n: usize, x: usize, big_n: usize) -> Result<BigRational> {
    if n > big_n {
        return Err(QklError::Degree { n, big_n });
    }
    terminating_rat(
        &[rat(-(n as i64)), rat(n as i64 + 1) + alpha + beta, rat(-(x as i64))],
        &[alpha + rat(1), rat(-(big_n as i64))],
        &rat(1),
        n.min(x),
    )
}

/// Checks `Σ_j Q_j(x;α,β,M) Q_j(y;α,β,N) (α+1)_j(−M)_j(−N)_j / (j!(β+1)_j(α+β+j+1)_j)
/// · z^j 2F1(j−M, j−N; α+β+2j+2; z) = 2F1(−x,−y;α+1;z) 2F1(x−M,y−N;β+1;z)`
/// in exact arithmetic. This is the `2F1` product formula at `a = −x`,
/// `b = −y`, `c = α+1`, `a' = x−M`, `b' = y−N`, `c' = β+1`.
pub fn verify_hahn_exact(
    alpha: &BigRational,
    beta: &BigRational,
    big_m: usize,
    big_n: usize,
    x: usize,
    y: usize,
    z: &BigRational,
) -> Result<bool> {
    let (lhs, rhs) = hahn_sides_exact(alpha, beta, big_m, big_n, x, y, z)?;
    Ok(lhs == rhs)
}

/// Both sides of the discrete Hahn bilinear formula, see [`verify_hahn_exact`].
pub fn hahn_sides_exact(
    alpha: &BigRational,
    beta: &BigRational,
    big_m: usize,
    big_n: usize,
    x: usize,
    y: usize,
    z: &BigRational,
) -> Result<(BigRational, BigRational)> {
    if big_m == 0 || big_n == 0 || x > big_m || y > big_n {
        return Err(QklError::Param(format!(
            "need M, N ≥ 1, 0 ≤ x ≤ M, 0 ≤ y ≤ N; got M={big_m}, N={big_n}, x={x}, y={y}"
        )));
    }
    let one = rat(1);
    let ab = alpha + beta;
    let mut lhs = BigRational::zero();
    let mut zj = BigRational::one();
    for j in 0..=big_m.min(big_n) {
        let den =
            pochhammer_rat(&one, j) * pochhammer_rat(&(beta + &one), j) * pochhammer_rat(&(&ab + rat(j as i64 + 1)), j);
        if den.is_zero() {
            return Err(QklError::Pole(format!("(β+1)_j (α+β+j+1)_j = 0 at j = {j}")));
        }
        let coef = pochhammer_rat(&(alpha + &one), j)
            * pochhammer_rat(&rat(-(big_m as i64)), j)
            * pochhammer_rat(&rat(-(big_n as i64)), j)
            / den;
        let inner = terminating_rat(
            &[rat(j as i64 - big_m as i64), rat(j as i64 - big_n as i64)],
            &[&ab + rat(2 * j as i64 + 2)],
            z,
            big_m.min(big_n) - j,
        )?;
        let qx = hahn_exact(alpha, beta, j, x, big_m)?;
        let qy = hahn_exact(alpha, beta, j, y, big_n)?;
        lhs += qx * qy * coef * inner * &zj;
        zj *= z;
    }
    let f1 = terminating_rat(&[rat(-(x as i64)), rat(-(y as i64))], &[alpha + &one], z, x.min(y))?;
    let f2 = terminating_rat(
        &[rat(x as i64 - big_m as i64), rat(y as i64 - big_n as i64)],
        &[beta + &one],
        z,
        (big_m - x).min(big_n - y),
    )?;
    Ok((lhs, f1 * f2))
}

/// Parses an exact rational from `"p/q"` or a decimal such as `"-1.25e-3"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || QklError::Param(format!("'{s}' is not a rational number"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars())).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    if shift.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let mut r = if shift >= 0 {
        BigRational::from_integer(joined * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(joined, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Five parameter sets `[a, b, c, a', b', c']` for the exact check of the
/// `2F1` multiplication formula; the last one is Gaussian-rational.
pub fn reference_mult_2f1_sets() -> Vec<[GaussianRational; 6]> {
    let r = GaussianRational::ratio;
    let g = |a: i64, b: i64, c: i64, d: i64| {
        GaussianRational::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()))
    };
    vec![
        [r(1, 2), r(1, 3), r(3, 4), r(2, 5), r(-1, 7), r(5, 3)],
        [r(-3, 1), r(7, 2), r(1, 1), r(2, 1), r(-1, 2), r(9, 4)],
        [r(5, 6), r(-2, 3), r(7, 5), r(-5, 6), r(1, 8), r(1, 2)],
        [r(1, 1), r(1, 1), r(2, 1), r(1, 1), r(1, 1), r(2, 1)],
        [g(1, 2, 1, 3), g(-1, 4, 2, 1), g(3, 2, -1, 5), g(2, 3, 0, 1), g(1, 1, -1, 2), g(5, 4, 1, 7)],
    ]
}

/// Parameter sets `(α, β, M, N, z)` for the exact Hahn check.
pub fn reference_hahn_sets() -> Vec<(BigRational, BigRational, usize, usize, BigRational)> {
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    vec![
        (r(1, 2), r(1, 3), 3, 4, r(1, 5)),
        (r(0, 1), r(0, 1), 6, 6, r(-1, 2)),
        (r(2, 1), r(-1, 3), 5, 2, r(3, 7)),
        (r(7, 4), r(5, 2), 1, 6, r(-5, 3)),
        (r(-1, 2), r(3, 5), 4, 4, r(2, 9)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64, d: i64) -> GaussianRational {
        GaussianRational::ratio(n, d)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn coeff_examples() {
        assert_eq!(coeff_2f1(&g(3, 7), &g(1, 2), &g(5, 3), 0).unwrap(), g(1, 1));
        assert!(coeff_2f1(&g(-1, 1), &g(2, 3), &g(5, 3), 2).unwrap().is_zero());
        assert_eq!(coeff_2f1(&g(1, 1), &g(1, 1), &g(2, 1), 3).unwrap(), g(1, 4));
        assert!(matches!(coeff_2f1(&g(1, 1), &g(1, 1), &g(-1, 1), 3), Err(QklError::Pole(_))));
    }

    #[test]
    fn mult_2f1_polynomial_case() {
        let p = [g(-1, 1), g(1, 1), g(1, 1), g(-1, 1), g(1, 1), g(1, 1)];
        let v = verify_mult_2f1_exact(&p, 4).unwrap();
        assert!(v.equal);
        let c = mult_2f1_coefficients(&p, 4).unwrap();
        assert!(c[3].is_zero() && c[4].is_zero());
    }

    #[test]
    fn mult_2f1_rational_and_gaussian() {
        let p = [g(1, 2), g(1, 3), g(5, 4), g(2, 3), g(3, 5), g(7, 6)];
        assert!(verify_mult_2f1_exact(&p, 8).unwrap().equal);
        let i = |re: i64, im: i64, d: i64| GaussianRational::new(r(re, d), r(im, d));
        let p = [i(1, 1, 2), i(2, -1, 3), i(3, 0, 2), i(1, -1, 2), i(1, 2, 5), i(5, 1, 4)];
        assert!(verify_mult_2f1_exact(&p, 8).unwrap().equal);
    }

    #[test]
    fn mult_2f1_negative_integer_sum() {
        // a + a' = −2 with neither a nor a' an integer
        let p = [g(-1, 2), g(1, 3), g(5, 4), g(-3, 2), g(3, 5), g(7, 6)];
        assert!(verify_mult_2f1_exact(&p, 8).unwrap().equal);
    }

    #[test]
    fn mult_2f1_detects_a_wrong_coefficient() {
        // swapping c and c' in C_j breaks the identity unless c = c'
        let p = [g(1, 2), g(1, 3), g(5, 4), g(2, 3), g(3, 5), g(7, 6)];
        let swapped = [g(1, 2), g(1, 3), g(7, 6), g(2, 3), g(3, 5), g(5, 4)];
        let cj = mult_2f1_coefficients(&swapped, 2).unwrap();
        let good = mult_2f1_coefficients(&p, 2).unwrap();
        assert_ne!(cj[1], good[1]);
    }

    #[test]
    fn hahn_examples() {
        let (al, be) = (r(1, 2), r(1, 3));
        assert!(verify_hahn_exact(&al, &be, 4, 5, 2, 3, &r(2, 7)).unwrap());
        assert!(verify_hahn_exact(&al, &be, 4, 5, 0, 0, &r(2, 7)).unwrap());
        let (l, rr) = hahn_sides_exact(&al, &be, 4, 5, 3, 1, &BigRational::zero()).unwrap();
        assert!(l.is_one() && rr.is_one());
        assert_eq!(hahn_exact(&al, &be, 3, 0, 4).unwrap(), BigRational::one());
        for (x, y) in [(1, 1), (4, 5), (3, 2)] {
            assert!(verify_hahn_exact(&r(3, 2), &r(-3, 10), 4, 5, x, y, &r(-4, 5)).unwrap());
        }
    }

    #[test]
    fn hahn_without_factorial_fails() {
        // the coefficient without 1/j! is off from j = 2 on
        let (al, be, z) = (r(1, 2), r(1, 3), r(2, 7));
        let (_, rhs) = hahn_sides_exact(&al, &be, 4, 5, 2, 3, &z).unwrap();
        let mut lhs = BigRational::zero();
        for j in 0..=4usize {
            let ab = &al + &be;
            let coef = pochhammer_rat(&(&al + rat(1)), j) * pochhammer_rat(&rat(-4), j) * pochhammer_rat(&rat(-5), j)
                / (pochhammer_rat(&(&be + rat(1)), j) * pochhammer_rat(&(&ab + rat(j as i64 + 1)), j));
            let inner =
                terminating_rat(&[rat(j as i64 - 4), rat(j as i64 - 5)], &[&ab + rat(2 * j as i64 + 2)], &z, 4 - j)
                    .unwrap();
            lhs += hahn_exact(&al, &be, j, 2, 4).unwrap()
                * hahn_exact(&al, &be, j, 3, 5).unwrap()
                * coef
                * inner
                * num_traits::pow(z.clone(), j);
        }
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn conversions() {
        let z = GaussianRational::from_c64(Complex::new(0.1, -2.5)).unwrap();
        assert_eq!(z.to_c64(), Complex::new(0.1, -2.5));
        let third = g(1, 3).to_cdd().re;
        assert!(((third * Dd::from_f64(3.0)) - Dd::ONE).abs() < Dd::from_f64(1e-31));
        assert_eq!(g(-4, 1).as_nonpositive_integer(), Some(4));
        assert_eq!(g(-4, 3).as_nonpositive_integer(), None);
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("-1.5e-2").unwrap(), r(-3, 200));
        assert_eq!(parse_rational("3/-6").unwrap(), r(-1, 2));
        assert_eq!(parse_rational("12").unwrap(), r(12, 1));
        assert_eq!(parse_rational(".5E1").unwrap(), r(5, 1));
        for bad in ["", "1/0", "abc", "1.2.3", "e5", "-", "1e"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn reference_sets_verify() {
        for p in reference_mult_2f1_sets() {
            assert!(verify_mult_2f1_exact(&p, 8).unwrap().equal);
        }
        for (al, be, m, n, z) in reference_hahn_sets() {
            for x in 0..=m {
                for y in 0..=n {
                    assert!(verify_hahn_exact(&al, &be, m, n, x, y, &z).unwrap());
                }
            }
        }
    }

    #[test]
    fn huge_ratios_convert() {
        let big = BigInt::from(3) << 3000usize;
        let v = GaussianRational::real(BigRational::new(big.clone() + 1, big)).to_c64();
        assert!((v.re - 1.0).abs() < 1e-15);
    }
}
