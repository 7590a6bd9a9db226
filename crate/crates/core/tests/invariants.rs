use num_complex::Complex;
use proptest::prelude::*;

use qkl_core::hyper::{hyp2f1, TruncationPolicy};
use qkl_core::polys::{aw_poly, aw_polys_rec, mp_poly, mp_polys_rec, AwParams, MpParams};
use qkl_core::series_core::{complex_gamma, pochhammer, q_shifted, QBase};
use qkl_core::{Dd, Real};

fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn cx() -> impl Strategy<Value = Complex<f64>> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

fn small_cx(max: f64) -> impl Strategy<Value = Complex<f64>> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pochhammer_splits(a in cx(), m in 0usize..12, n in 0usize..12) {
        let whole = pochhammer(a, m + n);
        let split = pochhammer(a, m) * pochhammer(a + Complex::from(m as f64), n);
        prop_assert!(close(whole, split, 1e-12));
    }

    #[test]
    fn pochhammer_step(a in cx(), n in 0usize..20) {
        let next = pochhammer(a, n + 1);
        prop_assert!(close(next, pochhammer(a, n) * (a + Complex::from(n as f64)), 1e-12));
    }

    #[test]
    fn q_shifted_splits(a in small_cx(2.0), q in 0.05..0.95f64, m in 0usize..15, n in 0usize..15) {
        let qb = QBase::new(q).unwrap();
        let whole = q_shifted(a, qb, m + n);
        let split = q_shifted(a, qb, m) * q_shifted(a * q.powi(m as i32), qb, n);
        prop_assert!(close(whole, split, 1e-12));
    }

    #[test]
    fn gamma_recurrence(z in cx()) {
        prop_assume!((z - z.re.round()).norm() > 0.05 || z.re > 0.5);
        let g = complex_gamma(z).unwrap();
        let g1 = complex_gamma(z + 1.0).unwrap();
        prop_assert!(close(g1, z * g, 1e-12));
    }

    #[test]
    fn gamma_recurrence_extended(re in -3.0..3.0f64, im in -3.0..3.0f64) {
        prop_assume!((re - re.round()).abs() > 0.05 || im.abs() > 0.05 || re > 0.5);
        let z = Complex::new(Dd::from_f64(re), Dd::from_f64(im));
        let g = complex_gamma(z).unwrap();
        let g1 = complex_gamma(z + Complex::new(Dd::ONE, Dd::ZERO)).unwrap();
        let diff = g1 - z * g;
        let scale = 1.0 + g1.norm_sqr().sqrt().to_f64();
        prop_assert!(diff.norm_sqr().sqrt().to_f64() <= 1e-26 * scale);
    }

    #[test]
    fn gamma_modulus_on_the_critical_line(y in 0.1..8.0f64) {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        let g = complex_gamma(Complex::new(0.5, y)).unwrap();
        let expected = std::f64::consts::PI / (std::f64::consts::PI * y).cosh();
        prop_assert!((g.norm_sqr() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn gamma_modulus_on_the_imaginary_axis(y in 0.1..8.0f64) {
        // |Γ(iy)|² = π / (y sinh(πy))
        let g = complex_gamma(Complex::new(0.0, y)).unwrap();
        let expected = std::f64::consts::PI / (y * (std::f64::consts::PI * y).sinh());
        prop_assert!((g.norm_sqr() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn hyp2f1_contiguity(a in -2.0..2.0f64, b in -2.0..2.0f64, c in 0.3..3.0f64, z in -0.7..0.7f64) {
        // c(c−1)(z−1) F(c−1) + c(c−1−(2c−a−b−1)z) F(c) + (c−a)(c−b) z F(c+1) = 0
        prop_assume!((c - 1.0 - (c - 1.0).round()).abs() > 1e-3 || c - 1.0 > 0.0);
        let policy = TruncationPolicy::default();
        let f = |cc: f64| hyp2f1(a.into(), b.into(), cc.into(), z.into(), &policy).unwrap().value;
        let (fm, f0, fp) = (f(c - 1.0), f(c), f(c + 1.0));
        let t1 = fm * (c * (c - 1.0) * (z - 1.0));
        let t2 = f0 * (c * (c - 1.0 - (2.0 * c - a - b - 1.0) * z));
        let t3 = fp * ((c - a) * (c - b) * z);
        let scale = t1.norm() + t2.norm() + t3.norm();
        prop_assert!((t1 + t2 + t3).norm() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn hyp2f1_euler_transformation(a in -2.0..2.0f64, b in -2.0..2.0f64, c in 0.3..3.0f64, z in -0.7..0.7f64) {
        let policy = TruncationPolicy::default();
        let f = hyp2f1(a.into(), b.into(), c.into(), z.into(), &policy).unwrap().value;
        let g = hyp2f1((c - a).into(), (c - b).into(), c.into(), z.into(), &policy).unwrap().value;
        prop_assert!(close(f, g * (1.0 - z).powf(c - a - b), 1e-12));
    }

    #[test]
    fn aw_symmetric_under_parameter_permutations(
        a in small_cx(0.8), b in small_cx(0.8), c in small_cx(0.8), d in small_cx(0.8),
        q in 0.2..0.8f64, x in -0.99..0.99f64, perm in 0usize..24,
    ) {
        let qb = QBase::new(q).unwrap();
        let base = [a, b, c, d];
        let mut idx = [0usize, 1, 2, 3];
        let mut k = perm;
        for i in (1..4).rev() {
            idx.swap(i, k % (i + 1));
            k /= i + 1;
        }
        let p = AwParams { q: qb, a, b, c, d };
        let pp = AwParams { q: qb, a: base[idx[0]], b: base[idx[1]], c: base[idx[2]], d: base[idx[3]] };
        let by_rec = aw_polys_rec(pp, 6, x);
        for (n, &r) in by_rec.iter().enumerate() {
            let direct = aw_poly(p, n, x).unwrap();
            prop_assert!(close(direct, aw_poly(pp, n, x).unwrap(), 1e-10));
            prop_assert!(close(direct, r, 1e-9));
        }
    }

    #[test]
    fn mp_definition_matches_recurrence(k in 0.2..3.0f64, phi in 0.2..2.9f64, x in -5.0..5.0f64) {
        let p = MpParams::new(k, phi).unwrap();
        let rec = mp_polys_rec(p, 12, x).unwrap();
        let mut scale = 1.0f64;
        for (n, r) in rec.iter().enumerate() {
            scale = scale.max(r.abs());
            let d = mp_poly(p, n, x, true).unwrap();
            prop_assert!((d - r).abs() <= 1e-10 * scale, "n={} def={} rec={}", n, d, r);
        }
    }
}
