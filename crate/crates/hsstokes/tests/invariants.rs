use std::f64::consts::PI;

use hsstokes::besov::{bessel_lift, build_partition, cutoff, phi_profile};
use hsstokes::grid_fourier::{BoxAxis, Field, HalfGrid, Repr, TangentialGrid, WholeField};
use hsstokes::spectral_core::{in_sector, kernel_m_direct, kernel_m_integral, sqrt_re_pos, Symbols};
use hsstokes::{FluidParams, SectorSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> FluidParams {
    FluidParams::new(1.0, 0.5, 1.0, 2).unwrap()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn principal_root_squares_back(re in -50.0..50.0f64, im in prop_oneof![-50.0..-1e-6f64, 1e-6..50.0f64]) {
        let z = Complex64::new(re, im);
        let w = sqrt_re_pos(z).unwrap();
        prop_assert!(w.re > 0.0);
        prop_assert!(close(w * w, z, 1e-13));
    }

    #[test]
    fn symbols_commute_with_conjugation(r in 1.5..1e4f64, theta in 0.0..(0.74 * PI), xi in 0.0..40.0f64) {
        let p = params();
        let lambda = Complex64::from_polar(r, theta);
        let sector = SectorSpec::new(PI / 4.0, 4.0 / 3.0).unwrap();
        prop_assert_eq!(in_sector(lambda, &sector, &p), in_sector(lambda.conj(), &sector, &p));
        let s = Symbols::new(&p, lambda, xi * xi).unwrap();
        let c = Symbols::new(&p, lambda.conj(), xi * xi).unwrap();
        for (x, y) in [(s.a, c.a), (s.b, c.b), (s.k, c.k), (s.k1, c.k1), (s.p, c.p), (s.eta, c.eta)] {
            prop_assert!(close(x.conj(), y, 1e-13));
        }
        prop_assert!(s.a.re > 0.0 && s.b.re > 0.0);
    }

    #[test]
    fn kernel_m_branches_agree(ar in 0.5..20.0f64, ai in -20.0..20.0f64, dr in -2e-3..2e-3f64, di in -2e-3..2e-3f64, x in 0.0..4.0f64) {
        let a = Complex64::new(ar, ai);
        let b = a + Complex64::new(dr, di);
        prop_assume!((a - b).norm() * x.max(1e-12) > 1e-5);
        let d = kernel_m_direct(a, b, x);
        let i = kernel_m_integral(a, b, x);
        prop_assert!((d - i).norm() <= 1e-6 * i.norm().max(1e-300) + 1e-14);
    }

    #[test]
    fn dyadic_blocks_sum_to_one(r in 0.0..200.0f64, nyq in 8.0..400.0f64) {
        let p = build_partition(nyq).unwrap();
        let total: f64 = (0..p.n_blocks()).map(|k| p.block(k, r)).sum();
        prop_assert!((total - 1.0).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&cutoff(r)));
        prop_assert!(phi_profile(r) >= -1e-15);
    }

    #[test]
    fn tangential_fft_round_trips(seed in 0u64..1000) {
        let grid = HalfGrid::new(2, 4.0, 16, 4.0, 8).unwrap();
        let f = Field::from_fn(&grid, 2, |x, out| {
            let s = seed as f64;
            out[0] = Complex64::new((s * 0.37 + x[0] * 1.3).sin() * x[1], (x[0] - s).cos());
            out[1] = Complex64::new((x[0] * x[1] + s).cos(), 0.0);
        });
        let back = f.to_spectral().to_physical();
        let err = back.sub(&f).unwrap().max_abs();
        prop_assert!(err < 1e-13 * f.max_abs().max(1.0));
    }

    #[test]
    fn bessel_lift_inverts(sigma in -1.5..1.5f64, shift in -1.0..1.0f64) {
        let tang = TangentialGrid::new(6.0, 32, 1).unwrap();
        let axis = BoxAxis::new(6.0, 32).unwrap();
        let f = WholeField::from_fn(tang, axis, 1, |x, out| {
            out[0] = Complex64::new((-(x[0] - shift).powi(2) - x[1] * x[1]).exp(), 0.0);
        });
        let g = bessel_lift(&bessel_lift(&f, sigma), -sigma);
        prop_assert_eq!(g.repr(), Repr::Physical);
        let err = g.sub(&f).unwrap().max_abs();
        prop_assert!(err < 1e-12);
    }
}
