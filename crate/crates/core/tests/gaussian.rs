use critstrip_core::dirichlet::*;
use critstrip_core::gaussian::*;
use critstrip_core::mellin::{CharacterStream, SummationFunction, UnitStream, ZeroStream};
use critstrip_core::quad::{integrate, integrate_to_infinity, QuadOptions};
use critstrip_core::{Complex64, Error};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn probe(alpha: f64) -> GaussianProbe {
    GaussianProbe::new(alpha).unwrap()
}

/// `alpha^{-1/2} int_a^b e^{theta X - X^2 / 4 pi alpha} dX` by plain quadrature.
fn kernel_quadrature(alpha: f64, theta: f64, a: f64, b: Option<f64>) -> f64 {
    let f = |x: f64| (theta * x - x * x / (4.0 * PI * alpha)).exp() / alpha.sqrt();
    let opts = QuadOptions::default();
    match b {
        Some(b) => integrate(f, a, b, opts).value,
        None => integrate_to_infinity(f, a, opts).value,
    }
}

fn chi4() -> DirichletCharacter {
    DirichletCharacter::kronecker(-4).unwrap()
}

fn rhs_for(chi: &DirichletCharacter, p: &GaussianProbe) -> XSideValue {
    let stream = Arc::new(CharacterStream::new(chi.clone()));
    let x = rhs_cutoff(stream.as_ref(), p, 1e-14);
    let s_fn = SummationFunction::new(stream, x.exp() as u64 + 1);
    rhs_x_integral(&s_fn, p, x).unwrap()
}

fn lhs_for(chi: &DirichletCharacter, p: &GaussianProbe) -> ContourValue {
    let ev = DirichletL::new(chi).unwrap();
    let t_cut = default_t_cut(p, &ev.conductor(), 0.5, DEFAULT_EPS, CONTOUR_TAIL_TOLERANCE);
    lhs_t_integral(&ev, p, t_cut).unwrap()
}

#[test]
fn probe_normalization() {
    for alpha in [0.005, 0.05, 0.3, 2.0] {
        let p = probe(alpha);
        let half = integrate_to_infinity(|t| p.weight(t), 0.0, QuadOptions::default()).value;
        assert!((2.0 * half - p.total_integral()).abs() < 1e-10);
        let opts = QuadOptions::default();
        let w = integrate(|t| p.weight(t), -3.0, 3.0, opts).value;
        assert!((w - p.window_integral(3.0)).abs() < 1e-12);
        let w2 = integrate(|t| p.weight(t).powi(2), -3.0, 3.0, opts).value;
        assert!((w2 - p.window_l2_squared(3.0)).abs() < 1e-12);
        for t in [-2.0, 0.0, 1.5] {
            let g = p.continuation(Complex64::new(0.5, t));
            assert!((g - p.weight(t)).norm() < 1e-15);
        }
    }
    assert!(GaussianProbe::new(0.0).is_err());
    assert!(GaussianProbe::new(f64::NAN).is_err());
}

#[test]
fn shipped_parameters() {
    let params = ProbeParameters::default();
    for c in [2.0f64, 3.0, 12.0, 1e6] {
        assert!(params.alpha(c).unwrap() <= 1.0);
    }
    for c in [3.0f64, 12.0, 1e6] {
        assert!(params.half_width(c).unwrap() >= 1.0);
    }
    assert!(params.alpha(1.0).is_err());
    let bad = ProbeParameters { b1: -1.0, ..params };
    assert!(matches!(prop21_check(&chi4(), &bad), Err(Error::Domain(_))));
}

#[test]
fn identity_for_chi4() {
    let p = probe(0.05);
    let lhs = lhs_for(&chi4(), &p);
    let rhs = rhs_for(&chi4(), &p);
    assert!((lhs.value - rhs.value).norm() < 1e-4 * lhs.value.norm(), "{lhs:?} {rhs:?}");
    assert!((lhs.value - rhs.value).norm() < 1e-10);
    // Real character: the t-integrand is Hermitian.
    assert!(lhs.value.im.abs() < 1e-12);
}

#[test]
fn x_side_of_unit_stream_has_closed_form() {
    for alpha in [0.02, 0.05, 0.1, 0.7] {
        let p = probe(alpha);
        let s_fn = SummationFunction::new(Arc::new(UnitStream), 10);
        let x = rhs_cutoff(&UnitStream, &p, 1e-15);
        let r = rhs_x_integral(&s_fn, &p, x.min(2.0)).unwrap();
        let oracle = kernel_quadrature(alpha, -0.5, 0.0, None);
        let got = r.value.re;
        // The cutoff is short, so the remainder sits inside the truncation bound.
        assert!((got - oracle).abs() <= r.truncation_bound + 1e-12, "{alpha}: {got} vs {oracle}");
        let closed = 2.0 * PI.sqrt() * (PI * alpha / 4.0).exp()
            * critstrip_core::specfun::erfc_paper((PI * alpha).sqrt() / 2.0).unwrap();
        assert!((closed - oracle).abs() < 1e-10);
    }
}

#[test]
fn x_side_range_and_zero_stream() {
    let p = probe(0.05);
    let zero = SummationFunction::new(Arc::new(ZeroStream), 100);
    assert_eq!(rhs_x_integral(&zero, &p, 4.0).unwrap().value, Complex64::new(0.0, 0.0));
    assert!(matches!(rhs_x_integral(&zero, &p, 10.0), Err(Error::Range { .. })));
}

#[test]
fn zero_integrand_and_principal_character() {
    let zero = FnEvaluator::new(
        |_| Ok(Complex64::new(0.0, 0.0)),
        AnalyticConductor::new(5, vec![Complex64::new(0.0, 0.0)]),
        true,
    );
    let p = probe(0.05);
    assert_eq!(lhs_t_integral(&zero, &p, 10.0).unwrap().value, Complex64::new(0.0, 0.0));
    let r = prop21_for(&zero, &ProbeParameters::default()).unwrap();
    assert_eq!(r.value, 0.0);
    assert!(!r.passes);
    let principal = DirichletCharacter::principal(5).unwrap();
    assert!(matches!(DirichletL::new(&principal), Err(Error::Pole { .. })));
}

#[test]
fn contour_is_independent_of_sigma() {
    let chars = enumerate_characters(13, 100).unwrap();
    let p = probe(0.05);
    for chi in chars.iter().filter(|c| !c.is_principal()) {
        let ev = DirichletL::new(chi).unwrap();
        let base = lhs_for(chi, &p);
        for sigma in [0.8, 1.2, 1.5] {
            let t_cut = default_t_cut(&p, &ev.conductor(), sigma, DEFAULT_EPS, CONTOUR_TAIL_TOLERANCE);
            let moved = contour_integral(&ev, &p, sigma, t_cut).unwrap();
            let tol = base.error() + moved.error() + 1e-12;
            assert!((moved.value - base.value).norm() <= tol, "{} sigma {sigma}", chi.label());
        }
    }
}

#[test]
fn family_trapezoid_matches_adaptive() {
    let chars: Vec<_> = enumerate_characters(15, 100)
        .unwrap()
        .into_iter()
        .filter(|c| !c.is_principal())
        .collect();
    let fam = CharacterFamily::new(chars.clone()).unwrap();
    let p = probe(0.05);
    let rows = lhs_family(&fam, &p, 0.5, 15.0).unwrap();
    for (chi, row) in chars.iter().zip(&rows) {
        let single = lhs_for(chi, &p);
        assert!((row.value - single.value).norm() < 1e-10, "{}", chi.label());
    }
}

#[test]
fn identity_family_q_up_to_twenty() {
    for q in 3..=20u64 {
        let chars: Vec<_> = enumerate_characters(q, 100)
            .unwrap()
            .into_iter()
            .filter(|c| c.is_primitive())
            .collect();
        if chars.is_empty() {
            continue;
        }
        let fam = CharacterFamily::new(chars).unwrap();
        for alpha in [0.02, 0.05, 0.1] {
            for row in identity_family(&fam, alpha, 0.5).unwrap() {
                assert!(row.relative_difference() < 1e-4, "q {q} alpha {alpha}: {row:?}");
            }
        }
    }
}

#[test]
fn first_piece_lower_bound() {
    for alpha in [0.001, 0.01, 0.05, 0.3, 50.0, 400.0] {
        let oracle = kernel_quadrature(alpha, -0.5, 0.0, Some(2f64.ln()));
        assert!((i1_lower(&probe(alpha)) - oracle).abs() < 1e-12 * oracle.max(1.0));
    }
    assert!((i1_lower(&probe(0.001)) / PI - 1.0).abs() < 0.05);
    assert!(i1_lower(&probe(0.01)) >= PI / 2.0);
    let mut prev = f64::INFINITY;
    for alpha in [1.0, 10.0, 100.0, 1e4] {
        let v = i1_lower(&probe(alpha));
        assert!(v < prev && v > 0.0);
        prev = v;
    }
    assert!(prev < 0.01);
    let star = alpha_star(PI / 2.0).unwrap();
    assert!(star >= 0.01);
    assert!(i1_lower(&probe(star)) >= PI / 2.0);
    assert!(i1_lower(&probe(star * (1.0 + 1e-9))) < PI / 2.0);
}

#[test]
fn remainder_bound_properties() {
    let eps = DEFAULT_EPS;
    let alpha = 0.05 / 4f64.ln();
    let p = probe(alpha);
    let r = remainder_upper(&p, 4.0, 0.05, 0.0, eps);
    assert!(r < i1_lower(&p) / 2.0, "{r}");
    let theta = eps - 0.5;
    let oracle = 4f64.powf(0.05) * kernel_quadrature(alpha, theta, 2f64.ln(), None);
    assert!((r - oracle).abs() < 1e-10 * oracle.max(1e-300), "{r} vs {oracle}");

    let mut prev = f64::INFINITY;
    for alpha in [0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005] {
        let v = remainder_upper(&probe(alpha), 100.0, 0.05, 0.0, eps);
        assert!(v < prev);
        prev = v;
    }
    assert!(prev < 1e-20);
    let c_values = [10.0, 100.0, 1e4, 1e8];
    let rs: Vec<f64> = c_values.iter().map(|&c| remainder_upper(&p, c, 0.05, 0.0, eps)).collect();
    assert!(rs.windows(2).all(|w| w[1] > w[0]));

    // Holding the bound fixed, a larger xi log C forces a smaller alpha.
    let alpha_for = |xi_log_c: f64| {
        let target = 1e-3;
        let (mut lo, mut hi) = (1e-6f64, 1.0f64);
        for _ in 0..100 {
            let mid = (lo * hi).sqrt();
            if remainder_upper(&probe(mid), xi_log_c.exp(), 1.0, 0.0, eps) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let mut prev = f64::INFINITY;
    for xlc in [0.5, 1.0, 2.0, 4.0] {
        let a = alpha_for(xlc);
        assert!(a < prev);
        prev = a;
    }
}

#[test]
fn x_side_dominates_first_piece_minus_remainder() {
    let chi = chi4();
    for alpha in [0.02, 0.05, 0.1] {
        let p = probe(alpha);
        let rhs = rhs_for(&chi, &p);
        // |A0(x)| <= 1 = C^0 x^0 for this character.
        let floor = i1_lower(&p) - remainder_upper(&p, 12.0, 0.0, 0.0, DEFAULT_EPS);
        assert!(rhs.value.norm() >= floor, "{alpha}");
    }
}

#[test]
fn probe_lower_bound_for_chi4_and_small_family() {
    let params = ProbeParameters::default();
    let r = prop21_check(&chi4(), &params).unwrap();
    assert!(r.passes, "{r:?}");
    assert!((r.conductor - 12.0).abs() < 1e-12);
    let chars: Vec<_> = (3..=30u64)
        .flat_map(|q| enumerate_characters(q, 100).unwrap())
        .filter(|c| c.is_primitive())
        .collect();
    let reports = prop21_scan(&chars, &params, critstrip_core::Execution::Parallel);
    let min = reports
        .iter()
        .map(|r| r.as_ref().unwrap().value)
        .fold(f64::INFINITY, f64::min);
    assert!(min > 0.0);
    let imprimitive = enumerate_characters(9, 10).unwrap().into_iter().find(|c| !c.is_primitive() && !c.is_principal());
    assert!(matches!(prop21_check(&imprimitive.unwrap(), &params), Err(Error::Imprimitive { .. })));
}

#[test]
fn tail_bounds() {
    let ev = DirichletL::new(&chi4()).unwrap();
    let params = ProbeParameters::default();
    let p = params.probe(12.0).unwrap();
    let at_window = tail_i5(&ev, params.half_width(12.0).unwrap(), &p, DEFAULT_EPS).unwrap();
    assert!(at_window.bound <= params.c / 2.0);
    assert!(at_window.within_slack());
    let fixed = tail_i5(&ev, 20.0, &probe(0.05), DEFAULT_EPS).unwrap();
    assert!(fixed.direct <= fixed.bound, "{fixed:?}");
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for t in [2.0, 5.0, 10.0, 20.0] {
        let r = tail_i5(&ev, t, &probe(0.05), DEFAULT_EPS).unwrap();
        assert!(r.within_slack(), "{r:?}");
        assert!(r.bound < prev.0 && r.direct <= prev.1);
        prev = (r.bound, r.direct);
    }
    assert!(prev.0 < 1e-25);
    assert!(tail_i5(&ev, 0.5, &p, DEFAULT_EPS).is_err());
}

#[test]
fn window_for_chi4() {
    let chi = chi4();
    let params = ProbeParameters::default();
    let w = theorem22_window(&chi, &params).unwrap();
    assert!(w.sup_passes() && w.l2_passes(), "{w:?}");
    assert!((w.half_width - 6.0 * 12f64.ln()).abs() < 1e-12);
    assert!(w.l2_value <= 2.0 * w.half_width * w.sup_value.powi(2));
    assert!(w.window_integral <= w.sup_value * w.g_l1 * (1.0 + 1e-9));
    assert!(w.window_integral <= w.l2_value.sqrt() * w.g_l2 * (1.0 + 1e-9));

    // Independent dense pointwise scan of |L(1/2 + it) / (1/2 + it)|.
    let n = 6000;
    let mut dense = 0.0f64;
    for k in 0..=n {
        let t = -w.half_width + 2.0 * w.half_width * k as f64 / n as f64;
        let s = Complex64::new(0.5, t);
        dense = dense.max((l_value(&chi, s).unwrap() / s).norm());
    }
    assert!(dense <= w.sup_value * (1.0 + 1e-9));
    assert!(dense >= w.sup_value * (1.0 - 1e-4));

    // Mean square by adaptive quadrature.
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        max_intervals: 4000,
    };
    let breaks: Vec<f64> = (0..=30).map(|k| -w.half_width + w.half_width * k as f64 / 15.0).collect();
    let l2 = critstrip_core::quad::integrate_breaks(
        &mut |t: f64| {
            let s = Complex64::new(0.5, t);
            (l_value(&chi, s).unwrap() / s).norm_sqr()
        },
        &breaks,
        opts,
    );
    assert!((l2.value - w.l2_value).abs() < 1e-8 * l2.value, "{} vs {}", l2.value, w.l2_value);
}

#[test]
fn probe_mass_grows_like_root_log_conductor() {
    let params = ProbeParameters::default();
    for c in [12.0f64, 100.0, 6000.0, 1e6] {
        let log_c = c.ln();
        let p = params.probe(c).unwrap();
        let ratio = p.window_l2_squared(params.half_width(c).unwrap()) / log_c.sqrt();
        assert!((3.0..=3.17).contains(&ratio), "{c}: {ratio}");
    }
}

#[test]
fn window_monotone_in_half_width() {
    let chi = DirichletCharacter::kronecker(-23).unwrap();
    let mut prev = (0.0, 0.0);
    for a in [2.0, 4.0, 6.0, 8.0] {
        let params = ProbeParameters {
            window_a: a,
            ..ProbeParameters::default()
        };
        let w = theorem22_window(&chi, &params).unwrap();
        assert!(w.sup_value >= prev.0 * (1.0 - 1e-9) && w.l2_value >= prev.1, "{a}: {w:?}");
        prev = (w.sup_value, w.l2_value);
    }
}

#[test]
fn shifted_window() {
    let chi = chi4();
    let params = ProbeParameters::default();
    let base = theorem22_window(&chi, &params).unwrap();
    let zero = theorem23_shifted_window(&chi, 0.0, &params).unwrap();
    assert_eq!(zero.l2_value, base.l2_value);
    assert_eq!(zero.weighted_sup, base.sup_value);
    assert_eq!(zero.half_width, base.half_width);

    let w = theorem23_shifted_window(&chi, 50.0, &params).unwrap();
    let expected = params.c3() / (12f64.ln() + 51f64.ln()).sqrt();
    assert!((w.bound - expected).abs() < 1e-12);
    assert!(w.sup_passes() && w.l2_passes(), "{w:?}");
    for x in [-30.0, 0.0, 7.5, 50.0, 120.0] {
        let r = theorem23_shifted_window(&chi, x, &params).unwrap();
        assert!(r.weighted_sup <= 2.0 * r.l_sup * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn identity_holds_for_random_characters(q in 3u64..40, pick in 0usize..1000, alpha in 0.02f64..0.1) {
        let chars: Vec<_> = enumerate_characters(q, 100).unwrap().into_iter().filter(|c| !c.is_principal()).collect();
        prop_assume!(!chars.is_empty());
        let chi = &chars[pick % chars.len()];
        let p = probe(alpha);
        let lhs = lhs_for(chi, &p);
        let rhs = rhs_for(chi, &p);
        prop_assert!((lhs.value - rhs.value).norm() < 1e-9 * (1.0 + lhs.value.norm()));
    }

    #[test]
    fn shifted_evaluator_translates(x in -40.0f64..40.0, t in -20.0f64..20.0, sigma in 0.2f64..1.3) {
        let ev = DirichletL::new(&DirichletCharacter::kronecker(-7).unwrap()).unwrap();
        let sh = Shifted::new(&ev, x);
        let s = Complex64::new(sigma, t);
        let direct = ev.eval(s + Complex64::new(0.0, x)).unwrap();
        prop_assert!((sh.eval(s).unwrap() - direct).norm() < 1e-12 * (1.0 + direct.norm()));
        let line = sh.eval_line(sigma, t, 0.1, 3).unwrap();
        prop_assert!((line[0] - direct).norm() < 1e-9 * (1.0 + direct.norm()));
        prop_assert!(sh.conductor().value() <= twist_conductor_bound(&ev.conductor(), x).bound * (1.0 + 1e-12));
    }
}
