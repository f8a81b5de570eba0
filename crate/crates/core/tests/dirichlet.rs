use critstrip_core::arith::{divisors, gcd, totient};
use critstrip_core::dirichlet::*;
use critstrip_core::quad::{integrate_breaks, QuadOptions};
use critstrip_core::specfun::ln_gamma_complex;
use critstrip_core::{Complex64, Error};
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `L(s, chi) = Gamma(s)^{-1} int_0^inf x^{s-1} sum_a chi(a) e^{-ax} / (1 - e^{-qx}) dx`
/// for non-principal `chi` and `Re s > 0`.
fn l_by_mellin_integral(chi: &DirichletCharacter, s: Complex64) -> Complex64 {
    let q = chi.modulus();
    let vals: Vec<Complex64> = (1..=q).map(|a| chi.value(a)).collect();
    // x = e^y; sum chi(a) = 0 lets the numerator use expm1 without cancellation.
    let mut f = |y: f64| {
        let x = y.exp();
        let denom = -(-(q as f64) * x).exp_m1();
        let mut num = c(0.0, 0.0);
        for (i, v) in vals.iter().enumerate() {
            num += v * (-((i + 1) as f64) * x).exp_m1();
        }
        (s * y).exp() * num / denom
    };
    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_intervals: 20_000,
    };
    let lo = -40.0 / s.re;
    let r = integrate_breaks(&mut f, &[lo, lo / 2.0, -20.0, -5.0, 0.0, 2.0, 5.0], opts);
    assert!(r.converged);
    r.value / ln_gamma_complex(s).exp()
}

fn brute_conductor(chi: &DirichletCharacter) -> u64 {
    let q = chi.modulus();
    for d in divisors(q) {
        let trivial = (1..=q)
            .filter(|&n| gcd(n, q) == 1 && n % d == 1 % d)
            .all(|n| chi.value_index(n) == Some(0));
        if trivial {
            return d;
        }
    }
    q
}

#[test]
fn known_values() {
    let chi4 = DirichletCharacter::kronecker(-4).unwrap();
    assert!((l_value(&chi4, c(1.0, 0.0)).unwrap().re - PI / 4.0).abs() < 1e-13);
    let catalan = 0.915_965_594_177_219_015;
    assert!((l_value(&chi4, c(2.0, 0.0)).unwrap().re - catalan).abs() < 1e-13);
    let beta_half = 0.667_691_457_189_609_176_7;
    assert!((l_value(&chi4, c(0.5, 0.0)).unwrap().re - beta_half).abs() < 1e-12);
    assert!((zeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-13);
    assert!((zeta(c(0.5, 0.0)).unwrap().re + 1.460_354_508_809_586_8).abs() < 1e-12);
    assert!((zeta(c(-1.0, 0.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-12);
    assert!(zeta(c(0.5, 14.134_725_141_734_693)).unwrap().norm() < 1e-12);
}

#[test]
fn l_values_match_mellin_integral_oracle() {
    let points = [c(0.5, 0.0), c(0.3, 4.0), c(0.75, -4.5), c(1.5, 2.0)];
    for q in [3u64, 5, 8, 12, 13] {
        for chi in enumerate_characters(q, 100).unwrap().iter().skip(1) {
            for &s in &points {
                let ours = l_value(chi, s).unwrap();
                let oracle = l_by_mellin_integral(chi, s);
                assert!(
                    (ours - oracle).norm() < 1e-9 * (1.0 + oracle.norm()),
                    "chi={} s={s}: {ours} vs {oracle}",
                    chi.label()
                );
            }
        }
    }
}

#[test]
fn pole_and_region_errors() {
    let chi0 = DirichletCharacter::principal(7).unwrap();
    assert_eq!(l_value(&chi0, c(1.0, 0.0)), Err(Error::Pole { modulus: 7 }));
    let chi = &enumerate_characters(7, 10).unwrap()[1];
    assert!(matches!(
        l_value(chi, c(-6.0, 0.0)),
        Err(Error::AccuracyUnattainable(_))
    ));
    assert!(l_value(chi, c(1.0, 0.0)).is_ok());
    // Near the pole the principal value follows phi(q)/(q (s - 1)).
    let near = l_value(&chi0, c(1.0 + 1e-7, 0.0)).unwrap().re;
    assert!((near * 1e-7 - 6.0 / 7.0).abs() < 1e-6);
}

#[test]
fn characters_mod_eight_conductors() {
    let mut conds: Vec<u64> = enumerate_characters(8, 10)
        .unwrap()
        .iter()
        .map(|c| c.conductor())
        .collect();
    conds.sort();
    assert_eq!(conds, vec![1, 4, 8, 8]);
}

#[test]
fn conductors_match_brute_force() {
    for q in 1..=120u64 {
        for chi in enumerate_characters(q, 1000).unwrap() {
            assert_eq!(chi.conductor(), brute_conductor(&chi), "{}", chi.label());
        }
    }
}

#[test]
fn enumeration_cap() {
    assert_eq!(
        enumerate_characters(101, 50).unwrap_err(),
        Error::EnumerationOverflow { count: 100, cap: 50 }
    );
}

#[test]
fn orthogonality_exact() {
    for q in [1u64, 2, 9, 16, 24, 35] {
        let chars = enumerate_characters(q, 1000).unwrap();
        assert_eq!(chars.len() as u64, totient(q));
        let l = chars[0].group().exponent();
        for a in &chars {
            for b in &chars {
                // Count how often each root of unity appears in chi_a conj(chi_b).
                let mut counts = vec![0u64; l as usize];
                for n in 1..=q {
                    if let (Some(x), Some(y)) = (a.value_index(n), b.value_index(n)) {
                        counts[((x + l - y) % l) as usize] += 1;
                    }
                }
                let sum: Complex64 = counts
                    .iter()
                    .enumerate()
                    .map(|(k, &m)| root_of_unity(k as u64, l) * m as f64)
                    .sum();
                if a == b {
                    assert_eq!(counts[0], totient(q));
                } else {
                    assert!(sum.norm() < 1e-9, "{} {}", a.label(), b.label());
                }
            }
        }
    }
}

#[test]
fn kronecker_characters_agree_with_symbol() {
    for d in critstrip_core::arith::negative_fundamental_discriminants(-400)
        .into_iter()
        .chain([5, 8, 12, 13, 21, 24, 28, 40])
    {
        let chi = DirichletCharacter::kronecker(d).unwrap();
        assert!(chi.is_primitive(), "d={d}");
        assert_eq!(chi.parity(), (d < 0) as u8);
        for n in 1..=d.unsigned_abs() {
            let k = critstrip_core::arith::kronecker(d, n as i64) as f64;
            assert_eq!(chi.value(n), c(k, 0.0), "d={d} n={n}");
        }
    }
}

#[test]
fn root_number_and_gauss_sum() {
    let chi4 = DirichletCharacter::kronecker(-4).unwrap();
    let tau = gauss_sum(&chi4).unwrap();
    assert!((tau - c(0.0, 2.0)).norm() < 1e-14);
    assert_eq!(root_number(&chi4).unwrap(), c(1.0, 0.0));
    for q in [5u64, 7, 9, 16, 13] {
        for chi in enumerate_characters(q, 100).unwrap() {
            if chi.is_primitive() {
                let tau = gauss_sum(&chi).unwrap();
                assert!((tau.norm() - (q as f64).sqrt()).abs() < 1e-12);
                assert!((root_number(&chi).unwrap().norm() - 1.0).abs() < 1e-12);
            } else {
                assert!(matches!(gauss_sum(&chi), Err(Error::Imprimitive { .. })));
            }
        }
    }
}

#[test]
fn functional_equation_examples() {
    let chi4 = DirichletCharacter::kronecker(-4).unwrap();
    let r = functional_equation_residual(&chi4, c(0.5, 0.0)).unwrap();
    assert_eq!(r.residual, 0.0);
    for s in [c(0.3, 7.0), c(0.8, -3.0), c(0.1, 20.0)] {
        assert!(functional_equation_residual(&chi4, s).unwrap().residual < 1e-10);
    }
    let chi0 = DirichletCharacter::principal(5).unwrap();
    assert!(matches!(
        functional_equation_residual(&chi0, c(0.3, 1.0)),
        Err(Error::Imprimitive { .. })
    ));
}

#[test]
fn least_nonresidue_examples() {
    let chi7 = DirichletCharacter::kronecker(-7).unwrap();
    assert_eq!(least_nonresidue(&chi7).unwrap(), 3);
    assert_eq!(least_kronecker_nonresidue(-7).unwrap(), 3);
    assert_eq!(least_kronecker_nonresidue(-23).unwrap(), 5);
    assert_eq!(
        least_nonresidue(&DirichletCharacter::principal(7).unwrap()),
        Err(Error::TrivialCharacter)
    );
}

#[test]
fn l_value_matches_long_dirichlet_series() {
    let chi = enumerate_characters(5, 10)
        .unwrap()
        .into_iter()
        .find(|c| c.order() == 4)
        .unwrap();
    let s = c(3.0, 0.0);
    let mut series = Complex64::new(0.0, 0.0);
    for n in (1..=1_000_000u64).rev() {
        series += chi.value(n) * (n as f64).powf(-3.0);
    }
    assert!((l_value(&chi, s).unwrap() - series).norm() < 1e-9);
}

#[test]
fn conductor_examples() {
    let chi4 = DirichletCharacter::kronecker(-4).unwrap();
    let cond = AnalyticConductor::of_character(&chi4);
    assert_eq!(cond.value(), 12.0);
    let tb = twist_conductor_bound(&cond, 3.0);
    assert!(tb.shifted <= tb.bound);
    assert!((tb.bound - 48.0).abs() < 1e-12);
    let tb = twist_conductor_bound(&cond, 2.0);
    assert!((tb.shifted - 4.0 * (2.0 + 5f64.sqrt())).abs() < 1e-12);
    assert!((tb.bound - 36.0).abs() < 1e-12);

    let grid = |a: f64, b: f64, n: usize| -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    };
    let g = gamma_factor_bound_check(&chi4, 0.5, &grid(-50.0, 50.0, 201)).unwrap();
    assert!((g.max_ratio - 1.0).abs() < 1e-12 && (g.min_ratio - 1.0).abs() < 1e-12);
    let short = gamma_factor_bound_check(&chi4, 0.8, &grid(0.0, 100.0, 401)).unwrap();
    let long = gamma_factor_bound_check(&chi4, 0.8, &grid(0.0, 1000.0, 4001)).unwrap();
    assert!(short.max_ratio < 2.0 && short.min_ratio > 0.05, "{short:?}");
    assert!(long.max_ratio < 1.05 * short.max_ratio, "{short:?} {long:?}");
    assert!(gamma_factor_bound_check(&chi4, 0.4, &[1.0]).is_err());

    let conv = convexity_bound_check(&chi4, 0.5, &grid(0.0, 50.0, 501), 0.05).unwrap();
    assert!(conv.max_ratio > 0.0 && conv.max_ratio < 1.0, "{conv:?}");
    let edge = convexity_bound_check(&chi4, 1.05, &grid(0.0, 50.0, 101), 0.05).unwrap();
    let zeta_bound = zeta(Complex64::new(1.05, 0.0)).unwrap().re;
    assert!(edge.max_ratio <= zeta_bound, "{edge:?}");
    assert!(convexity_bound_check(&chi4, 1.2, &[0.0], 0.05).is_err());
}

#[test]
fn convexity_family_uniformly_bounded() {
    let mut worst = 0.0f64;
    for q in 3..=60u64 {
        let chars: Vec<_> = enumerate_characters(q, 1000)
            .unwrap()
            .into_iter()
            .filter(|c| c.is_primitive())
            .collect();
        if chars.is_empty() {
            continue;
        }
        let fam = CharacterFamily::new(chars.clone()).unwrap();
        let reps = convexity_family_check(&fam, 0.5, 0.05, 0.0, 0.25, 81).unwrap();
        worst = reps.iter().map(|r| r.max_ratio).fold(worst, f64::max);
        let last = chars.len() - 1;
        let single = convexity_bound_check(&chars[last], 0.5, &[reps[last].argmax_t], 0.05).unwrap();
        assert!((single.max_ratio - reps[last].max_ratio).abs() < 1e-9);
    }
    assert!(worst < 1.5, "worst ratio {worst}");
}

#[test]
fn grid_evaluation_matches_pointwise() {
    let chars = enumerate_characters(15, 100).unwrap();
    let fam = CharacterFamily::new(chars.clone()).unwrap();
    let grid = fam.l_values_on_line(0.5, -40.0, 0.37, 220).unwrap();
    for (i, row) in grid.iter().enumerate().step_by(13) {
        let s = c(0.5, -40.0 + 0.37 * i as f64);
        for (chi, v) in chars.iter().zip(row) {
            let p = l_value(chi, s).unwrap();
            assert!((p - v).norm() < 1e-10 * (1.0 + p.norm()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn characters_are_multiplicative(q in 1u64..200, pick in 0usize..1000, m in 1u64..500, n in 1u64..500) {
        let chars = enumerate_characters(q, 1000).unwrap();
        let chi = &chars[pick % chars.len()];
        let l = chi.group().exponent();
        let lhs = chi.value_index(m * n);
        let rhs = match (chi.value_index(m), chi.value_index(n)) {
            (Some(a), Some(b)) => Some((a + b) % l),
            _ => None,
        };
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(chi.value_index(m), chi.value_index(m + q));
    }

    #[test]
    fn conjugate_inverts(q in 3u64..150, pick in 0usize..1000, n in 1u64..1000) {
        let chars = enumerate_characters(q, 1000).unwrap();
        let chi = &chars[pick % chars.len()];
        let prod = chi.value(n) * chi.conjugate().value(n);
        let expect = if gcd(n, q) == 1 { 1.0 } else { 0.0 };
        prop_assert!((prod - c(expect, 0.0)).norm() < 1e-12);
        prop_assert_eq!(chi.conjugate().conjugate(), chi.clone());
    }

    #[test]
    fn least_nonresidue_is_prime_and_minimal(q in 3u64..400, pick in 0usize..1000) {
        let chars: Vec<_> = enumerate_characters(q, 1000).unwrap().into_iter().filter(|c| !c.is_principal()).collect();
        prop_assume!(!chars.is_empty());
        let chi = &chars[pick % chars.len()];
        let beta = least_nonresidue(chi).unwrap();
        prop_assert!(critstrip_core::arith::is_prime(beta));
        let one = Complex64::new(1.0, 0.0);
        prop_assert!((chi.value(beta) - one).norm() > 1e-9);
        for n in 1..beta {
            if gcd(n, q) == 1 {
                prop_assert!((chi.value(n) - one).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn twist_bound_holds(level in 1u64..10_000, parity in 0u8..2, a in -500.0f64..500.0) {
        let cond = AnalyticConductor::new(level, vec![c(parity as f64, 0.0)]);
        let tb = twist_conductor_bound(&cond, a);
        prop_assert!(tb.shifted <= tb.bound * (1.0 + 1e-12));
    }
}
