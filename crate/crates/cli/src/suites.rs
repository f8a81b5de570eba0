use crate::config::RunConfig;
use crate::report::{Report, Value};
use critstrip_core::arith::{is_fundamental_discriminant, is_prime, negative_fundamental_discriminants};
use critstrip_core::dirichlet::{
    convexity_family_check, enumerate_characters, family_residuals, l_value, least_kronecker_nonresidue,
    AnalyticConductor, CharacterFamily, DirichletCharacter,
};
use critstrip_core::exec::{self, Execution};
use critstrip_core::gaussian::{
    i1_lower, identity_family, prop21_check, remainder_upper, tail_i5, theorem22_window,
    theorem23_shifted_window, DirichletL, LEvaluator,
};
use critstrip_core::mellin::{
    mellin_of_summation, molteni_sum, plancherel_check, CharacterStream, CoefficientStream, SummationFunction,
    ZetaStream,
};
use critstrip_core::quad::{integrate_to_infinity, QuadOptions};
use critstrip_core::quadfield::{
    chapter3_integrals, crossover_beta, genus_beta_scan, genus_characters, kappa_class_number_formula, q_and_r,
    residue_kappa, GenusStream, IdealCountTable, ImaginaryQuadraticField, DEFAULT_BETA_CAP,
};
use critstrip_core::specfun::{
    erf_paper, erfc_asymptotic, erfc_paper, gaussian_tail_i, incomplete_gamma_asymptotic, incomplete_gamma_upper,
    HALF_SQRT_PI,
};
use critstrip_core::{Complex64, Error, Result};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;
use std::sync::Arc;

/// Every suite name accepted by the command line.
pub const SUITES: &[&str] = &[
    "specfun-check",
    "fe-check",
    "convexity-scan",
    "mellin-verify",
    "plancherel-verify",
    "gaussian-identity",
    "prop21",
    "thm22-scan",
    "thm23-shift",
    "nonresidue-scan",
    "genus-beta-scan",
    "chapter3-integrals",
    "molteni-scan",
];

/// Run one suite. `None` for an unknown suite name.
pub fn build_report(name: &str, cfg: &RunConfig, exec: Execution) -> Option<Result<Report>> {
    let r = match name {
        "specfun-check" => specfun_check(cfg),
        "fe-check" => fe_check(cfg, exec),
        "convexity-scan" => convexity_scan(cfg, exec),
        "mellin-verify" => mellin_verify(cfg, exec),
        "plancherel-verify" => plancherel_verify(cfg, exec),
        "gaussian-identity" => gaussian_identity(cfg, exec),
        "prop21" => prop21(cfg, exec),
        "thm22-scan" => thm22_scan(cfg, exec),
        "thm23-shift" => thm23_shift(cfg, exec),
        "nonresidue-scan" => nonresidue_scan(cfg, exec),
        "genus-beta-scan" => genus_beta(cfg, exec),
        "chapter3-integrals" => chapter3(cfg, exec),
        "molteni-scan" => molteni_scan(cfg, exec),
        _ => return None,
    };
    Some(r.map(|mut rep| {
        rep.sort();
        rep
    }))
}

fn primitive_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(enumerate_characters(q, u64::MAX)?
        .into_iter()
        .filter(|c| c.is_primitive() && !c.is_principal())
        .collect())
}

fn nontrivial_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(enumerate_characters(q, u64::MAX)?
        .into_iter()
        .filter(|c| !c.is_principal())
        .collect())
}

/// The Legendre symbol modulo an odd prime, as the Kronecker symbol of `p*`.
pub fn legendre_character(p: u64) -> Result<DirichletCharacter> {
    let star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
    DirichletCharacter::kronecker(star)
}

fn rng_for(cfg: &RunConfig, salt: u64) -> StdRng {
    StdRng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

fn collect<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

const SPECFUN_COLUMNS: &[&str] = &["kind", "a", "x", "value", "oracle", "rel_error", "tolerance"];

fn specfun_check(cfg: &RunConfig) -> Result<Report> {
    let mut rep = Report::new("specfun-check", SPECFUN_COLUMNS);
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 4000,
    };
    let mut idx = 0i64;
    for a in [-0.5, 0.0, 1.0, 2.7] {
        for t in [0.1, 1.0, 5.0] {
            let direct = integrate_to_infinity(|u: f64| u.powf(a) * (-u * u).exp(), t, opts).value;
            let gamma = 0.5 * incomplete_gamma_upper(0.5 * (a + 1.0), t * t)?;
            let via_tail = gaussian_tail_i(a, t)?;
            let rel = ((direct - gamma).abs() / gamma).max((via_tail - gamma).abs() / gamma);
            rep.push(
                vec![0, idx],
                format!("bridge a={a} T={t}"),
                vec!["bridge".into(), a.into(), t.into(), direct.into(), gamma.into(), rel.into(), 1e-10.into()],
                rel <= 1e-10,
            );
            idx += 1;
        }
    }

    let mut rng = rng_for(cfg, 0);
    let (mut worst, mut worst_x) = (0.0f64, 0.0);
    for _ in 0..100 {
        let x: f64 = rng.gen_range(0.0..8.0);
        let e = (erf_paper(x)? + erfc_paper(x)? - HALF_SQRT_PI).abs();
        if e >= worst {
            worst = e;
            worst_x = x;
        }
    }
    rep.push(
        vec![1, 0],
        "erf+erfc random",
        vec![
            "erf-sum".into(),
            Value::Missing,
            worst_x.into(),
            (erf_paper(worst_x)? + erfc_paper(worst_x)?).into(),
            HALF_SQRT_PI.into(),
            (worst / HALF_SQRT_PI).into(),
            1e-12.into(),
        ],
        worst <= 1e-12,
    );

    for (i, x) in [2.0, 3.0, 5.0, 10.0].into_iter().enumerate() {
        let est = erfc_asymptotic(x)?;
        let exact = erfc_paper(x)?;
        let rel = (est.value - exact).abs() / exact;
        rep.push(
            vec![2, i as i64],
            format!("erfc asymptotic x={x}"),
            vec![
                "erfc-asymptotic".into(),
                Value::Missing,
                x.into(),
                est.value.into(),
                exact.into(),
                rel.into(),
                est.relative_error_bound.into(),
            ],
            rel <= est.relative_error_bound,
        );
    }
    for (i, (a, x)) in [(0.5, 4.0), (1.5, 9.0), (-0.5, 16.0), (2.0, 25.0)].into_iter().enumerate() {
        let est = incomplete_gamma_asymptotic(a, x)?;
        let exact = incomplete_gamma_upper(a, x)?;
        let rel = (est.value - exact).abs() / exact;
        rep.push(
            vec![3, i as i64],
            format!("gamma asymptotic a={a} x={x}"),
            vec![
                "gamma-asymptotic".into(),
                a.into(),
                x.into(),
                est.value.into(),
                exact.into(),
                rel.into(),
                est.relative_error_bound.into(),
            ],
            rel <= est.relative_error_bound,
        );
    }
    Ok(rep)
}

const FE_COLUMNS: &[&str] = &["q", "character", "points", "max_residual", "max_relative", "tolerance"];

/// Random points `sigma + it` with `0 < sigma < 1`, `|t| <= 20`.
pub fn strip_points(rng: &mut StdRng, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|_| Complex64::new(rng.gen_range(0.01..0.99), rng.gen_range(-20.0..20.0)))
        .collect()
}

fn fe_check(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(100);
    let moduli: Vec<u64> = (3..=q_max).collect();
    let per_q = exec::map(exec, &moduli, |&q| -> Result<Vec<(DirichletCharacter, f64, f64)>> {
        let chars = primitive_characters(q)?;
        if chars.is_empty() {
            return Ok(Vec::new());
        }
        let points = strip_points(&mut rng_for(cfg, q), 20);
        let fam = CharacterFamily::new(chars.clone())?;
        let res = family_residuals(&fam, &points)?;
        Ok(chars
            .into_iter()
            .zip(res)
            .map(|(chi, row)| {
                let abs = row.iter().map(|r| r.residual).fold(0.0, f64::max);
                let rel = row.iter().map(|r| r.residual / r.magnitude.max(1.0)).fold(0.0, f64::max);
                (chi, abs, rel)
            })
            .collect())
    });
    let mut rep = Report::new("fe-check", FE_COLUMNS);
    for (i, rows) in collect(per_q)?.into_iter().enumerate() {
        for (j, (chi, abs, rel)) in rows.into_iter().enumerate() {
            rep.push(
                vec![moduli[i] as i64, j as i64],
                chi.label(),
                vec![moduli[i].into(), chi.label().into(), 20usize.into(), abs.into(), rel.into(), cfg.fe_tol.into()],
                rel < cfg.fe_tol,
            );
        }
    }
    Ok(rep)
}

const CONVEXITY_COLUMNS: &[&str] = &["q", "character", "sigma", "max_ratio", "argmax_t", "K"];

fn convexity_scan(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(30);
    let moduli: Vec<u64> = (3..=q_max).collect();
    let h = 0.25;
    let count = (2.0 * cfg.t_max / h).round() as usize + 1;
    let sigmas = [0.0, 0.5, 1.0];
    let per_q = exec::map(exec, &moduli, |&q| -> Result<Vec<(String, f64, f64, f64)>> {
        let chars = primitive_characters(q)?;
        if chars.is_empty() {
            return Ok(Vec::new());
        }
        let fam = CharacterFamily::new(chars.clone())?;
        let mut out = Vec::new();
        for sigma in sigmas {
            let reps = convexity_family_check(&fam, sigma, cfg.params.eps, -cfg.t_max, h, count)?;
            for (chi, r) in chars.iter().zip(reps) {
                out.push((chi.label(), sigma, r.max_ratio, r.argmax_t));
            }
        }
        Ok(out)
    });
    let mut rep = Report::new("convexity-scan", CONVEXITY_COLUMNS);
    for (i, rows) in collect(per_q)?.into_iter().enumerate() {
        let q = moduli[i];
        for (j, (label, sigma, ratio, t)) in rows.into_iter().enumerate() {
            rep.push(
                vec![q as i64, j as i64],
                format!("{label} sigma={sigma}"),
                vec![q.into(), label.into(), sigma.into(), ratio.into(), t.into(), cfg.k.into()],
                ratio <= cfg.k,
            );
        }
    }
    Ok(rep)
}

const MELLIN_COLUMNS: &[&str] = &["q", "character", "re_s", "im_s", "difference", "truncation_bound", "slack"];

fn mellin_verify(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(50);
    let mut rep = Report::new("mellin-verify", MELLIN_COLUMNS);

    let zeta_cutoff = 100_000;
    let s_fn = SummationFunction::new(Arc::new(ZetaStream), zeta_cutoff);
    let m = mellin_of_summation(&s_fn, Complex64::new(2.0, 0.0), zeta_cutoff)?;
    let diff = (m.value - PI * PI / 12.0).norm();
    rep.push(
        vec![0, 0],
        "zeta s=2",
        vec![1u64.into(), "zeta".into(), 2.0.into(), 0.0.into(), diff.into(), m.truncation_bound.into(), 0.0.into()],
        diff <= m.truncation_bound,
    );

    let moduli: Vec<u64> = (3..=q_max).collect();
    let per_q = exec::map(exec, &moduli, |&q| -> Result<Vec<(String, Complex64, f64, f64)>> {
        let chars = nontrivial_characters(q)?;
        let points: Vec<Complex64> = {
            let mut rng = rng_for(cfg, q);
            (0..10)
                .map(|_| Complex64::new(rng.gen_range(0.3..2.0), rng.gen_range(-5.0..5.0)))
                .collect()
        };
        let cutoff = (4096 / q).max(64) * q;
        let mut out = Vec::new();
        for chi in chars {
            let s_fn = SummationFunction::new(Arc::new(CharacterStream::new(chi.clone())), cutoff);
            // Report the point where the difference comes closest to the bound.
            let mut worst = (points[0], f64::NEG_INFINITY, 0.0);
            for &s in &points {
                let m = mellin_of_summation(&s_fn, s, cutoff)?;
                let diff = (m.value - l_value(&chi, s)? / s).norm();
                if diff - m.truncation_bound > worst.1 - worst.2 {
                    worst = (s, diff, m.truncation_bound);
                }
            }
            let (s, diff, bound) = worst;
            out.push((chi.label(), s, diff, bound));
        }
        Ok(out)
    });
    for (i, rows) in collect(per_q)?.into_iter().enumerate() {
        let q = moduli[i];
        for (j, (label, s, diff, bound)) in rows.into_iter().enumerate() {
            rep.push(
                vec![q as i64, j as i64 + 1],
                label.clone(),
                vec![
                    q.into(),
                    label.into(),
                    s.re.into(),
                    s.im.into(),
                    diff.into(),
                    bound.into(),
                    cfg.mellin_tol.into(),
                ],
                diff <= bound + cfg.mellin_tol,
            );
        }
    }
    Ok(rep)
}

const PLANCHEREL_COLUMNS: &[&str] = &["q", "character", "nu", "lhs", "rhs", "difference", "combined_error"];

fn plancherel_verify(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(13);
    let mut chars = Vec::new();
    for q in 3..=q_max {
        chars.extend(primitive_characters(q)?);
    }
    chars.truncate(10);
    let nus = [0.6, 0.75, 1.2];
    let t_max = cfg.t_max.max(16.0);
    let rows = exec::map(exec, &chars, |chi| -> Result<Vec<_>> {
        let s_fn = SummationFunction::new(Arc::new(CharacterStream::new(chi.clone())), 1 << 16);
        nus.iter()
            .map(|&nu| plancherel_check(&s_fn, nu, t_max).map(|r| (chi.clone(), r)))
            .collect()
    });
    let mut rep = Report::new("plancherel-verify", PLANCHEREL_COLUMNS);
    for (i, rows) in collect(rows)?.into_iter().enumerate() {
        for (j, (chi, r)) in rows.into_iter().enumerate() {
            rep.push(
                vec![chi.modulus() as i64, i as i64, j as i64],
                format!("{} nu={}", chi.label(), r.nu),
                vec![
                    chi.modulus().into(),
                    chi.label().into(),
                    r.nu.into(),
                    r.lhs.into(),
                    r.rhs.into(),
                    r.difference().into(),
                    r.combined_error().into(),
                ],
                r.passes(),
            );
        }
    }
    Ok(rep)
}

const IDENTITY_COLUMNS: &[&str] = &[
    "q",
    "character",
    "alpha",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "relative_difference",
    "sigma_spread",
    "sigma_tolerance",
];

fn gaussian_identity(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(30);
    let moduli: Vec<u64> = (3..=q_max).collect();
    let alphas = [0.02, 0.05, 0.1];
    let per_q = exec::map(exec, &moduli, |&q| -> Result<Vec<_>> {
        let chars = primitive_characters(q)?;
        if chars.is_empty() {
            return Ok(Vec::new());
        }
        let fam = CharacterFamily::new(chars.clone())?;
        let mut out = Vec::new();
        for alpha in alphas {
            let base = identity_family(&fam, alpha, 0.5)?;
            let moved: Vec<_> = [0.8, 1.2, 1.5]
                .iter()
                .map(|&sigma| identity_family(&fam, alpha, sigma))
                .collect::<Result<_>>()?;
            for (k, (chi, row)) in chars.iter().zip(&base).enumerate() {
                let mut spread = 0.0f64;
                let mut tol = 0.0f64;
                for m in &moved {
                    spread = spread.max((m[k].lhs.value - row.lhs.value).norm());
                    tol = tol.max(m[k].lhs.error() + row.lhs.error() + 1e-12);
                }
                out.push((chi.label(), *row, spread, tol));
            }
        }
        Ok(out)
    });
    let mut rep = Report::new("gaussian-identity", IDENTITY_COLUMNS);
    for (i, rows) in collect(per_q)?.into_iter().enumerate() {
        let q = moduli[i];
        for (j, (label, row, spread, tol)) in rows.into_iter().enumerate() {
            let rel = row.relative_difference();
            rep.push(
                vec![q as i64, j as i64],
                format!("{label} alpha={}", row.alpha),
                vec![
                    q.into(),
                    label.into(),
                    row.alpha.into(),
                    row.lhs.value.re.into(),
                    row.lhs.value.im.into(),
                    row.rhs.value.re.into(),
                    row.rhs.value.im.into(),
                    rel.into(),
                    spread.into(),
                    tol.into(),
                ],
                rel <= cfg.identity_tol && spread <= tol,
            );
        }
    }
    Ok(rep)
}

const PROP21_COLUMNS: &[&str] = &[
    "q", "parity", "conductor", "alpha", "i1", "remainder", "margin", "value", "value_error", "c",
];

/// Moduli up to this bound also get the direct probe value.
pub const PROP21_DIRECT_MAX: u64 = 12;

fn prop21(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(10_000);
    let params = cfg.params;
    params.validate()?;
    let mut rep = Report::new("prop21", PROP21_COLUMNS);
    let moduli: Vec<u64> = (3..=q_max).collect();
    let bounds = exec::map(exec, &moduli, |&q| -> Result<[(f64, f64, f64, f64); 2]> {
        let mut out = [(0.0, 0.0, 0.0, 0.0); 2];
        for (parity, slot) in out.iter_mut().enumerate() {
            let c = AnalyticConductor::new(q, vec![Complex64::new(parity as f64, 0.0)]).value();
            let probe = params.probe(c)?;
            *slot = (c, probe.alpha(), i1_lower(&probe), remainder_upper(&probe, c, params.eps, 0.0, params.eps));
        }
        Ok(out)
    });
    for (q, pair) in moduli.iter().zip(collect(bounds)?) {
        for (parity, (c, alpha, i1, rem)) in pair.into_iter().enumerate() {
            let name = if parity == 0 { "even" } else { "odd" };
            rep.push(
                vec![*q as i64, parity as i64, -1],
                format!("q={q} {name}"),
                vec![
                    (*q).into(),
                    name.into(),
                    c.into(),
                    alpha.into(),
                    i1.into(),
                    rem.into(),
                    (i1 - rem).into(),
                    Value::Missing,
                    Value::Missing,
                    params.c.into(),
                ],
                i1 - rem > 0.0,
            );
        }
    }

    let mut chars = Vec::new();
    for q in 3..=q_max.min(PROP21_DIRECT_MAX) {
        chars.extend(primitive_characters(q)?);
    }
    let direct = exec::map(exec, &chars, |chi| prop21_check(chi, &params));
    for (j, (chi, r)) in chars.iter().zip(collect(direct)?).enumerate() {
        let parity = chi.parity();
        rep.push(
            vec![chi.modulus() as i64, parity as i64, j as i64],
            chi.label(),
            vec![
                chi.modulus().into(),
                (if parity == 0 { "even" } else { "odd" }).into(),
                r.conductor.into(),
                r.alpha.into(),
                r.i1.into(),
                r.remainder.into(),
                (r.i1 - r.remainder).into(),
                r.value.into(),
                r.error.into(),
                params.c.into(),
            ],
            r.passes && r.i1 > r.remainder,
        );
    }
    Ok(rep)
}

const THM22_COLUMNS: &[&str] = &[
    "q",
    "log_conductor",
    "half_width",
    "sup_value",
    "sup_bound",
    "l2_value",
    "l2_bound",
    "l2_scaled",
    "tail_direct",
    "tail_bound",
    "half_c",
];

/// One Legendre-character window: the report row values and pass flag.
pub fn thm22_row(q: u64, cfg: &RunConfig) -> Result<(Vec<Value>, bool, f64)> {
    let chi = legendre_character(q)?;
    let params = cfg.params;
    let w = theorem22_window(&chi, &params)?;
    let ev = DirichletL::new(&chi)?;
    let cond = ev.conductor().value();
    let probe = params.probe(cond)?;
    let tail = tail_i5(&ev, params.half_width(cond)?, &probe, params.eps)?;
    let scaled = w.l2_value * w.log_conductor.sqrt();
    let pass = w.sup_passes() && w.l2_passes() && tail.direct <= params.c / 2.0;
    Ok((
        vec![
            q.into(),
            w.log_conductor.into(),
            w.half_width.into(),
            w.sup_value.into(),
            w.bound.into(),
            w.l2_value.into(),
            w.l2_bound.into(),
            scaled.into(),
            tail.direct.into(),
            tail.bound.into(),
            (params.c / 2.0).into(),
        ],
        pass,
        scaled,
    ))
}

fn thm22_scan(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(200);
    let primes: Vec<u64> = (3..=q_max).filter(|&q| is_prime(q)).collect();
    let rows = exec::map(exec, &primes, |&q| thm22_row(q, cfg));
    let mut rep = Report::new("thm22-scan", THM22_COLUMNS);
    for (q, (values, pass, _)) in primes.iter().zip(collect(rows)?) {
        rep.push(vec![*q as i64], format!("q={q}"), values, pass);
    }
    Ok(rep)
}

const THM23_COLUMNS: &[&str] = &["q", "shift", "log_conductor", "sup_value", "sup_bound", "l2_value", "l2_bound"];

fn thm23_shift(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(30);
    let shifts = [10.0, 100.0, 1000.0];
    let jobs: Vec<(u64, f64)> = (3..=q_max)
        .filter(|&q| is_prime(q))
        .flat_map(|q| shifts.iter().map(move |&x| (q, x)))
        .collect();
    let rows = exec::map(exec, &jobs, |&(q, x)| theorem23_shifted_window(&legendre_character(q)?, x, &cfg.params));
    let mut rep = Report::new("thm23-shift", THM23_COLUMNS);
    for ((q, x), w) in jobs.iter().zip(collect(rows)?) {
        rep.push(
            vec![*q as i64, *x as i64],
            format!("q={q} X={x}"),
            vec![
                (*q).into(),
                (*x).into(),
                w.log_conductor.into(),
                w.sup_value.into(),
                w.bound.into(),
                w.l2_value.into(),
                w.l2_bound.into(),
            ],
            w.sup_passes() && w.l2_passes(),
        );
    }
    Ok(rep)
}

const NONRESIDUE_COLUMNS: &[&str] = &["d", "q", "beta", "ratio", "bound"];

/// Exponent the nonresidue ratio is compared against.
pub const NONRESIDUE_EXPONENT: f64 = 1.0 / 3.0;

/// Fundamental discriminants with `3 <= |d| <= q_max`, ordered by `|d|` then sign.
pub fn quadratic_moduli(q_max: u64) -> Vec<i64> {
    (3..=q_max as i64)
        .flat_map(|m| [-m, m])
        .filter(|&d| is_fundamental_discriminant(d))
        .collect()
}

fn nonresidue_scan(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(100_000);
    let discs = quadratic_moduli(q_max);
    let betas = exec::map(exec, &discs, |&d| least_kronecker_nonresidue(d));
    let mut rep = Report::new("nonresidue-scan", NONRESIDUE_COLUMNS);
    for (d, beta) in discs.iter().zip(collect(betas)?) {
        let q = d.unsigned_abs();
        let ratio = (beta as f64).ln() / (q as f64).ln();
        rep.push(
            vec![q as i64, *d],
            format!("d={d}"),
            vec![(*d).into(), q.into(), beta.into(), ratio.into(), NONRESIDUE_EXPONENT.into()],
            ratio < NONRESIDUE_EXPONENT,
        );
    }
    Ok(rep)
}

const GENUS_COLUMNS: &[&str] = &["disc", "d1", "d2", "class_number", "beta", "ratio", "bound", "partial_sum_gap"];

/// `2/3` plus the fixed slack.
pub const GENUS_EXPONENT_BOUND: f64 = 2.0 / 3.0 + 0.1;

fn genus_beta(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let disc_min = cfg.disc_min_or(-10_000);
    let rows = genus_beta_scan(disc_min, DEFAULT_BETA_CAP, exec)?;
    let mut rep = Report::new("genus-beta-scan", GENUS_COLUMNS);
    for r in rows {
        rep.push(
            vec![r.disc.abs(), r.d1],
            format!("{}={}*{}", r.disc, r.d1, r.d2),
            vec![
                r.disc.into(),
                r.d1.into(),
                r.d2.into(),
                r.class_number.into(),
                r.beta.into(),
                r.exponent_ratio.into(),
                GENUS_EXPONENT_BOUND.into(),
                r.partial_sums.min_gap.into(),
            ],
            r.exponent_ratio < GENUS_EXPONENT_BOUND && r.partial_sums.holds(),
        );
    }
    Ok(rep)
}

const CHAPTER3_COLUMNS: &[&str] = &[
    "disc",
    "class_number",
    "q",
    "r",
    "kappa",
    "kappa_formula",
    "i1",
    "i2_bound",
    "i3_bound",
    "crossover",
    "crossover_ratio",
    "sieve_exact",
];

/// `nu` used for the integral comparison.
pub const CHAPTER3_NU: f64 = 0.75;

fn chapter3(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let disc_min = cfg.disc_min_or(-2000);
    let discs = negative_fundamental_discriminants(disc_min);
    let eps = cfg.params.eps;
    let x_max = cfg.x_max;
    let rows = exec::map(exec, &discs, |&d| -> Result<(Vec<Value>, bool)> {
        let field = ImaginaryQuadraticField::new(d)?;
        let qr = q_and_r(&field, 1.0 / 3.0)?;
        let kappa = residue_kappa(&field)?;
        let formula = kappa_class_number_formula(&field);
        let big_d = field.abs_discriminant() as f64;
        let ints = chapter3_integrals(&field, CHAPTER3_NU, big_d.max(2.0), eps)?;
        let cross = crossover_beta(&field, CHAPTER3_NU, eps, 1e300)?;
        let table = IdealCountTable::new(&field, x_max)?;
        let mut exact = true;
        for x in 0..=x_max {
            let x = x as f64;
            exact &= table.sieved_direct(x)? == table.sieved_inclusion_exclusion(x)?;
        }
        let pass = (kappa - formula).abs() <= cfg.kappa_tol && exact;
        Ok((
            vec![
                d.into(),
                field.class_number().into(),
                qr.q.into(),
                qr.r.into(),
                kappa.into(),
                formula.into(),
                ints.i1.into(),
                ints.i2_bound.into(),
                ints.i3_bound.into(),
                cross.into(),
                cross.map(|b| b.ln() / big_d.ln()).into(),
                exact.into(),
            ],
            pass,
        ))
    });
    let mut rep = Report::new("chapter3-integrals", CHAPTER3_COLUMNS);
    for (d, (values, pass)) in discs.iter().zip(collect(rows)?) {
        rep.push(vec![d.abs()], format!("disc={d}"), values, pass);
    }
    Ok(rep)
}

const MOLTENI_COLUMNS: &[&str] = &["stream", "conductor", "x", "sum", "ratio", "K"];

fn molteni_scan(cfg: &RunConfig, exec: Execution) -> Result<Report> {
    let q_max = cfg.q_max_or(30);
    let disc_min = cfg.disc_min_or(-200);
    let mut streams: Vec<(Vec<i64>, Arc<dyn CoefficientStream>)> = Vec::new();
    for q in 3..=q_max {
        for (j, chi) in primitive_characters(q)?.into_iter().enumerate() {
            streams.push((vec![0, q as i64, j as i64], Arc::new(CharacterStream::new(chi))));
        }
    }
    for d in negative_fundamental_discriminants(disc_min) {
        let field = ImaginaryQuadraticField::new(d)?;
        for chi in genus_characters(&field) {
            streams.push((vec![1, d.abs(), chi.d1()], Arc::new(GenusStream::new(chi))));
        }
    }
    let xs: Vec<u64> = [100u64, 1_000, 10_000].into_iter().filter(|&x| x <= cfg.x_max).collect();
    let eps = cfg.params.eps;
    let rows = exec::map(exec, &streams, |(_, st)| {
        xs.iter()
            .map(|&x| {
                let sum = molteni_sum(st.as_ref(), x);
                let c = st.analytic_conductor();
                (x, c, sum, sum / (c.powf(eps) * (x as f64).powf(1.0 + eps)))
            })
            .collect::<Vec<_>>()
    });
    let mut rep = Report::new("molteni-scan", MOLTENI_COLUMNS);
    for ((key, st), row) in streams.iter().zip(rows) {
        for (x, c, sum, ratio) in row {
            let mut k = key.clone();
            k.push(x as i64);
            rep.push(
                k,
                format!("{} x={x}", st.label()),
                vec![st.label().into(), c.into(), x.into(), sum.into(), ratio.into(), cfg.k.into()],
                ratio <= cfg.k,
            );
        }
    }
    Ok(rep)
}

/// Minimum of `l2_value (log C)^{1/2}` over the Legendre characters of the
/// primes in `[3, q_max]`, with the prime attaining it.
pub fn thm22_min_scaled(q_max: u64, cfg: &RunConfig, exec: Execution) -> Result<(u64, f64)> {
    let primes: Vec<u64> = (3..=q_max).filter(|&q| is_prime(q)).collect();
    let rows = collect(exec::map(exec, &primes, |&q| thm22_row(q, cfg)))?;
    Ok(primes
        .iter()
        .zip(rows)
        .map(|(&q, (_, _, s))| (q, s))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Domain("no primes in range".into()))?)
}
