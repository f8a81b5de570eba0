//! Coefficient streams, their summatory functions, and the Mellin identity
//! `int_1^inf A0(x) x^{-s-1} dx = L(s) / s`.
//!
//! A stream declares an explicit growth claim
//! `|A0(x)| <= K C^xi x^nu`, which is what every truncation bound below rests
//! on. Streams whose summatory function is periodic get a sharper treatment:
//! the tail beyond the cutoff is integrated against the period mean and its
//! first antiderivative, leaving a remainder controlled by the second.

use crate::dirichlet::{l_value, zeta, AnalyticConductor, DirichletCharacter};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_breaks, QuadOptions, QuadResult};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `|A0(x)| <= constant * C^xi * x^nu` for all `x >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthClaim {
    pub constant: f64,
    pub xi: f64,
    pub nu: f64,
}

impl GrowthClaim {
    pub fn bound(&self, conductor: f64, x: f64) -> f64 {
        self.constant * conductor.powf(self.xi) * x.powf(self.nu)
    }
}

pub trait CoefficientStream: Send + Sync {
    fn label(&self) -> String;
    fn degree(&self) -> u32;
    fn analytic_conductor(&self) -> f64;
    fn coefficient(&self, n: u64) -> Complex64;
    /// Exact integer coefficient, when the stream has one.
    fn integer_coefficient(&self, _n: u64) -> Option<i64> {
        None
    }
    fn growth(&self) -> GrowthClaim;
    /// `p` with `A0(n + p) = A0(n)` for all `n >= 1`.
    fn period(&self) -> Option<u64> {
        None
    }
    /// The Dirichlet series `sum a_n n^{-s}`, continued where available.
    fn l_function(&self, _s: Complex64) -> Result<Complex64> {
        Err(Error::Domain(format!("{} has no L-evaluator", self.label())))
    }
}

/// `a_n = 1`: the Riemann zeta function.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZetaStream;

impl CoefficientStream for ZetaStream {
    fn label(&self) -> String {
        "zeta".into()
    }
    fn degree(&self) -> u32 {
        1
    }
    fn analytic_conductor(&self) -> f64 {
        2.0
    }
    fn coefficient(&self, _n: u64) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn integer_coefficient(&self, _n: u64) -> Option<i64> {
        Some(1)
    }
    fn growth(&self) -> GrowthClaim {
        GrowthClaim {
            constant: 1.0,
            xi: 0.0,
            nu: 1.0,
        }
    }
    fn l_function(&self, s: Complex64) -> Result<Complex64> {
        zeta(s)
    }
}

/// All coefficients zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroStream;

impl CoefficientStream for ZeroStream {
    fn label(&self) -> String {
        "zero".into()
    }
    fn degree(&self) -> u32 {
        1
    }
    fn analytic_conductor(&self) -> f64 {
        2.0
    }
    fn coefficient(&self, _n: u64) -> Complex64 {
        ZERO
    }
    fn integer_coefficient(&self, _n: u64) -> Option<i64> {
        Some(0)
    }
    fn growth(&self) -> GrowthClaim {
        GrowthClaim {
            constant: 0.0,
            xi: 0.0,
            nu: 0.0,
        }
    }
    fn period(&self) -> Option<u64> {
        Some(1)
    }
    fn l_function(&self, _s: Complex64) -> Result<Complex64> {
        Ok(ZERO)
    }
}

/// `a_1 = 1`, all other coefficients zero, so `A0 = 1` on `[1, inf)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitStream;

impl CoefficientStream for UnitStream {
    fn label(&self) -> String {
        "unit".into()
    }
    fn degree(&self) -> u32 {
        1
    }
    fn analytic_conductor(&self) -> f64 {
        2.0
    }
    fn coefficient(&self, n: u64) -> Complex64 {
        Complex64::new((n == 1) as u8 as f64, 0.0)
    }
    fn integer_coefficient(&self, n: u64) -> Option<i64> {
        Some((n == 1) as i64)
    }
    fn growth(&self) -> GrowthClaim {
        GrowthClaim {
            constant: 1.0,
            xi: 0.0,
            nu: 0.0,
        }
    }
    fn period(&self) -> Option<u64> {
        Some(1)
    }
    fn l_function(&self, _s: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0))
    }
}

/// `a_n = chi(n)`.
#[derive(Debug, Clone)]
pub struct CharacterStream {
    chi: DirichletCharacter,
    values: Vec<Complex64>,
}

impl CharacterStream {
    pub fn new(chi: DirichletCharacter) -> Self {
        let values = chi.values();
        Self { chi, values }
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }
}

impl CoefficientStream for CharacterStream {
    fn label(&self) -> String {
        format!("chi {}", self.chi.label())
    }
    fn degree(&self) -> u32 {
        1
    }
    fn analytic_conductor(&self) -> f64 {
        AnalyticConductor::of_character(&self.chi).value()
    }
    fn coefficient(&self, n: u64) -> Complex64 {
        self.values[(n % self.chi.modulus()) as usize]
    }
    fn integer_coefficient(&self, n: u64) -> Option<i64> {
        if self.chi.is_real() {
            Some(self.coefficient(n).re as i64)
        } else {
            None
        }
    }
    fn growth(&self) -> GrowthClaim {
        if self.chi.is_principal() {
            GrowthClaim {
                constant: 1.0,
                xi: 0.0,
                nu: 1.0,
            }
        } else {
            GrowthClaim {
                constant: (self.chi.group().order() as f64 / 2.0).max(1.0),
                xi: 0.0,
                nu: 0.0,
            }
        }
    }
    fn period(&self) -> Option<u64> {
        (!self.chi.is_principal()).then(|| self.chi.modulus())
    }
    fn l_function(&self, s: Complex64) -> Result<Complex64> {
        l_value(&self.chi, s)
    }
}

/// `a_n n^{-sigma0}`, whose L-function is `L(s + sigma0)`.
#[derive(Clone)]
pub struct ScaledStream {
    inner: Arc<dyn CoefficientStream>,
    sigma0: f64,
}

impl ScaledStream {
    pub fn new(inner: Arc<dyn CoefficientStream>, sigma0: f64) -> Self {
        Self { inner, sigma0 }
    }
}

impl CoefficientStream for ScaledStream {
    fn label(&self) -> String {
        format!("{} shifted by {}", self.inner.label(), self.sigma0)
    }
    fn degree(&self) -> u32 {
        self.inner.degree()
    }
    fn analytic_conductor(&self) -> f64 {
        self.inner.analytic_conductor()
    }
    fn coefficient(&self, n: u64) -> Complex64 {
        self.inner.coefficient(n) * (n as f64).powf(-self.sigma0)
    }
    fn growth(&self) -> GrowthClaim {
        // Partial summation against x^{-sigma0}.
        let g = self.inner.growth();
        let s0 = self.sigma0;
        if s0 == 0.0 {
            g
        } else if g.nu > s0 {
            GrowthClaim {
                constant: g.constant * g.nu / (g.nu - s0),
                xi: g.xi,
                nu: g.nu - s0,
            }
        } else if g.nu < s0 {
            GrowthClaim {
                constant: g.constant * (1.0 + s0.abs() / (s0 - g.nu)),
                xi: g.xi,
                nu: 0.0,
            }
        } else {
            GrowthClaim {
                constant: g.constant * (1.0 + s0.abs() / 0.01),
                xi: g.xi,
                nu: 0.01,
            }
        }
    }
    fn l_function(&self, s: Complex64) -> Result<Complex64> {
        self.inner.l_function(s + self.sigma0)
    }
}

#[derive(Debug, Clone)]
enum Prefix {
    Integer(Vec<i64>),
    Complex(Vec<Complex64>),
}

/// Cached `A0(x) = sum_{n <= x} a_n` for `x <= x_max`.
#[derive(Clone)]
pub struct SummationFunction {
    stream: Arc<dyn CoefficientStream>,
    prefix: Prefix,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl SummationFunction {
    pub fn new(stream: Arc<dyn CoefficientStream>, x_max: u64) -> Self {
        let prefix = if stream.integer_coefficient(1).is_some() {
            let mut v = Vec::with_capacity(x_max as usize + 1);
            let mut acc = 0i64;
            v.push(0);
            for n in 1..=x_max {
                acc += stream.integer_coefficient(n).expect("integer stream");
                v.push(acc);
            }
            Prefix::Integer(v)
        } else {
            let mut v = Vec::with_capacity(x_max as usize + 1);
            let (mut re, mut im) = (Compensated::default(), Compensated::default());
            v.push(ZERO);
            for n in 1..=x_max {
                let a = stream.coefficient(n);
                re.add(a.re);
                im.add(a.im);
                v.push(Complex64::new(re.value(), im.value()));
            }
            Prefix::Complex(v)
        };
        Self { stream, prefix }
    }

    pub fn stream(&self) -> &Arc<dyn CoefficientStream> {
        &self.stream
    }

    pub fn x_max(&self) -> u64 {
        match &self.prefix {
            Prefix::Integer(v) => v.len() as u64 - 1,
            Prefix::Complex(v) => v.len() as u64 - 1,
        }
    }

    /// `A0(n)` for an integer `n <= x_max`.
    pub fn at(&self, n: u64) -> Complex64 {
        match &self.prefix {
            Prefix::Integer(v) => Complex64::new(v[n as usize] as f64, 0.0),
            Prefix::Complex(v) => v[n as usize],
        }
    }

    /// Exact `A0(n)` for integer streams.
    pub fn integer_at(&self, n: u64) -> Option<i64> {
        match &self.prefix {
            Prefix::Integer(v) => Some(v[n as usize]),
            Prefix::Complex(_) => None,
        }
    }

    /// `A0(x)`; zero below 1.
    pub fn value(&self, x: f64) -> Result<Complex64> {
        if x.is_nan() {
            return Err(Error::Domain("x is NaN".into()));
        }
        if x < 1.0 {
            return Ok(ZERO);
        }
        let max = self.x_max();
        if x >= (max + 1) as f64 {
            return Err(Error::Range {
                x,
                max: max as f64,
            });
        }
        Ok(self.at(x.floor() as u64))
    }
}

/// Mean, first-moment and remainder data for a step function that repeats
/// with period `p`: `f(x) = f_r` on `[k p + r, k p + r + 1)`.
#[derive(Debug, Clone, Copy)]
struct PeriodicTail {
    mu: Complex64,
    mu1: Complex64,
    sup_p2: f64,
}

impl PeriodicTail {
    fn new(f: &[Complex64]) -> Self {
        let p = f.len() as f64;
        let mu = f.iter().sum::<Complex64>() / p;
        let mut p1 = ZERO;
        let mut mu1 = ZERO;
        let mut p1_at = Vec::with_capacity(f.len());
        for &fr in f {
            p1_at.push(p1);
            mu1 += p1 + (fr - mu) * 0.5;
            p1 += fr - mu;
        }
        mu1 /= p;
        let mut p2 = ZERO;
        let mut sup_p2: f64 = 0.0;
        for (r, &fr) in f.iter().enumerate() {
            let local = p2.norm() + (p1_at[r] - mu1).norm() + 0.5 * (fr - mu).norm();
            sup_p2 = sup_p2.max(local);
            p2 += p1_at[r] + (fr - mu) * 0.5 - mu1;
        }
        Self { mu, mu1, sup_p2 }
    }

    /// `int_B^inf f(x) x^{-s-1} dx` as `(value, remainder bound)`; `B` a
    /// multiple of the period.
    fn integral(&self, s: Complex64, b: f64) -> (Complex64, f64) {
        let bs = (-s * b.ln()).exp();
        let value = self.mu * bs / s + self.mu1 * bs / b;
        let sigma = s.re;
        let bound = (s + 1.0).norm() * (s + 2.0).norm() * self.sup_p2 * b.powf(-sigma - 2.0)
            / (sigma + 2.0);
        (value, bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    pub value: Complex64,
    /// Rigorous bound on the part of the integral not captured in `value`.
    pub truncation_bound: f64,
    /// The cutoff actually used.
    pub cutoff: u64,
}

/// `n^{-s} - (n+1)^{-s}` without cancellation.
fn step_difference(s: Complex64, n: u64) -> Complex64 {
    let ln = (n as f64).ln();
    let d = -s * (1.0 / n as f64).ln_1p();
    let (sn, cs) = d.im.sin_cos();
    let half = (0.5 * d.im).sin();
    let expm1 = Complex64::new(d.re.exp_m1() * cs - 2.0 * half * half, d.re.exp() * sn);
    -(-s * ln).exp() * expm1
}

fn effective_cutoff(s_fn: &SummationFunction, cutoff: u64) -> Result<u64> {
    if cutoff > s_fn.x_max() {
        return Err(Error::Range {
            x: cutoff as f64,
            max: s_fn.x_max() as f64,
        });
    }
    let b = match s_fn.stream().period() {
        Some(p) => cutoff / p * p,
        None => cutoff,
    };
    if b < 2 {
        return Err(Error::Domain(format!("cutoff {cutoff} too small")));
    }
    Ok(b)
}

fn period_values(s_fn: &SummationFunction, p: u64) -> Vec<Complex64> {
    (0..p).map(|r| s_fn.at(p + r)).collect()
}

/// `int_1^inf A0(x) x^{-s-1} dx`, integrated exactly on each `[n, n+1)` up
/// to the cutoff `B` (the `e^{X_max}` of the integral in log scale).
pub fn mellin_of_summation(s_fn: &SummationFunction, s: Complex64, cutoff: u64) -> Result<MellinValue> {
    if s == ZERO {
        return Err(Error::Domain("s = 0".into()));
    }
    let stream = s_fn.stream();
    let growth = stream.growth();
    let periodic = stream.period().filter(|&p| p <= s_fn.x_max() / 2);
    let sigma = s.re;
    match periodic {
        Some(_) if sigma <= 0.0 => {
            return Err(Error::Convergence(format!("Re s = {sigma} must be > 0")))
        }
        None if sigma <= growth.nu => {
            return Err(Error::Convergence(format!(
                "Re s = {sigma} must exceed the growth exponent {}",
                growth.nu
            )))
        }
        _ => {}
    }
    let b = effective_cutoff(s_fn, cutoff)?;
    let mut body = ZERO;
    for n in 1..b {
        let a = s_fn.at(n);
        if a != ZERO {
            body += a * step_difference(s, n);
        }
    }
    body /= s;
    let bf = b as f64;
    let (tail, bound) = match periodic {
        Some(p) => PeriodicTail::new(&period_values(s_fn, p)).integral(s, bf),
        None => {
            let c = stream.analytic_conductor();
            let k = growth.constant * c.powf(growth.xi);
            (ZERO, k * bf.powf(growth.nu - sigma) / (sigma - growth.nu))
        }
    };
    Ok(MellinValue {
        value: body + tail,
        truncation_bound: bound,
        cutoff: b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlancherelReport {
    pub nu: f64,
    /// `int_1^inf |A0(x)|^2 x^{-2 nu - 1} dx`.
    pub lhs: f64,
    pub lhs_error: f64,
    /// `(1 / 2 pi) int |L(nu + i t) / (nu + i t)|^2 dt`.
    pub rhs: f64,
    pub rhs_error: f64,
    pub t_max: f64,
}

impl PlancherelReport {
    pub fn difference(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn combined_error(&self) -> f64 {
        self.lhs_error + self.rhs_error + 1e-12 * (1.0 + self.lhs.abs())
    }

    pub fn passes(&self) -> bool {
        self.difference() <= self.combined_error()
    }
}

/// Mean square `sum |a_n|^2 n^{-2 nu}` with a density-based tail.
fn mean_square(stream: &dyn CoefficientStream, nu: f64, n_max: u64) -> f64 {
    let mut sum = Compensated::default();
    let mut block = 0.0;
    for n in 1..=n_max {
        let a2 = stream.coefficient(n).norm_sqr();
        sum.add(a2 * (n as f64).powf(-2.0 * nu));
        if n > n_max / 2 {
            block += a2;
        }
    }
    let density = block / (n_max - n_max / 2) as f64;
    sum.value() + density * (n_max as f64).powf(1.0 - 2.0 * nu) / (2.0 * nu - 1.0)
}

/// Plancherel for `A0(x) x^{-nu}`: both sides and their error estimates.
pub fn plancherel_check(s_fn: &SummationFunction, nu: f64, t_max: f64) -> Result<PlancherelReport> {
    let stream = s_fn.stream();
    let growth = stream.growth();
    let periodic = stream.period().filter(|&p| p <= s_fn.x_max() / 2);
    if nu <= 0.0 || (periodic.is_none() && nu <= growth.nu) {
        return Err(Error::Convergence(format!(
            "nu = {nu} is not above the square-integrability abscissa"
        )));
    }
    if t_max < 16.0 {
        return Err(Error::Domain("t_max must be at least 16".into()));
    }
    // Left side: exact on each [n, n+1), tail by period data or growth.
    let b = effective_cutoff(s_fn, s_fn.x_max())?;
    let two_nu = Complex64::new(2.0 * nu, 0.0);
    let mut lhs = Compensated::default();
    for n in 1..b {
        let a2 = s_fn.at(n).norm_sqr();
        if a2 != 0.0 {
            lhs.add(a2 * step_difference(two_nu, n).re / (2.0 * nu));
        }
    }
    let bf = b as f64;
    let (lhs_tail, lhs_error) = match periodic {
        Some(p) => {
            let f: Vec<Complex64> = period_values(s_fn, p)
                .iter()
                .map(|a| Complex64::new(a.norm_sqr(), 0.0))
                .collect();
            let (v, e) = PeriodicTail::new(&f).integral(two_nu, bf);
            (v.re, e)
        }
        None => {
            let k = growth.constant * stream.analytic_conductor().powf(growth.xi);
            (0.0, k * k * bf.powf(2.0 * (growth.nu - nu)) / (2.0 * (nu - growth.nu)))
        }
    };
    let lhs = lhs.value() + lhs_tail;

    // Right side: quadrature on dyadic blocks of |t| <= t_max, anchored at t_max.
    let mut edges = vec![t_max];
    while *edges.last().unwrap() > 2.0 {
        let next = edges.last().unwrap() / 2.0;
        edges.push(next);
    }
    edges.push(0.0);
    edges.reverse();
    let mut failure = None;
    let mut integrand = |t: f64| {
        let mut total = 0.0;
        for s in [Complex64::new(nu, t), Complex64::new(nu, -t)] {
            match stream.l_function(s) {
                Ok(v) => total += (v / s).norm_sqr(),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        total
    };
    let opts = QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-11,
        max_intervals: 20_000,
    };
    let blocks: Vec<QuadResult<f64>> = edges
        .windows(2)
        .map(|w| integrate_breaks(&mut integrand, w, opts))
        .collect();
    if let Some(e) = failure {
        return Err(e);
    }
    let scale = 1.0 / (2.0 * PI);
    let body: f64 = blocks.iter().map(|r| r.value).sum();
    let body_error: f64 = blocks.iter().map(|r| r.error).sum();
    let fit_blocks: Vec<(f64, f64, f64)> = edges
        .windows(2)
        .zip(&blocks)
        .rev()
        .take(4)
        .map(|(w, r)| (w[0], w[1], r.value))
        .collect();
    let m2 = (nu > 0.5).then(|| mean_square(stream.as_ref(), nu, 1 << 20));
    let (tail, tail_error) = fitted_tail(nu, m2, &fit_blocks, t_max);
    Ok(PlancherelReport {
        nu,
        lhs,
        lhs_error,
        rhs: scale * (body + tail),
        rhs_error: scale * (body_error + tail_error),
        t_max,
    })
}

/// Tail `int_{|t| > T} |L / s|^2 dt` from a mean-square model
/// `m(t) = M2 + c t^{1 - 2 nu}` (or `d + c t^{1 - 2 nu}`, `d + c log t` when
/// `M2` diverges) fitted to the outer dyadic blocks `(lo, hi, observed)`.
fn fitted_tail(nu: f64, m2: Option<f64>, blocks: &[(f64, f64, f64)], t_max: f64) -> (f64, f64) {
    let e = 1.0 - 2.0 * nu;
    let weight = move |t: f64| 2.0 / (nu * nu + t * t);
    let log_model = m2.is_none() && e.abs() < 1e-3;
    let basis = |j: usize, t: f64| match (m2, j) {
        (Some(_), _) | (None, 1) if !log_model => t.powf(e),
        (None, 1) => t.ln(),
        _ => 1.0,
    };
    let unknowns = if m2.is_some() { 1 } else { 2 };
    let opts = QuadOptions::default();
    let fixed = |lo: f64, hi: f64| match m2 {
        Some(m) => 2.0 * m / nu * ((hi / nu).atan() - (lo / nu).atan()),
        None => 0.0,
    };
    let design: Vec<Vec<f64>> = blocks
        .iter()
        .map(|&(lo, hi, _)| {
            (0..unknowns)
                .map(|j| integrate(|t| weight(t) * basis(j, t), lo, hi, opts).value)
                .collect()
        })
        .collect();
    let targets: Vec<f64> = blocks.iter().map(|&(lo, hi, obs)| obs - fixed(lo, hi)).collect();
    let coef = least_squares(&design, &targets);
    let relative_misfit = blocks
        .iter()
        .zip(&design)
        .map(|(&(lo, hi, obs), row)| {
            let model = fixed(lo, hi) + row.iter().zip(&coef).map(|(x, c)| x * c).sum::<f64>();
            (obs - model).abs() / obs.abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    // int_T^inf 2 f(t) / (nu^2 + t^2) dt by expanding 1 / (1 + nu^2 / t^2).
    let basis_tail = |j: usize| {
        let r = -(nu * nu) / (t_max * t_max);
        let mut total = 0.0;
        let mut rk = 1.0;
        for k in 0..60 {
            let m = 1.0 + 2.0 * k as f64;
            let term = match (m2, j) {
                (Some(_), _) | (None, 1) if !log_model => t_max.powf(e - m) / (m - e),
                (None, 1) => t_max.powf(-m) * (t_max.ln() / m + 1.0 / (m * m)),
                _ => t_max.powf(-m) / m,
            };
            total += rk * term;
            rk *= r;
            if rk.abs() < 1e-18 {
                break;
            }
        }
        2.0 * total
    };
    let tail_parts: Vec<f64> = (0..unknowns).map(|j| coef[j] * basis_tail(j)).collect();
    let fixed_tail = fixed(t_max, f64::INFINITY);
    let tail = fixed_tail + tail_parts.iter().sum::<f64>();
    let model_uncertainty = match m2 {
        Some(_) => 0.25 * tail_parts[0].abs(),
        None => {
            // Spread against a pure power law through the outermost block.
            let (lo, hi, obs) = blocks[0];
            let one = integrate(|t| weight(t) * basis(1, t), lo, hi, opts).value;
            let power_only = obs / one * basis_tail(1);
            (power_only - tail).abs() + 0.25 * tail.abs()
        }
    };
    (tail, relative_misfit * tail.abs() + model_uncertainty)
}

/// Least squares by normal equations for one or two unknowns.
fn least_squares(design: &[Vec<f64>], targets: &[f64]) -> Vec<f64> {
    let k = design[0].len();
    let mut ata = [[0.0; 2]; 2];
    let mut atb = [0.0; 2];
    for (row, &y) in design.iter().zip(targets) {
        for i in 0..k {
            atb[i] += row[i] * y;
            for j in 0..k {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    if k == 1 {
        vec![atb[0] / ata[0][0]]
    } else {
        let det = ata[0][0] * ata[1][1] - ata[0][1] * ata[1][0];
        vec![
            (atb[0] * ata[1][1] - atb[1] * ata[0][1]) / det,
            (ata[0][0] * atb[1] - ata[1][0] * atb[0]) / det,
        ]
    }
}

/// `sum_{n <= x} |a_n|`.
pub fn molteni_sum(stream: &dyn CoefficientStream, x: u64) -> f64 {
    let mut acc = Compensated::default();
    for n in 1..=x {
        acc.add(stream.coefficient(n).norm());
    }
    acc.value()
}
