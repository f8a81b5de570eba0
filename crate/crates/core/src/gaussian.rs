//! Gaussian probes and the two sides of the probe identity
//!
//! ```text
//! int L(1/2 + it) / (1/2 + it) g(t) dt
//!     = alpha^{-1/2} int_0^inf A0(e^X) e^{-X^2 / 4 pi alpha} e^{-X/2} dX,
//! ```
//!
//! with `g(t) = e^{-pi alpha t^2}`, together with the lower bound for the
//! first piece of the right side, the remainder bound, the tail of the left
//! side beyond a window, and the window suprema and mean squares.

use crate::dirichlet::{twist_conductor_bound, AnalyticConductor, CharacterFamily, DirichletCharacter};
use crate::error::{Error, Result};
use crate::exec::{self, pairwise_sum, Execution};
use crate::mellin::{CharacterStream, CoefficientStream, SummationFunction};
use crate::quad::{integrate_breaks, QuadOptions};
use crate::specfun::{erf_diff, erf_paper, erfc_scaled, erfc_signed, gaussian_tail_i, SQRT_PI};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Exponent slack `eps` used when none is configured.
pub const DEFAULT_EPS: f64 = 0.05;

/// Implied constant taken for the convexity bound when estimating the tail
/// of a contour integral.
pub const CONVEXITY_CONSTANT: f64 = 4.0;

/// Accepted ratio between the quadratured tail and its analytic bound.
pub const TAIL_SLACK: f64 = 4.0;

/// Target size of the neglected contour tail.
pub const CONTOUR_TAIL_TOLERANCE: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `g(t) = e^{-pi alpha t^2}` and its continuation
/// `G(s) = e^{pi alpha (s - 1/2)^2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProbe {
    alpha: f64,
}

impl GaussianProbe {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("probe width alpha = {alpha} must be positive")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weight(&self, t: f64) -> f64 {
        (-PI * self.alpha * t * t).exp()
    }

    pub fn continuation(&self, s: Complex64) -> Complex64 {
        let z = s - 0.5;
        (PI * self.alpha * z * z).exp()
    }

    /// `int_R g = alpha^{-1/2}`.
    pub fn total_integral(&self) -> f64 {
        self.alpha.powf(-0.5)
    }

    /// `int_{-T}^{T} g`.
    pub fn window_integral(&self, half_width: f64) -> f64 {
        let k = (PI * self.alpha).sqrt();
        2.0 / k * erf_paper(k * half_width.abs()).unwrap_or(0.0)
    }

    /// `int_{-T}^{T} g^2`.
    pub fn window_l2_squared(&self, half_width: f64) -> f64 {
        let k = (2.0 * PI * self.alpha).sqrt();
        2.0 / k * erf_paper(k * half_width.abs()).unwrap_or(0.0)
    }
}

/// The absolute constants of the probe argument: `alpha = b1 / log C`,
/// window half-width `T = A log C`, target `c`, and exponent slack `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeParameters {
    pub b1: f64,
    pub window_a: f64,
    pub c: f64,
    pub eps: f64,
}

impl Default for ProbeParameters {
    fn default() -> Self {
        Self {
            b1: 0.05,
            window_a: 6.0,
            c: PI / 4.0,
            eps: DEFAULT_EPS,
        }
    }
}

impl ProbeParameters {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("b1", self.b1), ("A", self.window_a), ("c", self.c), ("eps", self.eps)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("parameter {name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    fn log_conductor(conductor: f64) -> Result<f64> {
        if !(conductor > 1.0) {
            return Err(Error::Domain(format!("conductor {conductor} must exceed 1")));
        }
        Ok(conductor.ln())
    }

    pub fn alpha(&self, conductor: f64) -> Result<f64> {
        Ok(self.b1 / Self::log_conductor(conductor)?)
    }

    pub fn half_width(&self, conductor: f64) -> Result<f64> {
        Ok(self.window_a * Self::log_conductor(conductor)?)
    }

    pub fn probe(&self, conductor: f64) -> Result<GaussianProbe> {
        GaussianProbe::new(self.alpha(conductor)?)
    }

    /// Comparator constant for the window supremum of `|L / s|`.
    pub fn c1(&self) -> f64 {
        0.5 * self.c * self.b1.sqrt()
    }

    /// Comparator constant for the window mean square of `|L / s|`.
    pub fn c2(&self) -> f64 {
        (0.5 * self.c).powi(2) * (2.0 * self.b1).sqrt()
    }

    /// Comparator constant for the shifted-window supremum of `|L|`.
    pub fn c3(&self) -> f64 {
        0.5 * self.c1()
    }

    /// Comparator constant for the shifted-window weighted mean square.
    pub fn c4(&self) -> f64 {
        self.c2()
    }
}

/// An L-function that can be evaluated at points and along vertical lines.
pub trait LEvaluator: Sync {
    fn eval(&self, s: Complex64) -> Result<Complex64>;

    /// Values at `sigma + i (t0 + k h)`, `k < count`.
    fn eval_line(&self, sigma: f64, t0: f64, h: f64, count: usize) -> Result<Vec<Complex64>> {
        (0..count)
            .map(|k| self.eval(Complex64::new(sigma, t0 + h * k as f64)))
            .collect()
    }

    fn conductor(&self) -> AnalyticConductor;

    /// True when `L(conj s) = conj L(s)`.
    fn is_real(&self) -> bool {
        false
    }
}

/// `L(s, chi)` for a nontrivial Dirichlet character.
#[derive(Debug, Clone)]
pub struct DirichletL {
    family: CharacterFamily,
    conductor: AnalyticConductor,
    real: bool,
}

impl DirichletL {
    pub fn new(chi: &DirichletCharacter) -> Result<Self> {
        if chi.is_principal() {
            return Err(Error::Pole {
                modulus: chi.modulus(),
            });
        }
        Ok(Self {
            family: CharacterFamily::new(vec![chi.clone()])?,
            conductor: AnalyticConductor::of_character(chi),
            real: chi.is_real(),
        })
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.family.characters()[0]
    }
}

impl LEvaluator for DirichletL {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.family.l_values(s)?[0])
    }

    fn eval_line(&self, sigma: f64, t0: f64, h: f64, count: usize) -> Result<Vec<Complex64>> {
        Ok(self
            .family
            .l_values_on_line(sigma, t0, h, count)?
            .into_iter()
            .map(|row| row[0])
            .collect())
    }

    fn conductor(&self) -> AnalyticConductor {
        self.conductor.clone()
    }

    fn is_real(&self) -> bool {
        self.real
    }
}

/// An evaluator from a closure.
pub struct FnEvaluator<F> {
    f: F,
    conductor: AnalyticConductor,
    real: bool,
}

impl<F> FnEvaluator<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    pub fn new(f: F, conductor: AnalyticConductor, real: bool) -> Self {
        Self { f, conductor, real }
    }
}

impl<F> LEvaluator for FnEvaluator<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        (self.f)(s)
    }

    fn conductor(&self) -> AnalyticConductor {
        self.conductor.clone()
    }

    fn is_real(&self) -> bool {
        self.real
    }
}

/// `s -> L(s + i X)`.
pub struct Shifted<'a, E: ?Sized> {
    inner: &'a E,
    shift: f64,
}

impl<'a, E: LEvaluator + ?Sized> Shifted<'a, E> {
    pub fn new(inner: &'a E, shift: f64) -> Self {
        Self { inner, shift }
    }
}

impl<E: LEvaluator + ?Sized> LEvaluator for Shifted<'_, E> {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        self.inner.eval(s + Complex64::new(0.0, self.shift))
    }

    fn eval_line(&self, sigma: f64, t0: f64, h: f64, count: usize) -> Result<Vec<Complex64>> {
        self.inner.eval_line(sigma, t0 + self.shift, h, count)
    }

    fn conductor(&self) -> AnalyticConductor {
        self.inner.conductor().twisted(self.shift)
    }

    fn is_real(&self) -> bool {
        self.shift == 0.0 && self.inner.is_real()
    }
}

/// A contour integral with its quadrature error and neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: Complex64,
    pub quad_error: f64,
    pub tail_bound: f64,
    pub t_cut: f64,
}

impl ContourValue {
    pub fn error(&self) -> f64 {
        self.quad_error + self.tail_bound
    }
}

/// Bound for `|int_{|t| > T} L(s) / s G(s) dt|` on `Re s = sigma`, from
/// `|L(s)| <= K C(s)^{e}` with `e = max((1 - sigma)/2, 0) + eps`.
pub fn contour_tail_bound(probe: &GaussianProbe, conductor: &AnalyticConductor, sigma: f64, t: f64, eps: f64) -> f64 {
    let m = conductor.degree() as f64;
    let e = (0.5 * (1.0 - sigma)).max(0.0) + eps;
    let k = (PI * probe.alpha()).sqrt();
    // C(sigma + it) <= C (1 + |sigma| + |t|)^m <= C ((1 + |sigma|)/T + 1)^m t^m.
    let growth = conductor.value().powf(e) * (1.0 + (1.0 + sigma.abs()) / t).powf(m * e);
    let shift = (PI * probe.alpha() * (sigma - 0.5).powi(2)).exp();
    let a = m * e - 1.0;
    let integral = k.powf(-(a + 1.0)) * gaussian_tail_i(a, k * t).unwrap_or(f64::INFINITY);
    2.0 * CONVEXITY_CONSTANT * shift * growth * integral
}

/// Smallest `T_cut` (in steps of 1/2) whose contour tail bound is below `tol`.
pub fn default_t_cut(probe: &GaussianProbe, conductor: &AnalyticConductor, sigma: f64, eps: f64, tol: f64) -> f64 {
    let mut t = 2.0;
    while contour_tail_bound(probe, conductor, sigma, t, eps) > tol && t < 1e4 {
        t += 0.5;
    }
    t
}

fn contour_integrand<'a, E: LEvaluator + ?Sized>(
    ev: &'a E,
    probe: &'a GaussianProbe,
    sigma: f64,
    failure: &'a mut Option<Error>,
) -> impl FnMut(f64) -> Complex64 + 'a {
    move |t: f64| {
        let s = Complex64::new(sigma, t);
        match ev.eval(s) {
            Ok(v) => v / s * probe.continuation(s),
            Err(e) => {
                failure.get_or_insert(e);
                ZERO
            }
        }
    }
}

/// `int L(sigma + it) / (sigma + it) G(sigma + it) dt` by adaptive quadrature
/// on `|t| <= T_cut`, plus the convexity tail bound beyond.
pub fn contour_integral<E: LEvaluator + ?Sized>(
    ev: &E,
    probe: &GaussianProbe,
    sigma: f64,
    t_cut: f64,
) -> Result<ContourValue> {
    if !(t_cut > 0.0) {
        return Err(Error::Domain(format!("T_cut = {t_cut} must be positive")));
    }
    if sigma <= 0.0 {
        return Err(Error::Domain(format!("contour abscissa sigma = {sigma} must be positive")));
    }
    let pieces = (t_cut / 2.0).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=2 * pieces)
        .map(|k| -t_cut + t_cut * k as f64 / pieces as f64)
        .collect();
    let mut failure = None;
    let opts = QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_intervals: 20_000,
    };
    let r = integrate_breaks(&mut contour_integrand(ev, probe, sigma, &mut failure), &breaks, opts);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(ContourValue {
        value: r.value,
        quad_error: r.error,
        tail_bound: contour_tail_bound(probe, &ev.conductor(), sigma, t_cut, DEFAULT_EPS),
        t_cut,
    })
}

/// `int_{-T}^{T} L(1/2 + it) / (1/2 + it) g(t) dt` plus the tail bound.
pub fn lhs_t_integral<E: LEvaluator + ?Sized>(ev: &E, probe: &GaussianProbe, t_cut: f64) -> Result<ContourValue> {
    contour_integral(ev, probe, 0.5, t_cut)
}

/// The contour integral for every character of a family, by the trapezoid
/// rule on a shared grid of step 1/16; the error is the change from step 1/8.
pub fn lhs_family(family: &CharacterFamily, probe: &GaussianProbe, sigma: f64, t_cut: f64) -> Result<Vec<ContourValue>> {
    if !(t_cut > 0.0) || sigma <= 0.0 {
        return Err(Error::Domain(format!("need T_cut > 0 and sigma > 0 (T_cut = {t_cut}, sigma = {sigma})")));
    }
    let h = 1.0 / 16.0;
    let steps = (t_cut / h).ceil() as usize;
    let t0 = -(steps as f64) * h;
    let count = 2 * steps + 1;
    let grid = family.l_values_on_line(sigma, t0, h, count)?;
    let n = family.characters().len();
    let mut fine = vec![ZERO; n];
    let mut coarse = vec![ZERO; n];
    for (k, row) in grid.iter().enumerate() {
        let s = Complex64::new(sigma, t0 + h * k as f64);
        let factor = probe.continuation(s) / s;
        let end = k == 0 || k == count - 1;
        let w = if end { 0.5 } else { 1.0 };
        for (j, v) in row.iter().enumerate() {
            fine[j] += w * v * factor;
            if k % 2 == 0 {
                coarse[j] += w * v * factor;
            }
        }
    }
    let t_used = steps as f64 * h;
    Ok(family
        .characters()
        .iter()
        .enumerate()
        .map(|(j, chi)| {
            let value = fine[j] * h;
            let quad_error = (value - coarse[j] * 2.0 * h).norm();
            let cond = AnalyticConductor::of_character(chi);
            ContourValue {
                value,
                quad_error,
                tail_bound: contour_tail_bound(probe, &cond, sigma, t_used, DEFAULT_EPS),
                t_cut: t_used,
            }
        })
        .collect())
}

/// The X-side of the identity on `[0, X_max]` with the growth-based tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XSideValue {
    pub value: Complex64,
    pub truncation_bound: f64,
    pub x_log_max: f64,
}

/// `alpha^{-1/2} int_{log a}^{log b} e^{-X^2 / 4 pi alpha - X/2} dX` for `1 <= a < b`.
fn kernel_mass(alpha: f64, a: f64, b: f64) -> f64 {
    let k = 2.0 * (PI * alpha).sqrt();
    let shift = PI * alpha;
    let u = |x: f64| (x.ln() + shift) / k;
    if u(a) > 5.0 {
        // e^{pi alpha/4} Erfc(u(x)) = x^{-1/2} e^{-log^2 x / 4 pi alpha} e^{u^2} Erfc(u).
        let scaled = |x: f64| {
            if x.is_infinite() {
                return 0.0;
            }
            let l = x.ln();
            (-0.5 * l - l * l / (k * k)).exp() * erfc_scaled(u(x)).unwrap_or(0.0)
        };
        return 2.0 * SQRT_PI * (scaled(a) - scaled(b));
    }
    let upper = if b.is_infinite() { f64::INFINITY } else { u(b) };
    let mass = if upper.is_infinite() {
        erfc_signed(u(a))
    } else {
        erf_diff(u(a), upper)
    };
    2.0 * SQRT_PI * (shift / 4.0).exp() * mass
}

/// `K C^xi alpha^{-1/2} int_{X}^inf e^{(nu - 1/2) X - X^2 / 4 pi alpha} dX`.
pub fn growth_tail_bound(probe: &GaussianProbe, constant: f64, c_xi: f64, nu: f64, x_log: f64) -> f64 {
    let alpha = probe.alpha();
    let theta = nu - 0.5;
    let k = 2.0 * (PI * alpha).sqrt();
    constant * c_xi * 2.0 * SQRT_PI * (PI * theta * theta * alpha).exp()
        * erfc_signed((x_log - 2.0 * PI * theta * alpha) / k)
}

/// Smallest log-cutoff (step 1/4) with growth tail below `tol`.
pub fn rhs_cutoff(stream: &dyn CoefficientStream, probe: &GaussianProbe, tol: f64) -> f64 {
    let g = stream.growth();
    let c_xi = stream.analytic_conductor().powf(g.xi);
    let mut x = 1.0;
    while growth_tail_bound(probe, g.constant, c_xi, g.nu, x) > tol && x < 200.0 {
        x += 0.25;
    }
    x
}

/// `alpha^{-1/2} int_0^{X_max} A0(e^X) e^{-X^2/4 pi alpha} e^{-X/2} dX`,
/// exact on each interval where `A0` is constant, plus the growth tail.
pub fn rhs_x_integral(s_fn: &SummationFunction, probe: &GaussianProbe, x_log_max: f64) -> Result<XSideValue> {
    if !(x_log_max > 0.0) {
        return Err(Error::Domain(format!("X_max = {x_log_max} must be positive")));
    }
    let b = x_log_max.exp().floor();
    if b > s_fn.x_max() as f64 {
        return Err(Error::Range {
            x: b,
            max: s_fn.x_max() as f64,
        });
    }
    let b = b as u64;
    let alpha = probe.alpha();
    let mut re = Vec::with_capacity(b as usize);
    let mut im = Vec::with_capacity(b as usize);
    for n in 1..b {
        let a0 = s_fn.at(n);
        if a0 != ZERO {
            let w = kernel_mass(alpha, n as f64, (n + 1) as f64);
            re.push(a0.re * w);
            im.push(a0.im * w);
        }
    }
    let stream = s_fn.stream();
    let g = stream.growth();
    let c_xi = stream.analytic_conductor().powf(g.xi);
    Ok(XSideValue {
        value: Complex64::new(pairwise_sum(&re), pairwise_sum(&im)),
        truncation_bound: growth_tail_bound(probe, g.constant, c_xi, g.nu, (b as f64).ln()),
        x_log_max: (b as f64).ln(),
    })
}

/// `I1 = alpha^{-1/2} int_0^{log 2} e^{-X^2/4 pi alpha} e^{-X/2} dX`, exactly.
pub fn i1_lower(probe: &GaussianProbe) -> f64 {
    kernel_mass(probe.alpha(), 1.0, 2.0)
}

/// Upper bound `C^xi alpha^{-1/2} int_{log 2}^inf e^{theta X - X^2/4 pi alpha} dX`
/// with `theta = nu + eps - 1/2`, in closed form
/// `2 sqrt(pi) C^xi e^{pi theta^2 alpha} Erfc((log 2 - 2 pi theta alpha) / 2 sqrt(pi alpha))`.
pub fn remainder_upper(probe: &GaussianProbe, conductor: f64, xi: f64, nu: f64, eps: f64) -> f64 {
    let alpha = probe.alpha();
    let theta = nu + eps - 0.5;
    let x = (2f64.ln() - 2.0 * PI * theta * alpha) / (2.0 * (PI * alpha).sqrt());
    let tail = if x > 0.0 {
        gaussian_tail_i(0.0, x).unwrap_or_else(|_| erfc_signed(x))
    } else {
        erfc_signed(x)
    };
    2.0 * SQRT_PI * conductor.powf(xi) * (PI * theta * theta * alpha).exp() * tail
}

/// Largest `alpha` with `I1(alpha) >= target`, by bisection.
pub fn alpha_star(target: f64) -> Result<f64> {
    let i1 = |a: f64| i1_lower(&GaussianProbe { alpha: a });
    let (mut lo, mut hi) = (1e-8, 100.0);
    if !(i1(lo) >= target) {
        return Err(Error::Domain(format!("I1 never reaches {target}")));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if i1(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-14 {
            break;
        }
    }
    Ok(lo)
}

/// The probe lower bound for one L-function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop21Report {
    pub conductor: f64,
    pub alpha: f64,
    /// `|int L(1/2 + it)/(1/2 + it) g(t) dt|`.
    pub value: f64,
    pub error: f64,
    pub i1: f64,
    pub remainder: f64,
    pub passes: bool,
}

pub fn prop21_for<E: LEvaluator + ?Sized>(ev: &E, params: &ProbeParameters) -> Result<Prop21Report> {
    params.validate()?;
    let cond = ev.conductor();
    let conductor = cond.value();
    let probe = params.probe(conductor)?;
    let t_cut = default_t_cut(&probe, &cond, 0.5, params.eps, CONTOUR_TAIL_TOLERANCE);
    let lhs = lhs_t_integral(ev, &probe, t_cut)?;
    let value = lhs.value.norm();
    Ok(Prop21Report {
        conductor,
        alpha: probe.alpha(),
        value,
        error: lhs.error(),
        i1: i1_lower(&probe),
        remainder: remainder_upper(&probe, conductor, params.eps, 0.0, params.eps),
        passes: value >= params.c,
    })
}

/// `alpha = b1 / log C`, value and verdict against `c` for a primitive character.
pub fn prop21_check(chi: &DirichletCharacter, params: &ProbeParameters) -> Result<Prop21Report> {
    if !chi.is_primitive() {
        return Err(Error::Imprimitive {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        });
    }
    prop21_for(&DirichletL::new(chi)?, params)
}

pub fn prop21_scan(chars: &[DirichletCharacter], params: &ProbeParameters, exec: Execution) -> Vec<Result<Prop21Report>> {
    exec::map(exec, chars, |chi| prop21_check(chi, params))
}

/// The analytic bound for the contour tail beyond `T` and the quadratured value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    pub t: f64,
    /// `2 C^{1/4 + eps} int_T^inf e^{-pi alpha t^2} t^{m/4 - 1 + eps} dt`.
    pub bound: f64,
    /// `|int_{|t| >= T} L(1/2 + it)/(1/2 + it) g(t) dt|`.
    pub direct: f64,
    pub direct_error: f64,
}

impl TailReport {
    pub fn within_slack(&self) -> bool {
        self.direct <= TAIL_SLACK * self.bound + self.direct_error
    }
}

pub fn tail_i5<E: LEvaluator + ?Sized>(ev: &E, t: f64, probe: &GaussianProbe, eps: f64) -> Result<TailReport> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("tail start T = {t} must be >= 1")));
    }
    let cond = ev.conductor();
    let m = cond.degree() as f64;
    let a = m / 4.0 - 1.0 + eps;
    let k = (PI * probe.alpha()).sqrt();
    let bound = 2.0 * cond.value().powf(0.25 + eps) * k.powf(-(a + 1.0)) * gaussian_tail_i(a, k * t)?;

    let t_cut = default_t_cut(probe, &cond, 0.5, eps, 1e-16).max(t + 1.0);
    let pieces = ((t_cut - t) / 2.0).ceil().max(1.0) as usize;
    let right: Vec<f64> = (0..=pieces).map(|j| t + (t_cut - t) * j as f64 / pieces as f64).collect();
    let left: Vec<f64> = right.iter().rev().map(|x| -x).collect();
    let opts = QuadOptions {
        abs_tol: 1e-16,
        rel_tol: 1e-10,
        max_intervals: 20_000,
    };
    let mut failure = None;
    let (r, l) = {
        let mut f = contour_integrand(ev, probe, 0.5, &mut failure);
        (integrate_breaks(&mut f, &right, opts), integrate_breaks(&mut f, &left, opts))
    };
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(TailReport {
        t,
        bound,
        direct: (r.value + l.value).norm(),
        direct_error: r.error + l.error + contour_tail_bound(probe, &cond, 0.5, t_cut, eps),
    })
}

/// Window quantities for the sup and mean-square lower bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowReport {
    pub center: f64,
    pub half_width: f64,
    /// `log C + m log(1 + |X|)`.
    pub log_conductor: f64,
    pub alpha: f64,
    /// The supremum the theorem bounds: `|L / s|` at the center, `|L|` when shifted.
    pub sup_value: f64,
    /// `int_{-T}^{T} |L(1/2 + i(X + u)) / (1/2 + iu)|^2 du`.
    pub l2_value: f64,
    pub l2_error: f64,
    /// Comparator for `sup_value`.
    pub bound: f64,
    /// Comparator for `l2_value`.
    pub l2_bound: f64,
    /// `sup_u |L(1/2 + i(X + u)) / (1/2 + iu)|`.
    pub weighted_sup: f64,
    /// `sup_u |L(1/2 + i(X + u))|`.
    pub l_sup: f64,
    /// `|int_{-T}^{T} L(1/2 + i(X + u)) / (1/2 + iu) g(u) du|`.
    pub window_integral: f64,
    /// `int_{-T}^{T} g`.
    pub g_l1: f64,
    /// `(int_{-T}^{T} g^2)^{1/2}`.
    pub g_l2: f64,
}

impl WindowReport {
    pub fn sup_passes(&self) -> bool {
        self.sup_value >= self.bound
    }

    pub fn l2_passes(&self) -> bool {
        self.l2_value >= self.l2_bound
    }
}

/// Grid spacing for window scans.
pub fn window_step(half_width: f64) -> f64 {
    0.05f64.min(half_width / 2000.0)
}

struct WindowGrid {
    u0: f64,
    h: f64,
    values: Vec<Complex64>,
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..40 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid maximum refined by golden-section search at the top five local
/// maxima and at every local maximum within 2% of the grid maximum.
fn refined_sup(
    grid_values: &[f64],
    u0: f64,
    h: f64,
    half_width: f64,
    f: &dyn Fn(f64) -> f64,
) -> f64 {
    let n = grid_values.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = i == 0 || grid_values[i - 1] <= grid_values[i];
            let right = i + 1 == n || grid_values[i + 1] <= grid_values[i];
            left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| grid_values[b].total_cmp(&grid_values[a]).then(a.cmp(&b)));
    let top = peaks.first().map(|&i| grid_values[i]).unwrap_or(0.0);
    let mut best = top;
    for (rank, &i) in peaks.iter().enumerate() {
        if rank >= 5 && grid_values[i] < 0.98 * top {
            break;
        }
        let u = u0 + h * i as f64;
        let a = (u - h).max(-half_width);
        let b = (u + h).min(half_width);
        let (_, v) = golden_max(f, a, b);
        best = best.max(v);
    }
    best
}

/// Composite Simpson on an even number of intervals, with the
/// Richardson estimate `|S_h - S_{2h}| / 15` when the count allows it.
fn simpson(values: &[f64], h: f64) -> (f64, f64) {
    let rule = |stride: usize| {
        let pts: Vec<f64> = values.iter().step_by(stride).copied().collect();
        let m = pts.len() - 1;
        let mut terms = Vec::with_capacity(pts.len());
        for (i, v) in pts.iter().enumerate() {
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            terms.push(w * v);
        }
        pairwise_sum(&terms) * h * stride as f64 / 3.0
    };
    let fine = rule(1);
    let intervals = values.len() - 1;
    let error = if intervals % 4 == 0 {
        (fine - rule(2)).abs() / 15.0
    } else {
        fine.abs() * 1e-6
    };
    (fine, error)
}

fn window_grid<E: LEvaluator + ?Sized>(ev: &E, center: f64, half_width: f64) -> Result<WindowGrid> {
    let target = window_step(half_width);
    let intervals = 4 * ((2.0 * half_width / (4.0 * target)).ceil() as usize).max(1);
    let h = 2.0 * half_width / intervals as f64;
    let u0 = -half_width;
    let values = if center == 0.0 && ev.is_real() {
        let half = intervals / 2;
        let upper = ev.eval_line(0.5, 0.0, h, half + 1)?;
        let mut all: Vec<Complex64> = upper[1..].iter().rev().map(|v| v.conj()).collect();
        all.extend(upper);
        all
    } else {
        ev.eval_line(0.5, center + u0, h, intervals + 1)?
    };
    Ok(WindowGrid { u0, h, values })
}

fn window_report<E: LEvaluator + ?Sized>(
    ev: &E,
    center: f64,
    log_conductor: f64,
    params: &ProbeParameters,
    shifted: bool,
) -> Result<WindowReport> {
    params.validate()?;
    let half_width = params.window_a * log_conductor;
    let probe = GaussianProbe::new(params.b1 / log_conductor)?;
    let grid = window_grid(ev, center, half_width)?;
    let s_of = |u: f64| Complex64::new(0.5, u);
    let us: Vec<f64> = (0..grid.values.len()).map(|k| grid.u0 + grid.h * k as f64).collect();
    let abs_l: Vec<f64> = grid.values.iter().map(|v| v.norm()).collect();
    let weighted: Vec<f64> = grid
        .values
        .iter()
        .zip(&us)
        .map(|(v, &u)| v.norm() / s_of(u).norm())
        .collect();
    let at = |u: f64| {
        ev.eval(Complex64::new(0.5, center + u))
            .map(|v| v.norm())
            .unwrap_or(0.0)
    };
    let l_sup = refined_sup(&abs_l, grid.u0, grid.h, half_width, &at);
    let weighted_sup = refined_sup(&weighted, grid.u0, grid.h, half_width, &|u| at(u) / s_of(u).norm());
    let sq: Vec<f64> = weighted.iter().map(|w| w * w).collect();
    let (l2_value, l2_error) = simpson(&sq, grid.h);
    let (re, im): (Vec<f64>, Vec<f64>) = grid
        .values
        .iter()
        .zip(&us)
        .map(|(v, &u)| {
            let z = v / s_of(u) * probe.weight(u);
            (z.re, z.im)
        })
        .unzip();
    let window_integral = Complex64::new(simpson(&re, grid.h).0, simpson(&im, grid.h).0).norm();
    let (sup_value, bound, l2_bound) = if shifted {
        (l_sup, params.c3() / log_conductor.sqrt(), params.c4() / log_conductor.sqrt())
    } else {
        (weighted_sup, params.c1() / log_conductor.sqrt(), params.c2() / log_conductor.sqrt())
    };
    Ok(WindowReport {
        center,
        half_width,
        log_conductor,
        alpha: probe.alpha(),
        sup_value,
        l2_value,
        l2_error,
        bound,
        l2_bound,
        weighted_sup,
        l_sup,
        window_integral,
        g_l1: probe.window_integral(half_width),
        g_l2: probe.window_l2_squared(half_width).sqrt(),
    })
}

/// Window `[-T, T]`, `T = A log C`, for any evaluator.
pub fn theorem22_window_for<E: LEvaluator + ?Sized>(ev: &E, params: &ProbeParameters) -> Result<WindowReport> {
    let log_c = ProbeParameters::log_conductor(ev.conductor().value())?;
    window_report(ev, 0.0, log_c, params, false)
}

pub fn theorem22_window(chi: &DirichletCharacter, params: &ProbeParameters) -> Result<WindowReport> {
    if !chi.is_primitive() {
        return Err(Error::Imprimitive {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        });
    }
    theorem22_window_for(&DirichletL::new(chi)?, params)
}

/// Window `[X - T, X + T]` with `T = A (log C + m log(1 + |X|))`.
pub fn theorem23_window_for<E: LEvaluator + ?Sized>(ev: &E, shift: f64, params: &ProbeParameters) -> Result<WindowReport> {
    if !shift.is_finite() {
        return Err(Error::Domain(format!("shift X = {shift} must be finite")));
    }
    let tb = twist_conductor_bound(&ev.conductor(), shift);
    let log_c = ProbeParameters::log_conductor(tb.bound)?;
    window_report(ev, shift, log_c, params, true)
}

pub fn theorem23_shifted_window(chi: &DirichletCharacter, shift: f64, params: &ProbeParameters) -> Result<WindowReport> {
    theorem23_window_for(&DirichletL::new(chi)?, shift, params)
}

pub fn theorem22_scan(chars: &[DirichletCharacter], params: &ProbeParameters, exec: Execution) -> Vec<Result<WindowReport>> {
    exec::map(exec, chars, |chi| theorem22_window(chi, params))
}

/// Both sides of the identity for one character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityRow {
    pub alpha: f64,
    pub lhs: ContourValue,
    pub rhs: XSideValue,
}

impl IdentityRow {
    pub fn relative_difference(&self) -> f64 {
        (self.lhs.value - self.rhs.value).norm() / (1.0 + self.lhs.value.norm())
    }
}

/// The identity for all characters of a family at one `alpha`, with the
/// contour on `Re s = sigma`.
pub fn identity_family(family: &CharacterFamily, alpha: f64, sigma: f64) -> Result<Vec<IdentityRow>> {
    let probe = GaussianProbe::new(alpha)?;
    let worst = family
        .characters()
        .iter()
        .map(AnalyticConductor::of_character)
        .max_by(|a, b| a.value().total_cmp(&b.value()))
        .ok_or_else(|| Error::Domain("empty family".into()))?;
    let t_cut = default_t_cut(&probe, &worst, sigma, DEFAULT_EPS, CONTOUR_TAIL_TOLERANCE);
    let lhs = lhs_family(family, &probe, sigma, t_cut)?;
    family
        .characters()
        .iter()
        .zip(lhs)
        .map(|(chi, lhs)| {
            let stream = Arc::new(CharacterStream::new(chi.clone()));
            let x_log = rhs_cutoff(stream.as_ref(), &probe, 1e-14);
            let s_fn = SummationFunction::new(stream, x_log.exp().floor() as u64 + 1);
            Ok(IdentityRow {
                alpha,
                lhs,
                rhs: rhs_x_integral(&s_fn, &probe, x_log)?,
            })
        })
        .collect()
}
