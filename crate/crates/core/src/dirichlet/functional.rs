use super::character::DirichletCharacter;
use super::lseries::{l_value, CharacterFamily};
use crate::error::{Error, Result};
use crate::specfun::ln_gamma_complex;
use num_complex::Complex64;
use std::f64::consts::PI;

/// `D * prod_j (2 + |c_j|)` and its point-dependent version
/// `C(s) = C * (1 + |s|)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticConductor {
    pub level: u64,
    pub shifts: Vec<Complex64>,
}

impl AnalyticConductor {
    pub fn new(level: u64, shifts: Vec<Complex64>) -> Self {
        Self { level, shifts }
    }

    /// Degree-1 conductor of a character: level is its conductor, shift its parity.
    pub fn of_character(chi: &DirichletCharacter) -> Self {
        Self::new(
            chi.conductor(),
            vec![Complex64::new(chi.parity() as f64, 0.0)],
        )
    }

    pub fn degree(&self) -> u32 {
        self.shifts.len() as u32
    }

    pub fn value(&self) -> f64 {
        self.shifts
            .iter()
            .fold(self.level as f64, |acc, c| acc * (2.0 + c.norm()))
    }

    pub fn at(&self, s: Complex64) -> f64 {
        self.value() * (1.0 + s.norm()).powi(self.degree() as i32)
    }

    /// Conductor of the twist `L(s + i a)`.
    pub fn twisted(&self, a: f64) -> Self {
        Self::new(
            self.level,
            self.shifts.iter().map(|c| c + Complex64::new(0.0, a)).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistBound {
    pub shifted: f64,
    pub bound: f64,
}

/// `C(L(. + i a)) <= C(L) (1 + |a|)^m`.
pub fn twist_conductor_bound(c: &AnalyticConductor, a: f64) -> TwistBound {
    let shifted = c.twisted(a).value();
    let bound = c.value() * (1.0 + a.abs()).powi(c.degree() as i32);
    debug_assert!(shifted <= bound * (1.0 + 1e-12));
    TwistBound { shifted, bound }
}

fn require_primitive(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_primitive() {
        Ok(())
    } else {
        Err(Error::Imprimitive {
            modulus: chi.modulus(),
            conductor: chi.conductor(),
        })
    }
}

pub fn gauss_sum(chi: &DirichletCharacter) -> Result<Complex64> {
    require_primitive(chi)?;
    let q = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..=q {
        if let Some(k) = chi.value_index(a) {
            let phase = k as f64 / chi.group().exponent() as f64 + a as f64 / q as f64;
            let (s, c) = (2.0 * PI * phase).sin_cos();
            acc += Complex64::new(c, s);
        }
    }
    Ok(acc)
}

/// `epsilon(chi) = tau(chi) / (i^a sqrt(q))`; exactly `1` for real characters.
pub fn root_number(chi: &DirichletCharacter) -> Result<Complex64> {
    let tau = gauss_sum(chi)?;
    if chi.is_real() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ia = if chi.parity() == 1 {
        Complex64::new(0.0, 1.0)
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(tau / (ia * (chi.modulus() as f64).sqrt()))
}

/// `gamma(s)` in `L(1 - s, chi) = epsilon gamma(s) L(s, conj chi)`.
pub fn gamma_factor(chi: &DirichletCharacter, s: Complex64) -> Complex64 {
    let a = chi.parity() as f64;
    let q = chi.modulus() as f64;
    let lg = ln_gamma_complex((s + a) / 2.0) - ln_gamma_complex((1.0 - s + a) / 2.0);
    ((s - 0.5) * (q / PI).ln() + lg).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeResidual {
    pub residual: f64,
    /// `|L(1 - s, chi)|`, for relative comparisons.
    pub magnitude: f64,
}

/// `|L(1 - s, chi) - epsilon gamma(s) L(s, conj chi)|` for primitive `chi`.
pub fn functional_equation_residual(chi: &DirichletCharacter, s: Complex64) -> Result<FeResidual> {
    require_primitive(chi)?;
    let lhs = l_value(chi, 1.0 - s)?;
    let rhs = root_number(chi)? * gamma_factor(chi, s) * l_value(&chi.conjugate(), s)?;
    Ok(FeResidual {
        residual: (lhs - rhs).norm(),
        magnitude: lhs.norm(),
    })
}

/// Functional-equation residuals for every primitive character of a family
/// at the points `s`; rows follow the family's character order.
pub fn family_residuals(family: &CharacterFamily, points: &[Complex64]) -> Result<Vec<Vec<FeResidual>>> {
    let chars = family.characters();
    let eps: Vec<Complex64> = chars.iter().map(root_number).collect::<Result<_>>()?;
    let conj_index: Vec<usize> = chars
        .iter()
        .map(|c| {
            let cc = c.conjugate();
            chars
                .iter()
                .position(|d| *d == cc)
                .ok_or_else(|| Error::Domain("family is not closed under conjugation".into()))
        })
        .collect::<Result<_>>()?;
    let mut rows = vec![Vec::with_capacity(points.len()); chars.len()];
    for &s in points {
        let at_s = family.l_values(s)?;
        let at_reflected = family.l_values(1.0 - s)?;
        for (i, chi) in chars.iter().enumerate() {
            let rhs = eps[i] * gamma_factor(chi, s) * at_s[conj_index[i]];
            rows[i].push(FeResidual {
                residual: (at_reflected[i] - rhs).norm(),
                magnitude: at_reflected[i].norm(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaBoundReport {
    pub sigma: f64,
    /// `max_t |gamma(sigma + i t)| / C(sigma + i t)^{sigma - 1/2}`.
    pub max_ratio: f64,
    /// The same ratio's minimum; bounded below by reflection.
    pub min_ratio: f64,
    pub argmax_t: f64,
}

/// Scan `|gamma(s)| / C(s)^{sigma - 1/2}` over `sigma + i t`, `t` in `t_grid`.
pub fn gamma_factor_bound_check(chi: &DirichletCharacter, sigma: f64, t_grid: &[f64]) -> Result<GammaBoundReport> {
    if !(sigma >= 0.5) {
        return Err(Error::Domain(format!("sigma = {sigma} must be >= 1/2")));
    }
    let cond = AnalyticConductor::of_character(chi);
    let mut rep = GammaBoundReport {
        sigma,
        max_ratio: 0.0,
        min_ratio: f64::INFINITY,
        argmax_t: 0.0,
    };
    for &t in t_grid {
        let s = Complex64::new(sigma, t);
        let r = gamma_factor(chi, s).norm() / cond.at(s).powf(sigma - 0.5);
        if r > rep.max_ratio {
            rep.max_ratio = r;
            rep.argmax_t = t;
        }
        rep.min_ratio = rep.min_ratio.min(r);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    pub sigma: f64,
    /// `max_t |L(sigma + i t)| / C(sigma + i t)^{(1 - sigma)/2 + eps}`.
    pub max_ratio: f64,
    pub argmax_t: f64,
}

impl ConvexityReport {
    fn empty(sigma: f64) -> Self {
        ConvexityReport {
            sigma,
            max_ratio: 0.0,
            argmax_t: 0.0,
        }
    }

    fn record(&mut self, t: f64, ratio: f64) {
        if ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.argmax_t = t;
        }
    }
}

fn check_convexity_sigma(sigma: f64, eps: f64) -> Result<()> {
    if !(eps > 0.0) || !(sigma >= -eps && sigma <= 1.0 + eps) {
        return Err(Error::Domain(format!(
            "convexity check needs eps > 0 and -eps <= sigma <= 1 + eps (sigma = {sigma}, eps = {eps})"
        )));
    }
    Ok(())
}

pub fn convexity_bound_check(
    chi: &DirichletCharacter,
    sigma: f64,
    t_grid: &[f64],
    eps: f64,
) -> Result<ConvexityReport> {
    check_convexity_sigma(sigma, eps)?;
    let cond = AnalyticConductor::of_character(chi);
    let exponent = 0.5 * (1.0 - sigma) + eps;
    let mut rep = ConvexityReport::empty(sigma);
    for &t in t_grid {
        let s = Complex64::new(sigma, t);
        rep.record(t, l_value(chi, s)?.norm() / cond.at(s).powf(exponent));
    }
    Ok(rep)
}

/// Convexity ratios for every character of a family on the uniform grid
/// `t0 + k h`, `k < count`.
pub fn convexity_family_check(
    family: &CharacterFamily,
    sigma: f64,
    eps: f64,
    t0: f64,
    h: f64,
    count: usize,
) -> Result<Vec<ConvexityReport>> {
    check_convexity_sigma(sigma, eps)?;
    let grid = family.l_values_on_line(sigma, t0, h, count)?;
    let conds: Vec<AnalyticConductor> = family
        .characters()
        .iter()
        .map(AnalyticConductor::of_character)
        .collect();
    let exponent = 0.5 * (1.0 - sigma) + eps;
    let mut reps = vec![ConvexityReport::empty(sigma); conds.len()];
    for (i, row) in grid.iter().enumerate() {
        let t = t0 + h * i as f64;
        let s = Complex64::new(sigma, t);
        for (j, v) in row.iter().enumerate() {
            reps[j].record(t, v.norm() / conds[j].at(s).powf(exponent));
        }
    }
    Ok(reps)
}
