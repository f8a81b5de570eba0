use crate::arith::{factorize, is_fundamental_discriminant, kronecker, smallest_prime_factors};
use crate::dirichlet::{l_value, zeta, DirichletCharacter};
use crate::error::{Error, Result};
use crate::mellin::{CoefficientStream, GrowthClaim};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest summation bound accepted by the counting functions.
pub const DEFAULT_X_CAP: u64 = 50_000_000;

/// A reduced positive definite form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }
}

/// `Q(sqrt(D))` for a negative fundamental discriminant `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImaginaryQuadraticField {
    disc: i64,
    forms: Vec<ReducedForm>,
    units: u32,
    ramified: Vec<u64>,
}

impl ImaginaryQuadraticField {
    pub fn new(disc: i64) -> Result<Self> {
        if disc >= 0 || !is_fundamental_discriminant(disc) {
            return Err(Error::NotFundamental(disc));
        }
        let n = disc.abs();
        let mut forms = Vec::new();
        let mut a = 1;
        while 3 * a * a <= n {
            for b in (-a + 1)..=a {
                if (b - disc).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                forms.push(ReducedForm { a, b, c });
            }
            a += 1;
        }
        let units = match disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        let ramified = factorize(n as u64).into_iter().map(|(p, _)| p).collect();
        Ok(Self {
            disc,
            forms,
            units,
            ramified,
        })
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// `D = |disc|`.
    pub fn abs_discriminant(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn forms(&self) -> &[ReducedForm] {
        &self.forms
    }

    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    pub fn units(&self) -> u32 {
        self.units
    }

    /// Rational primes dividing the discriminant; each lies under a single
    /// ramified prime of the same norm.
    pub fn ramified_primes(&self) -> &[u64] {
        &self.ramified
    }

    /// The quadratic character `(disc / .)`.
    pub fn character(&self) -> DirichletCharacter {
        DirichletCharacter::kronecker(self.disc).expect("fundamental discriminant")
    }
}

/// `r(n) = sum_{m | n} (disc / m)`, the number of ideals of norm `n`.
pub fn ideal_count(field: &ImaginaryQuadraticField, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    factorize(n)
        .into_iter()
        .map(|(p, e)| match kronecker(field.disc, p as i64) {
            1 => e as u64 + 1,
            0 => 1,
            _ => u64::from(e % 2 == 0),
        })
        .product()
}

/// `r(1..=n_max)` by a smallest-prime-factor sieve; index 0 holds 0.
pub fn ideal_counts(field: &ImaginaryQuadraticField, n_max: u64) -> Vec<u64> {
    let n_max = n_max as usize;
    let spf = smallest_prime_factors(n_max.max(1));
    let mut r = vec![0u64; n_max + 1];
    if n_max >= 1 {
        r[1] = 1;
    }
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let mut m = n / p;
        let mut e = 1u64;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        let local = match kronecker(field.disc, p as i64) {
            1 => e + 1,
            0 => 1,
            _ => u64::from(e % 2 == 0),
        };
        r[n] = r[m] * local;
    }
    r
}

fn check_bound(x: f64, cap: u64) -> Result<u64> {
    if x.is_nan() || x.floor() > cap as f64 {
        return Err(Error::Range { x, max: cap as f64 });
    }
    Ok(if x < 1.0 { 0 } else { x.floor() as u64 })
}

/// Exact ideal-count tables up to `x_max`: the Dedekind summation `B0`
/// and the count restricted to norms prime to the discriminant.
#[derive(Debug, Clone)]
pub struct IdealCountTable {
    field: ImaginaryQuadraticField,
    counts: Vec<u64>,
    b0: Vec<u64>,
    sieved: Vec<u64>,
}

impl IdealCountTable {
    pub fn new(field: &ImaginaryQuadraticField, x_max: u64) -> Result<Self> {
        check_bound(x_max as f64, DEFAULT_X_CAP)?;
        let counts = ideal_counts(field, x_max);
        let mut b0 = Vec::with_capacity(counts.len());
        let mut sieved = Vec::with_capacity(counts.len());
        let (mut acc, mut acc_s) = (0u64, 0u64);
        for (n, &r) in counts.iter().enumerate() {
            acc += r;
            if n > 0 && field.ramified.iter().all(|&p| n as u64 % p != 0) {
                acc_s += r;
            }
            b0.push(acc);
            sieved.push(acc_s);
        }
        Ok(Self {
            field: field.clone(),
            counts,
            b0,
            sieved,
        })
    }

    pub fn x_max(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    pub fn count(&self, n: u64) -> u64 {
        self.counts.get(n as usize).copied().unwrap_or(0)
    }

    /// `B0(x) = sum_{n <= x} r(n)`.
    pub fn b0(&self, x: f64) -> Result<u64> {
        let n = check_bound(x, self.x_max())?;
        Ok(self.b0[n as usize])
    }

    /// Ideals of norm `<= x` prime to every ramified prime, by direct count.
    pub fn sieved_direct(&self, x: f64) -> Result<u64> {
        let n = check_bound(x, self.x_max())?;
        Ok(self.sieved[n as usize])
    }

    /// The same count by inclusion-exclusion over the ramified primes:
    /// `sum_S (-1)^{|S|} B0(x / prod_S q)`.
    pub fn sieved_inclusion_exclusion(&self, x: f64) -> Result<u64> {
        let n = check_bound(x, self.x_max())?;
        let q = &self.field.ramified;
        let mut total: i64 = 0;
        for mask in 0u32..(1 << q.len()) {
            let mut prod = 1u64;
            for (i, &p) in q.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod = prod.saturating_mul(p);
                }
            }
            let term = self.b0[(n / prod) as usize] as i64;
            if mask.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total as u64)
    }

    /// `sup_{1 <= x <= x_max} |B0(x) - kappa x| / x^{1/3 + eps}` over integers.
    pub fn b0_error_ratio(&self, kappa: f64, eps: f64) -> f64 {
        (1..=self.x_max())
            .map(|n| {
                let x = n as f64;
                (self.b0[n as usize] as f64 - kappa * x).abs() / x.powf(1.0 / 3.0 + eps)
            })
            .fold(0.0, f64::max)
    }
}

/// `B0(x)` for `x <= DEFAULT_X_CAP`.
pub fn zeta_summation_b0(field: &ImaginaryQuadraticField, x: f64) -> Result<u64> {
    let n = check_bound(x, DEFAULT_X_CAP)?;
    IdealCountTable::new(field, n)?.b0(x)
}

/// Ideals of norm `<= x` prime to the ramified primes, for `x <= DEFAULT_X_CAP`.
pub fn sieved_a0(field: &ImaginaryQuadraticField, x: f64) -> Result<u64> {
    let n = check_bound(x, DEFAULT_X_CAP)?;
    IdealCountTable::new(field, n)?.sieved_direct(x)
}

/// `kappa = L(1, (disc / .))`, the residue of the Dedekind zeta function at 1.
pub fn residue_kappa(field: &ImaginaryQuadraticField) -> Result<f64> {
    Ok(l_value(&field.character(), Complex64::new(1.0, 0.0))?.re)
}

/// `2 pi h / (w sqrt D)`.
pub fn kappa_class_number_formula(field: &ImaginaryQuadraticField) -> f64 {
    2.0 * PI * field.class_number() as f64 / (field.units as f64 * (field.abs_discriminant() as f64).sqrt())
}

/// Products over the ramified norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrProducts {
    /// `prod (1 - 1/q)` over the field-ramified primes.
    pub q: f64,
    /// `prod (1 + q^{-xi})`.
    pub r: f64,
    /// `Q` for an everywhere-unramified character: the empty product.
    pub q_character: f64,
}

pub fn q_and_r(field: &ImaginaryQuadraticField, xi: f64) -> Result<QrProducts> {
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("xi = {xi} must be positive")));
    }
    let mut q = 1.0;
    let mut r = 1.0;
    for &p in &field.ramified {
        let p = p as f64;
        q *= 1.0 - 1.0 / p;
        r *= 1.0 + p.powf(-xi);
    }
    Ok(QrProducts {
        q,
        r,
        q_character: 1.0,
    })
}

/// The three mean-square pieces on `[1, beta]` at degree 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chapter3Integrals {
    /// `int_1^beta (Q kappa x^{1 - nu})^2 dx / x`.
    pub i1: f64,
    /// `D^{1/3 + eps} Q kappa int_1^beta x^{4/3 - 2 nu} dx / x`.
    pub i2_bound: f64,
    /// `D^{2/3 + eps} int_1^beta x^{-2 nu - 1/3 + eps} dx`.
    pub i3_bound: f64,
}

/// `int_1^beta x^{e - 1} dx`.
fn power_integral(e: f64, beta: f64) -> f64 {
    if e.abs() < 1e-12 {
        beta.ln()
    } else {
        (e * beta.ln()).exp_m1() / e
    }
}

pub fn chapter3_integrals_raw(q: f64, kappa: f64, d: f64, nu: f64, beta: f64, eps: f64) -> Result<Chapter3Integrals> {
    if !(nu > 0.5) {
        return Err(Error::Domain(format!("nu = {nu} must exceed 1/2")));
    }
    if !(beta >= 2.0) {
        return Err(Error::Domain(format!("beta = {beta} must be at least 2")));
    }
    let qk = q * kappa;
    Ok(Chapter3Integrals {
        i1: qk * qk * power_integral(2.0 - 2.0 * nu, beta),
        i2_bound: d.powf(1.0 / 3.0 + eps) * qk * power_integral(4.0 / 3.0 - 2.0 * nu, beta),
        i3_bound: d.powf(2.0 / 3.0 + eps) * power_integral(eps - 2.0 * nu + 2.0 / 3.0, beta),
    })
}

pub fn chapter3_integrals(field: &ImaginaryQuadraticField, nu: f64, beta: f64, eps: f64) -> Result<Chapter3Integrals> {
    let qr = q_and_r(field, 1.0 / 3.0)?;
    chapter3_integrals_raw(qr.q, residue_kappa(field)?, field.abs_discriminant() as f64, nu, beta, eps)
}

/// Smallest `beta >= 2` with `I1 > I2_bound`, by bisection on `log beta`;
/// `None` if there is none below `beta_max`.
pub fn crossover_beta(field: &ImaginaryQuadraticField, nu: f64, eps: f64, beta_max: f64) -> Result<Option<f64>> {
    let qr = q_and_r(field, 1.0 / 3.0)?;
    let kappa = residue_kappa(field)?;
    let d = field.abs_discriminant() as f64;
    let dominant = |b: f64| -> Result<bool> {
        let v = chapter3_integrals_raw(qr.q, kappa, d, nu, b, eps)?;
        Ok(v.i1 > v.i2_bound)
    };
    if dominant(2.0)? {
        return Ok(Some(2.0));
    }
    if !dominant(beta_max)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (2f64.ln(), beta_max.ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dominant(mid.exp())? {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(Some(hi.exp()))
}

/// `sum_{n <= N} r(n) n^{-s}` with the main-term tail `kappa N^{1-s}/(s-1)`
/// and the boundary term `-(B0(N) - kappa N) N^{-s}`.
pub fn dedekind_zeta_series(table: &IdealCountTable, kappa: f64, s: Complex64) -> Result<Complex64> {
    if s.re <= 1.0 {
        return Err(Error::Convergence(format!("series needs Re s > 1, got {s}")));
    }
    let n_max = table.x_max();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        let r = table.count(n);
        if r != 0 {
            acc += r as f64 * (-s * (n as f64).ln()).exp();
        }
    }
    let nf = n_max as f64;
    let nf_s = (-s * nf.ln()).exp();
    let main = kappa * nf * nf_s / (s - 1.0);
    let boundary = -(table.b0(nf)? as f64 - kappa * nf) * nf_s;
    Ok(acc + main + boundary)
}

/// `zeta(s) L(s, (disc / .))`.
pub fn dedekind_zeta_product(field: &ImaginaryQuadraticField, s: Complex64) -> Result<Complex64> {
    Ok(zeta(s)? * l_value(&field.character(), s)?)
}

/// Coefficients `r(n)` of the Dedekind zeta function as a degree-2 stream.
#[derive(Debug, Clone)]
pub struct IdealCountStream {
    field: ImaginaryQuadraticField,
}

impl IdealCountStream {
    pub fn new(field: ImaginaryQuadraticField) -> Self {
        Self { field }
    }
}

impl CoefficientStream for IdealCountStream {
    fn label(&self) -> String {
        format!("dedekind[{}]", self.field.disc)
    }
    fn degree(&self) -> u32 {
        2
    }
    fn analytic_conductor(&self) -> f64 {
        // Shifts 0 (zeta) and 1 (the odd character).
        self.field.abs_discriminant() as f64 * 2.0 * 3.0
    }
    fn coefficient(&self, n: u64) -> Complex64 {
        Complex64::new(ideal_count(&self.field, n) as f64, 0.0)
    }
    fn integer_coefficient(&self, n: u64) -> Option<i64> {
        Some(ideal_count(&self.field, n) as i64)
    }
    fn growth(&self) -> GrowthClaim {
        // B0(x) <= sum_{n <= x} d(n) <= x (1 + log x) <= (1 + 1/(e eps)) x^{1 + eps}.
        let eps = 0.05;
        GrowthClaim {
            constant: 1.0 + 1.0 / (std::f64::consts::E * eps),
            xi: 0.0,
            nu: 1.0 + eps,
        }
    }
    fn l_function(&self, s: Complex64) -> Result<Complex64> {
        dedekind_zeta_product(&self.field, s)
    }
}
