use super::field::{IdealCountTable, ImaginaryQuadraticField, DEFAULT_X_CAP};
use crate::arith::{gcd, is_fundamental_discriminant, is_prime, kronecker, negative_fundamental_discriminants, prime_discriminants, smallest_prime_factors};
use crate::dirichlet::{l_value, DirichletCharacter};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::mellin::{CoefficientStream, GrowthClaim};
use num_complex::Complex64;

/// Default bound on the primes examined by [`beta_search`].
pub const DEFAULT_BETA_CAP: u64 = 10_000_000;

/// The genus character attached to `disc = d1 * d2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenusCharacter {
    field: ImaginaryQuadraticField,
    d1: i64,
    d2: i64,
}

impl GenusCharacter {
    pub fn new(field: &ImaginaryQuadraticField, d1: i64) -> Result<Self> {
        let disc = field.discriminant();
        if d1 == 1 || d1 == disc {
            return Err(Error::TrivialCharacter);
        }
        if d1 == 0 || disc % d1 != 0 {
            return Err(Error::Domain(format!("{d1} does not divide {disc}")));
        }
        let d2 = disc / d1;
        if !is_fundamental_discriminant(d1) || !is_fundamental_discriminant(d2) {
            return Err(Error::Domain(format!("{disc} = {d1} * {d2} is not a product of fundamental discriminants")));
        }
        if gcd(d1.unsigned_abs(), d2.unsigned_abs()) != 1 {
            return Err(Error::Domain(format!("{d1} and {d2} are not coprime")));
        }
        Ok(Self {
            field: field.clone(),
            d1,
            d2,
        })
    }

    pub fn field(&self) -> &ImaginaryQuadraticField {
        &self.field
    }

    pub fn d1(&self) -> i64 {
        self.d1
    }

    pub fn d2(&self) -> i64 {
        self.d2
    }

    pub fn label(&self) -> String {
        format!("{}={}*{}", self.field.discriminant(), self.d1, self.d2)
    }

    /// The value at the ramified prime above `q | disc`: the symbol of the
    /// cofactor discriminant not divisible by `q`.
    pub fn ramified_value(&self, q: u64) -> i32 {
        if self.d1.unsigned_abs() % q == 0 {
            kronecker(self.d2, q as i64)
        } else {
            kronecker(self.d1, q as i64)
        }
    }
}

/// The `2^{t-1} - 1` nontrivial genus characters, where `t` is the number of
/// prime discriminants of the field. `d1` runs over the nonempty products
/// that omit the last prime discriminant.
pub fn genus_characters(field: &ImaginaryQuadraticField) -> Vec<GenusCharacter> {
    let parts = prime_discriminants(field.discriminant());
    let free = parts.len().saturating_sub(1);
    (1u32..(1 << free))
        .map(|mask| {
            let d1 = (0..free).filter(|i| mask & (1 << i) != 0).map(|i| parts[i]).product::<i64>();
            GenusCharacter::new(field, d1).expect("prime-discriminant split is a genus pair")
        })
        .collect()
}

/// Frobenius value of a genus character above a rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusValue {
    Ramified,
    /// `(p)` stays prime; it is principal, so the value is trivial.
    InertTrivial,
    Split(i32),
}

pub fn genus_value(chi: &GenusCharacter, p: u64) -> Result<GenusValue> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(match kronecker(chi.field.discriminant(), p as i64) {
        0 => GenusValue::Ramified,
        -1 => GenusValue::InertTrivial,
        _ => GenusValue::Split(kronecker(chi.d1, p as i64)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaResult {
    /// Norm of the first unramified prime with nontrivial value.
    pub beta: u64,
    pub witness_prime: u64,
    /// `log beta / log |disc|`.
    pub exponent_ratio: f64,
}

/// Scan primes in increasing norm for the first nontrivial Frobenius value.
/// Inert primes have norm `p^2` and trivial value, so only split primes can
/// terminate the scan.
pub fn beta_search(chi: &GenusCharacter, cap: u64) -> Result<BetaResult> {
    let disc_abs = chi.field.abs_discriminant() as f64;
    let mut p = 2;
    while p <= cap {
        if is_prime(p) {
            if let GenusValue::Split(v) = genus_value(chi, p)? {
                if v != 1 {
                    return Ok(BetaResult {
                        beta: p,
                        witness_prime: p,
                        exponent_ratio: (p as f64).ln() / disc_abs.ln(),
                    });
                }
            }
        }
        p += 1;
    }
    Err(Error::SearchCap { cap })
}

/// `prod_{q | disc} (1 - alpha_q q^{-s})`, the factor turning `L(s, chi)`
/// into the unramified L-function.
pub fn ramified_factor(chi: &GenusCharacter, s: Complex64) -> Complex64 {
    chi.field
        .ramified_primes()
        .iter()
        .map(|&q| {
            let alpha = chi.ramified_value(q) as f64;
            Complex64::new(1.0, 0.0) - alpha * (-s * (q as f64).ln()).exp()
        })
        .product()
}

/// `L(s, chi_{d1}) L(s, chi_{d2})` times the ramified factor.
pub fn unramified_l(chi: &GenusCharacter, s: Complex64) -> Result<Complex64> {
    let l1 = l_value(&DirichletCharacter::kronecker(chi.d1)?, s)?;
    let l2 = l_value(&DirichletCharacter::kronecker(chi.d2)?, s)?;
    Ok(l1 * l2 * ramified_factor(chi, s))
}

/// Coefficients `a(n) = sum_{d | n} (d1/d) (d2/(n/d))` for `n <= n_max`;
/// index 0 holds 0.
pub fn genus_l_coefficients(chi: &GenusCharacter, n_max: u64) -> Vec<i64> {
    let n_max = n_max as usize;
    let spf = smallest_prime_factors(n_max.max(1));
    let mut a = vec![0i64; n_max + 1];
    if n_max >= 1 {
        a[1] = 1;
    }
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let mut m = n / p;
        let mut e = 1u32;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        let u = kronecker(chi.d1, p as i64) as i64;
        let v = kronecker(chi.d2, p as i64) as i64;
        let local: i64 = (0..=e).map(|j| u.pow(j) * v.pow(e - j)).sum();
        a[n] = a[m] * local;
    }
    a
}

/// Coefficients of the unramified L-function,
/// `b_n = a(n) - sum_j alpha_j a(n/q_j) + sum_{i<j} alpha_i alpha_j a(n/(q_i q_j)) - ...`.
pub fn genus_coefficients(chi: &GenusCharacter, n_max: u64) -> Vec<i64> {
    let mut b = genus_l_coefficients(chi, n_max);
    let n_max = n_max as usize;
    for &q in chi.field.ramified_primes() {
        let alpha = chi.ramified_value(q) as i64;
        let q = q as usize;
        let mut n = n_max - n_max % q;
        while n >= q {
            b[n] -= alpha * b[n / q];
            n -= q;
        }
    }
    b
}

/// A Dirichlet-series evaluation with its truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    /// `|B(N)| N^{-sigma} (1 + |s| / sigma)` with `B` the partial sum of `b_n`.
    pub truncation: f64,
    pub terms: u64,
}

/// `sum_{n <= N} b_n n^{-s}` for `Re s > 1`.
pub fn unramified_l_series(chi: &GenusCharacter, s: Complex64, terms: u64) -> Result<SeriesValue> {
    if s.re <= 1.0 {
        return Err(Error::Convergence(format!("series needs Re s > 1, got {s}")));
    }
    check_terms(terms)?;
    let b = genus_coefficients(chi, terms);
    Ok(series_from(&b, s))
}

fn check_terms(terms: u64) -> Result<()> {
    if terms == 0 || terms > DEFAULT_X_CAP {
        return Err(Error::Range {
            x: terms as f64,
            max: DEFAULT_X_CAP as f64,
        });
    }
    Ok(())
}

/// Series values at several points sharing one coefficient table.
pub fn unramified_l_series_many(chi: &GenusCharacter, points: &[Complex64], terms: u64) -> Result<Vec<SeriesValue>> {
    if let Some(s) = points.iter().find(|s| s.re <= 1.0) {
        return Err(Error::Convergence(format!("series needs Re s > 1, got {s}")));
    }
    check_terms(terms)?;
    let b = genus_coefficients(chi, terms);
    Ok(points.iter().map(|&s| series_from(&b, s)).collect())
}

fn series_from(b: &[i64], s: Complex64) -> SeriesValue {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut partial = 0i64;
    for (n, &c) in b.iter().enumerate().skip(1) {
        partial += c;
        if c != 0 {
            acc += c as f64 * (-s * (n as f64).ln()).exp();
        }
    }
    let n = (b.len() - 1) as f64;
    SeriesValue {
        value: acc,
        truncation: partial.unsigned_abs().max(1) as f64 * n.powf(-s.re) * (1.0 + s.norm() / s.re),
        terms: b.len() as u64 - 1,
    }
}

/// Checks `sum_{n <= x} b_n >= A0(x)` and the termwise inequality for
/// every `n < beta` (capped at the table size).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSumComparison {
    pub checked_up_to: u64,
    pub min_gap: i64,
    pub termwise_holds: bool,
}

impl PartialSumComparison {
    pub fn holds(&self) -> bool {
        self.termwise_holds && self.min_gap >= 0
    }
}

pub fn partial_sum_comparison(chi: &GenusCharacter, beta: u64, table: &IdealCountTable) -> Result<PartialSumComparison> {
    let upto = (beta.saturating_sub(1)).min(table.x_max());
    let b = genus_coefficients(chi, upto.max(1));
    let ramified = chi.field.ramified_primes();
    let mut bsum = 0i64;
    let mut min_gap = i64::MAX;
    let mut termwise = true;
    for n in 1..=upto {
        let coprime_count = if ramified.iter().all(|&q| n % q != 0) {
            table.count(n) as i64
        } else {
            0
        };
        termwise &= b[n as usize] >= coprime_count;
        bsum += b[n as usize];
        min_gap = min_gap.min(bsum - table.sieved_direct(n as f64)? as i64);
    }
    Ok(PartialSumComparison {
        checked_up_to: upto,
        min_gap: if upto == 0 { 0 } else { min_gap },
        termwise_holds: termwise,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenusBetaRow {
    pub disc: i64,
    pub d1: i64,
    pub d2: i64,
    pub class_number: usize,
    pub beta: u64,
    pub exponent_ratio: f64,
    pub partial_sums: PartialSumComparison,
}

/// `beta` for every nontrivial genus character of every fundamental
/// `disc_min <= disc <= -3` with even class number, ordered by `|disc|`
/// and then by `d1`.
pub fn genus_beta_scan(disc_min: i64, cap: u64, exec: Execution) -> Result<Vec<GenusBetaRow>> {
    let discs = negative_fundamental_discriminants(disc_min);
    let per_field = exec::map(exec, &discs, |&d| -> Result<Vec<GenusBetaRow>> {
        let field = ImaginaryQuadraticField::new(d)?;
        if field.class_number() % 2 != 0 {
            return Ok(Vec::new());
        }
        let chars = genus_characters(&field);
        let mut results = Vec::with_capacity(chars.len());
        let mut found = Vec::with_capacity(chars.len());
        for chi in &chars {
            found.push(beta_search(chi, cap)?);
        }
        let longest = found.iter().map(|r| r.beta).max().unwrap_or(1);
        let table = IdealCountTable::new(&field, longest.saturating_sub(1).max(1))?;
        for (chi, r) in chars.iter().zip(found) {
            results.push(GenusBetaRow {
                disc: d,
                d1: chi.d1,
                d2: chi.d2,
                class_number: field.class_number(),
                beta: r.beta,
                exponent_ratio: r.exponent_ratio,
                partial_sums: partial_sum_comparison(chi, r.beta, &table)?,
            });
        }
        results.sort_by_key(|r| r.d1);
        Ok(results)
    });
    let mut rows = Vec::new();
    for r in per_field {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Coefficients `b_n` of the unramified L-function of a genus character,
/// as a degree-2 stream.
#[derive(Debug, Clone)]
pub struct GenusStream {
    chi: GenusCharacter,
}

impl GenusStream {
    pub fn new(chi: GenusCharacter) -> Self {
        Self { chi }
    }

    fn b(&self, n: u64) -> i64 {
        if n == 0 || gcd(n, self.chi.field.abs_discriminant()) != 1 {
            return 0;
        }
        crate::arith::factorize(n)
            .into_iter()
            .map(|(p, e)| {
                let u = kronecker(self.chi.d1, p as i64) as i64;
                let v = kronecker(self.chi.d2, p as i64) as i64;
                (0..=e).map(|j| u.pow(j) * v.pow(e - j)).sum::<i64>()
            })
            .product()
    }
}

impl CoefficientStream for GenusStream {
    fn label(&self) -> String {
        format!("genus[{}]", self.chi.label())
    }
    fn degree(&self) -> u32 {
        2
    }
    fn analytic_conductor(&self) -> f64 {
        // One factor is even and one odd: shifts 0 and 1.
        self.chi.field.abs_discriminant() as f64 * 2.0 * 3.0
    }
    fn coefficient(&self, n: u64) -> Complex64 {
        Complex64::new(self.b(n) as f64, 0.0)
    }
    fn integer_coefficient(&self, n: u64) -> Option<i64> {
        Some(self.b(n))
    }
    fn growth(&self) -> GrowthClaim {
        // |B(x)| <= sum_{n <= x} d(n) <= (1 + 1/(e eps)) x^{1 + eps}.
        let eps = 0.05;
        GrowthClaim {
            constant: 1.0 + 1.0 / (std::f64::consts::E * eps),
            xi: 0.0,
            nu: 1.0 + eps,
        }
    }
    fn l_function(&self, s: Complex64) -> Result<Complex64> {
        unramified_l(&self.chi, s)
    }
}
