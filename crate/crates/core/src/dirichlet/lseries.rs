//! Dirichlet L-values through per-residue Hurwitz sums.
//!
//! For a modulus `q` and each unit residue `a`, the partial zeta
//! `Z_a(s) = sum_{n = a mod q} n^{-s}` is computed by direct summation up to
//! `n = a + Kq` followed by an Euler-Maclaurin tail. The `1/(s-1)` pole is
//! separated out, so `L(s, chi) = sum_a chi(a) Z_a(s)` plus the pole part for
//! the principal character only. One table of partial zetas serves every
//! character of the modulus.

use super::character::DirichletCharacter;
use crate::arith::gcd;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `B_{2j} / (2j)!` for `j = 1..=8`.
const EM_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

pub const MIN_REAL_PART: f64 = -5.0;
pub const MAX_IMAG_PART: f64 = 1.0e4;
const RESYNC: usize = 64;

/// Direct terms per residue class for height `t`.
pub fn direct_terms(t: f64) -> u64 {
    (t.abs().ceil() as u64 + 10).max(20)
}

fn check_region(sigma: f64, t_max: f64) -> Result<()> {
    if !sigma.is_finite() || !t_max.is_finite() {
        return Err(Error::Domain("non-finite argument".into()));
    }
    if sigma <= MIN_REAL_PART || t_max > MAX_IMAG_PART {
        return Err(Error::AccuracyUnattainable(format!(
            "s = {sigma} + i t with |t| <= {t_max} is outside Re s > {MIN_REAL_PART}, |Im s| <= {MAX_IMAG_PART}"
        )));
    }
    Ok(())
}

fn cexpm1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

/// `(e^z - 1) / z`.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        1.0 + z * (0.5 + z / 6.0)
    } else {
        cexpm1(z) / z
    }
}

/// Partial zetas `Z_a(s)` without their pole parts, plus the principal pole term.
#[derive(Debug, Clone)]
pub struct PartialZetas {
    pub s: Complex64,
    /// Indexed like [`ResidueSums::residues`].
    pub values: Vec<Complex64>,
    /// `phi(q) / (q (s - 1))`; infinite at `s = 1`.
    pub pole: Complex64,
}

/// Unit residues of a modulus and the machinery to sum over them.
#[derive(Debug, Clone)]
pub struct ResidueSums {
    modulus: u64,
    residues: Vec<u64>,
}

impl ResidueSums {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1);
        let residues = (1..=modulus).filter(|&a| gcd(a, modulus) == 1).collect();
        Self { modulus, residues }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    fn tail(&self, a: u64, k_terms: u64, s: Complex64, ln_end: f64) -> Complex64 {
        let q = self.modulus as f64;
        let n_end = (a + k_terms * self.modulus) as f64;
        let w = n_end / q;
        let x = (-s * ln_end).exp();
        let z = (1.0 - s) * ln_end;
        let integral = -ln_end * phi1(z) / q;
        let mut rising = s;
        let inv_w = 1.0 / w;
        let inv_w2 = inv_w * inv_w;
        let mut wp = inv_w;
        let mut em = Complex64::new(0.0, 0.0);
        for (j, c) in EM_COEFFS.iter().enumerate() {
            em += rising * (c * wp);
            let k = (2 * j + 1) as f64;
            rising *= (s + k) * (s + k + 1.0);
            wp *= inv_w2;
        }
        integral + x * (0.5 + em)
    }

    fn pole(&self, s: Complex64) -> Complex64 {
        let phi = self.residues.len() as f64;
        phi / (self.modulus as f64 * (s - 1.0))
    }

    /// Partial zetas at a single point.
    pub fn at(&self, s: Complex64) -> Result<PartialZetas> {
        check_region(s.re, s.im.abs())?;
        let k_terms = direct_terms(s.im);
        let q = self.modulus;
        let values = self
            .residues
            .iter()
            .map(|&a| {
                let mut acc = Complex64::new(0.0, 0.0);
                if s.im == 0.0 {
                    let mut r = 0.0;
                    for k in 0..k_terms {
                        r += (-(s.re) * ((a + k * q) as f64).ln()).exp();
                    }
                    acc.re = r;
                } else {
                    for k in 0..k_terms {
                        let ln = ((a + k * q) as f64).ln();
                        let mag = (-s.re * ln).exp();
                        let (sn, cs) = (s.im * ln).sin_cos();
                        acc += Complex64::new(mag * cs, -mag * sn);
                    }
                }
                let ln_end = ((a + k_terms * q) as f64).ln();
                acc + self.tail(a, k_terms, s, ln_end)
            })
            .collect();
        Ok(PartialZetas {
            s,
            values,
            pole: self.pole(s),
        })
    }

    /// Partial zetas on the uniform grid `sigma + i (t0 + j h)`, `j < count`.
    pub fn on_line(&self, sigma: f64, t0: f64, h: f64, count: usize) -> Result<Vec<PartialZetas>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let t_last = t0 + (count - 1) as f64 * h;
        let t_max = t0.abs().max(t_last.abs());
        check_region(sigma, t_max)?;
        if count == 1 {
            return Ok(vec![self.at(Complex64::new(sigma, t0))?]);
        }
        let k_terms = direct_terms(t_max);
        let q = self.modulus;
        let len = self.residues.len() * k_terms as usize;
        let mut logs = Vec::with_capacity(len);
        let mut amps = Vec::with_capacity(len);
        for &a in &self.residues {
            for k in 0..k_terms {
                let ln = ((a + k * q) as f64).ln();
                logs.push(ln);
                amps.push((-sigma * ln).exp());
            }
        }
        let steps: Vec<Complex64> = logs
            .iter()
            .map(|&ln| {
                let (s, c) = (h * ln).sin_cos();
                Complex64::new(c, -s)
            })
            .collect();
        let mut phases = vec![Complex64::new(0.0, 0.0); len];
        let ln_ends: Vec<f64> = self
            .residues
            .iter()
            .map(|&a| ((a + k_terms * q) as f64).ln())
            .collect();
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let t = t0 + j as f64 * h;
            if j % RESYNC == 0 {
                for (p, &ln) in phases.iter_mut().zip(&logs) {
                    let (s, c) = (t * ln).sin_cos();
                    *p = Complex64::new(c, -s);
                }
            } else {
                for (p, st) in phases.iter_mut().zip(&steps) {
                    *p *= st;
                }
            }
            let s = Complex64::new(sigma, t);
            let k = k_terms as usize;
            let values = self
                .residues
                .iter()
                .enumerate()
                .map(|(r, &a)| {
                    let block = r * k..(r + 1) * k;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (p, m) in phases[block.clone()].iter().zip(&amps[block]) {
                        acc += p * m;
                    }
                    acc + self.tail(a, k_terms, s, ln_ends[r])
                })
                .collect();
            out.push(PartialZetas {
                s,
                values,
                pole: self.pole(s),
            });
        }
        Ok(out)
    }
}

/// Characters of one modulus together with their value table on unit residues.
#[derive(Debug, Clone)]
pub struct CharacterFamily {
    sums: ResidueSums,
    characters: Vec<DirichletCharacter>,
    table: Vec<Vec<Complex64>>,
}

impl CharacterFamily {
    pub fn new(characters: Vec<DirichletCharacter>) -> Result<Self> {
        let q = characters
            .first()
            .map(|c| c.modulus())
            .ok_or_else(|| Error::Domain("empty character family".into()))?;
        if characters.iter().any(|c| c.modulus() != q) {
            return Err(Error::Domain("family mixes moduli".into()));
        }
        let sums = ResidueSums::new(q);
        let table = characters
            .iter()
            .map(|c| sums.residues().iter().map(|&a| c.value(a)).collect())
            .collect();
        Ok(Self {
            sums,
            characters,
            table,
        })
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    pub fn modulus(&self) -> u64 {
        self.sums.modulus()
    }

    fn combine(&self, z: &PartialZetas) -> Result<Vec<Complex64>> {
        self.characters
            .iter()
            .zip(&self.table)
            .map(|(c, row)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (v, zv) in row.iter().zip(&z.values) {
                    acc += v * zv;
                }
                if c.is_principal() {
                    if z.s == Complex64::new(1.0, 0.0) {
                        return Err(Error::Pole {
                            modulus: c.modulus(),
                        });
                    }
                    acc += z.pole;
                }
                Ok(acc)
            })
            .collect()
    }

    /// `L(s, chi)` for every character in the family.
    pub fn l_values(&self, s: Complex64) -> Result<Vec<Complex64>> {
        self.combine(&self.sums.at(s)?)
    }

    /// `L(sigma + i t_j, chi)` on a uniform grid; outer index is the grid point.
    pub fn l_values_on_line(
        &self,
        sigma: f64,
        t0: f64,
        h: f64,
        count: usize,
    ) -> Result<Vec<Vec<Complex64>>> {
        self.sums
            .on_line(sigma, t0, h, count)?
            .iter()
            .map(|z| self.combine(z))
            .collect()
    }
}

/// `L(s, chi)`; accurate to about `1e-9` relative for `Re s > -5`,
/// `|Im s| <= 200`.
pub fn l_value(chi: &DirichletCharacter, s: Complex64) -> Result<Complex64> {
    if chi.is_principal() && s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            modulus: chi.modulus(),
        });
    }
    let fam = CharacterFamily::new(vec![chi.clone()])?;
    Ok(fam.l_values(s)?[0])
}

/// Riemann zeta through the modulus-1 family.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    l_value(&DirichletCharacter::principal(1)?, s)
}
