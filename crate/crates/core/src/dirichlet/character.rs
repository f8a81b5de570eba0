use crate::arith::{factorize, gcd, kronecker, lcm, mod_pow, primitive_root, totient};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ComponentKind {
    /// Cyclic group mod an odd prime power, or mod 4.
    Cyclic,
    /// The `-1` factor of `(Z/2^e)^x`, `e >= 3`.
    MinusOne,
    /// The `5` factor of `(Z/2^e)^x`, `e >= 3`.
    Five,
}

#[derive(Debug, Clone)]
struct Component {
    prime: u64,
    exponent: u32,
    prime_power: u64,
    kind: ComponentKind,
    order: u64,
    /// Generator lifted to `Z/q`: congruent to 1 modulo the other prime powers.
    generator: u64,
    /// Discrete log of each residue mod `prime_power`; `u32::MAX` for non-units.
    logs: Vec<u32>,
}

/// The unit group `(Z/q)^x` with fixed generators and discrete-log tables.
#[derive(Debug, Clone)]
pub struct DirichletGroup {
    modulus: u64,
    phi: u64,
    exponent: u64,
    components: Vec<Component>,
}

fn crt_lift(residue: u64, prime_power: u64, modulus: u64) -> u64 {
    let rest = modulus / prime_power;
    if rest == 1 {
        return residue % modulus;
    }
    // x = residue mod prime_power, x = 1 mod rest.
    (0..prime_power)
        .map(|k| 1 + k * rest)
        .find(|x| x % prime_power == residue % prime_power)
        .expect("CRT solution exists")
}

impl DirichletGroup {
    pub fn new(modulus: u64) -> Result<Arc<Self>> {
        if modulus == 0 {
            return Err(Error::Domain("modulus must be >= 1".into()));
        }
        let mut components = Vec::new();
        for (p, e) in factorize(modulus) {
            let pp = p.pow(e);
            if p == 2 {
                if e == 1 {
                    continue;
                }
                if e == 2 {
                    let mut logs = vec![u32::MAX; 4];
                    logs[1] = 0;
                    logs[3] = 1;
                    components.push(Component {
                        prime: 2,
                        exponent: 2,
                        prime_power: 4,
                        kind: ComponentKind::Cyclic,
                        order: 2,
                        generator: crt_lift(3, 4, modulus),
                        logs,
                    });
                    continue;
                }
                let half = pp / 4;
                let mut sign_logs = vec![u32::MAX; pp as usize];
                let mut five_logs = vec![u32::MAX; pp as usize];
                let mut v = 1u64;
                for b in 0..half {
                    sign_logs[v as usize] = 0;
                    five_logs[v as usize] = b as u32;
                    sign_logs[(pp - v) as usize] = 1;
                    five_logs[(pp - v) as usize] = b as u32;
                    v = v * 5 % pp;
                }
                components.push(Component {
                    prime: 2,
                    exponent: e,
                    prime_power: pp,
                    kind: ComponentKind::MinusOne,
                    order: 2,
                    generator: crt_lift(pp - 1, pp, modulus),
                    logs: sign_logs,
                });
                components.push(Component {
                    prime: 2,
                    exponent: e,
                    prime_power: pp,
                    kind: ComponentKind::Five,
                    order: half,
                    generator: crt_lift(5, pp, modulus),
                    logs: five_logs,
                });
            } else {
                let mut g = primitive_root(p);
                if e > 1 && mod_pow(g, p - 1, p * p) == 1 {
                    g += p;
                }
                let order = pp / p * (p - 1);
                let mut logs = vec![u32::MAX; pp as usize];
                let mut x = 1u64;
                for k in 0..order {
                    logs[x as usize] = k as u32;
                    x = x * g % pp;
                }
                components.push(Component {
                    prime: p,
                    exponent: e,
                    prime_power: pp,
                    kind: ComponentKind::Cyclic,
                    order,
                    generator: crt_lift(g, pp, modulus),
                    logs,
                });
            }
        }
        let exponent = components.iter().fold(1, |acc, c| lcm(acc, c.order));
        Ok(Arc::new(Self {
            modulus,
            phi: totient(modulus),
            exponent,
            components,
        }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Group order `phi(q)`.
    pub fn order(&self) -> u64 {
        self.phi
    }

    /// Exponent of the group: every character value is a power of `e(1/exponent)`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Generators (as residues mod q) and their orders.
    pub fn generators(&self) -> Vec<(u64, u64)> {
        self.components.iter().map(|c| (c.generator, c.order)).collect()
    }

    fn value_index(&self, exponents: &[u64], n: u64) -> Option<u64> {
        let l = self.exponent;
        let mut idx = 0u64;
        for (c, &j) in self.components.iter().zip(exponents) {
            let log = c.logs[(n % c.prime_power) as usize];
            if log == u32::MAX {
                return None;
            }
            idx = (idx + (j * (log as u64) % c.order) * (l / c.order)) % l;
        }
        if self.modulus > 1 && gcd(n, self.modulus) != 1 {
            return None;
        }
        Some(idx)
    }

    /// Every character of the group, principal first.
    pub fn characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        let mut out = Vec::with_capacity(self.phi as usize);
        let mut exps = vec![0u64; self.components.len()];
        loop {
            out.push(DirichletCharacter::from_exponents(self.clone(), exps.clone()));
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return out;
                }
                exps[i] += 1;
                if exps[i] < self.components[i].order {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}

/// Enumerate all characters mod `q`, refusing when `phi(q) > cap`.
pub fn enumerate_characters(modulus: u64, cap: u64) -> Result<Vec<DirichletCharacter>> {
    if modulus == 0 {
        return Err(Error::Domain("modulus must be >= 1".into()));
    }
    let count = totient(modulus);
    if count > cap {
        return Err(Error::EnumerationOverflow { count, cap });
    }
    Ok(DirichletGroup::new(modulus)?.characters())
}

/// A Dirichlet character, stored as exponents on the group's generators:
/// `chi(g_i) = e(j_i / ord(g_i))`.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<DirichletGroup>,
    exponents: Vec<u64>,
    conductor: u64,
    odd: bool,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirichletCharacter({})", self.label())
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

fn p_adic_valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

impl DirichletCharacter {
    pub fn from_exponents(group: Arc<DirichletGroup>, exponents: Vec<u64>) -> Self {
        assert_eq!(exponents.len(), group.components.len());
        let exponents: Vec<u64> = exponents
            .iter()
            .zip(&group.components)
            .map(|(j, c)| j % c.order)
            .collect();
        let mut conductor = 1u64;
        let mut i = 0;
        while i < group.components.len() {
            let c = &group.components[i];
            match c.kind {
                ComponentKind::Cyclic if c.prime == 2 => {
                    if exponents[i] != 0 {
                        conductor *= 4;
                    }
                }
                ComponentKind::Cyclic => {
                    let j = exponents[i];
                    if j != 0 {
                        let v = p_adic_valuation(j, c.prime).min(c.exponent - 1);
                        conductor *= c.prime.pow(c.exponent - v);
                    }
                }
                ComponentKind::MinusOne => {
                    let (ja, jb) = (exponents[i], exponents[i + 1]);
                    if jb != 0 {
                        conductor *= 1 << (c.exponent - p_adic_valuation(jb, 2));
                    } else if ja != 0 {
                        conductor *= 4;
                    }
                    i += 1;
                }
                ComponentKind::Five => unreachable!("Five follows MinusOne"),
            }
            i += 1;
        }
        let odd = group.modulus > 2
            && group
                .value_index(&exponents, group.modulus - 1)
                .map(|k| k != 0)
                .unwrap_or(false);
        Self {
            group,
            exponents,
            conductor,
            odd,
        }
    }

    pub fn principal(modulus: u64) -> Result<Self> {
        let g = DirichletGroup::new(modulus)?;
        let n = g.components.len();
        Ok(Self::from_exponents(g, vec![0; n]))
    }

    /// The character `n -> (d/n)` modulo `|d|` for a fundamental discriminant `d`.
    pub fn kronecker(d: i64) -> Result<Self> {
        if !crate::arith::is_fundamental_discriminant(d) {
            return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
        }
        let g = DirichletGroup::new(d.unsigned_abs())?;
        let exps = g
            .components
            .iter()
            .map(|c| {
                if kronecker(d, c.generator as i64) == 1 {
                    0
                } else {
                    c.order / 2
                }
            })
            .collect();
        Ok(Self::from_exponents(g, exps))
    }

    pub fn group(&self) -> &Arc<DirichletGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&j| j == 0)
    }

    /// `0` for even characters, `1` for odd ones.
    pub fn parity(&self) -> u8 {
        self.odd as u8
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// `(generator, j, ord)` triples: `chi(generator) = e(j / ord)`.
    pub fn exponent_map(&self) -> Vec<(u64, u64, u64)> {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &j)| (c.generator, j, c.order))
            .collect()
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .fold(1, |acc, (c, &j)| lcm(acc, c.order / gcd(j, c.order)))
    }

    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    /// `k` with `chi(n) = e(k / exponent)`, or `None` when `gcd(n, q) > 1`.
    pub fn value_index(&self, n: u64) -> Option<u64> {
        self.group.value_index(&self.exponents, n)
    }

    pub fn value(&self, n: u64) -> Complex64 {
        match self.value_index(n) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => root_of_unity(k, self.group.exponent),
        }
    }

    /// Values at `0..q`.
    pub fn values(&self) -> Vec<Complex64> {
        (0..self.modulus()).map(|n| self.value(n)).collect()
    }

    pub fn conjugate(&self) -> Self {
        let exps = self
            .exponents
            .iter()
            .zip(&self.group.components)
            .map(|(&j, c)| (c.order - j) % c.order)
            .collect();
        Self {
            group: self.group.clone(),
            exponents: exps,
            conductor: self.conductor,
            odd: self.odd,
        }
    }

    pub fn label(&self) -> String {
        let js: Vec<String> = self.exponents.iter().map(|j| j.to_string()).collect();
        format!("{}[{}]", self.modulus(), js.join(","))
    }
}

/// `e(k / n)` with exact values at multiples of a quarter turn.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    let (s, c) = (2.0 * PI * k as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// Smallest `n >= 1` with `chi(n)` neither 0 nor 1.
pub fn least_nonresidue(chi: &DirichletCharacter) -> Result<u64> {
    if chi.is_principal() {
        return Err(Error::TrivialCharacter);
    }
    (1..chi.modulus())
        .find(|&n| matches!(chi.value_index(n), Some(k) if k != 0))
        .ok_or(Error::TrivialCharacter)
}

/// Smallest `n >= 1` with `(d/n) = -1` for a fundamental discriminant `d`.
pub fn least_kronecker_nonresidue(d: i64) -> Result<u64> {
    if !crate::arith::is_fundamental_discriminant(d) {
        return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
    }
    (1..=d.unsigned_abs())
        .find(|&n| kronecker(d, n as i64) == -1)
        .ok_or(Error::TrivialCharacter)
}
