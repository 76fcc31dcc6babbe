//! Finite fields `F_q = F_p[t]/(h)` for prime powers `q = p^e`.
//!
//! Elements are stored as a single integer code `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! where `c_i` are the coordinates with respect to `1, t, ..., t^{e-1}`. The code is a
//! canonical (bijective) encoding, so equality of elements is equality of codes.
//! Multiplication goes through full exponent/logarithm tables built at construction.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the field size.
pub const DEFAULT_MAX_Q: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The integer code of the element.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Callers guarantee `code < q`.
    #[inline]
    pub(crate) fn from_code_unchecked(code: u32) -> FieldElement {
        FieldElement(code)
    }
}

/// A concrete model of `F_q` together with a fixed generator of `F_q^×`
/// and its discrete logarithm table.
#[derive(Clone)]
pub struct FieldDescriptor {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients low to high (length `e + 1`).
    modulus: Vec<u32>,
    generator: FieldElement,
    /// `exp[k]` is the code of `generator^k`, `0 <= k < q - 1`.
    exp: Vec<u32>,
    /// `log[code]` is the discrete log; `log[0]` is unused.
    log: Vec<u32>,
    trace: Vec<u32>,
    /// `p^i` for `i < e`.
    radix: Vec<u32>,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.modulus == other.modulus
            && self.generator == other.generator
    }
}

impl Eq for FieldDescriptor {}

impl FieldDescriptor {
    /// Builds `F_{p^e}` with the default size cap. When `modulus` is absent the first
    /// monic irreducible of degree `e` is used; "first" means smallest code of its
    /// lower coefficients, i.e. lexicographic from the highest coordinate down.
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Self> {
        Self::with_cap(p, e, modulus, DEFAULT_MAX_Q)
    }

    pub fn with_cap(p: u64, e: u32, modulus: Option<&[u64]>, max_q: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidDegree);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= max_q && q <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge {
                q: p.saturating_pow(e),
                cap: max_q,
            })?;
        let p = p as u32;
        let modulus = match modulus {
            Some(coeffs) => {
                if coeffs.len() != e as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients, got {}",
                        e + 1,
                        coeffs.len()
                    )));
                }
                let h: Vec<u32> = coeffs.iter().map(|&c| (c % p as u64) as u32).collect();
                if h[e as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !is_irreducible(&h, p) {
                    return Err(Error::ReducibleModulus);
                }
                h
            }
            None => first_irreducible(p, e),
        };
        let radix: Vec<u32> = (0..e).map(|i| p.pow(i)).collect();
        let q = q as u32;

        let mut field = FieldDescriptor {
            p,
            e,
            q,
            modulus,
            generator: FieldElement::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
            radix,
        };
        let order = q as u64 - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&code| {
                factors
                    .iter()
                    .all(|&r| field.slow_pow(code, order / r) != 1)
            })
            .expect("F_q^x is cyclic");
        field.install_generator(FieldElement(generator))?;
        field.trace = (0..q)
            .map(|code| field.compute_trace(FieldElement(code)))
            .collect();
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, e, None)
    }

    /// The same field with a different choice of generator of `F_q^×`.
    pub fn with_generator(&self, generator: FieldElement) -> Result<Self> {
        let mut field = self.clone();
        field.install_generator(generator)?;
        Ok(field)
    }

    fn install_generator(&mut self, generator: FieldElement) -> Result<()> {
        let q = self.q as usize;
        if generator.is_zero() || generator.0 as usize >= q {
            return Err(Error::InvalidGenerator);
        }
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut cur = 1u32;
        for k in 0..q - 1 {
            if log[cur as usize] != u32::MAX {
                return Err(Error::InvalidGenerator);
            }
            log[cur as usize] = k as u32;
            exp.push(cur);
            cur = self.slow_mul(cur, generator.0);
        }
        if cur != 1 {
            return Err(Error::InvalidGenerator);
        }
        self.generator = generator;
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q - 1`, the order of the unit group and of its character group.
    #[inline]
    pub fn unit_order(&self) -> u32 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Canonical textual form, accepted back by [`parse_field_spec`].
    pub fn spec_string(&self) -> String {
        if self.e == 1 {
            format!("q={}", self.p)
        } else {
            let coeffs: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
            format!("q={}^{};mod={}", self.p, self.e, coeffs.join(","))
        }
    }

    /// Element with the given coordinates (reduced mod p).
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.e as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a degree-{} field",
                coeffs.len(),
                self.e
            )));
        }
        let code = coeffs
            .iter()
            .zip(&self.radix)
            .map(|(&c, &r)| (c % self.p as u64) as u32 * r)
            .sum();
        Ok(FieldElement(code))
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_code(&self, code: u32) -> Option<FieldElement> {
        (code < self.q).then_some(FieldElement(code))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        self.radix.iter().map(|&r| (x.0 / r) % self.p).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.add_codes(x.0, y.0))
    }

    #[inline]
    pub(crate) fn add_codes(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            for &r in &self.radix {
                let s = (a % self.p + b % self.p) % self.p;
                out += s * r;
                a /= self.p;
                b /= self.p;
            }
            out
        }
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        if self.p == 2 {
            return x;
        }
        let mut a = x.0;
        let mut out = 0;
        for &r in &self.radix {
            out += ((self.p - a % self.p) % self.p) * r;
            a /= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.is_zero() || y.is_zero() {
            return FieldElement::ZERO;
        }
        let m = self.unit_order();
        let k = self.log[x.0 as usize] + self.log[y.0 as usize];
        FieldElement(self.exp[(if k >= m { k - m } else { k }) as usize])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.unit_order();
        Ok(FieldElement(
            self.exp[((m - self.log[x.0 as usize]) % m) as usize],
        ))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^n` for any integer `n`; `0^0 = 1`, negative powers of zero fail.
    pub fn pow(&self, x: FieldElement, n: i64) -> Result<FieldElement> {
        if x.is_zero() {
            return match n {
                0 => Ok(FieldElement::ONE),
                n if n > 0 => Ok(FieldElement::ZERO),
                _ => Err(Error::DivisionByZero),
            };
        }
        let m = self.unit_order() as i64;
        let k = (self.log[x.0 as usize] as i64 * n.rem_euclid(m)).rem_euclid(m);
        Ok(FieldElement(self.exp[k as usize]))
    }

    /// Discrete logarithm with respect to the generator.
    pub fn dlog(&self, x: FieldElement) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(self.log[x.0 as usize])
    }

    /// `generator^k`, `k` taken mod `q - 1`.
    #[inline]
    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement(self.exp[(k % self.unit_order() as u64) as usize])
    }

    /// Absolute trace `F_q -> F_p`, returned as a residue in `[0, p)`.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u32 {
        self.trace[x.0 as usize]
    }

    pub fn frobenius(&self, x: FieldElement) -> FieldElement {
        self.pow(x, self.p as i64).expect("nonnegative power")
    }

    fn compute_trace(&self, x: FieldElement) -> u32 {
        let mut acc = FieldElement::ZERO;
        let mut y = x;
        for _ in 0..self.e {
            acc = self.add(acc, y);
            y = self.frobenius(y);
        }
        debug_assert!(acc.0 < self.p, "trace must land in the prime field");
        acc.0
    }

    // Multiplication on codes through polynomial arithmetic, used before the
    // log tables exist.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let pa = self.coeffs(FieldElement(a));
        let pb = self.coeffs(FieldElement(b));
        let prod = poly_rem(&poly_mul(&pa, &pb, self.p), &self.modulus, self.p);
        prod.iter().zip(&self.radix).map(|(&c, &r)| c * r).sum()
    }

    fn slow_pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            n >>= 1;
        }
        acc
    }
}

/// Parses `q=p^e`, `q=<prime power>` or `q=p^e;mod=c0,c1,...,1`.
pub fn parse_field_spec(spec: &str) -> Result<FieldDescriptor> {
    let bad = || Error::FieldSpec(spec.to_string());
    let spec_trim = spec.trim();
    let mut parts = spec_trim.split(';');
    let head = parts.next().ok_or_else(bad)?.trim();
    let order = head.strip_prefix("q=").ok_or_else(bad)?.trim();
    let (p, e) = match order.split_once('^') {
        Some((p, e)) => (
            p.trim().parse::<u64>().map_err(|_| bad())?,
            e.trim().parse::<u32>().map_err(|_| bad())?,
        ),
        None => {
            let q = order.parse::<u64>().map_err(|_| bad())?;
            prime_power(q).ok_or(Error::NotPrime(q))?
        }
    };
    let mut modulus = None;
    for part in parts {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let coeffs = part.strip_prefix("mod=").ok_or_else(bad)?;
        let coeffs: Vec<u64> = coeffs
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        modulus = Some(coeffs);
    }
    FieldDescriptor::new(p, e, modulus.as_deref())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

/// All prime powers `q <= max`, increasing.
pub fn prime_powers_up_to(max: u64) -> Vec<u64> {
    (2..=max).filter(|&q| prime_power(q).is_some()).collect()
}

/// Distinct prime factors, increasing.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo the monic polynomial `h`.
fn poly_rem(a: &[u32], h: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dh = h.len() - 1;
    while r.len() > dh {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dh;
        for (i, &c) in h.iter().enumerate() {
            let sub = (lead as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(h: &[u32], p: u32) -> bool {
    let e = h.len() - 1;
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = low;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(h, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    (0..count)
        .map(|low| {
            let mut h: Vec<u32> = (0..e)
                .map(|i| ((low / (p as u64).pow(i)) % p as u64) as u32)
                .collect();
            h.push(1);
            h
        })
        .find(|h| is_irreducible(h, p))
        .expect("irreducible polynomials exist in every degree")
}
