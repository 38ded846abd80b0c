//! Finite fields F_{p^m} backed by full log/antilog tables.
//!
//! Elements are stored by their integer encoding: the polynomial-basis
//! coefficient vector `(c_0, ..., c_{m-1})` maps to `sum c_i p^i`. Encoding
//! 0 is the additive identity and encoding 1 the multiplicative identity.
//! Construction is deterministic: with no user modulus, the monic irreducible
//! polynomial of smallest encoding is used, and the generator is the primitive
//! element of smallest encoding.

mod zp_poly;

use std::fmt;

use thiserror::Error;

/// Largest field order accepted. Every table is dense in q.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Marker in the logarithm-domain tables for the zero element.
pub(crate) const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported maximum of {max}")]
    FieldTooLarge { p: u64, m: u32, max: u64 },
    #[error("modulus must have {expected} coefficients (c0..cm), got {got}")]
    ModulusWrongDegree { expected: usize, got: usize },
    #[error("modulus must be monic")]
    ModulusNotMonic,
    #[error("modulus coefficient {0} is not a residue mod p")]
    ModulusCoefficientOutOfRange(u64),
    #[error("modulus is reducible over Z_{p}")]
    ReducibleModulus { p: u64 },
    #[error("element encoding {0} is outside the field")]
    EncodingOutOfRange(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroHasNoInverse,
    #[error("zero has no discrete logarithm")]
    ZeroHasNoLogarithm,
}

/// An element of a finite field, identified by its integer encoding.
///
/// Elements carry no reference to their field; every operation goes through
/// the owning [`FieldCtx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A fully constructed F_{p^m}.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    // log[enc] for enc != 0; log[0] = NO_LOG
    log: Vec<u32>,
    antilog: Vec<u32>,
    // zech[k] = log(1 + g^k), NO_LOG when 1 + g^k = 0
    zech: Vec<u32>,
    trace: Vec<u32>,
    order_primes: Vec<u64>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

fn digits(mut enc: u64, p: u64, m: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(enc % p);
        enc /= p;
    }
    zp_poly::trim(out)
}

fn encode(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FieldCtx {
    /// Builds F_{p^m}. With `modulus = None` the smallest-encoding monic
    /// irreducible of degree m is chosen. A supplied modulus is the full
    /// coefficient vector `c_0, ..., c_m` with `c_m = 1`.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<Self, GfError> {
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(GfError::CompositeCharacteristic(p));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(GfError::FieldTooLarge {
                p,
                m,
                max: MAX_FIELD_ORDER,
            })?;
        let md = m as usize;

        let modulus: Vec<u64> = match modulus {
            Some(c) => {
                if c.len() != md + 1 {
                    return Err(GfError::ModulusWrongDegree {
                        expected: md + 1,
                        got: c.len(),
                    });
                }
                if let Some(&bad) = c.iter().find(|&&x| x >= p) {
                    return Err(GfError::ModulusCoefficientOutOfRange(bad));
                }
                if c[md] != 1 {
                    return Err(GfError::ModulusNotMonic);
                }
                if !zp_poly::is_irreducible(c, p) {
                    return Err(GfError::ReducibleModulus { p });
                }
                c.to_vec()
            }
            None => (0..q)
                .map(|enc| {
                    let mut f = digits(enc, p, md);
                    f.resize(md, 0);
                    f.push(1);
                    f
                })
                .find(|f| zp_poly::is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists"),
        };

        let order = q - 1;
        let order_primes = prime_factors(order);
        let generator_enc = (1..q)
            .find(|&enc| {
                let a = digits(enc, p, md);
                order_primes.iter().all(|&l| {
                    zp_poly::pow_poly_mod(&a, order / l, &modulus, p) != [1]
                })
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let mut log = vec![NO_LOG; q as usize];
        let mut antilog = vec![0u32; order as usize];
        let gen_poly = digits(generator_enc, p, md);
        let mut cur: Vec<u64> = vec![1];
        for k in 0..order {
            let enc = encode(&cur, p) as usize;
            antilog[k as usize] = enc as u32;
            log[enc] = k as u32;
            cur = zp_poly::mul_mod(&cur, &gen_poly, &modulus, p);
        }
        debug_assert_eq!(cur, vec![1]);

        let mut ctx = FieldCtx {
            p: p as u32,
            m,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            generator: FieldElement(generator_enc as u32),
            log,
            antilog,
            zech: Vec::new(),
            trace: Vec::new(),
            order_primes,
        };
        ctx.zech = (0..order as usize)
            .map(|k| {
                let v = ctx.add(FieldElement(ctx.antilog[k]), FieldElement::ONE);
                ctx.log[v.0 as usize]
            })
            .collect();
        ctx.trace = ctx.trace_table();
        Ok(ctx)
    }

    // Tr is Z_p-linear, so it is fixed by its values on the basis x^i.
    fn trace_table(&self) -> Vec<u32> {
        let p = self.p as u64;
        let basis_traces: Vec<u64> = (0..self.m)
            .map(|i| {
                let xi = FieldElement(p.pow(i) as u32);
                let mut acc = FieldElement::ZERO;
                let mut conj = xi;
                for _ in 0..self.m {
                    acc = self.add(acc, conj);
                    conj = self.pow(conj, p);
                }
                debug_assert!(acc.0 < self.p, "trace must land in the prime field");
                acc.0 as u64
            })
            .collect();
        (0..self.q as u64)
            .map(|enc| {
                let mut e = enc;
                let mut t = 0u64;
                for &bt in &basis_traces {
                    t = (t + (e % p) * bt) % p;
                    e /= p;
                }
                t as u32
            })
            .collect()
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// Order of the multiplicative group, q - 1.
    pub fn group_order(&self) -> u64 {
        self.q as u64 - 1
    }

    /// The modulus coefficients `c_0, ..., c_m`.
    pub fn modulus(&self) -> Vec<u64> {
        self.modulus.iter().map(|&c| c as u64).collect()
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Distinct primes dividing q - 1.
    pub fn group_order_primes(&self) -> &[u64] {
        &self.order_primes
    }

    pub fn element(&self, encoding: u64) -> Result<FieldElement, GfError> {
        if encoding < self.q as u64 {
            Ok(FieldElement(encoding as u32))
        } else {
            Err(GfError::EncodingOutOfRange(encoding))
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, GfError> {
        let p = self.p as u64;
        if coeffs.len() > self.m as usize {
            return Err(GfError::EncodingOutOfRange(encode(coeffs, p)));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= p) {
            return Err(GfError::EncodingOutOfRange(bad));
        }
        Ok(FieldElement(encode(coeffs, p) as u32))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut d = digits(a.0 as u64, self.p as u64, self.m as usize);
        d.resize(self.m as usize, 0);
        d
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// `generator^k`, for any integer k.
    pub fn gen_pow(&self, k: i64) -> FieldElement {
        let idx = k.rem_euclid(self.group_order() as i64) as usize;
        FieldElement(self.antilog[idx])
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, a)
    }

    fn digitwise(&self, a: FieldElement, b: FieldElement, op: impl Fn(u32, u32, u32) -> u32) -> FieldElement {
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            out += op(x % p, y % p, p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % self.group_order();
        FieldElement(self.antilog[k as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroHasNoInverse);
        }
        let n = self.group_order();
        let k = (n - self.log[a.0 as usize] as u64) % n;
        Ok(FieldElement(self.antilog[k as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.group_order() as u128;
        let k = (self.log[a.0 as usize] as u128 * (e as u128 % n)) % n;
        FieldElement(self.antilog[k as usize])
    }

    /// Absolute trace to the prime field, returned as a residue mod p.
    pub fn trace(&self, a: FieldElement) -> u64 {
        self.trace[a.0 as usize] as u64
    }

    /// Discrete logarithm to the base of the fixed generator, in `[0, q-2]`.
    pub fn dlog(&self, a: FieldElement) -> Result<u64, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroHasNoLogarithm);
        }
        Ok(self.log[a.0 as usize] as u64)
    }

    pub fn antilog(&self, k: u64) -> FieldElement {
        FieldElement(self.antilog[(k % self.group_order()) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Result<u64, GfError> {
        let k = self.dlog(a)?;
        let n = self.group_order();
        Ok(n / gcd(k, n))
    }

    /// `log(1 + g^k)`, or `None` when `g^k = -1`.
    pub(crate) fn zech(&self, k: u64) -> Option<u64> {
        let z = self.zech[k as usize];
        (z != NO_LOG).then_some(z as u64)
    }

    pub(crate) fn raw_log(&self, a: FieldElement) -> u32 {
        self.log[a.0 as usize]
    }

    /// Renders an element as `0` or `g^k`.
    pub fn format(&self, a: FieldElement) -> String {
        match self.dlog(a) {
            Ok(k) => format!("g^{k}"),
            Err(_) => "0".to_owned(),
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
