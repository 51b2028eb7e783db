//! Arithmetic in GF(p^m) over an explicit irreducible polynomial.
//!
//! Elements are coefficient vectors of length `m`, constant term first. The
//! base-p *encoding* of an element (or polynomial) reads that vector as a
//! base-p integer; all searches break ties by smallest encoding so results
//! are reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

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

/// Distinct prime factors, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
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

// ============================================================================
// Polynomials over GF(p)
// ============================================================================

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - lead * bc % p) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

/// The monic polynomial of degree `deg` whose lower coefficients encode `code`.
fn monic_from_code(p: u64, deg: usize, mut code: u64) -> Vec<u64> {
    let mut c = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        c.push(code % p);
        code /= p;
    }
    c.push(1);
    c
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let div = monic_from_code(p, d, code);
            if poly_rem(poly, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree `m` over GF(p) with minimal
/// base-p encoding (constant term first).
pub fn find_irreducible(p: u64, m: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if m < 1 {
        return domain("extension degree must be at least 1");
    }
    let count = p
        .checked_pow(m as u32)
        .ok_or_else(|| Error::Resource(format!("GF({p}^{m}) is too large")))?;
    (0..count)
        .map(|code| monic_from_code(p, m, code))
        .find(|f| is_irreducible(f, p))
        .ok_or_else(|| Error::Consistency(format!("no irreducible of degree {m} over GF({p})")))
}

// ============================================================================
// Field context and elements
// ============================================================================

/// An element of GF(p^m): `m` residues mod `p`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Serializable description of a field: `(p, m, poly)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub m: usize,
    pub poly: Vec<u64>,
}

/// GF(p^m) with a fixed monic irreducible modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    m: usize,
    poly: Vec<u64>,
}

impl FieldCtx {
    /// Validate and wrap a modulus. `poly` is constant-term-first, monic,
    /// degree `m`, and must be irreducible.
    pub fn new(p: u64, m: usize, poly: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if m < 1 || poly.len() != m + 1 || poly[m] != 1 {
            return domain(format!("modulus must be monic of degree {m}"));
        }
        if poly.iter().any(|&c| c >= p) {
            return domain("modulus coefficients must be residues mod p");
        }
        if !is_irreducible(&poly, p) {
            return domain("modulus is not irreducible");
        }
        p.checked_pow(m as u32)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::Resource(format!("GF({p}^{m}) is too large")))?;
        Ok(FieldCtx { p, m, poly })
    }

    /// GF(p^m) over the minimal-encoding irreducible polynomial.
    pub fn minimal(p: u64, m: usize) -> Result<Self> {
        let poly = find_irreducible(p, m)?;
        Self::new(p, m, poly)
    }

    pub fn from_desc(d: &FieldDesc) -> Result<Self> {
        Self::new(d.p, d.m, d.poly.clone())
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc { p: self.p, m: self.m, poly: self.poly.clone() }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.poly
    }

    /// `p^m`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.m] }
    }

    pub fn one(&self) -> FieldElem {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> FieldElem {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    /// The class of `x`; equals the constant `-poly[0]` when `m = 1`.
    pub fn x(&self) -> FieldElem {
        self.element(&[0, 1])
    }

    /// Reduce an arbitrary coefficient list into the field.
    pub fn element(&self, coeffs: &[u64]) -> FieldElem {
        let c: Vec<u64> = coeffs.iter().map(|&c| c % self.p).collect();
        self.pad(poly_rem(&c, &self.poly, self.p))
    }

    fn pad(&self, mut c: Vec<u64>) -> FieldElem {
        c.resize(self.m, 0);
        FieldElem { coeffs: c }
    }

    pub fn encode(&self, a: &FieldElem) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn decode(&self, mut code: u64) -> FieldElem {
        let mut c = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            c.push(code % self.p);
            code /= self.p;
        }
        FieldElem { coeffs: c }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % self.p).collect(),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem { coeffs: a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect() }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.p;
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        self.pad(poly_rem(&trim(prod), &self.poly, p))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return domain("zero has no inverse");
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// The Frobenius map `a ↦ a^p`.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &FieldElem) -> Result<u64> {
        if a.is_zero() {
            return domain("zero has no multiplicative order");
        }
        let mut ord = self.order() - 1;
        for r in prime_factors(ord) {
            while ord % r == 0 && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }

    pub fn is_primitive(&self, a: &FieldElem) -> bool {
        !a.is_zero() && self.multiplicative_order(a).ok() == Some(self.order() - 1)
    }

    /// The subfield of order `p^e` as the fixed points of `x ↦ x^(p^e)`,
    /// sorted by encoding. Requires `e | m`.
    pub fn subfield(&self, e: usize) -> Result<Vec<FieldElem>> {
        if e == 0 || self.m % e != 0 {
            return Err(Error::Domain(format!("{e} does not divide {}", self.m)));
        }
        let q = self.p.pow(e as u32);
        if e == self.m {
            return Ok((0..self.order()).map(|c| self.decode(c)).collect());
        }
        // Nonzero subfield elements are the powers of g^((p^m - 1)/(q - 1)).
        let g = find_primitive(self)?;
        let h = self.pow(&g, (self.order() - 1) / (q - 1));
        let mut out = vec![self.zero()];
        let mut cur = self.one();
        for _ in 0..q - 1 {
            out.push(cur.clone());
            cur = self.mul(&cur, &h);
        }
        for x in &out {
            if self.pow(x, q) != *x {
                return Err(Error::Consistency(format!("{x} is not fixed by x^{q}")));
            }
        }
        out.sort_by_key(|x| self.encode(x));
        Ok(out)
    }
}

/// The nonzero element of minimal encoding whose multiplicative order is
/// `p^m - 1`.
pub fn find_primitive(ctx: &FieldCtx) -> Result<FieldElem> {
    (1..ctx.order())
        .map(|c| ctx.decode(c))
        .find(|a| ctx.is_primitive(a))
        .ok_or_else(|| Error::Consistency("field has no primitive element".into()))
}

// ============================================================================
// Discrete logarithms
// ============================================================================

/// Full discrete-log table for a primitive element, built by one pass over
/// its powers.
#[derive(Clone, Debug)]
pub struct DlogTable {
    generator: FieldElem,
    /// `log[code]` for nonzero codes; `u32::MAX` at zero.
    log: Vec<u32>,
    /// `pow[e]` = encoding of `generator^e`.
    pow: Vec<u32>,
}

impl DlogTable {
    pub fn build(ctx: &FieldCtx, generator: &FieldElem) -> Result<Self> {
        if !ctx.is_primitive(generator) {
            return Err(Error::Domain(format!("{generator} is not primitive")));
        }
        let q = ctx.order() as usize;
        let mut log = vec![u32::MAX; q];
        let mut pow = Vec::with_capacity(q - 1);
        let mut cur = ctx.one();
        for e in 0..q - 1 {
            let code = ctx.encode(&cur) as usize;
            if log[code] != u32::MAX {
                return Err(Error::Consistency(format!("power {e} repeats")));
            }
            log[code] = e as u32;
            pow.push(code as u32);
            cur = ctx.mul(&cur, generator);
        }
        if cur != ctx.one() {
            return Err(Error::Consistency("generator^(q-1) != 1".into()));
        }
        Ok(DlogTable { generator: generator.clone(), log, pow })
    }

    pub fn generator(&self) -> &FieldElem {
        &self.generator
    }

    /// Size of the multiplicative group.
    pub fn period(&self) -> u64 {
        self.pow.len() as u64
    }

    pub fn log(&self, ctx: &FieldCtx, y: &FieldElem) -> Result<u64> {
        if y.is_zero() {
            return domain("log of zero is undefined");
        }
        Ok(self.log[ctx.encode(y) as usize] as u64)
    }

    pub fn exp(&self, ctx: &FieldCtx, e: u64) -> FieldElem {
        ctx.decode(self.pow[(e % self.period()) as usize] as u64)
    }
}

/// The exponent `e` in `0..p^m - 1` with `g^e = y`.
pub fn dlog(ctx: &FieldCtx, g: &FieldElem, y: &FieldElem) -> Result<u64> {
    if y.is_zero() {
        return domain("log of zero is undefined");
    }
    DlogTable::build(ctx, g)?.log(ctx, y)
}
