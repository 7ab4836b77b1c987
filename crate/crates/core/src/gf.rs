//! Arithmetic in GF(p^k).
//!
//! Elements are stored in the polynomial basis, constant term first, and
//! reduced modulo a canonical monic irreducible polynomial. The canonical
//! modulus of degree `k` is the least monic irreducible when the non-leading
//! coefficients are compared constant term first. Degree one uses the modulus
//! `x`, which makes the arithmetic plain residue arithmetic mod `p`.
//!
//! Elements are enumerated by their integer encoding `sum c_i p^i`, so `0`
//! is always first and `1` second.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::primes;

/// Largest field order accepted by [`make_field`].
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("element index {index} out of range for GF({order})")]
    IndexOutOfRange { index: u64, order: u64 },
}

/// Parameters of a finite field GF(p^k).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    /// `k + 1` coefficients, constant term first; the last one is 1.
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.k)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}) mod {}",
            self.p,
            self.k,
            format_poly(&self.modulus)
        )
    }
}

/// An element of a field described by a shared [`FieldSpec`].
#[derive(Clone)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Integer encoding `sum c_i p^i`; this is the enumeration position.
    pub fn index(&self) -> u64 {
        let p = self.spec.p as u64;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * p + c as u64)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.spec == other.spec
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.k == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{}", format_poly(&self.coeffs))
        }
    }
}

fn format_poly(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// A field handle: the spec plus element constructors and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    spec: Arc<FieldSpec>,
}

/// Builds the canonical field of order `q`.
pub fn make_field(q: u64) -> Result<Field, GfError> {
    let fact = primes::is_prime_power(q);
    if !fact.is_prime_power {
        return Err(GfError::NotAPrimePower(q));
    }
    if q > MAX_ORDER {
        return Err(GfError::OrderTooLarge(q));
    }
    let p = fact.base as u32;
    let k = fact.exponent;
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        least_irreducible(p, k)
    };
    Ok(Field {
        spec: Arc::new(FieldSpec { p, k, modulus }),
    })
}

impl Field {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u64 {
        self.spec.order()
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(vec![0; self.spec.k as usize])
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.spec.k as usize];
        c[0] = 1;
        self.wrap(c)
    }

    /// Element whose integer encoding is `index`.
    pub fn element(&self, index: u64) -> Result<FieldElement, GfError> {
        let order = self.order();
        if index >= order {
            return Err(GfError::IndexOutOfRange { index, order });
        }
        let p = self.spec.p as u64;
        let mut rest = index;
        let coeffs = (0..self.spec.k)
            .map(|_| {
                let c = (rest % p) as u32;
                rest /= p;
                c
            })
            .collect();
        Ok(self.wrap(coeffs))
    }

    /// Element from raw coefficients (constant term first); reduced mod p
    /// and padded or reduced mod the modulus as needed.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        let p = self.spec.p;
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x % p).collect();
        self.reduce(&mut c);
        self.wrap(c)
    }

    /// All `q` elements in enumeration order.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.order())
            .map(|i| self.element(i).expect("index below order"))
            .collect()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        let p = self.spec.p;
        let c = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % p)
            .collect();
        Ok(self.wrap(c))
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        let p = self.spec.p;
        let c = a.coeffs.iter().map(|&x| (p - x) % p).collect();
        Ok(self.wrap(c))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        let p = self.spec.p as u64;
        let k = self.spec.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let mut c: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
        self.reduce(&mut c);
        Ok(self.wrap(c))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> Result<FieldElement, GfError> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative inverse via `a^(q-2)`.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        self.pow(a, self.order() - 2)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        let ib = self.inv(b)?;
        self.mul(a, &ib)
    }

    fn wrap(&self, coeffs: Vec<u32>) -> FieldElement {
        FieldElement {
            spec: Arc::clone(&self.spec),
            coeffs,
        }
    }

    fn check(&self, a: &FieldElement) -> Result<(), GfError> {
        if Arc::ptr_eq(&a.spec, &self.spec) || *a.spec == *self.spec {
            Ok(())
        } else {
            Err(GfError::SpecMismatch)
        }
    }

    /// Reduces a coefficient vector of any length to exactly `k` entries.
    fn reduce(&self, c: &mut Vec<u32>) {
        let k = self.spec.k as usize;
        let p = self.spec.p;
        let m = &self.spec.modulus;
        // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        while c.len() > k {
            let top = c.pop().expect("nonempty");
            if top == 0 {
                continue;
            }
            let shift = c.len() - k;
            for i in 0..k {
                let sub = (top as u64 * m[i] as u64 % p as u64) as u32;
                c[shift + i] = (c[shift + i] + p - sub) % p;
            }
        }
        c.resize(k, 0);
    }
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p); both
/// constant term first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let top = r.pop().expect("nonempty");
        if top == 0 {
            continue;
        }
        let shift = r.len() - db;
        for i in 0..db {
            let sub = (top as u64 * b[i] as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Monic polynomials of degree `d` in canonical order: non-leading
/// coefficients compared constant term first.
fn monic_polys(p: u32, d: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(d);
    (0..count).map(move |mut idx| {
        // constant term is the most significant digit
        let mut c = vec![0u32; d as usize + 1];
        for i in (0..d as usize).rev() {
            c[i] = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        c[d as usize] = 1;
        c
    })
}

/// Irreducibility by trial division over all monic divisors of degree
/// `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|div| !poly_rem(poly, &div, p).is_empty()))
}

fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    monic_polys(p, k)
        .find(|m| is_irreducible(m, p))
        .expect("an irreducible polynomial exists in every degree")
}
