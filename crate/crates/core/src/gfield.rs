//! Arithmetic in GF(2^m) for 1 <= m <= 16, plus the DFT pair used by the
//! Reed-Solomon code definition.
//!
//! Elements are stored in polynomial basis as `u16`. Hot paths (decoders) work
//! directly on raw values through [`Field`] methods; [`FieldElement`] is the
//! checked wrapper that refuses to mix elements from different fields.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} outside 1..=16")]
    DegreeOutOfRange(u32),
    #[error("polynomial {poly:#x} does not have degree {m}")]
    WrongDegree { poly: u32, m: u32 },
    #[error("polynomial {0:#x} is reducible over GF(2)")]
    Reducible(u32),
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("elements belong to different fields")]
    MixedFields,
    #[error("value {value} is not an element of GF(2^{m})")]
    ValueOutOfRange { value: u32, m: u32 },
    #[error("polynomial of degree {degree} does not fit transform length {n}")]
    TooLong { degree: usize, n: usize },
    #[error("transform length {n} differs from the multiplicative order {order}")]
    BadLength { n: usize, order: usize },
}

/// Default primitive polynomials, indexed by m. Low-weight choices from the
/// usual tables; bit i is the coefficient of x^i.
pub const DEFAULT_POLYS: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B,
    0x4443, 0x8003, 0x1100B,
];

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

/// GF(2^m) with log/antilog tables.
pub struct Field {
    id: u64,
    m: u32,
    poly: u32,
    generator: u16,
    /// exp[i] = generator^i for i in 0..2*order, doubled to skip a modulo in mul.
    exp: Vec<u16>,
    /// log[x] for x != 0; log[0] is unused.
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.m, self.poly)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

/// Multiply two polynomials over GF(2) modulo `modulus` (degree `m`).
fn clmul_mod(mut a: u64, mut b: u64, modulus: u64, m: u32) -> u64 {
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

fn gf2_poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            let da = 63 - a.leading_zeros();
            a ^= b << (da - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Rabin's irreducibility test for a degree-m polynomial over GF(2).
pub fn is_irreducible(poly: u32, m: u32) -> bool {
    if m == 0 || 31 - poly.leading_zeros() != m {
        return false;
    }
    let f = poly as u64;
    // x^(2^i) mod f by repeated squaring of x.
    let frob = |i: u32| -> u64 {
        let mut x = if m == 1 { 2 ^ f } else { 2u64 };
        for _ in 0..i {
            x = clmul_mod(x, x, f, m);
        }
        x
    };
    let x = if m == 1 { 2 ^ f } else { 2u64 };
    if frob(m) != x {
        return false;
    }
    for p in prime_factors(m as u64) {
        let d = m / p as u32;
        let h = frob(d) ^ x;
        if gf2_poly_gcd(f, h) != 1 {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Build GF(2^m), using the default polynomial when `poly` is `None`.
    pub fn new(m: u32, poly: Option<u32>) -> Result<Arc<Field>, FieldError> {
        if !(1..=16).contains(&m) {
            return Err(FieldError::DegreeOutOfRange(m));
        }
        let poly = poly.unwrap_or(DEFAULT_POLYS[m as usize]);
        if poly >> m != 1 {
            return Err(FieldError::WrongDegree { poly, m });
        }
        if !is_irreducible(poly, m) {
            return Err(FieldError::Reducible(poly));
        }
        let q = 1u64 << m;
        let order = q - 1;
        let mulmod = |a: u64, b: u64| clmul_mod(a, b, poly as u64, m);
        let pow = |mut a: u64, mut e: u64| {
            let mut r = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = mulmod(r, a);
                }
                a = mulmod(a, a);
                e >>= 1;
            }
            r
        };
        let factors = prime_factors(order);
        let is_generator = |g: u64| g != 0 && factors.iter().all(|&p| pow(g, order / p) != 1);
        // x itself when the polynomial is primitive, otherwise the smallest generator.
        let generator = if m == 1 {
            1
        } else {
            (2..q).find(|&g| is_generator(g)).expect("finite field has a generator")
        };
        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for i in 0..order as usize {
            exp[i] = x as u16;
            exp[i + order as usize] = x as u16;
            log[x as usize] = i as u32;
            x = mulmod(x, generator);
        }
        debug_assert_eq!(x, 1);
        Ok(Arc::new(Field {
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
            m,
            poly,
            generator: generator as u16,
            exp,
            log,
        }))
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements, 2^m.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative order 2^m - 1.
    pub fn order(&self) -> usize {
        (1 << self.m) - 1
    }

    /// The generator alpha as a raw value.
    pub fn alpha(&self) -> u16 {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> u16 {
        assert!(b != 0, "division by zero in {self:?}");
        if a == 0 {
            0
        } else {
            let o = self.order() as u32;
            self.exp[(self.log[a as usize] + o - self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u16) -> Result<u16, FieldError> {
        if a == 0 {
            return Err(FieldError::InverseOfZero);
        }
        let o = self.order() as u32;
        Ok(self.exp[((o - self.log[a as usize]) % o) as usize])
    }

    /// a^e for any signed exponent (a must be nonzero if e < 0).
    pub fn pow(&self, a: u16, e: i64) -> u16 {
        if a == 0 {
            assert!(e >= 0, "negative power of zero");
            return if e == 0 { 1 } else { 0 };
        }
        let o = self.order() as i64;
        let l = (self.log[a as usize] as i64 * e).rem_euclid(o);
        self.exp[l as usize]
    }

    /// alpha^e.
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> u16 {
        let o = self.order() as i64;
        self.exp[e.rem_euclid(o) as usize]
    }

    /// Discrete log base alpha; `None` for zero.
    pub fn log(&self, a: u16) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn element(self: &Arc<Self>, value: u32) -> Result<FieldElement, FieldError> {
        if value as usize >= self.size() {
            return Err(FieldError::ValueOutOfRange { value, m: self.m });
        }
        Ok(FieldElement { value: value as u16, field: Arc::clone(self) })
    }

    /// Evaluate a raw polynomial (lowest degree first) at `x` by Horner's rule.
    pub fn eval(&self, coeffs: &[u16], x: u16) -> u16 {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }

    /// Formal derivative; in characteristic 2 only odd-degree terms survive.
    pub fn derivative(&self, coeffs: &[u16]) -> Vec<u16> {
        coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect()
    }

    pub fn poly_mul(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u16; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= self.mul(x, y);
            }
        }
        out
    }
}

/// Degree of a raw coefficient vector; `None` stands in for the degree of the zero polynomial.
pub fn degree(coeffs: &[u16]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0)
}

/// A checked field element. Arithmetic panics on mixed fields; the `try_*`
/// methods return [`FieldError::MixedFields`] instead.
#[derive(Clone)]
pub struct FieldElement {
    value: u16,
    field: Arc<Field>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF(2^{})", self.value, self.field.m)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.id == other.field.id && self.value == other.value
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field.id == other.field.id {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(Self { value: self.value ^ other.value, field: Arc::clone(&self.field) })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(Self { value: self.field.mul(self.value, other.value), field: Arc::clone(&self.field) })
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        Ok(Self { value: self.field.inv(self.value)?, field: Arc::clone(&self.field) })
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        if self.value == 0 && e < 0 {
            return Err(FieldError::InverseOfZero);
        }
        Ok(Self { value: self.field.pow(self.value, e), field: Arc::clone(&self.field) })
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> FieldElement {
        self.try_add(rhs).expect("mixed fields")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> FieldElement {
        self.try_mul(rhs).expect("mixed fields")
    }
}

/// Polynomial over a field, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Arc<Field>,
    coeffs: Vec<u16>,
}

impl Poly {
    pub fn new(field: &Arc<Field>, coeffs: Vec<u16>) -> Result<Self, FieldError> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c as usize >= field.size()) {
            return Err(FieldError::ValueOutOfRange { value: bad as u32, m: field.m });
        }
        Ok(Poly { field: Arc::clone(field), coeffs })
    }

    pub fn zero(field: &Arc<Field>) -> Self {
        Poly { field: Arc::clone(field), coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u16> {
        self.coeffs
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Index of the last nonzero coefficient, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        degree(&self.coeffs)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        FieldElement { value: self.coeffs.get(i).copied().unwrap_or(0), field: Arc::clone(&self.field) }
    }

    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        if x.field.id != self.field.id {
            return Err(FieldError::MixedFields);
        }
        Ok(FieldElement { value: self.field.eval(&self.coeffs, x.value), field: Arc::clone(&self.field) })
    }
}

fn check_transform(field: &Field, coeffs: &[u16], n: usize) -> Result<(), FieldError> {
    if n != field.order() {
        return Err(FieldError::BadLength { n, order: field.order() });
    }
    match degree(coeffs) {
        Some(d) if d >= n => Err(FieldError::TooLong { degree: d, n }),
        _ => Ok(()),
    }
}

/// Raw DFT: C_j = n^{-1} c(alpha^{-j}). In characteristic 2 with odd n, n^{-1} = 1.
pub fn dft_raw(field: &Field, c: &[u16]) -> Vec<u16> {
    let n = field.order();
    (0..n).map(|j| field.eval(c, field.alpha_pow(-(j as i64)))).collect()
}

/// Raw inverse DFT: c_i = C(alpha^i).
pub fn idft_raw(field: &Field, spectrum: &[u16]) -> Vec<u16> {
    let n = field.order();
    (0..n).map(|i| field.eval(spectrum, field.alpha_pow(i as i64))).collect()
}

pub fn dft(c: &Poly, n: usize) -> Result<Poly, FieldError> {
    check_transform(&c.field, &c.coeffs, n)?;
    Ok(Poly { field: Arc::clone(&c.field), coeffs: dft_raw(&c.field, &c.coeffs) })
}

pub fn idft(spectrum: &Poly, n: usize) -> Result<Poly, FieldError> {
    check_transform(&spectrum.field, &spectrum.coeffs, n)?;
    Ok(Poly { field: Arc::clone(&spectrum.field), coeffs: idft_raw(&spectrum.field, &spectrum.coeffs) })
}
