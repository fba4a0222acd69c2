//! Finite fields `F_{p^e}` and their extensions.
//!
//! A field is either a prime field `F_p` or a simple extension `B[x]/(f)` of
//! another field `B`, where `f` is the lexicographically smallest monic
//! irreducible polynomial of the requested degree over `B`. Elements are
//! plain indices: an element of `B[x]/(f)` with coefficients `c_0 + c_1 x +
//! ... + c_{k-1} x^{k-1}` is encoded as `sum c_i |B|^i`. Since every
//! coefficient is itself encoded the same way, the encoding read in base `p`
//! is the flattened coefficient vector over `F_p`, and addition is digitwise
//! addition mod `p` no matter how deep the tower is.
//!
//! Multiplication goes through discrete log tables built once per field;
//! fields of at most 256 elements additionally get full operation tables.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field cardinality constructed unless a caller asks otherwise.
pub const DEFAULT_CARDINALITY_CEILING: u64 = 1 << 20;

const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of cardinality {base}^{degree} exceeds the ceiling {ceiling}")]
    DegreeOverflow {
        base: u64,
        degree: u32,
        ceiling: u64,
    },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// An element of some [`FieldCtx`], stored as its index in the field's
/// enumeration order. `Elem(0)` is zero and `Elem(1)` is one in every field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A concrete finite field.
pub struct FieldCtx {
    p: u32,
    /// `q = p^prime_degree`
    prime_degree: u32,
    q: u32,
    base: Option<Arc<FieldCtx>>,
    /// degree over `base` (1 for prime fields)
    degree: u32,
    /// monic modulus over `base`, low degree first; `x` for prime fields
    modulus: Vec<Elem>,
    /// `exp[i] = g^i` for a primitive element `g`, doubled so that log sums
    /// never need a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("prime_degree", &self.prime_degree)
            .field("q", &self.q)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.q == other.q
            && self.degree == other.degree
            && self.modulus == other.modulus
            && match (&self.base, &other.base) {
                (None, None) => true,
                (Some(a), Some(b)) => Arc::ptr_eq(a, b) || **a == **b,
                _ => false,
            }
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, e)`.
pub fn prime_power(q: u64) -> Result<(u32, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    let mut p = 2u64;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut e = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    Ok((p as u32, e))
}

fn checked_card(base: u64, degree: u32, ceiling: u64) -> Result<u32, FieldError> {
    let overflow = FieldError::DegreeOverflow {
        base,
        degree,
        ceiling,
    };
    let card = base.checked_pow(degree).ok_or(overflow.clone())?;
    if card > ceiling || card > u32::MAX as u64 {
        return Err(overflow);
    }
    Ok(card as u32)
}

/// Builds `F_{p^e}` with the default cardinality ceiling.
pub fn make_field(p: u64, e: u32) -> Result<Arc<FieldCtx>, FieldError> {
    make_field_with_ceiling(p, e, DEFAULT_CARDINALITY_CEILING)
}

pub fn make_field_with_ceiling(p: u64, e: u32, ceiling: u64) -> Result<Arc<FieldCtx>, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 {
        return Err(FieldError::ZeroDegree);
    }
    checked_card(p, e, ceiling)?;
    let prime = Arc::new(FieldCtx::prime(p as u32));
    if e == 1 {
        return Ok(prime);
    }
    Ok(Arc::new(FieldCtx::extension_of(&prime, e)))
}

/// Builds the field of cardinality `q`, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<Arc<FieldCtx>, FieldError> {
    let (p, e) = prime_power(q)?;
    make_field(p as u64, e)
}

impl FieldCtx {
    fn prime(p: u32) -> FieldCtx {
        let mul = |a: u32, b: u32| ((a as u64 * b as u64) % p as u64) as u32;
        let (exp, log) = discrete_log_tables(p, mul);
        let mut ctx = FieldCtx {
            p,
            prime_degree: 1,
            q: p,
            base: None,
            degree: 1,
            modulus: vec![Elem::ZERO, Elem::ONE],
            exp,
            log,
            add_table: None,
            mul_table: None,
        };
        ctx.build_small_tables();
        ctx
    }

    /// `base[x]/(f)` with `f` the smallest monic irreducible of degree `k`.
    fn extension_of(base: &Arc<FieldCtx>, k: u32) -> FieldCtx {
        let modulus = smallest_irreducible(base, k);
        let qb = base.q;
        let q = qb.pow(k);
        let mul = |a: u32, b: u32| {
            let pa = base.unpack(a, k);
            let pb = base.unpack(b, k);
            let prod = base.poly_mulmod(&pa, &pb, &modulus);
            base.pack(&prod)
        };
        let (exp, log) = discrete_log_tables(q, mul);
        let mut ctx = FieldCtx {
            p: base.p,
            prime_degree: base.prime_degree * k,
            q,
            base: Some(base.clone()),
            degree: k,
            modulus,
            exp,
            log,
            add_table: None,
            mul_table: None,
        };
        ctx.build_small_tables();
        ctx
    }

    fn build_small_tables(&mut self) {
        if self.q > TABLE_LIMIT {
            return;
        }
        let q = self.q;
        let mut add = vec![0u32; (q * q) as usize];
        let mut mul = vec![0u32; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = self.add_digits(a, b);
                mul[(a * q + b) as usize] = self.mul_logs(a, b);
            }
        }
        self.add_table = Some(add);
        self.mul_table = Some(mul);
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Cardinality `q`.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Exponent `e` in `q = p^e`.
    pub fn prime_degree(&self) -> u32 {
        self.prime_degree
    }

    /// Degree over the immediate base field (1 for prime fields).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn base(&self) -> Option<&Arc<FieldCtx>> {
        self.base.as_ref()
    }

    /// Monic modulus over the immediate base, low degree first.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.base.is_none()
    }

    /// Cardinality of the immediate base (`p` for prime fields).
    fn base_order(&self) -> u32 {
        self.base.as_ref().map_or(self.p, |b| b.q)
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.q
    }

    /// Converts an integer in `[0, q)` to an element.
    pub fn elem(&self, n: u32) -> Elem {
        assert!(n < self.q, "{n} is not an element of F_{}", self.q);
        Elem(n)
    }

    /// The image of the integer `n` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    /// All `q` elements in index order: 0, 1, then the rest.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        if p == 2 {
            return a ^ b;
        }
        if self.prime_degree == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let mut out = 0;
        let mut scale = 1;
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d * scale;
            scale *= p;
            a /= p;
            b /= p;
        }
        out
    }

    fn mul_logs(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.add_table {
            Some(t) => Elem(t[(a.0 * self.q + b.0) as usize]),
            None => Elem(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.mul_table {
            Some(t) => Elem(t[(a.0 * self.q + b.0) as usize]),
            None => Elem(self.mul_logs(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        debug_assert!(self.contains(a));
        let p = self.p;
        if p == 2 {
            return a;
        }
        let (mut a, mut out, mut scale) = (a.0, 0, 1);
        while a > 0 {
            let d = a % p;
            out += ((p - d) % p) * scale;
            scale *= p;
            a /= p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        let l = self.log[a.index()];
        Some(Elem(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let l = self.log[a.index()] as u64;
        Elem(self.exp[((l * (n % (self.q as u64 - 1))) % (self.q as u64 - 1)) as usize])
    }

    /// `y += a * x`, elementwise.
    #[inline]
    pub fn axpy(&self, y: &mut [Elem], a: Elem, x: &[Elem]) {
        debug_assert_eq!(y.len(), x.len());
        if a.is_zero() {
            return;
        }
        if self.prime_degree == 1 {
            let p = self.p as u64;
            let a = a.0 as u64;
            for (yi, xi) in y.iter_mut().zip(x) {
                yi.0 = ((yi.0 as u64 + a * xi.0 as u64) % p) as u32;
            }
        } else {
            for (yi, &xi) in y.iter_mut().zip(x) {
                *yi = self.add(*yi, self.mul(a, xi));
            }
        }
    }

    pub fn scale_in_place(&self, v: &mut [Elem], a: Elem) {
        for x in v.iter_mut() {
            *x = self.mul(*x, a);
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        debug_assert_eq!(a.len(), b.len());
        if self.prime_degree == 1 {
            let p = self.p as u64;
            let s = a
                .iter()
                .zip(b)
                .fold(0u64, |acc, (x, y)| (acc + x.0 as u64 * y.0 as u64) % p);
            return Elem(s as u32);
        }
        a.iter()
            .zip(b)
            .fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Coefficients over the immediate base field, low degree first.
    pub fn coefficients(&self, a: Elem) -> Vec<Elem> {
        let qb = self.base_order();
        let mut n = a.0;
        (0..self.degree)
            .map(|_| {
                let c = n % qb;
                n /= qb;
                Elem(c)
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[Elem]) -> Elem {
        assert_eq!(coeffs.len(), self.degree as usize);
        let qb = self.base_order();
        let n = coeffs.iter().rev().fold(0u32, |acc, c| {
            assert!(c.0 < qb);
            acc * qb + c.0
        });
        Elem(n)
    }

    /// Coefficients over the prime field, low degree first.
    pub fn prime_coefficients(&self, a: Elem) -> Vec<u32> {
        let mut n = a.0;
        (0..self.prime_degree)
            .map(|_| {
                let c = n % self.p;
                n /= self.p;
                c
            })
            .collect()
    }

    pub fn from_prime_coefficients(&self, coeffs: &[u32]) -> Option<Elem> {
        if coeffs.len() != self.prime_degree as usize || coeffs.iter().any(|&c| c >= self.p) {
            return None;
        }
        Some(Elem(
            coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c),
        ))
    }

    fn unpack(&self, n: u32, k: u32) -> Vec<Elem> {
        let mut n = n;
        (0..k)
            .map(|_| {
                let c = n % self.q;
                n /= self.q;
                Elem(c)
            })
            .collect()
    }

    fn pack(&self, coeffs: &[Elem]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, c| acc * self.q + c.0)
    }

    fn poly_mulmod(&self, a: &[Elem], b: &[Elem], modulus: &[Elem]) -> Vec<Elem> {
        let mut prod = vec![Elem::ZERO; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = self.add(prod[i + j], self.mul(x, y));
            }
        }
        let mut r = self.poly_rem(&prod, modulus);
        r.resize(modulus.len() - 1, Elem::ZERO);
        r
    }

    /// Remainder of `a` modulo a monic `m`, low degree first, trimmed.
    fn poly_rem(&self, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
        let dm = m.len() - 1;
        debug_assert_eq!(m[dm], Elem::ONE);
        let mut r = a.to_vec();
        while r.len() > dm {
            let lead = r.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = r.len() - dm;
            for i in 0..dm {
                let t = self.mul(lead, m[i]);
                r[shift + i] = self.sub(r[shift + i], t);
            }
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        r
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(&self, f: &[Elem]) -> bool {
        let d = f.len() - 1;
        if d == 0 {
            return false;
        }
        for dd in 1..=d / 2 {
            let count = (self.q as u64).pow(dd as u32);
            for n in 0..count {
                let mut g = self.unpack_wide(n, dd as u32);
                g.push(Elem::ONE);
                if self.poly_rem(f, &g).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn unpack_wide(&self, n: u64, k: u32) -> Vec<Elem> {
        let mut n = n;
        (0..k)
            .map(|_| {
                let c = n % self.q as u64;
                n /= self.q as u64;
                Elem(c as u32)
            })
            .collect()
    }
}

/// Smallest monic irreducible polynomial of degree `k` over `base`, comparing
/// coefficient vectors low degree first.
pub fn smallest_irreducible(base: &FieldCtx, k: u32) -> Vec<Elem> {
    let q = base.q as u64;
    let total = q.pow(k);
    for n in 0..total {
        // c_0 is the most significant digit of n
        let mut f: Vec<Elem> = base.unpack_wide(n, k);
        f.reverse();
        f.push(Elem::ONE);
        if base.is_irreducible(&f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

fn discrete_log_tables(q: u32, mul: impl Fn(u32, u32) -> u32) -> (Vec<u32>, Vec<u32>) {
    let order = (q - 1) as u64;
    let pow = |g: u32, mut n: u64| {
        let (mut acc, mut base) = (1u32, g);
        while n > 0 {
            if n & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            n >>= 1;
        }
        acc
    };
    let factors = prime_factors(order);
    let generator = (1..q)
        .find(|&g| factors.iter().all(|&r| pow(g, order / r) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * order as usize + 1];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for (i, e) in exp.iter_mut().take(order as usize).enumerate() {
        *e = x;
        log[x as usize] = i as u32;
        x = mul(x, generator);
    }
    for i in order as usize..exp.len() {
        exp[i] = exp[i - order as usize];
    }
    (exp, log)
}

/// `F_{q^k}` built as `F_q[x]/(f)` over a given base `F_q`, together with the
/// embedding of the base and the coordinate map to `F_q^k` in the basis
/// `1, x, ..., x^{k-1}`.
#[derive(Debug, Clone)]
pub struct ExtensionCtx {
    base: Arc<FieldCtx>,
    ext: Arc<FieldCtx>,
    k: u32,
}

/// Builds the degree-`k` extension of `base` with the default ceiling.
pub fn extend(base: &Arc<FieldCtx>, k: u32) -> Result<ExtensionCtx, FieldError> {
    extend_with_ceiling(base, k, DEFAULT_CARDINALITY_CEILING)
}

pub fn extend_with_ceiling(
    base: &Arc<FieldCtx>,
    k: u32,
    ceiling: u64,
) -> Result<ExtensionCtx, FieldError> {
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    checked_card(base.q as u64, k, ceiling)?;
    let ext = Arc::new(FieldCtx::extension_of(base, k));
    let ctx = ExtensionCtx {
        base: base.clone(),
        ext,
        k,
    };
    if base.q <= TABLE_LIMIT {
        ctx.assert_embedding_is_homomorphism();
    }
    Ok(ctx)
}

impl ExtensionCtx {
    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.ext
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// The canonical embedding `F_q -> F_{q^k}`.
    pub fn embed(&self, b: Elem) -> Elem {
        debug_assert!(self.base.contains(b));
        // the constant polynomial b has index b
        b
    }

    /// Coordinates of `x` over `F_q` in the basis `1, x, ..., x^{k-1}`.
    pub fn coordinates(&self, x: Elem) -> Vec<Elem> {
        self.ext.coefficients(x)
    }

    pub fn from_coordinates(&self, coords: &[Elem]) -> Elem {
        self.ext.from_coefficients(coords)
    }

    fn assert_embedding_is_homomorphism(&self) {
        let (b, e) = (&self.base, &self.ext);
        assert_eq!(self.embed(Elem::ZERO), Elem::ZERO);
        assert_eq!(self.embed(Elem::ONE), Elem::ONE);
        for x in b.elements() {
            for y in b.elements() {
                assert_eq!(self.embed(b.add(x, y)), e.add(self.embed(x), self.embed(y)));
                assert_eq!(self.embed(b.mul(x, y)), e.mul(self.embed(x), self.embed(y)));
            }
        }
    }
}
