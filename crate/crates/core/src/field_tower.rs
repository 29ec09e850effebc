//! Exact arithmetic in `F_q = F_p[X]/(m(X))` and in its quadratic extension
//! `F_{q^2} = F_q[Y]/(Y^2 + c1*Y + c0)`.
//!
//! Elements are plain values carrying their canonical integer encoding; the
//! [`FieldTower`] that produced them interprets them. An element of `F_q`
//! with coordinates `(c_0, ..., c_{h-1})` over `F_p` encodes as
//! `sum c_i p^i`, and `a + b*Y` in `F_{q^2}` encodes as `enc(a) + q*enc(b)`.
//! In particular `F_q` is exactly the set of encodings below `q`.
//!
//! All choices (moduli, primitive element, `beta`) are made by
//! deterministic smallest-encoding rules so that every run, on every
//! platform, produces the same tower.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field element, identified by its canonical encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Canonical integer encoding.
    #[inline]
    pub fn enc(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
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

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Splits `q = p^h` by trial factorization.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut h = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        h += 1;
    }
    Some((p as u32, h))
}

/// Prime powers in `[2, max]`, ascending.
pub fn prime_powers_up_to(max: u64) -> Vec<u64> {
    (2..=max).filter(|&q| prime_power(q).is_some()).collect()
}

// Dense F_p polynomial helpers, used only while building a field.

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let lead_inv = inv_mod(g[dg], p);
    while r.len() > dg {
        let top = *r.last().unwrap();
        if top != 0 {
            let t = (top as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = r.len() - 1 - dg;
            for (i, &gi) in g.iter().enumerate() {
                let sub = (t as u64 * gi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn digits_of(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut d = vec![0u32; len];
    for slot in d.iter_mut() {
        *slot = (n % p as u64) as u32;
        n /= p as u64;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64) as u32
}

fn mul_mod_poly(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let h = m.len() - 1;
    let mut prod = vec![0u64; 2 * h];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p as u64;
        }
    }
    let mut prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    prod.truncate((2 * h).saturating_sub(1).max(1));
    let mut r = poly_rem(&prod, m, p);
    r.resize(h, 0);
    r
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut g = digits_of(low, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The prime-power field `F_q`, with log/antilog tables.
#[derive(Clone, Debug)]
pub struct BaseField {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl BaseField {
    fn new(p: u32, h: u32) -> Self {
        let q = p.pow(h);
        let hh = h as usize;
        // Lexicographically smallest monic irreducible, highest non-leading
        // coefficient compared first: that is the numeric order of sum c_i p^i.
        let modulus = (0..q as u64)
            .map(|low| {
                let mut f = digits_of(low, p, hh);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial of every degree exists over F_p");

        let one = digits_of(1, p, hh);
        let pow_slow = |x: &[u32], mut e: u64| {
            let mut acc = one.clone();
            let mut b = x.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod_poly(&acc, &b, &modulus, p);
                }
                b = mul_mod_poly(&b, &b, &modulus, p);
                e >>= 1;
            }
            acc
        };
        let group = (q - 1) as u64;
        let primes = prime_factors(group);
        let generator = (1..q as u64)
            .map(|enc| digits_of(enc, p, hh))
            .find(|x| primes.iter().all(|&l| pow_slow(x, group / l) != one))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(2 * group as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = one.clone();
        for i in 0..group as usize {
            let e = from_digits(&cur, p);
            exp.push(e);
            log[e as usize] = i as u32;
            cur = mul_mod_poly(&cur, &generator, &modulus, p);
        }
        let doubled = exp.clone();
        exp.extend(doubled);

        let neg = (0..q)
            .map(|x| {
                let d: Vec<u32> = digits_of(x as u64, p, hh).iter().map(|&c| (p - c) % p).collect();
                from_digits(&d, p)
            })
            .collect();

        let mut field = BaseField { p, h, q, modulus, exp, log, neg, add_table: None };
        if p != 2 && h > 1 && q <= 256 {
            let table = (0..q * q).map(|i| field.add_digits(i / q, i % q)).collect();
            field.add_table = Some(table);
        }
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial over `F_p`, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coordinates over `F_p` of an element, low degree first.
    pub fn coordinates(&self, x: FieldElement) -> Vec<u32> {
        digits_of(x.0 as u64, self.p, self.h as usize)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.h {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place = place.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.q && b.0 < self.q);
        FieldElement(if self.p == 2 {
            a.0 ^ b.0
        } else if self.h == 1 {
            (a.0 + b.0) % self.p
        } else if let Some(t) = &self.add_table {
            t[(a.0 * self.q + b.0) as usize]
        } else {
            self.add_digits(a.0, b.0)
        })
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        FieldElement(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let group = self.q - 1;
        Ok(FieldElement(self.exp[((group - self.log[a.0 as usize]) % group) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let group = (self.q - 1) as u64;
        let idx = (self.log[a.0 as usize] as u64 * (e % group)) % group;
        FieldElement(self.exp[idx as usize])
    }

    /// Embeds a prime-field integer.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// Square root in characteristic 2, where squaring is a bijection.
    pub fn sqrt_char2(&self, a: FieldElement) -> Option<FieldElement> {
        (self.p == 2).then(|| self.pow(a, (self.q / 2) as u64))
    }
}

/// An embedding of a smaller field `F_{p^d}` into `F_{p^h}` (`d | h`),
/// fixed by sending the small field's defining root to the smallest-encoding
/// root of the same polynomial in the larger field.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    into_large: Vec<FieldElement>,
    into_small: Vec<Option<FieldElement>>,
}

impl SubfieldEmbedding {
    pub fn new(small: &BaseField, large: &BaseField) -> Result<Self> {
        if small.p != large.p || !large.h.is_multiple_of(small.h) {
            return Err(Error::Mismatch);
        }
        let eval = |coeffs: &[u32], x: FieldElement| {
            coeffs
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &c| large.add(large.mul(acc, x), FieldElement(c)))
        };
        let root = large
            .elements()
            .find(|&x| eval(&small.modulus, x).is_zero())
            .expect("a subfield of matching order always contains a root");
        let into_large: Vec<FieldElement> =
            small.elements().map(|x| eval(&small.coordinates(x), root)).collect();
        let mut into_small = vec![None; large.q as usize];
        for (i, y) in into_large.iter().enumerate() {
            into_small[y.0 as usize] = Some(FieldElement(i as u32));
        }
        Ok(SubfieldEmbedding { into_large, into_small })
    }

    pub fn to_large(&self, x: FieldElement) -> FieldElement {
        self.into_large[x.0 as usize]
    }

    /// Preimage of `y`, if it lies in the image.
    pub fn to_small(&self, y: FieldElement) -> Option<FieldElement> {
        self.into_small[y.0 as usize]
    }
}

/// The pair `(F_q, F_{q^2})` with the distinguished constants `omega`,
/// `alpha = omega^(q-1)` and `beta` (with `beta + beta^q = 1`).
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: BaseField,
    // Y^2 + c1*Y + c0
    c0: FieldElement,
    c1: FieldElement,
    omega: FieldElement,
    alpha: FieldElement,
    beta: FieldElement,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        // Construction is deterministic in (p, h).
        self.base.p == other.base.p && self.base.h == other.base.h
    }
}

impl Eq for FieldTower {}

impl FieldTower {
    pub fn new(p: u32, h: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if h == 0 {
            return Err(Error::InvalidParameters("extension degree h must be positive".into()));
        }
        match (p as u64).checked_pow(2 * h) {
            Some(order) if order <= 1u64 << 32 => {}
            _ => return Err(Error::FieldTooLarge { p: p as u64, h }),
        }
        let base = BaseField::new(p, h);
        let q = base.q;

        let (c0, c1) = (0..q)
            .flat_map(|c1| (0..q).map(move |c0| (FieldElement(c0), FieldElement(c1))))
            .find(|&(c0, c1)| {
                base.elements().all(|t| {
                    let v = base.add(base.add(base.mul(t, t), base.mul(c1, t)), c0);
                    !v.is_zero()
                })
            })
            .expect("a quadratic irreducible exists over every finite field");

        let mut tower = FieldTower {
            base,
            c0,
            c1,
            omega: FieldElement::ZERO,
            alpha: FieldElement::ZERO,
            beta: FieldElement::ZERO,
        };
        let group = tower.group_order();
        let primes = prime_factors(group);
        tower.omega = (1..tower.order())
            .map(|e| FieldElement(e as u32))
            .find(|&x| primes.iter().all(|&l| tower.pow(x, group / l) != FieldElement::ONE))
            .expect("the multiplicative group of a finite field is cyclic");
        tower.alpha = tower.pow(tower.omega, (q - 1) as u64);
        tower.beta = tower
            .elements()
            .find(|&x| tower.add(x, tower.frobenius_q(x)) == FieldElement::ONE)
            .expect("the trace map onto F_q is surjective");
        Ok(tower)
    }

    /// Builds the tower for `q = p^h`.
    pub fn for_order(q: u64) -> Result<Self> {
        let (p, h) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        FieldTower::new(p, h)
    }

    pub fn p(&self) -> u32 {
        self.base.p
    }

    pub fn h(&self) -> u32 {
        self.base.h
    }

    /// Order `q` of the base field.
    pub fn q(&self) -> u32 {
        self.base.q
    }

    /// Order `q^2` of the extension field.
    pub fn order(&self) -> u64 {
        self.base.q as u64 * self.base.q as u64
    }

    fn group_order(&self) -> u64 {
        self.base.q as u64 * self.base.q as u64 - 1
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    /// Monic extension modulus `[c0, c1, 1]`, low degree first.
    pub fn ext_modulus(&self) -> [FieldElement; 3] {
        [self.c0, self.c1, FieldElement::ONE]
    }

    pub fn omega(&self) -> FieldElement {
        self.omega
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    pub fn beta(&self) -> FieldElement {
        self.beta
    }

    /// Second basis element of `F_{q^2}` over `F_q`; fixed to `omega`.
    pub fn e(&self) -> FieldElement {
        self.omega
    }

    /// Checked conversion from an encoding of an `F_{q^2}` element.
    pub fn element(&self, enc: u64) -> Result<FieldElement> {
        if enc >= self.base.q as u64 * self.base.q as u64 {
            return Err(Error::EncodingOutOfRange { enc, order: self.base.q as u64 * self.base.q as u64 });
        }
        Ok(FieldElement(enc as u32))
    }

    /// Checked conversion from an encoding of an `F_q` element.
    pub fn base_element(&self, enc: u64) -> Result<FieldElement> {
        if enc >= self.base.q as u64 {
            return Err(Error::EncodingOutOfRange { enc, order: self.base.q as u64 });
        }
        Ok(FieldElement(enc as u32))
    }

    #[inline]
    pub fn in_base(&self, x: FieldElement) -> bool {
        x.0 < self.base.q
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        let q = self.base.q as u64;
        (0..q * q).map(|e| FieldElement(e as u32))
    }

    #[inline]
    fn split(&self, x: FieldElement) -> (FieldElement, FieldElement) {
        (FieldElement(x.0 % self.base.q), FieldElement(x.0 / self.base.q))
    }

    #[inline]
    fn join(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 + self.base.q * b.0)
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let (a0, a1) = self.split(x);
        let (b0, b1) = self.split(y);
        self.join(self.base.add(a0, b0), self.base.add(a1, b1))
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        let (a0, a1) = self.split(x);
        self.join(self.base.neg(a0), self.base.neg(a1))
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let b = &self.base;
        let (a0, a1) = self.split(x);
        let (b0, b1) = self.split(y);
        if a1.is_zero() && b1.is_zero() {
            return b.mul(a0, b0);
        }
        // Y^2 = -c1*Y - c0
        let hi = b.mul(a1, b1);
        let lo = b.sub(b.mul(a0, b0), b.mul(hi, self.c0));
        let mid = b.sub(b.add(b.mul(a0, b1), b.mul(a1, b0)), b.mul(hi, self.c1));
        self.join(lo, mid)
    }

    /// `x^q`; identity exactly on `F_q`.
    #[inline]
    pub fn frobenius_q(&self, x: FieldElement) -> FieldElement {
        // Y^q is the other root of the modulus: -c1 - Y.
        let b = &self.base;
        let (a0, a1) = self.split(x);
        self.join(b.sub(a0, b.mul(a1, self.c1)), b.neg(a1))
    }

    /// `x^(q+1)`, which lies in `F_q`.
    pub fn norm(&self, x: FieldElement) -> FieldElement {
        self.mul(x, self.frobenius_q(x))
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n_inv = self.base.inv(self.norm(x))?;
        Ok(self.mul(self.frobenius_q(x), n_inv))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        if self.in_base(x) {
            return self.base.pow(x, e);
        }
        e %= self.group_order();
        let mut acc = FieldElement::ONE;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Power with a possibly negative exponent.
    pub fn pow_signed(&self, x: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            return Ok(self.pow(x, e as u64));
        }
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let group = self.group_order() as i128;
        Ok(self.pow(x, (e as i128).rem_euclid(group) as u64))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let group = self.group_order();
        let mut ord = group;
        for l in prime_factors(group) {
            while ord.is_multiple_of(l) && self.pow(x, ord / l) == FieldElement::ONE {
                ord /= l;
            }
        }
        Ok(ord)
    }

    /// Coordinates `(x1, x2)` in `F_q` with `x = x1 + e*x2`.
    pub fn decompose(&self, x: FieldElement) -> (FieldElement, FieldElement) {
        let b = &self.base;
        let (a0, a1) = self.split(x);
        let (w0, w1) = self.split(self.omega);
        let x2 = b.div(a1, w1).expect("omega lies outside F_q");
        (b.sub(a0, b.mul(w0, x2)), x2)
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn recompose(&self, x1: FieldElement, x2: FieldElement) -> FieldElement {
        self.add(x1, self.mul(self.e(), x2))
    }

    /// `x^(p^(h/2))` on `F_q`, the conjugation of `F_q` over its subfield
    /// of order `sqrt(q)`.
    pub fn hermitian_conj(&self, x: FieldElement) -> Result<FieldElement> {
        if !self.base.h.is_multiple_of(2) {
            return Err(Error::OddDegree(self.base.h));
        }
        if !self.in_base(x) {
            return Err(Error::NotInBaseField(x.0));
        }
        Ok(self.base.pow(x, (self.base.p as u64).pow(self.base.h / 2)))
    }

    /// Text header: `"p h"`, then the base modulus over `F_p` and the
    /// extension modulus over `F_q`, each low degree first.
    pub fn header(&self) -> String {
        let base: Vec<String> = self.base.modulus.iter().map(u32::to_string).collect();
        let ext: Vec<String> = self.ext_modulus().iter().map(|c| c.0.to_string()).collect();
        format!("{} {}\n{}\n{}", self.p(), self.h(), base.join(" "), ext.join(" "))
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^2) over GF({})", self.q(), self.q())
    }
}
