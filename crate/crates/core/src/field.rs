//! Finite fields GF(p^e) with an explicit modulus.
//!
//! Elements are stored as indices in `[0, q)`. The base-`p` digits of an
//! index, least significant first, are the element's coordinates in the
//! power basis `1, α, …, α^(e-1)` where `α` is a root of the modulus.
//! Multiplication goes through discrete log tables built once per field from
//! the coordinate-vector product [`FieldSpec::mul_coords`].

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, parse_err, usage, Result};

/// Largest field order supported by [`FieldSpec`].
pub const MAX_ORDER: u32 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 1024;

/// An element of a finite field.
///
/// The element only has meaning together with the [`FieldSpec`] it came
/// from; arithmetic is performed by that field's methods.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// Packed index in `[0, q)`.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps an index already known to lie in `[0, q)`.
    #[inline]
    pub(crate) fn from_index(index: u32) -> Fe {
        Fe(index)
    }
}

#[derive(Debug)]
enum AddRule {
    Prime,
    Binary,
    Table(Vec<u32>),
    Digits,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: AddRule,
}

/// A finite field GF(p^e) together with the modulus defining it.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({})", self.designator())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.q)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
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

/// Splits `q` as `p^e` when it is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = *prime_factors(q).first()?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

// Dense polynomials over Z/p used only while setting up a field.
fn zp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn zp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    zp_trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = zp_inv(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let c = (r[top] as u64 * inv_lead as u64 % p as u64) as u32;
        let shift = top - db;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        zp_trim(&mut r);
    }
    r
}

fn zp_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

/// Irreducibility over Z/p by trial division with every monic polynomial of
/// degree at most half the degree of `f`.
pub(crate) fn is_irreducible_zp(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut divisor = Vec::with_capacity(k + 1);
            let mut rest = idx;
            for _ in 0..k {
                divisor.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            divisor.push(1);
            if zp_rem(f, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The default modulus for GF(p^e): the smallest monic irreducible of
/// degree `e` when coefficient lists are compared constant term first.
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for idx in 0..count {
        // c0 is the most significant digit of idx
        let mut coeffs = vec![0u32; e as usize + 1];
        let mut rest = idx;
        for i in (0..e as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[e as usize] = 1;
        if is_irreducible_zp(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// GF(p^e) with the default modulus.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        Self::check_order(p, e)?;
        Self::build(p, e, default_modulus(p, e))
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// GF(q) for a prime power `q`, with the default modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))?;
        Self::new(p, e)
    }

    /// GF(p^e) with a caller-supplied modulus, given constant term first.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(usage("modulus must have degree at least 1"));
        }
        let e = (modulus.len() - 1) as u32;
        Self::check_order(p, e)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(usage(format!("modulus coefficients must lie in [0, {p})")));
        }
        if modulus[e as usize] != 1 {
            return Err(usage("modulus must be monic"));
        }
        if !is_irreducible_zp(modulus, p) {
            return Err(domain(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }
        Self::build(p, e, modulus.to_vec())
    }

    fn check_order(p: u32, e: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(usage(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(usage("extension degree must be at least 1"));
        }
        match (p as u64).checked_pow(e) {
            Some(q) if q <= MAX_ORDER as u64 => Ok(()),
            _ => Err(usage(format!("field order {p}^{e} exceeds {MAX_ORDER}"))),
        }
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = p.pow(e);
        let mut neg = vec![0u32; q as usize];
        for (x, slot) in neg.iter_mut().enumerate() {
            let mut digits = index_to_digits(x as u32, p, e);
            for d in digits.iter_mut() {
                *d = (p - *d) % p;
            }
            *slot = digits_to_index(&digits, p);
        }
        let add = if e == 1 {
            AddRule::Prime
        } else if p == 2 {
            AddRule::Binary
        } else if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = add_digits(a, b, p);
                }
            }
            AddRule::Table(table)
        } else {
            AddRule::Digits
        };
        let mut spec = Inner {
            p,
            e,
            q,
            modulus,
            generator: 1,
            exp: Vec::new(),
            log: Vec::new(),
            neg,
            add,
        };
        let generator = find_generator(&spec);
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut log = vec![0u32; q as usize];
        let g = index_to_digits(generator, p, e);
        let mut cur = index_to_digits(1, p, e);
        for i in 0..order {
            let idx = digits_to_index(&cur, p);
            exp[i] = idx;
            exp[i + order] = idx;
            log[idx as usize] = i as u32;
            cur = mul_coords_raw(&spec, &cur, &g);
        }
        spec.generator = generator;
        spec.exp = exp;
        spec.log = log;
        Ok(FieldSpec {
            inner: Arc::new(spec),
        })
    }

    /// Parses a field designator: `"p^e"` or a prime power `"q"`, with an
    /// optional `"/c0,c1,...,1"` modulus suffix.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (order_part, modulus_part) = match text.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (text, None),
        };
        let (p, e) = if let Some((ps, es)) = order_part.split_once('^') {
            let p: u32 = ps
                .trim()
                .parse()
                .map_err(|_| parse_err(0, format!("bad characteristic {ps:?}")))?;
            let e: u32 = es
                .trim()
                .parse()
                .map_err(|_| parse_err(ps.len() + 1, format!("bad exponent {es:?}")))?;
            (p, e)
        } else {
            let q: u64 = order_part
                .parse()
                .map_err(|_| parse_err(0, format!("bad field order {order_part:?}")))?;
            prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))?
        };
        match modulus_part {
            None => Self::new(p, e),
            Some(m) => {
                let base = order_part.len() + 1;
                let coeffs = m
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<u32>()
                            .map_err(|_| parse_err(base, format!("bad modulus coefficient {c:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if coeffs.len() != e as usize + 1 {
                    return Err(usage(format!(
                        "modulus has degree {} but the field has extension degree {e}",
                        coeffs.len().saturating_sub(1)
                    )));
                }
                Self::with_modulus(p, &coeffs)
            }
        }
    }

    /// Canonical designator `"p^e/c0,...,1"` that [`FieldSpec::parse`] accepts.
    pub fn designator(&self) -> String {
        let m: Vec<String> = self.inner.modulus.iter().map(|c| c.to_string()).collect();
        format!("{}^{}/{}", self.inner.p, self.inner.e, m.join(","))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.inner.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, constant term first; monic of degree `e`.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// The generator of the multiplicative group used for the log tables.
    pub fn generator(&self) -> Fe {
        Fe(self.inner.generator)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.inner.q).map(Fe)
    }

    /// Nonzero elements in index order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.inner.q).map(Fe)
    }

    /// The element with the given index.
    pub fn elem(&self, index: u32) -> Result<Fe> {
        if index < self.inner.q {
            Ok(Fe(index))
        } else {
            Err(usage(format!("index {index} out of range for {self}")))
        }
    }

    /// Image of an integer under `Z → F_p ⊆ F_q`.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.inner.p as i64) as u32)
    }

    /// Coordinates of `x` in the power basis.
    pub fn coords(&self, x: Fe) -> Vec<u32> {
        index_to_digits(x.0, self.inner.p, self.inner.e)
    }

    /// Element with the given coordinates; missing trailing coordinates are zero.
    pub fn from_coords(&self, coords: &[u32]) -> Result<Fe> {
        if coords.len() > self.inner.e as usize {
            return Err(usage(format!(
                "{} coordinates given for extension degree {}",
                coords.len(),
                self.inner.e
            )));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= self.inner.p) {
            return Err(usage(format!(
                "coordinate {c} not in [0, {})",
                self.inner.p
            )));
        }
        Ok(Fe(digits_to_index(coords, self.inner.p)))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = &*self.inner;
        match &s.add {
            AddRule::Prime => {
                let t = a.0 + b.0;
                Fe(if t >= s.p { t - s.p } else { t })
            }
            AddRule::Binary => Fe(a.0 ^ b.0),
            AddRule::Table(t) => Fe(t[(a.0 * s.q + b.0) as usize]),
            AddRule::Digits => Fe(add_digits(a.0, b.0, s.p)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let s = &*self.inner;
        Fe(s.exp[(s.log[a.0 as usize] + s.log[b.0 as usize]) as usize])
    }

    /// `a + b·c`.
    #[inline]
    pub fn mul_add(&self, a: Fe, b: Fe, c: Fe) -> Fe {
        self.add(a, self.mul(b, c))
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(domain("inverse of zero"));
        }
        let s = &*self.inner;
        let order = s.q - 1;
        Ok(Fe(
            s.exp[((order - s.log[a.0 as usize]) % order.max(1)) as usize]
        ))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^n` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, x: Fe, mut n: u64) -> Fe {
        let mut result = Fe::ONE;
        let mut base = x;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        result
    }

    /// `x^n` for a signed exponent; negative powers of zero are undefined.
    pub fn pow_signed(&self, x: Fe, n: i64) -> Result<Fe> {
        if n >= 0 {
            Ok(self.pow(x, n as u64))
        } else {
            Ok(self.pow(self.inv(x)?, n.unsigned_abs()))
        }
    }

    /// The `j`-th power of the Frobenius automorphism, `x ↦ x^(p^j)`.
    /// Negative `j` applies the inverse; `j` is taken modulo `e`.
    pub fn frobenius(&self, x: Fe, j: i64) -> Fe {
        let e = self.inner.e as i64;
        let j = j.rem_euclid(e) as u32;
        if j == 0 || x.is_zero() {
            return x;
        }
        let s = &*self.inner;
        let order = (s.q - 1) as u64;
        let mut factor = 1u64;
        for _ in 0..j {
            factor = factor * s.p as u64 % order;
        }
        let l = s.log[x.0 as usize] as u64 * factor % order;
        Fe(s.exp[l as usize])
    }

    /// The unique `y` with `y^r = x`, where `r` is a power of `p`.
    pub fn pth_power_root(&self, x: Fe, r: u64) -> Result<Fe> {
        let k = self
            .log_p(r)
            .ok_or_else(|| usage(format!("{r} is not a power of {}", self.inner.p)))?;
        Ok(self.frobenius(x, -(k as i64)))
    }

    /// `k` with `p^k = r`, if any.
    pub fn log_p(&self, r: u64) -> Option<u32> {
        if r == 0 {
            return None;
        }
        let p = self.inner.p as u64;
        let mut rest = r;
        let mut k = 0;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        (rest == 1).then_some(k)
    }

    /// Whether the nonzero `x` is a `k`-th power in the multiplicative group.
    pub fn power_residue_test(&self, x: Fe, k: u64) -> Result<bool> {
        if x.is_zero() {
            return Err(usage("power residue test of zero"));
        }
        if k == 0 {
            return Err(usage("power residue test needs k >= 1"));
        }
        let order = (self.inner.q - 1) as u64;
        let g = num_integer::gcd(order, k);
        Ok(self.pow(x, order / g) == Fe::ONE)
    }

    /// Value at `x` of the polynomial with coefficients `coeffs` (constant first).
    pub fn eval(&self, coeffs: &[Fe], x: Fe) -> Fe {
        coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| self.mul_add(c, acc, x))
    }

    /// All roots in the field of a nonconstant polynomial, by exhaustive
    /// evaluation, in index order.
    pub fn roots_in_field(&self, coeffs: &[Fe]) -> Result<Vec<Fe>> {
        let deg = coeffs.iter().rposition(|c| !c.is_zero());
        match deg {
            None => Err(usage("roots of the zero polynomial")),
            Some(0) => Err(usage("roots of a constant polynomial")),
            Some(d) => Ok(self
                .elements()
                .filter(|&x| self.eval(&coeffs[..=d], x).is_zero())
                .collect()),
        }
    }

    /// Product of coordinate vectors by schoolbook multiplication and
    /// reduction modulo the modulus. Independent of the log tables.
    pub fn mul_coords(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        mul_coords_raw(&self.inner, a, b)
    }

    /// Parses an element literal: an integer (mapped through `Z → F_p`) or a
    /// coordinate vector `"[a0,a1,...]"`.
    pub fn parse_element(&self, text: &str) -> Result<Fe> {
        let t = text.trim();
        if let Some(body) = t.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| parse_err(t.len(), "missing ']' in element literal"))?;
            if body.trim().is_empty() {
                return Ok(Fe::ZERO);
            }
            let coords = body
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u32>()
                        .map_err(|_| parse_err(1, format!("bad coordinate {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            self.from_coords(&coords)
        } else {
            let n: i64 = t
                .parse()
                .map_err(|_| parse_err(0, format!("bad element literal {t:?}")))?;
            Ok(self.from_int(n))
        }
    }

    /// Formats an element: prime-field elements as integers, others as
    /// coordinate vectors without trailing zeros.
    pub fn format_element(&self, x: Fe) -> String {
        if x.0 < self.inner.p {
            return x.0.to_string();
        }
        let mut c = self.coords(x);
        zp_trim(&mut c);
        let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

fn index_to_digits(mut x: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(x % p);
        x /= p;
    }
    out
}

fn digits_to_index(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn add_digits(mut a: u32, mut b: u32, p: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        let s = (a % p + b % p) % p;
        out += s * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

fn mul_coords_raw(s: &Inner, a: &[u32], b: &[u32]) -> Vec<u32> {
    let p = s.p as u64;
    let e = s.e as usize;
    let mut prod = vec![0u64; 2 * e];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
        }
    }
    for top in (e..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (k, &mk) in s.modulus[..e].iter().enumerate() {
            let slot = top - e + k;
            prod[slot] = (prod[slot] + (p - c) * mk as u64) % p;
        }
    }
    prod.truncate(e);
    prod.into_iter().map(|c| c as u32).collect()
}

fn pow_coords(s: &Inner, x: &[u32], mut n: u64) -> Vec<u32> {
    let mut result = index_to_digits(1, s.p, s.e);
    let mut base = x.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            result = mul_coords_raw(s, &result, &base);
        }
        base = mul_coords_raw(s, &base, &base);
        n >>= 1;
    }
    result
}

fn find_generator(s: &Inner) -> u32 {
    let order = (s.q - 1) as u64;
    if order == 1 {
        return 1;
    }
    let factors = prime_factors(order);
    let one = index_to_digits(1, s.p, s.e);
    (2..s.q)
        .find(|&g| {
            let coords = index_to_digits(g, s.p, s.e);
            factors
                .iter()
                .all(|&l| pow_coords(s, &coords, order / l) != one)
        })
        .expect("the multiplicative group of a finite field is cyclic")
}
