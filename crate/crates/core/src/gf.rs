//! Arithmetic in small finite fields GF(p^k).
//!
//! Elements are stored as integer codes: the coefficient vector
//! `c0 + c1 x + ... + c_{k-1} x^{k-1}` of the polynomial representative is
//! packed as `c0 + c1 p + ... + c_{k-1} p^{k-1}`. Zero has code 0 and one has
//! code 1. Multiplication goes through log/antilog tables built from the root
//! of the chosen primitive modulus.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field size accepted by [`FieldSpec::new`].
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("field of size {p}^{k} exceeds the supported bound {MAX_FIELD_SIZE}")]
    TooLarge { p: u64, k: u32 },
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("malformed field element literal: {0}")]
    Parse(String),
}

/// A field element, as a packed coefficient code. Only meaningful together
/// with the [`FieldSpec`] it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The finite field GF(p^k) together with its multiplication tables.
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Low-order coefficients of the monic modulus; the leading 1 is implicit.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`, doubled to skip a reduction.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.p, self.k, self.modulus)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime(n: u64) -> bool {
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
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
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

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Splits a prime power into `(p, k)`; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = *prime_divisors(q).first()?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Polynomials over GF(p) used only while searching for the modulus.
mod prime_poly {
    /// Multiplies `a * b` modulo the monic polynomial with low coefficients `m`.
    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let k = m.len();
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &mi) in m.iter().enumerate() {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + (p as u64 - c) * mi as u64) % p as u64;
            }
        }
        prod.truncate(k);
        prod.into_iter().map(|c| c as u32).collect()
    }

    pub fn powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let k = m.len();
        let mut acc = vec![0u32; k];
        acc[0] = 1 % p;
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn is_one(v: &[u32]) -> bool {
        v[0] == 1 && v[1..].iter().all(|&c| c == 0)
    }
}

impl FieldSpec {
    /// Builds GF(p^k) with the lexicographically least primitive modulus.
    ///
    /// Monic degree-`k` polynomials are ordered by their low coefficient
    /// vector read as the base-`p` integer `c0 + c1 p + ...`.
    pub fn new(p: u64, k: u32) -> Result<Arc<FieldSpec>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if k == 0 || (p as f64).powi(k as i32) > MAX_FIELD_SIZE as f64 {
            return Err(FieldError::TooLarge { p, k });
        }
        let q = p.pow(k);
        let p32 = p as u32;
        let order = q - 1;
        let primes = prime_divisors(order);
        let k_us = k as usize;

        let mut modulus = None;
        for code in 1..q {
            let m = digits(code as u32, p32, k_us);
            if m[0] == 0 {
                continue;
            }
            let mut x = vec![0u32; k_us];
            if k_us == 1 {
                x[0] = (p32 - m[0]) % p32;
            } else {
                x[1] = 1;
            }
            if !prime_poly::is_one(&prime_poly::powmod(&x, order, &m, p32)) {
                continue;
            }
            if primes
                .iter()
                .all(|&r| !prime_poly::is_one(&prime_poly::powmod(&x, order / r, &m, p32)))
            {
                modulus = Some(m);
                break;
            }
        }
        let modulus = modulus.expect("a primitive polynomial exists for every finite field");

        let q32 = q as u32;
        let mut exp = vec![0u32; 2 * (q32 as usize - 1)];
        let mut log = vec![0u32; q32 as usize];
        let mut cur = vec![0u32; k_us];
        cur[0] = 1;
        let mut gen = vec![0u32; k_us];
        if k_us == 1 {
            gen[0] = (p32 - modulus[0]) % p32;
        } else {
            gen[1] = 1;
        }
        for i in 0..(q32 - 1) {
            let c = pack(&cur, p32);
            exp[i as usize] = c;
            exp[(i + q32 - 1) as usize] = c;
            log[c as usize] = i;
            cur = prime_poly::mulmod(&cur, &gen, &modulus, p32);
        }

        let mut spec = FieldSpec {
            p: p32,
            k,
            q: q32,
            modulus,
            exp,
            log,
            add_table: None,
        };
        if q32 <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q32 * q32) as usize];
            for a in 0..q32 {
                for b in 0..q32 {
                    table[(a * q32 + b) as usize] = spec.add_digits(a, b);
                }
            }
            spec.add_table = Some(table);
        }
        Ok(Arc::new(spec))
    }

    /// GF(q) for a prime power `q`.
    pub fn of_size(q: u64) -> Result<Arc<FieldSpec>, FieldError> {
        match prime_power(q) {
            Some((p, k)) => FieldSpec::new(p, k),
            None => Err(FieldError::NonPrime(q)),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients `c0..c_{k-1}` of the monic modulus (leading one omitted).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The root of the modulus, a generator of the multiplicative group.
    pub fn generator(&self) -> Fq {
        Fq(self.exp[1 % (self.q as usize - 1).max(1)])
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficient vector of an element.
    pub fn coeffs(&self, x: Fq) -> Vec<u32> {
        digits(x.0, self.p, self.k as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fq {
        let mut padded = coeffs.to_vec();
        padded.resize(self.k as usize, 0);
        Fq(pack(&padded.iter().map(|c| c % self.p).collect::<Vec<_>>(), self.p))
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        match &self.add_table {
            Some(t) => Fq(t[(a.0 * self.q + b.0) as usize]),
            None => Fq(self.add_digits(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - x % self.p) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Fq(out)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        Fq(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        let l = self.log[a.0 as usize];
        Some(Fq(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    /// `a^e` for any integer `e`; `0^e` is 0 for `e > 0` and 1 for `e == 0`.
    pub fn pow(&self, a: Fq, e: i64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            assert!(e > 0, "zero has no negative powers");
            return Fq::ZERO;
        }
        let m = (self.q - 1) as i64;
        let l = (self.log[a.0 as usize] as i64 * e.rem_euclid(m)).rem_euclid(m);
        Fq(self.exp[l as usize])
    }

    /// The discrete log of a nonzero element to the base [`Self::generator`].
    pub fn log(&self, a: Fq) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// `g^i` for the generator `g`.
    pub fn exp(&self, i: i64) -> Fq {
        let m = (self.q - 1) as i64;
        Fq(self.exp[i.rem_euclid(m) as usize])
    }

    /// The Frobenius map applied `times` times: `x -> x^(p^times)`.
    pub fn frobenius(&self, x: Fq, times: u32) -> Fq {
        if x.is_zero() {
            return x;
        }
        let m = (self.q - 1) as u64;
        let mut e = 1u64;
        for _ in 0..(times % self.k) {
            e = e * self.p as u64 % m.max(1);
        }
        let l = self.log[x.0 as usize] as u64 * e % m.max(1);
        Fq(self.exp[l as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: Fq) -> Result<u64, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let m = (self.q - 1) as u64;
        Ok(m / gcd(self.log[x.0 as usize] as u64, m))
    }

    /// Textual form `p^k:[c0,c1,...]`.
    pub fn format(&self, x: Fq) -> String {
        let cs: Vec<String> = self.coeffs(x).iter().map(|c| c.to_string()).collect();
        format!("{}^{}:[{}]", self.p, self.k, cs.join(","))
    }

    pub fn parse(&self, text: &str) -> Result<Fq, FieldError> {
        let bad = || FieldError::Parse(text.to_string());
        let (head, body) = text.trim().split_once(':').ok_or_else(bad)?;
        let (p, k) = head.split_once('^').ok_or_else(bad)?;
        if p.trim().parse::<u32>().ok() != Some(self.p) || k.trim().parse::<u32>().ok() != Some(self.k) {
            return Err(bad());
        }
        let body = body
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(bad)?;
        let cs: Vec<u32> = body
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if cs.len() != self.k as usize || cs.iter().any(|&c| c >= self.p) {
            return Err(bad());
        }
        Ok(self.from_coeffs(&cs))
    }
}

fn digits(mut code: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

fn pack(cs: &[u32], p: u32) -> u32 {
    cs.iter().rev().fold(0, |acc, &c| acc * p + c)
}
