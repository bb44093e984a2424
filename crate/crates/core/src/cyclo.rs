//! Exact arithmetic in cyclotomic fields Q(ζₑ).
//!
//! An element is stored over the power basis `1, ζ, ..., ζ^{φ(e)-1}` after
//! reduction modulo the e-th cyclotomic polynomial Φₑ, as integer numerators
//! over one positive common denominator. Character values live in Z[ζₑ], so the
//! denominator is 1 for them; inner products divide by a group order.
//!
//! Coefficients are `i128` and every operation that could overflow is checked:
//! overflow panics instead of wrapping.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("{a} is not a unit modulo {e}")]
    NotAUnit { a: i64, e: u32 },
    #[error("value {0} is not a rational integer")]
    NotRationalInteger(String),
}

pub(crate) fn gcd_i(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u32, b: u32) -> u32 {
    (a as u64 / gcd_i(a as i128, b as i128) as u64 * b as u64) as u32
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i128>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i128>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φₑ, lowest degree first, including the leading 1.
pub fn cyclotomic_polynomial(e: u32) -> Arc<Vec<i128>> {
    assert!(e >= 1, "conductor must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&e) {
        return p.clone();
    }
    // x^e - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i128; e as usize + 1];
    poly[0] = -1;
    poly[e as usize] = 1;
    for d in 1..e {
        if e.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            poly = exact_div_monic(&poly, &div);
        }
    }
    let arc = Arc::new(poly);
    cyclotomic_cache().lock().unwrap().insert(e, arc.clone());
    arc
}

fn exact_div_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = num.len() - 1 - dn;
    let mut quot = vec![0i128; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduces a length-`e` vector of coefficients of `ζ^0..ζ^{e-1}` modulo Φₑ.
fn reduce(e: u32, mut v: Vec<i128>) -> Vec<i128> {
    let phi_poly = cyclotomic_polynomial(e);
    let phi = phi_poly.len() - 1;
    for d in (phi..v.len()).rev() {
        let c = v[d];
        if c == 0 {
            continue;
        }
        v[d] = 0;
        for (i, &pc) in phi_poly[..phi].iter().enumerate() {
            if pc != 0 {
                let t = c.checked_mul(pc).expect("cyclotomic coefficient overflow");
                v[d - phi + i] = v[d - phi + i].checked_sub(t).expect("cyclotomic coefficient overflow");
            }
        }
    }
    v.truncate(phi);
    v
}

/// An element of the cyclotomic field Q(ζₑ).
#[derive(Clone)]
pub struct Cyclotomic {
    e: u32,
    num: Vec<i128>,
    den: i128,
}

impl Cyclotomic {
    pub fn zero(e: u32) -> Self {
        Cyclotomic {
            e,
            num: vec![0; euler_phi(e) as usize],
            den: 1,
        }
    }

    pub fn from_int(e: u32, n: i64) -> Self {
        let mut z = Cyclotomic::zero(e);
        z.num[0] = n as i128;
        z
    }

    pub fn one(e: u32) -> Self {
        Cyclotomic::from_int(e, 1)
    }

    pub fn from_ratio(e: u32, n: i128, d: i128) -> Self {
        assert!(d != 0, "zero denominator");
        let mut z = Cyclotomic::zero(e);
        z.num[0] = n;
        z.den = d;
        z.normalize();
        z
    }

    /// ζₑ^k.
    pub fn root(e: u32, k: i64) -> Self {
        let mut v = vec![0i128; e as usize];
        v[k.rem_euclid(e as i64) as usize] = 1;
        Cyclotomic {
            e,
            num: reduce(e, v),
            den: 1,
        }
    }

    /// Σ coeff·ζₑ^exp over the given terms, with exponents taken mod e.
    pub fn from_powers(e: u32, terms: impl IntoIterator<Item = (i64, i128)>) -> Self {
        let mut acc = RootSum::new(e);
        for (k, c) in terms {
            acc.add(k, c);
        }
        acc.finish()
    }

    pub fn conductor(&self) -> u32 {
        self.e
    }

    /// Numerators over the power basis.
    pub fn coeffs(&self) -> &[i128] {
        &self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|&c| c == 0)
    }

    /// The value as a rational `(numerator, denominator)` if it is rational.
    pub fn as_rational(&self) -> Option<(i128, i128)> {
        self.is_rational().then_some((self.num[0], self.den))
    }

    /// The value as an integer, or an error if any non-constant coefficient
    /// survives or the constant is fractional.
    pub fn as_integer(&self) -> Result<i64, CycloError> {
        match self.as_rational() {
            Some((n, 1)) => i64::try_from(n).map_err(|_| CycloError::NotRationalInteger(self.to_string())),
            _ => Err(CycloError::NotRationalInteger(self.to_string())),
        }
    }

    fn normalize(&mut self) {
        if self.den < 0 {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -*c;
            }
        }
        let g = self.num.iter().fold(self.den, |g, &c| gcd_i(g, c));
        if g > 1 {
            self.den /= g;
            for c in &mut self.num {
                *c /= g;
            }
        }
    }

    /// Rewrites the element over conductor `m`, a multiple of the current one.
    pub fn promote(&self, m: u32) -> Cyclotomic {
        if m == self.e {
            return self.clone();
        }
        assert!(
            m.is_multiple_of(self.e),
            "conductor {m} is not a multiple of {}",
            self.e
        );
        let step = (m / self.e) as usize;
        let mut v = vec![0i128; m as usize];
        for (j, &c) in self.num.iter().enumerate() {
            v[j * step] = c;
        }
        Cyclotomic {
            e: m,
            num: reduce(m, v),
            den: self.den,
        }
    }

    fn align(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if a.e == b.e {
            return (a.clone(), b.clone());
        }
        let m = lcm(a.e, b.e);
        (a.promote(m), b.promote(m))
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.e != other.e {
            let (a, b) = Self::align(self, other);
            return a.add(&b);
        }
        let den = self
            .den
            .checked_mul(other.den)
            .expect("cyclotomic denominator overflow");
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(&x, &y)| {
                x.checked_mul(other.den)
                    .and_then(|a| y.checked_mul(self.den).and_then(|b| a.checked_add(b)))
                    .expect("cyclotomic coefficient overflow")
            })
            .collect();
        let mut out = Cyclotomic { e: self.e, num, den };
        out.normalize();
        out
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            e: self.e,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den,
        }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.e != other.e {
            let (a, b) = Self::align(self, other);
            return a.mul(&b);
        }
        let e = self.e as usize;
        let mut v = vec![0i128; e];
        for (i, &x) in self.num.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.num.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let idx = (i + j) % e;
                let t = x.checked_mul(y).expect("cyclotomic coefficient overflow");
                v[idx] = v[idx].checked_add(t).expect("cyclotomic coefficient overflow");
            }
        }
        let mut out = Cyclotomic {
            e: self.e,
            num: reduce(self.e, v),
            den: self
                .den
                .checked_mul(other.den)
                .expect("cyclotomic denominator overflow"),
        };
        out.normalize();
        out
    }

    /// Multiplies by the rational `n/d`.
    pub fn scale(&self, n: i128, d: i128) -> Cyclotomic {
        assert!(d != 0, "zero denominator");
        let mut out = Cyclotomic {
            e: self.e,
            num: self
                .num
                .iter()
                .map(|c| c.checked_mul(n).expect("cyclotomic coefficient overflow"))
                .collect(),
            den: self.den.checked_mul(d).expect("cyclotomic denominator overflow"),
        };
        out.normalize();
        out
    }

    /// Applies the automorphism ζ → ζ^a.
    pub fn galois(&self, a: i64) -> Result<Cyclotomic, CycloError> {
        let e = self.e as i64;
        let a_red = a.rem_euclid(e.max(1));
        if gcd_i(a_red as i128, e as i128) != 1 {
            return Err(CycloError::NotAUnit { a, e: self.e });
        }
        let mut v = vec![0i128; self.e as usize];
        for (j, &c) in self.num.iter().enumerate() {
            if c != 0 {
                v[(j as i64 * a_red % e) as usize] += c;
            }
        }
        Ok(Cyclotomic {
            e: self.e,
            num: reduce(self.e, v),
            den: self.den,
        })
    }

    /// Complex conjugate (the automorphism ζ → ζ⁻¹).
    pub fn conj(&self) -> Cyclotomic {
        self.galois(-1).expect("-1 is always a unit")
    }

    /// Value under the embedding ζₑ → exp(2πi/e), as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * j as f64 / self.e as f64;
            re += c as f64 * theta.cos();
            im += c as f64 * theta.sin();
        }
        (re / self.den as f64, im / self.den as f64)
    }

    /// Values under every embedding ζ → exp(2πi a/e), `gcd(a, e) = 1`.
    pub fn embeddings(&self) -> Vec<(f64, f64)> {
        (1..=self.e as i64)
            .filter(|&a| gcd_i(a as i128, self.e as i128) == 1)
            .map(|a| self.galois(a).expect("unit").to_complex())
            .collect()
    }

    /// A total order used for deterministic sorting; compares over a common
    /// conductor, then denominators and numerators lexicographically.
    pub fn canonical_cmp(&self, other: &Cyclotomic) -> Ordering {
        let (a, b) = Self::align(self, other);
        a.den.cmp(&b.den).then_with(|| a.num.cmp(&b.num))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.e == other.e {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = Self::align(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            let sign = if c < 0 { "-" } else { "+" };
            let body = match (j, mag) {
                (0, m) => m.to_string(),
                (1, 1) => format!("ζ{}", self.e),
                (1, m) => format!("{m}·ζ{}", self.e),
                (j, 1) => format!("ζ{}^{j}", self.e),
                (j, m) => format!("{m}·ζ{}^{j}", self.e),
            };
            terms.push((sign, body));
        }
        let mut s = String::new();
        if terms.is_empty() {
            s.push('0');
        }
        for (i, (sign, body)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => s.push('-'),
                (0, _) => {}
                (_, sign) => {
                    s.push_str(sign);
                }
            }
            s.push_str(body);
        }
        if self.den != 1 {
            if terms.len() > 1 {
                s = format!("({s})");
            }
            s = format!("{s}/{}", self.den);
        }
        f.write_str(&s)
    }
}

impl std::ops::Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::add(self, rhs)
    }
}

impl std::ops::Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::sub(self, rhs)
    }
}

impl std::ops::Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::mul(self, rhs)
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::neg(self)
    }
}

/// Accumulates `Σ c_k ζₑ^k` without reducing until [`RootSum::finish`].
///
/// Cheap for sums of many roots of unity, which is how character values and
/// brute-force inner products are assembled.
#[derive(Clone, Debug)]
pub struct RootSum {
    e: u32,
    v: Vec<i128>,
}

impl RootSum {
    pub fn new(e: u32) -> Self {
        RootSum {
            e,
            v: vec![0; e as usize],
        }
    }

    #[inline]
    pub fn add(&mut self, k: i64, c: i128) {
        let idx = k.rem_euclid(self.e as i64) as usize;
        self.v[idx] = self.v[idx].checked_add(c).expect("cyclotomic coefficient overflow");
    }

    pub fn finish(self) -> Cyclotomic {
        Cyclotomic {
            e: self.e,
            num: reduce(self.e, self.v),
            den: 1,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRecord {
    e: u32,
    coeffs: Vec<i128>,
    #[serde(default = "one_i128", skip_serializing_if = "is_one_i128")]
    den: i128,
}

fn one_i128() -> i128 {
    1
}

fn is_one_i128(d: &i128) -> bool {
    *d == 1
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloRecord {
            e: self.e,
            coeffs: self.num.clone(),
            den: self.den,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CycloRecord::deserialize(d)?;
        if r.e == 0 || r.coeffs.len() != euler_phi(r.e) as usize || r.den <= 0 {
            return Err(serde::de::Error::custom("malformed cyclotomic record"));
        }
        let mut out = Cyclotomic {
            e: r.e,
            num: r.coeffs,
            den: r.den,
        };
        out.normalize();
        Ok(out)
    }
}
