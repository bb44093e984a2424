//! Dense univariate polynomials over a [`FieldSpec`].

use crate::gf::{FieldSpec, Fq};

/// Coefficients lowest degree first, with no trailing zeros. The zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(pub Vec<Fq>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Fq) -> Poly {
        Poly(vec![c]).trimmed()
    }

    pub fn x() -> Poly {
        Poly(vec![Fq::ZERO, Fq::ONE])
    }

    pub fn trimmed(mut self) -> Poly {
        while self.0.last() == Some(&Fq::ZERO) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fq {
        self.0.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn add(&self, other: &Poly, f: &FieldSpec) -> Poly {
        let n = self.0.len().max(other.0.len());
        let get = |p: &Poly, i: usize| p.0.get(i).copied().unwrap_or(Fq::ZERO);
        Poly((0..n).map(|i| f.add(get(self, i), get(other, i))).collect()).trimmed()
    }

    pub fn sub(&self, other: &Poly, f: &FieldSpec) -> Poly {
        self.add(&other.scale(f.neg(Fq::ONE), f), f)
    }

    pub fn scale(&self, c: Fq, f: &FieldSpec) -> Poly {
        Poly(self.0.iter().map(|&a| f.mul(a, c)).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly, f: &FieldSpec) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fq::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly(out).trimmed()
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly, f: &FieldSpec) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(d.lead()).expect("nonzero leading coefficient");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Fq::ZERO; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.0.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, dj));
            }
        }
        rem.truncate(dd);
        (Poly(quot).trimmed(), Poly(rem).trimmed())
    }

    pub fn rem(&self, d: &Poly, f: &FieldSpec) -> Poly {
        self.divrem(d, f).1
    }

    pub fn monic(&self, f: &FieldSpec) -> Poly {
        match f.inv(self.lead()) {
            Some(inv) => self.scale(inv, f),
            None => Poly::zero(),
        }
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly, f: &FieldSpec) -> Poly {
        self.mul(other, f).rem(m, f)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly, f: &FieldSpec) -> Poly {
        let mut acc = Poly::constant(Fq::ONE).rem(m, f);
        let mut base = self.rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m, f);
            }
            base = base.mulmod(&base, m, f);
            e >>= 1;
        }
        acc
    }

    pub fn is_one(&self) -> bool {
        self.0 == [Fq::ONE]
    }

    /// The monic polynomial of degree `n` whose low coefficients have codes
    /// given by the base-`q` digits of `code`.
    pub fn monic_from_code(mut code: u64, n: usize, f: &FieldSpec) -> Poly {
        let q = f.q() as u64;
        let mut c = Vec::with_capacity(n + 1);
        for _ in 0..n {
            c.push(Fq((code % q) as u32));
            code /= q;
        }
        c.push(Fq::ONE);
        Poly(c)
    }
}

/// Whether the monic polynomial `m` of degree `n` is primitive over `f`: the
/// class of `x` has multiplicative order exactly `q^n - 1`.
pub fn is_primitive(m: &Poly, f: &FieldSpec) -> bool {
    let n = match m.degree() {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if m.0[0].is_zero() {
        return false;
    }
    let order = (f.q() as u64).pow(n as u32) - 1;
    let x = Poly::x().rem(m, f);
    if !x.powmod(order, m, f).is_one() {
        return false;
    }
    crate::gf::prime_divisors(order)
        .into_iter()
        .all(|r| !x.powmod(order / r, m, f).is_one())
}

/// The least primitive monic polynomial of degree `n` over `f`, ordered by
/// the base-`q` code of its low coefficients.
pub fn least_primitive(n: usize, f: &FieldSpec) -> Poly {
    let q = f.q() as u64;
    let count = q.pow(n as u32);
    (1..count)
        .map(|code| Poly::monic_from_code(code, n, f))
        .find(|m| is_primitive(m, f))
        .expect("primitive polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let f = FieldSpec::new(5, 1).unwrap();
        let a = Poly(vec![Fq(1), Fq(2), Fq(3), Fq(4)]);
        let d = Poly(vec![Fq(2), Fq(1)]);
        let (q, r) = a.divrem(&d, &f);
        assert_eq!(q.mul(&d, &f).add(&r, &f), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn least_primitive_over_gf2() {
        let f = FieldSpec::new(2, 1).unwrap();
        // x^2 + x + 1, then x^3 + x + 1
        assert_eq!(least_primitive(2, &f), Poly(vec![Fq(1), Fq(1), Fq(1)]));
        assert_eq!(least_primitive(3, &f), Poly(vec![Fq(1), Fq(1), Fq(0), Fq(1)]));
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5
        assert!(!is_primitive(&Poly(vec![Fq(1); 5]), &f));
    }
}
