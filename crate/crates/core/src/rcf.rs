//! Similarity of matrices over a finite field via invariant factors, and
//! conjugacy verdicts for Singer cycles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldError, FieldSpec, Fq};
use crate::matgrp::{singer_element, Matrix};
use crate::poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RcfError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension must be positive")]
    ZeroDimension,
}

/// Invariant factors of `A`: the nonconstant monic diagonal entries of the
/// Smith form of `xI - A`, each dividing the next.
pub fn invariant_factors(a: &Matrix) -> Vec<Poly> {
    let f = a.field().clone();
    let n = a.dim();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = f.neg(a.get(i, j));
                    let mut p = Poly::constant(c);
                    if i == j {
                        p = p.add(&Poly::x(), &f);
                    }
                    p
                })
                .collect()
        })
        .collect();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // pivot: entry of least degree in the trailing block
            let pivot = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].degree());
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in (t + 1)..n {
                if m[i][t].is_zero() {
                    continue;
                }
                let (q, r) = m[i][t].divrem(&p, &f);
                for j in t..n {
                    let sub = q.mul(&m[t][j], &f);
                    m[i][j] = m[i][j].sub(&sub, &f);
                }
                clean &= r.is_zero();
            }
            for j in (t + 1)..n {
                if m[t][j].is_zero() {
                    continue;
                }
                let (q, r) = m[t][j].divrem(&p, &f);
                for row in m.iter_mut().skip(t) {
                    let sub = q.mul(&row[t], &f);
                    row[j] = row[j].sub(&sub, &f);
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = ((t + 1)..n).find(|&i| ((t + 1)..n).any(|j| !m[i][j].rem(&p, &f).is_zero()));
            match offender {
                Some(i) => {
                    for j in t..n {
                        let v = m[i][j].clone();
                        m[t][j] = m[t][j].add(&v, &f);
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].monic(&f));
    }
    diag.into_iter().filter(|p| p.degree().unwrap_or(0) > 0).collect()
}

/// Whether `a` and `b` are conjugate in `GL_n` of their field.
pub fn are_similar(a: &Matrix, b: &Matrix) -> bool {
    a.dim() == b.dim() && invariant_factors(a) == invariant_factors(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingerMode {
    /// `s` against `s⁻¹` in `GL_n(q)`.
    Inverse,
    /// `s²` against `s⁻²` in `GL_n(q)`.
    SquareInverse,
    /// `s₁ = s^{q+1}` against `σ(s₁⁻¹)` in `GL_n(q²)`.
    Twisted,
}

impl SingerMode {
    pub const ALL: [SingerMode; 3] = [SingerMode::Inverse, SingerMode::SquareInverse, SingerMode::Twisted];

    pub fn name(self) -> &'static str {
        match self {
            SingerMode::Inverse => "inverse",
            SingerMode::SquareInverse => "square_inverse",
            SingerMode::Twisted => "twisted",
        }
    }

    pub fn from_name(s: &str) -> Option<SingerMode> {
        SingerMode::ALL
            .into_iter()
            .find(|m| m.name() == s || m.name().replace('_', "-") == s)
    }

    /// Predicted conjugacy: `s ~ s⁻¹` only for `(n, q)` in `{(2,2), (1,2), (1,3)}`,
    /// `s² ~ s⁻²` only for `n ≤ 2, q ≤ 3`, twisted only for `n = 1, q ≤ 3`.
    pub fn predicted(self, n: usize, q: u64) -> bool {
        match self {
            SingerMode::Inverse => matches!((n, q), (2, 2) | (1, 2) | (1, 3)),
            SingerMode::SquareInverse => n <= 2 && q <= 3,
            SingerMode::Twisted => n == 1 && q <= 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingerVerdict {
    pub n: usize,
    pub q: u64,
    pub mode: SingerMode,
    pub conjugate: bool,
    pub lemma_predicts: bool,
}

impl SingerVerdict {
    pub fn matches(&self) -> bool {
        self.conjugate == self.lemma_predicts
    }
}

/// Decides conjugacy for the Singer cycle of `GL_n(q)` (or `GL_n(q²)` in
/// twisted mode) by comparing invariant factors.
pub fn singer_verdict(n: usize, q: u64, mode: SingerMode) -> Result<SingerVerdict, RcfError> {
    if n == 0 {
        return Err(RcfError::ZeroDimension);
    }
    let conjugate = match mode {
        SingerMode::Inverse | SingerMode::SquareInverse => {
            let f = FieldSpec::of_size(q)?;
            let s = singer_element(n, &f);
            let x = if mode == SingerMode::Inverse { s } else { s.mul(&s) };
            let xi = x.inverse().expect("Singer cycles are invertible");
            are_similar(&x, &xi)
        }
        SingerMode::Twisted if n == 1 && q.saturating_mul(q) > crate::gf::MAX_FIELD_SIZE => twisted_in_cyclic_group(q)?,
        SingerMode::Twisted => {
            let r = q.checked_mul(q).ok_or(FieldError::TooLarge { p: q, k: 2 })?;
            let f = FieldSpec::of_size(r)?;
            let s = singer_element(n, &f);
            let s1 = s.pow(q + 1);
            let target = s1.inverse().expect("invertible").frobenius(f.k() / 2);
            are_similar(&s1, &target)
        }
    };
    Ok(SingerVerdict {
        n,
        q,
        mode,
        conjugate,
        lemma_predicts: mode.predicted(n, q),
    })
}

/// Twisted mode in `GL_1(q²)`, which is cyclic of order `q² - 1` and
/// abelian, so conjugacy is equality. With `s` a generator, `s₁ = s^{q+1}`
/// and `σ(s₁⁻¹) = s^{-q(q+1)}`; the two are compared as exponents.
fn twisted_in_cyclic_group(q: u64) -> Result<bool, RcfError> {
    crate::gf::prime_power(q).ok_or(FieldError::NonPrime(q))?;
    let m = (q as u128) * (q as u128) - 1;
    let s1 = (q as u128 + 1) % m;
    let target = (m - (q as u128 * s1) % m) % m;
    Ok(s1 == target)
}

/// Every `(n, q)` with `q` a prime power and `q^n ≤ bound`, in order of `q`
/// then `n`.
pub fn singer_domain(bound: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for q in 2..=bound {
        if crate::gf::prime_power(q).is_none() {
            continue;
        }
        let mut n = 1;
        let mut qn = q;
        while qn <= bound {
            out.push((n, q));
            n += 1;
            qn = match qn.checked_mul(q) {
                Some(v) => v,
                None => break,
            };
        }
    }
    out
}

/// Coefficients of a polynomial as plain codes, for reports.
pub fn poly_codes(p: &Poly) -> Vec<u32> {
    p.0.iter().map(|c: &Fq| c.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(f: &std::sync::Arc<FieldSpec>, rows: &[&[u32]]) -> Matrix {
        Matrix::from_rows(
            f,
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| Fq(v)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn jordan_blocks_are_distinguished() {
        let f = FieldSpec::new(3, 1).unwrap();
        let j2 = mat(&f, &[&[1, 1], &[0, 1]]);
        let id = Matrix::identity(&f, 2);
        assert!(!are_similar(&j2, &id));
        assert_eq!(invariant_factors(&id).len(), 2);
        assert_eq!(invariant_factors(&j2).len(), 1);
        // a conjugate of j2
        let g = mat(&f, &[&[1, 2], &[1, 0]]);
        let c = g.mul(&j2).mul(&g.inverse().unwrap());
        assert!(are_similar(&c, &j2));
    }

    #[test]
    fn invariant_factor_product_is_charpoly_degree() {
        let f = FieldSpec::new(2, 1).unwrap();
        let a = mat(&f, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let inv = invariant_factors(&a);
        let total: usize = inv.iter().map(|p| p.degree().unwrap()).sum();
        assert_eq!(total, 4);
        for w in inv.windows(2) {
            assert!(w[1].rem(&w[0], &f).is_zero());
        }
    }

    #[test]
    fn known_verdicts() {
        let v = singer_verdict(2, 2, SingerMode::Inverse).unwrap();
        assert!(v.conjugate && v.matches());
        let v = singer_verdict(2, 4, SingerMode::Inverse).unwrap();
        assert!(!v.conjugate && v.matches());
        let v = singer_verdict(3, 2, SingerMode::Inverse).unwrap();
        assert!(!v.conjugate && v.matches());
        assert!(singer_verdict(1, 3, SingerMode::Twisted).unwrap().conjugate);
        assert!(!singer_verdict(1, 4, SingerMode::Twisted).unwrap().conjugate);
    }

    #[test]
    fn square_inverse_at_gf5() {
        // s = 2 in GF(5): s² = 4 = s⁻², conjugate although q > 3
        let v = singer_verdict(1, 5, SingerMode::SquareInverse).unwrap();
        assert!(v.conjugate);
        assert!(!v.lemma_predicts);
    }

    #[test]
    fn cyclic_twisted_agrees_with_matrices() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25] {
            let v = singer_verdict(1, q, SingerMode::Twisted).unwrap();
            assert_eq!(twisted_in_cyclic_group(q).unwrap(), v.conjugate, "q = {q}");
        }
        let big = singer_verdict(1, 4093, SingerMode::Twisted).unwrap();
        assert!(big.matches() && !big.conjugate);
    }

    #[test]
    fn domain() {
        let d = singer_domain(16);
        assert!(d.contains(&(4, 2)) && d.contains(&(2, 4)) && d.contains(&(1, 16)));
        assert!(!d.contains(&(5, 2)) && !d.contains(&(1, 6)));
    }
}
