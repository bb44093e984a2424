//! Weil characters of unitary groups in closed form, the tori `T ≤ T₁`
//! and their linear characters, and the multiplicity formula for
//! `[ω^k|_{T₁}, λ_{s,t}]`.
//!
//! Notation: `Q = q^{n-2}`, `q₁ = q - 1`, `q₂ = (Q + 1)/(q + 1)`. The
//! torus `T₁` of `GU_n(q)` is the set of
//!
//! ```text
//! g_{i,j} = diag(a^i, a^{-qi}, b^j, b^{-qj}, …, b^{q^{n-3} j})
//! ```
//!
//! over the algebraic closure, with `a` of order `q² - 1`, `b` of order
//! `Q + 1` and `a^{q₁} = b^{q₂} = c`. All of these are powers of a
//! generator `θ` of `GF(q^{2(n-2)})^×`, so kernel dimensions on `T₁` can be
//! read off exponents mod `q^{2(n-2)} - 1` without building the group.
//! For `n = 3` the torus is diagonal in the antidiagonal-Gram basis,
//! `g_{i,j} = diag(a^i, c^j, a^{-qi})`, and is realized by matrices.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{Cyclotomic, RootSum};
use crate::gf::{gcd, FieldSpec, Fq};
use crate::matgrp::{subgroup_generated, Family, FiniteGroup, Matrix, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeilError {
    #[error("gcd({n}, 2({q}+1)) = {g}, but the torus construction needs it to be 1")]
    HypothesisViolated { n: usize, q: u64, g: u64 },
    #[error("invalid Weil parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilParams {
    pub n: usize,
    pub q: u64,
    pub q1: u64,
    pub q2: u64,
    /// Whether `gcd(n, 2(q+1)) = 1`.
    pub coprime: bool,
}

fn ipow(b: u64, e: usize) -> u64 {
    b.checked_pow(e as u32).expect("parameter overflow")
}

impl WeilParams {
    pub fn new(n: usize, q: u64) -> Result<WeilParams, WeilError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(WeilError::InvalidParams(format!("n = {n} must be odd and at least 3")));
        }
        if crate::gf::prime_power(q).is_none() {
            return Err(WeilError::InvalidParams(format!("{q} is not a prime power")));
        }
        let big_q = ipow(q, n - 2);
        Ok(WeilParams {
            n,
            q,
            q1: q - 1,
            q2: (big_q + 1) / (q + 1),
            coprime: gcd(n as u64, 2 * (q + 1)) == 1,
        })
    }

    /// `q^{n-2}`.
    pub fn big_q(&self) -> u64 {
        ipow(self.q, self.n - 2)
    }

    pub fn order_a(&self) -> u64 {
        self.q * self.q - 1
    }

    pub fn order_b(&self) -> u64 {
        self.big_q() + 1
    }

    pub fn t1_order(&self) -> u64 {
        self.order_a() * self.order_b()
    }

    pub fn t_order(&self) -> u64 {
        (self.q - 1) * self.order_b()
    }

    /// `x̄ ∈ [0, q]` with `q + 1 | x - x̄`.
    pub fn bar(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64 + 1) as u64
    }

    fn require_coprime(&self) -> Result<(), WeilError> {
        if self.coprime {
            Ok(())
        } else {
            Err(WeilError::HypothesisViolated {
                n: self.n,
                q: self.q,
                g: gcd(self.n as u64, 2 * (self.q + 1)),
            })
        }
    }
}

/// The element `g_{i,j}` of `T₁`, `i` mod `q² - 1`, `j` mod `q^{n-2} + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusElement {
    pub i: u64,
    pub j: u64,
}

impl TorusElement {
    pub fn new(p: &WeilParams, i: i64, j: i64) -> TorusElement {
        TorusElement {
            i: i.rem_euclid(p.order_a() as i64) as u64,
            j: j.rem_euclid(p.order_b() as i64) as u64,
        }
    }

    /// Membership in `T = T₁ ∩ SU_n(q)`: `ī = j̄`.
    pub fn in_t(&self, p: &WeilParams) -> bool {
        p.bar(self.i as i64) == p.bar(self.j as i64)
    }

    /// `dim Ker(g - c^l)` for `l = 0..=q`, counted from eigenvalue exponents.
    pub fn kernel_dims(&self, p: &WeilParams) -> Vec<usize> {
        let m = ipow(p.q, 2 * (p.n - 2)) as u128 - 1;
        let (q, ea, eb) = (p.q as u128, m / p.order_a() as u128, m / p.order_b() as u128);
        let (i, j) = (self.i as u128, self.j as u128);
        let mut eig = vec![(i * ea) % m, (m - (q * i % m * ea) % m) % m];
        let mut qm = 1u128; // (-q)^m mod m, kept non-negative
        for _ in 0..p.n - 2 {
            eig.push(j * eb % m * qm % m);
            qm = (m - q * qm % m) % m;
        }
        let ec = m / (p.q as u128 + 1);
        (0..=p.q as u128)
            .map(|l| eig.iter().filter(|&&x| x == l * ec % m).count())
            .collect()
    }

    /// The diagonal matrix realizing `g_{i,j}` in `GU_3(q)`; `field` must
    /// be `GF(q²)`.
    pub fn matrix(&self, p: &WeilParams, field: &Arc<FieldSpec>) -> Option<Matrix> {
        if p.n != 3 || field.q() as u64 != p.q * p.q {
            return None;
        }
        let w = field.generator();
        let q = p.q as i64;
        let (i, j) = (self.i as i64, self.j as i64);
        Some(Matrix::diagonal(
            field,
            &[field.pow(w, i), field.pow(w, (q - 1) * j), field.pow(w, -q * i)],
        ))
    }

    /// Inverse of [`TorusElement::matrix`].
    pub fn from_matrix(p: &WeilParams, m: &Matrix) -> Option<TorusElement> {
        if p.n != 3 || m.dim() != 3 {
            return None;
        }
        let f = m.field();
        let off_diagonal_zero = (0..3).all(|r| (0..3).all(|c| r == c || m.get(r, c).is_zero()));
        if !off_diagonal_zero {
            return None;
        }
        let i = f.log(m.get(0, 0))? as i64;
        let lb = f.log(m.get(1, 1))? as u64;
        if !lb.is_multiple_of(p.q1) {
            return None;
        }
        let g = TorusElement::new(p, i, (lb / p.q1) as i64);
        (g.matrix(p, f).as_ref() == Some(m)).then_some(g)
    }
}

pub fn t1_elements(p: &WeilParams) -> Vec<TorusElement> {
    (0..p.order_a())
        .flat_map(|i| (0..p.order_b()).map(move |j| TorusElement { i, j }))
        .collect()
}

pub fn t_elements(p: &WeilParams) -> Vec<TorusElement> {
    t1_elements(p).into_iter().filter(|g| g.in_t(p)).collect()
}

/// `T` as a subgroup of `SU_3(q)` and `T₁` as matrices in `GU_3(q)`.
pub struct Tori {
    pub t: Subgroup,
    pub t1: Vec<(TorusElement, Matrix)>,
}

pub fn build_tori(p: &WeilParams, g: &Arc<FiniteGroup>) -> Result<Tori, WeilError> {
    p.require_coprime()?;
    let spec = g
        .classical()
        .filter(|s| s.family == Family::SU && s.n == p.n && s.q == p.q && !s.quotient)
        .ok_or_else(|| WeilError::InvalidParams(format!("{} is not SU({},{})", g.label(), p.n, p.q)))?;
    if spec.n != 3 {
        return Err(WeilError::Unsupported("matrix tori are realized for n = 3 only".into()));
    }
    let field = g.field().expect("classical groups are matrix groups").clone();
    let x = TorusElement::new(p, 1, 1).matrix(p, &field).expect("n = 3");
    let xi = g
        .index_of(&x)
        .ok_or_else(|| WeilError::InvalidParams("torus generator is not in the group".into()))?;
    let t = subgroup_generated(g, &[xi]);
    assert_eq!(t.order() as u64, p.t_order());
    let t1 = t1_elements(p)
        .into_iter()
        .map(|e| {
            let m = e.matrix(p, &field).expect("n = 3");
            (e, m)
        })
        .collect();
    Ok(Tori { t, t1 })
}

fn signed_power(q: u64, d: usize) -> i128 {
    let v = (q as i128).pow(d as u32);
    if d.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

fn sign_n(n: usize) -> i128 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `ω_{n,q}(h) = (-1)^n (-q)^{dim Ker(h - 1)}`.
pub fn generic_weil(n: usize, q: u64, h: &Matrix) -> Cyclotomic {
    let d = h.eigenspace_dim(Fq::ONE);
    let v = sign_n(n) * signed_power(q, d);
    Cyclotomic::from_ratio(1, v, 1)
}

/// `ω^k(h)` from the kernel dimensions `dims[l] = dim Ker(h - c^l)`.
pub fn weil_from_kernel_dims(k: u64, p: &WeilParams, dims: &[usize]) -> Cyclotomic {
    let e = p.q + 1;
    let mut sum = RootSum::new(e as u32);
    for (l, &d) in dims.iter().enumerate() {
        sum.add(((k * l as u64) % e) as i64, signed_power(p.q, d));
    }
    sum.finish().scale(sign_n(p.n), e as i128)
}

/// `c = a^{q-1}` in `GF(q²)`, of order `q + 1`.
fn scalar_c(p: &WeilParams, field: &FieldSpec) -> Fq {
    assert_eq!(field.q() as u64, p.q * p.q, "Weil characters live over GF(q²)");
    field.pow(field.generator(), p.q1 as i64)
}

pub fn kernel_dims(p: &WeilParams, h: &Matrix) -> Vec<usize> {
    let f = h.field();
    let c = scalar_c(p, f);
    (0..=p.q).map(|l| h.eigenspace_dim(f.pow(c, l as i64))).collect()
}

/// `ω^k_{n,q}(h) = ((-1)^n/(q+1)) Σ_l γ^{kl} (-q)^{dim Ker(h - c^l)}`.
pub fn irreducible_weil(k: u64, p: &WeilParams, h: &Matrix) -> Cyclotomic {
    assert!(k <= p.q, "k ranges over 0..=q");
    weil_from_kernel_dims(k, p, &kernel_dims(p, h))
}

/// Exponent of `λ_{s,t}(g_{i,j}) = α^{si} β^{tj}` as a power of `ζ_L`
/// with `L = lcm(q² - 1, q^{n-2} + 1)`.
fn lambda_exponent(p: &WeilParams, s: u64, t: u64, g: &TorusElement) -> (u64, u64) {
    let (oa, ob) = (p.order_a(), p.order_b());
    let l = oa / gcd(oa, ob) * ob;
    let e = (s * g.i % oa) * (l / oa) + (t * g.j % ob) * (l / ob);
    (l, e % l)
}

/// `λ_{s,t}(g_{i,j}) = α^{si} β^{tj}` with `α = ζ_{q²-1}`, `β = ζ_{q^{n-2}+1}`,
/// so that `α^{q₁} = β^{q₂} = γ = ζ_{q+1}`.
pub fn lambda_char(p: &WeilParams, s: u64, t: u64, g: &TorusElement) -> Cyclotomic {
    let (l, e) = lambda_exponent(p, s, t, g);
    crate::dixon::root_value(l, e)
}

/// `δ_{0,s}δ_{0,k-t̄} + δ_{0,k-(s+t)‾} - δ_{0,s}δ_{0,t}δ_{0,k} - δ_{0,t}δ_{0,k-s̄}`.
pub fn weil_multiplicity_formula(k: u64, s: u64, t: u64, p: &WeilParams) -> i64 {
    let d = |b: bool| b as i64;
    let (si, ti) = (s as i64, t as i64);
    d(s == 0) * d(k == p.bar(ti)) + d(k == p.bar(si + ti))
        - d(s == 0) * d(t == 0) * d(k == 0)
        - d(t == 0) * d(k == p.bar(si))
}

/// Kernel dimensions over all of `T₁`, from matrices when available and
/// from eigenvalue exponents otherwise.
pub fn t1_kernel_table(p: &WeilParams, tori: Option<&Tori>) -> Vec<(TorusElement, Vec<usize>)> {
    match tori {
        Some(t) => t.t1.iter().map(|(e, m)| (*e, kernel_dims(p, m))).collect(),
        None => t1_elements(p).into_iter().map(|e| (e, e.kernel_dims(p))).collect(),
    }
}

/// `[ω^k|_{T₁}, λ_{s,t}]` summed over the torus.
pub fn weil_multiplicity_brute(
    k: u64,
    s: u64,
    t: u64,
    p: &WeilParams,
    table: &[(TorusElement, Vec<usize>)],
) -> Result<i64, crate::cyclo::CycloError> {
    let e = p.q + 1;
    let (l, _) = lambda_exponent(p, 0, 0, &TorusElement { i: 0, j: 0 });
    let big = l / gcd(l, e) * e;
    let mut sum = RootSum::new(big as u32);
    for (g, dims) in table {
        let (_, le) = lambda_exponent(p, s, t, g);
        let conj_lambda = (big - le * (big / l) % big) % big;
        for (li, &d) in dims.iter().enumerate() {
            let w = (k * li as u64 % e) * (big / e);
            sum.add(((w + conj_lambda) % big) as i64, signed_power(p.q, d));
        }
    }
    let total = sum.finish().scale(sign_n(p.n), e as i128 * table.len() as i128);
    total.as_integer()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEntry {
    pub k: u64,
    pub s: u64,
    pub t: u64,
    pub formula: i64,
    pub brute: i64,
}

impl LatticeEntry {
    pub fn matches(&self) -> bool {
        self.formula == self.brute
    }
}

/// Formula and brute force at every `(k, s, t)`, ordered by `(s, t, k)`.
pub fn weil_lattice(p: &WeilParams, table: &[(TorusElement, Vec<usize>)]) -> Vec<LatticeEntry> {
    use rayon::prelude::*;
    let triples: Vec<(u64, u64, u64)> = (0..p.order_a())
        .flat_map(|s| (0..p.order_b()).flat_map(move |t| (0..=p.q).map(move |k| (s, t, k))))
        .collect();
    triples
        .into_par_iter()
        .map(|(s, t, k)| LatticeEntry {
            k,
            s,
            t,
            formula: weil_multiplicity_formula(k, s, t, p),
            brute: weil_multiplicity_brute(k, s, t, p, table).expect("multiplicities are integers"),
        })
        .collect()
}

/// CSV with one row per `(s, t)` and three columns per `k`.
pub fn lattice_csv(p: &WeilParams, entries: &[LatticeEntry]) -> String {
    let mut out = String::from("s,t");
    for k in 0..=p.q {
        out.push_str(&format!(",k{k}_formula,k{k}_brute,k{k}_match"));
    }
    out.push('\n');
    for row in entries.chunks(p.q as usize + 1) {
        out.push_str(&format!("{},{}", row[0].s, row[0].t));
        for e in row {
            out.push_str(&format!(",{},{},{}", e.formula, e.brute, e.matches()));
        }
        out.push('\n');
    }
    out
}

/// Whether `λ_{s,t}` and `λ_{s',t'}` agree on `T`, by evaluation.
pub fn same_restriction(p: &WeilParams, a: (u64, u64), b: (u64, u64), t: &[TorusElement]) -> bool {
    t.iter()
        .all(|g| lambda_exponent(p, a.0, a.1, g).1 == lambda_exponent(p, b.0, b.1, g).1)
}

/// The closed-form test: `s' = s + q₁x`, `t' = t + q₂y` with `q + 1 | x + y`.
pub fn same_restriction_criterion(p: &WeilParams, a: (u64, u64), b: (u64, u64)) -> bool {
    let (oa, ob) = (p.order_a() as i64, p.order_b() as i64);
    let (q1, q2, e) = (p.q1 as i64, p.q2 as i64, p.q as i64 + 1);
    let ds = (b.0 as i64 - a.0 as i64).rem_euclid(oa);
    let dt = (b.1 as i64 - a.1 as i64).rem_euclid(ob);
    if ds % q1 != 0 || dt % q2 != 0 {
        return false;
    }
    // x is determined mod q+1 and y mod q+1 by the residues
    let (x, y) = (ds / q1, dt / q2);
    (x + y) % e == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgrp::{build_group, preserves_form, DEFAULT_ORDER_CAP};

    fn su33() -> (WeilParams, Arc<FiniteGroup>) {
        let p = WeilParams::new(3, 3).unwrap();
        let g = Arc::new(build_group(Family::SU, 3, 3, DEFAULT_ORDER_CAP).unwrap());
        (p, g)
    }

    #[test]
    fn params() {
        let p = WeilParams::new(3, 3).unwrap();
        assert_eq!((p.q1, p.q2, p.coprime), (2, 1, true));
        assert!(!WeilParams::new(3, 5).unwrap().coprime);
        assert!(WeilParams::new(5, 2).unwrap().coprime);
        assert!(WeilParams::new(4, 3).is_err());
        assert_eq!(p.bar(-1), 3);
    }

    #[test]
    fn generic_values() {
        let f = FieldSpec::of_size(9).unwrap();
        let id = Matrix::identity(&f, 3);
        assert_eq!(generic_weil(3, 3, &id).as_integer().unwrap(), 27);
        let c = f.pow(f.generator(), 2);
        let scalar = Matrix::diagonal(&f, &[c, c, c]);
        assert_eq!(generic_weil(3, 3, &scalar).as_integer().unwrap(), -1);
        let p = WeilParams::new(3, 3).unwrap();
        assert_eq!(irreducible_weil(0, &p, &id).as_integer().unwrap(), 6);
        for k in 1..=3 {
            assert_eq!(irreducible_weil(k, &p, &id).as_integer().unwrap(), 7);
        }
    }

    #[test]
    fn tori_for_su33() {
        let (p, g) = su33();
        let tori = build_tori(&p, &g).unwrap();
        assert_eq!(tori.t.order(), 8);
        assert_eq!(tori.t1.len(), 32);
        for (e, m) in &tori.t1 {
            assert!(preserves_form(Family::GU, m));
            assert_eq!(TorusElement::from_matrix(&p, m), Some(*e));
            assert_eq!(g.index_of(m).is_some(), e.in_t(&p));
            // exponent model agrees with matrix kernels
            assert_eq!(e.kernel_dims(&p), kernel_dims(&p, m));
        }
        let bad = WeilParams::new(3, 5).unwrap();
        assert!(matches!(
            build_tori(&bad, &g),
            Err(WeilError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn lambda_basics() {
        let p = WeilParams::new(3, 3).unwrap();
        for g in t1_elements(&p) {
            assert_eq!(lambda_char(&p, 0, 0, &g).as_integer().unwrap(), 1);
        }
        let g11 = TorusElement::new(&p, 1, 1);
        let alpha = Cyclotomic::root(8, 1);
        let beta = Cyclotomic::root(4, 1);
        for s in 0..8u64 {
            for t in 0..4u64 {
                let mut want = Cyclotomic::one(1);
                for _ in 0..s {
                    want = want.mul(&alpha);
                }
                for _ in 0..t {
                    want = want.mul(&beta);
                }
                assert_eq!(lambda_char(&p, s, t, &g11), want);
            }
        }
        // α^{q₁} = β^{q₂}
        assert_eq!(alpha.mul(&alpha), beta);
    }

    #[test]
    fn restriction_equivalence_exhaustive() {
        let p = WeilParams::new(3, 3).unwrap();
        let t = t_elements(&p);
        assert_eq!(t.len(), 8);
        for s in 0..8 {
            for tt in 0..4 {
                for s2 in 0..8 {
                    for t2 in 0..4 {
                        assert_eq!(
                            same_restriction(&p, (s, tt), (s2, t2), &t),
                            same_restriction_criterion(&p, (s, tt), (s2, t2)),
                            "({s},{tt}) vs ({s2},{t2})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn formula_examples() {
        let p = WeilParams::new(3, 3).unwrap();
        assert_eq!(weil_multiplicity_formula(0, 0, 0, &p), 0);
        assert_eq!(weil_multiplicity_formula(p.bar(3), 1, 2, &p), 1);
        assert_eq!(weil_multiplicity_formula(2, 0, 2, &p), 2);
    }

    #[test]
    fn formula_matches_brute_force() {
        let (p, g) = su33();
        let tori = build_tori(&p, &g).unwrap();
        let table = t1_kernel_table(&p, Some(&tori));
        let lattice = weil_lattice(&p, &table);
        assert_eq!(lattice.len(), 4 * 8 * 4);
        let bad: Vec<_> = lattice.iter().filter(|e| !e.matches()).collect();
        assert!(bad.is_empty(), "{bad:?}");
        for (n, q) in [(3, 4), (5, 2)] {
            let p = WeilParams::new(n, q).unwrap();
            let table = t1_kernel_table(&p, None);
            assert!(weil_lattice(&p, &table).iter().all(LatticeEntry::matches), "({n},{q})");
        }
        let csv = lattice_csv(&p, &lattice);
        assert!(csv.starts_with("s,t,k0_formula,k0_brute,k0_match"));
        assert_eq!(csv.lines().count(), 1 + 32);
    }

    #[test]
    fn irreducible_sum_is_generic() {
        use rand::{Rng, SeedableRng};
        let (p, g) = su33();
        let gu = build_group(Family::GU, 3, 3, DEFAULT_ORDER_CAP).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let tori = build_tori(&p, &g).unwrap();
        let mut hs: Vec<Matrix> = tori.t1.iter().map(|(_, m)| m.clone()).collect();
        hs.extend((0..50).map(|_| gu.matrix(rng.gen_range(0..gu.order() as u32)).unwrap()));
        for h in hs {
            let sum = (0..=3).fold(Cyclotomic::zero(1), |acc, k| acc.add(&irreducible_weil(k, &p, &h)));
            assert_eq!(sum, generic_weil(3, 3, &h));
        }
    }
}
