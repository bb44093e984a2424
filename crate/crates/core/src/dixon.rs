//! Character tables by the Dixon–Schneider method.
//!
//! The class sums of `G` span the centre of the group algebra, and every
//! irreducible `χ` gives a common right eigenvector `w_k = h_k χ(g_k)/χ(1)`
//! of the class matrices `A_i[j][k] = a_ijk`. Working mod a prime
//! `ℓ ≡ 1 (mod exp G)` the eigenspaces are split one class matrix at a
//! time until every space is a line. Each normalized vector then yields
//! the degree `d` through
//!
//! ```text
//! d² ≡ |G| / Σ_k w_k w_k* / h_k   (mod ℓ)
//! ```
//!
//! where `k*` is the class of inverses, and values mod ℓ through
//! `θ_k = w_k d / h_k`. Since `ℓ > 2√|G|` the square root in `[1, √|G|]` is
//! unique. Each value `χ(g)` is the sum of the eigenvalues of `g` in the
//! representation, and the multiplicity of `ζ_o^j` among them is
//! recovered from the powers of `g`:
//!
//! ```text
//! m_j = (1/o) Σ_t θ(g^t) z_o^{-jt}   (mod ℓ),   0 ≤ m_j ≤ d
//! ```

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{ClassData, ClassSpace};
use crate::classfn::{inner_product, ClassFunction};
use crate::cyclo::{Cyclotomic, RootSum};
use crate::modp::{charpoly, is_prime_u64, nullspace, roots, rref, Zp};

pub const TABLE_SCHEMA_VERSION: u32 = 1;

const LIFTING_PRIME_BOUND: u64 = 1 << 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DixonError {
    #[error("no lifting prime ≡ 1 mod {exponent} below 2^62")]
    NoLiftingPrime { exponent: u64 },
    #[error("eigenspaces failed to separate: {0}")]
    SplittingFailure(String),
    #[error("value lifting failed at class {class}: {reason}")]
    LiftingFailure { class: usize, reason: String },
    #[error("{count} irreducibles of degree {degree}, expected exactly one")]
    NotUnique { degree: u64, count: usize },
    #[error("table invariant violated: {0}")]
    InvariantViolated(String),
}

/// Structure constants for one class: `a[j][k] = #{(x,y) ∈ C_i × C_j : xy = g_k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatrix {
    pub i: usize,
    pub a: Vec<Vec<u64>>,
}

fn class_member_lists(cd: &ClassData) -> Vec<Vec<u32>> {
    let mut lists = vec![Vec::new(); cd.len()];
    for x in 0..cd.group().order() as u32 {
        lists[cd.class_of(x) as usize].push(x);
    }
    lists
}

fn class_matrix_with(cd: &ClassData, members: &[Vec<u32>], i: usize) -> ClassMatrix {
    let g = cd.group();
    let r = cd.len();
    let mut a = vec![vec![0u64; r]; r];
    for &x in &members[i] {
        let xi = g.inv(x);
        for (k, &rep) in cd.reps().iter().enumerate() {
            let j = cd.class_of(g.mul(xi, rep)) as usize;
            a[j][k] += 1;
        }
    }
    ClassMatrix { i, a }
}

pub fn class_matrix(cd: &ClassData, i: usize) -> ClassMatrix {
    class_matrix_with(cd, &class_member_lists(cd), i)
}

pub fn class_matrices(cd: &ClassData) -> Vec<ClassMatrix> {
    let members = class_member_lists(cd);
    (0..cd.len())
        .into_par_iter()
        .map(|i| class_matrix_with(cd, &members, i))
        .collect()
}

/// Least prime `ℓ ≡ 1 (mod exponent)` with `ℓ > 2⌈√order⌉`.
pub fn lifting_prime(order: u64, exponent: u64) -> Option<u64> {
    let root = (order as f64).sqrt().ceil() as u64;
    let root = (root.saturating_sub(2)..=root + 2)
        .find(|&s| s * s >= order)
        .unwrap_or(root);
    let floor = 2 * root + 1;
    let mut l = (floor.saturating_sub(1) / exponent) * exponent + 1;
    while l < floor {
        l += exponent;
    }
    while l < LIFTING_PRIME_BOUND {
        if is_prime_u64(l) {
            return Some(l);
        }
        l += exponent;
    }
    None
}

/// The complete list of irreducible characters of a group.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    space: Arc<ClassSpace>,
    irreducibles: Vec<ClassFunction>,
    degrees: Vec<u64>,
    lifting_prime: Option<u64>,
    exponent: u64,
    power_maps: BTreeMap<u64, Vec<u32>>,
}

impl CharacterTable {
    pub fn space(&self) -> &Arc<ClassSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// `None` for abelian groups, whose tables need no modular step.
    pub fn lifting_prime(&self) -> Option<u64> {
        self.lifting_prime
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn power_maps(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.power_maps
    }

    /// Index of the unique irreducible of the given degree.
    pub fn unique_of_degree(&self, degree: u64) -> Result<usize, DixonError> {
        let hits: Vec<usize> = (0..self.len()).filter(|&i| self.degrees[i] == degree).collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            _ => Err(DixonError::NotUnique {
                degree,
                count: hits.len(),
            }),
        }
    }

    /// The Steinberg character: the unique irreducible whose degree is the
    /// `p`-part of `|G|`.
    pub fn steinberg(&self, p: u64) -> Result<usize, DixonError> {
        let mut n = self.space.order;
        let mut part = 1;
        while p > 1 && n.is_multiple_of(p) {
            n /= p;
            part *= p;
        }
        self.unique_of_degree(part)
    }

    /// Checks orthogonality of rows and columns exactly, the column norms
    /// again under the float embedding, and `Σ d² = |G|`.
    pub fn verify(&self) -> Result<(), DixonError> {
        let bad = |s: String| Err(DixonError::InvariantViolated(s));
        let r = self.len();
        if r != self.space.len() {
            return bad(format!("{} irreducibles for {} classes", r, self.space.len()));
        }
        let order = self.space.order;
        let sum_sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sum_sq != order {
            return bad(format!("sum of squared degrees {sum_sq} != {order}"));
        }
        if let Some(d) = self.degrees.iter().find(|&&d| !order.is_multiple_of(d)) {
            return bad(format!("degree {d} does not divide {order}"));
        }
        for i in 0..r {
            for j in i..r {
                let ip = inner_product(&self.irreducibles[i], &self.irreducibles[j])
                    .map_err(|e| DixonError::InvariantViolated(e.to_string()))?;
                if ip.as_integer() != Ok((i == j) as i64) {
                    return bad(format!("[χ{i}, χ{j}] = {ip}"));
                }
            }
        }
        for k in 0..r {
            let cent = self.space.centralizer_order(k);
            for l in k..r {
                let mut acc = Cyclotomic::zero(1);
                for chi in &self.irreducibles {
                    acc = acc.add(&chi.value(k).mul(&chi.value(l).conj()));
                }
                let want = if k == l { cent as i64 } else { 0 };
                if acc.as_integer() != Ok(want) {
                    return bad(format!("column sum ({k},{l}) = {acc}"));
                }
            }
            let float: f64 = self
                .irreducibles
                .iter()
                .map(|chi| {
                    let (re, im) = chi.value(k).to_complex();
                    re * re + im * im
                })
                .sum();
            if (float - cent as f64).abs() > 1e-6 * (cent as f64).max(1.0) {
                return bad(format!("float column norm at {k}: {float} vs {cent}"));
            }
        }
        Ok(())
    }

    pub fn record(&self) -> TableRecord {
        TableRecord {
            schema: TABLE_SCHEMA_VERSION,
            group: self.space.label.clone(),
            order: self.space.order,
            class_sizes: self.space.sizes.clone(),
            class_orders: self.space.orders.clone(),
            exponent: self.exponent,
            lifting_prime: self.lifting_prime,
            degrees: self.degrees.clone(),
            power_maps: self
                .power_maps
                .iter()
                .map(|(p, m)| (p.to_string(), m.clone()))
                .collect(),
            values: self.irreducibles.iter().map(|c| c.values().to_vec()).collect(),
        }
    }

    pub fn from_record(rec: TableRecord, space: &Arc<ClassSpace>) -> Result<CharacterTable, DixonError> {
        if rec.schema != TABLE_SCHEMA_VERSION {
            return Err(DixonError::InvariantViolated(format!("schema {}", rec.schema)));
        }
        if rec.class_sizes != space.sizes || rec.values.iter().any(|v| v.len() != space.len()) {
            return Err(DixonError::InvariantViolated(
                "record does not match class layout".into(),
            ));
        }
        let power_maps = rec
            .power_maps
            .into_iter()
            .map(|(p, m)| (p.parse().unwrap_or(0), m))
            .collect();
        Ok(CharacterTable {
            space: space.clone(),
            irreducibles: rec.values.into_iter().map(|v| ClassFunction::new(space, v)).collect(),
            degrees: rec.degrees,
            lifting_prime: rec.lifting_prime,
            exponent: rec.exponent,
            power_maps,
        })
    }
}

/// Serializable form of a [`CharacterTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub schema: u32,
    pub group: String,
    pub order: u64,
    pub class_sizes: Vec<u64>,
    pub class_orders: Vec<u64>,
    pub exponent: u64,
    pub lifting_prime: Option<u64>,
    pub degrees: Vec<u64>,
    pub power_maps: BTreeMap<String, Vec<u32>>,
    pub values: Vec<Vec<Cyclotomic>>,
}

/// `ζ_e^c` at its smallest conductor.
pub(crate) fn root_value(e: u64, c: u64) -> Cyclotomic {
    let c = c % e;
    let g = crate::gf::gcd(c, e);
    Cyclotomic::root((e / g) as u32, (c / g) as i64)
}

/// Characters of an abelian group, built by extending from `H` to
/// `⟨H, g⟩` one generator at a time. A character is stored as exponents:
/// `χ(h) = ζ_e^{c(h)}`.
fn abelian_characters(cd: &ClassData) -> Vec<Vec<u64>> {
    let g = cd.group();
    let n = g.order();
    let e = cd.exponent();
    let mut in_h = vec![false; n];
    in_h[g.identity() as usize] = true;
    let mut h: Vec<u32> = vec![g.identity()];
    let mut chars: Vec<Vec<u64>> = vec![vec![0; n]];
    for &s in g.generators() {
        if in_h[s as usize] {
            continue;
        }
        let mut m = 1u64;
        let mut sm = s;
        while !in_h[sm as usize] {
            sm = g.mul(sm, s);
            m += 1;
        }
        // coset layers h·s^j for j < m
        let mut layers = vec![h.clone()];
        let mut sj = g.identity();
        for _ in 1..m {
            sj = g.mul(sj, s);
            layers.push(h.iter().map(|&x| g.mul(x, sj)).collect());
        }
        let mut next = Vec::with_capacity(chars.len() * m as usize);
        for c in &chars {
            let cm = c[sm as usize];
            debug_assert_eq!(cm % m, 0);
            for j in 0..m {
                let w = cm / m + j * (e / m);
                let mut c2 = c.clone();
                for (layer_idx, layer) in layers.iter().enumerate().skip(1) {
                    for (pos, &y) in layer.iter().enumerate() {
                        c2[y as usize] = (c[h[pos] as usize] + layer_idx as u64 * w) % e;
                    }
                }
                next.push(c2);
            }
        }
        chars = next;
        for layer in layers.into_iter().skip(1) {
            for &y in &layer {
                in_h[y as usize] = true;
            }
            h.extend(layer);
        }
    }
    assert_eq!(h.len(), n, "generators must generate the group");
    chars
}

/// Common eigenspaces as RREF row bases.
fn split_spaces(z: Zp, mats: impl Fn(usize) -> Vec<Vec<u64>>, r: usize) -> Result<Vec<Vec<u64>>, DixonError> {
    let identity: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut row = vec![0; r];
            row[i] = 1;
            row
        })
        .collect();
    let mut spaces = vec![identity];
    for i in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = mats(i);
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            next.extend(split_one(z, &m, basis)?);
        }
        spaces = next;
    }
    if let Some(s) = spaces.iter().find(|s| s.len() > 1) {
        return Err(DixonError::SplittingFailure(format!(
            "a common eigenspace of dimension {} survives every class matrix",
            s.len()
        )));
    }
    Ok(spaces.into_iter().map(|mut s| s.pop().unwrap()).collect())
}

fn split_one(z: Zp, m: &[Vec<u64>], mut basis: Vec<Vec<u64>>) -> Result<Vec<Vec<Vec<u64>>>, DixonError> {
    let pivots = rref(z, &mut basis);
    let dim = basis.len();
    let r = m.len();
    // M b_t expressed in the basis: the coordinates sit at the pivot columns
    let images: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| {
            (0..r)
                .map(|row| {
                    m[row]
                        .iter()
                        .zip(b)
                        .fold(0, |acc, (&x, &y)| z.add(acc, z.mul(x % z.p, y)))
                })
                .collect()
        })
        .collect();
    let a: Vec<Vec<u64>> = (0..dim)
        .map(|s| (0..dim).map(|t| images[t][pivots[s]]).collect())
        .collect();
    let eigen = roots(z, &charpoly(z, &a));
    let mut out = Vec::new();
    let mut total = 0;
    for lambda in eigen {
        let shifted: Vec<Vec<u64>> = (0..dim)
            .map(|s| {
                (0..dim)
                    .map(|t| if s == t { z.sub(a[s][t], lambda) } else { a[s][t] })
                    .collect()
            })
            .collect();
        let mut vecs: Vec<Vec<u64>> = nullspace(z, &shifted)
            .into_iter()
            .map(|u| {
                let mut v = vec![0u64; r];
                for (ut, bt) in u.iter().zip(&basis) {
                    for (x, &y) in v.iter_mut().zip(bt) {
                        *x = z.add(*x, z.mul(*ut, y));
                    }
                }
                v
            })
            .collect();
        rref(z, &mut vecs);
        total += vecs.len();
        out.push(vecs);
    }
    if total != dim {
        return Err(DixonError::SplittingFailure(format!(
            "class matrix is not diagonalizable on a space of dimension {dim}"
        )));
    }
    Ok(out)
}

fn isqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// Lifts the mod-ℓ values of one character to cyclotomic integers.
fn lift_character(
    cd: &ClassData,
    z: Zp,
    zeta_e: u64,
    theta: &[u64],
    d: u64,
    power_classes: &[Vec<u32>],
) -> Result<Vec<Cyclotomic>, DixonError> {
    let e = cd.exponent();
    (0..cd.len())
        .map(|k| {
            let o = cd.orders()[k];
            let zo = z.pow(zeta_e, e / o);
            let zo_inv = z.inv(zo);
            let inv_o = z.inv(o % z.p);
            let pcs = &power_classes[k];
            let mut sum = RootSum::new(o as u32);
            let mut total = 0u64;
            for j in 0..o {
                let step = z.pow(zo_inv, j);
                let mut acc = 0;
                let mut w = 1;
                for &c in pcs {
                    acc = z.add(acc, z.mul(theta[c as usize], w));
                    w = z.mul(w, step);
                }
                let mj = z.mul(acc, inv_o);
                if mj > d {
                    return Err(DixonError::LiftingFailure {
                        class: k,
                        reason: format!("multiplicity {mj} of ζ^{j} exceeds degree {d}"),
                    });
                }
                total += mj;
                sum.add(j as i64, mj as i128);
            }
            if total != d {
                return Err(DixonError::LiftingFailure {
                    class: k,
                    reason: format!("eigenvalue multiplicities sum to {total}, not {d}"),
                });
            }
            Ok(sum.finish())
        })
        .collect()
}

fn cmp_characters(a: &(u64, Vec<Cyclotomic>), b: &(u64, Vec<Cyclotomic>)) -> Ordering {
    let trivial = |x: &(u64, Vec<Cyclotomic>)| x.1.iter().all(|v| v.as_integer() == Ok(1));
    a.0.cmp(&b.0).then(trivial(b).cmp(&trivial(a))).then_with(|| {
        a.1.iter()
            .zip(&b.1)
            .map(|(x, y)| x.canonical_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Computes the character table of the classified group.
///
/// Irreducibles are sorted by degree, the trivial character first, then
/// by value sequence.
pub fn compute_table(cd: &ClassData) -> Result<CharacterTable, DixonError> {
    let g = cd.group();
    let order = g.order() as u64;
    let r = cd.len();
    let e = cd.exponent();
    let mut chars: Vec<(u64, Vec<Cyclotomic>)>;
    let mut prime = None;
    if r as u64 == order {
        chars = abelian_characters(cd)
            .into_iter()
            .map(|c| (1, cd.reps().iter().map(|&x| root_value(e, c[x as usize])).collect()))
            .collect();
    } else {
        let l = lifting_prime(order, e).ok_or(DixonError::NoLiftingPrime { exponent: e })?;
        prime = Some(l);
        let z = Zp::new(l);
        let members = class_member_lists(cd);
        let cache: Vec<std::sync::OnceLock<Vec<Vec<u64>>>> = (0..r).map(|_| Default::default()).collect();
        let mats = |i: usize| cache[i].get_or_init(|| class_matrix_with(cd, &members, i).a).clone();
        // class matrices are cheap to build in parallel and most get used
        (1..r).into_par_iter().for_each(|i| {
            mats(i);
        });
        let vectors = split_spaces(z, mats, r)?;
        let sizes: Vec<u64> = cd.sizes().iter().map(|&s| s as u64 % l).collect();
        let inverse = cd.inverse_classes();
        let zeta_e = z.pow(z.primitive_root(), (l - 1) / e);
        let power_classes: Vec<Vec<u32>> = (0..r).map(|k| cd.power_classes(k)).collect();
        let max_d = isqrt(order);
        chars = vectors
            .into_par_iter()
            .map(|v| {
                if v[0] == 0 {
                    return Err(DixonError::SplittingFailure(
                        "eigenvector vanishes at the identity".into(),
                    ));
                }
                let inv0 = z.inv(v[0]);
                let w: Vec<u64> = v.iter().map(|&x| z.mul(x, inv0)).collect();
                let s = (0..r).fold(0, |acc, k| {
                    z.add(acc, z.mul(z.mul(w[k], w[inverse[k] as usize]), z.inv(sizes[k])))
                });
                if s == 0 {
                    return Err(DixonError::SplittingFailure("degenerate norm".into()));
                }
                let target = z.mul(order % l, z.inv(s));
                let d = (1..=max_d)
                    .find(|&d| z.mul(d, d) == target)
                    .ok_or_else(|| DixonError::SplittingFailure("no degree square root".into()))?;
                let theta: Vec<u64> = (0..r).map(|k| z.mul(z.mul(w[k], d), z.inv(sizes[k]))).collect();
                Ok((d, lift_character(cd, z, zeta_e, &theta, d, &power_classes)?))
            })
            .collect::<Result<_, _>>()?;
    }
    chars.sort_by(cmp_characters);
    let space = cd.space().clone();
    Ok(CharacterTable {
        degrees: chars.iter().map(|c| c.0).collect(),
        irreducibles: chars.into_iter().map(|c| ClassFunction::new(&space, c.1)).collect(),
        space,
        lifting_prime: prime,
        exponent: e,
        power_maps: cd.prime_power_maps().clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::conjugacy_classes;
    use crate::matgrp::{build_group, Family, FiniteGroup, DEFAULT_ORDER_CAP};

    fn classes_of(f: Family, n: usize, q: u64) -> ClassData {
        let g = Arc::new(build_group(f, n, q, DEFAULT_ORDER_CAP).unwrap());
        conjugacy_classes(&g)
    }

    #[test]
    fn lifting_primes() {
        // exponent 168, 2⌈√6048⌉ = 156
        assert_eq!(lifting_prime(6048, 168), Some(337));
        assert_eq!(lifting_prime(25920, 180), Some(541));
        assert_eq!(lifting_prime(1, 1), Some(3));
    }

    #[test]
    fn counting_identity_sl25() {
        let cd = classes_of(Family::SL, 2, 5);
        let mats = class_matrices(&cd);
        assert_eq!(
            mats[0].a,
            (0..cd.len())
                .map(|j| (0..cd.len()).map(|k| (j == k) as u64).collect())
                .collect::<Vec<Vec<u64>>>()
        );
        let h = cd.sizes();
        for m in &mats {
            for j in 0..cd.len() {
                let s: u64 = (0..cd.len()).map(|k| m.a[j][k] * h[k] as u64).sum();
                assert_eq!(s, (h[m.i] * h[j]) as u64);
            }
        }
    }

    #[test]
    fn cyclic_of_order_three() {
        let cd = classes_of(Family::GL, 1, 4);
        let mats = class_matrices(&cd);
        let g = cd.group();
        let x = cd.reps()[1];
        let i = cd.class_of(x) as usize;
        let k = cd.class_of(g.mul(x, x)) as usize;
        assert_eq!(mats[i].a[i][k], 1);
        let t = compute_table(&cd).unwrap();
        assert_eq!(t.lifting_prime(), None);
        let mut vals: Vec<Cyclotomic> = t.irreducibles().iter().map(|c| c.value(i).clone()).collect();
        vals.sort_by(|a, b| a.canonical_cmp(b));
        let mut want = vec![Cyclotomic::one(1), Cyclotomic::root(3, 1), Cyclotomic::root(3, 2)];
        want.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(vals, want);
        t.verify().unwrap();
    }

    #[test]
    fn abelian_path_matches_general_path() {
        let cd = classes_of(Family::GL, 1, 7);
        let t = compute_table(&cd).unwrap();
        t.verify().unwrap();
        assert_eq!(t.len(), 6);
        // run the modular algorithm directly on the same group
        let order = cd.group().order() as u64;
        let l = lifting_prime(order, cd.exponent()).unwrap();
        let z = Zp::new(l);
        let members = class_member_lists(&cd);
        let vecs = split_spaces(z, |i| class_matrix_with(&cd, &members, i).a, cd.len()).unwrap();
        assert_eq!(vecs.len(), 6);
    }

    #[test]
    fn a5_degrees() {
        let cd = classes_of(Family::SL, 2, 4);
        let t = compute_table(&cd).unwrap();
        assert_eq!(t.degrees(), &[1, 3, 3, 4, 5]);
        t.verify().unwrap();
        assert_eq!(t.irreducibles()[0], ClassFunction::trivial(cd.space()));
        assert_eq!(t.steinberg(2).unwrap(), 3);
    }

    #[test]
    fn sl27_and_sl28() {
        let cd = classes_of(Family::SL, 2, 7);
        let t = compute_table(&cd).unwrap();
        t.verify().unwrap();
        assert_eq!(t.len(), 11);
        assert_eq!(t.degrees()[t.steinberg(7).unwrap()], 7);
        let cd = classes_of(Family::SL, 2, 8);
        let t = compute_table(&cd).unwrap();
        t.verify().unwrap();
        assert_eq!(t.degrees()[t.steinberg(2).unwrap()], 8);
        assert!(matches!(t.steinberg(3), Err(DixonError::NotUnique { .. })));
    }

    #[test]
    fn linear_characters_count_abelianization() {
        // GL(2,3) has abelianization of order 2
        let cd = classes_of(Family::GL, 2, 3);
        let t = compute_table(&cd).unwrap();
        t.verify().unwrap();
        assert_eq!(t.degrees().iter().filter(|&&d| d == 1).count(), 2);
        let rec = t.record();
        let json = serde_json::to_string(&rec).unwrap();
        let back: TableRecord = serde_json::from_str(&json).unwrap();
        let t2 = CharacterTable::from_record(back, cd.space()).unwrap();
        assert_eq!(t2.irreducibles(), t.irreducibles());
    }

    #[test]
    fn from_matrices_group() {
        // S₃ as permutation matrices over GF(2)
        let f = crate::gf::FieldSpec::new(2, 1).unwrap();
        let m = |rows: [[u32; 3]; 3]| {
            crate::matgrp::Matrix::from_rows(
                &f,
                &rows
                    .iter()
                    .map(|r| r.iter().map(|&v| crate::gf::Fq(v)).collect())
                    .collect::<Vec<_>>(),
            )
        };
        let a = m([[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        let b = m([[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        let g = Arc::new(FiniteGroup::from_matrices("S3", &[a, b], 100).unwrap());
        let cd = conjugacy_classes(&g);
        let t = compute_table(&cd).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 2]);
        t.verify().unwrap();
    }
}
