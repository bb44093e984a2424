//! Finite matrix groups built by full enumeration.
//!
//! Classical groups are generated from their upper unitriangular subgroup
//! `U`, the opposite subgroup `P U P` (with `P` the antidiagonal permutation
//! matrix), and one diagonal torus element. `GL` and `GU` add a diagonal
//! element whose determinant generates the determinant image.
//!
//! Forms are fixed as follows:
//! - unitary: Gram matrix `antidiag(1, ..., 1)` over GF(q²), so that
//!   `g · J · σ(g)ᵗ = J` with `σ(x) = x^q`;
//! - symplectic: `Ω = antidiag(1, ..., 1, -1, ..., -1)` (first half `+1`),
//!   so that `g · Ω · gᵗ = Ω`.
//!
//! Elements are numbered in breadth-first order from the identity, which
//! always has index 0.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldError, FieldSpec, Fq};
use crate::poly::{least_primitive, Poly};

/// Default cap on enumerated group orders.
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCapExceeded { order: u128, cap: u64 },
    #[error("unsupported group: {0}")]
    UnsupportedFamily(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("enumeration produced {found} elements, expected {expected}")]
    OrderMismatch { found: usize, expected: u128 },
    #[error("matrix is not invertible")]
    Singular,
    #[error("matrix does not belong to the group")]
    NotAMember,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Family {
    GL,
    SL,
    GU,
    SU,
    Sp,
}

impl Family {
    pub fn is_unitary(self) -> bool {
        matches!(self, Family::GU | Family::SU)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::GL => "GL",
            Family::SL => "SL",
            Family::GU => "GU",
            Family::SU => "SU",
            Family::Sp => "Sp",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Some(match s {
            "GL" => Family::GL,
            "SL" => Family::SL,
            "GU" => Family::GU,
            "SU" => Family::SU,
            "Sp" => Family::Sp,
            _ => return None,
        })
    }

    /// The classical order formula.
    pub fn order(self, n: usize, q: u64) -> u128 {
        let q = q as u128;
        let n32 = n as u32;
        match self {
            Family::GL => q.pow(n32 * (n32 - 1) / 2) * (1..=n32).map(|i| q.pow(i) - 1).product::<u128>(),
            Family::SL => Family::GL.order(n, q as u64) / (q - 1),
            Family::GU => {
                q.pow(n32 * (n32 - 1) / 2)
                    * (1..=n32)
                        .map(|i| if i % 2 == 0 { q.pow(i) - 1 } else { q.pow(i) + 1 })
                        .product::<u128>()
            }
            Family::SU => Family::GU.order(n, q as u64) / (q + 1),
            Family::Sp => {
                let m = n32 / 2;
                q.pow(m * m) * (1..=m).map(|i| q.pow(2 * i) - 1).product::<u128>()
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A square matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<FieldSpec>,
    n: usize,
    data: Vec<Fq>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u32>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).0).collect())
            .collect();
        write!(f, "Matrix{rows:?}")
    }
}

impl Matrix {
    pub fn from_rows(field: &Arc<FieldSpec>, rows: &[Vec<Fq>]) -> Matrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            field: field.clone(),
            n,
            data: rows.concat(),
        }
    }

    pub fn identity(field: &Arc<FieldSpec>, n: usize) -> Matrix {
        let mut data = vec![Fq::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = Fq::ONE;
        }
        Matrix {
            field: field.clone(),
            n,
            data,
        }
    }

    pub fn diagonal(field: &Arc<FieldSpec>, diag: &[Fq]) -> Matrix {
        let mut m = Matrix::identity(field, diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// The antidiagonal matrix with the given entries, top row first.
    pub fn antidiagonal(field: &Arc<FieldSpec>, entries: &[Fq]) -> Matrix {
        let n = entries.len();
        let mut m = Matrix {
            field: field.clone(),
            n,
            data: vec![Fq::ZERO; n * n],
        };
        for (i, &d) in entries.iter().enumerate() {
            m.set(i, n - 1 - i, d);
        }
        m
    }

    /// Companion matrix of a monic polynomial (last column holds `-c_i`).
    pub fn companion(field: &Arc<FieldSpec>, poly: &Poly) -> Matrix {
        let n = poly.degree().expect("nonzero polynomial");
        let mut m = Matrix {
            field: field.clone(),
            n,
            data: vec![Fq::ZERO; n * n],
        };
        for i in 1..n {
            m.set(i, i - 1, Fq::ONE);
        }
        for i in 0..n {
            m.set(i, n - 1, field.neg(poly.0[i]));
        }
        m
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Fq] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let mut out = vec![Fq::ZERO; self.n * self.n];
        mat_mul(&self.field, self.n, &self.data, &other.data, &mut out);
        Matrix {
            field: self.field.clone(),
            n: self.n,
            data: out,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(j, i));
            }
        }
        m
    }

    /// Entrywise Frobenius `x -> x^(p^times)`.
    pub fn frobenius(&self, times: u32) -> Matrix {
        Matrix {
            field: self.field.clone(),
            n: self.n,
            data: self.data.iter().map(|&x| self.field.frobenius(x, times)).collect(),
        }
    }

    pub fn scale(&self, c: Fq) -> Matrix {
        Matrix {
            field: self.field.clone(),
            n: self.n,
            data: self.data.iter().map(|&x| self.field.mul(x, c)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            field: self.field.clone(),
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| self.field.sub(a, b))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { Fq::ONE } else { Fq::ZERO }))
    }

    /// Row-reduces a copy and returns `(rank, determinant)`.
    fn eliminate(&self) -> (usize, Fq) {
        let f = &self.field;
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Fq::ONE;
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| !a[r * n + col].is_zero()) else {
                det = Fq::ZERO;
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    a.swap(piv * n + j, rank * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[rank * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("pivot is nonzero");
            for r in (rank + 1)..n {
                let factor = f.mul(a[r * n + col], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[rank * n + j]));
                }
            }
            rank += 1;
        }
        if rank < n {
            det = Fq::ZERO;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> Fq {
        self.eliminate().1
    }

    /// Dimension of the kernel of `self - c·I`.
    pub fn eigenspace_dim(&self, c: Fq) -> usize {
        let shifted = self.sub(&Matrix::identity(&self.field, self.n).scale(c));
        self.n - shifted.rank()
    }

    pub fn inverse(&self) -> Result<Matrix, GroupError> {
        let f = &self.field;
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(f, n).data;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(GroupError::Singular)?;
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
                inv.swap(piv * n + j, col * n + j);
            }
            let pinv = f.inv(a[col * n + col]).expect("pivot is nonzero");
            for j in 0..n {
                a[col * n + j] = f.mul(a[col * n + j], pinv);
                inv[col * n + j] = f.mul(inv[col * n + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
                    inv[r * n + j] = f.sub(inv[r * n + j], f.mul(factor, inv[col * n + j]));
                }
            }
        }
        Ok(Matrix {
            field: f.clone(),
            n,
            data: inv,
        })
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order by repeated multiplication.
    pub fn order(&self) -> u64 {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    /// Row-major entry codes as little-endian `u32` bytes.
    pub fn canonical_key(&self) -> Vec<u8> {
        self.data.iter().flat_map(|x| x.0.to_le_bytes()).collect()
    }
}

fn mat_mul(f: &FieldSpec, n: usize, a: &[Fq], b: &[Fq], out: &mut [Fq]) {
    for i in 0..n {
        for j in 0..n {
            let mut acc = Fq::ZERO;
            for k in 0..n {
                let x = a[i * n + k];
                if x.is_zero() {
                    continue;
                }
                let y = b[k * n + j];
                if y.is_zero() {
                    continue;
                }
                acc = f.add(acc, f.mul(x, y));
            }
            out[i * n + j] = acc;
        }
    }
}

#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100000001b3);
        }
    }

    fn write_u128(&mut self, v: u128) {
        let x = (v as u64) ^ ((v >> 64) as u64).rotate_left(29);
        self.0 = (x ^ (x >> 31)).wrapping_mul(0x9e3779b97f4a7c15);
        self.0 ^= self.0 >> 29;
    }
}

type KeyMap = HashMap<u128, u32, BuildHasherDefault<KeyHasher>>;

/// Packs the entries into an integer whose order matches row-major
/// lexicographic order on entry codes.
#[derive(Clone, Copy)]
struct Packer {
    bits: u32,
}

impl Packer {
    fn new(q: u32, n: usize) -> Result<Packer, GroupError> {
        let bits = 32 - (q - 1).max(1).leading_zeros();
        if bits as usize * n * n > 128 {
            return Err(GroupError::UnsupportedFamily(format!(
                "{n}x{n} matrices over GF({q}) do not fit the packed key"
            )));
        }
        Ok(Packer { bits })
    }

    #[inline]
    fn pack(self, data: &[Fq]) -> u128 {
        data.iter().fold(0u128, |acc, x| (acc << self.bits) | x.0 as u128)
    }
}

struct MatrixStore {
    field: Arc<FieldSpec>,
    n: usize,
    data: Vec<Fq>,
    index: KeyMap,
    packer: Packer,
}

impl MatrixStore {
    fn entries(&self, i: u32) -> &[Fq] {
        let nn = self.n * self.n;
        &self.data[i as usize * nn..(i as usize + 1) * nn]
    }

    fn lookup(&self, data: &[Fq]) -> Option<u32> {
        self.index.get(&self.packer.pack(data)).copied()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let nn = self.n * self.n;
        let mut buf = [Fq::ZERO; 64];
        let out = if nn <= 64 {
            &mut buf[..nn]
        } else {
            return self.mul_slow(a, b);
        };
        mat_mul(&self.field, self.n, self.entries(a), self.entries(b), out);
        self.lookup(out).expect("group is closed under multiplication")
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let mut out = vec![Fq::ZERO; self.n * self.n];
        mat_mul(&self.field, self.n, self.entries(a), self.entries(b), &mut out);
        self.lookup(&out).expect("group is closed under multiplication")
    }
}

enum Repr {
    Matrix(MatrixStore),
    Quotient {
        parent: Arc<FiniteGroup>,
        /// Least parent index in each coset.
        reps: Vec<u32>,
        /// Parent index to coset index.
        proj: Vec<u32>,
    },
    Sub {
        parent: Arc<FiniteGroup>,
        members: Vec<u32>,
        /// Parent index to position in `members`, or `u32::MAX`.
        position: Vec<u32>,
    },
}

/// Which classical group a [`FiniteGroup`] realizes, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalSpec {
    pub family: Family,
    pub n: usize,
    pub q: u64,
    pub quotient: bool,
}

impl fmt::Display for ClassicalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.family, self.n, self.q)?;
        if self.quotient {
            f.write_str("/Z")?;
        }
        Ok(())
    }
}

/// A fully enumerated finite group. Elements are indices `0..order()`.
pub struct FiniteGroup {
    label: String,
    classical: Option<ClassicalSpec>,
    repr: Repr,
    inverses: Vec<u32>,
    generators: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label, self.order())
    }
}

/// Breadth-first closure of matrix generators.
fn enumerate_matrices(
    field: &Arc<FieldSpec>,
    n: usize,
    gens: &[Matrix],
    cap: u64,
) -> Result<(MatrixStore, Vec<u32>), GroupError> {
    let packer = Packer::new(field.q(), n)?;
    let nn = n * n;
    let mut store = MatrixStore {
        field: field.clone(),
        n,
        data: Matrix::identity(field, n).data,
        index: KeyMap::default(),
        packer,
    };
    store.index.insert(packer.pack(&store.data), 0);
    let mut gen_idx = Vec::new();
    let mut buf = vec![Fq::ZERO; nn];
    let mut head = 0usize;
    let mut count = 1usize;
    while head < count {
        for g in gens {
            mat_mul(field, n, &store.data[head * nn..(head + 1) * nn], &g.data, &mut buf);
            let key = packer.pack(&buf);
            if let std::collections::hash_map::Entry::Vacant(e) = store.index.entry(key) {
                if count as u64 >= cap {
                    return Err(GroupError::OrderCapExceeded {
                        order: count as u128 + 1,
                        cap,
                    });
                }
                e.insert(count as u32);
                store.data.extend_from_slice(&buf);
                count += 1;
            }
        }
        head += 1;
    }
    for g in gens {
        gen_idx.push(store.lookup(&g.data).expect("generators are members"));
    }
    gen_idx.sort_unstable();
    gen_idx.dedup();
    Ok((store, gen_idx))
}

impl FiniteGroup {
    /// Enumerates the matrix group generated by `gens`.
    pub fn from_matrices(label: &str, gens: &[Matrix], cap: u64) -> Result<FiniteGroup, GroupError> {
        let first = gens
            .first()
            .ok_or_else(|| GroupError::UnsupportedFamily("no generators".into()))?;
        let field = first.field.clone();
        let (store, generators) = enumerate_matrices(&field, first.n, gens, cap)?;
        let count = store.data.len() / (store.n * store.n);
        let mut inverses = vec![u32::MAX; count];
        for i in 0..count as u32 {
            if inverses[i as usize] != u32::MAX {
                continue;
            }
            let m = Matrix {
                field: field.clone(),
                n: store.n,
                data: store.entries(i).to_vec(),
            };
            let inv = store
                .lookup(&m.inverse()?.data)
                .expect("group is closed under inversion");
            inverses[i as usize] = inv;
            inverses[inv as usize] = i;
        }
        Ok(FiniteGroup {
            label: label.to_string(),
            classical: None,
            repr: Repr::Matrix(store),
            inverses,
            generators,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn classical(&self) -> Option<ClassicalSpec> {
        self.classical
    }

    pub fn order(&self) -> usize {
        self.inverses.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.repr {
            Repr::Matrix(s) => s.mul(a, b),
            Repr::Quotient { parent, reps, proj } => proj[parent.mul(reps[a as usize], reps[b as usize]) as usize],
            Repr::Sub {
                parent,
                members,
                position,
            } => position[parent.mul(members[a as usize], members[b as usize]) as usize],
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    /// `x g x⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = self.identity();
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A key whose order gives the representative choice among elements.
    /// For matrix-backed groups this is the packed row-major entry code.
    pub fn sort_key(&self, a: u32) -> u128 {
        match &self.repr {
            Repr::Matrix(s) => s.packer.pack(s.entries(a)),
            Repr::Quotient { parent, reps, .. } => parent.sort_key(reps[a as usize]),
            Repr::Sub { parent, members, .. } => parent.sort_key(members[a as usize]),
        }
    }

    /// The matrix realizing an element, when one exists (coset
    /// representatives for quotients).
    pub fn matrix(&self, a: u32) -> Option<Matrix> {
        match &self.repr {
            Repr::Matrix(s) => Some(Matrix {
                field: s.field.clone(),
                n: s.n,
                data: s.entries(a).to_vec(),
            }),
            Repr::Quotient { parent, reps, .. } => parent.matrix(reps[a as usize]),
            Repr::Sub { parent, members, .. } => parent.matrix(members[a as usize]),
        }
    }

    /// Index of a matrix in a matrix-backed group.
    pub fn index_of(&self, m: &Matrix) -> Option<u32> {
        match &self.repr {
            Repr::Matrix(s) if s.n == m.n && *s.field == *m.field => s.lookup(&m.data),
            Repr::Sub { parent, position, .. } => parent
                .index_of(m)
                .map(|i| position[i as usize])
                .filter(|&p| p != u32::MAX),
            _ => None,
        }
    }

    /// For a subgroup view, the parent index of an element.
    pub fn parent_index(&self, a: u32) -> Option<u32> {
        match &self.repr {
            Repr::Sub { members, .. } => Some(members[a as usize]),
            _ => None,
        }
    }

    pub fn field(&self) -> Option<&Arc<FieldSpec>> {
        match &self.repr {
            Repr::Matrix(s) => Some(&s.field),
            Repr::Quotient { parent, .. } | Repr::Sub { parent, .. } => parent.field(),
        }
    }
}

/// Upper unitriangular matrices of dimension `n` satisfying `keep`.
fn unitriangular(field: &Arc<FieldSpec>, n: usize, keep: impl Fn(&Matrix) -> bool) -> Vec<Matrix> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let q = field.q() as u64;
    let total = q.pow(slots.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut m = Matrix::identity(field, n);
        let mut c = code;
        for &(i, j) in &slots {
            m.set(i, j, Fq((c % q) as u32));
            c /= q;
        }
        if keep(&m) {
            out.push(m);
        }
    }
    out
}

fn closure_keys(gens: &[Matrix], n: usize, field: &Arc<FieldSpec>) -> HashSet<Vec<Fq>> {
    let mut seen = HashSet::new();
    let id = Matrix::identity(field, n);
    seen.insert(id.data.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.data.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// A small generating set of a finite matrix group given by its elements,
/// picked greedily in list order.
fn greedy_generators(elements: &[Matrix]) -> Vec<Matrix> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let field = first.field.clone();
    let n = first.n;
    let mut gens: Vec<Matrix> = Vec::new();
    let mut span = closure_keys(&gens, n, &field);
    for m in elements {
        if !span.contains(&m.data) {
            gens.push(m.clone());
            span = closure_keys(&gens, n, &field);
        }
    }
    gens
}

/// The Gram matrix of the invariant form of a family, if it has one.
pub fn gram_matrix(family: Family, n: usize, field: &Arc<FieldSpec>) -> Option<Matrix> {
    match family {
        Family::GU | Family::SU => Some(Matrix::antidiagonal(field, &vec![Fq::ONE; n])),
        Family::Sp => {
            let minus = field.neg(Fq::ONE);
            let entries: Vec<Fq> = (0..n).map(|i| if i < n / 2 { Fq::ONE } else { minus }).collect();
            Some(Matrix::antidiagonal(field, &entries))
        }
        Family::GL | Family::SL => None,
    }
}

/// Whether `g` preserves the family's form (always true without a form).
pub fn preserves_form(family: Family, g: &Matrix) -> bool {
    let field = g.field.clone();
    let Some(gram) = gram_matrix(family, g.n, &field) else {
        return true;
    };
    let twisted = if family.is_unitary() {
        g.frobenius(field.k() / 2).transpose()
    } else {
        g.transpose()
    };
    g.mul(&gram).mul(&twisted) == gram
}

/// Standard generators for a classical family over the appropriate field.
pub fn standard_generators(family: Family, n: usize, q: u64) -> Result<Vec<Matrix>, GroupError> {
    if n == 0 {
        return Err(GroupError::UnsupportedFamily("dimension must be positive".into()));
    }
    if family == Family::Sp && n % 2 == 1 {
        return Err(GroupError::UnsupportedFamily(format!(
            "Sp({n},{q}) needs even dimension"
        )));
    }
    let field = if family.is_unitary() {
        FieldSpec::of_size(
            q.checked_mul(q)
                .ok_or(GroupError::UnsupportedFamily("field too large".into()))?,
        )?
    } else {
        FieldSpec::of_size(q)?
    };
    let w = field.generator();
    let one = Fq::ONE;
    let qi = q as i64;

    let u = unitriangular(&field, n, |m| preserves_form(family, m));
    let upper = greedy_generators(&u);
    let flip = Matrix::antidiagonal(&field, &vec![one; n]);
    let mut gens: Vec<Matrix> = upper.to_vec();
    gens.extend(upper.iter().map(|m| flip.mul(m).mul(&flip)));

    // A torus element of determinant one, and for GL/GU one with generating
    // determinant.
    let mut diag = vec![one; n];
    match family {
        Family::GL | Family::SL => {
            if n >= 2 {
                diag[0] = w;
                diag[1] = field.pow(w, -1);
                gens.push(Matrix::diagonal(&field, &diag));
            }
            if family == Family::GL {
                let mut d = vec![one; n];
                d[0] = w;
                gens.push(Matrix::diagonal(&field, &d));
            }
        }
        Family::Sp => {
            diag[0] = w;
            diag[n - 1] = field.pow(w, -1);
            gens.push(Matrix::diagonal(&field, &diag));
        }
        Family::GU | Family::SU => {
            if n == 1 {
                if family == Family::GU {
                    gens.push(Matrix::diagonal(&field, &[field.pow(w, qi - 1)]));
                }
            } else {
                // pairs (i, n-1-i) carry (x, x^{-q}); the middle entry y has y^{q+1} = 1
                if n % 2 == 1 {
                    diag[0] = w;
                    diag[n - 1] = field.pow(w, -qi);
                    diag[n / 2] = field.pow(w, qi - 1);
                } else if n >= 4 {
                    diag[0] = w;
                    diag[n - 1] = field.pow(w, -qi);
                    diag[1] = field.pow(w, -1);
                    diag[n - 2] = field.pow(w, qi);
                } else {
                    // n == 2: diag(x, x^{-q}) has det x^{1-q}; take x of order q+1... any
                    // x with x^{q-1} = 1, i.e. x in GF(q)^×.
                    diag[0] = field.pow(w, qi + 1);
                    diag[1] = field.pow(diag[0], -qi);
                }
                gens.push(Matrix::diagonal(&field, &diag));
                if family == Family::GU {
                    let mut d = vec![one; n];
                    d[0] = w;
                    d[n - 1] = field.pow(w, -qi);
                    gens.push(Matrix::diagonal(&field, &d));
                }
            }
        }
    }
    if gens.is_empty() {
        gens.push(Matrix::identity(&field, n));
    }
    Ok(gens)
}

/// Builds a classical group by enumeration and checks its order.
pub fn build_group(family: Family, n: usize, q: u64, cap: u64) -> Result<FiniteGroup, GroupError> {
    if crate::gf::prime_power(q).is_none() {
        return Err(GroupError::UnsupportedFamily(format!("{q} is not a prime power")));
    }
    if family == Family::Sp && n % 2 == 1 {
        return Err(GroupError::UnsupportedFamily(format!(
            "Sp({n},{q}) needs even dimension"
        )));
    }
    if n == 0 {
        return Err(GroupError::UnsupportedFamily("dimension must be positive".into()));
    }
    let expected = family.order(n, q);
    if expected > cap as u128 {
        return Err(GroupError::OrderCapExceeded { order: expected, cap });
    }
    let gens = standard_generators(family, n, q)?;
    let spec = ClassicalSpec {
        family,
        n,
        q,
        quotient: false,
    };
    let mut g = FiniteGroup::from_matrices(&spec.to_string(), &gens, cap)?;
    if g.order() as u128 != expected {
        return Err(GroupError::OrderMismatch {
            found: g.order(),
            expected,
        });
    }
    g.classical = Some(spec);
    Ok(g)
}

/// A subgroup of an enumerated group, as a sorted list of parent indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<u32>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} in {})", self.members.len(), self.parent.label)
    }
}

impl Subgroup {
    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: u32) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(parent: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            members: (0..parent.order() as u32).collect(),
        }
    }

    /// A standalone group view; its element `i` is `members()[i]`.
    pub fn as_group(&self, label: &str) -> FiniteGroup {
        let mut position = vec![u32::MAX; self.parent.order()];
        for (i, &m) in self.members.iter().enumerate() {
            position[m as usize] = i as u32;
        }
        let inverses = self
            .members
            .iter()
            .map(|&m| position[self.parent.inv(m) as usize])
            .collect();
        // Generators: a greedy generating set inside the subgroup.
        let mut gens = Vec::new();
        let mut span: HashSet<u32> = HashSet::from([self.parent.identity()]);
        for &m in &self.members {
            if !span.contains(&m) {
                gens.push(m);
                span = closure(&self.parent, &gens).into_iter().collect();
            }
        }
        let generators = gens.iter().map(|&g| position[g as usize]).collect();
        FiniteGroup {
            label: label.to_string(),
            classical: None,
            repr: Repr::Sub {
                parent: self.parent.clone(),
                members: self.members.clone(),
                position,
            },
            inverses,
            generators,
        }
    }
}

/// Sorted closure of `gens` under multiplication.
fn closure(g: &FiniteGroup, gens: &[u32]) -> Vec<u32> {
    let mut seen = vec![false; g.order()];
    seen[g.identity() as usize] = true;
    let mut out = vec![g.identity()];
    let mut head = 0;
    while head < out.len() {
        let x = out[head];
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y as usize] {
                seen[y as usize] = true;
                out.push(y);
            }
        }
        head += 1;
    }
    out.sort_unstable();
    out
}

pub fn subgroup_generated(g: &Arc<FiniteGroup>, gens: &[u32]) -> Subgroup {
    Subgroup {
        parent: g.clone(),
        members: closure(g, gens),
    }
}

/// Elements commuting with every element of `with`.
fn commuting(g: &Arc<FiniteGroup>, with: &[u32]) -> Subgroup {
    let members = (0..g.order() as u32)
        .filter(|&x| with.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    Subgroup {
        parent: g.clone(),
        members,
    }
}

pub fn center(g: &Arc<FiniteGroup>) -> Subgroup {
    commuting(g, g.generators())
}

pub fn centralizer(g: &Arc<FiniteGroup>, x: u32) -> Subgroup {
    commuting(g, &[x])
}

/// The quotient by the center, with cosets represented by their least
/// element index.
pub fn quotient_by_center(g: &Arc<FiniteGroup>) -> FiniteGroup {
    let z = center(g);
    let mut proj = vec![u32::MAX; g.order()];
    let mut reps = Vec::with_capacity(g.order() / z.order());
    for x in 0..g.order() as u32 {
        if proj[x as usize] != u32::MAX {
            continue;
        }
        let idx = reps.len() as u32;
        reps.push(x);
        for &c in z.members() {
            proj[g.mul(x, c) as usize] = idx;
        }
    }
    let inverses = reps.iter().map(|&r| proj[g.inv(r) as usize]).collect();
    let mut generators: Vec<u32> = g.generators().iter().map(|&s| proj[s as usize]).collect();
    generators.sort_unstable();
    generators.dedup();
    let classical = g.classical.map(|c| ClassicalSpec { quotient: true, ..c });
    let label = match classical {
        Some(c) => c.to_string(),
        None => format!("{}/Z", g.label),
    };
    FiniteGroup {
        label,
        classical,
        repr: Repr::Quotient {
            parent: g.clone(),
            reps,
            proj,
        },
        inverses,
        generators,
    }
}

/// For a quotient group, the image of a parent element.
pub fn project(quotient: &FiniteGroup, parent_index: u32) -> Option<u32> {
    match &quotient.repr {
        Repr::Quotient { proj, .. } => Some(proj[parent_index as usize]),
        _ => None,
    }
}

/// A Singer cycle of GL_n(q): the companion matrix of the least primitive
/// polynomial of degree `n` over GF(q).
pub fn singer_element(n: usize, field: &Arc<FieldSpec>) -> Matrix {
    Matrix::companion(field, &least_primitive(n, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    #[test]
    fn classical_orders_match_enumeration() {
        let cases = [
            (Family::SL, 2, 7, 336u128),
            (Family::SL, 2, 5, 120),
            (Family::SL, 2, 8, 504),
            (Family::SL, 2, 4, 60),
            (Family::GL, 1, 5, 4),
            (Family::GL, 2, 3, 48),
            (Family::GL, 3, 2, 168),
            (Family::SU, 2, 3, 24),
            (Family::GU, 2, 2, 18),
            (Family::SU, 3, 2, 216),
            (Family::Sp, 2, 5, 120),
            (Family::Sp, 4, 2, 720),
            (Family::SU, 3, 3, 6048),
        ];
        for (fam, n, q, order) in cases {
            assert_eq!(fam.order(n, q), order, "{fam}({n},{q}) formula");
            let g = build_group(fam, n, q, DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(g.order() as u128, order, "{fam}({n},{q})");
        }
    }

    #[test]
    fn cap_and_family_errors() {
        assert!(matches!(
            build_group(Family::SL, 3, 5, 1000),
            Err(GroupError::OrderCapExceeded { .. })
        ));
        assert!(matches!(
            build_group(Family::Sp, 3, 3, DEFAULT_ORDER_CAP),
            Err(GroupError::UnsupportedFamily(_))
        ));
        assert!(matches!(
            build_group(Family::SL, 2, 6, DEFAULT_ORDER_CAP),
            Err(GroupError::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn centers() {
        let sl27 = arc(build_group(Family::SL, 2, 7, DEFAULT_ORDER_CAP).unwrap());
        let z = center(&sl27);
        assert_eq!(z.order(), 2);
        let minus = sl27.matrix(z.members()[1]).unwrap();
        assert_eq!(minus.get(0, 0), sl27.field().unwrap().neg(Fq::ONE));
        let su33 = arc(build_group(Family::SU, 3, 3, DEFAULT_ORDER_CAP).unwrap());
        assert_eq!(center(&su33).order(), 1);
        let sl28 = arc(build_group(Family::SL, 2, 8, DEFAULT_ORDER_CAP).unwrap());
        assert_eq!(center(&sl28).order(), 1);
    }

    #[test]
    fn quotients() {
        for (q, order) in [(7, 168), (5, 60)] {
            let g = arc(build_group(Family::SL, 2, q, DEFAULT_ORDER_CAP).unwrap());
            let pg = quotient_by_center(&g);
            assert_eq!(pg.order(), order);
            assert_eq!(pg.label(), format!("SL(2,{q})/Z"));
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            for _ in 0..1000 {
                let x = rng.gen_range(0..g.order() as u32);
                let y = rng.gen_range(0..g.order() as u32);
                let (px, py) = (project(&pg, x).unwrap(), project(&pg, y).unwrap());
                assert_eq!(project(&pg, g.mul(x, y)).unwrap(), pg.mul(px, py));
            }
        }
        let su = arc(build_group(Family::SU, 3, 3, DEFAULT_ORDER_CAP).unwrap());
        assert_eq!(quotient_by_center(&su).order(), 6048);
    }

    #[test]
    fn subgroups_and_centralizers() {
        let g = arc(build_group(Family::SL, 2, 7, DEFAULT_ORDER_CAP).unwrap());
        assert_eq!(subgroup_generated(&g, &[0]).order(), 1);
        let f = g.field().unwrap().clone();
        let a = f.generator();
        assert_eq!(f.element_order(a).unwrap(), 6);
        let d = Matrix::diagonal(&f, &[a, f.inv(a).unwrap()]);
        let di = g.index_of(&d).unwrap();
        assert_eq!(subgroup_generated(&g, &[di]).order(), 6);
        assert_eq!(centralizer(&g, 0).order(), 336);
        for x in [di, 5, 17, 100] {
            let c = centralizer(&g, x);
            assert_eq!(g.order() % c.order(), 0);
            assert!(c.contains(x));
        }
    }

    #[test]
    fn closure_and_gram_preservation() {
        for (fam, n, q) in [
            (Family::SU, 3, 3),
            (Family::GU, 2, 3),
            (Family::Sp, 4, 2),
            (Family::SU, 3, 2),
        ] {
            let g = build_group(fam, n, q, DEFAULT_ORDER_CAP).unwrap();
            for i in 0..g.order() as u32 {
                let m = g.matrix(i).unwrap();
                assert!(preserves_form(fam, &m), "{fam}({n},{q}) element {i}");
                if matches!(fam, Family::SU | Family::Sp) {
                    assert_eq!(m.det(), Fq::ONE);
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..1000 {
                let x = rng.gen_range(0..g.order() as u32);
                let y = rng.gen_range(0..g.order() as u32);
                let prod = g.matrix(x).unwrap().mul(&g.matrix(y).unwrap());
                assert_eq!(g.index_of(&prod), Some(g.mul(x, y)));
                let inv = g.matrix(x).unwrap().inverse().unwrap();
                assert_eq!(g.index_of(&inv), Some(g.inv(x)));
            }
        }
    }

    #[test]
    fn singer_orders() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(singer_element(1, &f5).order(), 4);
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(singer_element(2, &f3).order(), 8);
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(singer_element(3, &f2).order(), 7);
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(singer_element(2, &f4).order(), 15);
    }

    #[test]
    fn canonical_key_is_injective_on_group() {
        let g = build_group(Family::GL, 2, 3, DEFAULT_ORDER_CAP).unwrap();
        let keys: HashSet<Vec<u8>> = (0..g.order() as u32)
            .map(|i| g.matrix(i).unwrap().canonical_key())
            .collect();
        assert_eq!(keys.len(), g.order());
    }
}
