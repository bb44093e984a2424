//! Class functions: inner products, tensor products, restriction,
//! induction, decomposition into irreducibles.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{ClassData, ClassSpace, Fusion};
use crate::cyclo::{CycloError, Cyclotomic};
use crate::dixon::CharacterTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassFnError {
    #[error("class functions live on different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("multiplicity of irreducible {index} is not an integer: {value}")]
    NonIntegralMultiplicity { index: usize, value: String },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// A function constant on conjugacy classes, one value per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    space: Arc<ClassSpace>,
    values: Vec<Cyclotomic>,
}

fn same_space(a: &Arc<ClassSpace>, b: &Arc<ClassSpace>) -> Result<(), ClassFnError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(ClassFnError::GroupMismatch(a.label.clone(), b.label.clone()))
    }
}

impl ClassFunction {
    pub fn new(space: &Arc<ClassSpace>, values: Vec<Cyclotomic>) -> ClassFunction {
        assert_eq!(values.len(), space.len(), "one value per class");
        ClassFunction {
            space: space.clone(),
            values,
        }
    }

    pub fn from_ints(space: &Arc<ClassSpace>, values: &[i64]) -> ClassFunction {
        ClassFunction::new(space, values.iter().map(|&v| Cyclotomic::from_int(1, v)).collect())
    }

    /// The principal character 1_G.
    pub fn trivial(space: &Arc<ClassSpace>) -> ClassFunction {
        ClassFunction::from_ints(space, &vec![1; space.len()])
    }

    pub fn zero(space: &Arc<ClassSpace>) -> ClassFunction {
        ClassFunction::from_ints(space, &vec![0; space.len()])
    }

    /// The regular character: |G| at the identity, 0 elsewhere.
    pub fn regular(space: &Arc<ClassSpace>) -> ClassFunction {
        let mut v = vec![0; space.len()];
        v[0] = space.order as i64;
        ClassFunction::from_ints(space, &v)
    }

    pub fn space(&self) -> &Arc<ClassSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    /// The value at the identity class as an integer, if it is one.
    pub fn degree(&self) -> Option<i64> {
        self.values[0].as_integer().ok()
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction {
            space: self.space.clone(),
            values: self.values.iter().map(Cyclotomic::conj).collect(),
        }
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction, ClassFnError> {
        same_space(&self.space, &other.space)?;
        Ok(ClassFunction {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction, ClassFnError> {
        same_space(&self.space, &other.space)?;
        Ok(ClassFunction {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, n: i128, d: i128) -> ClassFunction {
        ClassFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v.scale(n, d)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_zero)
    }
}

/// `[α, β]_G = (1/|G|) Σ_g α(g) · conj(β(g))`.
pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> Result<Cyclotomic, ClassFnError> {
    same_space(&a.space, &b.space)?;
    let sizes = &a.space.sizes;
    let mut acc = Cyclotomic::zero(1);
    for ((x, y), &h) in a.values.iter().zip(&b.values).zip(sizes) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.add(&x.mul(&y.conj()).scale(h as i128, 1));
    }
    Ok(acc.scale(1, a.space.order as i128))
}

/// Pointwise product.
pub fn tensor(a: &ClassFunction, b: &ClassFunction) -> Result<ClassFunction, ClassFnError> {
    same_space(&a.space, &b.space)?;
    Ok(ClassFunction {
        space: a.space.clone(),
        values: a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect(),
    })
}

/// The permutation character of `G` acting on itself by conjugation:
/// `π(g) = |C_G(g)|`.
pub fn conjugation_character(cd: &ClassData) -> ClassFunction {
    let values: Vec<i64> = (0..cd.len()).map(|k| cd.centralizer_order(k) as i64).collect();
    ClassFunction::from_ints(cd.space(), &values)
}

/// Pulls a class function on the parent back to the subgroup along the fusion.
pub fn restrict(phi: &ClassFunction, fusion: &Fusion) -> ClassFunction {
    let space = fusion.sub_classes().space();
    let values = fusion.map().iter().map(|&c| phi.values[c as usize].clone()).collect();
    ClassFunction::new(space, values)
}

/// Counts for inducing from a subgroup: `counts[k][c]` is the number of
/// `x ∈ G` with `x g_k x⁻¹` in subgroup class `c`.
pub struct Induction {
    parent_space: Arc<ClassSpace>,
    sub_space: Arc<ClassSpace>,
    counts: Vec<Vec<u64>>,
}

impl Induction {
    /// Tabulates `x g x⁻¹` for every `x ∈ G` and every parent class rep `g`.
    pub fn new(parent: &ClassData, fusion: &Fusion) -> Induction {
        let g = parent.group();
        let sub = fusion.subgroup();
        let sub_cd = fusion.sub_classes();
        let mut sub_class_of = vec![u32::MAX; g.order()];
        for (pos, &m) in sub.members().iter().enumerate() {
            sub_class_of[m as usize] = sub_cd.class_of(pos as u32);
        }
        let counts = parent
            .reps()
            .iter()
            .map(|&rep| {
                let mut row = vec![0u64; sub_cd.len()];
                // only classes meeting H contribute
                if !fusion.map().contains(&parent.class_of(rep)) {
                    return row;
                }
                for x in 0..g.order() as u32 {
                    let c = sub_class_of[g.conjugate(rep, x) as usize];
                    if c != u32::MAX {
                        row[c as usize] += 1;
                    }
                }
                row
            })
            .collect();
        Induction {
            parent_space: parent.space().clone(),
            sub_space: sub_cd.space().clone(),
            counts,
        }
    }

    /// `(Ind φ)(g) = (1/|H|) Σ_{x ∈ G} φ°(x g x⁻¹)`.
    pub fn induce(&self, phi: &ClassFunction) -> Result<ClassFunction, ClassFnError> {
        same_space(&self.sub_space, &phi.space)?;
        let h = self.sub_space.order as i128;
        let values = self
            .counts
            .iter()
            .map(|row| {
                let mut acc = Cyclotomic::zero(1);
                for (c, &n) in row.iter().enumerate() {
                    if n > 0 {
                        acc = acc.add(&phi.values[c].scale(n as i128, 1));
                    }
                }
                acc.scale(1, h)
            })
            .collect();
        Ok(ClassFunction::new(&self.parent_space, values))
    }
}

pub fn induce(parent: &ClassData, fusion: &Fusion, phi: &ClassFunction) -> Result<ClassFunction, ClassFnError> {
    Induction::new(parent, fusion).induce(phi)
}

/// Multiplicities `[φ, χᵢ]` of every irreducible; the reconstruction
/// `Σ mᵢ χᵢ = φ` is checked.
pub fn decompose(phi: &ClassFunction, table: &CharacterTable) -> Result<Vec<i64>, ClassFnError> {
    let mut mults = Vec::with_capacity(table.len());
    for (i, chi) in table.irreducibles().iter().enumerate() {
        let m = inner_product(phi, chi)?;
        let m = m.as_integer().map_err(|_| ClassFnError::NonIntegralMultiplicity {
            index: i,
            value: m.to_string(),
        })?;
        mults.push(m);
    }
    let mut rebuilt = ClassFunction::zero(phi.space());
    for (m, chi) in mults.iter().zip(table.irreducibles()) {
        if *m != 0 {
            rebuilt = rebuilt.add(&chi.scale(*m as i128, 1))?;
        }
    }
    if &rebuilt != phi {
        // φ has a component outside the span of the table: not a character
        let bad = mults.iter().position(|_| true).unwrap_or(0);
        return Err(ClassFnError::NonIntegralMultiplicity {
            index: bad,
            value: "reconstruction differs from input".into(),
        });
    }
    Ok(mults)
}

/// Unweighted sum of the entries of row `i`.
pub fn row_sum(table: &CharacterTable, i: usize) -> Cyclotomic {
    table.irreducibles()[i]
        .values()
        .iter()
        .fold(Cyclotomic::zero(1), |acc, v| acc.add(v))
}

/// One `(degree, multiplicity)` pair per irreducible, in table order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub index: usize,
    pub degree: u64,
    pub multiplicity: i64,
}

pub fn decomposition_report(table: &CharacterTable, mults: &[i64]) -> Vec<DecompositionEntry> {
    table
        .degrees()
        .iter()
        .zip(mults)
        .enumerate()
        .map(|(index, (&degree, &multiplicity))| DecompositionEntry {
            index,
            degree,
            multiplicity,
        })
        .collect()
}

pub fn decomposition_csv(entries: &[DecompositionEntry]) -> String {
    let mut s = String::from("index,degree,multiplicity\n");
    for e in entries {
        s.push_str(&format!("{},{},{}\n", e.index, e.degree, e.multiplicity));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{conjugacy_classes, fuse};
    use crate::dixon::compute_table;
    use crate::matgrp::{build_group, center, subgroup_generated, Family, FiniteGroup, Subgroup, DEFAULT_ORDER_CAP};

    fn setup(f: Family, n: usize, q: u64) -> (Arc<FiniteGroup>, ClassData, CharacterTable) {
        let g = Arc::new(build_group(f, n, q, DEFAULT_ORDER_CAP).unwrap());
        let cd = conjugacy_classes(&g);
        let t = compute_table(&cd).unwrap();
        (g, cd, t)
    }

    /// Left transversal of `H` in `G`.
    fn transversal(g: &FiniteGroup, h: &Subgroup) -> Vec<u32> {
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() as u32 {
            if covered[x as usize] {
                continue;
            }
            reps.push(x);
            for &m in h.members() {
                covered[g.mul(x, m) as usize] = true;
            }
        }
        reps
    }

    #[test]
    fn inner_product_basics() {
        let (_, cd, t) = setup(Family::SL, 2, 5);
        let one = ClassFunction::trivial(cd.space());
        assert_eq!(inner_product(&one, &one).unwrap().as_integer().unwrap(), 1);
        for (i, a) in t.irreducibles().iter().enumerate() {
            for (j, b) in t.irreducibles().iter().enumerate() {
                let ip = inner_product(a, b).unwrap().as_integer().unwrap();
                assert_eq!(ip, (i == j) as i64);
            }
        }
        let pi = conjugation_character(&cd);
        assert_eq!(inner_product(&pi, &one).unwrap().as_integer().unwrap(), cd.len() as i64);
        assert_eq!(pi.degree(), Some(120));
    }

    #[test]
    fn group_mismatch() {
        let (_, cd5, _) = setup(Family::SL, 2, 5);
        let (_, cd7, _) = setup(Family::SL, 2, 7);
        let a = ClassFunction::trivial(cd5.space());
        let b = ClassFunction::trivial(cd7.space());
        assert!(matches!(inner_product(&a, &b), Err(ClassFnError::GroupMismatch(..))));
        assert!(matches!(tensor(&a, &b), Err(ClassFnError::GroupMismatch(..))));
    }

    #[test]
    fn trivial_group_conjugation_character() {
        let g = Arc::new(build_group(Family::SL, 1, 7, DEFAULT_ORDER_CAP).unwrap());
        let cd = conjugacy_classes(&g);
        let pi = conjugation_character(&cd);
        assert_eq!(pi, ClassFunction::trivial(cd.space()));
    }

    #[test]
    fn induction_and_restriction() {
        let (g, cd, t) = setup(Family::SL, 2, 7);
        let f = g.field().unwrap().clone();
        let a = f.generator();
        let d = crate::matgrp::Matrix::diagonal(&f, &[a, f.inv(a).unwrap()]);
        let torus = subgroup_generated(&g, &[g.index_of(&d).unwrap()]);
        let fusion = fuse(&cd, &torus, "T");
        let one_t = ClassFunction::trivial(fusion.sub_classes().space());
        let ind = induce(&cd, &fusion, &one_t).unwrap();
        assert_eq!(ind.degree(), Some(336 / 6));
        assert_eq!(restrict(&ClassFunction::trivial(cd.space()), &fusion), one_t);

        // Frobenius reciprocity against every irreducible
        let ttab = compute_table(fusion.sub_classes()).unwrap();
        let induction = Induction::new(&cd, &fusion);
        for mu in ttab.irreducibles() {
            let ind_mu = induction.induce(mu).unwrap();
            for chi in t.irreducibles() {
                assert_eq!(
                    inner_product(&ind_mu, chi).unwrap(),
                    inner_product(mu, &restrict(chi, &fusion)).unwrap()
                );
            }
        }

        // transversal oracle: Ind φ(g) = Σ_{t ∈ T} φ°(t g t⁻¹)
        let sub_cd = fusion.sub_classes();
        let mut pos = vec![u32::MAX; g.order()];
        for (i, &m) in torus.members().iter().enumerate() {
            pos[m as usize] = i as u32;
        }
        let reps = transversal(&g, &torus);
        for mu in ttab.irreducibles() {
            let ind_mu = induction.induce(mu).unwrap();
            for (k, &rep) in cd.reps().iter().enumerate() {
                let mut acc = Cyclotomic::zero(1);
                for &x in &reps {
                    let y = g.mul(g.mul(g.inv(x), rep), x);
                    if pos[y as usize] != u32::MAX {
                        acc = acc.add(mu.value(sub_cd.class_of(pos[y as usize]) as usize));
                    }
                }
                assert_eq!(&acc, ind_mu.value(k));
            }
        }

        // inducing from the whole group is the identity
        let whole = Subgroup::whole(&g);
        let fw = fuse(&cd, &whole, "G");
        for chi in t.irreducibles() {
            let moved = ClassFunction::new(fw.sub_classes().space(), chi.values().to_vec());
            assert_eq!(induce(&cd, &fw, &moved).unwrap(), *chi);
        }
    }

    #[test]
    fn restriction_to_trivial_subgroup() {
        let (g, cd, t) = setup(Family::SL, 2, 5);
        let triv = subgroup_generated(&g, &[0]);
        let fusion = fuse(&cd, &triv, "1");
        for chi in t.irreducibles() {
            let r = restrict(chi, &fusion);
            assert_eq!(r.values().len(), 1);
            assert_eq!(r.degree(), chi.degree());
        }
        let z = center(&g);
        let fz = fuse(&cd, &z, "Z");
        assert_eq!(restrict(&ClassFunction::trivial(cd.space()), &fz).values().len(), 2);
    }

    #[test]
    fn tensor_examples() {
        let (_, cd, t) = setup(Family::SL, 2, 7);
        let one = ClassFunction::trivial(cd.space());
        for chi in t.irreducibles() {
            assert_eq!(&tensor(&one, chi).unwrap(), chi);
            let sq = tensor(chi, &chi.conj()).unwrap();
            assert_eq!(inner_product(&sq, &one).unwrap().as_integer().unwrap(), 1);
        }
        let st = &t.irreducibles()[t.steinberg(7).unwrap()];
        assert_eq!(tensor(st, st).unwrap().degree(), Some(49));
        let (a, b, c) = (&t.irreducibles()[1], &t.irreducibles()[4], &t.irreducibles()[7]);
        assert_eq!(tensor(a, b).unwrap(), tensor(b, a).unwrap());
        assert_eq!(
            tensor(&tensor(a, b).unwrap(), c).unwrap(),
            tensor(a, &tensor(b, c).unwrap()).unwrap()
        );
    }

    #[test]
    fn decompose_regular_and_non_characters() {
        let (_, cd, t) = setup(Family::SL, 2, 5);
        let reg = ClassFunction::regular(cd.space());
        let m = decompose(&reg, &t).unwrap();
        assert_eq!(m, t.degrees().iter().map(|&d| d as i64).collect::<Vec<_>>());
        let half = ClassFunction::trivial(cd.space()).scale(1, 2);
        assert!(matches!(
            decompose(&half, &t),
            Err(ClassFnError::NonIntegralMultiplicity { .. })
        ));
        let report = decomposition_report(&t, &m);
        let csv = decomposition_csv(&report);
        assert!(csv.starts_with("index,degree,multiplicity\n0,1,1\n"));
    }

    #[test]
    fn solomon_and_conjugation_identity() {
        let (_, cd, t) = setup(Family::SL, 2, 7);
        let pi = conjugation_character(&cd);
        let mut sum = ClassFunction::zero(cd.space());
        for (i, chi) in t.irreducibles().iter().enumerate() {
            assert_eq!(row_sum(&t, i), inner_product(&pi, chi).unwrap());
            sum = sum.add(&tensor(chi, &chi.conj()).unwrap()).unwrap();
        }
        assert_eq!(sum, pi);
        assert_eq!(row_sum(&t, 0).as_integer().unwrap(), 11);
    }
}
