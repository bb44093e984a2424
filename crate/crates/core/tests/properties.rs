use std::sync::{Arc, OnceLock};

use charlab::classes::{conjugacy_classes, fuse};
use charlab::classfn::{decompose, inner_product, restrict, tensor, ClassFunction, Induction};
use charlab::dixon::compute_table;
use charlab::gf::{FieldSpec, Fq};
use charlab::matgrp::{build_group, subgroup_generated, ClassicalSpec, Family, Matrix, DEFAULT_ORDER_CAP};
use charlab::rcf::{are_similar, invariant_factors};
use charlab::theorems::GroupContext;
use charlab::weil::{t1_kernel_table, weil_multiplicity_brute, weil_multiplicity_formula, WeilParams};
use proptest::prelude::*;

fn groups() -> &'static [GroupContext] {
    static CELL: OnceLock<Vec<GroupContext>> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            (Family::SL, 2, 5),
            (Family::GL, 2, 3),
            (Family::SU, 3, 3),
            (Family::SL, 2, 7),
        ]
        .into_iter()
        .map(|(family, n, q)| {
            GroupContext::classical(
                ClassicalSpec {
                    family,
                    n,
                    q,
                    quotient: false,
                },
                DEFAULT_ORDER_CAP,
            )
            .unwrap()
        })
        .collect()
    })
}

fn group_index() -> impl Strategy<Value = usize> {
    0..4usize
}

fn random_matrix(f: &Arc<FieldSpec>, n: usize, codes: &[u32]) -> Matrix {
    let q = f.q();
    let rows: Vec<Vec<Fq>> = (0..n)
        .map(|i| (0..n).map(|j| Fq(codes[i * n + j] % q)).collect())
        .collect();
    Matrix::from_rows(f, &rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_roundtrip(g in group_index(), mults in prop::collection::vec(0i64..4, 32)) {
        let ctx = &groups()[g];
        let mut phi = ClassFunction::zero(ctx.classes.space());
        for (chi, &m) in ctx.table.irreducibles().iter().zip(&mults) {
            phi = phi.add(&chi.scale(m as i128, 1)).unwrap();
        }
        let got = decompose(&phi, &ctx.table).unwrap();
        prop_assert_eq!(&got[..], &mults[..ctx.table.len()]);
    }

    #[test]
    fn tensor_products_are_characters(g in group_index(), a in 0usize..64, b in 0usize..64) {
        let ctx = &groups()[g];
        let r = ctx.table.len();
        let (x, y) = (&ctx.table.irreducibles()[a % r], &ctx.table.irreducibles()[b % r]);
        let m = decompose(&tensor(x, y).unwrap(), &ctx.table).unwrap();
        prop_assert!(m.iter().all(|&v| v >= 0));
        let deg: i64 = m.iter().zip(ctx.table.degrees()).map(|(&v, &d)| v * d as i64).sum();
        prop_assert_eq!(deg, x.degree().unwrap() * y.degree().unwrap());
    }

    #[test]
    fn galois_conjugates_stay_in_the_table(g in group_index(), i in 0usize..64, a in 1i64..200) {
        let ctx = &groups()[g];
        let e = ctx.table.exponent() as i64;
        prop_assume!(num_gcd(a, e) == 1);
        let chi = &ctx.table.irreducibles()[i % ctx.table.len()];
        let values = chi.values().iter().map(|v| v.galois(a).unwrap()).collect();
        let conj = ClassFunction::new(ctx.classes.space(), values);
        prop_assert!(ctx.table.irreducibles().contains(&conj));
    }

    #[test]
    fn cyclic_subgroup_reciprocity(g in group_index(), x in 0u32..10_000, j in 0usize..64, i in 0usize..64) {
        let ctx = &groups()[g];
        let x = x % ctx.group.order() as u32;
        let sub = subgroup_generated(&ctx.group, &[x]);
        let f = fuse(&ctx.classes, &sub, "C");
        let stab = compute_table(f.sub_classes()).unwrap();
        let mu = &stab.irreducibles()[j % stab.len()];
        let chi = &ctx.table.irreducibles()[i % ctx.table.len()];
        let lhs = inner_product(&Induction::new(&ctx.classes, &f).induce(mu).unwrap(), chi).unwrap();
        let rhs = inner_product(mu, &restrict(chi, &f)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn similarity_is_conjugation_invariant(
        q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]),
        n in 1usize..5,
        a in prop::collection::vec(0u32..81, 16),
        p in prop::collection::vec(0u32..81, 16),
    ) {
        let f = FieldSpec::of_size(q).unwrap();
        let m = random_matrix(&f, n, &a);
        let conj = random_matrix(&f, n, &p);
        prop_assume!(conj.det() != Fq::ZERO);
        let c = conj.mul(&m).mul(&conj.inverse().unwrap());
        prop_assert!(are_similar(&m, &c));
        let inv = invariant_factors(&m);
        let total: usize = inv.iter().map(|p| p.degree().unwrap()).sum();
        prop_assert_eq!(total, n);
    }

    #[test]
    fn weil_formula_matches_brute_force(
        (n, q) in prop::sample::select(vec![(3usize, 3u64), (3, 4), (3, 7), (3, 9), (5, 2), (5, 3), (7, 2)]),
        s in 0u64..1000, t in 0u64..1000, k in 0u64..10,
    ) {
        let p = WeilParams::new(n, q).unwrap();
        prop_assert!(p.coprime);
        let (s, t, k) = (s % p.order_a(), t % p.order_b(), k % (q + 1));
        let table = t1_kernel_table(&p, None);
        prop_assert_eq!(weil_multiplicity_formula(k, s, t, &p), weil_multiplicity_brute(k, s, t, &p, &table).unwrap());
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn class_count_of_quotients() {
    // |Z(SL(2,q))| = gcd(2, q - 1) and PSL(2,q) has (q + 5)/2 classes for odd q
    for q in [5u64, 7, 9, 11] {
        let g = Arc::new(build_group(Family::SL, 2, q, DEFAULT_ORDER_CAP).unwrap());
        let quotient = Arc::new(charlab::matgrp::quotient_by_center(&g));
        assert_eq!(quotient.order() as u64 * 2, g.order() as u64);
        assert_eq!(conjugacy_classes(&quotient).len() as u64, (q + 5) / 2);
    }
}
