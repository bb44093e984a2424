//! Named checks over computed character tables, each producing a
//! [`VerificationReport`] with witness data.
//!
//! A few statements have a known exceptional case: for `SU_n(q)` with
//! `n ≥ 3` coprime to `2(q+1)` the unique irreducible of degree
//! `(qⁿ - q)/(q + 1)` is missing from both `π_G` and `St²`. Checks that
//! confirm exactly that exception report [`Status::PassWithException`].

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::classes::{conjugacy_classes, fuse, ClassData, Fusion};
use crate::classfn::{
    conjugation_character, decompose, decomposition_report, inner_product, restrict, row_sum, tensor, ClassFnError,
    ClassFunction, Induction,
};
use crate::cyclo::Cyclotomic;
use crate::dixon::{compute_table, CharacterTable, DixonError};
use crate::gf::{gcd, FieldSpec};
use crate::matgrp::{
    build_group, center, centralizer, quotient_by_center, singer_element, subgroup_generated, ClassicalSpec, Family,
    FiniteGroup, GroupError, Matrix, Subgroup,
};
use crate::rcf::{singer_domain, singer_verdict, RcfError, SingerMode};
use crate::weil::{
    build_tori, generic_weil, irreducible_weil, lambda_char, t1_kernel_table, weil_lattice, TorusElement, WeilError,
    WeilParams,
};

#[derive(Debug, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Dixon(#[from] DixonError),
    #[error(transparent)]
    ClassFn(#[from] ClassFnError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Rcf(#[from] RcfError),
    #[error("{0}")]
    NotApplicable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    PassWithException,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PassWithException => "pass-with-exception",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// Outcome of one check. Runtime is kept out of the serialized form so
/// that reports are reproducible byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub group: String,
    pub status: Status,
    pub summary: String,
    pub witnesses: Value,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::PassWithException)
    }

    fn new(
        check: &str,
        group: &str,
        status: Status,
        summary: impl Into<String>,
        witnesses: Value,
        start: Instant,
    ) -> Self {
        VerificationReport {
            check: check.to_string(),
            group: group.to_string(),
            status,
            summary: summary.into(),
            witnesses,
            runtime: start.elapsed(),
        }
    }

    pub fn skipped(check: &str, group: &str, reason: impl Into<String>) -> Self {
        VerificationReport::new(check, group, Status::Skipped, reason, Value::Null, Instant::now())
    }

    fn errored(check: &str, group: &str, err: &TheoremError) -> Self {
        match err {
            TheoremError::NotApplicable(why) => VerificationReport::skipped(check, group, why.clone()),
            _ => VerificationReport::new(
                check,
                group,
                Status::Fail,
                format!("error: {err}"),
                json!({ "error": err.to_string() }),
                Instant::now(),
            ),
        }
    }
}

pub const CHECKS: &[&str] = &[
    "table_invariants",
    "conjugation_cover",
    "row_sums",
    "steinberg_square",
    "constituent_criterion",
    "no_other_square",
    "cck_criterion",
    "dl_identity",
    "frobenius_reciprocity",
    "weil_sum",
    "weil_formula",
    "weil_table_match",
    "weil_torus_restriction",
    "torus_induction",
];

/// A group with its classes and character table.
pub struct GroupContext {
    pub group: Arc<FiniteGroup>,
    pub classes: ClassData,
    pub table: CharacterTable,
}

impl GroupContext {
    pub fn new(group: Arc<FiniteGroup>) -> Result<GroupContext, DixonError> {
        let classes = conjugacy_classes(&group);
        let table = compute_table(&classes)?;
        Ok(GroupContext { group, classes, table })
    }

    pub fn from_parts(group: Arc<FiniteGroup>, classes: ClassData, table: CharacterTable) -> GroupContext {
        GroupContext { group, classes, table }
    }

    /// Builds the group of a classical spec, taking the central quotient
    /// when the spec asks for it.
    pub fn classical(spec: ClassicalSpec, cap: u64) -> Result<GroupContext, TheoremError> {
        let g = Arc::new(build_group(spec.family, spec.n, spec.q, cap)?);
        let g = if spec.quotient {
            Arc::new(quotient_by_center(&g))
        } else {
            g
        };
        Ok(GroupContext::new(g)?)
    }

    pub fn label(&self) -> &str {
        self.group.label()
    }

    pub fn spec(&self) -> Option<ClassicalSpec> {
        self.group.classical()
    }

    pub fn characteristic(&self) -> Option<u64> {
        self.spec().and_then(|s| crate::gf::prime_power(s.q)).map(|(p, _)| p)
    }

    pub fn steinberg(&self) -> Result<usize, TheoremError> {
        let p = self
            .characteristic()
            .ok_or_else(|| TheoremError::NotApplicable("no defining characteristic".into()))?;
        Ok(self.table.steinberg(p)?)
    }

    fn chi(&self, i: usize) -> &ClassFunction {
        &self.table.irreducibles()[i]
    }
}

/// Degree `(qⁿ - q)/(q + 1)` of the character missing in the exceptional
/// unitary case, when the spec is that case.
pub fn exceptional_degree(spec: Option<ClassicalSpec>) -> Option<u64> {
    let s = spec?;
    let coprime = gcd(s.n as u64, 2 * (s.q + 1)) == 1;
    (s.family == Family::SU && s.n >= 3 && coprime).then(|| (s.q.pow(s.n as u32) - s.q) / (s.q + 1))
}

fn char_witness(ctx: &GroupContext, i: usize) -> Value {
    json!({
        "index": i,
        "degree": ctx.table.degrees()[i],
        "values": ctx.chi(i).values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}

fn timed<F>(check: &str, ctx_label: &str, f: F) -> VerificationReport
where
    F: FnOnce(Instant) -> Result<VerificationReport, TheoremError>,
{
    let start = Instant::now();
    match f(start) {
        Ok(r) => r,
        Err(e) => VerificationReport::errored(check, ctx_label, &e),
    }
}

/// Compares the set of irreducibles missing from a character with what the
/// theorem expects.
fn coverage_verdict(ctx: &GroupContext, missing: &[usize], what: &str) -> (Status, String) {
    match exceptional_degree(ctx.spec()) {
        Some(d) => match ctx.table.unique_of_degree(d) {
            Ok(i) if missing == [i] => (
                Status::PassWithException,
                format!("{what} misses exactly the degree-{d} irreducible"),
            ),
            Ok(_) => (
                Status::Fail,
                format!("{what} misses {missing:?}, expected only the degree-{d} irreducible"),
            ),
            Err(e) => (Status::Fail, e.to_string()),
        },
        None if missing.is_empty() => (Status::Pass, format!("{what} contains every irreducible")),
        None => (Status::Fail, format!("{what} misses irreducibles {missing:?}")),
    }
}

fn zeros(m: &[i64]) -> Vec<usize> {
    (0..m.len()).filter(|&i| m[i] == 0).collect()
}

/// Every irreducible is a constituent of the conjugation character.
pub fn check_conjugation_cover(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "conjugation_cover";
    timed(NAME, ctx.label(), |start| {
        let pi = conjugation_character(&ctx.classes);
        let m = decompose(&pi, &ctx.table)?;
        let missing = zeros(&m);
        let (status, summary) = coverage_verdict(ctx, &missing, "π_G");
        let witnesses = json!({
            "multiplicities": decomposition_report(&ctx.table, &m),
            "missing": missing.iter().map(|&i| char_witness(ctx, i)).collect::<Vec<_>>(),
        });
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            summary,
            witnesses,
            start,
        ))
    })
}

/// Row sums are positive integers and agree with `[π_G, χ]`.
pub fn check_row_sums(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "row_sums";
    timed(NAME, ctx.label(), |start| {
        let pi = conjugation_character(&ctx.classes);
        let exceptional = exceptional_degree(ctx.spec())
            .map(|d| ctx.table.unique_of_degree(d))
            .transpose()?;
        let mut sums = Vec::new();
        let mut bad = Vec::new();
        let mut zero_rows = Vec::new();
        for i in 0..ctx.table.len() {
            let rs = row_sum(&ctx.table, i);
            let solomon = inner_product(&pi, ctx.chi(i))?;
            let value = rs.as_integer().ok();
            sums.push(json!({ "index": i, "degree": ctx.table.degrees()[i], "row_sum": rs.to_string() }));
            match value {
                Some(v) if rs == solomon && v > 0 => {}
                Some(0) if rs == solomon && Some(i) == exceptional => zero_rows.push(i),
                _ => bad.push(char_witness(ctx, i)),
            }
        }
        let (status, summary) = if !bad.is_empty() {
            (
                Status::Fail,
                format!("{} rows are not positive integers equal to [π_G, χ]", bad.len()),
            )
        } else if let Some(i) = exceptional {
            if zero_rows == [i] {
                (
                    Status::PassWithException,
                    format!("row {i} sums to 0, all others positive"),
                )
            } else {
                (Status::Fail, format!("expected row {i} to sum to 0"))
            }
        } else {
            (
                Status::Pass,
                "every row sum is a positive integer equal to [π_G, χ]".into(),
            )
        };
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            summary,
            json!({ "row_sums": sums, "offenders": bad }),
            start,
        ))
    })
}

/// Every irreducible is a constituent of `St ⊗ St`.
pub fn check_steinberg_square(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "steinberg_square";
    timed(NAME, ctx.label(), |start| {
        let st = ctx.steinberg()?;
        let sq = tensor(ctx.chi(st), ctx.chi(st))?;
        let m = decompose(&sq, &ctx.table)?;
        let missing = zeros(&m);
        let (status, summary) = coverage_verdict(ctx, &missing, "St²");
        let witnesses = json!({
            "steinberg": { "index": st, "degree": ctx.table.degrees()[st] },
            "multiplicities": decomposition_report(&ctx.table, &m),
            "missing": missing.iter().map(|&i| char_witness(ctx, i)).collect::<Vec<_>>(),
        });
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            summary,
            witnesses,
            start,
        ))
    })
}

/// `[π_G, χ] > 0` exactly when `χ|_{C_G(g)}` contains `1` for some `g`,
/// the right side computed from centralizers directly.
pub fn check_constituent_criterion(ctx: &GroupContext, only: Option<usize>) -> VerificationReport {
    const NAME: &str = "constituent_criterion";
    timed(NAME, ctx.label(), |start| {
        let pi = conjugation_character(&ctx.classes);
        let r = ctx.classes.len();
        // counts[k][c] = |C_G(g_k) ∩ class c|
        let counts: Vec<Vec<i128>> = ctx
            .classes
            .reps()
            .iter()
            .map(|&rep| {
                let mut row = vec![0i128; r];
                for &x in centralizer(&ctx.group, rep).members() {
                    row[ctx.classes.class_of(x) as usize] += 1;
                }
                row
            })
            .collect();
        let indices: Vec<usize> = match only {
            Some(i) => vec![i],
            None => (0..ctx.table.len()).collect(),
        };
        let mut rows = Vec::new();
        let mut disagree = Vec::new();
        for i in indices {
            let chi = ctx.chi(i);
            let lhs = inner_product(&pi, chi)?.as_integer().map_err(ClassFnError::from)? > 0;
            let witness_class = (0..r).find(|&k| {
                let mut acc = Cyclotomic::zero(1);
                for (c, &n) in counts[k].iter().enumerate() {
                    if n > 0 {
                        acc = acc.add(&chi.value(c).scale(n, 1));
                    }
                }
                !acc.is_zero()
            });
            let rhs = witness_class.is_some();
            rows.push(json!({
                "index": i,
                "degree": ctx.table.degrees()[i],
                "in_pi": lhs,
                "centralizer_class": witness_class,
            }));
            if lhs != rhs {
                disagree.push(char_witness(ctx, i));
            }
        }
        let status = if disagree.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        let summary = if disagree.is_empty() {
            format!("both sides agree on {} irreducibles", rows.len())
        } else {
            format!("sides disagree on {} irreducibles", disagree.len())
        };
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            summary,
            json!({ "rows": rows, "disagreements": disagree }),
            start,
        ))
    })
}

/// No `τ² ` or `ττ̄` contains both `1_G` and the exceptional character.
pub fn check_no_other_square(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "no_other_square";
    timed(NAME, ctx.label(), |start| {
        let d = exceptional_degree(ctx.spec())
            .ok_or_else(|| TheoremError::NotApplicable("only for the exceptional unitary case".into()))?;
        let phi = ctx.table.unique_of_degree(d)?;
        let one = ClassFunction::trivial(ctx.classes.space());
        let mut offenders = Vec::new();
        for (i, tau) in ctx.table.irreducibles().iter().enumerate() {
            for (kind, rho) in [("square", tensor(tau, tau)?), ("norm", tensor(tau, &tau.conj())?)] {
                let has_one = !inner_product(&rho, &one)?.is_zero();
                let has_phi = !inner_product(&rho, ctx.chi(phi))?.is_zero();
                if has_one && has_phi {
                    offenders.push(json!({ "tau": char_witness(ctx, i), "product": kind }));
                }
            }
        }
        let status = if offenders.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            format!(
                "{} products contain both 1 and the degree-{d} character",
                offenders.len()
            ),
            json!({ "phi_min": phi, "offenders": offenders }),
            start,
        ))
    })
}

/// Split and nonsplit tori of `SL_2(q)`: `diag(ω, ω⁻¹)` and the
/// determinant-one part `⟨s^{q-1}⟩` of a Singer cycle.
pub fn sl2_tori(ctx: &GroupContext) -> Result<Vec<(String, Subgroup)>, TheoremError> {
    let spec = ctx
        .spec()
        .filter(|s| s.family == Family::SL && s.n == 2 && !s.quotient)
        .ok_or_else(|| TheoremError::NotApplicable("SL(2,q) tori need the group SL(2,q)".into()))?;
    let g = &ctx.group;
    let f = g.field().expect("matrix group").clone();
    let w = f.generator();
    let split = Matrix::diagonal(&f, &[w, f.inv(w).expect("nonzero")]);
    let nonsplit = singer_element(2, &f).pow(spec.q - 1);
    let idx = |m: &Matrix| g.index_of(m).ok_or(GroupError::NotAMember);
    let ts = subgroup_generated(g, &[idx(&split)?]);
    let tn = subgroup_generated(g, &[idx(&nonsplit)?]);
    Ok(vec![(format!("T{}", ts.order()), ts), (format!("T{}", tn.order()), tn)])
}

/// The element-order profile of a subgroup is coprime to `p`.
fn is_semisimple(g: &FiniteGroup, sub: &Subgroup, p: u64) -> bool {
    sub.members().iter().all(|&x| !g.element_order(x).is_multiple_of(p))
}

fn is_abelian_subgroup(g: &FiniteGroup, sub: &Subgroup) -> bool {
    let gens: Vec<u32> = sub.members().iter().copied().take(64).collect();
    sub.order() <= 64 && gens.iter().all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
        || sub
            .members()
            .iter()
            .all(|&a| sub.members().iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

/// Maximal tori of `SU_3(q)`: the torus `T` of order `(q-1)(q+1)`, and
/// abelian semisimple centralizers of orders `(q+1)²` and `q² - q + 1`,
/// each the centralizer of the first class representative that has one.
pub fn su3_tori(ctx: &GroupContext) -> Result<Vec<(String, Subgroup)>, TheoremError> {
    let spec = ctx
        .spec()
        .filter(|s| s.family == Family::SU && s.n == 3 && !s.quotient)
        .ok_or_else(|| TheoremError::NotApplicable("SU(3,q) tori need the group SU(3,q)".into()))?;
    let q = spec.q;
    let p = ctx.characteristic().expect("classical");
    let params = WeilParams::new(3, q)?;
    let t = build_tori(&params, &ctx.group)?.t;
    let mut out = vec![(format!("T{}", t.order()), t)];
    for want in [(q + 1) * (q + 1), q * q - q + 1] {
        let found = ctx.classes.reps().iter().find_map(|&rep| {
            if ctx.group.element_order(rep).is_multiple_of(p) {
                return None;
            }
            let c = centralizer(&ctx.group, rep);
            (c.order() as u64 == want && is_semisimple(&ctx.group, &c, p) && is_abelian_subgroup(&ctx.group, &c))
                .then_some(c)
        });
        let c = found.ok_or_else(|| TheoremError::NotApplicable(format!("no abelian centralizer of order {want}")))?;
        out.push((format!("T{want}"), c));
    }
    Ok(out)
}

/// The explicit torus list for groups that have one.
pub fn maximal_tori(ctx: &GroupContext) -> Result<Vec<(String, Subgroup)>, TheoremError> {
    match ctx.spec() {
        Some(s) if s.family == Family::SL && s.n == 2 && !s.quotient => sl2_tori(ctx),
        Some(s) if s.family == Family::SU && s.n == 3 && !s.quotient => su3_tori(ctx),
        _ => Err(TheoremError::NotApplicable(
            "no torus construction for this group".into(),
        )),
    }
}

/// `χ ∈ St²` exactly when `χ|_T` contains `1_T` for some listed torus.
pub fn check_cck_criterion(ctx: &GroupContext, tori: &[(String, Subgroup)]) -> VerificationReport {
    const NAME: &str = "cck_criterion";
    timed(NAME, ctx.label(), |start| {
        let st = ctx.steinberg()?;
        let sq = tensor(ctx.chi(st), ctx.chi(st))?;
        let in_square = decompose(&sq, &ctx.table)?;
        let fusions: Vec<(String, Fusion)> = tori
            .iter()
            .map(|(name, t)| (name.clone(), fuse(&ctx.classes, t, name)))
            .collect();
        let mut rows = Vec::new();
        let mut disagree = Vec::new();
        for (i, chi) in ctx.table.irreducibles().iter().enumerate() {
            let mut hit = Vec::new();
            for (name, f) in &fusions {
                let res = restrict(chi, f);
                let one = ClassFunction::trivial(f.sub_classes().space());
                if !inner_product(&res, &one)?.is_zero() {
                    hit.push(name.clone());
                }
            }
            let lhs = in_square[i] > 0;
            rows.push(json!({
                "index": i,
                "degree": ctx.table.degrees()[i],
                "in_steinberg_square": lhs,
                "tori_with_trivial": hit,
            }));
            if lhs != !hit.is_empty() {
                disagree.push(char_witness(ctx, i));
            }
        }
        let status = if disagree.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            format!("{} of {} irreducibles disagree", disagree.len(), rows.len()),
            json!({
                "tori": tori.iter().map(|(n, t)| json!({ "name": n, "order": t.order() })).collect::<Vec<_>>(),
                "rows": rows,
                "disagreements": disagree,
            }),
            start,
        ))
    })
}

/// `St ⊗ St = ½ Ind_{T_split}(1) + ½ Ind_{T_nonsplit}(1)` on `SL_2(q)`.
pub fn check_dl_identity(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "dl_identity";
    timed(NAME, ctx.label(), |start| {
        let tori = sl2_tori(ctx)?;
        let q = ctx.spec().expect("checked by sl2_tori").q as i64;
        let st = ctx.steinberg()?;
        let lhs = tensor(ctx.chi(st), ctx.chi(st))?;
        let mut rhs = ClassFunction::zero(ctx.classes.space());
        let mut degrees = Vec::new();
        for (name, t) in &tori {
            let f = fuse(&ctx.classes, t, name);
            let ind = Induction::new(&ctx.classes, &f).induce(&ClassFunction::trivial(f.sub_classes().space()))?;
            degrees.push(json!({ "torus": name, "order": t.order(), "induced_degree": ind.degree() }));
            rhs = rhs.add(&ind.scale(1, 2))?;
        }
        let degree_ok = 2 * q * q == q * (q + 1) + q * (q - 1);
        let differing: Vec<usize> = (0..lhs.values().len())
            .filter(|&k| lhs.value(k) != rhs.value(k))
            .collect();
        let ok = degree_ok && differing.is_empty();
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            if ok { Status::Pass } else { Status::Fail },
            if ok {
                format!("St² = ½Ind(1_T{}) + ½Ind(1_T{}) exactly", q - 1, q + 1)
            } else {
                format!("class functions differ at classes {differing:?}")
            },
            json!({
                "degree_identity": format!("{} = ½·{} + ½·{}", q * q, q * (q + 1), q * (q - 1)),
                "tori": degrees,
                "differing_classes": differing.iter().map(|&k| json!({
                    "class": k,
                    "lhs": lhs.value(k).to_string(),
                    "rhs": rhs.value(k).to_string(),
                })).collect::<Vec<_>>(),
            }),
            start,
        ))
    })
}

/// `[Ind μ, χ]_G = [μ, χ|_T]_T` for every torus character and irreducible.
pub fn check_frobenius_reciprocity(ctx: &GroupContext, tori: &[(String, Subgroup)]) -> VerificationReport {
    const NAME: &str = "frobenius_reciprocity";
    timed(NAME, ctx.label(), |start| {
        let mut pairs = 0;
        let mut bad = Vec::new();
        for (name, t) in tori {
            let f = fuse(&ctx.classes, t, name);
            let ttab = compute_table(f.sub_classes())?;
            let ind = Induction::new(&ctx.classes, &f);
            for (j, mu) in ttab.irreducibles().iter().enumerate() {
                let im = ind.induce(mu)?;
                for (i, chi) in ctx.table.irreducibles().iter().enumerate() {
                    pairs += 1;
                    if inner_product(&im, chi)? != inner_product(mu, &restrict(chi, &f))? {
                        bad.push(json!({ "torus": name, "mu": j, "chi": i }));
                    }
                }
            }
        }
        let status = if bad.is_empty() { Status::Pass } else { Status::Fail };
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            format!("{} of {pairs} pairs violate reciprocity", bad.len()),
            json!({ "pairs": pairs, "violations": bad }),
            start,
        ))
    })
}

/// Orthogonality, column norms, `Σd² = |G|`, the Solomon identity and
/// `π_G = Σ χχ̄`.
pub fn check_table_invariants(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "table_invariants";
    timed(NAME, ctx.label(), |start| {
        let mut problems = Vec::new();
        if let Err(e) = ctx.table.verify() {
            problems.push(e.to_string());
        }
        let pi = conjugation_character(&ctx.classes);
        let mut sum = ClassFunction::zero(ctx.classes.space());
        for (i, chi) in ctx.table.irreducibles().iter().enumerate() {
            sum = sum.add(&tensor(chi, &chi.conj())?)?;
            if row_sum(&ctx.table, i) != inner_product(&pi, chi)? {
                problems.push(format!("row sum {i} differs from [π_G, χ]"));
            }
        }
        if sum != pi {
            problems.push("π_G differs from Σ χχ̄".into());
        }
        let linear = ctx.table.degrees().iter().filter(|&&d| d == 1).count();
        let status = if problems.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            if problems.is_empty() {
                format!("{} irreducibles, all invariants hold", ctx.table.len())
            } else {
                problems.join("; ")
            },
            json!({
                "order": ctx.group.order(),
                "classes": ctx.classes.len(),
                "degrees": ctx.table.degrees(),
                "linear_characters": linear,
                "lifting_prime": ctx.table.lifting_prime(),
                "problems": problems,
            }),
            start,
        ))
    })
}

fn weil_params(ctx: &GroupContext) -> Result<WeilParams, TheoremError> {
    let s = ctx
        .spec()
        .filter(|s| s.family == Family::SU && s.n == 3 && !s.quotient)
        .ok_or_else(|| TheoremError::NotApplicable("Weil checks run on SU(3,q)".into()))?;
    let p = WeilParams::new(s.n, s.q)?;
    if !p.coprime {
        return Err(WeilError::HypothesisViolated {
            n: p.n,
            q: p.q,
            g: gcd(p.n as u64, 2 * (p.q + 1)),
        }
        .into());
    }
    Ok(p)
}

/// `Σ_k ω^k = ω` on the torus `T₁` and on random elements of `GU_3(q)`.
pub fn check_weil_sum(ctx: &GroupContext, samples: usize, seed: u64) -> VerificationReport {
    const NAME: &str = "weil_sum";
    timed(NAME, ctx.label(), |start| {
        let p = weil_params(ctx)?;
        let tori = build_tori(&p, &ctx.group)?;
        let gu = build_group(Family::GU, 3, p.q, crate::matgrp::DEFAULT_ORDER_CAP)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut hs: Vec<Matrix> = tori.t1.iter().map(|(_, m)| m.clone()).collect();
        hs.extend((0..samples).map(|_| gu.matrix(rng.gen_range(0..gu.order() as u32)).expect("matrix group")));
        let mut bad = Vec::new();
        for (idx, h) in hs.iter().enumerate() {
            let sum = (0..=p.q).fold(Cyclotomic::zero(1), |acc, k| acc.add(&irreducible_weil(k, &p, h)));
            let generic = generic_weil(p.n, p.q, h);
            if sum != generic {
                bad.push(json!({ "element": idx, "sum": sum.to_string(), "generic": generic.to_string() }));
            }
        }
        let status = if bad.is_empty() { Status::Pass } else { Status::Fail };
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            status,
            format!(
                "{} torus and {samples} random elements, {} mismatches",
                tori.t1.len(),
                bad.len()
            ),
            json!({ "torus_elements": tori.t1.len(), "random_elements": samples, "seed": seed, "mismatches": bad }),
            start,
        ))
    })
}

/// The closed-form multiplicity against the torus sum for every `(k, s, t)`.
/// Matrices realize `T₁` when the group is given; otherwise kernel
/// dimensions come from eigenvalue exponents.
pub fn check_weil_formula(params: &WeilParams, group: Option<&Arc<FiniteGroup>>) -> VerificationReport {
    const NAME: &str = "weil_formula";
    let label = format!("T1 of GU({},{})", params.n, params.q);
    timed(NAME, &label, |start| {
        let tori = group.map(|g| build_tori(params, g)).transpose()?;
        let table = t1_kernel_table(params, tori.as_ref());
        let lattice = weil_lattice(params, &table);
        let bad: Vec<_> = lattice.iter().filter(|e| !e.matches()).collect();
        let status = if bad.is_empty() { Status::Pass } else { Status::Fail };
        Ok(VerificationReport::new(
            NAME,
            &label,
            status,
            format!("{} triples, {} mismatches", lattice.len(), bad.len()),
            json!({
                "triples": lattice.len(),
                "realization": if tori.is_some() { "matrices" } else { "eigenvalue exponents" },
                "mismatches": bad,
            }),
            start,
        ))
    })
}

/// For each `k`, the table index equal to `ω^k` restricted to the group.
pub fn weil_indices(ctx: &GroupContext) -> Result<Vec<Option<usize>>, TheoremError> {
    let p = weil_params(ctx)?;
    Ok((0..=p.q)
        .map(|k| {
            let values = ctx
                .classes
                .reps()
                .iter()
                .map(|&r| irreducible_weil(k, &p, &ctx.group.matrix(r).expect("matrix group")))
                .collect();
            let w = ClassFunction::new(ctx.classes.space(), values);
            ctx.table.irreducibles().iter().position(|chi| *chi == w)
        })
        .collect())
}

/// Each `ω^k|_G` is an irreducible of the computed table.
pub fn check_weil_table_match(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "weil_table_match";
    timed(NAME, ctx.label(), |start| {
        let idx = weil_indices(ctx)?;
        let degrees: Vec<Option<u64>> = idx.iter().map(|i| i.map(|i| ctx.table.degrees()[i])).collect();
        let ok = idx.iter().all(Option::is_some);
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            if ok { Status::Pass } else { Status::Fail },
            if ok {
                let shown = |v: &[Option<u64>]| {
                    v.iter()
                        .map(|d| d.unwrap_or(0).to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                let rows: Vec<Option<u64>> = idx.iter().map(|i| i.map(|i| i as u64)).collect();
                format!(
                    "ω^k matched to table rows [{}] with degrees [{}]",
                    shown(&rows),
                    shown(&degrees)
                )
            } else {
                format!(
                    "ω^k with k in {:?} match no irreducible",
                    (0..idx.len()).filter(|&k| idx[k].is_none()).collect::<Vec<_>>()
                )
            },
            json!({ "indices": idx, "degrees": degrees }),
            start,
        ))
    })
}

fn torus_context(ctx: &GroupContext) -> Result<(WeilParams, Fusion, CharacterTable), TheoremError> {
    let p = weil_params(ctx)?;
    let tori = build_tori(&p, &ctx.group)?;
    let f = fuse(&ctx.classes, &tori.t, "T");
    let ttab = compute_table(f.sub_classes())?;
    Ok((p, f, ttab))
}

/// Weil characters restricted to `T` miss exactly `q - 1` torus characters;
/// other nontrivial irreducibles contain all of them.
pub fn check_weil_torus_restriction(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "weil_torus_restriction";
    timed(NAME, ctx.label(), |start| {
        let (p, f, ttab) = torus_context(ctx)?;
        let weil: Vec<usize> = weil_indices(ctx)?.into_iter().flatten().collect();
        let mut rows = Vec::new();
        let mut bad = Vec::new();
        for (i, chi) in ctx.table.irreducibles().iter().enumerate().skip(1) {
            let res = restrict(chi, &f);
            let mut missing = Vec::new();
            for (j, mu) in ttab.irreducibles().iter().enumerate() {
                if inner_product(&res, mu)?.is_zero() {
                    missing.push(j);
                }
            }
            let is_weil = weil.contains(&i);
            let expected = if is_weil { p.q as usize - 1 } else { 0 };
            if missing.len() != expected {
                bad.push(char_witness(ctx, i));
            }
            rows.push(json!({ "index": i, "degree": ctx.table.degrees()[i], "weil": is_weil, "missing": missing }));
        }
        let ok = bad.is_empty() && weil.len() == p.q as usize + 1;
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            if ok { Status::Pass } else { Status::Fail },
            format!(
                "{} Weil characters each miss {} of {} torus characters; {} offenders",
                weil.len(),
                p.q - 1,
                ttab.len(),
                bad.len()
            ),
            json!({ "torus_order": f.subgroup().order(), "rows": rows, "offenders": bad }),
            start,
        ))
    })
}

/// `Ind_T(1_T)` misses exactly the exceptional character, and exactly
/// `q² - 1` torus characters induce to something missing a nontrivial
/// irreducible, always a single Weil character.
pub fn check_torus_induction(ctx: &GroupContext) -> VerificationReport {
    const NAME: &str = "torus_induction";
    timed(NAME, ctx.label(), |start| {
        let (p, f, ttab) = torus_context(ctx)?;
        let ind = Induction::new(&ctx.classes, &f);
        let d_exc = exceptional_degree(ctx.spec()).expect("checked by weil_params");
        let d_weil = (p.q.pow(p.n as u32) + 1) / (p.q + 1);
        let exc = ctx.table.unique_of_degree(d_exc)?;
        let weil: Vec<usize> = weil_indices(ctx)?.into_iter().flatten().collect();
        let mut rows = Vec::new();
        let mut deficient = Vec::new();
        let mut problems = Vec::new();
        let mut trivial_missing = Vec::new();
        for (j, mu) in ttab.irreducibles().iter().enumerate() {
            let m = decompose(&ind.induce(mu)?, &ctx.table)?;
            let missing = zeros(&m);
            let nontrivial: Vec<usize> = missing.iter().copied().filter(|&i| i != 0).collect();
            if j == 0 {
                trivial_missing = missing.clone();
            }
            if !nontrivial.is_empty() {
                deficient.push(j);
                let one_weil = nontrivial.len() == 1
                    && weil.contains(&nontrivial[0])
                    && [d_exc, d_weil].contains(&ctx.table.degrees()[nontrivial[0]]);
                if !one_weil {
                    problems.push(format!("μ{j} misses {nontrivial:?}"));
                }
            }
            rows.push(json!({ "mu": j, "missing": missing }));
        }
        if trivial_missing != [exc] {
            problems.push(format!("Ind(1_T) misses {trivial_missing:?}, expected [{exc}]"));
        }
        if deficient.len() as u64 != p.q * p.q - 1 {
            problems.push(format!(
                "{} deficient torus characters, expected {}",
                deficient.len(),
                p.q * p.q - 1
            ));
        }
        // the deficient characters are the restrictions of λ_{s,0}
        let t_elems: Vec<TorusElement> = f
            .sub_classes()
            .reps()
            .iter()
            .map(|&x| {
                let m = f.sub_group().matrix(x).expect("matrix group");
                TorusElement::from_matrix(&p, &m).expect("element of the torus")
            })
            .collect();
        let lambda_rest: Vec<usize> = (0..p.order_a())
            .filter_map(|s| {
                let values = t_elems.iter().map(|g| lambda_char(&p, s, 0, g)).collect();
                let mu = ClassFunction::new(f.sub_classes().space(), values);
                ttab.irreducibles().iter().position(|x| *x == mu)
            })
            .collect();
        let mut lr = lambda_rest.clone();
        lr.sort_unstable();
        lr.dedup();
        if lr != deficient {
            problems.push(format!(
                "λ_(s,0) restrictions {lr:?} differ from deficient set {deficient:?}"
            ));
        }
        Ok(VerificationReport::new(
            NAME,
            ctx.label(),
            if problems.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            if problems.is_empty() {
                format!(
                    "Ind(1_T) misses only degree {d_exc}; {} deficient torus characters, each missing one Weil character",
                    deficient.len()
                )
            } else {
                problems.join("; ")
            },
            json!({
                "torus_order": f.subgroup().order(),
                "deficient": deficient,
                "lambda_s0_restrictions": lambda_rest,
                "rows": rows,
                "problems": problems,
            }),
            start,
        ))
    })
}

/// Conjugacy verdict for one Singer cycle against [`SingerMode::predicted`].
pub fn check_singer_conjugacy(n: usize, q: u64, mode: SingerMode) -> VerificationReport {
    const NAME: &str = "singer_conjugacy";
    let label = if mode == SingerMode::Twisted {
        format!("GL({n},{})", q.saturating_mul(q))
    } else {
        format!("GL({n},{q})")
    };
    timed(NAME, &label, |start| {
        let v = singer_verdict(n, q, mode)?;
        Ok(VerificationReport::new(
            NAME,
            &label,
            if v.matches() { Status::Pass } else { Status::Fail },
            format!(
                "{} mode: conjugate = {}, predicted {}",
                mode.name(),
                v.conjugate,
                v.lemma_predicts
            ),
            serde_json::to_value(&v).expect("serializable"),
            start,
        ))
    })
}

/// Every mode over every `(n, q)` with `qⁿ ≤ bound`.
pub fn check_singer_sweep(bound: u64) -> VerificationReport {
    use rayon::prelude::*;
    const NAME: &str = "singer_conjugacy";
    let label = format!("GL(n,q), q^n <= {bound}");
    timed(NAME, &label, |start| {
        let domain = singer_domain(bound);
        let verdicts: Vec<_> = domain
            .par_iter()
            .flat_map(|&(n, q)| SingerMode::ALL.par_iter().map(move |&m| singer_verdict(n, q, m)))
            .collect::<Result<_, _>>()?;
        let mismatches: Vec<_> = verdicts.iter().filter(|v| !v.matches()).collect();
        let conjugate: Vec<_> = verdicts.iter().filter(|v| v.conjugate).collect();
        Ok(VerificationReport::new(
            NAME,
            &label,
            if mismatches.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            format!(
                "{} verdicts over {} (n,q) pairs, {} mismatches",
                verdicts.len(),
                domain.len(),
                mismatches.len()
            ),
            json!({ "pairs": domain.len(), "conjugate_cases": conjugate, "mismatches": mismatches }),
            start,
        ))
    })
}

/// Runs every applicable check. `full` is the group as built and `simple`
/// its central quotient (or the same group when the center is trivial);
/// coverage statements run on `simple`, torus statements on `full`.
pub fn verify_all(
    full: &GroupContext,
    simple: &GroupContext,
    filter: &dyn Fn(&str) -> bool,
) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let tori = maximal_tori(full);
    for &name in CHECKS {
        if !filter(name) {
            continue;
        }
        let report = match name {
            "table_invariants" => check_table_invariants(simple),
            "conjugation_cover" => check_conjugation_cover(simple),
            "row_sums" => check_row_sums(simple),
            "steinberg_square" => check_steinberg_square(simple),
            "constituent_criterion" => check_constituent_criterion(simple, None),
            "no_other_square" => check_no_other_square(simple),
            "cck_criterion" => match &tori {
                Ok(t) => check_cck_criterion(full, t),
                Err(e) => VerificationReport::errored(name, full.label(), e),
            },
            "dl_identity" => check_dl_identity(full),
            "frobenius_reciprocity" => match &tori {
                Ok(t) => check_frobenius_reciprocity(full, t),
                Err(e) => VerificationReport::errored(name, full.label(), e),
            },
            "weil_sum" => check_weil_sum(full, 50, 0),
            "weil_formula" => match weil_params(full) {
                Ok(p) => check_weil_formula(&p, Some(&full.group)),
                Err(e) => VerificationReport::errored(name, full.label(), &e),
            },
            "weil_table_match" => check_weil_table_match(full),
            "weil_torus_restriction" => check_weil_torus_restriction(full),
            "torus_induction" => check_torus_induction(full),
            _ => unreachable!("every listed check is dispatched"),
        };
        out.push(report);
    }
    out
}

/// The central quotient of a context's group, or `None` when the center
/// is trivial.
pub fn simple_quotient(ctx: &GroupContext) -> Result<Option<GroupContext>, DixonError> {
    if center(&ctx.group).order() == 1 {
        return Ok(None);
    }
    GroupContext::new(Arc::new(quotient_by_center(&ctx.group))).map(Some)
}

/// Field of `q²` elements for callers evaluating Weil characters on
/// matrices they build themselves.
pub fn unitary_field(q: u64) -> Result<Arc<FieldSpec>, TheoremError> {
    Ok(FieldSpec::of_size(q * q).map_err(GroupError::from)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgrp::DEFAULT_ORDER_CAP;

    fn ctx(family: Family, n: usize, q: u64, quotient: bool) -> GroupContext {
        GroupContext::classical(ClassicalSpec { family, n, q, quotient }, DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn psl27_cover_and_square() {
        let c = ctx(Family::SL, 2, 7, true);
        assert_eq!(c.table.len(), 6);
        assert_eq!(check_conjugation_cover(&c).status, Status::Pass);
        assert_eq!(check_steinberg_square(&c).status, Status::Pass);
        assert_eq!(check_row_sums(&c).status, Status::Pass);
        assert_eq!(check_constituent_criterion(&c, None).status, Status::Pass);
        assert_eq!(check_no_other_square(&c).status, Status::Skipped);
    }

    #[test]
    fn sl2_tori_and_dl() {
        for q in [5, 7, 8] {
            let c = ctx(Family::SL, 2, q, false);
            let t = sl2_tori(&c).unwrap();
            assert_eq!(t[0].1.order() as u64, q - 1);
            assert_eq!(t[1].1.order() as u64, q + 1);
            let r = check_dl_identity(&c);
            assert_eq!(r.status, Status::Pass, "{}", r.summary);
            assert_eq!(check_cck_criterion(&c, &t).status, Status::Pass);
            assert_eq!(check_frobenius_reciprocity(&c, &t).status, Status::Pass);
        }
    }

    #[test]
    fn exceptional_degree_cases() {
        let s = |family, n, q| {
            Some(ClassicalSpec {
                family,
                n,
                q,
                quotient: false,
            })
        };
        assert_eq!(exceptional_degree(s(Family::SU, 3, 3)), Some(6));
        assert_eq!(exceptional_degree(s(Family::SU, 3, 5)), None);
        assert_eq!(exceptional_degree(s(Family::SU, 3, 2)), None);
        assert_eq!(exceptional_degree(s(Family::SL, 3, 3)), None);
    }

    #[test]
    fn singer_reports() {
        let r = check_singer_conjugacy(2, 4, SingerMode::Inverse);
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.witnesses["conjugate"], json!(false));
        let r = check_singer_conjugacy(1, 5, SingerMode::SquareInverse);
        assert_eq!(r.status, Status::Fail);
        let sweep = check_singer_sweep(64);
        assert_eq!(sweep.witnesses["mismatches"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn weil_formula_without_group() {
        let p = WeilParams::new(5, 2).unwrap();
        assert_eq!(check_weil_formula(&p, None).status, Status::Pass);
    }

    #[test]
    fn report_serialization_has_no_runtime() {
        let c = ctx(Family::SL, 2, 5, true);
        let r = check_row_sums(&c);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"status\":\"pass\"") && !s.contains("runtime"));
    }
}
