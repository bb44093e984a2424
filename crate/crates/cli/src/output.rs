//! Rendering of tables, decompositions and reports.

use std::fmt::Write as _;

use charlab::classfn::DecompositionEntry;
use charlab::cyclo::Cyclotomic;
use charlab::theorems::{GroupContext, VerificationReport};
use serde_json::{json, Value};

/// Shortest readable form: integers and rationals plainly, everything
/// else as a sum of root-of-unity terms.
pub fn symbolic(v: &Cyclotomic) -> String {
    match v.as_rational() {
        Some((n, 1)) => n.to_string(),
        Some((n, d)) => format!("{n}/{d}"),
        None => v.to_string(),
    }
}

pub fn approx(v: &Cyclotomic) -> String {
    let (re, im) = v.to_complex();
    let clean = |x: f64| if x.abs() < 5e-10 { 0.0 } else { x };
    let (re, im) = (clean(re), clean(im));
    if im == 0.0 {
        format!("{re:.4}")
    } else {
        format!("{re:.4}{}{:.4}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

pub fn table_json(ctx: &GroupContext) -> Value {
    json!({
        "group": ctx.label(),
        "classes": ctx.classes.summary(),
        "table": ctx.table.record(),
    })
}

pub fn table_csv(ctx: &GroupContext) -> String {
    let r = ctx.classes.len();
    let mut s = String::from("index,degree");
    for k in 0..r {
        let _ = write!(s, ",c{k}");
    }
    s.push('\n');
    for (i, chi) in ctx.table.irreducibles().iter().enumerate() {
        let _ = write!(s, "{i},{}", ctx.table.degrees()[i]);
        for v in chi.values() {
            let _ = write!(s, ",\"{}\"", symbolic(v));
        }
        s.push('\n');
    }
    s
}

pub fn table_pretty(ctx: &GroupContext) -> String {
    let r = ctx.classes.len();
    let mut rows: Vec<Vec<String>> = Vec::new();
    rows.push(
        std::iter::once("class".to_string())
            .chain((0..r).map(|k| k.to_string()))
            .collect(),
    );
    rows.push(
        std::iter::once("order".to_string())
            .chain(ctx.classes.orders().iter().map(u64::to_string))
            .collect(),
    );
    rows.push(
        std::iter::once("size".to_string())
            .chain(ctx.classes.sizes().iter().map(usize::to_string))
            .collect(),
    );
    let mut irrational = Vec::new();
    for (i, chi) in ctx.table.irreducibles().iter().enumerate() {
        let mut row = vec![format!("χ{i}")];
        for (k, v) in chi.values().iter().enumerate() {
            row.push(symbolic(v));
            if !v.is_rational() {
                irrational.push((i, k, v));
            }
        }
        rows.push(row);
    }
    let widths: Vec<usize> = (0..=r)
        .map(|c| rows.iter().map(|row| row[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut s = format!(
        "{}  order {}  {} classes  degrees {:?}\n\n",
        ctx.label(),
        ctx.group.order(),
        r,
        ctx.table.degrees()
    );
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:>w$}"))
            .collect();
        s.push_str(cells.join("  ").trim_end());
        s.push('\n');
    }
    if !irrational.is_empty() {
        s.push_str("\nirrational values\n");
        for (i, k, v) in irrational {
            let _ = writeln!(s, "  χ{i}(c{k}) = {}  ≈ {}", symbolic(v), approx(v));
        }
    }
    s
}

pub fn decomposition_pretty(label: &str, what: &str, entries: &[DecompositionEntry]) -> String {
    let mut s = format!("{what} on {label}\n");
    let _ = writeln!(s, "{:>6} {:>8} {:>13}", "index", "degree", "multiplicity");
    for e in entries {
        let _ = writeln!(s, "{:>6} {:>8} {:>13}", e.index, e.degree, e.multiplicity);
    }
    let missing: Vec<usize> = entries
        .iter()
        .filter(|e| e.multiplicity == 0)
        .map(|e| e.index)
        .collect();
    let _ = writeln!(s, "missing: {missing:?}");
    s
}

pub fn report_table(reports: &[VerificationReport]) -> String {
    let w_check = reports.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
    let w_group = reports
        .iter()
        .map(|r| r.group.chars().count())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut s = format!("{:w_check$}  {:w_group$}  {:19}  summary\n", "check", "group", "status");
    for r in reports {
        let pad = w_group.saturating_sub(r.group.chars().count());
        let _ = writeln!(
            s,
            "{:w_check$}  {}{}  {:19}  {}",
            r.check,
            r.group,
            " ".repeat(pad),
            r.status.name(),
            r.summary
        );
    }
    let count = |f: fn(&VerificationReport) -> bool| reports.iter().filter(|r| f(r)).count();
    let _ = writeln!(
        s,
        "{} passed, {} failed, {} skipped",
        count(|r| r.passed()),
        count(|r| r.status == charlab::theorems::Status::Fail),
        count(|r| r.status == charlab::theorems::Status::Skipped)
    );
    s
}

pub fn report_csv(reports: &[VerificationReport]) -> String {
    let mut s = String::from("check,group,status,summary\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{},\"{}\",{},\"{}\"",
            r.check,
            r.group,
            r.status.name(),
            r.summary.replace('"', "\"\"")
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_forms() {
        assert_eq!(symbolic(&Cyclotomic::from_int(7, -2)), "-2");
        assert_eq!(symbolic(&Cyclotomic::from_ratio(1, 3, 2)), "3/2");
        let b7 = Cyclotomic::root(7, 1)
            .add(&Cyclotomic::root(7, 2))
            .add(&Cyclotomic::root(7, 4));
        assert!(symbolic(&b7).contains('ζ'));
        assert_eq!(approx(&b7), "-0.5000+1.3229i");
        assert_eq!(approx(&Cyclotomic::from_int(1, 3)), "3.0000");
    }
}
