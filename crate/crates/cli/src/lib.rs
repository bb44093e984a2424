//! Command-line front end for `charlab`: group-spec parsing, cached
//! character tables, decomposition queries and the verification suite.
//!
//! Exit codes: `0` on success, `1` when a check fails or a computation
//! errors, `2` on a usage error.

pub mod cache;
pub mod output;
pub mod spec;

use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use charlab::classes::fuse;
use charlab::classfn::{conjugation_character, decompose, decomposition_csv, decomposition_report, tensor, Induction};
use charlab::dixon::compute_table;
use charlab::matgrp::DEFAULT_ORDER_CAP;
use charlab::rcf::{singer_domain, singer_verdict, SingerMode, SingerVerdict};
use charlab::theorems::{maximal_tori, verify_all, GroupContext, Status, CHECKS};
use charlab::weil::{build_tori, lattice_csv, t1_kernel_table, weil_lattice, WeilParams};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cache::{load_context, Cache};
use crate::spec::GroupSpecAst;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(
    name = "charlab",
    version,
    about = "Exact character tables of small groups of Lie type"
)]
pub struct Cli {
    /// Output format; `weil` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Table cache directory.
    #[arg(long, global = true, env = "CHARLAB_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Compute everything afresh and write nothing to disk.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Refuse to enumerate groups larger than this.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    pub order_cap: u64,
    /// Worker threads for the parallel parts.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Character table of a group.
    Table { spec: GroupSpecAst },
    /// Decomposition of the conjugation character.
    ConjChar { spec: GroupSpecAst },
    /// Decomposition of the square of the Steinberg character.
    SteinbergSquare { spec: GroupSpecAst },
    /// Decompositions of characters induced from the maximal tori.
    TorusInduce {
        spec: GroupSpecAst,
        /// Index of the torus character to induce.
        #[arg(long, default_value_t = 0)]
        mu: usize,
    },
    /// Weil multiplicity lattice on the torus T1 of GU(n,q).
    Weil {
        n: usize,
        q: u64,
        /// Realize T1 by matrices (n = 3 only) instead of eigenvalue exponents.
        #[arg(long)]
        matrices: bool,
    },
    /// Conjugacy of a Singer cycle with its inverse.
    Singer {
        #[arg(required_unless_present = "sweep")]
        n: Option<usize>,
        #[arg(required_unless_present = "sweep")]
        q: Option<u64>,
        #[arg(long, value_parser = parse_mode, default_value = "inverse")]
        mode: SingerMode,
        /// Check every mode for all (n, q) with q^n at most this bound.
        #[arg(long, conflicts_with_all = ["n", "q"])]
        sweep: Option<u64>,
    },
    /// Run every applicable check and report.
    VerifyAll {
        spec: GroupSpecAst,
        /// Only run the named checks (repeatable).
        #[arg(long)]
        check: Vec<String>,
    },
}

fn parse_mode(s: &str) -> Result<SingerMode, String> {
    SingerMode::from_name(s).ok_or_else(|| format!("unknown mode '{s}', expected inverse, square-inverse or twisted"))
}

fn default_cache_dir() -> PathBuf {
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir)
        .join("charlab")
}

/// Parses `args` (without the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once("charlab".into()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        // a second build in the same process fails; the first pool stays
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let code = if e.downcast_ref::<UsageError>().is_some() { 2 } else { 1 };
            let _ = writeln!(err, "error: {e:#}");
            code
        }
    }
}

/// Marks an error as the caller's fault, which maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Weil { .. } => Format::Csv,
        _ => Format::Json,
    });
    let cache = (!cli.no_cache).then(|| Cache::new(cli.cache_dir.clone().unwrap_or_else(default_cache_dir)));
    let load = |spec: &GroupSpecAst| -> Result<GroupContext> {
        let (ctx, _) = load_context(spec, cli.order_cap, cache.as_ref())?;
        Ok(ctx)
    };
    match &cli.command {
        Command::Table { spec } => {
            let ctx = load(spec)?;
            match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&output::table_json(&ctx))?)?,
                Format::Csv => write!(out, "{}", output::table_csv(&ctx))?,
                Format::Pretty => write!(out, "{}", output::table_pretty(&ctx))?,
            }
            Ok(0)
        }
        Command::ConjChar { spec } => {
            let ctx = load(spec)?;
            let m = decompose(&conjugation_character(&ctx.classes), &ctx.table)?;
            emit_decomposition(out, format, &ctx, "conjugation character", &m)?;
            Ok(0)
        }
        Command::SteinbergSquare { spec } => {
            let ctx = load(spec)?;
            let st = ctx.steinberg().map_err(|e| usage(e.to_string()))?;
            let chi = &ctx.table.irreducibles()[st];
            let m = decompose(&tensor(chi, chi)?, &ctx.table)?;
            emit_decomposition(out, format, &ctx, "Steinberg square", &m)?;
            Ok(0)
        }
        Command::TorusInduce { spec, mu } => {
            let ctx = load(spec)?;
            let tori = maximal_tori(&ctx).map_err(|e| usage(e.to_string()))?;
            let mut rows = Vec::new();
            for (name, t) in &tori {
                let f = fuse(&ctx.classes, t, name);
                let ttab = compute_table(f.sub_classes())?;
                let phi = ttab
                    .irreducibles()
                    .get(*mu)
                    .ok_or_else(|| usage(format!("{name} has only {} characters", ttab.len())))?;
                let m = decompose(&Induction::new(&ctx.classes, &f).induce(phi)?, &ctx.table)?;
                rows.push((name.clone(), t.order(), m));
            }
            match format {
                Format::Json => {
                    let tori: Vec<_> = rows
                        .iter()
                        .map(|(name, order, m)| {
                            json!({
                                "torus": name,
                                "order": order,
                                "mu": mu,
                                "multiplicities": decomposition_report(&ctx.table, m),
                                "missing": missing(m),
                            })
                        })
                        .collect();
                    writeln!(out, "{}", json!({ "group": ctx.label(), "tori": tori }))?;
                }
                Format::Csv => {
                    writeln!(out, "torus,index,degree,multiplicity")?;
                    for (name, _, m) in &rows {
                        for e in decomposition_report(&ctx.table, m) {
                            writeln!(out, "{name},{},{},{}", e.index, e.degree, e.multiplicity)?;
                        }
                    }
                }
                Format::Pretty => {
                    for (name, order, m) in &rows {
                        let what = format!("Ind from {name} (order {order}) of μ{mu}");
                        write!(
                            out,
                            "{}",
                            output::decomposition_pretty(ctx.label(), &what, &decomposition_report(&ctx.table, m))
                        )?;
                    }
                }
            }
            Ok(0)
        }
        Command::Weil { n, q, matrices } => {
            let p = WeilParams::new(*n, *q).map_err(|e| usage(e.to_string()))?;
            let tori = if *matrices {
                if *n != 3 {
                    return Err(usage("--matrices needs n = 3"));
                }
                let g = std::sync::Arc::new(charlab::matgrp::build_group(
                    charlab::matgrp::Family::SU,
                    3,
                    *q,
                    cli.order_cap,
                )?);
                Some(build_tori(&p, &g)?)
            } else {
                None
            };
            let lattice = weil_lattice(&p, &t1_kernel_table(&p, tori.as_ref()));
            let ok = lattice.iter().all(|e| e.matches());
            match format {
                Format::Csv => write!(out, "{}", lattice_csv(&p, &lattice))?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({ "n": n, "q": q, "triples": lattice.len(), "all_match": ok, "entries": lattice })
                )?,
                Format::Pretty => {
                    writeln!(out, "Weil lattice for GU({n},{q}): {} triples", lattice.len())?;
                    for e in &lattice {
                        writeln!(
                            out,
                            "  s={:<3} t={:<3} k={:<3} formula={} brute={}{}",
                            e.s,
                            e.t,
                            e.k,
                            e.formula,
                            e.brute,
                            if e.matches() { "" } else { "  MISMATCH" }
                        )?;
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Singer { n, q, mode, sweep } => {
            let verdicts: Vec<SingerVerdict> = match (sweep, n, q) {
                (Some(b), _, _) => {
                    use rayon::prelude::*;
                    singer_domain(*b)
                        .into_par_iter()
                        .flat_map(|(n, q)| SingerMode::ALL.into_par_iter().map(move |m| singer_verdict(n, q, m)))
                        .collect::<Result<_, _>>()?
                }
                (None, Some(n), Some(q)) => {
                    if charlab::gf::prime_power(*q).is_none() {
                        return Err(usage(format!("{q} is not a prime power")));
                    }
                    vec![singer_verdict(*n, *q, *mode).map_err(|e| usage(e.to_string()))?]
                }
                _ => return Err(usage("singer needs N and Q, or --sweep")),
            };
            emit_verdicts(out, format, &verdicts)?;
            let bad = verdicts.iter().filter(|v| !v.matches()).count();
            if sweep.is_some() {
                writeln!(err, "{} verdicts, {bad} mismatches", verdicts.len())?;
            }
            Ok(if bad == 0 { 0 } else { 1 })
        }
        Command::VerifyAll { spec, check } => {
            if let Some(bad) = check.iter().find(|c| !CHECKS.contains(&c.as_str())) {
                return Err(usage(format!("unknown check '{bad}', known: {}", CHECKS.join(", "))));
            }
            let full = load(spec)?;
            let simple = if spec.quotient {
                None
            } else {
                let z = charlab::matgrp::center(&full.group).order();
                if z > 1 {
                    Some(load(&GroupSpecAst {
                        quotient: true,
                        ..*spec
                    })?)
                } else {
                    None
                }
            };
            let filter = |name: &str| check.is_empty() || check.iter().any(|c| c == name);
            let reports = verify_all(&full, simple.as_ref().unwrap_or(&full), &filter);
            match format {
                Format::Json => {
                    for r in &reports {
                        writeln!(out, "{}", serde_json::to_string(r)?)?;
                    }
                    write!(err, "{}", output::report_table(&reports))?;
                }
                Format::Csv => write!(out, "{}", output::report_csv(&reports))?,
                Format::Pretty => write!(out, "{}", output::report_table(&reports))?,
            }
            Ok(if reports.iter().any(|r| r.status == Status::Fail) {
                1
            } else {
                0
            })
        }
    }
}

fn missing(m: &[i64]) -> Vec<usize> {
    (0..m.len()).filter(|&i| m[i] == 0).collect()
}

fn emit_decomposition(out: &mut dyn Write, format: Format, ctx: &GroupContext, what: &str, m: &[i64]) -> Result<()> {
    let entries = decomposition_report(&ctx.table, m);
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({ "group": ctx.label(), "character": what, "multiplicities": entries, "missing": missing(m) })
        )?,
        Format::Csv => write!(out, "{}", decomposition_csv(&entries))?,
        Format::Pretty => write!(out, "{}", output::decomposition_pretty(ctx.label(), what, &entries))?,
    }
    Ok(())
}

fn verdict_json(v: &SingerVerdict) -> serde_json::Value {
    json!({
        "n": v.n,
        "q": v.q,
        "mode": v.mode.name(),
        "conjugate": v.conjugate,
        "lemma_predicts": v.lemma_predicts,
        "match": v.matches(),
    })
}

fn emit_verdicts(out: &mut dyn Write, format: Format, verdicts: &[SingerVerdict]) -> Result<()> {
    match format {
        Format::Json => {
            for v in verdicts {
                writeln!(out, "{}", verdict_json(v))?;
            }
        }
        Format::Csv => {
            writeln!(out, "n,q,mode,conjugate,lemma_predicts,match")?;
            for v in verdicts {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    v.n,
                    v.q,
                    v.mode.name(),
                    v.conjugate,
                    v.lemma_predicts,
                    v.matches()
                )?;
            }
        }
        Format::Pretty => {
            for v in verdicts {
                writeln!(
                    out,
                    "n={} q={} {}: conjugate={} predicted={}{}",
                    v.n,
                    v.q,
                    v.mode.name(),
                    v.conjugate,
                    v.lemma_predicts,
                    if v.matches() { "" } else { "  MISMATCH" }
                )?;
            }
        }
    }
    Ok(())
}
