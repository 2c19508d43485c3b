//! The `hurwitz-tr` command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 internal invariant failure,
//! 4 verification mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hodge::{
    framed_bracket, hodge_bracket, hurwitz_csv, hurwitz_from_recursion, mumford_consistency, HodgeBracket,
    HurwitzValue,
};
use crate::oracle::{branch_count, connected_hurwitz_in, HurwitzSeries};
use crate::partition::Partition;
use crate::rational::Rational;
use crate::ratfunc::RationalFunction;
use crate::recursion::{w_unstable_annulus, w_unstable_disk, CurveSpec, Engine, TruncPolicy, WAmplitude};
use crate::store::{Store, CACHE_ENV};
use crate::verify::{invariant_checks, limit_checks, oracle_sweep, reference_checks, sweep_cases, Check, Report, SweepBounds};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hurwitz-tr", version, about = "Exact topological recursion for Hurwitz numbers and framed vertex amplitudes")]
#[command(disable_help_flag = true)]
pub struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Starting truncation for every amplitude (default 6g+2h+6)
    #[arg(long, global = true)]
    trunc: Option<i64>,
    /// Amplitude cache directory
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the amplitude cache
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Worker threads for the residue step
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Print help
    #[arg(long, global = true, action = clap::ArgAction::Help)]
    help: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CurveArg {
    Lambert,
    Framed,
}

#[derive(Args, Debug, Clone)]
struct CurveOpts {
    #[arg(long, value_enum, default_value_t = CurveArg::Lambert)]
    curve: CurveArg,
    /// Specialize the framing to a rational p/q
    #[arg(long = "f", value_name = "P/Q")]
    framing: Option<Rational>,
    /// Keep f symbolic (the default for the framed curve)
    #[arg(long, conflicts_with = "framing")]
    symbolic_f: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the ζ-tensor of W_g with h points
    W {
        #[command(flatten)]
        curve: CurveOpts,
        /// Genus
        #[arg(short = 'g')]
        g: u32,
        /// Number of points
        #[arg(short = 'h')]
        h: u32,
        /// Allow (0,1) and (0,2), printed as x-series
        #[arg(long)]
        unstable: bool,
        /// Number of x-orders printed for unstable amplitudes
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Connected Hurwitz numbers
    Hurwitz {
        /// Genus
        #[arg(short = 'g', required_unless_present = "table")]
        g: Option<u32>,
        /// Ramification profile, comma separated
        #[arg(long, required_unless_present = "table")]
        mu: Option<Partition>,
        #[arg(long, value_enum, default_value_t = Source::Recursion)]
        source: Source,
        /// Compute from both sources and compare (exit 4 on disagreement)
        #[arg(long)]
        both: bool,
        /// A table over bounds such as g<=2,|mu|<=5,l<=3
        #[arg(long, conflicts_with_all = ["g", "mu"])]
        table: Option<SweepBounds>,
    },
    /// Hodge brackets read from the Lambert or framed tensors
    Bracket {
        /// Genus
        #[arg(short = 'g')]
        g: u32,
        /// ψ-indices n_1,…,n_h
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Kind::Single)]
        kind: Kind,
        #[arg(long = "f", value_name = "P/Q")]
        framing: Option<Rational>,
    },
    /// Run the reference checks, invariants and oracle sweep
    Verify {
        /// Oracle sweep bounds
        #[arg(long, default_value = "g<=1,|mu|<=4,l<=3")]
        sweep: SweepBounds,
        /// Also run the framing-limit suite
        #[arg(long)]
        limits: bool,
        /// Skip the reference-value checks
        #[arg(long)]
        no_reference: bool,
    },
    /// Infinite-framing limit and Mumford degree checks
    Limits {
        /// (g,h) pairs such as 1:1,0:3
        #[arg(long, value_delimiter = ',', default_value = "0:3,0:4,1:1,1:2,2:1")]
        pairs: Vec<Pair>,
    },
    /// Manage the amplitude cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    Recursion,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Single,
    Triple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pair(u32, u32);

impl std::str::FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected g:h, got {s:?}"))?;
        let g = a.trim().parse().map_err(|_| format!("bad genus in {s:?}"))?;
        let h = b.trim().parse().map_err(|_| format!("bad point count in {s:?}"))?;
        Ok(Pair(g, h))
    }
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// List cached amplitudes
    List,
    /// Delete every cached amplitude
    Clear,
    /// Compute every stable (g,h) with 2g-2+h <= budget
    Prewarm {
        #[arg(long)]
        budget: u32,
        #[command(flatten)]
        curve: CurveOpts,
    },
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_engine_bug() => EXIT_INTERNAL,
        Error::InsufficientTruncation { .. } | Error::CacheMismatch(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

struct Ctx<'a> {
    global: &'a Global,
}

impl Ctx<'_> {
    fn store(&self) -> Result<Option<Store>> {
        if self.global.no_cache {
            return Ok(None);
        }
        let dir = self.global.cache_dir.clone().unwrap_or_else(Store::default_dir);
        Store::open(dir).map(Some)
    }

    fn engine<F: Field>(&self, spec: CurveSpec<F>) -> Result<Engine<F>> {
        let mut e = Engine::new(spec)?.with_jobs(self.global.jobs)?;
        if let Some(t) = self.global.trunc {
            e = e.with_trunc_policy(TruncPolicy::Fixed(t))?;
        }
        if let Some(s) = self.store()? {
            e = e.with_store(s);
        }
        Ok(e)
    }

    fn lambert(&self) -> Result<Engine<Rational>> {
        self.engine(CurveSpec::Lambert)
    }

    fn symbolic(&self) -> Result<Engine<RationalFunction>> {
        self.engine(CurveSpec::Framed(RationalFunction::var()))
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let ctx = Ctx { global: &cli.global };
    let fmt = cli.global.format;
    match &cli.command {
        Command::W { curve, g, h, unstable, order } => cmd_w(&ctx, out, curve, *g, *h, *unstable, *order),
        Command::Hurwitz { g, mu, source, both, table } => {
            cmd_hurwitz(&ctx, out, *g, mu.as_ref(), *source, *both, *table)
        }
        Command::Bracket { g, indices, kind, framing } => cmd_bracket(&ctx, out, *g, indices, *kind, framing.as_ref()),
        Command::Verify { sweep, limits, no_reference } => cmd_verify(&ctx, out, *sweep, *limits, *no_reference),
        Command::Limits { pairs } => cmd_limits(&ctx, out, pairs),
        Command::Cache { action } => cmd_cache(&ctx, out, action, fmt),
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v)?;
    writeln!(out, "{s}")?;
    Ok(())
}

enum Curve {
    Lambert,
    Symbolic,
    Specialized(Rational),
}

fn resolve_curve(c: &CurveOpts) -> Result<Curve> {
    match (c.curve, &c.framing) {
        (CurveArg::Lambert, Some(_)) => Err(usage("--f only applies to --curve framed")),
        (CurveArg::Lambert, None) if c.symbolic_f => Err(usage("--symbolic-f only applies to --curve framed")),
        (CurveArg::Lambert, None) => Ok(Curve::Lambert),
        (CurveArg::Framed, None) => Ok(Curve::Symbolic),
        (CurveArg::Framed, Some(f)) => Ok(Curve::Specialized(f.clone())),
    }
}

fn is_stable(g: u32, h: u32) -> bool {
    h >= 1 && 2 * g + h > 2
}

fn cmd_w(ctx: &Ctx, out: &mut dyn Write, c: &CurveOpts, g: u32, h: u32, unstable: bool, order: usize) -> Result<i32> {
    let curve = resolve_curve(c)?;
    if !is_stable(g, h) {
        if !unstable || g != 0 || !(h == 1 || h == 2) {
            return Err(Error::Unstable { g, h });
        }
        return match curve {
            Curve::Lambert => print_unstable(out, ctx, ctx.lambert()?, h, order),
            Curve::Symbolic => print_unstable(out, ctx, ctx.symbolic()?, h, order),
            Curve::Specialized(f) => print_unstable(out, ctx, ctx.engine(CurveSpec::Framed(f))?, h, order),
        };
    }
    match curve {
        Curve::Lambert => print_amplitude(out, ctx, &mut ctx.lambert()?, g, h),
        Curve::Symbolic => print_amplitude(out, ctx, &mut ctx.symbolic()?, g, h),
        Curve::Specialized(f) => print_amplitude(out, ctx, &mut ctx.engine(CurveSpec::Framed(f))?, g, h),
    }
}

fn print_amplitude<F: Field>(out: &mut dyn Write, ctx: &Ctx, e: &mut Engine<F>, g: u32, h: u32) -> Result<i32> {
    let amp: std::sync::Arc<WAmplitude<F>> = e.w_amplitude(g, h)?;
    match ctx.global.format {
        Format::Json => emit_json(out, &*amp)?,
        Format::Csv => {
            writeln!(out, "n,value")?;
            for (n, v) in amp.entries() {
                let idx: Vec<String> = n.iter().map(u32::to_string).collect();
                writeln!(out, "{},{}", idx.join("-"), v)?;
            }
        }
        Format::Pretty => writeln!(out, "W_{g}({h} pt) [{}] = {}", amp.curve(), amp.pretty())?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SeriesTerm<F: Field> {
    n: Vec<usize>,
    value: F,
}

#[derive(Serialize)]
struct UnstableRecord<F: Field> {
    curve: String,
    g: u32,
    h: u32,
    basis: &'static str,
    order: usize,
    coeffs: Vec<SeriesTerm<F>>,
}

fn print_unstable<F: Field>(out: &mut dyn Write, ctx: &Ctx, e: Engine<F>, h: u32, order: usize) -> Result<i32> {
    let mut coeffs = Vec::new();
    if h == 1 {
        let s = w_unstable_disk(e.curve(), order as i64)?;
        for k in 0..order {
            let v = s.coeff(k as i64)?;
            if !v.is_zero() {
                coeffs.push(SeriesTerm { n: vec![k], value: v });
            }
        }
    } else {
        let s = w_unstable_annulus(e.curve(), order)?;
        for d in 0..order {
            for i in 0..=d {
                let v = s.coeff(i, d - i)?;
                if !v.is_zero() {
                    coeffs.push(SeriesTerm { n: vec![i, d - i], value: v });
                }
            }
        }
    }
    let rec = UnstableRecord { curve: e.slug(), g: 0, h, basis: "x", order, coeffs };
    match ctx.global.format {
        Format::Json => emit_json(out, &rec)?,
        Format::Csv => {
            writeln!(out, "n,value")?;
            for t in &rec.coeffs {
                let idx: Vec<String> = t.n.iter().map(usize::to_string).collect();
                writeln!(out, "{},{}", idx.join("-"), t.value)?;
            }
        }
        Format::Pretty => {
            let terms: Vec<String> = rec
                .coeffs
                .iter()
                .map(|t| {
                    let mono: Vec<String> = t.n.iter().enumerate().map(|(i, p)| format!("x{}^{p}", i + 1)).collect();
                    format!("({})*{}", t.value, mono.join("*"))
                })
                .collect();
            writeln!(out, "W_0({h} pt) [{}] / dx = {} + O(order {order})", rec.curve, terms.join(" + "))?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Comparison {
    g: u32,
    mu: Partition,
    b: u32,
    recursion: Rational,
    oracle: Rational,
    #[serde(rename = "match")]
    matches: bool,
}

fn oracle_value(g: u32, mu: &Partition) -> Result<HurwitzValue> {
    let b = branch_count(g, mu)?;
    let free = HurwitzSeries::partition_function(b, mu.size()).log()?;
    Ok(HurwitzValue { g, mu: mu.clone(), b, value: connected_hurwitz_in(&free, g, mu)? })
}

fn cmd_hurwitz(
    ctx: &Ctx,
    out: &mut dyn Write,
    g: Option<u32>,
    mu: Option<&Partition>,
    source: Source,
    both: bool,
    table: Option<SweepBounds>,
) -> Result<i32> {
    let cases: Vec<(u32, Partition)> = match table {
        Some(b) => sweep_cases(b, &[]),
        None => {
            let (g, mu) = (g.unwrap(), mu.unwrap().clone());
            if mu.is_empty() {
                return Err(usage("--mu needs at least one part"));
            }
            vec![(g, mu)]
        }
    };
    if both {
        let mut engine = ctx.lambert()?;
        let rows = oracle_sweep(&mut engine, &cases)?;
        let all = rows.iter().all(|r| r.ok);
        let cmp: Vec<Comparison> = rows
            .into_iter()
            .map(|r| Comparison {
                g: r.g,
                b: branch_count(r.g, &r.mu).unwrap(),
                mu: r.mu,
                recursion: r.recursion,
                oracle: r.oracle,
                matches: r.ok,
            })
            .collect();
        match ctx.global.format {
            Format::Json if table.is_none() => emit_json(out, &cmp[0])?,
            Format::Json => emit_json(out, &cmp)?,
            Format::Csv => {
                writeln!(out, "g,mu,b,recursion,oracle,match")?;
                for c in &cmp {
                    writeln!(out, "{},{},{},{},{},{}", c.g, c.mu, c.b, c.recursion, c.oracle, c.matches)?;
                }
            }
            Format::Pretty => {
                for c in &cmp {
                    let tag = if c.matches { "match" } else { "MISMATCH" };
                    writeln!(out, "H_{{{},({})}}: recursion {}, oracle {}, {tag}", c.g, c.mu, c.recursion, c.oracle)?;
                }
            }
        }
        return Ok(if all { EXIT_OK } else { EXIT_MISMATCH });
    }
    let values: Vec<HurwitzValue> = match source {
        Source::Recursion => {
            let mut engine = ctx.lambert()?;
            cases.iter().map(|(g, mu)| hurwitz_from_recursion(&mut engine, *g, mu)).collect::<Result<_>>()?
        }
        Source::Oracle => cases.iter().map(|(g, mu)| oracle_value(*g, mu)).collect::<Result<_>>()?,
    };
    match ctx.global.format {
        Format::Json if table.is_none() => emit_json(out, &values[0])?,
        Format::Json => emit_json(out, &values)?,
        Format::Csv => write!(out, "{}", hurwitz_csv(&values))?,
        Format::Pretty => {
            for v in &values {
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn print_bracket<F: Field>(out: &mut dyn Write, fmt: Format, b: &HodgeBracket<F>) -> Result<()> {
    match fmt {
        Format::Json => emit_json(out, b)?,
        Format::Csv => {
            writeln!(out, "g,indices,kind,value")?;
            let idx: Vec<String> = b.indices.iter().map(u32::to_string).collect();
            writeln!(out, "{},{},{:?},{}", b.g, idx.join("-"), b.kind, b.value)?;
        }
        Format::Pretty => {
            let taus: Vec<String> = b.indices.iter().map(|n| format!("tau_{n}")).collect();
            let lam = match b.kind {
                crate::hodge::BracketKind::SingleLambda => "L(1)",
                crate::hodge::BracketKind::TripleLambda => "L(1) L(-f-1) L(f)",
            };
            writeln!(out, "g={} <{} {lam}> = {}", b.g, taus.join(" "), b.value)?;
        }
    }
    Ok(())
}

fn cmd_bracket(ctx: &Ctx, out: &mut dyn Write, g: u32, indices: &[u32], kind: Kind, f: Option<&Rational>) -> Result<i32> {
    let fmt = ctx.global.format;
    match (kind, f) {
        (Kind::Single, Some(_)) => return Err(usage("--f only applies to --kind triple")),
        (Kind::Single, None) => print_bracket(out, fmt, &hodge_bracket(&mut ctx.lambert()?, g, indices)?)?,
        (Kind::Triple, None) => print_bracket(out, fmt, &framed_bracket(&mut ctx.symbolic()?, g, indices)?)?,
        (Kind::Triple, Some(f)) => {
            let mut e = ctx.engine(CurveSpec::Framed(f.clone()))?;
            print_bracket(out, fmt, &framed_bracket(&mut e, g, indices)?)?
        }
    }
    Ok(EXIT_OK)
}

fn print_report(out: &mut dyn Write, fmt: Format, title: &str, r: &Report) -> Result<()> {
    match fmt {
        Format::Json => emit_json(out, &serde_json::json!({ "title": title, "ok": r.ok(), "checks": r.checks }))?,
        Format::Csv => {
            writeln!(out, "section,name,ok,detail")?;
            for c in &r.checks {
                writeln!(out, "{title},{},{},\"{}\"", c.name, c.ok, c.detail.replace('"', "'"))?;
            }
        }
        Format::Pretty => writeln!(out, "== {title} ==\n{r}")?,
    }
    Ok(())
}

fn cmd_verify(ctx: &Ctx, out: &mut dyn Write, sweep: SweepBounds, limits: bool, no_reference: bool) -> Result<i32> {
    let fmt = ctx.global.format;
    let mut lambert = ctx.lambert()?;
    let mut all_ok = true;
    if !no_reference {
        let mut framed = ctx.symbolic()?;
        let mut r = reference_checks(&mut lambert, &mut framed)?;
        r.extend(invariant_checks(&mut lambert, &mut framed)?.checks);
        all_ok &= r.ok();
        print_report(out, fmt, "reference values and invariants", &r)?;
    }
    let rows = oracle_sweep(&mut lambert, &sweep_cases(sweep, &[]))?;
    let mut r = Report::default();
    for row in &rows {
        let detail = if row.ok {
            row.recursion.to_string()
        } else {
            format!("recursion {} vs oracle {}", row.recursion, row.oracle)
        };
        r.push(Check::new(format!("H_{{{},({})}}", row.g, row.mu), row.ok, detail));
    }
    all_ok &= r.ok();
    print_report(out, fmt, &format!("oracle sweep {sweep}"), &r)?;
    if limits {
        let mut framed = ctx.symbolic()?;
        let pairs = [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)];
        let (_, r) = limit_checks(&mut lambert, &mut framed, &pairs)?;
        all_ok &= r.ok();
        print_report(out, fmt, "framing limit", &r)?;
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_limits(ctx: &Ctx, out: &mut dyn Write, pairs: &[Pair]) -> Result<i32> {
    let mut lambert = ctx.lambert()?;
    let mut framed = ctx.symbolic()?;
    let pairs: Vec<(u32, u32)> = pairs.iter().map(|p| (p.0, p.1)).collect();
    for &(g, h) in &pairs {
        if !is_stable(g, h) {
            return Err(Error::Unstable { g, h });
        }
    }
    let (reports, mut r) = limit_checks(&mut lambert, &mut framed, &pairs)?;
    let mut genera: Vec<u32> = pairs.iter().map(|p| p.0).collect();
    genera.sort_unstable();
    genera.dedup();
    for g in genera {
        let m = mumford_consistency(&framed, g)?;
        let deg = m.max_degree.map_or("-".into(), |d| d.to_string());
        r.push(Check::new(format!("Mumford degree bound g={g}"), m.ok, format!("max degree {deg} <= {}", 2 * g)));
    }
    if ctx.global.format == Format::Json {
        emit_json(out, &serde_json::json!({ "ok": r.ok(), "checks": r.checks, "reports": reports }))?;
    } else {
        print_report(out, ctx.global.format, "framing limit", &r)?;
    }
    Ok(if r.ok() { EXIT_OK } else { EXIT_MISMATCH })
}

/// Stable `(g, h)` with `h ≥ 1` and `2g - 2 + h ≤ budget`, by increasing
/// `2g - 2 + h`, then `g`.
pub fn prewarm_pairs(budget: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for chi in 1..=budget {
        for g in 0..=(chi + 1) / 2 {
            let h = chi as i64 + 2 - 2 * g as i64;
            if h >= 1 {
                out.push((g, h as u32));
            }
        }
    }
    out
}

fn cmd_cache(ctx: &Ctx, out: &mut dyn Write, action: &CacheAction, fmt: Format) -> Result<i32> {
    if ctx.global.no_cache {
        return Err(usage("cache commands need a cache directory"));
    }
    let store = ctx.store()?.unwrap();
    match action {
        CacheAction::List => {
            let entries = store.list()?;
            match fmt {
                Format::Json => emit_json(out, &entries)?,
                _ => {
                    writeln!(out, "file,curve,g,h,trunc")?;
                    for e in &entries {
                        writeln!(out, "{},{},{},{},{}", e.file, e.curve, e.g, e.h, e.trunc)?;
                    }
                }
            }
        }
        CacheAction::Clear => {
            let n = store.clear()?;
            writeln!(out, "removed {n} files from {}", store.dir().display())?;
        }
        CacheAction::Prewarm { budget, curve } => {
            let pairs = prewarm_pairs(*budget);
            let names = match resolve_curve(curve)? {
                Curve::Lambert => prewarm(&mut ctx.lambert()?, &pairs)?,
                Curve::Symbolic => prewarm(&mut ctx.symbolic()?, &pairs)?,
                Curve::Specialized(f) => prewarm(&mut ctx.engine(CurveSpec::Framed(f))?, &pairs)?,
            };
            for n in names {
                writeln!(out, "{n}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn prewarm<F: Field>(e: &mut Engine<F>, pairs: &[(u32, u32)]) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for &(g, h) in pairs {
        e.w_amplitude(g, h)?;
        names.push(Store::file_name(&e.slug(), g, h));
    }
    Ok(names)
}

/// Entry point used by the binary.
pub fn main_exit_code() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["hurwitz-tr", "--no-cache"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn prewarm_enumeration() {
        assert_eq!(prewarm_pairs(2), vec![(0, 3), (1, 1), (0, 4), (1, 2)]);
        assert_eq!(prewarm_pairs(5).len(), 14);
        assert!(prewarm_pairs(5).contains(&(3, 1)));
    }

    #[test]
    fn w_lambert_pretty() {
        let (code, out, _) = run_args(&["w", "-g", "1", "-h", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("1/24(-z0+z1)"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["w", "-g", "0", "-h", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["w", "-g", "1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["hurwitz", "-g", "1", "--mu", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["w", "--curve", "lambert", "--f", "2", "-g", "1", "-h", "1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }
}
