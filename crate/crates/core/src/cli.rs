//! Command-line front end.
//!
//! Every invocation is a single batch run whose output is assembled in
//! memory and written once. Structured output (`--format json`) is
//! deterministic: the same flags and seed give the same bytes.
//!
//! Exit codes: `0` success, `1` a property or audit check failed, `2` usage
//! error, `3` a resource cap was hit (partial results are marked
//! `"certified": false`).
//!
//! A `--config` TOML file may supply any global flag under its long name,
//! e.g. `group = "interval:20"`, `k = 3`, `cap-nodes = 1000000`. Flags on
//! the command line win.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audit::{audit_applicable, audit_b3plus, audit_b4plus, audit_bstar, AuditReport};
use crate::constants::{constants_table, Source};
use crate::constructions::{
    bose_chowla_with_cap, build_h_group, plus_doubling, product_construction, DEFAULT_MODULUS_CAP,
};
use crate::counting::{rep_profile, RepKind, RepProfile};
use crate::doc::{self, GroupDoc, PointSetDoc};
use crate::error::{Error, Result};
use crate::group::PointSet;
use crate::search::{bound_check, extremal, random_maximal, BoundReport, ExtremalRecord, Family, SearchOptions};
use crate::verify::{verify_with_caps, verify_word_with_caps, Caps, Flavor, Witness};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    #[value(alias = "structured")]
    Json,
    Csv,
}

/// Flags shared by every subcommand. The config file uses the same names.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Opts {
    /// TOML file with defaults for any of these flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// `interval:N`, `zn:N` or `table:PATH`; the `:N` may be dropped for sweeps.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Elements, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub set: Option<String>,
    /// Point set document to read instead of `--group`/`--set`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// `b`, `plus` or `star`.
    #[arg(long, global = true)]
    pub flavor: Option<Flavor>,
    #[arg(long, global = true)]
    pub n_min: Option<u64>,
    #[arg(long, global = true)]
    pub n_max: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for sampled audits.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest number of k-multisets a verification may bucket.
    #[arg(long, global = true)]
    pub cap_multisets: Option<u64>,
    /// Largest number of k-letter words a verification may enumerate.
    #[arg(long, global = true)]
    pub cap_words: Option<u64>,
    /// Largest number of search nodes per extremal value.
    #[arg(long, global = true)]
    pub cap_nodes: Option<u64>,
    /// Seconds allowed per extremal value.
    #[arg(long, global = true)]
    pub cap_seconds: Option<f64>,
    /// Largest modulus a construction may produce.
    #[arg(long, global = true)]
    pub cap_modulus: Option<u64>,
    /// Largest number of optima kept per extremal value.
    #[arg(long, global = true)]
    pub cap_optima: Option<usize>,
}

impl Opts {
    fn merge(self, file: Opts) -> Opts {
        Opts {
            config: self.config,
            group: self.group.or(file.group),
            set: self.set.or(file.set),
            input: self.input.or(file.input),
            k: self.k.or(file.k),
            flavor: self.flavor.or(file.flavor),
            n_min: self.n_min.or(file.n_min),
            n_max: self.n_max.or(file.n_max),
            format: self.format.or(file.format),
            seed: self.seed.or(file.seed),
            cap_multisets: self.cap_multisets.or(file.cap_multisets),
            cap_words: self.cap_words.or(file.cap_words),
            cap_nodes: self.cap_nodes.or(file.cap_nodes),
            cap_seconds: self.cap_seconds.or(file.cap_seconds),
            cap_modulus: self.cap_modulus.or(file.cap_modulus),
            cap_optima: self.cap_optima.or(file.cap_optima),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            ("cap-multisets", self.cap_multisets),
            ("cap-words", self.cap_words),
            ("cap-nodes", self.cap_nodes),
            ("cap-modulus", self.cap_modulus),
            ("cap-optima", self.cap_optima.map(|v| v as u64)),
        ];
        for (name, v) in positive {
            if v == Some(0) {
                return Err(Error::Domain(format!("--{name} must be positive")));
            }
        }
        if self.cap_seconds.is_some_and(|s| !(s > 0.0)) {
            return Err(Error::Domain("--cap-seconds must be positive".into()));
        }
        Ok(())
    }

    fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            max_multisets: self.cap_multisets.map_or(d.max_multisets, u128::from),
            max_words: self.cap_words.map_or(d.max_words, u128::from),
        }
    }

    fn search_options(&self) -> SearchOptions {
        let d = SearchOptions::default();
        SearchOptions {
            max_nodes: self.cap_nodes.unwrap_or(d.max_nodes),
            max_optima: self.cap_optima.unwrap_or(d.max_optima),
            max_seconds: self.cap_seconds,
            ..d
        }
    }

    fn k_or(&self, default: usize) -> usize {
        self.k.unwrap_or(default)
    }
}

#[derive(Parser, Debug)]
#[command(name = "sidon", version, about = "Sidon-type sets: construct, verify, search, audit")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a set and print it as a point set document.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Decide the flavor for the given set and k.
    Verify,
    /// Exact extremal size for one N (`--group kind:N`) or a sweep (`--n-max`).
    Search {
        /// Resume file for sweeps, rewritten after each N.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Check the structural statements proved for B3+, B4+ and B2*/B3* sets.
    Audit {
        #[arg(value_enum)]
        which: AuditKind,
        /// Audit this many random maximal sets in `--group` instead of one set.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Print one of the summary tables.
    Table {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Print a representation function of the set.
    Count {
        /// `sigma_J`, `delta`, `r2`, `f3`, `g1`, `g2` or `f4`.
        #[arg(long)]
        kind: RepKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Bose–Chowla B_k set of size q = p^e in Z_{q^k - 1}.
    BoseChowla {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// A ∪ (A + N) in Z_2N from a B_k set A in Z_N (odd k).
    Doubling,
    /// The order-12 group H with the pair {α, β}.
    HGroup,
    /// A × B in G × H; `--right` defaults to {α, β} in H.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AuditKind {
    B3plus,
    B4plus,
    Bstar,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Constants,
    ExtremalSweep,
}

/// The ambient group given on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    Interval(Option<u64>),
    Cyclic(Option<u64>),
    Table(PathBuf),
}

impl GroupSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let n = |a: Option<&str>| -> Result<Option<u64>> {
            a.map(|a| a.parse().map_err(|_| Error::Domain(format!("bad N in group {s:?}"))))
                .transpose()
        };
        match kind.to_ascii_lowercase().as_str() {
            "interval" => Ok(GroupSpec::Interval(n(arg)?)),
            "zn" | "z" | "cyclic" => Ok(GroupSpec::Cyclic(n(arg)?)),
            "table" => match arg {
                Some(p) if !p.is_empty() => Ok(GroupSpec::Table(PathBuf::from(p))),
                _ => Err(Error::Domain("table groups need a path: table:PATH".into())),
            },
            _ => Err(Error::Domain(format!("unknown group {s:?}"))),
        }
    }

    fn family(&self) -> Result<(Family, Option<u64>)> {
        match self {
            GroupSpec::Interval(n) => Ok((Family::Interval, *n)),
            GroupSpec::Cyclic(n) => Ok((Family::Cyclic, *n)),
            GroupSpec::Table(_) => Err(Error::Unsupported("this command needs interval or zn".into())),
        }
    }

    fn group_doc(&self) -> Result<GroupDoc> {
        match self {
            GroupSpec::Table(p) => doc::read_group(&read_file(p)?),
            other => {
                let (family, n) = other.family()?;
                let n = n.ok_or_else(|| Error::Domain("group needs :N here".into()))?;
                Ok(GroupDoc::from_ctx(&family.ctx(n)?))
            }
        }
    }
}

fn read_file(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Format(format!("{}: {e}", p.display())))
}

fn parse_elements(s: &str) -> Result<Vec<i64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Domain(format!("bad element {t:?}"))))
        .collect()
}

/// The input set together with its group document (labels preserved).
fn input_set(o: &Opts) -> Result<(GroupDoc, PointSet)> {
    match (&o.input, &o.set) {
        (Some(_), Some(_)) => Err(Error::Domain("give --input or --set, not both".into())),
        (Some(p), None) => {
            let d: PointSetDoc = doc::from_json(&read_file(p)?)?;
            let a = d.to_set()?;
            Ok((d.group, a))
        }
        (None, Some(s)) => {
            let g = o.group.as_deref().ok_or_else(|| Error::Domain("--set needs --group".into()))?;
            let gd = GroupSpec::parse(g)?.group_doc()?;
            let mut vals = parse_elements(s)?;
            vals.sort_unstable();
            vals.dedup();
            let a = PointSet::new(gd.to_ctx()?, vals)?;
            Ok((gd, a))
        }
        (None, None) => Err(Error::Domain("no set given: use --input or --group with --set".into())),
    }
}

fn group_spec(o: &Opts) -> Result<GroupSpec> {
    GroupSpec::parse(o.group.as_deref().ok_or_else(|| Error::Domain("--group is required".into()))?)
}

/// Output of one run.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => 3,
        Error::Precondition(_) | Error::Consistency(_) => 1,
        _ => 2,
    }
}

/// Parse `args` (including the program name), run, write to `out`/`err`
/// and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "sidon: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: Cli) -> Result<Outcome> {
    let mut opts = cli.opts;
    if let Some(path) = opts.config.clone() {
        let file: Opts = toml::from_str(&read_file(&path)?)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        opts = opts.merge(file);
    }
    opts.validate()?;
    match cli.command {
        Command::Construct { what } => construct(&opts, what),
        Command::Verify => verify_cmd(&opts),
        Command::Search { checkpoint } => search_cmd(&opts, checkpoint.as_deref()),
        Command::Audit { which, random } => audit_cmd(&opts, which, random),
        Command::Table { which: TableKind::Constants } => constants_cmd(&opts),
        Command::Table { which: TableKind::ExtremalSweep } => sweep_table_cmd(&opts),
        Command::Count { kind } => count_cmd(&opts, kind),
    }
}

// ---------------------------------------------------------------------------
// construct / verify
// ---------------------------------------------------------------------------

fn set_output(o: &Opts, d: &PointSetDoc, a: &PointSet) -> Result<String> {
    Ok(match o.format() {
        Format::Json => doc::to_json(d)?,
        Format::Csv => {
            let mut s = String::from("element\n");
            for v in &d.elements {
                let _ = writeln!(s, "{v}");
            }
            s
        }
        Format::Human => {
            let mut s = format!("{a}\n|A| = {}\n", a.len());
            if let Some(l) = d.group.labels().filter(|l| !l.is_empty()) {
                for (name, v) in l {
                    let _ = writeln!(s, "{name} = {v}");
                }
            }
            s
        }
    })
}

fn construct(o: &Opts, what: Construct) -> Result<Outcome> {
    let (group, a) = match what {
        Construct::BoseChowla { p, e } => {
            let k = o.k_or(2);
            let k = u32::try_from(k).map_err(|_| Error::Domain("k too large".into()))?;
            let a = bose_chowla_with_cap(p, e, k, o.cap_modulus.unwrap_or(DEFAULT_MODULUS_CAP))?;
            (GroupDoc::from_ctx(a.ctx()), a)
        }
        Construct::Doubling => {
            let (_, a) = input_set(o)?;
            let k = o.k.ok_or_else(|| Error::Domain("doubling needs --k".into()))?;
            let d = plus_doubling(&a, k)?;
            (GroupDoc::from_ctx(d.ctx()), d)
        }
        Construct::HGroup => {
            let h = build_h_group();
            (GroupDoc::from_h_group(&h), h.pair())
        }
        Construct::Product { left, right } => {
            let k = o.k.ok_or_else(|| Error::Domain("product needs --k".into()))?;
            let a = doc::read_point_set(&read_file(&left)?)?;
            let b = match right {
                Some(p) => doc::read_point_set(&read_file(&p)?)?,
                None => build_h_group().pair(),
            };
            let c = product_construction(&a, &b, k)?;
            (GroupDoc::from_ctx(c.ctx()), c)
        }
    };
    let d = PointSetDoc::with_group(group, &a);
    Ok(Outcome::ok(set_output(o, &d, &a)?))
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    set: &'a PointSetDoc,
    k: usize,
    flavor: Flavor,
    holds: bool,
    witness: Option<Witness>,
}

fn verify_cmd(o: &Opts) -> Result<Outcome> {
    let (group, a) = input_set(o)?;
    let k = o.k.ok_or_else(|| Error::Domain("verify needs --k".into()))?;
    let flavor = o.flavor.unwrap_or(Flavor::B);
    let v = if a.ctx().is_abelian_kind() {
        verify_with_caps(&a, k, flavor, &o.caps())?
    } else {
        verify_word_with_caps(&a, k, flavor, &o.caps())?
    };
    let d = PointSetDoc::with_group(group, &a);
    let text = match o.format() {
        Format::Json => doc::to_json(&VerifyDoc { set: &d, k, flavor, holds: v.holds, witness: v.witness.clone() })?,
        Format::Csv => {
            let w = v.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
            format!("k,flavor,holds,witness\n{k},{flavor},{},\"{w}\"\n", v.holds)
        }
        Format::Human => {
            let mut s = format!("{a}: B_{k} {flavor} {}\n", if v.holds { "holds" } else { "fails" });
            if let Some(w) = &v.witness {
                let _ = writeln!(s, "witness: {w}");
            }
            s
        }
    };
    Ok(Outcome { text, code: if v.holds { 0 } else { 1 } })
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SearchDoc<'a> {
    record: &'a ExtremalRecord,
    bounds: &'a BoundReport,
    certified: bool,
}

/// Table document of value against N; also the checkpoint format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepDoc {
    pub family: Family,
    pub k: usize,
    pub flavor: Flavor,
    pub rows: Vec<ExtremalRecord>,
    /// False when a cap stopped the sweep early.
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopped_at: Option<u64>,
}

fn record_csv_header() -> String {
    "family,k,flavor,n,value,optima,optima_truncated,nodes\n".to_string()
}

fn record_csv_row(r: &ExtremalRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{}\n",
        r.family,
        r.k,
        r.flavor,
        r.n,
        r.value,
        r.optima.len(),
        r.optima_truncated,
        r.nodes_explored
    )
}

fn search_cmd(o: &Opts, checkpoint: Option<&Path>) -> Result<Outcome> {
    let (family, n) = group_spec(o)?.family()?;
    let k = o.k.ok_or_else(|| Error::Domain("search needs --k".into()))?;
    let flavor = o.flavor.unwrap_or(Flavor::B);
    let opts = o.search_options();
    match (n, o.n_max) {
        (Some(_), Some(_)) => Err(Error::Domain("give --group kind:N or --n-max, not both".into())),
        (None, None) => Err(Error::Domain("search needs --group kind:N or --n-max".into())),
        (Some(n), None) => {
            let r = extremal(family, k, flavor, n, &opts)?;
            let b = bound_check(&r)?;
            let text = match o.format() {
                Format::Json => doc::to_json(&SearchDoc { record: &r, bounds: &b, certified: true })?,
                Format::Csv => record_csv_header() + &record_csv_row(&r),
                Format::Human => {
                    let mut s = format!(
                        "{family} N={n} k={k} {flavor}: maximum size {} ({} optima{}, {} nodes)\n",
                        r.value,
                        r.optima.len(),
                        if r.optima_truncated { ", truncated" } else { "" },
                        r.nodes_explored
                    );
                    if let Some(first) = r.optima.first() {
                        let _ = writeln!(s, "first optimum: {first:?}");
                    }
                    for c in &b.checks {
                        let tag = if c.asserted { "" } else { " (reported)" };
                        let _ = writeln!(s, "  {}: {} <= {:.4} {}{tag}", c.name, c.lhs, c.rhs, c.pass);
                    }
                    s
                }
            };
            Ok(Outcome::ok(text))
        }
        (None, Some(n_max)) => {
            let n_min = o.n_min.unwrap_or(1);
            let mut sweep = match checkpoint.filter(|p| p.exists()) {
                Some(p) => {
                    let s: SweepDoc = doc::from_json(&read_file(p)?)?;
                    if (s.family, s.k, s.flavor) != (family, k, flavor) {
                        return Err(Error::Domain(format!(
                            "checkpoint {} is for a different sweep",
                            p.display()
                        )));
                    }
                    s
                }
                None => SweepDoc { family, k, flavor, rows: Vec::new(), certified: true, stopped_at: None },
            };
            sweep.certified = true;
            sweep.stopped_at = None;
            let mut code = 0;
            for n in n_min..=n_max {
                if sweep.rows.iter().any(|r| r.n == n) {
                    continue;
                }
                match extremal(family, k, flavor, n, &opts) {
                    Ok(r) => {
                        bound_check(&r)?;
                        sweep.rows.push(r);
                        sweep.rows.sort_by_key(|r| r.n);
                        if let Some(p) = checkpoint {
                            write_checkpoint(p, &sweep)?;
                        }
                    }
                    Err(e @ Error::Resource(_)) => {
                        sweep.certified = false;
                        sweep.stopped_at = Some(n);
                        code = exit_code(&e);
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            sweep.rows.retain(|r| (n_min..=n_max).contains(&r.n));
            let text = match o.format() {
                Format::Json => doc::to_json(&sweep)?,
                Format::Csv => {
                    let mut s = record_csv_header();
                    for r in &sweep.rows {
                        s += &record_csv_row(r);
                    }
                    s
                }
                Format::Human => {
                    let mut s = format!("{family} k={k} {flavor}\n   N  value\n");
                    for r in &sweep.rows {
                        let _ = writeln!(s, "{:>4}  {:>5}", r.n, r.value);
                    }
                    if let Some(n) = sweep.stopped_at {
                        let _ = writeln!(s, "stopped at N={n}: cap reached, not certified");
                    }
                    s
                }
            };
            Ok(Outcome { text, code })
        }
    }
}

fn write_checkpoint(p: &Path, sweep: &SweepDoc) -> Result<()> {
    let tmp = p.with_extension("tmp");
    let io = |e: std::io::Error| Error::Format(format!("{}: {e}", p.display()));
    std::fs::write(&tmp, doc::to_json(sweep)?).map_err(io)?;
    std::fs::rename(&tmp, p).map_err(io)
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AuditDoc<'a> {
    reports: &'a [AuditReport],
    all_pass: bool,
}

fn audit_one(a: &PointSet, which: AuditKind, k: Option<usize>) -> Result<Vec<AuditReport>> {
    Ok(match which {
        AuditKind::B3plus => vec![audit_b3plus(a)?],
        AuditKind::B4plus => vec![audit_b4plus(a)?],
        AuditKind::Bstar => match k {
            Some(k) => vec![audit_bstar(a, k)?],
            None => audit_applicable(a)?.into_iter().filter(|r| r.flavor == Flavor::Star).collect(),
        },
        AuditKind::All => audit_applicable(a)?,
    })
}

fn audit_cmd(o: &Opts, which: AuditKind, random: Option<usize>) -> Result<Outcome> {
    let reports: Vec<AuditReport> = match random {
        None => audit_one(&input_set(o)?.1, which, o.k)?,
        Some(count) => {
            let (family, n) = group_spec(o)?.family()?;
            let n = n.ok_or_else(|| Error::Domain("--random needs --group kind:N".into()))?;
            let configs: Vec<(usize, Flavor)> = match which {
                AuditKind::B3plus => vec![(3, Flavor::Plus)],
                AuditKind::B4plus => vec![(4, Flavor::Plus)],
                AuditKind::Bstar => match o.k {
                    Some(k) => vec![(k, Flavor::Star)],
                    None => vec![(2, Flavor::Star), (3, Flavor::Star)],
                },
                AuditKind::All => vec![(3, Flavor::Plus), (4, Flavor::Plus), (2, Flavor::Star), (3, Flavor::Star)],
            };
            let mut rng = ChaCha8Rng::seed_from_u64(o.seed.unwrap_or(0));
            let mut jobs = Vec::new();
            for &(k, flavor) in &configs {
                if family == Family::Cyclic && (k, flavor) != (3, Flavor::Plus) {
                    continue;
                }
                for _ in 0..count {
                    jobs.push((random_maximal(family, k, flavor, n, &mut rng)?, k, flavor));
                }
            }
            let per_set: Vec<Result<Vec<AuditReport>>> = jobs
                .par_iter()
                .map(|(a, k, flavor)| match flavor {
                    Flavor::Star => audit_bstar(a, *k).map(|r| vec![r]),
                    _ if *k == 4 => audit_b4plus(a).map(|r| vec![r]),
                    _ => audit_b3plus(a).map(|r| vec![r]),
                })
                .collect();
            let mut out = Vec::new();
            for r in per_set {
                out.extend(r?);
            }
            out
        }
    };
    let all_pass = reports.iter().all(|r| r.all_pass());
    let text = match o.format() {
        Format::Json => doc::to_json(&AuditDoc { reports: &reports, all_pass })?,
        Format::Csv => {
            let mut s = String::from("group,set,k,flavor,anchor,lhs,rhs,relation,pass\n");
            for r in &reports {
                let set = r.set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
                for c in &r.checks {
                    let rel = match c.relation {
                        crate::audit::Relation::Eq => "eq",
                        crate::audit::Relation::Le => "le",
                        crate::audit::Relation::LeApprox => "le_approx",
                    };
                    let _ = writeln!(
                        s,
                        "\"{}\",{set},{},{},{},{},{},{rel},{}",
                        r.group, r.k, r.flavor, c.anchor, c.lhs, c.rhs, c.pass
                    );
                }
            }
            s
        }
        Format::Human => {
            let mut s = String::new();
            if random.is_some() {
                let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
                let _ = writeln!(s, "{} reports, {checks} checks", reports.len());
                for r in reports.iter().filter(|r| !r.all_pass()) {
                    for c in r.failures() {
                        let _ = writeln!(s, "FAIL {:?} {}: {} vs {}", r.set, c.anchor, c.lhs, c.rhs);
                    }
                }
            } else {
                for r in &reports {
                    let _ = writeln!(s, "{} {:?} (B_{} {})", r.group, r.set, r.k, r.flavor);
                    for c in &r.checks {
                        let _ = writeln!(
                            s,
                            "  {:<5} {:<26} {} {:?} {}  {}",
                            if c.pass { "ok" } else { "FAIL" },
                            c.anchor,
                            c.lhs,
                            c.relation,
                            c.rhs,
                            c.name
                        );
                    }
                }
            }
            let _ = writeln!(s, "{}", if all_pass { "all checks pass" } else { "some checks FAILED" });
            s
        }
    };
    Ok(Outcome { text, code: if all_pass { 0 } else { 1 } })
}

// ---------------------------------------------------------------------------
// tables and counts
// ---------------------------------------------------------------------------

fn constants_cmd(o: &Opts) -> Result<Outcome> {
    let t = constants_table();
    let text = match o.format() {
        Format::Json => doc::to_json(&t)?,
        Format::Csv => doc::constants_csv(&t),
        Format::Human => {
            let mut s = String::from(" k  flavor  coefficient  (exact)    source     Ruzsa k^(2-1/k)\n");
            for c in &t.coefficients {
                let src = match c.source {
                    Source::Recursion => "recursion",
                    Source::Theorem => "theorem",
                };
                let _ = writeln!(
                    s,
                    "{:>2}  {:<6}  {:>6.1} N^1/{}  ({:>8.4})  {:<9}  {:>8.4}",
                    c.k, c.flavor, c.display, c.k, c.value, src, c.ruzsa
                );
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlavorRow {
    pub n: u64,
    pub b: usize,
    pub plus: usize,
    pub star: usize,
    /// `plus / star`, reported only.
    pub plus_over_star: f64,
}

#[derive(Serialize)]
struct FlavorTable {
    family: Family,
    k: usize,
    rows: Vec<FlavorRow>,
}

fn sweep_table_cmd(o: &Opts) -> Result<Outcome> {
    let (family, _) = group_spec(o)?.family()?;
    let k = o.k.ok_or_else(|| Error::Domain("extremal-sweep needs --k".into()))?;
    let n_max = o.n_max.ok_or_else(|| Error::Domain("extremal-sweep needs --n-max".into()))?;
    let opts = SearchOptions { all_optima: false, ..o.search_options() };
    let mut rows = Vec::new();
    for n in o.n_min.unwrap_or(1)..=n_max {
        let v: Vec<usize> = Flavor::ALL
            .iter()
            .map(|&f| extremal(family, k, f, n, &opts).map(|r| r.value))
            .collect::<Result<_>>()?;
        if !(v[0] <= v[1] && v[1] <= v[2]) {
            return Err(Error::Consistency(format!("flavor order broken at N={n}: {v:?}")));
        }
        rows.push(FlavorRow { n, b: v[0], plus: v[1], star: v[2], plus_over_star: v[1] as f64 / v[2] as f64 });
    }
    let text = match o.format() {
        Format::Json => doc::to_json(&FlavorTable { family, k, rows })?,
        Format::Csv => {
            let mut s = String::from("n,b,plus,star,plus_over_star\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{:.6}", r.n, r.b, r.plus, r.star, r.plus_over_star);
            }
            s
        }
        Format::Human => {
            let mut s = format!("{family} k={k}\n   N     B    B+    B*  B+/B*\n");
            for r in &rows {
                let _ = writeln!(s, "{:>4} {:>5} {:>5} {:>5}  {:.3}", r.n, r.b, r.plus, r.star, r.plus_over_star);
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn count_cmd(o: &Opts, kind: RepKind) -> Result<Outcome> {
    let (_, a) = input_set(o)?;
    let p: RepProfile = rep_profile(&a, kind)?;
    let text = match o.format() {
        Format::Json => doc::to_json(&p)?,
        Format::Csv => doc::profile_csv(&p),
        Format::Human => {
            let mut s = format!("{kind} of {a}\n");
            for (k, c) in &p.values {
                let _ = writeln!(s, "{k:>6}  {c}");
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["sidon"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn group_specs() {
        assert_eq!(GroupSpec::parse("interval:7").unwrap(), GroupSpec::Interval(Some(7)));
        assert_eq!(GroupSpec::parse("zn:14").unwrap(), GroupSpec::Cyclic(Some(14)));
        assert_eq!(GroupSpec::parse("zn").unwrap(), GroupSpec::Cyclic(None));
        assert!(GroupSpec::parse("table").is_err());
        assert!(GroupSpec::parse("ring:3").is_err());
    }

    #[test]
    fn verify_exit_codes() {
        let (code, out, _) = call(&["verify", "--group", "interval:3", "--set", "1,2,3", "--k", "2", "--flavor", "plus"]);
        assert_eq!(code, 1);
        assert!(out.contains("witness"));
        let (code, _, _) = call(&["verify", "--group", "zn:7", "--set", "1,3", "--k", "3"]);
        assert_eq!(code, 0);
        let (code, _, _) = call(&["verify", "--group", "zn:7", "--set", "1,3"]);
        assert_eq!(code, 2);
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        let (code, _, _) = call(&["verify", "--group", "zn:7", "--set", "1,3", "--k", "2", "--cap-multisets", "0"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn resource_cap_exit_code() {
        let (code, out, _) =
            call(&["search", "--group", "interval", "--k", "2", "--n-max", "30", "--cap-nodes", "50", "--format", "json"]);
        assert_eq!(code, 3);
        let s: SweepDoc = doc::from_json(&out).unwrap();
        assert!(!s.certified);
        assert!(s.stopped_at.is_some());
    }
}
