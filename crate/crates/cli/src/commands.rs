use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gausshappy::checks::{run_all, SuiteResult};
use gausshappy::heights::{smallest_heights_table_in, Domain, SmallestOfHeight};
use gausshappy::sequences::{
    build_witness, gaussian_consecutive, rational_consecutive, related_differences,
    required_params, transfer_start, RationalRun, RleNumeral, WitnessReport,
};
use gausshappy::{
    classify, enumerate_catalog_with, region_bound, Base, CycleCatalog, GaussianInt, ScanOptions,
    Terminal,
};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::cache;
use crate::error::{CliError, EXIT_INVARIANT, EXIT_NOT_FOUND, EXIT_OK};
use crate::json;
use crate::literal::{parse_gaussian, render, render_digits};

pub const DEFAULT_BASE: u32 = 10;

#[derive(Debug, Parser)]
#[command(
    name = "gausshappy",
    version,
    about = "Happy numbers on the Gaussian integers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Radix B ≥ 2 (default 10; `check` defaults to every base 2..=12).
    #[arg(long, global = true)]
    pub base: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Directory for cached cycle catalogs.
    #[arg(long, global = true, env = "GAUSSHAPPY_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Write Gaussian integers in base B in text and CSV output.
    #[arg(long, global = true)]
    pub digits: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trajectory, terminal and height of one Gaussian integer.
    Classify {
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Every fixed point and cycle, by exhaustive scan.
    Cycles {
        /// Scan |re|, |im| < N instead of the full contraction region.
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Smallest-norm happy numbers of each height.
    SmallestHeights {
        #[arg(long, default_value_t = 6)]
        max_height: u32,
        /// Defaults to 1000, or 1000000 with --rational-only.
        #[arg(long)]
        norm_limit: Option<u64>,
        /// Only positive rational integers n with n² ≤ norm limit.
        #[arg(long)]
        rational_only: bool,
    },
    /// Arithmetic sequences of happy numbers.
    #[command(subcommand)]
    Sequences(SequencesCommand),
    /// Seeded randomized property suites.
    Check {
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SequencesCommand {
    /// Smallest start of a Gaussian progression with a given difference.
    Find(FindArgs),
    /// Smallest start of a rational progression.
    Rational(RationalArgs),
    /// Certified (1+i)-progression of m Gaussian happy numbers.
    Witness(WitnessArgs),
}

#[derive(Debug, Args)]
pub struct FindArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub diff: String,
    #[arg(long, default_value_t = 2)]
    pub length: u64,
    /// Largest norm of the start.
    #[arg(long, default_value_t = 1_000_000)]
    pub bound: u64,
}

#[derive(Debug, Args)]
pub struct RationalArgs {
    /// Common difference; defaults to gcd(2, B-1).
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub length: u64,
    /// Largest start.
    #[arg(long, default_value_t = 1_000_000)]
    pub bound: u64,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(short = 'm', long = "terms")]
    pub m: u64,
    /// Rational run `a,d,M`; found by search when omitted.
    #[arg(long)]
    pub rational: Option<String>,
    /// Largest start tried when searching for the rational run.
    #[arg(long, default_value_t = 1_000_000)]
    pub search_bound: u64,
}

/// A command's result in every format it supports.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    pub exit: i32,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            csv: None,
            exit: EXIT_OK,
        }
    }
}

struct Renderer {
    base: Base,
    digits: bool,
}

impl Renderer {
    fn show(&self, z: &GaussianInt) -> String {
        if self.digits {
            render_digits(z, self.base)
        } else {
            render(z)
        }
    }

    fn join(&self, zs: &[GaussianInt], sep: &str) -> String {
        zs.iter()
            .map(|z| self.show(z))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let base = Base::new(cli.base.unwrap_or(DEFAULT_BASE))?;
    let r = Renderer {
        base,
        digits: cli.digits,
    };
    match &cli.command {
        Command::Classify { z } => classify_cmd(&r, &parse_gaussian(z)?),
        Command::Cycles { bound, workers } => {
            let options = ScanOptions {
                bound: *bound,
                workers: *workers,
            };
            let catalog = load_catalog(base, &options, cli.cache_dir.as_deref())?;
            Ok(cycles_output(&r, &catalog))
        }
        Command::SmallestHeights {
            max_height,
            norm_limit,
            rational_only,
        } => {
            let domain = if *rational_only {
                Domain::RationalPositive
            } else {
                Domain::Gaussian
            };
            let limit = norm_limit.unwrap_or(if *rational_only { 1_000_000 } else { 1000 });
            Ok(heights_output(&r, *max_height, limit, domain))
        }
        Command::Sequences(SequencesCommand::Find(args)) => find_cmd(&r, args),
        Command::Sequences(SequencesCommand::Rational(args)) => rational_cmd(base, args),
        Command::Sequences(SequencesCommand::Witness(args)) => witness_cmd(&r, args),
        Command::Check { samples, seed } => {
            let bases = match cli.base {
                Some(_) => vec![base],
                None => (2..=12).map(|b| Base::new(b).expect("b ≥ 2")).collect(),
            };
            Ok(check_output(
                &run_all(&bases, *samples, *seed),
                *samples,
                *seed,
            ))
        }
    }
}

fn classify_cmd(r: &Renderer, z: &GaussianInt) -> Result<Output, CliError> {
    let t = classify(z, r.base);
    let (terminal, cycle) = match &t.terminal {
        Terminal::Happy => ("happy", Value::Null),
        Terminal::Zero => ("zero", Value::Null),
        Terminal::InCycle {
            anchor,
            length,
            entry,
        } => (
            "cycle",
            json!({ "anchor": json::gaussian(anchor), "length": length, "entry": entry }),
        ),
    };
    let height = t.height();
    let mut text = format!(
        "base: {}\ninput: {}\ntrajectory: {}\nterminal: {terminal}\n",
        r.base,
        r.show(z),
        r.join(&t.steps, " -> ")
    );
    match (&t.terminal, height) {
        (_, Some(h)) => text += &format!("height: {h}\n"),
        (
            Terminal::InCycle {
                anchor,
                length,
                entry,
            },
            None,
        ) => {
            text += &format!(
                "height: none\ncycle anchor: {}\ncycle length: {length}\ncycle entry: {entry}\n",
                r.show(anchor)
            );
        }
        _ => text += "height: none\n",
    }
    let doc = json!({
        "base": r.base.get(),
        "input": json::gaussian(z),
        "trajectory": json::gaussians(&t.steps),
        "terminal": terminal,
        "height": height,
        "cycle": cycle,
    });
    Ok(Output::new(text, doc))
}

fn load_catalog(
    base: Base,
    options: &ScanOptions,
    cache_dir: Option<&std::path::Path>,
) -> Result<CycleCatalog, CliError> {
    let bound = match options.bound {
        Some(b) => Some(b),
        None => region_bound(base).to_u64(),
    };
    if let (Some(dir), Some(bound)) = (cache_dir, bound) {
        if let Some(catalog) = cache::load(dir, base, bound) {
            return Ok(catalog);
        }
    }
    let catalog = enumerate_catalog_with(base, options)?;
    if let Some(dir) = cache_dir {
        if let Err(e) = cache::store(dir, &catalog) {
            eprintln!(
                "warning: could not write catalog cache in {}: {e}",
                dir.display()
            );
        }
    }
    Ok(catalog)
}

fn cycles_output(r: &Renderer, catalog: &CycleCatalog) -> Output {
    let class_of: Vec<usize> = (0..catalog.cycles().len())
        .map(|k| catalog.class_of(k))
        .collect();
    let mut text = format!(
        "base {}: |re|, |im| < {} ({}), {} cycles in {} classes\n",
        catalog.base(),
        catalog.bound(),
        if catalog.is_complete() {
            "complete"
        } else {
            "partial"
        },
        catalog.cycles().len(),
        catalog.classes().len()
    );
    let mut cycles = Vec::new();
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["index", "class", "length", "anchor", "elements"])
        .expect("in-memory write");
    for (k, cycle) in catalog.cycles().iter().enumerate() {
        text += &format!(
            "{k:>3}  class {:>3}  length {:>3}  {}\n",
            class_of[k],
            cycle.len(),
            r.join(cycle.elements(), " -> ")
        );
        csv.write_record([
            k.to_string(),
            class_of[k].to_string(),
            cycle.len().to_string(),
            r.show(cycle.anchor()),
            r.join(cycle.elements(), " "),
        ])
        .expect("in-memory write");
        cycles.push(json!({
            "index": k,
            "class": class_of[k],
            "length": cycle.len(),
            "elements": json::gaussians(cycle.elements()),
        }));
    }
    let doc = json!({
        "base": catalog.base().get(),
        "bound": catalog.bound(),
        "complete": catalog.is_complete(),
        "cycles": cycles,
        "classes": catalog.classes(),
    });
    let mut out = Output::new(text, doc);
    out.csv = Some(String::from_utf8(csv.into_inner().expect("in-memory flush")).expect("utf-8"));
    out
}

/// Member of `class` with the largest real part, then imaginary part.
fn class_representative(class: &[GaussianInt]) -> &GaussianInt {
    class
        .iter()
        .max_by(|x, y| x.re().cmp(y.re()).then_with(|| x.im().cmp(y.im())))
        .expect("class is nonempty")
}

fn heights_output(r: &Renderer, max_height: u32, norm_limit: u64, domain: Domain) -> Output {
    let rows = smallest_heights_table_in(r.base, max_height, norm_limit, domain);
    let domain_name = match domain {
        Domain::Gaussian => "gaussian",
        Domain::RationalPositive => "rational",
    };
    let mut text = format!("base {}, {domain_name}, norm limit {norm_limit}\n", r.base);
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["height", "status", "norm", "representative", "classes"])
        .expect("in-memory write");
    let mut json_rows = Vec::new();
    let mut exit = EXIT_OK;
    for (h, row) in rows.iter().enumerate() {
        match row {
            Ok(SmallestOfHeight {
                norm,
                class_rep,
                classes,
                ..
            }) => {
                let reps: Vec<GaussianInt> = classes
                    .iter()
                    .map(|c| class_representative(c).clone())
                    .collect();
                text += &format!(
                    "height {h}: norm {norm}, {} (classes: {})\n",
                    r.show(class_rep),
                    r.join(&reps, ", ")
                );
                csv.write_record([
                    h.to_string(),
                    "found".into(),
                    norm.to_string(),
                    r.show(class_rep),
                    r.join(&reps, " "),
                ])
                .expect("in-memory write");
                let classes: Vec<Value> = classes
                    .iter()
                    .map(|c| json!({ "representative": json::gaussian(class_representative(c)), "members": json::gaussians(c) }))
                    .collect();
                json_rows.push(json!({
                    "height": h,
                    "status": "found",
                    "norm": norm,
                    "representative": json::gaussian(class_rep),
                    "classes": classes,
                }));
            }
            Err(e) => {
                exit = EXIT_NOT_FOUND;
                text += &format!("height {h}: not found ({e})\n");
                csv.write_record([
                    h.to_string(),
                    "not_found".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])
                .expect("in-memory write");
                json_rows.push(json!({ "height": h, "status": "not_found" }));
            }
        }
    }
    let doc = json!({
        "base": r.base.get(),
        "domain": domain_name,
        "norm_limit": norm_limit,
        "max_height": max_height,
        "rows": json_rows,
    });
    let mut out = Output::new(text, doc);
    out.csv = Some(String::from_utf8(csv.into_inner().expect("in-memory flush")).expect("utf-8"));
    out.exit = exit;
    out
}

fn terms(start: &GaussianInt, diff: &GaussianInt, len: u64) -> Vec<GaussianInt> {
    let mut out = Vec::with_capacity(len as usize);
    let mut z = start.clone();
    for _ in 0..len {
        out.push(z.clone());
        z = &z + diff;
    }
    out
}

fn find_cmd(r: &Renderer, args: &FindArgs) -> Result<Output, CliError> {
    let diff = parse_gaussian(&args.diff)?;
    let start = gaussian_consecutive(r.base, &diff, args.length, args.bound)?;
    let seq = terms(&start, &diff, args.length);
    let related: Vec<(GaussianInt, GaussianInt)> = related_differences(&diff)
        .into_iter()
        .map(|d| {
            let s = transfer_start(&start, &diff, &d).expect("related difference has a symmetry");
            (d, s)
        })
        .collect();
    let mut text = format!(
        "base {}, difference {}, length {}, norm bound {}\nstart: {}\nterms: {}\n",
        r.base,
        r.show(&diff),
        args.length,
        args.bound,
        r.show(&start),
        r.join(&seq, ", ")
    );
    for (d, s) in &related {
        text += &format!("difference {}: start {}\n", r.show(d), r.show(s));
    }
    let doc = json!({
        "base": r.base.get(),
        "diff": json::gaussian(&diff),
        "length": args.length,
        "bound": args.bound,
        "start": json::gaussian(&start),
        "terms": json::gaussians(&seq),
        "related": related
            .iter()
            .map(|(d, s)| json!({ "diff": json::gaussian(d), "start": json::gaussian(s) }))
            .collect::<Vec<_>>(),
    });
    Ok(Output::new(text, doc))
}

fn rational_cmd(base: Base, args: &RationalArgs) -> Result<Output, CliError> {
    let d = args.d.unwrap_or_else(|| base.rational_step());
    let start = rational_consecutive(base, d, args.length, args.bound)?;
    let seq: Vec<u64> = (0..args.length).map(|j| start + d * j).collect();
    let text = format!(
        "base {base}, difference {d}, length {}, bound {}\nstart: {start}\nterms: {}\n",
        args.length,
        args.bound,
        seq.iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    let doc = json!({
        "base": base.get(),
        "d": d,
        "length": args.length,
        "bound": args.bound,
        "start": start,
        "terms": seq,
    });
    Ok(Output::new(text, doc))
}

fn parse_rational_run(text: &str) -> Result<RationalRun, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || {
        CliError::Usage(format!(
            "--rational expects a,d,M with nonnegative integers, got {text:?}"
        ))
    };
    match parts.as_slice() {
        [a, d, m] => Ok(RationalRun {
            start: a.parse().map_err(|_| bad())?,
            step: d.parse().map_err(|_| bad())?,
            len: m.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

fn runs_json(n: &RleNumeral) -> Value {
    Value::Array(
        n.runs()
            .iter()
            .map(|run| json!({ "digit": [run.pair.re, run.pair.im], "count": json::int(&run.count) }))
            .collect(),
    )
}

fn runs_text(n: &RleNumeral) -> String {
    n.runs()
        .iter()
        .map(|run| format!("({},{})^{}", run.pair.re, run.pair.im, run.count))
        .collect::<Vec<_>>()
        .join(" ")
}

fn witness_cmd(r: &Renderer, args: &WitnessArgs) -> Result<Output, CliError> {
    let base = r.base;
    let rational = match &args.rational {
        Some(text) => parse_rational_run(text)?,
        None => {
            let params = required_params(base, args.m)?;
            let step = base.rational_step();
            let start = rational_consecutive(base, step, params.run_length, args.search_bound)?;
            RationalRun {
                start,
                step,
                len: params.run_length,
            }
        }
    };
    let report = build_witness(base, args.m, rational)?;
    let mut out = witness_output(r, &report);
    if !report.valid {
        out.exit = EXIT_INVARIANT;
    }
    Ok(out)
}

fn witness_output(r: &Renderer, w: &WitnessReport) -> Output {
    let mut text = format!(
        "base {}, m {}: {}\nrational run: start {}, step {}, length {}\nrequired: run length {}, shift r = {}\nt = {}\nb = {} ({} positions)\n",
        w.base,
        w.m,
        if w.valid { "valid" } else { "INVALID" },
        w.rational.start,
        w.rational.step,
        w.rational.len,
        w.params.run_length,
        w.params.shift,
        w.target,
        runs_text(&w.b),
        w.b.positions(),
    );
    for (term, check) in w.terms.iter().zip(&w.checks) {
        text += &format!(
            "k = {}: {}\n  runs: {}\n  S_B(term) = {} [{}]\n  S_B(S_B(term)) = {}, expected {} [{}], happy: {}\n",
            term.k,
            term.description,
            runs_text(&term.numeral),
            r.show(&check.first_image),
            if check.first_image_ok { "ok" } else { "mismatch" },
            r.show(&check.landing),
            check.expected_landing,
            if GaussianInt::from(check.expected_landing.clone()) == check.landing { "ok" } else { "mismatch" },
            if check.landing_happy { "yes" } else { "no" },
        );
    }
    let terms: Vec<Value> = w
        .terms
        .iter()
        .map(|t| {
            json!({
                "k": t.k,
                "description": t.description,
                "positions": json::int(t.numeral.positions()),
                "runs": runs_json(&t.numeral),
            })
        })
        .collect();
    let checks: Vec<Value> = w
        .checks
        .iter()
        .map(|c| {
            json!({
                "k": c.k,
                "first_image": json::gaussian(&c.first_image),
                "first_image_ok": c.first_image_ok,
                "landing": json::gaussian(&c.landing),
                "expected_landing": json::int(&c.expected_landing),
                "landing_happy": c.landing_happy,
                "passed": c.passed(),
            })
        })
        .collect();
    let doc = json!({
        "base": w.base.get(),
        "m": w.m,
        "valid": w.valid,
        "params": { "run_length": w.params.run_length, "shift": w.params.shift },
        "rational": { "start": w.rational.start, "step": w.rational.step, "len": w.rational.len },
        "target": json::int(&w.target),
        "b": { "positions": json::int(w.b.positions()), "runs": runs_json(&w.b) },
        "terms": terms,
        "checks": checks,
    });
    Output::new(text, doc)
}

fn check_output(results: &[SuiteResult], samples: u64, seed: u64) -> Output {
    let passed = results.iter().all(SuiteResult::passed);
    let mut text = format!("samples {samples}, seed {seed}\n");
    for s in results {
        text += &format!(
            "base {:>2}  {:<34} {:>6} cases  {} failures{}\n",
            s.base,
            s.name,
            s.cases,
            s.failures,
            s.first_failure
                .as_ref()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        );
    }
    text += if passed {
        "all suites passed\n"
    } else {
        "some suites FAILED\n"
    };
    let suites: Vec<Value> = results
        .iter()
        .map(|s| {
            json!({
                "name": s.name,
                "base": s.base.get(),
                "cases": s.cases,
                "failures": s.failures,
                "first_failure": s.first_failure,
            })
        })
        .collect();
    let doc = json!({ "samples": samples, "seed": seed, "passed": passed, "suites": suites });
    let mut out = Output::new(text, doc);
    if !passed {
        out.exit = EXIT_INVARIANT;
    }
    out
}
