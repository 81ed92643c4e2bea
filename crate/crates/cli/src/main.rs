use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use khtor::census::{read_census, Census};
use khtor::homology::compute_table_with_meta;
use khtor::invariants::{HClass, TClass};
use khtor::record::{ResultRecord, Store};
use khtor::render::render_table;
use khtor::verify::{run_suites, write_report_csv, CheckResult, Suite, VerifyOptions};
use khtor::{ComputeOptions, Exec, LinkDiagram, LinkMetadata};

const TABLE_HELP: &str = "Tables have one column per homological degree i and one row per \
quantum degree j. An entry a[b,c,...] is the group Z^a plus torsion: the bracket lists the \
multiplicities of Z2, Z4, Z8, ... (up to the largest power of 2 present in the table) followed \
by any odd prime powers present, blank where a multiplicity is zero. Lists longer than [Z2,Z4] \
are an extension of the usual two-slot convention. Reduced rows are marked with ~.";

#[derive(Parser)]
#[command(name = "khtor", version, about = "Exact Khovanov homology with torsion", long_about = TABLE_HELP)]
struct Cli {
    /// Worker threads (1 runs sequentially).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Upper bound on the number of enhanced states.
    #[arg(long, global = true, default_value_t = khtor::complex::DEFAULT_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// A PD code such as "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]", or a census name.
    link: String,
    /// Census file to look names up in.
    #[arg(long)]
    census: Option<PathBuf>,
    /// Result store; names are also looked up here, and results are written back.
    #[arg(long)]
    store: Option<PathBuf>,
    /// Edge label carrying the base point of the reduced complex.
    #[arg(long)]
    basepoint: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute and print the homology table of one link.
    #[command(long_about = TABLE_HELP)]
    Compute {
        #[command(flatten)]
        source: Source,
        /// Also compute reduced homology.
        #[arg(long)]
        reduced: bool,
        /// Also compute Betti numbers over Z/p (repeatable).
        #[arg(long = "mod", value_name = "P")]
        mod_p: Vec<u64>,
        /// Print the JSON record instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Print the thinness verdicts of one link.
    Classify {
        #[command(flatten)]
        source: Source,
    },
    /// Run verification suites over a census and write a CSV report.
    Verify {
        census: PathBuf,
        /// chain, z2, lee, theorems, conjectures or all (repeatable).
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
        /// Report path; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Census parse errors do not affect the exit status.
        #[arg(long)]
        keep_going: bool,
    },
    /// Compute every census entry into a store, skipping cached entries.
    Batch {
        census: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        reduced: bool,
        #[arg(long = "mod", value_name = "P")]
        mod_p: Vec<u64>,
    },
}

fn looks_like_pd(s: &str) -> bool {
    let t = s.trim_start();
    t.starts_with("X[") || t.starts_with("unlink")
}

enum Resolved {
    Diagram(LinkDiagram, LinkMetadata, String),
    Stored(Box<ResultRecord>),
}

fn resolve(src: &Source) -> Result<Resolved> {
    let (diagram, meta, name) = if looks_like_pd(&src.link) {
        (
            LinkDiagram::parse_pd(&src.link)?,
            LinkMetadata::default(),
            src.link.trim().to_string(),
        )
    } else {
        let from_census = match &src.census {
            Some(path) => load_census(path)?
                .get(&src.link)
                .map(|e| (e.diagram.clone(), e.meta.clone())),
            None => None,
        };
        match from_census {
            Some((d, m)) => (d, m, src.link.clone()),
            None => {
                if let Some(store) = &src.store {
                    if src.basepoint.is_none() {
                        if let Some(r) = Store::open(store)?.find_by_name(&src.link)? {
                            return Ok(Resolved::Stored(Box::new(r)));
                        }
                    }
                }
                bail!(
                    "`{}` is neither a PD code nor a known census name",
                    src.link
                )
            }
        }
    };
    let diagram = match src.basepoint {
        Some(b) => diagram.with_base_point(b)?,
        None => diagram,
    };
    Ok(Resolved::Diagram(diagram, meta, name))
}

fn load_census(path: &Path) -> Result<Census> {
    let c = read_census(path).with_context(|| format!("reading {}", path.display()))?;
    for w in &c.warnings {
        eprintln!("warning: {w}");
    }
    Ok(c)
}

fn exec_for(jobs: Option<usize>) -> Exec {
    match jobs {
        Some(1) => Exec::Sequential,
        Some(n) => {
            if !khtor::par::configure_threads(n) {
                log::warn!("could not size the worker pool to {n} threads");
            }
            Exec::Parallel
        }
        None => Exec::Parallel,
    }
}

fn record_for(src: &Source, opts: &ComputeOptions) -> Result<ResultRecord> {
    match resolve(src)? {
        Resolved::Stored(r) if r.covers(opts.reduced, &opts.mod_primes) => Ok(*r),
        Resolved::Stored(r) => {
            let d = LinkDiagram::parse_pd(&r.table.pd)?.with_name(r.name.clone());
            compute_record(
                &d,
                r.table.meta.clone(),
                &r.name,
                opts,
                src.store.as_deref(),
            )
        }
        Resolved::Diagram(d, meta, name) => {
            compute_record(&d, meta, &name, opts, src.store.as_deref())
        }
    }
}

fn compute_record(
    d: &LinkDiagram,
    meta: LinkMetadata,
    name: &str,
    opts: &ComputeOptions,
    store: Option<&Path>,
) -> Result<ResultRecord> {
    if let Some(path) = store {
        if let Some(r) = Store::open(path)?.load(&d.diagram_hash())? {
            if r.covers(opts.reduced, &opts.mod_primes) && r.name == name {
                return Ok(r);
            }
        }
    }
    let start = Instant::now();
    let mut table = compute_table_with_meta(d, meta, opts)?;
    table.name = Some(name.to_string());
    let r = ResultRecord::new(name, d, table, start.elapsed().as_millis() as u64);
    if let Some(path) = store {
        Store::open(path)?.save(&r)?;
    }
    Ok(r)
}

fn print_summary(r: &ResultRecord, out: &mut impl Write) -> Result<()> {
    let t = &r.table;
    writeln!(out, "Kh   = {}", t.khovanov_polynomial())?;
    let kt = t.torsion_polynomial();
    if !kt.is_zero() {
        writeln!(out, "Kh_T = {kt}")?;
    }
    writeln!(out, "K    = {}", t.graded_euler())?;
    match t.jones() {
        Ok(j) => {
            writeln!(out, "J    = {j}")?;
            if let Ok(d) = j.abs_at_i() {
                writeln!(out, "d    = {d}")?;
            }
        }
        Err(e) => writeln!(out, "J    : {e}")?,
    }
    for (p, betti) in &t.mod_p {
        let cells: Vec<String> = betti
            .iter()
            .filter(|(_, &b)| b > 0)
            .map(|((i, j), b)| format!("({i},{j}):{b}"))
            .collect();
        writeln!(out, "Z/{p} = {}", cells.join(" "))?;
    }
    writeln!(out, "{}", verdict_line(r))?;
    Ok(())
}

fn verdict_line(r: &ResultRecord) -> String {
    let mut v = r.report.verdict();
    if r.report.t_class == TClass::TThin && !r.table.has_torsion() {
        v.push_str(" (trivially)");
    }
    v
}

fn cmd_compute(
    cli: &Cli,
    source: &Source,
    reduced: bool,
    mod_p: &[u64],
    json: bool,
) -> Result<ExitCode> {
    let opts = ComputeOptions {
        cap: cli.cap,
        reduced,
        mod_primes: mod_p.to_vec(),
        exec: exec_for(cli.jobs),
    };
    let r = record_for(source, &opts)?;
    let mut out = std::io::stdout().lock();
    if json {
        writeln!(out, "{}", r.to_json_string()?)?;
    } else {
        write!(out, "{}", render_table(&r.table))?;
        print_summary(&r, &mut out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(cli: &Cli, source: &Source) -> Result<ExitCode> {
    let opts = ComputeOptions {
        cap: cli.cap,
        exec: exec_for(cli.jobs),
        ..Default::default()
    };
    let r = record_for(source, &opts)?;
    let rep = &r.report;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", verdict_line(&r))?;
    let support: Vec<String> = rep.diagonal_support.iter().map(i32::to_string).collect();
    writeln!(out, "diagonals: {{{}}}", support.join(", "))?;
    match (&rep.s_value, &rep.knight_poly) {
        (Some(s), Some(k)) => {
            writeln!(out, "s = {s}")?;
            writeln!(
                out,
                "Kh' = {}",
                if k.is_zero() {
                    "0".to_string()
                } else {
                    k.to_string()
                }
            )?;
        }
        _ => writeln!(
            out,
            "knight move: {}",
            rep.knight_failure.as_deref().unwrap_or("failed")
        )?,
    }
    if !rep.t_reason.is_empty() {
        writeln!(out, "T-thick because: {}", rep.t_reason)?;
    }
    if !rep.excess.is_empty() {
        let e: Vec<String> = rep
            .excess
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        writeln!(out, "excess torsion at {}", e.join(" "))?;
    }
    for (p, thin) in &rep.mod_p_thin {
        writeln!(out, "Z{p}H-thin: {thin}")?;
    }
    let odd: Vec<u64> = r
        .table
        .torsion_orders()
        .into_iter()
        .filter(|q| q % 2 == 1)
        .collect();
    if !odd.is_empty() {
        writeln!(out, "flag: odd torsion {odd:?}")?;
    }
    if rep.h_class != HClass::HThick && rep.t_class != TClass::TThin {
        writeln!(out, "flag: H-thin but not T-thin")?;
    }
    if r.table.components <= 1
        && rep.h_class != HClass::HThick
        && !r.table.torsion_orders().contains(&2)
    {
        writeln!(out, "flag: no Z2 torsion")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    cli: &Cli,
    census: &Path,
    suites: &[String],
    report: Option<&Path>,
    keep_going: bool,
) -> Result<ExitCode> {
    let c = load_census(census)?;
    let mut selected = BTreeSet::new();
    for s in suites {
        if s == "all" {
            selected.extend(Suite::ALL);
        } else {
            selected.insert(s.parse::<Suite>().map_err(anyhow::Error::msg)?);
        }
    }
    let opts = VerifyOptions {
        suites: selected,
        cap: cli.cap,
        exec: exec_for(cli.jobs),
        ..Default::default()
    };
    let mut rows: Vec<CheckResult> = c
        .errors
        .iter()
        .map(|e| CheckResult::fail("parse", &census.display().to_string(), e.to_string()))
        .collect();
    for e in &c.errors {
        eprintln!("error: {e}");
    }
    let result = run_suites(&c.entries, &opts)?;
    rows.extend(result.results.iter().cloned());
    match report {
        Some(path) => write_report_csv(fs::File::create(path)?, &rows)?,
        None => write_report_csv(std::io::stdout().lock(), &rows)?,
    }
    let failures = result.failures();
    let conjecture_flags = result
        .results
        .iter()
        .filter(|r| r.is_conjecture() && !r.passed)
        .count();
    eprintln!(
        "{} entries, {} checks, {} theorem-level failures, {} parse errors, {} conjecture flags",
        c.entries.len(),
        result.results.len(),
        failures.len(),
        c.errors.len(),
        conjecture_flags
    );
    for f in &failures {
        eprintln!("  {f}");
    }
    let ok = failures.is_empty() && (keep_going || c.errors.is_empty());
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_batch(
    cli: &Cli,
    census: &Path,
    store_path: &Path,
    reduced: bool,
    mod_p: &[u64],
) -> Result<ExitCode> {
    let c = load_census(census)?;
    for e in &c.errors {
        eprintln!("error: {e}");
    }
    let store = Store::open(store_path)?;
    let exec = exec_for(cli.jobs);
    let opts = ComputeOptions {
        cap: cli.cap,
        reduced,
        mod_primes: mod_p.to_vec(),
        exec: Exec::Sequential,
    };
    let jobs: Vec<usize> = (0..c.entries.len()).collect();
    let outcomes = exec.map(
        jobs,
        |k| -> std::result::Result<(ResultRecord, bool), String> {
            let e = &c.entries[k];
            let hash = e.diagram.diagram_hash();
            if let Ok(Some(r)) = store.load(&hash) {
                if r.covers(reduced, mod_p) && r.name == e.name {
                    return Ok((r, false));
                }
            }
            let start = Instant::now();
            let mut table = compute_table_with_meta(&e.diagram, e.meta.clone(), &opts)
                .map_err(|err| format!("{}: {err}", e.name))?;
            table.name = Some(e.name.clone());
            let r = ResultRecord::new(
                e.name.clone(),
                &e.diagram,
                table,
                start.elapsed().as_millis() as u64,
            );
            store.save(&r).map_err(|err| format!("{}: {err}", e.name))?;
            Ok((r, true))
        },
    );
    let (mut computed, mut cached, mut failed) = (0, 0, 0);
    let mut records = Vec::new();
    for o in outcomes {
        match o {
            Ok((r, fresh)) => {
                if fresh {
                    computed += 1;
                } else {
                    cached += 1;
                }
                records.push(r);
            }
            Err(msg) => {
                failed += 1;
                log::warn!("{msg}");
                eprintln!("skipped {msg}");
            }
        }
    }
    store.write_index(&records)?;
    println!(
        "computed {computed}, cached {cached}, failed {failed}; index at {}",
        store.index_path().display()
    );
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Compute {
            source,
            reduced,
            mod_p,
            json,
        } => cmd_compute(cli, source, *reduced, mod_p, *json),
        Command::Classify { source } => cmd_classify(cli, source),
        Command::Verify {
            census,
            suite,
            report,
            keep_going,
        } => cmd_verify(cli, census, suite, report.as_deref(), *keep_going),
        Command::Batch {
            census,
            store,
            reduced,
            mod_p,
        } => cmd_batch(cli, census, store, *reduced, mod_p),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
