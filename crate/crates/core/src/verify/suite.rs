//! Running the checks over a census.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::checks::*;
use super::conjectures::scan_conjectures;
use super::CheckResult;
use crate::census::CensusEntry;
use crate::complex::DEFAULT_CAP;
use crate::error::Result;
use crate::homology::{compute_table_with_meta, ComputeOptions};
use crate::invariants::{HClass, HomologyTable};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Chain,
    Z2,
    Lee,
    Theorems,
    Conjectures,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Chain,
        Suite::Z2,
        Suite::Lee,
        Suite::Theorems,
        Suite::Conjectures,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Chain => "chain",
            Suite::Z2 => "z2",
            Suite::Lee => "lee",
            Suite::Theorems => "theorems",
            Suite::Conjectures => "conjectures",
        })
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub suites: BTreeSet<Suite>,
    pub cap: u64,
    pub exec: Exec,
    pub lee_prime: u64,
    /// Lee dimensions are computed for diagrams up to this size.
    pub lee_max_crossings: usize,
    /// `G_n` is checked for `1 ≤ n ≤ gn_max`.
    pub gn_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            suites: Suite::ALL.into(),
            cap: DEFAULT_CAP,
            exec: Exec::default(),
            lee_prime: 3,
            lee_max_crossings: 10,
            gn_max: 12,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub results: Vec<CheckResult>,
    pub tables: Vec<HomologyTable>,
}

impl Report {
    /// Failed theorem-level rows.
    pub fn failures(&self) -> Vec<&CheckResult> {
        self.results
            .iter()
            .filter(|r| !r.passed && !r.is_conjecture())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

fn alternating_non_split(e: &CensusEntry) -> bool {
    e.meta.alternating == Some(true)
        && (e.diagram.n_components() == 1 || e.meta.split == Some(false))
}

/// Every selected check on one census entry, plus its table when computed.
pub fn check_entry(
    e: &CensusEntry,
    opts: &VerifyOptions,
    calibration: i32,
) -> (Vec<CheckResult>, Option<HomologyTable>) {
    let s = e.name.as_str();
    let d = &e.diagram;
    let mut out = Vec::new();
    let wants = |x: Suite| opts.suites.contains(&x);
    let fail = |name: &str, err: crate::error::Error| CheckResult::fail(name, s, err.to_string());
    if wants(Suite::Chain) {
        match check_chain_identities(d, s, opts.cap) {
            Ok(r) => out.extend(r),
            Err(err) => out.push(fail("chain_identities", err)),
        }
    }
    let needs_table = [Suite::Z2, Suite::Lee, Suite::Theorems, Suite::Conjectures]
        .into_iter()
        .any(wants);
    if !needs_table {
        return (out, None);
    }
    let copts = ComputeOptions {
        cap: opts.cap,
        reduced: wants(Suite::Theorems) || wants(Suite::Conjectures),
        mod_primes: if wants(Suite::Z2) {
            vec![2]
        } else {
            Vec::new()
        },
        exec: Exec::Sequential,
    };
    let mut t = match compute_table_with_meta(d, e.meta.clone(), &copts) {
        Ok(t) => t,
        Err(err) => {
            out.push(fail("compute", err));
            return (out, None);
        }
    };
    t.name = Some(e.name.clone());
    if wants(Suite::Z2) {
        let b2 = t.mod_p.get(&2).cloned().unwrap_or_default();
        out.push(check_z2_columns(s, &b2));
        if let (1, Some(true), Some(sigma)) =
            (d.n_components(), e.meta.alternating, e.meta.signature)
        {
            out.push(check_z2_pairing(s, &b2, sigma));
        }
        match check_nu_bar_exact(d, s, opts.cap) {
            Ok(Some(r)) => out.push(r),
            Ok(None) => out.push(CheckResult::pass(
                "nu_bar_exact",
                s,
                "skipped: too large for explicit cycles",
            )),
            Err(err) => out.push(fail("nu_bar_exact", err)),
        }
    }
    if wants(Suite::Lee) && d.n_crossings() <= opts.lee_max_crossings {
        let assert = t.h_class() == HClass::HSlim;
        match check_lee_dimension(d, s, opts.lee_prime, assert, opts.cap, Exec::Sequential) {
            Ok(r) => out.push(r),
            Err(err) => out.push(fail("lee_dimension", err)),
        }
    }
    if wants(Suite::Theorems) {
        match check_euler_oracle(d, &t, s) {
            Ok(r) => out.push(r),
            Err(err) => out.push(fail("euler_oracle", err)),
        }
        out.push(check_theorem_a(&t, s));
        out.extend(check_theorem_b(&t, s));
        out.extend(check_reduced(&t, s));
        out.push(check_jones_alternating(&t, s));
        if alternating_non_split(e) {
            out.push(check_diagonal_support(&t, s, calibration));
            if let Some(sigma) = e.meta.signature {
                let km = t.knight_move_decompose();
                out.push(CheckResult::from_outcome(
                    "knight_move_s",
                    s,
                    match km {
                        Ok(k) if k.s == -sigma => Ok(format!("s = {}", k.s)),
                        Ok(k) => Err(format!("s = {} but signature {sigma}", k.s)),
                        Err(f) => Err(f.to_string()),
                    },
                ));
            }
        }
    }
    (out, Some(t))
}

/// Runs the selected suites over `entries`, in parallel over entries.
pub fn run_suites(entries: &[CensusEntry], opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::default();
    let calibration = if opts.suites.contains(&Suite::Theorems) {
        let c = calibrate_diagonals()?;
        report.results.push(calibration_row(c));
        c
    } else {
        1
    };
    if opts.suites.contains(&Suite::Z2) {
        for n in 1..=opts.gn_max {
            report.results.push(check_gn_acyclic(n)?);
        }
    }
    let jobs: Vec<&CensusEntry> = entries.iter().collect();
    let outcomes = opts.exec.map(jobs, |e| {
        log::info!("verifying {}", e.name);
        check_entry(e, opts, calibration)
    });
    for (rows, table) in outcomes {
        report.results.extend(rows);
        report.tables.extend(table);
    }
    if opts.suites.contains(&Suite::Conjectures) {
        report.results.extend(scan_conjectures(&report.tables));
    }
    Ok(report)
}
