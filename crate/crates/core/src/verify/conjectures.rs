//! Census scans for the torsion conjectures. Rows produced here never count
//! as failures of a verification run.

use std::collections::BTreeMap;

use super::checks::is_exceptional_jones;
use super::CheckResult;
use crate::invariants::{HClass, HomologyTable, TClass};

fn subject(t: &HomologyTable) -> String {
    t.name.clone().unwrap_or_else(|| t.pd.clone())
}

fn non_split(t: &HomologyTable) -> bool {
    t.components <= 1 || t.meta.split == Some(false)
}

fn has_even_torsion(t: &HomologyTable) -> bool {
    t.torsion_orders().iter().any(|q| q % 2 == 0)
}

fn reduced_has_torsion(t: &HomologyTable) -> Option<bool> {
    Some(t.reduced.as_ref()?.values().any(|g| g.has_torsion()))
}

struct Tally {
    name: &'static str,
    checked: usize,
    violations: Vec<CheckResult>,
    note: String,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            violations: Vec::new(),
            note: String::new(),
        }
    }

    fn record(&mut self, subject: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations
                .push(CheckResult::fail(self.name, subject, detail()));
        }
    }

    fn finish(self, out: &mut Vec<CheckResult>) {
        let mut detail = format!(
            "checked {}, violations {}",
            self.checked,
            self.violations.len()
        );
        if !self.note.is_empty() {
            detail.push_str("; ");
            detail.push_str(&self.note);
        }
        out.push(CheckResult {
            check: self.name.into(),
            subject: "census".into(),
            passed: self.violations.is_empty(),
            detail,
        });
        out.extend(self.violations);
    }
}

/// Tallies and counterexample candidates for the five conjectures:
/// 2-torsion outside the unknot/Hopf family, 2-power torsion only, H-thin
/// implies T-thin, T-rich iff torsion in reduced homology (knots), and equal
/// rank tables iff equal torsion tables (knots, mirror pairs excluded).
pub fn scan_conjectures(tables: &[HomologyTable]) -> Vec<CheckResult> {
    let mut out = Vec::new();
    if tables.is_empty() {
        return out;
    }
    let mut c1 = Tally::new("conjecture_1_two_torsion");
    let mut c2 = Tally::new("conjecture_2_two_power_torsion");
    let mut c3 = Tally::new("conjecture_3_h_thin_t_thin");
    let mut c4 = Tally::new("conjecture_4_t_rich_reduced");
    let mut c5 = Tally::new("conjecture_5_ranks_torsion");
    let mut t_rich = Vec::new();
    for t in tables {
        let s = subject(t);
        if non_split(t) {
            if let Ok(j) = t.jones() {
                if !is_exceptional_jones(&j) {
                    c1.record(&s, has_even_torsion(t), || {
                        "no torsion of even order".into()
                    });
                }
            }
        }
        let odd: Vec<u64> = t
            .torsion_orders()
            .into_iter()
            .filter(|q| q % 2 == 1)
            .collect();
        c2.record(&s, odd.is_empty(), || format!("odd torsion orders {odd:?}"));
        let report = t.thinness_report();
        if report.h_class != HClass::HThick {
            c3.record(&s, report.t_class == TClass::TThin, || {
                format!("{}: {}", report.t_class, report.t_reason)
            });
        }
        if t.components <= 1 {
            if let Some(red) = reduced_has_torsion(t) {
                let rich = report.t_class == TClass::TRich;
                if rich {
                    t_rich.push(format!("{s} (reduced torsion: {red})"));
                }
                c4.record(&s, rich == red, || {
                    format!("T-rich = {rich}, reduced torsion = {red}")
                });
            }
        }
    }
    if !t_rich.is_empty() {
        c4.note = format!("T-rich: {}", t_rich.join(", "));
    }
    // conjecture 5, both directions, over knots
    let knots: Vec<&HomologyTable> = tables.iter().filter(|t| t.components <= 1).collect();
    let mirrors = |a: &HomologyTable, b: &HomologyTable| {
        let named = |x: &HomologyTable, y: &HomologyTable| {
            x.meta.mirror_of.is_some() && x.meta.mirror_of == y.name
        };
        named(a, b) || named(b, a)
    };
    let mut by_ranks: BTreeMap<Vec<((i32, i32), i64)>, Vec<usize>> = BTreeMap::new();
    let mut by_torsion: BTreeMap<Vec<((i32, u64, i32), u64)>, Vec<usize>> = BTreeMap::new();
    for (k, t) in knots.iter().enumerate() {
        by_ranks
            .entry(t.khovanov_polynomial().terms().collect())
            .or_default()
            .push(k);
        by_torsion
            .entry(t.torsion_polynomial().terms().collect())
            .or_default()
            .push(k);
    }
    let mut pairs = 0;
    let classes = |m: Vec<Vec<usize>>, what: &'static str| m.into_iter().map(move |v| (v, what));
    let all = classes(by_ranks.into_values().collect(), "ranks")
        .chain(classes(by_torsion.into_values().collect(), "torsion"));
    for (members, what) in all {
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                let (ta, tb) = (knots[a], knots[b]);
                if mirrors(ta, tb) {
                    continue;
                }
                pairs += 1;
                let same = if what == "ranks" {
                    ta.torsion_polynomial() == tb.torsion_polynomial()
                } else {
                    ta.khovanov_polynomial() == tb.khovanov_polynomial()
                };
                let other = if what == "ranks" { "torsion" } else { "ranks" };
                let pair = format!("{} / {}", subject(ta), subject(tb));
                c5.record(&pair, same, || {
                    format!("equal {what} but different {other}")
                });
            }
        }
    }
    c5.note = format!("{pairs} pairs with equal ranks or equal torsion");
    for c in [c1, c2, c3, c4, c5] {
        c.finish(&mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbelianGroup;

    fn table(name: &str, entries: &[(i32, i32, u64, &[(u64, u64)])]) -> HomologyTable {
        let mut t = HomologyTable {
            name: Some(name.into()),
            components: 1,
            ..Default::default()
        };
        for &(i, j, rank, tors) in entries {
            let mut g = AbelianGroup::free(rank);
            for &(q, m) in tors {
                g.add_torsion(q, m);
            }
            t.groups.insert((i, j), g);
        }
        t
    }

    fn trefoil(name: &str) -> HomologyTable {
        table(
            name,
            &[
                (0, 1, 1, &[]),
                (0, 3, 1, &[]),
                (2, 5, 1, &[]),
                (3, 7, 0, &[(2, 1)]),
                (3, 9, 1, &[]),
            ],
        )
    }

    #[test]
    fn empty_census_gives_empty_report() {
        assert!(scan_conjectures(&[]).is_empty());
    }

    #[test]
    fn consistent_census_has_no_violations() {
        let unknot = table("0_1", &[(0, -1, 1, &[]), (0, 1, 1, &[])]);
        let rows = scan_conjectures(&[unknot, trefoil("3_1")]);
        assert_eq!(rows.len(), 5);
        assert!(
            rows.iter().all(|r| r.passed && r.is_conjecture()),
            "{rows:?}"
        );
        assert_eq!(rows[0].detail, "checked 1, violations 0");
    }

    #[test]
    fn violations_are_listed() {
        let mut odd = trefoil("x");
        odd.groups.get_mut(&(3, 7)).unwrap().add_torsion(3, 1);
        let mut torsion_free = trefoil("y");
        torsion_free.groups.remove(&(3, 7));
        let rows = scan_conjectures(&[odd, torsion_free, trefoil("z")]);
        let failed: Vec<(&str, &str)> = rows
            .iter()
            .filter(|r| !r.passed && r.subject != "census")
            .map(|r| (r.check.as_str(), r.subject.as_str()))
            .collect();
        assert!(failed.contains(&("conjecture_1_two_torsion", "y")));
        assert!(failed.contains(&("conjecture_2_two_power_torsion", "x")));
        assert!(failed.contains(&("conjecture_5_ranks_torsion", "x / y")));
    }
}
