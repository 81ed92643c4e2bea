//! ASCII tables in the `a[b,c,...]` convention: `a` is the free rank and the
//! bracket lists torsion multiplicities by ascending prime power, first the
//! powers of 2 (2, 4, 8, ...) and then odd prime powers. A group with no
//! torsion has no bracket, a zero rank in front of a bracket is omitted, and
//! a slot whose multiplicity is zero is left blank.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::invariants::{Bidegree, HomologyTable};
use crate::linalg::{prime_of, AbelianGroup};

/// Bracket slots for a set of torsion orders: 2, 4, ... up to the largest
/// power of 2 present, then the odd prime powers present in increasing order.
pub fn slots_for(orders: &BTreeSet<u64>) -> Vec<u64> {
    let mut slots = Vec::new();
    if let Some(&top) = orders.iter().filter(|q| q.is_power_of_two()).max() {
        let mut q = 2;
        while q <= top {
            slots.push(q);
            q *= 2;
        }
    }
    let mut odd: Vec<u64> = orders
        .iter()
        .copied()
        .filter(|q| !q.is_power_of_two())
        .collect();
    odd.sort_by_key(|&q| (prime_of(q), q));
    slots.extend(odd);
    slots
}

/// One cell; empty for the zero group.
pub fn format_group(g: &AbelianGroup, slots: &[u64]) -> String {
    let mut s = String::new();
    if g.rank > 0 {
        s.push_str(&g.rank.to_string());
    }
    if g.has_torsion() {
        let last = slots
            .iter()
            .rposition(|q| g.torsion.contains_key(q))
            .unwrap_or(0);
        let parts: Vec<String> = slots[..=last]
            .iter()
            .map(|q| g.torsion.get(q).map_or(String::new(), u64::to_string))
            .collect();
        let _ = write!(s, "[{}]", parts.join(","));
    }
    s
}

/// A cell rendered with the group's own slots.
pub fn format_group_alone(g: &AbelianGroup) -> String {
    format_group(g, &slots_for(&g.torsion.keys().copied().collect()))
}

/// Inverse of [`format_group`] for the same slots.
pub fn parse_group(cell: &str, slots: &[u64]) -> Option<AbelianGroup> {
    let cell = cell.trim();
    let (rank, bracket) = match cell.find('[') {
        Some(k) => (
            &cell[..k],
            Some(cell[k..].strip_prefix('[')?.strip_suffix(']')?),
        ),
        None => (cell, None),
    };
    let mut g = AbelianGroup::free(if rank.is_empty() {
        0
    } else {
        rank.parse().ok()?
    });
    if let Some(b) = bracket {
        let parts: Vec<&str> = b.split(',').collect();
        if parts.len() > slots.len() {
            return None;
        }
        for (part, &q) in parts.iter().zip(slots) {
            if !part.is_empty() {
                g.add_torsion(q, part.parse().ok()?);
            }
        }
    }
    Some(g)
}

fn push_row(out: &mut String, label: String, cells: &[String], width: usize) {
    let _ = write!(out, "{label:>6} |");
    for c in cells {
        let _ = write!(out, " {c:>width$}");
    }
    out.push('\n');
}

/// Table with one column per `i` and one row per `j`, highest `j` on top.
/// Reduced rows, when present, are interleaved and marked with `~`.
pub fn render_table(t: &HomologyTable) -> String {
    let mut orders = t.torsion_orders();
    if let Some(r) = &t.reduced {
        orders.extend(r.values().flat_map(|g| g.torsion.keys().copied()));
    }
    let slots = slots_for(&orders);
    let empty = BTreeMap::new();
    let reduced = t.reduced.as_ref().unwrap_or(&empty);
    let keys = t.groups.keys().chain(reduced.keys());
    let (i_lo, i_hi) = keys
        .clone()
        .fold((i32::MAX, i32::MIN), |(lo, hi), &(i, _)| {
            (lo.min(i), hi.max(i))
        });
    let mut out = String::new();
    if let Some(name) = &t.name {
        let _ = writeln!(out, "{name}");
    }
    if i_lo > i_hi {
        out.push_str("(zero homology)\n");
        return out;
    }
    // rows: (j, is_reduced), top to bottom
    let mut rows: BTreeSet<(i32, bool)> = t.groups.keys().map(|&(_, j)| (j, false)).collect();
    rows.extend(reduced.keys().map(|&(_, j)| (j, true)));
    let cell = |m: &BTreeMap<Bidegree, AbelianGroup>, i: i32, j: i32| {
        m.get(&(i, j))
            .map_or(String::new(), |g| format_group(g, &slots))
    };
    let width = keys
        .map(|k| format_group(t.groups.get(k).or_else(|| reduced.get(k)).unwrap(), &slots).len())
        .chain((i_lo..=i_hi).map(|i| i.to_string().len()))
        .max()
        .unwrap_or(1)
        .max(format_group(&AbelianGroup::default(), &slots).len());
    let header: Vec<String> = (i_lo..=i_hi).map(|i| i.to_string()).collect();
    push_row(&mut out, "j \\ i".into(), &header, width);
    let _ = writeln!(out, "{}", "-".repeat(8 + (width + 1) * header.len()));
    for &(j, red) in rows.iter().rev() {
        let m = if red { reduced } else { &t.groups };
        let cells: Vec<String> = (i_lo..=i_hi).map(|i| cell(m, i, j)).collect();
        let label = if red { format!("~{j}") } else { j.to_string() };
        push_row(&mut out, label, &cells, width);
    }
    let odd: Vec<u64> = orders
        .iter()
        .copied()
        .filter(|q| !q.is_power_of_two())
        .collect();
    if !odd.is_empty() {
        let list: Vec<String> = odd.iter().map(u64::to_string).collect();
        let _ = writeln!(
            out,
            "WARNING: odd torsion of order {} present",
            list.join(", ")
        );
    }
    if !slots.is_empty() {
        let list: Vec<String> = slots.iter().map(|q| format!("Z{q}")).collect();
        let _ = writeln!(out, "brackets: [{}]", list.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(rank: u64, tors: &[(u64, u64)]) -> AbelianGroup {
        let mut g = AbelianGroup::free(rank);
        for &(q, m) in tors {
            g.add_torsion(q, m);
        }
        g
    }

    #[test]
    fn cell_grammar() {
        assert_eq!(format_group_alone(&group(2, &[(2, 1), (4, 1)])), "2[1,1]");
        assert_eq!(format_group_alone(&group(0, &[(2, 1)])), "[1]");
        assert_eq!(format_group_alone(&group(3, &[])), "3");
        assert_eq!(format_group_alone(&group(1, &[(4, 1)])), "1[,1]");
        assert_eq!(format_group(&group(1, &[(2, 2)]), &[2, 4]), "1[2]");
        assert_eq!(format_group(&group(0, &[(3, 1)]), &[2, 3]), "[,1]");
        assert_eq!(format_group(&AbelianGroup::default(), &[2]), "");
    }

    #[test]
    fn slots_order() {
        assert_eq!(
            slots_for(&BTreeSet::from([8, 9, 3, 5])),
            vec![2, 4, 8, 3, 9, 5]
        );
        assert!(slots_for(&BTreeSet::new()).is_empty());
    }

    #[test]
    fn parse_inverts_format() {
        let slots = [2, 4, 3];
        for g in [
            group(2, &[(2, 1), (4, 1)]),
            group(0, &[(4, 3)]),
            group(5, &[]),
            group(1, &[(3, 2)]),
        ] {
            assert_eq!(parse_group(&format_group(&g, &slots), &slots), Some(g));
        }
        assert_eq!(parse_group("1[1,2,3,4]", &slots), None);
    }

    #[test]
    fn unknot_table() {
        let mut t = HomologyTable::default();
        t.groups.insert((0, -1), AbelianGroup::free(1));
        t.groups.insert((0, 1), AbelianGroup::free(1));
        let r = render_table(&t);
        let lines: Vec<&str> = r.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("     1 |") && lines[2].ends_with(" 1"));
        assert!(lines[3].starts_with("    -1 |") && lines[3].ends_with(" 1"));
    }

    #[test]
    fn reduced_rows_interleave() {
        let mut t = HomologyTable::default();
        t.groups.insert((0, 1), AbelianGroup::free(1));
        t.groups.insert((3, 7), group(0, &[(2, 1)]));
        t.reduced = Some(BTreeMap::from([((0, 2), AbelianGroup::free(1))]));
        let r = render_table(&t);
        let labels: Vec<&str> = r
            .lines()
            .skip(2)
            .map(|l| l.split('|').next().unwrap().trim())
            .collect();
        assert_eq!(labels[..3], ["7", "~2", "1"]);
        assert!(r.contains("[1]"));
    }
}
