use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use khtor::census::{read_census, CensusEntry};
use khtor::linalg::smith_normal_form;
use khtor::record::ResultRecord;
use khtor::render::{format_group, parse_group, slots_for};
use khtor::verify::dense_smith;
use khtor::{compute_table, AbelianGroup, ComputeOptions, Exec, SparseIntMatrix};

fn small_diagrams() -> Vec<CensusEntry> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/census");
    ["prime_knots_le10.tsv", "links_le7.tsv", "torus_2k.tsv"]
        .iter()
        .flat_map(|f| read_census(&root.join(f)).unwrap().entries)
        .filter(|e| e.diagram.n_crossings() <= 7)
        .collect()
}

fn entry() -> impl Strategy<Value = CensusEntry> {
    let all = small_diagrams();
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=12, 1usize..=12)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn opts(mod_primes: Vec<u64>) -> ComputeOptions {
    ComputeOptions {
        mod_primes,
        exec: Exec::Sequential,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sparse_snf_matches_dense(rows in matrix()) {
        let sparse = smith_normal_form(&SparseIntMatrix::from_dense(&rows));
        let dense = dense_smith(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect());
        let dense: Vec<BigUint> = dense.into_iter().filter(|d| *d != BigUint::from(0u8)).collect();
        prop_assert_eq!(sparse.invariant_factors, dense);
    }

    #[test]
    fn format_parse_round_trip(rank in 0u64..5, tors in prop::collection::btree_map(prop::sample::select(vec![2u64, 4, 8, 3, 9, 5]), 1u64..4, 0..4)) {
        let g = AbelianGroup { rank, torsion: tors };
        let slots = slots_for(&g.torsion.keys().copied().collect::<BTreeSet<u64>>());
        let cell = format_group(&g, &slots);
        prop_assert_eq!(parse_group(&cell, &slots), Some(g), "cell {}", cell);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn crossing_order_does_not_matter(e in entry(), seed in any::<u64>()) {
        let n = e.diagram.n_crossings();
        let mut order: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by the seed
        let mut x = seed | 1;
        for k in (1..n).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            order.swap(k, (x % (k as u64 + 1)) as usize);
        }
        let a = compute_table(&e.diagram, &opts(vec![])).unwrap();
        let b = compute_table(&e.diagram.permuted(&order), &opts(vec![])).unwrap();
        prop_assert_eq!(a.groups, b.groups);
    }

    #[test]
    fn universal_coefficients(e in entry(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let t = compute_table(&e.diagram, &opts(vec![p])).unwrap();
        let mut keys: BTreeSet<(i32, i32)> = t.mod_p[&p].keys().copied().collect();
        keys.extend(t.groups.keys().copied());
        for (i, j) in keys {
            // H^i(C ⊗ Z/p) = H^i ⊗ Z/p ⊕ Tor(H^{i+1}, Z/p)
            let want = t.rank(i, j) + t.t_p(p, i, j) + t.t_p(p, i + 1, j);
            prop_assert_eq!(t.mod_p[&p].get(&(i, j)).copied().unwrap_or(0), want, "({}, {})", i, j);
        }
    }

    #[test]
    fn sequential_and_parallel_agree(e in entry()) {
        let seq = compute_table(&e.diagram, &ComputeOptions { reduced: true, exec: Exec::Sequential, ..Default::default() }).unwrap();
        let par = compute_table(&e.diagram, &ComputeOptions { reduced: true, exec: Exec::Parallel, ..Default::default() }).unwrap();
        prop_assert_eq!(seq.groups, par.groups);
        prop_assert_eq!(seq.reduced, par.reduced);
    }

    #[test]
    fn json_round_trip(e in entry()) {
        let t = compute_table(&e.diagram, &ComputeOptions { reduced: true, mod_primes: vec![3], exec: Exec::Sequential, ..Default::default() }).unwrap();
        let r = ResultRecord::new(e.name.clone(), &e.diagram, t, 7);
        let back = ResultRecord::from_json_str(&r.to_json_string().unwrap()).unwrap();
        let nonzero = |m: &BTreeMap<(i32, i32), AbelianGroup>| m.iter().filter(|(_, g)| !g.is_zero()).map(|(k, g)| (*k, g.clone())).collect::<Vec<_>>();
        prop_assert_eq!(nonzero(&back.table.groups), nonzero(&r.table.groups));
        prop_assert_eq!(back.table.reduced.as_ref().map(nonzero), r.table.reduced.as_ref().map(nonzero));
        prop_assert_eq!(&back.table.mod_p, &r.table.mod_p);
        prop_assert_eq!(back.report.verdict(), r.report.verdict());
        prop_assert_eq!(back.diagram_hash, r.diagram_hash);
    }

    #[test]
    fn mirror_flips_euler_characteristic(e in entry()) {
        let a = compute_table(&e.diagram, &opts(vec![])).unwrap().graded_euler();
        let b = compute_table(&e.diagram.mirror(), &opts(vec![])).unwrap().graded_euler();
        let flipped = khtor::poly::LaurentPoly::from_terms(a.terms().map(|(k, c)| (-k, c)));
        prop_assert_eq!(b, flipped);
    }
}
