//! Homology tables from diagrams: one boundary matrix per bidegree, reduced
//! independently, then assembled column by column.

use std::collections::BTreeMap;

use crate::complex::{Coefficients, DifferentialKind, Slices, StateCube, DEFAULT_CAP};
use crate::diagram::{LinkDiagram, LinkMetadata};
use crate::error::{ComplexError, Result};
use crate::invariants::{Bidegree, HomologyTable};
use crate::linalg::{group_from_ranks, rank_mod_p, smith_normal_form, AbelianGroup, SmithForm};
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputeOptions {
    pub cap: u64,
    pub reduced: bool,
    pub mod_primes: Vec<u64>,
    pub exec: Exec,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            cap: DEFAULT_CAP,
            reduced: false,
            mod_primes: Vec::new(),
            exec: Exec::default(),
        }
    }
}

/// Integral homology of every slice of `slices`.
pub fn integral_homology(
    cube: &StateCube,
    slices: &Slices,
    exec: Exec,
) -> Result<BTreeMap<Bidegree, AbelianGroup>> {
    // d^{i,j} for every slice, largest first so parallel workers stay busy
    let mut jobs = slices.bidegrees();
    jobs.sort_by_key(|&(i, j)| std::cmp::Reverse(slices.dim(i, j) * slices.dim(i + 1, j)));
    let results = exec.map(
        jobs,
        |(i, j)| -> std::result::Result<(Bidegree, SmithForm), ComplexError> {
            let m = cube.build_matrix(
                slices,
                DifferentialKind::KhovanovD,
                Coefficients::Integers,
                i,
                j,
            )?;
            Ok(((i, j), smith_normal_form(&m)))
        },
    );
    let mut snf: BTreeMap<Bidegree, SmithForm> = BTreeMap::new();
    for r in results {
        let (k, s) = r?;
        snf.insert(k, s);
    }
    let empty = SmithForm::default();
    let mut out = BTreeMap::new();
    for (i, j) in slices.bidegrees() {
        let incoming = snf.get(&(i - 1, j)).unwrap_or(&empty);
        let outgoing = snf.get(&(i, j)).map_or(0, SmithForm::rank);
        let g = group_from_ranks(slices.dim(i, j), incoming, outgoing)?;
        if !g.is_zero() {
            out.insert((i, j), g);
        }
    }
    Ok(out)
}

/// Betti numbers over Z/p of every slice.
pub fn betti_numbers_mod_p(
    cube: &StateCube,
    slices: &Slices,
    p: u64,
    exec: Exec,
) -> Result<BTreeMap<Bidegree, u64>> {
    let jobs = slices.bidegrees();
    let results = exec.map(jobs, |(i, j)| -> Result<(Bidegree, usize)> {
        let m = cube.build_matrix(
            slices,
            DifferentialKind::KhovanovD,
            Coefficients::ModP(p),
            i,
            j,
        )?;
        Ok(((i, j), rank_mod_p(&m, p)?))
    });
    let mut ranks: BTreeMap<Bidegree, usize> = BTreeMap::new();
    for r in results {
        let (k, v) = r?;
        ranks.insert(k, v);
    }
    let mut out = BTreeMap::new();
    for (i, j) in slices.bidegrees() {
        let used =
            ranks.get(&(i - 1, j)).copied().unwrap_or(0) + ranks.get(&(i, j)).copied().unwrap_or(0);
        let b = slices.dim(i, j) - used;
        if b > 0 {
            out.insert((i, j), b as u64);
        }
    }
    Ok(out)
}

/// Dimension over Z/p of the homology of `Φ + d`.
pub fn lee_dimension(cube: &StateCube, slices: &Slices, p: u64, exec: Exec) -> Result<u64> {
    let Some((lo, hi)) = slices.i_range() else {
        return Ok(0);
    };
    let cols: Vec<i32> = (lo..=hi).collect();
    let ranks = exec.map(cols, |i| -> Result<(i32, usize)> {
        let m = cube.build_matrix(
            slices,
            DifferentialKind::PhiPlusD,
            Coefficients::ModP(p),
            i,
            0,
        )?;
        Ok((i, rank_mod_p(&m, p)?))
    });
    let mut rank: BTreeMap<i32, usize> = BTreeMap::new();
    for r in ranks {
        let (i, v) = r?;
        rank.insert(i, v);
    }
    let total = slices.total();
    let used: usize = rank.values().sum::<usize>() * 2;
    Ok((total - used) as u64)
}

/// Full homology table of a diagram.
pub fn compute_table(d: &LinkDiagram, opts: &ComputeOptions) -> Result<HomologyTable> {
    compute_table_with_meta(d, LinkMetadata::default(), opts)
}

pub fn compute_table_with_meta(
    d: &LinkDiagram,
    meta: LinkMetadata,
    opts: &ComputeOptions,
) -> Result<HomologyTable> {
    let cube = StateCube::with_exec(d, opts.cap, opts.exec)?;
    let slices = cube.slices(false);
    let groups = integral_homology(&cube, &slices, opts.exec)?;
    let reduced = if opts.reduced {
        let r = cube.slices(true);
        Some(integral_homology(&cube, &r, opts.exec)?)
    } else {
        None
    };
    let mut mod_p = BTreeMap::new();
    for &p in &opts.mod_primes {
        mod_p.insert(p, betti_numbers_mod_p(&cube, &slices, p, opts.exec)?);
    }
    Ok(HomologyTable {
        name: d.name().map(str::to_string),
        pd: d.to_pd(),
        n_crossings: d.n_crossings(),
        components: d.n_components(),
        linking: d.linking_numbers(),
        meta,
        groups,
        reduced,
        mod_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LaurentPoly;

    fn run(pd: &str, reduced: bool) -> HomologyTable {
        let d = LinkDiagram::parse_pd(pd).unwrap();
        compute_table(
            &d,
            &ComputeOptions {
                reduced,
                mod_primes: vec![2, 3],
                ..Default::default()
            },
        )
        .unwrap()
    }

    fn listing(t: &HomologyTable) -> Vec<(i32, i32, String)> {
        t.groups
            .iter()
            .map(|(&(i, j), g)| (i, j, g.to_string()))
            .collect()
    }

    #[test]
    fn unknot() {
        let t = run("unlink 1", true);
        assert_eq!(listing(&t), vec![(0, -1, "Z".into()), (0, 1, "Z".into())]);
        let r = t.reduced.as_ref().unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[&(0, 0)], AbelianGroup::free(1));
    }

    #[test]
    fn trefoil() {
        let t = run("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]", true);
        assert_eq!(
            listing(&t),
            vec![
                (0, 1, "Z".into()),
                (0, 3, "Z".into()),
                (2, 5, "Z".into()),
                (3, 7, "Z2".into()),
                (3, 9, "Z".into())
            ]
        );
        assert_eq!(
            t.jones().unwrap(),
            LaurentPoly::from_terms([(2, 1), (6, 1), (8, -1)])
        );
        // universal coefficients: Z2 at (3,7) contributes at (3,7) and (2,7)
        let m2 = &t.mod_p[&2];
        assert_eq!(m2.get(&(2, 7)), Some(&1));
        assert_eq!(m2.get(&(3, 7)), Some(&1));
        assert_eq!(t.mod_p[&3].get(&(3, 7)), None);
    }

    #[test]
    fn lee_dimension_is_two_to_the_components() {
        for (pd, m) in [
            ("unlink 1", 1),
            ("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]", 1),
            ("X[3,2,4,1] X[2,3,1,4]", 2),
        ] {
            let d = LinkDiagram::parse_pd(pd).unwrap();
            let cube = StateCube::new(&d, DEFAULT_CAP).unwrap();
            let s = cube.slices(false);
            assert_eq!(
                lee_dimension(&cube, &s, 3, Exec::Sequential).unwrap(),
                1 << m,
                "{pd}"
            );
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let d = LinkDiagram::parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]").unwrap();
        let a = compute_table(
            &d,
            &ComputeOptions {
                exec: Exec::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        let b = compute_table(
            &d,
            &ComputeOptions {
                exec: Exec::Parallel,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
