//! Independent oracles: the Jones polynomial by skein recursion on descending
//! diagrams, and homology from dense matrices of definition-based incidence
//! numbers reduced by a textbook Smith normal form.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::{incidence, EnhancedState};
use crate::diagram::{EdgeLabel, LinkDiagram, State};
use crate::error::ComplexError;
use crate::invariants::Bidegree;
use crate::linalg::AbelianGroup;
use crate::poly::LaurentPoly;

/// Largest diagram the skein oracle accepts.
pub const SKEIN_MAX_CROSSINGS: usize = 20;
/// Largest diagram the dense homology oracle accepts.
pub const DENSE_MAX_CROSSINGS: usize = 8;

#[derive(Clone, Debug)]
struct SkeinCrossing {
    e: [EdgeLabel; 4],
    positive: bool,
}

#[derive(Clone, Debug)]
struct SkeinDiagram {
    crossings: Vec<SkeinCrossing>,
    loops: u32,
}

impl SkeinDiagram {
    /// The first crossing met from below when every component is walked from
    /// its smallest edge, components taken by smallest edge; otherwise the
    /// number of components of the (descending) diagram.
    fn first_bad(&self) -> Result<usize, u32> {
        // incoming edge -> (crossing, passes over, outgoing edge)
        let mut next: HashMap<EdgeLabel, (usize, bool, EdgeLabel)> = HashMap::new();
        for (k, c) in self.crossings.iter().enumerate() {
            let [a, b, _, d] = c.e;
            next.insert(a, (k, false, c.e[2]));
            if c.positive {
                next.insert(d, (k, true, b));
            } else {
                next.insert(b, (k, true, d));
            }
        }
        let mut labels: Vec<EdgeLabel> = next.keys().copied().collect();
        labels.sort_unstable();
        let mut walked: HashSet<EdgeLabel> = HashSet::new();
        let mut met = vec![false; self.crossings.len()];
        let mut components = 0;
        for start in labels {
            if walked.contains(&start) {
                continue;
            }
            components += 1;
            let mut e = start;
            loop {
                walked.insert(e);
                let (k, over, out) = next[&e];
                if !met[k] {
                    if !over {
                        return Ok(k);
                    }
                    met[k] = true;
                }
                e = out;
                if e == start {
                    break;
                }
            }
        }
        Err(components)
    }

    fn switched(&self, k: usize) -> SkeinDiagram {
        let mut out = self.clone();
        let c = &mut out.crossings[k];
        let [a, b, cc, d] = c.e;
        c.e = if c.positive {
            [d, a, b, cc]
        } else {
            [b, cc, d, a]
        };
        c.positive = !c.positive;
        out
    }

    /// Oriented smoothing at crossing `k`.
    fn smoothed(&self, k: usize) -> SkeinDiagram {
        let c = &self.crossings[k];
        let [a, b, cc, d] = c.e;
        // incoming edges joined to the adjacent outgoing ones
        let pairs = if c.positive {
            [(a, b), (d, cc)]
        } else {
            [(a, d), (b, cc)]
        };
        let mut rep: HashMap<EdgeLabel, EdgeLabel> = c.e.iter().map(|&x| (x, x)).collect();
        let find = |rep: &HashMap<EdgeLabel, EdgeLabel>, mut x: EdgeLabel| {
            while rep[&x] != x {
                x = rep[&x];
            }
            x
        };
        for (x, y) in pairs {
            let (rx, ry) = (find(&rep, x), find(&rep, y));
            if rx != ry {
                rep.insert(rx.max(ry), rx.min(ry));
            }
        }
        let crossings: Vec<SkeinCrossing> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != k)
            .map(|(_, x)| SkeinCrossing {
                e: x.e.map(|l| {
                    if rep.contains_key(&l) {
                        find(&rep, l)
                    } else {
                        l
                    }
                }),
                positive: x.positive,
            })
            .collect();
        let roots: HashSet<EdgeLabel> = c.e.iter().map(|&x| find(&rep, x)).collect();
        let new_loops = roots
            .iter()
            .filter(|&&r| !crossings.iter().any(|x| x.e.contains(&r)))
            .count() as u32;
        SkeinDiagram {
            crossings,
            loops: self.loops + new_loops,
        }
    }

    fn evaluate(&self) -> LaurentPoly {
        match self.first_bad() {
            Err(components) => LaurentPoly::unknot().pow(components + self.loops),
            Ok(k) => {
                let switched = self.switched(k).evaluate();
                let smoothed = self.smoothed(k).evaluate();
                if self.crossings[k].positive {
                    // K(L+) = q^4 K(L-) - (q^3 - q) K(L0)
                    &switched.shift(4) - &(&smoothed.shift(3) - &smoothed.shift(1))
                } else {
                    // K(L-) = q^-4 K(L+) + (q^-1 - q^-3) K(L0)
                    &switched.shift(-4) + &(&smoothed.shift(-1) - &smoothed.shift(-3))
                }
            }
        }
    }
}

/// `K_L(q)`, normalized to `q + 1/q` on the unknot, computed by skein
/// recursion without touching the state cube.
pub fn oracle_jones(d: &LinkDiagram) -> Result<LaurentPoly, ComplexError> {
    if d.n_crossings() > SKEIN_MAX_CROSSINGS {
        return Err(ComplexError::TooManyCrossings(d.n_crossings()));
    }
    let sd = SkeinDiagram {
        crossings: d
            .crossings()
            .iter()
            .map(|c| SkeinCrossing {
                e: c.edges,
                positive: c.over_from_last,
            })
            .collect(),
        loops: d.loop_labels().len() as u32,
    };
    Ok(sd.evaluate())
}

/// Invariant factors (all nonzero diagonal entries) of a dense integer
/// matrix, by the textbook pivot-and-divide algorithm.
pub fn dense_smith(mut a: Vec<Vec<BigInt>>) -> Vec<BigUint> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, v) in row.iter().enumerate().skip(t) {
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for i in t..rows {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest; otherwise fold an offending row in
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].magnitude().clone());
    }
    diag
}

fn group_from_dense(dim: usize, factors_in: &[BigUint], rank_out: usize) -> AbelianGroup {
    let mut g = AbelianGroup::free((dim - factors_in.len() - rank_out) as u64);
    for f in factors_in.iter().filter(|f| !f.is_one()) {
        let mut n = f.to_u64().expect("torsion coefficient fits in u64");
        let mut p = 2;
        while n > 1 {
            if p * p > n {
                p = n;
            }
            if n % p == 0 {
                let mut q = 1;
                while n % p == 0 {
                    n /= p;
                    q *= p;
                }
                g.add_torsion(q, 1);
            }
            p += 1;
        }
    }
    g
}

/// Khovanov homology straight from the definition: generators enumerated
/// per bidegree, every matrix entry from [`incidence`], and dense reduction.
pub fn brute_force_homology(
    d: &LinkDiagram,
) -> Result<BTreeMap<Bidegree, AbelianGroup>, ComplexError> {
    let n = d.n_crossings();
    if n > DENSE_MAX_CROSSINGS {
        return Err(ComplexError::TooManyCrossings(n));
    }
    let w = d.writhe();
    let n_minus = d.crossings().iter().filter(|c| !c.over_from_last).count() as i32;
    let mut by_degree: BTreeMap<Bidegree, Vec<EnhancedState>> = BTreeMap::new();
    for markers in 0..1u64 << n {
        let state = State::new(markers, n);
        let circles = d.resolve(state).n_circles as u32;
        let i = markers.count_ones() as i32 - n_minus;
        for signs in 0..1u64 << circles {
            let tau = circles as i32 - 2 * signs.count_ones() as i32;
            let j = (3 * w - state.sigma() - 2 * tau) / 2;
            let s = EnhancedState {
                state,
                signs,
                n_circles: circles,
                tau,
                i_grade: i,
                j_grade: j,
            };
            by_degree.entry((i, j)).or_default().push(s);
        }
    }
    let matrix = |i: i32, j: i32| -> Vec<Vec<BigInt>> {
        let empty = Vec::new();
        let src = by_degree.get(&(i, j)).unwrap_or(&empty);
        let dst = by_degree.get(&(i + 1, j)).unwrap_or(&empty);
        dst.iter()
            .map(|t| {
                src.iter()
                    .map(|s| BigInt::from(incidence(d, s, t)))
                    .collect()
            })
            .collect()
    };
    let mut factors: BTreeMap<Bidegree, Vec<BigUint>> = BTreeMap::new();
    for &(i, j) in by_degree.keys() {
        factors.insert((i, j), dense_smith(matrix(i, j)));
    }
    let mut out = BTreeMap::new();
    for (&(i, j), gens) in &by_degree {
        let incoming = factors.get(&(i - 1, j)).cloned().unwrap_or_default();
        let g = group_from_dense(gens.len(), &incoming, factors[&(i, j)].len());
        if !g.is_zero() {
            out.insert((i, j), g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(pd: &str) -> LaurentPoly {
        oracle_jones(&LinkDiagram::parse_pd(pd).unwrap()).unwrap()
    }

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn skein_base_cases() {
        assert_eq!(k("unlink 1"), LaurentPoly::unknot());
        assert_eq!(k("unlink 2"), LaurentPoly::unknot().pow(2));
        // a one-crossing kink is still the unknot
        assert_eq!(k("X[1,1,2,2]"), LaurentPoly::unknot());
    }

    #[test]
    fn skein_trefoil_and_hopf() {
        let j = |p: LaurentPoly| p.div_unknot().unwrap();
        assert_eq!(
            j(k("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")),
            LaurentPoly::from_terms([(2, 1), (6, 1), (8, -1)])
        );
        assert_eq!(
            j(k("X[3,2,4,1] X[2,3,1,4]")),
            LaurentPoly::from_terms([(1, 1), (5, 1)])
        );
        // figure-eight is amphichiral
        let f = j(k("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"));
        assert_eq!(
            f,
            LaurentPoly::from_terms([(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)])
        );
    }

    #[test]
    fn skein_mirror_inverts_q() {
        let d = LinkDiagram::parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap();
        let a = oracle_jones(&d).unwrap();
        let b = oracle_jones(&d.mirror()).unwrap();
        assert_eq!(b, LaurentPoly::from_terms(a.terms().map(|(e, c)| (-e, c))));
    }

    #[test]
    fn dense_smith_examples() {
        let f = |rows: &[&[i64]]| -> Vec<u64> {
            dense_smith(big(rows))
                .iter()
                .map(|v| v.to_u64().unwrap())
                .collect()
        };
        assert_eq!(
            f(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]),
            vec![2, 6, 12]
        );
        assert_eq!(f(&[&[4, 6], &[2, 2]]), vec![2, 2]);
        assert_eq!(f(&[&[6, 10, 15], &[4, 6, 9]]), vec![1, 2]);
        assert_eq!(f(&[&[0, 0], &[0, 0]]), Vec::<u64>::new());
        assert!(f(&[]).is_empty());
    }

    #[test]
    fn brute_force_trefoil() {
        let d = LinkDiagram::parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap();
        let h = brute_force_homology(&d).unwrap();
        let listing: Vec<(Bidegree, String)> = h.iter().map(|(k, g)| (*k, g.to_string())).collect();
        assert_eq!(
            listing,
            vec![
                ((0, 1), "Z".into()),
                ((0, 3), "Z".into()),
                ((2, 5), "Z".into()),
                ((3, 7), "Z2".into()),
                ((3, 9), "Z".into())
            ]
        );
    }
}
