//! Polynomial invariants and thinness classifications read off a homology table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diagram::LinkMetadata;
use crate::error::InvariantError;
use crate::linalg::AbelianGroup;
use crate::poly::{BigradedPoly, LaurentPoly, TorsionPoly};

pub type Bidegree = (i32, i32);

/// Khovanov homology of one diagram, with optional reduced and mod-p tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyTable {
    pub name: Option<String>,
    pub pd: String,
    pub n_crossings: usize,
    pub components: usize,
    /// Pairwise linking numbers; empty for knots or when unknown.
    pub linking: Vec<Vec<i32>>,
    pub meta: LinkMetadata,
    /// Nonzero groups only.
    pub groups: BTreeMap<Bidegree, AbelianGroup>,
    /// Reduced homology at `(i, j̃)`, nonzero groups only.
    pub reduced: Option<BTreeMap<Bidegree, AbelianGroup>>,
    /// Betti numbers over Z/p, nonzero entries only.
    pub mod_p: BTreeMap<u64, BTreeMap<Bidegree, u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HClass {
    HSlim,
    HThin,
    HThick,
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HClass::HSlim => "H-slim",
            HClass::HThin => "H-thin",
            HClass::HThick => "H-thick",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TClass {
    TThin,
    WtThin,
    TRich,
    TThick,
}

impl fmt::Display for TClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TClass::TThin => "T-thin",
            TClass::WtThin => "WT-thin",
            TClass::TRich => "T-rich",
            TClass::TThick => "T-thick",
        })
    }
}

/// Result of writing `Kh` as the exceptional block plus knight-move pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnightMove {
    pub s: i32,
    /// `g^{i,j}`, nonzero entries only.
    pub g: BTreeMap<Bidegree, u64>,
    /// `Kh'`, whose `t^i q^{j-s+1}` coefficient is `g^{i,j}`.
    pub kh_prime: BigradedPoly,
    /// Coefficients `a_i` of `Kh' = Σ a_i (tq²)^i` when `Kh'` has that form.
    pub a: Option<BTreeMap<i32, u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnightMoveFailure {
    pub reason: String,
    /// Every `s` that admitted a decomposition; more than one means ambiguity.
    pub candidates: Vec<i32>,
}

impl fmt::Display for KnightMoveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reason)?;
        if !self.candidates.is_empty() {
            let c: Vec<String> = self.candidates.iter().map(i32::to_string).collect();
            write!(f, " (candidates s = {})", c.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionClassification {
    pub class: TClass,
    /// Why the table is T-thick; empty otherwise.
    pub reason: String,
    /// Bidegrees where `T_2^{i,j}` exceeds `g^{i-1,j-2}`.
    pub excess: Vec<Bidegree>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinnessReport {
    pub diagonal_support: BTreeSet<i32>,
    pub h_class: HClass,
    pub mod_p_thin: BTreeMap<u64, bool>,
    pub t_class: TClass,
    pub t_reason: String,
    pub excess: Vec<Bidegree>,
    pub s_value: Option<i32>,
    pub knight_poly: Option<BigradedPoly>,
    pub knight_failure: Option<String>,
    /// The torsion taxonomy is only meant for knots and H-thin links.
    pub in_scope: bool,
}

impl ThinnessReport {
    pub fn verdict(&self) -> String {
        let mut s = format!("{}, {}", self.h_class, self.t_class);
        if !self.in_scope {
            s.push_str(" (torsion classification not applicable: H-thick link)");
        }
        s
    }
}

fn diagonal(b: Bidegree) -> i32 {
    2 * b.0 - b.1
}

/// Smallest `u` with `support ⊆ {u, u+2}`, if any.
fn adjacent_pair(support: &BTreeSet<i32>) -> Option<i32> {
    let lo = *support.iter().next()?;
    let hi = *support.iter().next_back()?;
    (hi - lo <= 2).then_some(lo)
}

impl HomologyTable {
    pub fn group(&self, i: i32, j: i32) -> AbelianGroup {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn rank(&self, i: i32, j: i32) -> u64 {
        self.groups.get(&(i, j)).map_or(0, |g| g.rank)
    }

    pub fn total_rank(&self) -> u64 {
        self.groups.values().map(|g| g.rank).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.values().any(AbelianGroup::has_torsion)
    }

    /// Prime powers occurring as torsion orders anywhere in the table.
    pub fn torsion_orders(&self) -> BTreeSet<u64> {
        self.groups
            .values()
            .flat_map(|g| g.torsion.keys().copied())
            .collect()
    }

    /// `T_p^{i,j} = Σ_k t_{p^k}^{i,j}`.
    pub fn t_p(&self, p: u64, i: i32, j: i32) -> u64 {
        self.groups.get(&(i, j)).map_or(0, |g| g.p_summands(p))
    }

    pub fn khovanov_polynomial(&self) -> BigradedPoly {
        let mut p = BigradedPoly::zero();
        for (&(i, j), g) in &self.groups {
            p.add_term(i, j, g.rank as i64);
        }
        p
    }

    /// `K_L(q) = Σ (−1)^i q^j h^{i,j}`.
    pub fn graded_euler(&self) -> LaurentPoly {
        self.khovanov_polynomial().at_t(-1)
    }

    /// Euler characteristic of the reduced table, if present.
    pub fn reduced_euler(&self) -> Option<LaurentPoly> {
        let r = self.reduced.as_ref()?;
        Some(LaurentPoly::from_terms(r.iter().map(|(&(i, j), g)| {
            (
                j,
                if i % 2 == 0 {
                    g.rank as i64
                } else {
                    -(g.rank as i64)
                },
            )
        })))
    }

    /// `J_L = K_L / (q + 1/q)`, checked against the reduced table when one is present.
    pub fn jones(&self) -> Result<LaurentPoly, InvariantError> {
        let j = self.graded_euler().div_unknot()?;
        if let Some(r) = self.reduced_euler() {
            if r != j {
                return Err(InvariantError::NotDivisible);
            }
        }
        Ok(j)
    }

    /// `d(L) = |J_L(√−1)|`.
    pub fn determinant(&self) -> Result<u64, InvariantError> {
        self.jones()?.abs_at_i()
    }

    pub fn torsion_polynomial(&self) -> TorsionPoly {
        let mut p = TorsionPoly::default();
        for (&(i, j), g) in &self.groups {
            for (&q, &m) in &g.torsion {
                p.add_term(i, q, j, m);
            }
        }
        p
    }

    /// Diagonals `b = 2i − j` carrying a nonzero group.
    pub fn diagonal_support(&self) -> BTreeSet<i32> {
        self.groups.keys().map(|&b| diagonal(b)).collect()
    }

    pub fn reduced_diagonal_support(&self) -> Option<BTreeSet<i32>> {
        Some(
            self.reduced
                .as_ref()?
                .keys()
                .map(|&b| diagonal(b))
                .collect(),
        )
    }

    /// H-slim when the support fits two adjacent diagonals and the upper one
    /// (smaller `b`, larger `j`) is torsion-free; H-thin without the torsion
    /// condition; H-thick otherwise.
    pub fn h_class(&self) -> HClass {
        let support = self.diagonal_support();
        let Some(lo) = adjacent_pair(&support) else {
            return HClass::HThick;
        };
        let hi = *support.iter().next_back().unwrap();
        // with one diagonal the pair can be chosen with an empty upper diagonal
        let upper = if lo == hi { lo - 2 } else { lo };
        let upper_clean = self
            .groups
            .iter()
            .filter(|(b, _)| diagonal(**b) == upper)
            .all(|(_, g)| !g.has_torsion());
        if upper_clean {
            HClass::HSlim
        } else {
            HClass::HThin
        }
    }

    /// Whether the mod-p Betti table fits two adjacent diagonals, for each
    /// computed prime.
    pub fn mod_p_thin(&self) -> BTreeMap<u64, bool> {
        self.mod_p
            .iter()
            .map(|(&p, t)| {
                let support: BTreeSet<i32> = t.keys().map(|&b| diagonal(b)).collect();
                (p, support.is_empty() || adjacent_pair(&support).is_some())
            })
            .collect()
    }

    /// Terms `q^{s−1}(1+q²) Σ_E (tq²)^{2Σ_{k∈E, l∉E} ℓ_{kl}}` over
    /// `E ⊂ {2, …, m}`; for knots just `q^{s−1} + q^{s+1}`.
    fn exceptional_block(&self, s: i32) -> BTreeMap<Bidegree, u64> {
        let m = self.components.max(1);
        let mut out: BTreeMap<Bidegree, u64> = BTreeMap::new();
        let lk = |k: usize, l: usize| {
            self.linking
                .get(k)
                .and_then(|r| r.get(l))
                .copied()
                .unwrap_or(0)
        };
        for mask in 0u64..(1 << (m - 1)) {
            // bit k-1 of mask selects component k (k ≥ 1)
            let inside = |k: usize| k >= 1 && mask >> (k - 1) & 1 == 1;
            let mut e = 0;
            for k in 0..m {
                for l in 0..m {
                    if inside(k) && !inside(l) {
                        e += lk(k, l);
                    }
                }
            }
            let e = 2 * e;
            *out.entry((e, s - 1 + 2 * e)).or_default() += 1;
            *out.entry((e, s + 1 + 2 * e)).or_default() += 1;
        }
        out
    }

    /// Tries one value of `s`: subtracts the exceptional block and peels off
    /// knight-move pairs column by column.
    fn try_knight_move(&self, s: i32) -> Option<BTreeMap<Bidegree, u64>> {
        let mut h: BTreeMap<Bidegree, i64> = self
            .groups
            .iter()
            .map(|(k, g)| (*k, g.rank as i64))
            .collect();
        h.retain(|_, v| *v != 0);
        for (k, v) in self.exceptional_block(s) {
            let e = h.entry(k).or_insert(0);
            *e -= v as i64;
            if *e < 0 {
                return None;
            }
        }
        h.retain(|_, v| *v != 0);
        let mut g: BTreeMap<Bidegree, u64> = BTreeMap::new();
        // h'^{i,j} = g^{i,j} + g^{i-1,j-4}, solved for increasing i
        for (&(i, j), &v) in &h {
            let prev = g.get(&(i - 1, j - 4)).copied().unwrap_or(0) as i64;
            let here = v - prev;
            if here < 0 {
                return None;
            }
            if here > 0 {
                g.insert((i, j), here as u64);
            }
        }
        // every g^{i,j} needs its partner h'^{i+1,j+4} and must have
        // consumed all of the earlier partner
        for (&(i, j), &v) in &g {
            if h.get(&(i + 1, j + 4)).copied().unwrap_or(0) < v as i64 {
                return None;
            }
        }
        for (&(i, j), &v) in &h {
            let needed =
                g.get(&(i, j)).copied().unwrap_or(0) + g.get(&(i - 1, j - 4)).copied().unwrap_or(0);
            if needed as i64 != v {
                return None;
            }
        }
        Some(g)
    }

    /// Knight-move decomposition with the unique admissible `s`.
    pub fn knight_move_decompose(&self) -> Result<KnightMove, KnightMoveFailure> {
        if self.components > 1 && self.linking.is_empty() {
            return Err(KnightMoveFailure {
                reason: "knight-move unchecked: linking numbers unknown".into(),
                candidates: Vec::new(),
            });
        }
        // s − 1 must carry homology at i = 0 (the E = ∅ term)
        let parity = (self.components.max(1) as i32 + 1).rem_euclid(2);
        let mut candidates: Vec<i32> = self
            .groups
            .iter()
            .filter(|((i, _), g)| *i == 0 && g.rank > 0)
            .map(|((_, j), _)| j + 1)
            .filter(|s| s.rem_euclid(2) == parity)
            .collect();
        candidates.dedup();
        let found: Vec<(i32, BTreeMap<Bidegree, u64>)> = candidates
            .into_iter()
            .filter_map(|s| self.try_knight_move(s).map(|g| (s, g)))
            .collect();
        match found.len() {
            0 => Err(KnightMoveFailure {
                reason: "no admissible s".into(),
                candidates: Vec::new(),
            }),
            1 => {
                let (s, g) = found.into_iter().next().unwrap();
                let mut kh_prime = BigradedPoly::zero();
                for (&(i, j), &v) in &g {
                    kh_prime.add_term(i, j - s + 1, v as i64);
                }
                let a = kh_prime
                    .in_tq2()
                    .then(|| kh_prime.terms().map(|((i, _), c)| (i, c as u64)).collect());
                Ok(KnightMove { s, g, kh_prime, a })
            }
            _ => Err(KnightMoveFailure {
                reason: "ambiguous s".into(),
                candidates: found.into_iter().map(|(s, _)| s).collect(),
            }),
        }
    }

    /// T-thin / WT-thin / T-rich / T-thick, comparing `T_2^{i,j}` with `g^{i−1,j−2}`.
    pub fn classify_torsion(
        &self,
        km: &Result<KnightMove, KnightMoveFailure>,
    ) -> TorsionClassification {
        let thick = |reason: String| TorsionClassification {
            class: TClass::TThick,
            reason,
            excess: Vec::new(),
        };
        let km = match km {
            Ok(k) => k,
            Err(e) => return thick(format!("knight-move decomposition failed: {e}")),
        };
        let orders = self.torsion_orders();
        if let Some(odd) = orders.iter().find(|q| !q.is_power_of_two()) {
            return thick(format!("torsion of order {odd}"));
        }
        let predicted = |i: i32, j: i32| km.g.get(&(i - 1, j - 2)).copied().unwrap_or(0);
        let mut keys: BTreeSet<Bidegree> = self
            .groups
            .iter()
            .filter(|(_, g)| g.has_torsion())
            .map(|(k, _)| *k)
            .collect();
        keys.extend(km.g.keys().map(|&(i, j)| (i + 1, j + 2)));
        let mut excess = Vec::new();
        let mut deficit = Vec::new();
        for &(i, j) in &keys {
            let t2 = self.t_p(2, i, j);
            let want = predicted(i, j);
            if t2 > want {
                excess.push((i, j));
            } else if t2 < want {
                deficit.push((i, j));
            }
        }
        if excess.is_empty() && deficit.is_empty() {
            let class = if orders.iter().all(|&q| q == 2) {
                TClass::TThin
            } else {
                TClass::WtThin
            };
            return TorsionClassification {
                class,
                reason: String::new(),
                excess,
            };
        }
        if !excess.is_empty() {
            return TorsionClassification {
                class: TClass::TRich,
                reason: String::new(),
                excess,
            };
        }
        let (i, j) = deficit[0];
        thick(format!(
            "2-torsion at ({i},{j}) is below the knight-move prediction"
        ))
    }

    pub fn thinness_report(&self) -> ThinnessReport {
        let km = self.knight_move_decompose();
        let tc = self.classify_torsion(&km);
        let h_class = self.h_class();
        ThinnessReport {
            diagonal_support: self.diagonal_support(),
            h_class,
            mod_p_thin: self.mod_p_thin(),
            t_class: tc.class,
            t_reason: tc.reason,
            excess: tc.excess,
            s_value: km.as_ref().ok().map(|k| k.s),
            knight_poly: km.as_ref().ok().map(|k| k.kh_prime.clone()),
            knight_failure: km.as_ref().err().map(ToString::to_string),
            in_scope: self.components <= 1 || h_class != HClass::HThick,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(entries: &[(i32, i32, u64, &[(u64, u64)])]) -> HomologyTable {
        let mut t = HomologyTable {
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

    fn trefoil() -> HomologyTable {
        table(&[
            (0, 1, 1, &[]),
            (0, 3, 1, &[]),
            (2, 5, 1, &[]),
            (3, 7, 0, &[(2, 1)]),
            (3, 9, 1, &[]),
        ])
    }

    #[test]
    fn unknot_polynomials() {
        let t = table(&[(0, -1, 1, &[]), (0, 1, 1, &[])]);
        assert_eq!(t.graded_euler(), LaurentPoly::unknot());
        assert_eq!(t.jones().unwrap(), LaurentPoly::one());
        assert_eq!(t.determinant().unwrap(), 1);
        assert_eq!(t.h_class(), HClass::HSlim);
        let km = t.knight_move_decompose().unwrap();
        assert_eq!(km.s, 0);
        assert!(km.kh_prime.is_zero());
        assert_eq!(t.classify_torsion(&Ok(km)).class, TClass::TThin);
        assert!(HomologyTable::default().khovanov_polynomial().is_zero());
    }

    #[test]
    fn trefoil_invariants() {
        let t = trefoil();
        assert_eq!(
            t.jones().unwrap(),
            LaurentPoly::from_terms([(2, 1), (6, 1), (8, -1)])
        );
        assert_eq!(t.determinant().unwrap(), 3);
        assert_eq!(t.diagonal_support(), BTreeSet::from([-3, -1]));
        assert_eq!(t.h_class(), HClass::HSlim);
        let km = t.knight_move_decompose().unwrap();
        assert_eq!(km.s, 2);
        assert_eq!(km.g, BTreeMap::from([((2, 5), 1)]));
        assert_eq!(km.a, Some(BTreeMap::from([(2, 1)])));
        let tc = t.classify_torsion(&Ok(km));
        assert_eq!(tc.class, TClass::TThin);
        let kt = t.torsion_polynomial();
        assert_eq!(kt.to_string(), "t^3Q2^7");
    }

    #[test]
    fn torsion_classes() {
        let mut t = trefoil();
        t.groups.get_mut(&(3, 7)).unwrap().torsion = BTreeMap::from([(4, 1)]);
        let km = t.knight_move_decompose();
        assert_eq!(t.classify_torsion(&km).class, TClass::WtThin);
        t.groups.get_mut(&(3, 7)).unwrap().torsion = BTreeMap::from([(2, 2)]);
        let tc = t.classify_torsion(&km);
        assert_eq!(tc.class, TClass::TRich);
        assert_eq!(tc.excess, vec![(3, 7)]);
        t.groups.get_mut(&(3, 7)).unwrap().torsion = BTreeMap::from([(3, 1)]);
        assert_eq!(t.classify_torsion(&km).class, TClass::TThick);
        t.groups.remove(&(3, 7));
        assert_eq!(t.classify_torsion(&km).class, TClass::TThick);
    }

    #[test]
    fn broken_table_fails_knight_move() {
        let mut t = trefoil();
        t.groups.get_mut(&(3, 9)).unwrap().rank = 2;
        assert!(t.knight_move_decompose().is_err());
        assert_eq!(
            t.classify_torsion(&t.knight_move_decompose()).class,
            TClass::TThick
        );
    }

    #[test]
    fn hopf_link_block() {
        // positive Hopf link: Kh = 1 + q^2 + t^2 q^4 + t^2 q^6, lk = 1
        let mut t = table(&[
            (0, 0, 1, &[]),
            (0, 2, 1, &[]),
            (2, 4, 1, &[]),
            (2, 6, 1, &[]),
        ]);
        t.components = 2;
        t.linking = vec![vec![0, 1], vec![1, 0]];
        let km = t.knight_move_decompose().unwrap();
        assert_eq!(km.s, 1);
        assert!(km.kh_prime.is_zero());
        assert_eq!(
            t.jones().unwrap(),
            LaurentPoly::from_terms([(1, 1), (5, 1)])
        );
        assert_eq!(t.determinant().unwrap(), 2);
    }

    #[test]
    fn thick_support() {
        let t = table(&[(0, 1, 1, &[]), (0, 3, 1, &[]), (1, 1, 1, &[])]);
        assert_eq!(t.h_class(), HClass::HThick);
        let mut t2 = trefoil();
        t2.groups.get_mut(&(3, 9)).unwrap().add_torsion(2, 1);
        assert_eq!(t2.h_class(), HClass::HThin);
    }
}
