//! Enhanced Kauffman states, their bigradings, and the differentials acting on them.
//!
//! A generator is a pair of bitmasks: the marker word of its state (bit `k`
//! set when crossing `k` carries a negative marker) and its circle-sign word
//! (bit `c` set when circle `c` is negative). Circles are numbered as in
//! [`LinkDiagram::resolve`]. Matrices have one row per target generator and
//! one column per source generator.

use std::collections::BTreeMap;

use crate::diagram::{LinkDiagram, Resolution, State};
use crate::error::ComplexError;
use crate::linalg::{is_prime, SparseIntMatrix};
use crate::par::Exec;

pub const DEFAULT_CAP: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub markers: u64,
    pub signs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnhancedState {
    pub state: State,
    /// Bit `c` set when circle `c` carries a negative sign.
    pub signs: u64,
    pub n_circles: u32,
    pub tau: i32,
    pub i_grade: i32,
    pub j_grade: i32,
}

impl EnhancedState {
    /// `'+'`/`'-'` word of the circle signs.
    pub fn sign_word(&self) -> String {
        (0..self.n_circles)
            .map(|c| if self.signs >> c & 1 == 1 { '-' } else { '+' })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainSlice {
    pub i: i32,
    pub j: i32,
    /// Sorted by marker word, then sign word.
    pub generators: Vec<Generator>,
}

impl ChainSlice {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, g: Generator) -> Option<usize> {
        self.generators.binary_search(&g).ok()
    }
}

/// Which map to materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DifferentialKind {
    KhovanovD,
    /// Sum over the ways of turning one positive circle negative; `(i, j+2)`.
    Nu,
    /// Turns a negative base-point circle positive; `(i, j-2)`.
    X,
    /// Lee's deformation term; `(i+1, j+4)`.
    LeePhi,
    /// `Φ + d` in the basis `a = 1 + x`, `b = x - 1`; graded by `i` only.
    PhiPlusD,
}

impl DifferentialKind {
    /// Bidegree shift; `None` for the `i`-graded [`DifferentialKind::PhiPlusD`].
    pub fn shift(self) -> Option<(i32, i32)> {
        match self {
            DifferentialKind::KhovanovD => Some((1, 0)),
            DifferentialKind::Nu => Some((0, 2)),
            DifferentialKind::X => Some((0, -2)),
            DifferentialKind::LeePhi => Some((1, 4)),
            DifferentialKind::PhiPlusD => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    ModP(u64),
}

impl Coefficients {
    fn check(self, kind: DifferentialKind) -> Result<(), ComplexError> {
        if let Coefficients::ModP(p) = self {
            if !is_prime(p) {
                return Err(ComplexError::InvalidRing(format!("{p} is not a prime")));
            }
        }
        let lee = matches!(kind, DifferentialKind::LeePhi | DifferentialKind::PhiPlusD);
        match self {
            Coefficients::ModP(p) if lee && p == 2 => Err(ComplexError::InvalidRing(
                "Lee's differential needs an odd prime, not 2".into(),
            )),
            Coefficients::Integers if lee => Err(ComplexError::InvalidRing(
                "Lee's differential needs coefficients mod an odd prime".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// All smoothings of a diagram with the data needed for gradings.
#[derive(Clone, Debug)]
pub struct StateCube {
    n: usize,
    writhe: i32,
    base_edge: usize,
    slots: Vec<[usize; 4]>,
    resolutions: Vec<Resolution>,
    total: u128,
}

impl StateCube {
    pub fn new(d: &LinkDiagram, cap: u64) -> Result<StateCube, ComplexError> {
        Self::with_exec(d, cap, Exec::Sequential)
    }

    pub fn with_exec(d: &LinkDiagram, cap: u64, exec: Exec) -> Result<StateCube, ComplexError> {
        let n = d.n_crossings();
        if n > 63 {
            return Err(ComplexError::TooManyCrossings(n));
        }
        // every state has at least one circle
        let lower = 2u128 << n;
        if lower > cap as u128 {
            return Err(ComplexError::CapExceeded {
                generators: lower,
                cap,
            });
        }
        let states: Vec<u64> = (0..1u64 << n).collect();
        let resolutions = exec.map(states, |m| d.resolve(State::new(m, n)));
        let mut total = 0u128;
        for r in &resolutions {
            if r.n_circles > 63 {
                return Err(ComplexError::TooManyCircles(r.n_circles));
            }
            total += 1u128 << r.n_circles;
        }
        if total > cap as u128 {
            return Err(ComplexError::CapExceeded {
                generators: total,
                cap,
            });
        }
        Ok(StateCube {
            n,
            writhe: d.writhe(),
            base_edge: d.base_edge(),
            slots: (0..n).map(|k| d.slots(k)).collect(),
            resolutions,
            total,
        })
    }

    pub fn n_crossings(&self) -> usize {
        self.n
    }

    /// `Σ_s 2^{|s|}`.
    pub fn total_generators(&self) -> u128 {
        self.total
    }

    pub fn n_circles(&self, markers: u64) -> usize {
        self.resolutions[markers as usize].n_circles
    }

    pub fn base_circle(&self, markers: u64) -> usize {
        self.resolutions[markers as usize].circle_of_edge[self.base_edge] as usize
    }

    pub fn i_grade(&self, markers: u64) -> i32 {
        // (w - σ)/2 with σ = n - 2·#negative
        (self.writhe - self.n as i32) / 2 + markers.count_ones() as i32
    }

    pub fn j_grade(&self, g: Generator) -> i32 {
        let c = self.n_circles(g.markers) as i32;
        let tau = c - 2 * g.signs.count_ones() as i32;
        let sigma = self.n as i32 - 2 * g.markers.count_ones() as i32;
        (3 * self.writhe - sigma - 2 * tau) / 2
    }

    pub fn enhanced(&self, g: Generator) -> EnhancedState {
        let c = self.n_circles(g.markers) as u32;
        EnhancedState {
            state: State::new(g.markers, self.n),
            signs: g.signs,
            n_circles: c,
            tau: c as i32 - 2 * g.signs.count_ones() as i32,
            i_grade: self.i_grade(g.markers),
            j_grade: self.j_grade(g),
        }
    }

    /// Effect on circles of turning the positive marker at crossing `k` negative.
    fn transition(&self, markers: u64, k: usize) -> Transition {
        let src = &self.resolutions[markers as usize];
        let target = markers | 1 << k;
        let dst = &self.resolutions[target as usize];
        let [s0, s1, s2, _] = self.slots[k];
        let mut map = vec![0u8; src.n_circles];
        let mut seen = vec![false; src.n_circles];
        for (e, &c) in src.circle_of_edge.iter().enumerate() {
            if !seen[c as usize] {
                seen[c as usize] = true;
                map[c as usize] = dst.circle_of_edge[e];
            }
        }
        let (a, b) = (src.circle_of_edge[s0], src.circle_of_edge[s2]);
        let shape = if a != b {
            Shape::Join {
                a,
                b,
                into: dst.circle_of_edge[s0],
            }
        } else {
            Shape::Split {
                from: a,
                left: dst.circle_of_edge[s0],
                right: dst.circle_of_edge[s1],
            }
        };
        Transition { target, map, shape }
    }

    /// Every enhanced state, grouped into slices. With `reduced` only the
    /// states whose base-point circle is positive are kept, at `j + 1`.
    pub fn slices(&self, reduced: bool) -> Slices {
        let mut map: BTreeMap<(i32, i32), ChainSlice> = BTreeMap::new();
        for markers in 0..(1u64 << self.n) {
            let i = self.i_grade(markers);
            let c = self.n_circles(markers);
            let base = self.base_circle(markers);
            for signs in 0..(1u64 << c) {
                if reduced && signs >> base & 1 == 1 {
                    continue;
                }
                let g = Generator { markers, signs };
                let j = self.j_grade(g) + reduced as i32;
                map.entry((i, j))
                    .or_insert_with(|| ChainSlice {
                        i,
                        j,
                        generators: Vec::new(),
                    })
                    .generators
                    .push(g);
            }
        }
        // states and signs were visited in increasing order, so every slice is sorted
        Slices {
            reduced,
            slices: map,
        }
    }

    /// Matrix of `kind` from slice `(i, j)` of `slices` to its target slice.
    /// For [`DifferentialKind::PhiPlusD`] `j` is ignored and the map runs
    /// between all generators of homological degrees `i` and `i + 1`.
    pub fn build_matrix(
        &self,
        slices: &Slices,
        kind: DifferentialKind,
        coefficients: Coefficients,
        i: i32,
        j: i32,
    ) -> Result<SparseIntMatrix, ComplexError> {
        coefficients.check(kind)?;
        let empty = ChainSlice::default();
        let (source, target) = match kind.shift() {
            Some((di, dj)) => (
                std::borrow::Cow::Borrowed(slices.get(i, j).unwrap_or(&empty)),
                std::borrow::Cow::Borrowed(slices.get(i + di, j + dj).unwrap_or(&empty)),
            ),
            None => (
                std::borrow::Cow::Owned(slices.column(i)),
                std::borrow::Cow::Owned(slices.column(i + 1)),
            ),
        };
        let mut trip: Vec<(usize, usize, i64)> = Vec::new();
        let emit = |col: usize, g: Generator, v: i64, trip: &mut Vec<(usize, usize, i64)>| {
            let row = target
                .index_of(g)
                .unwrap_or_else(|| panic!("image {g:?} of {kind:?} missing from target slice"));
            trip.push((row, col, v));
        };
        let gens = &source.generators;
        let mut start = 0;
        while start < gens.len() {
            let markers = gens[start].markers;
            let end = start
                + gens[start..]
                    .iter()
                    .take_while(|g| g.markers == markers)
                    .count();
            match kind {
                DifferentialKind::Nu => {
                    let c = self.n_circles(markers);
                    for (col, g) in gens.iter().enumerate().take(end).skip(start) {
                        for bit in 0..c {
                            if g.signs >> bit & 1 == 0 {
                                emit(
                                    col,
                                    Generator {
                                        markers,
                                        signs: g.signs | 1 << bit,
                                    },
                                    1,
                                    &mut trip,
                                );
                            }
                        }
                    }
                }
                DifferentialKind::X => {
                    let base = self.base_circle(markers);
                    for (col, g) in gens.iter().enumerate().take(end).skip(start) {
                        if g.signs >> base & 1 == 1 {
                            emit(
                                col,
                                Generator {
                                    markers,
                                    signs: g.signs & !(1 << base),
                                },
                                1,
                                &mut trip,
                            );
                        }
                    }
                }
                _ => {
                    for k in 0..self.n {
                        if markers >> k & 1 == 1 {
                            continue;
                        }
                        let t = self.transition(markers, k);
                        let sign: i64 = if (markers >> (k + 1)).count_ones() % 2 == 0 {
                            1
                        } else {
                            -1
                        };
                        for (col, g) in gens.iter().enumerate().take(end).skip(start) {
                            t.apply(kind, g.signs, |signs, v| {
                                emit(
                                    col,
                                    Generator {
                                        markers: t.target,
                                        signs,
                                    },
                                    sign * v,
                                    &mut trip,
                                )
                            });
                        }
                    }
                }
            }
            start = end;
        }
        let m = SparseIntMatrix::from_triplets(target.dim(), source.dim(), trip)
            .expect("indices in range");
        Ok(match coefficients {
            Coefficients::Integers => m,
            Coefficients::ModP(p) => m.reduce_mod(p),
        })
    }
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Join { a: u8, b: u8, into: u8 },
    Split { from: u8, left: u8, right: u8 },
}

struct Transition {
    target: u64,
    /// Image of every source circle; both joined circles map to the merged
    /// one, a split circle maps to one of its halves.
    map: Vec<u8>,
    shape: Shape,
}

impl Transition {
    /// Calls `out(target_signs, coefficient)` for every term of the image.
    fn apply(&self, kind: DifferentialKind, signs: u64, mut out: impl FnMut(u64, i64)) {
        let bit = |c: u8| signs >> c & 1 == 1;
        let mut rest = 0u64;
        for (c, &img) in self.map.iter().enumerate() {
            if signs >> c & 1 == 1 {
                rest |= 1 << img;
            }
        }
        match self.shape {
            Shape::Join { a, b, into } => {
                let rest = rest & !(1 << into);
                let neg = 1u64 << into;
                match kind {
                    DifferentialKind::KhovanovD => match (bit(a), bit(b)) {
                        (true, true) => out(rest | neg, 1),
                        (false, true) | (true, false) => out(rest, 1),
                        (false, false) => {}
                    },
                    DifferentialKind::LeePhi => {
                        if !bit(a) && !bit(b) {
                            out(rest | neg, 1)
                        }
                    }
                    DifferentialKind::PhiPlusD => match (bit(a), bit(b)) {
                        (false, false) => out(rest, 2),
                        (true, true) => out(rest | neg, -2),
                        _ => {}
                    },
                    _ => unreachable!(),
                }
            }
            Shape::Split { from, left, right } => {
                let rest = rest & !(1 << left) & !(1 << right);
                let (l, r) = (1u64 << left, 1u64 << right);
                match kind {
                    DifferentialKind::KhovanovD => {
                        if bit(from) {
                            out(rest | l, 1);
                            out(rest | r, 1);
                        } else {
                            out(rest, 1);
                        }
                    }
                    DifferentialKind::LeePhi => {
                        if !bit(from) {
                            out(rest | l | r, 1)
                        }
                    }
                    DifferentialKind::PhiPlusD => {
                        if bit(from) {
                            out(rest | l | r, 1)
                        } else {
                            out(rest, 1)
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
}

/// The slices of a (possibly reduced) complex, keyed by `(i, j)`.
#[derive(Clone, Debug, Default)]
pub struct Slices {
    pub reduced: bool,
    pub slices: BTreeMap<(i32, i32), ChainSlice>,
}

impl Slices {
    pub fn get(&self, i: i32, j: i32) -> Option<&ChainSlice> {
        self.slices.get(&(i, j))
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.get(i, j).map_or(0, ChainSlice::dim)
    }

    pub fn bidegrees(&self) -> Vec<(i32, i32)> {
        self.slices.keys().copied().collect()
    }

    pub fn total(&self) -> usize {
        self.slices.values().map(ChainSlice::dim).sum()
    }

    /// All generators of homological degree `i`, in generator order.
    pub fn column(&self, i: i32) -> ChainSlice {
        let mut generators: Vec<Generator> = self
            .slices
            .range((i, i32::MIN)..=(i, i32::MAX))
            .flat_map(|(_, s)| s.generators.iter().copied())
            .collect();
        generators.sort_unstable();
        ChainSlice {
            i,
            j: 0,
            generators,
        }
    }

    pub fn i_range(&self) -> Option<(i32, i32)> {
        let lo = self.slices.keys().next()?.0;
        let hi = self.slices.keys().next_back()?.0;
        Some((lo, hi))
    }
}

/// Slices of the full complex.
pub fn enumerate_slices(d: &LinkDiagram, cap: u64) -> Result<Slices, ComplexError> {
    Ok(StateCube::new(d, cap)?.slices(false))
}

/// Slices of the reduced complex for the diagram's base point.
pub fn reduced_slices(d: &LinkDiagram, cap: u64) -> Result<Slices, ComplexError> {
    Ok(StateCube::new(d, cap)?.slices(true))
}

/// Incidence number of two enhanced states straight from the definition:
/// the markers differ at one crossing only, positive in `s1`; circles away
/// from that crossing keep their signs; the changed circles follow the
/// allowed sign patterns. Returns `(-1)^t` with `t` the number of negative
/// markers of `s1` at later crossings, or 0.
pub fn incidence(d: &LinkDiagram, s1: &EnhancedState, s2: &EnhancedState) -> i32 {
    let diff = s1.state.markers ^ s2.state.markers;
    if diff.count_ones() != 1 || s1.state.markers & diff != 0 {
        return 0;
    }
    let k = diff.trailing_zeros() as usize;
    let r1 = d.resolve(s1.state);
    let r2 = d.resolve(s2.state);
    let touched: Vec<usize> = d.slots(k).to_vec();
    // circles as edge sets
    let circles = |r: &Resolution| -> Vec<Vec<usize>> {
        (0..r.n_circles).map(|c| r.circle_edges(c)).collect()
    };
    let c1 = circles(&r1);
    let c2 = circles(&r2);
    let is_touched = |edges: &Vec<usize>| edges.iter().any(|e| touched.contains(e));
    let untouched1: Vec<(&Vec<usize>, bool)> = c1
        .iter()
        .enumerate()
        .filter(|(_, e)| !is_touched(e))
        .map(|(c, e)| (e, s1.signs >> c & 1 == 1))
        .collect();
    let untouched2: Vec<(&Vec<usize>, bool)> = c2
        .iter()
        .enumerate()
        .filter(|(_, e)| !is_touched(e))
        .map(|(c, e)| (e, s2.signs >> c & 1 == 1))
        .collect();
    if untouched1 != untouched2 {
        return 0;
    }
    let changed1: Vec<bool> = c1
        .iter()
        .enumerate()
        .filter(|(_, e)| is_touched(e))
        .map(|(c, _)| s1.signs >> c & 1 == 1)
        .collect();
    let changed2: Vec<bool> = c2
        .iter()
        .enumerate()
        .filter(|(_, e)| is_touched(e))
        .map(|(c, _)| s2.signs >> c & 1 == 1)
        .collect();
    let neg1 = changed1.iter().filter(|&&n| n).count();
    let neg2 = changed2.iter().filter(|&&n| n).count();
    let allowed = match (changed1.len(), changed2.len()) {
        // join: (−,−) → −, mixed → +
        (2, 1) => (neg1 == 2 && neg2 == 1) || (neg1 == 1 && neg2 == 0),
        // split: + → (+,+), − → one of each
        (1, 2) => (neg1 == 0 && neg2 == 0) || (neg1 == 1 && neg2 == 1),
        _ => false,
    };
    if !allowed {
        return 0;
    }
    let t = (s1.state.markers >> (k + 1)).count_ones();
    if t.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
