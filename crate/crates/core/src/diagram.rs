//! Oriented link diagrams given by planar-diagram (PD) codes.
//!
//! A crossing `X[a,b,c,d]` lists its four incident edges counterclockwise,
//! starting from the incoming under-strand, so the under-strand always runs
//! `a -> c`. The direction of the over-strand is recovered by tracing edge
//! orientations through the whole diagram.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::PdError;
use crate::unionfind::UnionFind;

pub type EdgeLabel = u32;

/// Separator accepted between the PD codes of a disjoint union.
pub const UNION_SEPARATOR: char = '⊔';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    /// Incident edges in PD order.
    pub edges: [EdgeLabel; 4],
    /// `true` when the over-strand runs from `edges[3]` to `edges[1]`.
    pub over_from_last: bool,
}

impl Crossing {
    pub fn sign(&self) -> Sign {
        // under-strand points "north"; an over-strand running west to east
        // (slot 3 to slot 1) makes a right-handed crossing
        if self.over_from_last {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// The same crossing with over- and under-strands exchanged.
    pub fn switched(&self) -> Crossing {
        let [a, b, c, d] = self.edges;
        if self.over_from_last {
            // old over-strand d -> b becomes the under-strand
            Crossing {
                edges: [d, a, b, c],
                over_from_last: false,
            }
        } else {
            // old over-strand b -> d
            Crossing {
                edges: [b, c, d, a],
                over_from_last: true,
            }
        }
    }

    fn to_pd(&self) -> String {
        let [a, b, c, d] = self.edges;
        format!("X[{a},{b},{c},{d}]")
    }
}

/// Metadata attached to a census entry; never computed from the diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkMetadata {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub signature: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alternating: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub split: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mirror_of: Option<String>,
}

impl LinkMetadata {
    /// A signature of an `m`-component link has the parity of `m - 1`.
    pub fn check_parity(&self, components: usize) -> Result<(), String> {
        match self.signature {
            Some(s) if (s - components as i32 + 1).rem_euclid(2) != 0 => Err(format!(
                "signature {s} has the wrong parity for a {components}-component link"
            )),
            _ => Ok(()),
        }
    }
}

/// A choice of marker at every crossing. Bit `k` of `markers` is set when the
/// marker at crossing `k` is negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub markers: u64,
    pub n_crossings: u32,
}

impl State {
    pub fn new(markers: u64, n_crossings: usize) -> Self {
        debug_assert!(n_crossings == 64 || markers >> n_crossings == 0);
        State {
            markers,
            n_crossings: n_crossings as u32,
        }
    }

    pub fn is_negative(&self, k: usize) -> bool {
        self.markers >> k & 1 == 1
    }

    pub fn n_negative(&self) -> u32 {
        self.markers.count_ones()
    }

    /// `#positive - #negative` markers.
    pub fn sigma(&self) -> i32 {
        self.n_crossings as i32 - 2 * self.n_negative() as i32
    }

    pub fn flipped(&self, k: usize) -> State {
        State {
            markers: self.markers ^ (1 << k),
            n_crossings: self.n_crossings,
        }
    }
}

/// Circles of a smoothed diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    /// Circle index of every edge, indexed like [`LinkDiagram::labels`].
    /// Circles are numbered in order of their lowest edge.
    pub circle_of_edge: Vec<u8>,
    pub n_circles: usize,
}

impl Resolution {
    pub fn circle_edges(&self, circle: usize) -> Vec<usize> {
        (0..self.circle_of_edge.len())
            .filter(|&e| self.circle_of_edge[e] as usize == circle)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    name: Option<String>,
    crossings: Vec<Crossing>,
    /// Sorted edge labels; positions in this list are the dense edge indices.
    labels: Vec<EdgeLabel>,
    /// Dense edge indices of every crossing's slots.
    slots: Vec<[u32; 4]>,
    /// Each component as an oriented cycle of edge labels, starting at its lowest label.
    components: Vec<Vec<EdgeLabel>>,
    component_of_edge: Vec<u32>,
    base_point: EdgeLabel,
}

impl LinkDiagram {
    /// Parses a PD code, the reserved form `unlink n`, or several of those
    /// joined by `⊔` into a disjoint union.
    pub fn parse_pd(text: &str) -> Result<LinkDiagram, PdError> {
        let pieces: Vec<&str> = text.split(UNION_SEPARATOR).map(str::trim).collect();
        let mut crossings = Vec::new();
        let mut loops = Vec::new();
        let mut offset: EdgeLabel = 0;
        for piece in pieces {
            if piece.is_empty() {
                return Err(PdError::Malformed("empty diagram".into()));
            }
            let (mut xs, n_loops) = parse_piece(piece)?;
            let max = xs.iter().flat_map(|x| x.iter().copied()).max().unwrap_or(0);
            for x in xs.iter_mut() {
                for e in x.iter_mut() {
                    *e += offset;
                }
            }
            offset += max;
            for _ in 0..n_loops {
                offset += 1;
                loops.push(offset);
            }
            crossings.extend(xs);
        }
        Self::from_tuples(&crossings, &loops)
    }

    /// Builds a diagram from raw PD tuples plus crossingless loop components.
    pub fn from_tuples(
        tuples: &[[EdgeLabel; 4]],
        loops: &[EdgeLabel],
    ) -> Result<LinkDiagram, PdError> {
        let mut count: BTreeMap<EdgeLabel, usize> = BTreeMap::new();
        for x in tuples {
            for &e in x {
                if e == 0 {
                    return Err(PdError::Malformed("edge labels must be positive".into()));
                }
                *count.entry(e).or_default() += 1;
            }
        }
        for (&label, &c) in &count {
            if c != 2 {
                return Err(PdError::LabelCount { label, count: c });
            }
        }
        for &l in loops {
            if count.insert(l, 0).is_some() {
                return Err(PdError::Malformed(format!(
                    "loop label {l} also used by a crossing"
                )));
            }
        }
        if count.is_empty() {
            return Err(PdError::Malformed("empty diagram".into()));
        }
        let labels: Vec<EdgeLabel> = count.keys().copied().collect();
        let index = |e: EdgeLabel| labels.binary_search(&e).unwrap() as u32;
        let slots: Vec<[u32; 4]> = tuples.iter().map(|x| x.map(index)).collect();
        let over_from_last = trace_orientation(tuples)?;
        let crossings: Vec<Crossing> = tuples
            .iter()
            .zip(over_from_last)
            .map(|(&edges, over_from_last)| Crossing {
                edges,
                over_from_last,
            })
            .collect();

        // successor of every edge through the crossing at its head
        let mut succ: BTreeMap<EdgeLabel, EdgeLabel> = BTreeMap::new();
        for x in &crossings {
            let [a, b, c, d] = x.edges;
            succ.insert(a, c);
            if x.over_from_last {
                succ.insert(d, b);
            } else {
                succ.insert(b, d);
            }
        }
        for &l in loops {
            succ.insert(l, l);
        }
        if succ.len() != labels.len() {
            return Err(PdError::Orientation(
                "edges do not close up into oriented cycles".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut components = Vec::new();
        for &start in &labels {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut e = start;
            while seen.insert(e) {
                cycle.push(e);
                e = succ[&e];
            }
            if e != start {
                return Err(PdError::Orientation(format!("edge {e} is entered twice")));
            }
            components.push(cycle);
        }
        let mut component_of_edge = vec![0u32; labels.len()];
        for (k, comp) in components.iter().enumerate() {
            for &e in comp {
                component_of_edge[index(e) as usize] = k as u32;
            }
        }
        Ok(LinkDiagram {
            name: None,
            base_point: labels[0],
            crossings,
            labels,
            slots,
            components,
            component_of_edge,
        })
    }

    pub fn unknot() -> LinkDiagram {
        Self::parse_pd("unlink 1").expect("reserved token")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_base_point(mut self, label: EdgeLabel) -> Result<Self, PdError> {
        if self.labels.binary_search(&label).is_err() {
            return Err(PdError::BasePoint(label));
        }
        self.base_point = label;
        Ok(self)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    pub fn n_edges(&self) -> usize {
        self.labels.len()
    }

    pub fn components(&self) -> &[Vec<EdgeLabel>] {
        &self.components
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn base_point(&self) -> EdgeLabel {
        self.base_point
    }

    pub fn edge_index(&self, label: EdgeLabel) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn base_edge(&self) -> usize {
        self.edge_index(self.base_point)
            .expect("validated base point")
    }

    pub fn component_of(&self, label: EdgeLabel) -> Option<usize> {
        self.edge_index(label)
            .map(|e| self.component_of_edge[e] as usize)
    }

    pub fn crossing_sign(&self, c: usize) -> Sign {
        self.crossings[c].sign()
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|x| x.sign().value()).sum()
    }

    /// Number of negative crossings.
    pub fn n_negative(&self) -> usize {
        self.crossings
            .iter()
            .filter(|x| x.sign() == Sign::Negative)
            .count()
    }

    /// Smooths every crossing according to `state`: a positive marker joins
    /// slots (0,1) and (2,3), a negative one joins (0,3) and (1,2).
    pub fn resolve(&self, state: State) -> Resolution {
        debug_assert_eq!(state.n_crossings as usize, self.crossings.len());
        let mut uf = UnionFind::new(self.labels.len());
        for (k, s) in self.slots.iter().enumerate() {
            let [a, b, c, d] = s.map(|e| e as usize);
            if state.is_negative(k) {
                uf.union(a, d);
                uf.union(b, c);
            } else {
                uf.union(a, b);
                uf.union(c, d);
            }
        }
        let mut id_of_root: Vec<Option<u8>> = vec![None; self.labels.len()];
        let mut circle_of_edge = Vec::with_capacity(self.labels.len());
        let mut n = 0usize;
        for e in 0..self.labels.len() {
            let r = uf.find(e);
            let id = *id_of_root[r].get_or_insert_with(|| {
                n += 1;
                (n - 1) as u8
            });
            circle_of_edge.push(id);
        }
        Resolution {
            circle_of_edge,
            n_circles: n,
        }
    }

    /// Dense slot indices of crossing `c`.
    pub fn slots(&self, c: usize) -> [usize; 4] {
        self.slots[c].map(|e| e as usize)
    }

    /// Symmetric matrix of pairwise linking numbers; empty for knots.
    pub fn linking_numbers(&self) -> Vec<Vec<i32>> {
        let m = self.components.len();
        if m < 2 {
            return Vec::new();
        }
        let mut twice = vec![vec![0i32; m]; m];
        for (k, x) in self.crossings.iter().enumerate() {
            let under = self.component_of_edge[self.slots[k][0] as usize] as usize;
            let over = self.component_of_edge[self.slots[k][1] as usize] as usize;
            if under != over {
                twice[under][over] += x.sign().value();
                twice[over][under] += x.sign().value();
            }
        }
        twice
            .iter()
            .map(|row| row.iter().map(|v| v / 2).collect())
            .collect()
    }

    pub fn mirror(&self) -> LinkDiagram {
        let mut out = self.clone();
        out.crossings = self.crossings.iter().map(Crossing::switched).collect();
        out.slots = out
            .crossings
            .iter()
            .map(|x| {
                x.edges
                    .map(|e| self.labels.binary_search(&e).unwrap() as u32)
            })
            .collect();
        out
    }

    /// The diagram with its crossings listed in `order` (a permutation).
    pub fn permuted(&self, order: &[usize]) -> LinkDiagram {
        assert_eq!(order.len(), self.crossings.len());
        let mut out = self.clone();
        out.crossings = order.iter().map(|&k| self.crossings[k]).collect();
        out.slots = order.iter().map(|&k| self.slots[k]).collect();
        out
    }

    /// Renames edges through `map`, which must be injective on the labels.
    pub fn relabeled(&self, map: impl Fn(EdgeLabel) -> EdgeLabel) -> Result<LinkDiagram, PdError> {
        let tuples: Vec<[EdgeLabel; 4]> =
            self.crossings.iter().map(|x| x.edges.map(&map)).collect();
        let loops: Vec<EdgeLabel> = self.loop_labels().into_iter().map(&map).collect();
        let mut out = Self::from_tuples(&tuples, &loops)?;
        out.name = self.name.clone();
        out.base_point = map(self.base_point);
        Ok(out)
    }

    /// Labels of crossingless loop components.
    pub fn loop_labels(&self) -> Vec<EdgeLabel> {
        let mut used = BTreeSet::new();
        for x in &self.crossings {
            used.extend(x.edges);
        }
        self.labels
            .iter()
            .copied()
            .filter(|e| !used.contains(e))
            .collect()
    }

    pub fn to_pd(&self) -> String {
        let mut parts: Vec<String> = self.crossings.iter().map(Crossing::to_pd).collect();
        let loops = self.loop_labels();
        if !loops.is_empty() {
            if parts.is_empty() {
                return format!("unlink {}", loops.len());
            }
            parts.push(format!("{UNION_SEPARATOR} unlink {}", loops.len()));
        }
        parts.join(" ")
    }

    /// PD text with edges renamed 1, 2, ... in order of first appearance.
    pub fn normalized_pd(&self) -> String {
        let mut rename: BTreeMap<EdgeLabel, EdgeLabel> = BTreeMap::new();
        let mut parts = Vec::new();
        for x in &self.crossings {
            let e = x.edges.map(|e| {
                let next = rename.len() as EdgeLabel + 1;
                *rename.entry(e).or_insert(next)
            });
            parts.push(format!("X[{},{},{},{}]", e[0], e[1], e[2], e[3]));
        }
        let loops = self.loop_labels().len();
        if loops > 0 {
            parts.push(format!("loops {loops}"));
        }
        parts.join(" ")
    }

    /// Content hash of [`Self::normalized_pd`].
    pub fn diagram_hash(&self) -> String {
        hex::encode(Sha256::digest(self.normalized_pd().as_bytes()))
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

fn parse_piece(piece: &str) -> Result<(Vec<[EdgeLabel; 4]>, usize), PdError> {
    let mut words = piece.split_whitespace();
    if words.next() == Some("unlink") {
        let n: usize = words
            .next()
            .and_then(|w| w.parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| PdError::Malformed(format!("bad unlink token `{piece}`")))?;
        if words.next().is_some() {
            return Err(PdError::Malformed(format!(
                "trailing text after `unlink {n}`"
            )));
        }
        return Ok((Vec::new(), n));
    }
    let body = piece.trim();
    let body = body
        .strip_prefix("PD[")
        .and_then(|b| b.strip_suffix(']'))
        .unwrap_or(body);
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
        if rest.is_empty() {
            break;
        }
        let open = if let Some(r) = rest.strip_prefix("X[") {
            r
        } else if let Some(r) = rest.strip_prefix('[') {
            r
        } else {
            return Err(PdError::Malformed(format!(
                "expected `X[` at `{}`",
                head(rest)
            )));
        };
        let close = open
            .find(']')
            .ok_or_else(|| PdError::Malformed(format!("unclosed tuple at `{}`", head(rest))))?;
        let fields: Vec<&str> = open[..close].split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(PdError::Malformed(format!(
                "tuple `[{}]` needs 4 labels",
                &open[..close]
            )));
        }
        let mut tuple = [0; 4];
        for (slot, f) in tuple.iter_mut().zip(&fields) {
            *slot = f
                .parse::<EdgeLabel>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| PdError::Malformed(format!("bad edge label `{f}`")))?;
        }
        out.push(tuple);
        rest = &open[close + 1..];
    }
    if out.is_empty() {
        return Err(PdError::Malformed("no crossings".into()));
    }
    Ok((out, 0))
}

fn head(s: &str) -> &str {
    let end = s.char_indices().nth(16).map_or(s.len(), |(i, _)| i);
    &s[..end]
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum End {
    In,
    Out,
}

impl End {
    fn opposite(self) -> End {
        match self {
            End::In => End::Out,
            End::Out => End::In,
        }
    }
}

/// Recovers the direction of every over-strand. Under-strands are known
/// (`slot 0 -> slot 2`); each edge has one head and one tail, which
/// propagates directions across the diagram. Components that never pass
/// under anything fall back to the usual labelling convention that labels
/// increase along the orientation.
fn trace_orientation(tuples: &[[EdgeLabel; 4]]) -> Result<Vec<bool>, PdError> {
    let mut occurrences: BTreeMap<EdgeLabel, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, x) in tuples.iter().enumerate() {
        for (s, &e) in x.iter().enumerate() {
            occurrences.entry(e).or_default().push((c, s));
        }
    }
    let mut end: Vec<[Option<End>; 4]> = vec![[None; 4]; tuples.len()];
    let mut queue = VecDeque::new();

    fn assign(
        end: &mut [[Option<End>; 4]],
        queue: &mut VecDeque<(usize, usize)>,
        c: usize,
        s: usize,
        v: End,
    ) -> Result<(), PdError> {
        match end[c][s] {
            Some(old) if old != v => Err(PdError::Orientation(format!(
                "conflicting directions at slot {s} of crossing {c}"
            ))),
            Some(_) => Ok(()),
            None => {
                end[c][s] = Some(v);
                queue.push_back((c, s));
                Ok(())
            }
        }
    }

    for c in 0..tuples.len() {
        assign(&mut end, &mut queue, c, 0, End::In)?;
        assign(&mut end, &mut queue, c, 2, End::Out)?;
    }
    let mut next_unresolved = 0;
    loop {
        while let Some((c, s)) = queue.pop_front() {
            let v = end[c][s].unwrap();
            // the same strand leaves through the opposite slot
            assign(&mut end, &mut queue, c, (s + 2) % 4, v.opposite())?;
            // the other end of this edge
            let label = tuples[c][s];
            for &(c2, s2) in &occurrences[&label] {
                if (c2, s2) != (c, s) {
                    assign(&mut end, &mut queue, c2, s2, v.opposite())?;
                }
            }
        }
        while next_unresolved < tuples.len() && end[next_unresolved][1].is_some() {
            next_unresolved += 1;
        }
        if next_unresolved == tuples.len() {
            break;
        }
        let [_, b, _, d] = tuples[next_unresolved];
        let from_last = b == d + 1 || d > b + 1;
        let v = if from_last { End::Out } else { End::In };
        assign(&mut end, &mut queue, next_unresolved, 1, v)?;
    }
    Ok(end.iter().map(|e| e[1] == Some(End::Out)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL: &str = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]";

    fn all_states(d: &LinkDiagram) -> impl Iterator<Item = State> + '_ {
        (0..1u64 << d.n_crossings()).map(move |m| State::new(m, d.n_crossings()))
    }

    #[test]
    fn parses_trefoil() {
        let d = LinkDiagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(d.n_crossings(), 3);
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.n_edges(), 6);
        assert_eq!(d.base_point(), 1);
        assert_eq!(d.components()[0], vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn trefoil_signs_and_mirror() {
        // over-strands run 4->5, 6->1, 2->3: all right-handed
        let d = LinkDiagram::parse_pd(TREFOIL).unwrap();
        assert!((0..3).all(|c| d.crossing_sign(c) == Sign::Positive));
        assert_eq!(d.writhe(), 3);
        let m = d.mirror();
        assert!((0..3).all(|c| m.crossing_sign(c) == Sign::Negative));
        assert_eq!(m.writhe(), -3);
        assert_eq!(m.n_components(), 1);
        assert_eq!(m.mirror().crossings(), d.crossings());
    }

    #[test]
    fn unlink_token() {
        let d = LinkDiagram::parse_pd("unlink 2").unwrap();
        assert_eq!(d.n_crossings(), 0);
        assert_eq!(d.n_components(), 2);
        assert_eq!(d.writhe(), 0);
        assert_eq!(d.linking_numbers(), vec![vec![0, 0], vec![0, 0]]);
        let r = d.resolve(State::new(0, 0));
        assert_eq!(r.n_circles, 2);
        assert_eq!(LinkDiagram::unknot().resolve(State::new(0, 0)).n_circles, 1);
    }

    #[test]
    fn rejects_unpaired_label() {
        let err = LinkDiagram::parse_pd("X[1,4,2,3] X[3,6,4,7]").unwrap_err();
        assert!(matches!(err, PdError::LabelCount { .. }), "{err}");
        assert!(LinkDiagram::parse_pd("X[1,2,3]").is_err());
        assert!(LinkDiagram::parse_pd("X[1,2,3,a]").is_err());
        assert!(LinkDiagram::parse_pd("unlink 0").is_err());
        assert!(LinkDiagram::parse_pd("").is_err());
    }

    #[test]
    fn accepts_bracketed_forms() {
        let a = LinkDiagram::parse_pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]").unwrap();
        let b = LinkDiagram::parse_pd("[1,5,2,4],[3,1,4,6],[5,3,6,2]").unwrap();
        assert_eq!(a.crossings(), b.crossings());
    }

    #[test]
    fn trefoil_resolutions() {
        let d = LinkDiagram::parse_pd(TREFOIL).unwrap();
        // all positive markers follow the orientation at positive crossings
        assert_eq!(d.resolve(State::new(0, 3)).n_circles, 2);
        assert_eq!(d.resolve(State::new(0b111, 3)).n_circles, 3);
    }

    #[test]
    fn flipping_one_marker_changes_circle_count_by_one() {
        let d = LinkDiagram::parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]").unwrap();
        for s in all_states(&d) {
            let n = d.resolve(s).n_circles as i32;
            for k in 0..d.n_crossings() {
                let m = d.resolve(s.flipped(k)).n_circles as i32;
                assert_eq!((n - m).abs(), 1);
            }
        }
    }

    #[test]
    fn hopf_linking() {
        // positive Hopf link from the closure of sigma_1^2
        let d = LinkDiagram::parse_pd("X[3,2,4,1] X[2,3,1,4]").unwrap();
        assert_eq!(d.n_components(), 2);
        assert_eq!(d.writhe(), 2);
        assert_eq!(d.linking_numbers(), vec![vec![0, 1], vec![1, 0]]);
        let split = LinkDiagram::parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2] ⊔ unlink 1").unwrap();
        assert_eq!(split.n_components(), 2);
        assert_eq!(split.linking_numbers()[0][1], 0);
    }

    #[test]
    fn disjoint_union_offsets_labels() {
        let d = LinkDiagram::parse_pd(&format!("{TREFOIL} ⊔ {TREFOIL}")).unwrap();
        assert_eq!(d.n_crossings(), 6);
        assert_eq!(d.n_components(), 2);
        assert_eq!(d.labels().len(), 12);
        assert_eq!(d.writhe(), 6);
    }

    #[test]
    fn writhe_is_relabeling_invariant() {
        let d = LinkDiagram::parse_pd(TREFOIL).unwrap();
        let r = d.relabeled(|e| 100 - 7 * e).unwrap();
        assert_eq!(r.writhe(), d.writhe());
        assert_eq!(
            r.normalized_pd(),
            d.relabeled(|e| e + 3).unwrap().normalized_pd()
        );
        assert_eq!(r.diagram_hash(), d.diagram_hash());
    }

    #[test]
    fn base_point_validation() {
        let d = LinkDiagram::parse_pd(TREFOIL).unwrap();
        assert!(d.clone().with_base_point(4).is_ok());
        assert!(matches!(d.with_base_point(9), Err(PdError::BasePoint(9))));
    }

    #[test]
    fn kinked_unknot() {
        let d = LinkDiagram::parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.n_crossings(), 1);
        let counts: Vec<usize> = all_states(&d).map(|s| d.resolve(s).n_circles).collect();
        let mut sorted = counts.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2]);
    }

    #[test]
    fn signature_parity() {
        let meta = LinkMetadata {
            signature: Some(-2),
            ..Default::default()
        };
        assert!(meta.check_parity(1).is_ok());
        assert!(meta.check_parity(2).is_err());
    }
}
