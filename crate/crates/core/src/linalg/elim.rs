//! Sparse Gaussian elimination shared by the integral and modular paths.
//!
//! Phase one repeatedly takes the sparsest live column, pivots on a unit entry
//! in its shortest row, clears the column with row operations and retires the
//! pivot row and column (clearing the rest of a unit pivot row is a column
//! operation that touches nothing else). Phase two, integers only, handles the
//! entries that are left once no unit pivots remain.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Ring {
    type E: Clone + Debug;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_unit(&self, a: &Self::E) -> bool;
    /// `f` such that `b - f * u == 0`, for a unit `u`.
    fn cancel_factor(&self, b: &Self::E, u: &Self::E) -> Self::E;
    /// `a - f * b`, or `None` on overflow.
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Option<Self::E>;
}

/// Integer scalars with checked arithmetic: `i64` on the fast path,
/// `BigInt` once that overflows.
pub(crate) trait IntScalar:
    Clone + Debug + Ord + Signed + Integer + CheckedMul + CheckedSub + From<i64>
{
    fn into_bigint(self) -> BigInt;
}

impl IntScalar for i64 {
    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

impl IntScalar for BigInt {
    fn into_bigint(self) -> BigInt {
        self
    }
}

pub(crate) struct IntRing<T>(std::marker::PhantomData<T>);

impl<T> Default for IntRing<T> {
    fn default() -> Self {
        IntRing(std::marker::PhantomData)
    }
}

impl<T: IntScalar> Ring for IntRing<T> {
    type E = T;
    fn zero(&self) -> T {
        T::zero()
    }
    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &T) -> bool {
        a.abs().is_one()
    }
    fn cancel_factor(&self, b: &T, u: &T) -> T {
        // u is +-1
        b.clone() * u.clone()
    }
    fn sub_mul(&self, a: &T, f: &T, b: &T) -> Option<T> {
        a.checked_sub(&f.checked_mul(b)?)
    }
}

pub(crate) struct ModRing {
    pub p: u64,
}

impl ModRing {
    pub fn inverse(&self, a: u64) -> u64 {
        let (mut base, mut exp, mut acc) = (a % self.p, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Ring for ModRing {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn cancel_factor(&self, b: &u64, u: &u64) -> u64 {
        b * self.inverse(*u) % self.p
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> Option<u64> {
        Some((a + self.p - f * b % self.p) % self.p)
    }
}

pub(crate) struct Eliminator<R: Ring> {
    pub ring: R,
    pub rows: Vec<Vec<(u32, R::E)>>,
    pub row_alive: Vec<bool>,
    /// Rows that may hold an entry in each column; stale ids are pruned lazily.
    pub cols: Vec<Vec<u32>>,
    pub col_alive: Vec<bool>,
}

impl<R: Ring> Eliminator<R> {
    /// `entries` must be sorted by (row, col) without duplicates or zeros.
    pub fn new(
        ring: R,
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, R::E)>,
    ) -> Self {
        let mut rows: Vec<Vec<(u32, R::E)>> = vec![Vec::new(); n_rows];
        let mut cols: Vec<Vec<u32>> = vec![Vec::new(); n_cols];
        for (r, c, v) in entries {
            rows[r].push((c as u32, v));
            cols[c].push(r as u32);
        }
        Eliminator {
            ring,
            rows,
            row_alive: vec![true; n_rows],
            cols,
            col_alive: vec![true; n_cols],
        }
    }

    fn entry(&self, r: usize, c: u32) -> Option<&R::E> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0)
            .ok()
            .map(|k| &row[k].1)
    }

    /// Live rows with an entry in column `c`, pruning the column index.
    pub fn column(&mut self, c: usize) -> Vec<(u32, R::E)> {
        let mut ids = std::mem::take(&mut self.cols[c]);
        ids.sort_unstable();
        ids.dedup();
        let mut out = Vec::with_capacity(ids.len());
        ids.retain(|&r| {
            if !self.row_alive[r as usize] {
                return false;
            }
            match self.entry(r as usize, c as u32) {
                Some(v) => {
                    out.push((r, v.clone()));
                    true
                }
                None => false,
            }
        });
        self.cols[c] = ids;
        out
    }

    /// `row[target] -= f * pivot`, registering newly created entries in the
    /// column index.
    pub fn row_sub(
        &mut self,
        target: usize,
        f: &R::E,
        pivot: &[(u32, R::E)],
    ) -> Result<(), Overflow> {
        let old = std::mem::take(&mut self.rows[target]);
        let mut out = Vec::with_capacity(old.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < pivot.len() {
            let take_old = j == pivot.len() || (i < old.len() && old[i].0 < pivot[j].0);
            let take_pivot = i == old.len() || (j < pivot.len() && pivot[j].0 < old[i].0);
            if take_old {
                out.push(old[i].clone());
                i += 1;
            } else if take_pivot {
                let v = self
                    .ring
                    .sub_mul(&self.ring.zero(), f, &pivot[j].1)
                    .ok_or(Overflow)?;
                if !self.ring.is_zero(&v) {
                    self.cols[pivot[j].0 as usize].push(target as u32);
                    out.push((pivot[j].0, v));
                }
                j += 1;
            } else {
                let v = self
                    .ring
                    .sub_mul(&old[i].1, f, &pivot[j].1)
                    .ok_or(Overflow)?;
                if !self.ring.is_zero(&v) {
                    out.push((old[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[target] = out;
        Ok(())
    }

    /// Phase one. Returns the number of unit pivots taken.
    pub fn eliminate_units(&mut self) -> Result<usize, Overflow> {
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(_, rs)| !rs.is_empty())
            .map(|(c, rs)| Reverse((rs.len(), c as u32)))
            .collect();
        let mut pivots = 0;
        while let Some(Reverse((key, c))) = heap.pop() {
            let c = c as usize;
            if !self.col_alive[c] {
                continue;
            }
            let live = self.column(c);
            if live.is_empty() {
                continue;
            }
            if live.len() != key {
                heap.push(Reverse((live.len(), c as u32)));
                continue;
            }
            let pivot = live
                .iter()
                .filter(|(_, v)| self.ring.is_unit(v))
                .min_by_key(|(r, _)| (self.rows[*r as usize].len(), *r));
            let Some((pr, pv)) = pivot.cloned() else {
                continue;
            };
            let pivot_row = self.rows[pr as usize].clone();
            for (r, v) in &live {
                if *r == pr {
                    continue;
                }
                let f = self.ring.cancel_factor(v, &pv);
                self.row_sub(*r as usize, &f, &pivot_row)?;
            }
            self.row_alive[pr as usize] = false;
            self.col_alive[c] = false;
            pivots += 1;
            for (c2, _) in &pivot_row {
                let c2 = *c2 as usize;
                if c2 != c && self.col_alive[c2] {
                    heap.push(Reverse((self.cols[c2].len(), c2 as u32)));
                }
            }
        }
        Ok(pivots)
    }
}

/// Phase two over the integers: pivot on an entry of least absolute value,
/// reduce its row and column by division with remainder, and retire it once
/// both are clear. Returns the absolute values of the retired pivots.
pub(crate) fn eliminate_general<T: IntScalar>(
    el: &mut Eliminator<IntRing<T>>,
) -> Result<Vec<T>, Overflow> {
    let mut diagonal = Vec::new();
    loop {
        let mut best: Option<(T, usize, usize, u32)> = None;
        for (r, row) in el.rows.iter().enumerate() {
            if !el.row_alive[r] {
                continue;
            }
            for (c, v) in row {
                let key = (v.abs(), row.len(), r, *c);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, _, r, c)) = best else { break };
        let c = c as usize;
        let p = el.entry(r, c as u32).cloned().expect("pivot present");
        let pivot_row = el.rows[r].clone();
        let mut dirty = false;
        for (r2, v) in el.column(c) {
            if r2 as usize == r {
                continue;
            }
            let q = v.clone() / p.clone();
            if !q.is_zero() {
                el.row_sub(r2 as usize, &q, &pivot_row)?;
            }
            if !(v % p.clone()).is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // column c now holds only the pivot, so column operations touch row r alone
        let mut row = std::mem::take(&mut el.rows[r]);
        for (c2, w) in row.iter_mut() {
            if *c2 as usize == c {
                continue;
            }
            let q = w.clone() / p.clone();
            *w = w
                .checked_sub(&q.checked_mul(&p).ok_or(Overflow)?)
                .ok_or(Overflow)?;
            if !w.is_zero() {
                dirty = true;
            }
        }
        row.retain(|(_, w)| !w.is_zero());
        el.rows[r] = row;
        if dirty {
            continue;
        }
        diagonal.push(p.abs());
        el.row_alive[r] = false;
        el.col_alive[c] = false;
    }
    Ok(diagonal)
}
