//! Dense linear algebra over Z/2 on bit vectors, for the homology-level
//! checks that need explicit cycle representatives.

use crate::linalg::SparseIntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize) -> bool {
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn flip(&mut self, k: usize) {
        self.words[k / 64] ^= 1 << (k % 64);
    }

    pub fn xor(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&k| self.get(k))
    }

    fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

/// Columns of a matrix mod 2, as vectors in the row space.
pub fn columns_mod2(m: &SparseIntMatrix) -> Vec<BitVec> {
    let mut cols = vec![BitVec::zeros(m.n_rows()); m.n_cols()];
    for (r, c, v) in m.entries() {
        if v.rem_euclid(2) == 1 {
            cols[c].flip(r);
        }
    }
    cols
}

/// Image of `v` under `m` mod 2.
pub fn apply_mod2(cols: &[BitVec], n_rows: usize, v: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(n_rows);
    for k in v.ones() {
        out.xor(&cols[k]);
    }
    out
}

/// Incremental echelon basis of a subspace.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, BitVec)>,
}

impl Echelon {
    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        for (lead, r) in &self.rows {
            if v.get(*lead) {
                v.xor(r);
            }
        }
        match v.leading() {
            Some(lead) => {
                for (_, r) in self.rows.iter_mut() {
                    if r.get(lead) {
                        r.xor(&v);
                    }
                }
                self.rows.push((lead, v));
                true
            }
            None => false,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Basis of the kernel of `m` mod 2.
pub fn kernel_mod2(m: &SparseIntMatrix) -> Vec<BitVec> {
    let n = m.n_cols();
    // rows of m as vectors over the source space, reduced to RREF
    let mut rows = vec![BitVec::zeros(n); m.n_rows()];
    for (r, c, v) in m.entries() {
        if v.rem_euclid(2) == 1 {
            rows[r].flip(c);
        }
    }
    let mut ech = Echelon::default();
    for r in rows {
        ech.insert(r);
    }
    let pivots: Vec<usize> = ech.rows.iter().map(|(l, _)| *l).collect();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::zeros(n);
            v.flip(f);
            for (lead, r) in &ech.rows {
                if r.get(f) {
                    v.flip(*lead);
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let k = kernel_mod2(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        let cols = columns_mod2(&m);
        assert!(apply_mod2(&cols, 2, &k[0]).is_zero());
        let mut e = Echelon::default();
        assert!(
            cols.iter()
                .filter(|&c| e.insert(c.clone()))
                .cloned()
                .count()
                == 2
        );
        assert_eq!(e.rank(), 2);
        // 2 vanishes mod 2
        assert_eq!(
            kernel_mod2(&SparseIntMatrix::from_dense(&[vec![2, 0]])).len(),
            2
        );
    }
}
