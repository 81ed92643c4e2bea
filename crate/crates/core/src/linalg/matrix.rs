use std::fmt::Write as _;

use crate::error::LinalgError;

/// Sparse integer matrix in row-major triplet form: no duplicate positions,
/// no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseIntMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(u32, u32, i64)>,
}

impl SparseIntMatrix {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        SparseIntMatrix {
            n_rows,
            n_cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseIntMatrix {
            n_rows: n,
            n_cols: n,
            entries: (0..n as u32).map(|k| (k, k, 1)).collect(),
        }
    }

    /// Sums duplicate positions and drops zeros.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self, LinalgError> {
        let mut entries: Vec<(u32, u32, i64)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(LinalgError::Dimension(format!(
                    "entry ({r}, {c}) outside a {n_rows}x{n_cols} matrix"
                )));
            }
            entries.push((r as u32, c as u32, v));
        }
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(u32, u32, i64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != 0);
        Ok(SparseIntMatrix {
            n_rows,
            n_cols,
            entries: merged,
        })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let n_cols = rows.first().map_or(0, Vec::len);
        let trip = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(rows.len(), n_cols, trip).expect("rectangular input")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries
            .iter()
            .map(|&(r, c, v)| (r as usize, c as usize, v))
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries
            .binary_search_by_key(&(r as u32, c as u32), |&(r, c, _)| (r, c))
            .map_or(0, |k| self.entries[k].2)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.n_cols,
            self.n_rows,
            self.entries().map(|(r, c, v)| (c, r, v)),
        )
        .expect("transposed shape")
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.n_cols]; self.n_rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v;
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix, LinalgError> {
        if self.n_cols != rhs.n_rows {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        let mut rhs_rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rhs.n_rows];
        for (r, c, v) in rhs.entries() {
            rhs_rows[r].push((c, v));
        }
        let mut acc: std::collections::HashMap<(usize, usize), i128> = Default::default();
        for (r, k, v) in self.entries() {
            for &(c, w) in &rhs_rows[k] {
                *acc.entry((r, c)).or_default() += v as i128 * w as i128;
            }
        }
        let trip = acc.into_iter().map(|((r, c), v)| {
            (
                r,
                c,
                i64::try_from(v).expect("product entry exceeds 64 bits"),
            )
        });
        Self::from_triplets(self.n_rows, rhs.n_cols, trip)
    }

    pub fn add(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix, LinalgError> {
        if (self.n_rows, self.n_cols) != (rhs.n_rows, rhs.n_cols) {
            return Err(LinalgError::Dimension(
                "cannot add matrices of different shapes".into(),
            ));
        }
        Self::from_triplets(
            self.n_rows,
            self.n_cols,
            self.entries().chain(rhs.entries()),
        )
    }

    pub fn scaled(&self, k: i64) -> SparseIntMatrix {
        Self::from_triplets(
            self.n_rows,
            self.n_cols,
            self.entries().map(|(r, c, v)| (r, c, v * k)),
        )
        .expect("same shape")
    }

    /// Entries reduced into `0..p`; zero residues dropped.
    pub fn reduce_mod(&self, p: u64) -> SparseIntMatrix {
        let p = p as i64;
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            e.2 = e.2.rem_euclid(p);
        }
        out.entries.retain(|e| e.2 != 0);
        out
    }

    pub fn is_zero_mod(&self, p: u64) -> bool {
        self.entries.iter().all(|e| e.2.rem_euclid(p as i64) == 0)
    }

    /// Plain-text triplet form `rows cols; r c v; ...`.
    pub fn to_triplet_text(&self) -> String {
        let mut out = format!("{} {}", self.n_rows, self.n_cols);
        for (r, c, v) in self.entries() {
            write!(out, "; {r} {c} {v}").unwrap();
        }
        out
    }

    pub fn from_triplet_text(text: &str) -> Result<SparseIntMatrix, LinalgError> {
        let bad = |s: &str| LinalgError::Dimension(format!("bad triplet text near `{s}`"));
        let mut parts = text.split(';').map(str::trim).filter(|s| !s.is_empty());
        let header = parts.next().ok_or_else(|| bad(text))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| bad(header)))
            .collect::<Result<_, _>>()?;
        let [n_rows, n_cols] = dims[..] else {
            return Err(bad(header));
        };
        let mut trip = Vec::new();
        for p in parts {
            let w: Vec<&str> = p.split_whitespace().collect();
            let [r, c, v] = w[..] else { return Err(bad(p)) };
            trip.push((
                r.parse().map_err(|_| bad(p))?,
                c.parse().map_err(|_| bad(p))?,
                v.parse().map_err(|_| bad(p))?,
            ));
        }
        Self::from_triplets(n_rows, n_cols, trip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let m = SparseIntMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 0, -1), (1, 0, 2), (1, 0, 3)])
            .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), 5);
        assert_eq!(m.get(0, 0), 0);
        assert!(SparseIntMatrix::from_triplets(1, 1, [(1, 0, 1)]).is_err());
    }

    #[test]
    fn product() {
        let a = SparseIntMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = SparseIntMatrix::from_dense(&[vec![1, -2], vec![0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), SparseIntMatrix::identity(2));
        assert!(a.mul(&SparseIntMatrix::zero(3, 1)).is_err());
    }

    #[test]
    fn triplet_text() {
        let m = SparseIntMatrix::from_dense(&[vec![0, -3], vec![7, 0], vec![0, 0]]);
        let text = m.to_triplet_text();
        assert_eq!(text, "3 2; 0 1 -3; 1 0 7");
        assert_eq!(SparseIntMatrix::from_triplet_text(&text).unwrap(), m);
        assert_eq!(
            SparseIntMatrix::from_triplet_text("0 4").unwrap(),
            SparseIntMatrix::zero(0, 4)
        );
        assert!(SparseIntMatrix::from_triplet_text("2 2; 0 0").is_err());
    }

    #[test]
    fn modular_reduction() {
        let m = SparseIntMatrix::from_dense(&[vec![2, -1], vec![4, 3]]);
        assert_eq!(m.reduce_mod(2).to_dense(), vec![vec![0, 1], vec![0, 1]]);
        assert!(m.scaled(3).is_zero_mod(3));
    }
}
