//! Exact linear algebra over Z and Z/p on sparse integer matrices.

mod elim;
mod group;
mod matrix;

pub use group::{is_prime, primary_parts, prime_of, AbelianGroup, SmithForm};
pub use matrix::SparseIntMatrix;

use num_bigint::{BigInt, BigUint};

use crate::error::LinalgError;
use elim::{eliminate_general, Eliminator, IntRing, IntScalar, ModRing, Overflow};

fn snf_with<T: IntScalar>(m: &SparseIntMatrix) -> Result<Vec<BigUint>, Overflow> {
    let entries = m.entries().map(|(r, c, v)| (r, c, T::from(v)));
    let mut el = Eliminator::new(IntRing::<T>::default(), m.n_rows(), m.n_cols(), entries);
    let units = el.eliminate_units()?;
    let rest = eliminate_general(&mut el)?;
    let mut diag = vec![BigUint::from(1u32); units];
    diag.extend(
        rest.into_iter()
            .map(|v| v.into_bigint().magnitude().clone()),
    );
    Ok(diag)
}

/// Smith normal form. Runs in `i64` and falls back to big integers if an
/// intermediate entry overflows.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    let diag = match snf_with::<i64>(m) {
        Ok(d) => d,
        Err(Overflow) => {
            log::debug!(
                "snf overflow on {}x{}, retrying with big integers",
                m.n_rows(),
                m.n_cols()
            );
            snf_with::<BigInt>(m).expect("big integer elimination cannot overflow")
        }
    };
    SmithForm::from_diagonal(diag)
}

/// Rank over Z/p.
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> Result<usize, LinalgError> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(LinalgError::NotPrime(p));
    }
    let reduced = m.reduce_mod(p);
    let entries = reduced
        .entries()
        .map(|(r, c, v)| (r, c, v.rem_euclid(p as i64) as u64));
    let mut el = Eliminator::new(ModRing { p }, m.n_rows(), m.n_cols(), entries);
    Ok(el
        .eliminate_units()
        .expect("modular elimination cannot overflow"))
}

fn check_composable(d_in: &SparseIntMatrix, d_out: &SparseIntMatrix) -> Result<usize, LinalgError> {
    if d_in.n_rows() != d_out.n_cols() {
        return Err(LinalgError::Dimension(format!(
            "incoming map has {} rows but outgoing map has {} columns",
            d_in.n_rows(),
            d_out.n_cols()
        )));
    }
    Ok(d_in.n_rows())
}

/// Homology `ker d_out / im d_in` at the middle term of `A -> B -> C`.
pub fn homology_group(
    d_in: &SparseIntMatrix,
    d_out: &SparseIntMatrix,
) -> Result<AbelianGroup, LinalgError> {
    let dim = check_composable(d_in, d_out)?;
    if !d_out.mul(d_in)?.is_zero() {
        return Err(LinalgError::NonZeroComposition);
    }
    let snf_in = smith_normal_form(d_in);
    let rank_out = smith_normal_form(d_out).rank();
    group_from_ranks(dim, &snf_in, rank_out)
}

/// Assembles a homology group from the middle dimension, the Smith form of the
/// incoming map and the rank of the outgoing map.
pub fn group_from_ranks(
    dim: usize,
    snf_in: &SmithForm,
    rank_out: usize,
) -> Result<AbelianGroup, LinalgError> {
    let free = dim
        .checked_sub(snf_in.rank() + rank_out)
        .ok_or_else(|| LinalgError::Dimension(format!("ranks exceed dimension {dim}")))?;
    let torsion: Vec<BigUint> = snf_in.torsion().cloned().collect();
    AbelianGroup::from_parts(free as u64, &torsion)
}

/// Dimension over Z/p of `ker d_out / im d_in`.
pub fn betti_mod_p(
    d_in: &SparseIntMatrix,
    d_out: &SparseIntMatrix,
    p: u64,
) -> Result<usize, LinalgError> {
    let dim = check_composable(d_in, d_out)?;
    if !d_out.mul(d_in)?.is_zero_mod(p) {
        return Err(LinalgError::NonZeroComposition);
    }
    let used = rank_mod_p(d_in, p)? + rank_mod_p(d_out, p)?;
    dim.checked_sub(used)
        .ok_or_else(|| LinalgError::Dimension(format!("ranks exceed dimension {dim}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, dense: &[i64]) -> SparseIntMatrix {
        let d: Vec<Vec<i64>> = dense.chunks(cols).map(|r| r.to_vec()).collect();
        assert_eq!(d.len(), rows);
        SparseIntMatrix::from_dense(&d)
    }

    fn factors(s: &SmithForm) -> Vec<u64> {
        s.invariant_factors
            .iter()
            .map(|d| d.to_string().parse().unwrap())
            .collect()
    }

    #[test]
    fn snf_small() {
        let a = m(2, 2, &[2, 4, 6, 8]);
        assert_eq!(factors(&smith_normal_form(&a)), vec![2, 4]);
        let b = m(3, 3, &[2, 0, 0, 0, 3, 0, 0, 0, 0]);
        assert_eq!(factors(&smith_normal_form(&b)), vec![1, 6]);
        assert_eq!(smith_normal_form(&SparseIntMatrix::zero(3, 4)).rank(), 0);
    }

    #[test]
    fn snf_needs_gcd_steps() {
        // entry gcd 1, 2x2 minors -4, -6, 0
        let a = m(2, 3, &[6, 10, 15, 4, 6, 9]);
        assert_eq!(factors(&smith_normal_form(&a)), vec![1, 2]);
        let c = m(2, 2, &[4, 6, 2, 2]);
        assert_eq!(factors(&smith_normal_form(&c)), vec![2, 2]);
        let b = m(2, 2, &[4, 6, 6, 9]);
        assert_eq!(factors(&smith_normal_form(&b)), vec![1]);
    }

    #[test]
    fn snf_overflow_promotes() {
        let big = 1i64 << 40;
        let a = m(2, 2, &[big, big + 1, big - 1, big]);
        // det = big^2 - (big^2 - 1) = 1
        assert_eq!(factors(&smith_normal_form(&a)), vec![1, 1]);
        let c = m(2, 2, &[big, 0, 0, big * 3]);
        let s = smith_normal_form(&c);
        assert_eq!(s.invariant_factors[1], BigUint::from(big as u64 * 3));
    }

    #[test]
    fn homology_of_multiplication_by_two() {
        let zero_in = SparseIntMatrix::zero(1, 0);
        let two = m(1, 1, &[2]);
        let zero_out = SparseIntMatrix::zero(0, 1);
        let h1 = homology_group(&two, &zero_out).unwrap();
        assert_eq!(h1.to_string(), "Z2");
        let h0 = homology_group(&zero_in, &two).unwrap();
        assert!(h0.is_zero());
        assert_eq!(betti_mod_p(&two, &zero_out, 2).unwrap(), 1);
        assert_eq!(betti_mod_p(&two, &zero_out, 3).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = m(1, 1, &[1]);
        assert!(matches!(rank_mod_p(&a, 4), Err(LinalgError::NotPrime(4))));
        let b = m(2, 1, &[1, 0]);
        assert!(matches!(
            homology_group(&b, &a),
            Err(LinalgError::Dimension(_))
        ));
        let c = m(1, 1, &[1]);
        assert!(matches!(
            homology_group(&c, &c),
            Err(LinalgError::NonZeroComposition)
        ));
    }

    #[test]
    fn rank_mod_p_small() {
        let a = m(2, 2, &[1, 1, 1, -1]);
        assert_eq!(rank_mod_p(&a, 2).unwrap(), 1);
        assert_eq!(rank_mod_p(&a, 3).unwrap(), 2);
    }
}
