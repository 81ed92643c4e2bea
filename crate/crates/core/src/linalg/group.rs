use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::LinalgError;

/// Invariant factors `d_1 | d_2 | ... | d_r` of an integer matrix, all nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigUint>,
}

impl SmithForm {
    /// Turns an arbitrary nonzero diagonal into the divisibility chain with the
    /// same cokernel.
    pub fn from_diagonal(mut diag: Vec<BigUint>) -> SmithForm {
        diag.retain(|d| !d.is_zero());
        let n = diag.len();
        for i in 0..n {
            for k in (i + 1)..n {
                if (&diag[k] % &diag[i]).is_zero() {
                    continue;
                }
                let g = diag[i].gcd(&diag[k]);
                let l = diag[i].lcm(&diag[k]);
                diag[i] = g;
                diag[k] = l;
            }
        }
        diag.sort();
        SmithForm {
            invariant_factors: diag,
        }
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Factors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &BigUint> {
        self.invariant_factors.iter().filter(|d| !d.is_one())
    }
}

/// A finitely generated abelian group `Z^rank ⊕ ⊕ Z/q` with `q` prime powers.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: u64,
    /// prime power -> multiplicity
    pub torsion: BTreeMap<u64, u64>,
}

impl AbelianGroup {
    pub fn free(rank: u64) -> AbelianGroup {
        AbelianGroup {
            rank,
            torsion: BTreeMap::new(),
        }
    }

    pub fn from_parts(rank: u64, factors: &[BigUint]) -> Result<AbelianGroup, LinalgError> {
        let mut g = AbelianGroup::free(rank);
        for f in factors {
            for (q, m) in primary_parts(f)? {
                *g.torsion.entry(q).or_default() += m;
            }
        }
        Ok(g)
    }

    pub fn add_torsion(&mut self, prime_power: u64, mult: u64) {
        if mult > 0 {
            *self.torsion.entry(prime_power).or_default() += mult;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    /// Number of cyclic summands of `p`-power order.
    pub fn p_summands(&self, p: u64) -> u64 {
        self.torsion
            .iter()
            .filter(|(q, _)| prime_of(**q) == p)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.torsion.keys().map(|q| prime_of(*q)).collect();
        ps.dedup();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// True when every torsion summand has 2-power order.
    pub fn only_two_torsion(&self) -> bool {
        self.torsion.keys().all(|q| q.is_power_of_two())
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut g = self.clone();
        g.rank += other.rank;
        for (q, m) in &other.torsion {
            g.add_torsion(*q, *m);
        }
        g
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for (q, m) in &self.torsion {
            if *m == 1 {
                parts.push(format!("Z{q}"));
            } else {
                parts.push(format!("Z{q}^{m}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The prime dividing a prime power.
pub fn prime_of(q: u64) -> u64 {
    if q.is_multiple_of(2) {
        return 2;
    }
    let mut p = 3;
    while p * p <= q {
        if q.is_multiple_of(p) {
            return p;
        }
        p += 2;
    }
    q
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_of(n) == n
}

/// Prime-power decomposition of `n` as (p^k, 1) pairs merged by value.
pub fn primary_parts(n: &BigUint) -> Result<Vec<(u64, u64)>, LinalgError> {
    if n.is_one() || n.is_zero() {
        return Ok(Vec::new());
    }
    let mut m = n
        .to_u64()
        .ok_or_else(|| LinalgError::FactorTooLarge(n.to_string()))?;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            let mut q = 1;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            out.push((q, 1));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|x| BigUint::from(*x)).collect()
    }

    #[test]
    fn diagonal_to_chain() {
        let s = SmithForm::from_diagonal(big(&[6, 4, 1, 0]));
        assert_eq!(s.invariant_factors, big(&[1, 2, 12]));
    }

    #[test]
    fn primary_decomposition() {
        let g = AbelianGroup::from_parts(1, &big(&[12, 2, 1])).unwrap();
        assert_eq!(g.torsion, BTreeMap::from([(2, 1), (3, 1), (4, 1)]));
        assert_eq!(g.p_summands(2), 2);
        assert_eq!(g.primes(), vec![2, 3]);
        assert_eq!(g.to_string(), "Z + Z2 + Z3 + Z4");
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_of(27), 3);
        assert_eq!(prime_of(16), 2);
        assert!(is_prime(97));
        assert!(!is_prime(1));
    }
}
