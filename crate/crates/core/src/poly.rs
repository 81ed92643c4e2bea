//! Laurent polynomials in `q`, bigraded polynomials in `t, q`, and the
//! torsion polynomial indexed by prime powers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::InvariantError;

/// Integer Laurent polynomial in `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c·q^e`.
    pub fn monomial(c: i64, e: i32) -> Self {
        let mut p = LaurentPoly::default();
        p.add_term(e, c);
        p
    }

    /// `q + 1/q`.
    pub fn unknot() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = LaurentPoly::default();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let v = self.coeffs.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, *c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn eval_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Exact quotient by `q + 1/q`.
    pub fn div_unknot(&self) -> Result<Self, InvariantError> {
        // synthetic division from the top: q + q^{-1} = q^{-1}(q^2 + 1)
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some(top) = rem.max_degree() {
            let c = rem.coeff(top);
            // c·q^top = (q + q^{-1})·c·q^{top-1} - c·q^{top-2}
            quot.add_term(top - 1, c);
            rem.add_term(top, -c);
            rem.add_term(top - 2, -c);
            if rem
                .min_degree()
                .is_some_and(|m| m < self.min_degree().unwrap_or(0) - 1)
            {
                return Err(InvariantError::NotDivisible);
            }
        }
        Ok(quot)
    }

    /// `0` or `1` when all exponents share that parity.
    pub fn parity(&self) -> Option<i32> {
        let mut it = self.coeffs.keys().map(|e| e.rem_euclid(2));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// `(-1)^{a-b} c_a c_b ≥ 0` for the coefficients of `q^{2a+γ}`.
    pub fn is_alternating(&self) -> bool {
        let Some(g) = self.parity() else {
            return self.is_zero();
        };
        let signs: Vec<i64> = self
            .terms()
            .map(|(e, c)| {
                if ((e - g) / 2).rem_euclid(2) == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        signs.iter().all(|&c| c > 0) || signs.iter().all(|&c| c < 0)
    }

    /// `|p(√−1)|`, for polynomials of pure parity.
    pub fn abs_at_i(&self) -> Result<u64, InvariantError> {
        if self.is_zero() {
            return Ok(0);
        }
        let g = self.parity().ok_or(InvariantError::MixedParity)?;
        // i^e = i^g · (−1)^{(e−g)/2}
        let s: i64 = self
            .terms()
            .map(|(e, c)| {
                if ((e - g) / 2).rem_euclid(2) == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum();
        Ok(s.unsigned_abs())
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(i64, String)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (c, mono)) in terms.iter().enumerate() {
        let (sign, a) = if *c < 0 {
            ("-", c.unsigned_abs())
        } else {
            ("+", *c as u64)
        };
        if k == 0 {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        match (a, mono.is_empty()) {
            (_, true) => write!(f, "{a}")?,
            (1, false) => write!(f, "{mono}")?,
            (_, false) => write!(f, "{a}{mono}")?,
        }
    }
    Ok(())
}

fn power(var: &str, e: i32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, String)> = self.terms().map(|(e, c)| (c, power("q", e))).collect();
        write_terms(f, &terms)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &-rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

/// Integer polynomial in `t^{±1}, q^{±1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BigradedPoly {
    coeffs: BTreeMap<(i32, i32), i64>,
}

impl BigradedPoly {
    pub fn zero() -> Self {
        BigradedPoly::default()
    }

    pub fn add_term(&mut self, i: i32, j: i32, c: i64) {
        if c == 0 {
            return;
        }
        let v = self.coeffs.entry((i, j)).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: i32, j: i32) -> i64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero terms as `((t power, q power), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_negative(&self) -> bool {
        self.coeffs.values().any(|&c| c < 0)
    }

    /// Multiplies by `t^a q^b`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        BigradedPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|((i, j), c)| ((i + a, j + b), *c))
                .collect(),
        }
    }

    /// Substitutes `t = ±1`.
    pub fn at_t(&self, t: i64) -> LaurentPoly {
        assert!(t == 1 || t == -1);
        LaurentPoly::from_terms(
            self.terms()
                .map(|((i, j), c)| (j, if t == -1 && i % 2 != 0 { -c } else { c })),
        )
    }

    /// True when every term is a power of `t q^2`.
    pub fn in_tq2(&self) -> bool {
        self.coeffs.keys().all(|(i, j)| *j == 2 * i)
    }
}

impl Add for &BigradedPoly {
    type Output = BigradedPoly;
    fn add(self, rhs: &BigradedPoly) -> BigradedPoly {
        let mut out = self.clone();
        for ((i, j), c) in rhs.terms() {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &BigradedPoly {
    type Output = BigradedPoly;
    fn sub(self, rhs: &BigradedPoly) -> BigradedPoly {
        let mut out = self.clone();
        for ((i, j), c) in rhs.terms() {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &BigradedPoly {
    type Output = BigradedPoly;
    fn mul(self, rhs: &BigradedPoly) -> BigradedPoly {
        let mut out = BigradedPoly::zero();
        for ((a, b), x) in self.terms() {
            for ((c, d), y) in rhs.terms() {
                out.add_term(a + c, b + d, x * y);
            }
        }
        out
    }
}

impl fmt::Display for BigradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, String)> = self
            .terms()
            .map(|((i, j), c)| (c, format!("{}{}", power("t", i), power("q", j))))
            .collect();
        write_terms(f, &terms)
    }
}

/// `Σ t^i Q_{p^k}^j t_{p^k}^{i,j}`, keyed by `(i, p^k, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TorsionPoly {
    coeffs: BTreeMap<(i32, u64, i32), u64>,
}

impl TorsionPoly {
    pub fn add_term(&mut self, i: i32, prime_power: u64, j: i32, mult: u64) {
        if mult > 0 {
            *self.coeffs.entry((i, prime_power, j)).or_insert(0) += mult;
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, u64, i32), u64)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn prime_powers(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.coeffs.keys().map(|k| k.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Sets every `Q_{p^k}` with `p^k` accepted by `keep` to `q` and drops the
    /// rest.
    pub fn specialize(&self, keep: impl Fn(u64) -> bool) -> BigradedPoly {
        let mut out = BigradedPoly::zero();
        for ((i, q, j), m) in self.terms() {
            if keep(q) {
                out.add_term(i, j, m as i64);
            }
        }
        out
    }
}

impl fmt::Display for TorsionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, String)> = self
            .terms()
            .map(|((i, q, j), m)| {
                (
                    m as i64,
                    format!("{}{}", power("t", i), power(&format!("Q{q}"), j)),
                )
            })
            .collect();
        write_terms(f, &terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let u = LaurentPoly::unknot();
        assert_eq!(u.to_string(), "q^-1 + q");
        let sq = &u * &u;
        assert_eq!(sq.to_string(), "q^-2 + 2 + q^2");
        assert_eq!(sq.div_unknot().unwrap(), u);
        assert_eq!((&sq - &sq).to_string(), "0");
        assert_eq!(LaurentPoly::monomial(-3, 2).to_string(), "-3q^2");
    }

    #[test]
    fn division_by_unknot_detects_remainder() {
        assert!(LaurentPoly::monomial(1, 0).div_unknot().is_err());
        let p = LaurentPoly::from_terms([(1, 1), (3, 1)]);
        assert_eq!(p.div_unknot().unwrap(), LaurentPoly::monomial(1, 2));
    }

    #[test]
    fn determinant_at_i() {
        // trefoil Jones q^2 + q^6 - q^8
        let j = LaurentPoly::from_terms([(2, 1), (6, 1), (8, -1)]);
        assert_eq!(j.abs_at_i().unwrap(), 3);
        assert!(j.is_alternating());
        assert!(!LaurentPoly::from_terms([(0, 1), (2, 1)]).is_alternating());
        let alt = LaurentPoly::from_terms([(2, 1), (4, -1), (6, 1)]);
        assert!(alt.is_alternating());
        assert!(LaurentPoly::from_terms([(0, 1), (1, 1)])
            .abs_at_i()
            .is_err());
    }

    #[test]
    fn bigraded_at_minus_one() {
        let mut kh = BigradedPoly::zero();
        kh.add_term(0, 1, 1);
        kh.add_term(2, 5, 1);
        kh.add_term(3, 9, 1);
        kh.add_term(1, 3, 2);
        assert_eq!(
            kh.at_t(-1),
            LaurentPoly::from_terms([(1, 1), (5, 1), (9, -1), (3, -2)])
        );
        assert_eq!(kh.to_string(), "q + 2tq^3 + t^2q^5 + t^3q^9");
    }
}
