//! Arithmetic of the Eisenstein integers `Z[j]`, `j^2 + j + 1 = 0`.
//!
//! The ring is principal with unit group `{±1, ±j, ±j^2}`. The element
//! `r = 1 + 2j` satisfies `r^2 = -3` and generates the ramified prime over 3;
//! rational primes split when `p = 1 mod 3` and stay inert when `p = 2 mod 3`.

use crate::arith::{factorize, is_prime};
use crate::{Km3Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// `x + y j` with `j^2 + j + 1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EisensteinInt {
    pub x: i64,
    pub y: i64,
}

/// The ramified prime `r = 1 + 2j` with `r^2 = -3`.
pub const R: EisensteinInt = EisensteinInt { x: 1, y: 2 };

impl EisensteinInt {
    pub const fn new(x: i64, y: i64) -> Self {
        EisensteinInt { x, y }
    }

    pub const fn zero() -> Self {
        Self::new(0, 0)
    }

    pub const fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(n, 0)
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// `x^2 - x y + y^2 >= 0`.
    pub fn norm(self) -> i64 {
        self.x * self.x - self.x * self.y + self.y * self.y
    }

    /// `conj(x + y j) = (x - y) - y j`.
    pub fn conj(self) -> Self {
        Self::new(self.x - self.y, -self.y)
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// The six units `±1, ±j, ±j^2`.
    pub fn units() -> [Self; 6] {
        [
            Self::new(1, 0),
            Self::new(-1, 0),
            Self::new(0, 1),
            Self::new(0, -1),
            Self::new(-1, -1),
            Self::new(1, 1),
        ]
    }

    pub fn associates(self) -> [Self; 6] {
        Self::units().map(|u| self * u)
    }

    /// Exact division; `None` unless `d` divides `self`.
    pub fn div_exact(self, d: Self) -> Option<Self> {
        assert!(!d.is_zero());
        let n = d.norm();
        let t = self * d.conj();
        if t.x % n == 0 && t.y % n == 0 {
            Some(Self::new(t.x / n, t.y / n))
        } else {
            None
        }
    }

    pub fn pow(self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self;
        }
        acc
    }

    /// Deterministic representative among the six associates: the one with
    /// `x > 0` and `0 <= y < x` when that sector is hit, otherwise the
    /// lexicographically smallest `(x, y)` with `x >= 0`.
    pub fn canonical_associate(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let assoc = self.associates();
        if let Some(best) = assoc
            .iter()
            .filter(|a| a.x > 0 && a.y >= 0 && a.y < a.x)
            .min_by_key(|a| (a.x, a.y))
        {
            return *best;
        }
        *assoc
            .iter()
            .filter(|a| a.x >= 0)
            .min_by_key(|a| (a.x, a.y))
            .expect("some associate has x >= 0")
    }
}

impl Add for EisensteinInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for EisensteinInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for EisensteinInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul for EisensteinInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (x1 + y1 j)(x2 + y2 j), using j^2 = -1 - j.
        Self::new(
            self.x * o.x - self.y * o.y,
            self.x * o.y + self.y * o.x - self.y * o.y,
        )
    }
}

impl std::fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}j", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// Splitting behavior of a positive rational prime in `Z[j]`.
pub fn splitting_type(p: i64) -> Result<SplittingType> {
    if p <= 0 || !is_prime(p) {
        return Err(Km3Error::NotPrime(p));
    }
    Ok(match p % 3 {
        1 => SplittingType::Split,
        2 => SplittingType::Inert,
        _ => SplittingType::Ramified,
    })
}

/// The canonical prime of `Z[j]` above a positive rational prime:
/// `r` for 3, a fixed solution of `norm = p` for split `p`, and `p` itself
/// when inert.
pub fn prime_above(p: i64) -> Result<EisensteinInt> {
    match splitting_type(p)? {
        SplittingType::Ramified => Ok(R),
        SplittingType::Inert => Ok(EisensteinInt::from_int(p)),
        SplittingType::Split => {
            let sols = norm_solutions(p);
            let a = sols[0].canonical_associate();
            let b = sols[0].conj().canonical_associate();
            Ok(a.min(b))
        }
    }
}

/// All `mu` with `norm(mu) = n`, one per orbit under units *and* conjugation,
/// canonically chosen. Empty iff some inert prime divides `n` to an odd
/// power.
pub fn solve_norm_equation(n: i64) -> Result<Vec<EisensteinInt>> {
    if n < 0 {
        return Ok(Vec::new());
    }
    factorize(n.max(1))?; // propagate bound errors early
    if n == 0 {
        return Ok(vec![EisensteinInt::zero()]);
    }
    let mut reps = std::collections::BTreeSet::new();
    for s in norm_solutions(n) {
        let a = s.canonical_associate();
        let b = s.conj().canonical_associate();
        reps.insert(a.min(b));
    }
    Ok(reps.into_iter().collect())
}

/// Raw solutions of `x^2 - x y + y^2 = n`, all of them.
fn norm_solutions(n: i64) -> Vec<EisensteinInt> {
    // x^2 - xy + y^2 = ((2x - y)^2 + 3 y^2)/4, so |y| <= 2 sqrt(n/3).
    let mut out = Vec::new();
    let ybound = crate::linalg::isqrt(4 * n / 3) + 1;
    for y in -ybound..=ybound {
        // x^2 - xy + (y^2 - n) = 0
        let disc = y * y - 4 * (y * y - n);
        if disc < 0 {
            continue;
        }
        let s = crate::linalg::isqrt(disc);
        if s * s != disc {
            continue;
        }
        for x2 in [y + s, y - s] {
            if x2 % 2 == 0 {
                let c = EisensteinInt::new(x2 / 2, y);
                if c.norm() == n && !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Factorization of a nonzero Eisenstein integer as
/// `unit * r^a * prod(pi_i^{e_i})` over canonical primes.
#[derive(Debug, Clone)]
pub struct EisFactorization {
    pub unit: EisensteinInt,
    /// `(prime, exponent)`, where split primes appear as conjugate pairs
    /// `pi` and `conj(pi)` independently.
    pub factors: Vec<(EisensteinInt, u32)>,
}

impl EisFactorization {
    pub fn value(&self) -> EisensteinInt {
        self.factors
            .iter()
            .fold(self.unit, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Factor `mu` by factoring its norm and dividing out canonical primes.
pub fn factor(mu: EisensteinInt) -> Result<EisFactorization> {
    if mu.is_zero() {
        return Err(Km3Error::FactorZero);
    }
    let nf = factorize(mu.norm())?;
    let mut rest = mu;
    let mut factors = Vec::new();
    for (p, _) in nf.factors {
        match splitting_type(p)? {
            SplittingType::Ramified => {
                let mut e = 0;
                while let Some(q) = rest.div_exact(R) {
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    factors.push((R, e));
                }
            }
            SplittingType::Inert => {
                let pi = EisensteinInt::from_int(p);
                let mut e = 0;
                while let Some(q) = rest.div_exact(pi) {
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    factors.push((pi, e));
                }
            }
            SplittingType::Split => {
                let pi = prime_above(p)?;
                for prime in [pi, pi.conj()] {
                    let mut e = 0;
                    while let Some(q) = rest.div_exact(prime) {
                        rest = q;
                        e += 1;
                    }
                    if e > 0 {
                        factors.push((prime, e));
                    }
                }
            }
        }
    }
    debug_assert!(rest.is_unit(), "leftover non-unit after factoring");
    Ok(EisFactorization { unit: rest, factors })
}

/// Concentrate the split-prime content of `mu` on the canonical prime of
/// each conjugate pair. Returns `(mu'', delta)` where conjugation by `delta`
/// carries the order attached to `mu` onto the one attached to `mu''`;
/// `norm(mu'') = norm(mu)` and `delta = prod pi_i^{b_i}` collects the
/// conjugate-prime exponents.
pub fn normalize_split(mu: EisensteinInt) -> Result<(EisensteinInt, EisensteinInt)> {
    let f = factor(mu)?;
    let mut normalized = EisensteinInt::one();
    let mut delta = EisensteinInt::one();
    let mut split_exp: std::collections::BTreeMap<i64, (EisensteinInt, u32, u32)> =
        std::collections::BTreeMap::new();
    for (prime, e) in &f.factors {
        let n = prime.norm();
        if is_prime(n) && n % 3 == 1 {
            let canon = prime_above(n)?;
            let entry = split_exp.entry(n).or_insert((canon, 0, 0));
            if *prime == canon {
                entry.1 += e;
            } else {
                entry.2 += e;
            }
        } else {
            normalized = normalized * prime.pow(*e);
        }
    }
    for (_, (canon, a, b)) in split_exp {
        normalized = normalized * canon.pow(a + b);
        delta = delta * canon.pow(b);
    }
    Ok((normalized.canonical_associate(), delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norm_examples() {
        assert_eq!(R.norm(), 3);
        assert_eq!(EisensteinInt::new(3, 1).norm(), 7);
        assert_eq!(EisensteinInt::zero().norm(), 0);
    }

    #[test]
    fn r_squared_is_minus_3() {
        assert_eq!(R * R, EisensteinInt::from_int(-3));
    }

    #[test]
    fn j_satisfies_its_equation() {
        let j = EisensteinInt::new(0, 1);
        assert_eq!(j * j + j + EisensteinInt::one(), EisensteinInt::zero());
    }

    #[test]
    fn conj_is_ring_involution() {
        let a = EisensteinInt::new(3, -2);
        let b = EisensteinInt::new(-1, 5);
        assert_eq!((a * b).conj(), a.conj() * b.conj());
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a * a.conj(), EisensteinInt::from_int(a.norm()));
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(7).unwrap(), SplittingType::Split);
        assert_eq!(splitting_type(5).unwrap(), SplittingType::Inert);
        assert_eq!(splitting_type(3).unwrap(), SplittingType::Ramified);
        assert!(splitting_type(6).is_err());
    }

    #[test]
    fn norm_equation_examples() {
        // One merged class for a split prime; the spec's 3 + j generates it.
        let sols = solve_norm_equation(7).unwrap();
        assert_eq!(sols.len(), 1);
        let rep = sols[0];
        assert!(EisensteinInt::new(3, 1)
            .associates()
            .contains(&rep));

        let sols = solve_norm_equation(3).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(R.associates().contains(&sols[0]));

        assert!(solve_norm_equation(2).unwrap().is_empty());
    }

    #[test]
    fn norm_equation_solvability_criterion() {
        // Solvable iff every prime 2 mod 3 occurs to an even power.
        for n in 1..=500 {
            let f = factorize(n).unwrap();
            let expect = f
                .factors
                .iter()
                .all(|&(p, e)| p % 3 != 2 || e % 2 == 0);
            let got = !solve_norm_equation(n).unwrap().is_empty();
            assert_eq!(got, expect, "n = {n}");
        }
    }

    #[test]
    fn canonical_associate_is_stable() {
        let a = EisensteinInt::new(3, 1);
        for u in EisensteinInt::units() {
            assert_eq!((a * u).canonical_associate(), a.canonical_associate());
        }
    }

    #[test]
    fn normalize_split_examples() {
        let (n, d) = normalize_split(EisensteinInt::new(3, 1)).unwrap();
        assert_eq!(n, EisensteinInt::new(3, 1));
        assert_eq!(d, EisensteinInt::one());

        let (n, d) = normalize_split(EisensteinInt::from_int(7)).unwrap();
        assert_eq!(n.norm(), 49);
        let pi = prime_above(7).unwrap();
        assert_eq!(n, (pi * pi).canonical_associate());
        assert_eq!(d, pi);

        let (n, d) = normalize_split(EisensteinInt::from_int(5)).unwrap();
        assert_eq!(n, EisensteinInt::from_int(5).canonical_associate());
        assert_eq!(d, EisensteinInt::one());
    }

    #[test]
    fn normalize_split_preserves_content() {
        for &(x, y) in &[(7, 0), (3, 1), (14, 7), (6, 3), (10, 1), (21, 7), (5, 40)] {
            let mu = EisensteinInt::new(x, y);
            let (n, _d) = normalize_split(mu).unwrap();
            assert_eq!(n.norm(), mu.norm(), "mu = {mu}");
            // Total exponent at each split rational prime is preserved.
            let before = factorize(mu.norm()).unwrap();
            let after = factorize(n.norm()).unwrap();
            assert_eq!(before, after);
        }
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(
            x1 in -20i64..20, y1 in -20i64..20,
            x2 in -20i64..20, y2 in -20i64..20,
        ) {
            let a = EisensteinInt::new(x1, y1);
            let b = EisensteinInt::new(x2, y2);
            prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
        }

        #[test]
        fn factor_roundtrip(
            x in -25i64..25, y in -25i64..25,
        ) {
            prop_assume!(x != 0 || y != 0);
            let mu = EisensteinInt::new(x, y);
            let f = factor(mu).unwrap();
            prop_assert!(f.unit.is_unit());
            prop_assert_eq!(f.value(), mu);
        }
    }
}
