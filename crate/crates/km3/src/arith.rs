//! Elementary exact number theory: factorization, quadratic symbols, Hilbert
//! symbols, Smith normal form, and local solvability of rank-4 diagonal
//! forms.
//!
//! Throughout, the real place is treated as the prime `-1` (with completion
//! the reals), so one `Place` type covers everything.

use crate::linalg::{Mat, Rat};
use crate::{Km3Error, Result};
use num::{One, Signed, Zero};

/// Trial-division bound for `factorize`. Everything this crate ever factors
/// is tiny; the bound exists so a pathological input fails loudly instead of
/// spinning.
pub const FACTOR_BOUND: i64 = 1 << 48;

/// A prime factorization `sign * prod p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i64,
    pub factors: Vec<(i64, u32)>,
}

impl Factorization {
    /// Reassemble the factored integer.
    pub fn value(&self) -> i64 {
        self.factors
            .iter()
            .fold(self.sign, |acc, &(p, e)| acc * p.pow(e))
    }

    pub fn primes(&self) -> impl Iterator<Item = i64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: i64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// A place of the rationals: the real place (tag -1) or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Place(i64);

impl Place {
    pub const REAL: Place = Place(-1);

    pub fn finite(p: i64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place(p))
        } else {
            Err(Km3Error::NotPrime(p))
        }
    }

    pub fn new(tag: i64) -> Result<Place> {
        if tag == -1 {
            Ok(Place::REAL)
        } else {
            Place::finite(tag)
        }
    }

    pub fn is_real(self) -> bool {
        self.0 == -1
    }

    pub fn prime(self) -> i64 {
        self.0
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic primality by trial division; inputs here are tiny.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Factor a nonzero integer by trial division.
pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return Err(Km3Error::FactorZero);
    }
    let sign = n.signum();
    let mut m = n.abs();
    if m > FACTOR_BOUND {
        return Err(Km3Error::FactorBoundExceeded {
            n,
            bound: FACTOR_BOUND,
        });
    }
    let mut factors = Vec::new();
    let mut push = |p: i64, m: &mut i64| {
        let mut e = 0u32;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    let mut p = 3;
    while p * p <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(Factorization { sign, factors })
}

/// Square-free part of a nonzero integer, sign preserved.
pub fn squarefree_part(n: i64) -> Result<i64> {
    let f = factorize(n)?;
    Ok(f.factors
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .fold(f.sign, |acc, &(p, _)| acc * p))
}

/// Legendre symbol for odd `p`, Kronecker rule at `p = 2`.
pub fn kronecker_symbol(d: i64, p: i64) -> Result<i32> {
    if !is_prime(p) || p < 2 {
        return Err(Km3Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        });
    }
    let d = d.rem_euclid(p);
    if d == 0 {
        return Ok(0);
    }
    // Euler's criterion via modular exponentiation.
    let e = pow_mod(d, (p - 1) as u64 / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

fn pow_mod(base: i64, mut exp: u64, m: i64) -> i64 {
    let mut acc: i128 = 1;
    let mm = m as i128;
    let mut b = base.rem_euclid(m) as i128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        exp >>= 1;
    }
    acc as i64
}

fn val_and_unit(x: Rat, p: i64) -> (i64, Rat) {
    // x = p^v * u with u a p-adic unit (numerator and denominator prime to p).
    let mut v = 0i64;
    let mut num = *x.numer();
    let mut den = *x.denom();
    while num % p == 0 {
        num /= p;
        v += 1;
    }
    while den % p == 0 {
        den /= p;
        v -= 1;
    }
    (v, Rat::new(num, den))
}

/// Legendre symbol of a rational unit at odd `p`.
fn unit_symbol(u: Rat, p: i64) -> i32 {
    let num = u.numer().rem_euclid(p);
    let den = u.denom().rem_euclid(p);
    let inv = pow_mod(den, (p - 2) as u64, p);
    let r = (num as i128 * inv as i128).rem_euclid(p as i128) as i64;
    kronecker_symbol(r, p).expect("p prime")
}

/// Hilbert symbol `(a, b)_p` on nonzero rationals; `p` may be the real place.
///
/// Returns 1 exactly when `z^2 = a x^2 + b y^2` has a nontrivial solution in
/// the completion at `p`.
pub fn hilbert_symbol(a: Rat, b: Rat, p: Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "hilbert symbol needs nonzero arguments");
    if p.is_real() {
        return if a.is_negative() && b.is_negative() { -1 } else { 1 };
    }
    let q = p.prime();
    let (alpha, u) = val_and_unit(a, q);
    let (beta, v) = val_and_unit(b, q);
    if q == 2 {
        let um = rat_mod_pow2(u, 8);
        let vm = rat_mod_pow2(v, 8);
        let eps = |x: i64| ((x - 1) / 2) & 1; // (x-1)/2 mod 2 for odd x
        let omega = |x: i64| ((x * x - 1) / 8) & 1;
        let exp = eps(um) * eps(vm) + alpha.rem_euclid(2) * omega(vm) + beta.rem_euclid(2) * omega(um);
        if exp % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let e = ((q - 1) / 2) % 2;
        let mut sign = 1i32;
        if alpha % 2 != 0 && beta % 2 != 0 && e == 1 {
            sign = -sign;
        }
        if beta % 2 != 0 {
            sign *= unit_symbol(u, q);
        }
        if alpha % 2 != 0 {
            sign *= unit_symbol(v, q);
        }
        sign
    }
}

/// Representative of a 2-adic unit modulo `m` (odd numerator/denominator).
fn rat_mod_pow2(u: Rat, m: i64) -> i64 {
    let num = u.numer().rem_euclid(m);
    let den = u.denom().rem_euclid(m);
    // invert odd den mod m (m a power of two): brute force, m is 8.
    let inv = (1..m).step_by(2).find(|&x| (x * den) % m == 1).unwrap();
    let r = (num * inv).rem_euclid(m);
    if r == 0 {
        m
    } else {
        r
    }
}

/// True when the nonzero rational `x` is a square in the completion at `p`.
pub fn is_local_square(x: Rat, p: Place) -> bool {
    assert!(!x.is_zero());
    if p.is_real() {
        return x.is_positive();
    }
    let q = p.prime();
    let (v, u) = val_and_unit(x, q);
    if v % 2 != 0 {
        return false;
    }
    if q == 2 {
        rat_mod_pow2(u, 8) == 1
    } else {
        unit_symbol(u, q) == 1
    }
}

/// Square-free product of the primes `p = 2 mod 3` dividing `c` to an odd
/// power. An isogeny-class invariant of the polarization square.
pub fn rad2(c: i64) -> Result<i64> {
    let f = factorize(c)?;
    Ok(f.factors
        .iter()
        .filter(|&&(p, e)| e % 2 == 1 && p % 3 == 2)
        .map(|&(p, _)| p)
        .product())
}

/// Smith normal form `U * M * V = D` with unimodular `U`, `V` and diagonal
/// `D` whose entries form a divisor chain.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: Mat<i64>,
    pub d: Mat<i64>,
    pub v: Mat<i64>,
}

pub fn smith_normal_form(m: &Mat<i64>) -> Snf {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.clone();
    let mut u = Mat::<i64>::identity(rows);
    let mut v = Mat::<i64>::identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        'outer: loop {
            // Pivot: smallest nonzero |entry| in the remaining block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)] != 0
                        && pivot.map_or(true, |(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                let q = div_round(a[(i, t)], a[(t, t)]);
                if q != 0 {
                    for j in 0..cols {
                        a[(i, j)] -= q * a[(t, j)];
                    }
                    for j in 0..rows {
                        u[(i, j)] -= q * u[(t, j)];
                    }
                }
                if a[(i, t)] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = div_round(a[(t, j)], a[(t, t)]);
                if q != 0 {
                    for i in 0..rows {
                        a[(i, j)] -= q * a[(i, t)];
                    }
                    for i in 0..cols {
                        v[(i, j)] -= q * v[(i, t)];
                    }
                }
                if a[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column t are clear; enforce divisibility of the rest.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if a[(i, j)] % a[(t, t)] != 0 {
                        // Fold row i into row t and restart this pivot.
                        for c in 0..cols {
                            a[(t, c)] += a[(i, c)];
                        }
                        for c in 0..rows {
                            u[(t, c)] += u[(i, c)];
                        }
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }
    // Positive diagonal.
    for t in 0..steps {
        if a[(t, t)] < 0 {
            for j in 0..cols {
                a[(t, j)] = -a[(t, j)];
            }
            for j in 0..rows {
                u[(t, j)] = -u[(t, j)];
            }
        }
    }
    Snf { u, d: a, v }
}

fn div_round(a: i64, b: i64) -> i64 {
    // Round-to-nearest quotient keeps pivots small.
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + r.signum() * b.signum()
    } else {
        q
    }
}

/// The two invariants of a nondegenerate diagonal quadratic form over a
/// completion: the square class of the discriminant (as a square-free
/// integer) and the product of pairwise Hilbert symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalInvariants {
    pub d: i64,
    pub eps: i32,
}

pub fn local_invariants(diag: &[Rat], p: Place) -> Result<LocalInvariants> {
    if diag.iter().any(|c| c.is_zero()) {
        return Err(Km3Error::ZeroCoefficient);
    }
    let prod = diag.iter().fold(Rat::one(), |acc, &c| acc * c);
    let d = squarefree_part(prod.numer() * prod.denom())?;
    let mut eps = 1i32;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            eps *= hilbert_symbol(diag[i], diag[j], p);
        }
    }
    Ok(LocalInvariants { d, eps })
}

/// Isotropy of a nondegenerate rank-4 diagonal form over the completion at
/// `p`: the form represents zero iff its discriminant is not a local square,
/// or it is and `eps = (-1,-1)_p`.
pub fn rank4_represents_zero(diag: &[Rat; 4], p: Place) -> bool {
    let inv = local_invariants(&diag[..], p).expect("nonzero coefficients");
    let d = Rat::from_integer(inv.d);
    if !is_local_square(d, p) {
        true
    } else {
        inv.eps == hilbert_symbol(-Rat::one(), -Rat::one(), p)
    }
}

/// Hensel-certified exhaustive isotropy decision for a rank-4 diagonal form
/// with integer coefficients, independent of the symbol-based criterion.
///
/// Coefficients are first replaced by their square-free parts (an exact
/// substitution `x -> x/p^e`). At the real place signs decide. For odd `p`
/// a solution modulo `p` with a unit gradient coordinate certifies a zero;
/// the search runs on the form and on its `p`-swapped companion (scaling
/// out one `p` after sending the unit-coefficient coordinates to `p y`).
/// At `p = 2` the search runs modulo 32 with the quantitative lifting
/// condition `2 v(2 a_i x_i) < 5`.
pub fn isotropy_brute_force(diag: &[i64; 4], p: Place) -> Result<bool> {
    if diag.iter().any(|&c| c == 0) {
        return Err(Km3Error::ZeroCoefficient);
    }
    let mut a = [0i64; 4];
    for i in 0..4 {
        a[i] = squarefree_part(diag[i])?;
    }
    if p.is_real() {
        return Ok(a.iter().any(|&c| c > 0) && a.iter().any(|&c| c < 0));
    }
    let q = p.prime();
    if q == 2 {
        let m = 32i64;
        for x0 in 0..m {
            for x1 in 0..m {
                for x2 in 0..m {
                    for x3 in 0..m {
                        let x = [x0, x1, x2, x3];
                        if x == [0; 4] {
                            continue;
                        }
                        let s: i64 = (0..4).map(|i| a[i] * x[i] * x[i]).sum();
                        if s.rem_euclid(m) != 0 {
                            continue;
                        }
                        let v = (0..4)
                            .filter(|&i| x[i] != 0)
                            .map(|i| (2 * a[i] * x[i]).trailing_zeros().min(5))
                            .min()
                            .unwrap_or(5);
                        if 2 * v < 5 {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        return Ok(false);
    }
    // Odd p: witness mod p with a unit gradient, on the form or its swap.
    let stage = |coeffs: [i64; 4]| -> bool {
        for x0 in 0..q {
            for x1 in 0..q {
                for x2 in 0..q {
                    for x3 in 0..q {
                        let x = [x0, x1, x2, x3];
                        let s: i64 = (0..4).map(|i| coeffs[i] * x[i] * x[i]).sum();
                        if s.rem_euclid(q) == 0
                            && (0..4).any(|i| (coeffs[i] * x[i]).rem_euclid(q) != 0)
                        {
                            return true;
                        }
                    }
                }
            }
        }
        false
    };
    if stage(a) {
        return Ok(true);
    }
    let mut swapped = [0i64; 4];
    for i in 0..4 {
        swapped[i] = if a[i] % q == 0 { a[i] / q } else { a[i] * q };
    }
    Ok(stage(swapped))
}
