//! Quaternion algebras `(a,b)/Q` and the orders in them that contain the
//! Eisenstein integers.
//!
//! The algebras of interest are `(-3, d)` with `d` square-free and every
//! prime factor of `d` congruent to `2 mod 3`. Such an algebra carries the
//! maximal order `O_m` with basis `1, j, theta, j*theta` and, for each
//! Eisenstein integer `mu`, the suborder `O_mu = Z[j] + Z[j] mu theta` of
//! reduced discriminant `norm(mu) * D_H`. Counting data for the associated
//! Shimura curve (order-3 elliptic points, structure counts) lives here too.

use crate::arith::{self, factorize, hilbert_symbol, kronecker_symbol, rad2, Place};
use crate::eisenstein::{self, EisensteinInt};
use crate::linalg::{rat, Mat, Rat};
use crate::{Km3Error, Result};
use num::Zero;
use std::collections::BTreeSet;

/// The algebra `(a, b)/Q` with generators `alpha^2 = a`, `beta^2 = b`,
/// `alpha beta = -beta alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuatAlgebra {
    pub a: Rat,
    pub b: Rat,
}

impl QuatAlgebra {
    pub fn new(a: Rat, b: Rat) -> Self {
        assert!(!a.is_zero() && !b.is_zero());
        QuatAlgebra { a, b }
    }

    pub fn minus3(d: i64) -> Self {
        Self::new(rat(-3, 1), rat(d, 1))
    }
}

/// `w = x + y alpha + z beta + t alpha beta` with exact rational coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuatElement {
    pub algebra: QuatAlgebra,
    pub coords: [Rat; 4],
}

impl QuatElement {
    pub fn new(algebra: QuatAlgebra, coords: [Rat; 4]) -> Self {
        QuatElement { algebra, coords }
    }

    pub fn from_ints(algebra: QuatAlgebra, c: [i64; 4]) -> Self {
        Self::new(algebra, c.map(Rat::from_integer))
    }

    pub fn zero(algebra: QuatAlgebra) -> Self {
        Self::new(algebra, [Rat::zero(); 4])
    }

    pub fn one(algebra: QuatAlgebra) -> Self {
        Self::from_ints(algebra, [1, 0, 0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn conj(&self) -> Self {
        let [x, y, z, t] = self.coords;
        Self::new(self.algebra, [x, -y, -z, -t])
    }

    pub fn reduced_trace(&self) -> Rat {
        self.coords[0] + self.coords[0]
    }

    pub fn reduced_norm(&self) -> Rat {
        let [x, y, z, t] = self.coords;
        let QuatAlgebra { a, b } = self.algebra;
        x * x - a * y * y - b * z * z + a * b * t * t
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.algebra, o.algebra);
        let mut c = self.coords;
        for i in 0..4 {
            c[i] += o.coords[i];
        }
        Self::new(self.algebra, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.algebra, o.algebra);
        let mut c = self.coords;
        for i in 0..4 {
            c[i] -= o.coords[i];
        }
        Self::new(self.algebra, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.algebra, self.coords.map(|c| -c))
    }

    pub fn scale(&self, s: Rat) -> Self {
        Self::new(self.algebra, self.coords.map(|c| c * s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.algebra, o.algebra);
        let [x1, y1, z1, t1] = self.coords;
        let [x2, y2, z2, t2] = o.coords;
        let QuatAlgebra { a, b } = self.algebra;
        Self::new(
            self.algebra,
            [
                x1 * x2 + a * y1 * y2 + b * z1 * z2 - a * b * t1 * t2,
                x1 * y2 + y1 * x2 - b * z1 * t2 + b * t1 * z2,
                x1 * z2 + z1 * x2 + a * y1 * t2 - a * t1 * y2,
                x1 * t2 + t1 * x2 + y1 * z2 - z1 * y2,
            ],
        )
    }

    /// Multiplicative inverse of an element of nonzero norm: `conj / norm`.
    pub fn inverse(&self) -> Self {
        let n = self.reduced_norm();
        assert!(!n.is_zero(), "inverse of a zero-norm element");
        self.conj().scale(n.recip())
    }
}

/// Image of `x + y j` under `Z[j] -> H`, `j = (-1 + alpha)/2`.
pub fn embed_eisenstein(algebra: QuatAlgebra, mu: EisensteinInt) -> QuatElement {
    QuatElement::new(
        algebra,
        [
            Rat::from_integer(mu.x) - rat(mu.y, 2),
            rat(mu.y, 2),
            Rat::zero(),
            Rat::zero(),
        ],
    )
}

/// Places where `H = (a,b)` ramifies: `{p : (a,b)_p = -1}`, always of even
/// cardinality. The real place appears as `-1`.
pub fn ramified_places(h: &QuatAlgebra) -> Result<BTreeSet<Place>> {
    let mut candidates: BTreeSet<i64> = BTreeSet::from([-1, 2]);
    for r in [h.a, h.b] {
        for v in [*r.numer(), *r.denom()] {
            for p in factorize(v)?.primes() {
                candidates.insert(p);
            }
        }
    }
    let mut out = BTreeSet::new();
    for p in candidates {
        let place = Place::new(p)?;
        if hilbert_symbol(h.a, h.b, place) == -1 {
            out.insert(place);
        }
    }
    debug_assert!(out.len() % 2 == 0, "ramification set must be even");
    Ok(out)
}

/// Reduce `d` so that `(-3, d) = (-3, d_H)` with `d_H` square-free and all
/// prime factors `2 mod 3`: strip squares, strip 3, strip split primes.
pub fn normalize_minus3(d: i64) -> Result<i64> {
    if d == 0 {
        return Err(Km3Error::FactorZero);
    }
    let mut d = arith::squarefree_part(d)?;
    if d % 3 == 0 {
        d /= 3;
    }
    for p in factorize(d)?.primes() {
        if p % 3 == 1 {
            d /= p;
        }
    }
    Ok(d)
}

/// `d` square-free with every (positive) prime factor `2 mod 3`; the sign is
/// free (`-1` counts as such a prime).
pub fn is_admissible(d: i64) -> bool {
    match factorize(d) {
        Ok(f) => f.is_squarefree() && f.primes().all(|p| p % 3 == 2),
        Err(_) => false,
    }
}

/// Reduced discriminant of `(-3, d_H)`: the finite part (`|d_H|` or
/// `3|d_H|` according to the parity of the number of prime factors, counting
/// `-1`), plus a flag for ramification at the real place.
pub fn algebra_discriminant(d_h: i64) -> Result<(i64, bool)> {
    if !is_admissible(d_h) {
        return Err(Km3Error::InadmissibleD(d_h));
    }
    let f = factorize(d_h)?;
    let mut m = f.factors.len();
    if d_h < 0 {
        m += 1;
    }
    let finite = if m % 2 == 0 { d_h.abs() } else { 3 * d_h.abs() };
    Ok((finite, d_h < 0))
}

/// A rank-4 order, held as a basis with cached trace Gram and reduced
/// discriminant. Construction verifies the ring axioms.
#[derive(Debug, Clone)]
pub struct QuatOrder {
    pub algebra: QuatAlgebra,
    pub basis: [QuatElement; 4],
    pub trace_gram: Mat<i64>,
    pub reduced_discriminant: i64,
}

impl QuatOrder {
    pub fn try_new(algebra: QuatAlgebra, basis: [QuatElement; 4]) -> Result<Self> {
        let b = basis_matrix(&basis);
        let binv = b
            .inverse()
            .ok_or_else(|| Km3Error::NotAnOrder("basis is not full rank".into()))?;
        let in_lattice = |w: &QuatElement| binv.mul_vec(&w.coords).iter().all(Rat::is_integer);
        if !in_lattice(&QuatElement::one(algebra)) {
            return Err(Km3Error::NotAnOrder("1 is not in the lattice".into()));
        }
        for v in &basis {
            if !v.reduced_trace().is_integer() || !v.reduced_norm().is_integer() {
                return Err(Km3Error::NotAnOrder("basis element is not integral".into()));
            }
        }
        for v in &basis {
            for w in &basis {
                if !in_lattice(&v.mul(w)) {
                    return Err(Km3Error::NotAnOrder(
                        "lattice is not closed under multiplication".into(),
                    ));
                }
            }
        }
        let mut gram = Mat::<Rat>::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                gram[(i, j)] = basis[i].mul(&basis[j]).reduced_trace();
            }
        }
        let gram = gram
            .to_int()
            .ok_or_else(|| Km3Error::NotAnOrder("trace Gram is not integral".into()))?;
        let det = gram.det();
        let disc = if det < 0 { crate::linalg::isqrt(-det) } else { -1 };
        if disc < 0 || disc * disc != -det {
            return Err(Km3Error::NotAnOrder(format!(
                "trace Gram determinant {det} is not minus a square"
            )));
        }
        Ok(QuatOrder {
            algebra,
            basis,
            trace_gram: gram,
            reduced_discriminant: disc,
        })
    }

    /// Membership test against the basis lattice.
    pub fn contains(&self, w: &QuatElement) -> bool {
        let binv = basis_matrix(&self.basis).inverse().expect("full rank");
        binv.mul_vec(&w.coords).iter().all(Rat::is_integer)
    }

    /// Equality as lattices (mutual containment of bases).
    pub fn same_lattice(&self, other: &[QuatElement; 4]) -> bool {
        let myinv = basis_matrix(&self.basis).inverse().expect("full rank");
        let Some(otherinv) = basis_matrix(other).inverse() else {
            return false;
        };
        other
            .iter()
            .all(|w| myinv.mul_vec(&w.coords).iter().all(Rat::is_integer))
            && self
                .basis
                .iter()
                .all(|w| otherinv.mul_vec(&w.coords).iter().all(Rat::is_integer))
    }
}

fn basis_matrix(basis: &[QuatElement; 4]) -> Mat<Rat> {
    let mut m = Mat::<Rat>::zeros(4, 4);
    for (j, v) in basis.iter().enumerate() {
        for i in 0..4 {
            m[(i, j)] = v.coords[i];
        }
    }
    m
}

/// Generator `theta` of the maximal order: `(r/3)(phi_o - 1)` when
/// `D_H = 1 mod 3`, `phi_o` itself when `3 | D_H`.
fn theta(algebra: QuatAlgebra, d_h: i64) -> QuatElement {
    if d_h.rem_euclid(3) == 1 {
        // (alpha/3)(beta - 1) = (alpha beta - alpha)/3
        QuatElement::new(algebra, [Rat::zero(), rat(-1, 3), Rat::zero(), rat(1, 3)])
    } else {
        QuatElement::from_ints(algebra, [0, 0, 1, 0])
    }
}

/// The order of `(-3, d_H)` with basis `1, j, theta, j theta`. For
/// admissible `d_H` this is the maximal order `O_m` and its reduced
/// discriminant equals the algebra discriminant; the lattice construction
/// itself is valid for any nonzero `d_H`.
pub fn maximal_order(d_h: i64) -> Result<QuatOrder> {
    order_mu(d_h, EisensteinInt::one())
}

/// The order `O_mu = Z[j] + Z[j] mu theta`, basis `1, j, mu theta,
/// j mu theta`; reduced discriminant `norm(mu) * D_H`.
pub fn order_mu(d_h: i64, mu: EisensteinInt) -> Result<QuatOrder> {
    if d_h == 0 {
        return Err(Km3Error::InadmissibleD(d_h));
    }
    if mu.is_zero() {
        return Err(Km3Error::FactorZero);
    }
    let algebra = QuatAlgebra::minus3(d_h);
    let one = QuatElement::one(algebra);
    let j = embed_eisenstein(algebra, EisensteinInt::new(0, 1));
    let mu_theta = embed_eisenstein(algebra, mu).mul(&theta(algebra, d_h));
    let j_mu_theta = j.mul(&mu_theta);
    let order = QuatOrder::try_new(algebra, [one, j, mu_theta, j_mu_theta])?;
    if is_admissible(d_h) {
        let (d_big, _) = algebra_discriminant(d_h)?;
        debug_assert_eq!(order.reduced_discriminant, mu.norm() * d_big);
    }
    Ok(order)
}

/// Certificate that an order is Eichler: `D_O = N * D_H` with `N` square-free
/// and coprime to `D_H`.
pub fn is_eichler_certified(order: &QuatOrder) -> bool {
    let Ok(ram) = ramified_places(&order.algebra) else {
        return false;
    };
    let d_h: i64 = ram
        .iter()
        .filter(|p| !p.is_real())
        .map(|p| p.prime())
        .product();
    if order.reduced_discriminant % d_h != 0 {
        return false;
    }
    let n = order.reduced_discriminant / d_h;
    match factorize(n) {
        Ok(f) => f.is_squarefree() && num::integer::gcd(n, d_h) == 1,
        Err(_) => false,
    }
}

/// Number of order-3 elliptic points on the Shimura curve of an Eichler
/// order of level `n` in the algebra of finite discriminant `d_big`:
/// `prod_{p|D_H}(1 - (-3/p)) * prod_{p|N}(1 + (-3/p))`, and 0 when `9 | N`.
///
/// Only certified configurations are computed: `gcd(n, d_big) = 1` and `n`
/// square-free or `n in {1, 3}`. Anything else is reported as unsupported
/// rather than guessed.
pub fn e3(d_big: i64, n: i64) -> Result<i64> {
    if d_big < 1 || n < 1 {
        return Err(Km3Error::ConstraintViolation(
            "e3 needs positive discriminant and level".into(),
        ));
    }
    if num::integer::gcd(n, d_big) != 1 {
        return Err(Km3Error::Unsupported(format!(
            "level {n} is not coprime to the discriminant {d_big}: not a certified Eichler configuration"
        )));
    }
    let nf = factorize(n)?;
    if !(nf.is_squarefree() || n == 1 || n == 3) {
        return Err(Km3Error::Unsupported(format!(
            "non-square-free level {n}: the general-order elliptic-point count is deferred"
        )));
    }
    if n % 9 == 0 {
        return Ok(0);
    }
    let mut count = 1i64;
    for p in factorize(d_big)?.primes() {
        count *= 1 - i64::from(kronecker_symbol(-3, p)?);
    }
    for p in nf.primes() {
        count *= 1 + i64::from(kronecker_symbol(-3, p)?);
    }
    Ok(count)
}

/// Whether the unit group of the endomorphism order contains an element of
/// reduced norm -1: exactly when `ell = 2 mod 3` or `3 || ell`.
pub fn has_norm_minus_one_unit(ell: i64) -> Result<bool> {
    if !crate::valid_ell(ell) || ell < 0 {
        return Err(Km3Error::BadCongruence(ell));
    }
    Ok(ell.rem_euclid(3) == 2 || (ell % 3 == 0 && ell % 9 != 0))
}

/// Status of a structure count: exact, or deferred with a reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountStatus {
    Exact,
    Unsupported(String),
}

/// Everything the integer `ell` determines on the counting side.
#[derive(Debug, Clone)]
pub struct KummerCount {
    pub ell: i64,
    pub d_h: i64,
    pub d_big: i64,
    pub mu_norm: i64,
    pub e3: Option<i64>,
    pub n_ks: Option<i64>,
    pub status: CountStatus,
}

/// Count the structures attached to a surface with polarization square
/// `ell > 0`: derive `d_H = rad2(ell/2)`, the algebra discriminant, the
/// level `norm(mu) = ell / (2 D_H)`, then apply the half/double rule to the
/// elliptic-point count.
pub fn kummer_structure_count(ell: i64) -> Result<KummerCount> {
    if !crate::valid_ell(ell) {
        return Err(Km3Error::BadCongruence(ell));
    }
    if ell < 0 {
        return Err(Km3Error::NotPositive(ell));
    }
    let half = ell / 2;
    let d_h = rad2(half)?;
    let d_big = if d_h % 3 == 2 { 3 * d_h } else { d_h };
    let unsupported = |mu_norm: i64, e3v: Option<i64>, reason: String| KummerCount {
        ell,
        d_h,
        d_big,
        mu_norm,
        e3: e3v,
        n_ks: None,
        status: CountStatus::Unsupported(reason),
    };
    if half % d_big != 0 {
        return Ok(unsupported(
            0,
            None,
            format!("discriminant {d_big} does not divide {half}"),
        ));
    }
    let mu_norm = half / d_big;
    if eisenstein::solve_norm_equation(mu_norm)?.is_empty() {
        return Ok(unsupported(
            mu_norm,
            None,
            format!("{mu_norm} is not a norm from Z[j]"),
        ));
    }
    if d_big == 1 {
        return Ok(unsupported(
            mu_norm,
            e3(1, mu_norm).ok(),
            "matrix algebra (D_H = 1): only a lower bound is known for the structure count".into(),
        ));
    }
    let e3v = match e3(d_big, mu_norm) {
        Ok(v) => v,
        Err(Km3Error::Unsupported(reason)) => return Ok(unsupported(mu_norm, None, reason)),
        Err(e) => return Err(e),
    };
    let n_ks = if ell % 9 == 0 {
        2 * e3v
    } else {
        debug_assert_eq!(e3v % 2, 0);
        e3v / 2
    };
    Ok(KummerCount {
        ell,
        d_h,
        d_big,
        mu_norm,
        e3: Some(e3v),
        n_ks: Some(n_ks),
        status: CountStatus::Exact,
    })
}

/// The closed-form count `2^(m + eps)` valid when the level is a square-free
/// product of split primes: `m` = number of primes dividing `ell/2`,
/// `eps = -2` if `3 | D_H` else `-1`. `None` when the hypotheses fail.
pub fn closed_form_count(count: &KummerCount) -> Option<i64> {
    if count.d_big == 1 || count.status != CountStatus::Exact {
        return None;
    }
    let f = factorize(count.mu_norm).ok()?;
    let coprime = num::integer::gcd(count.mu_norm, 3 * count.d_big) == 1;
    if !(f.is_squarefree() && coprime) {
        return None;
    }
    let m = factorize(count.ell / 2).ok()?.factors.len() as i64;
    let eps: i64 = if count.d_big % 3 == 0 { -2 } else { -1 };
    Some(1i64 << (m + eps))
}

/// Verify the isomorphism `O_mu = O_mu'` for equal-norm `mu, mu'` by the
/// explicit conjugation: normalize both, conjugate each basis by its
/// `delta`, and check the image lattices coincide with the normalized order.
pub fn conjugation_iso_check(d_h: i64, mu: EisensteinInt, mu2: EisensteinInt) -> Result<bool> {
    if mu.norm() != mu2.norm() {
        return Err(Km3Error::NormMismatch(mu.norm(), mu2.norm()));
    }
    let (norm1, delta1) = eisenstein::normalize_split(mu)?;
    let (norm2, delta2) = eisenstein::normalize_split(mu2)?;
    if norm1 != norm2 {
        return Ok(false);
    }
    let target = order_mu(d_h, norm1)?;
    for (m, delta) in [(mu, delta1), (mu2, delta2)] {
        let source = order_mu(d_h, m)?;
        let d = embed_eisenstein(source.algebra, delta);
        let dinv = d.inverse();
        let image: [QuatElement; 4] = std::array::from_fn(|i| d.mul(&source.basis[i]).mul(&dinv));
        if !target.same_lattice(&image) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// In a definite algebra, all order elements `w` with `w^2 + w + 1 = 0`,
/// found by exhausting the positive-definite norm form.
pub fn cube_roots_of_unity(order: &QuatOrder) -> Vec<QuatElement> {
    // Gram of the doubled norm form on the basis: Tr(v_i conj(v_j)).
    let mut gram = Mat::<Rat>::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            gram[(i, j)] = order.basis[i].mul(&order.basis[j].conj()).reduced_trace();
        }
    }
    let gram = gram.to_int().expect("integral norm Gram");
    let mut out = Vec::new();
    // Nr(w) = 1 means the doubled form takes the value 2.
    for v in crate::linalg::short_vectors(&gram, 2) {
        for sign in [1i64, -1] {
            let w = (0..4).fold(QuatElement::zero(order.algebra), |acc, i| {
                acc.add(&order.basis[i].scale(Rat::from_integer(sign * v[i])))
            });
            if w.mul(&w).add(&w).add(&QuatElement::one(order.algebra)).is_zero() {
                out.push(w);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn places(set: &BTreeSet<Place>) -> Vec<i64> {
        set.iter().map(|p| p.prime()).collect()
    }

    #[test]
    fn ramified_places_examples() {
        let h = QuatAlgebra::minus3(2);
        assert_eq!(places(&ramified_places(&h).unwrap()), vec![2, 3]);
        let h = QuatAlgebra::minus3(10);
        assert_eq!(places(&ramified_places(&h).unwrap()), vec![2, 5]);
        let h = QuatAlgebra::new(rat(1, 1), rat(1, 1));
        assert!(ramified_places(&h).unwrap().is_empty());
        let h = QuatAlgebra::minus3(-1);
        assert_eq!(places(&ramified_places(&h).unwrap()), vec![-1, 3]);
    }

    #[test]
    fn normalize_minus3_examples() {
        assert_eq!(normalize_minus3(12).unwrap(), 1);
        assert_eq!(normalize_minus3(14).unwrap(), 2);
        assert_eq!(normalize_minus3(10).unwrap(), 10);
        assert_eq!(normalize_minus3(-12).unwrap(), -1);
        // Normalization preserves the algebra: same ramification set.
        for d in [12i64, 14, 10, -12, 45, 70, -33, 21] {
            let before = ramified_places(&QuatAlgebra::minus3(d)).unwrap();
            let after =
                ramified_places(&QuatAlgebra::minus3(normalize_minus3(d).unwrap())).unwrap();
            assert_eq!(before, after, "d = {d}");
        }
    }

    #[test]
    fn algebra_discriminant_examples() {
        assert_eq!(algebra_discriminant(2).unwrap(), (6, false));
        assert_eq!(algebra_discriminant(10).unwrap(), (10, false));
        assert_eq!(algebra_discriminant(-1).unwrap(), (3, true));
        assert!(algebra_discriminant(4).is_err());
        assert!(algebra_discriminant(7).is_err());
    }

    #[test]
    fn admissible_list_up_to_50() {
        let admissible: Vec<i64> = (1..=50).filter(|&d| is_admissible(d)).collect();
        assert_eq!(admissible, vec![1, 2, 5, 10, 11, 17, 22, 23, 29, 34, 41, 46, 47]);
    }

    #[test]
    fn maximal_order_gram_d7() {
        // d = 3k + 1 with k = 2; the generic Gram of the theta-basis.
        let order = maximal_order(7).unwrap();
        let expect = Mat::from_rows(vec![
            vec![2, -1, 0, 1],
            vec![-1, -1, 1, -1],
            vec![0, 1, 4, -2],
            vec![1, -1, -2, 5],
        ]);
        assert_eq!(order.trace_gram, expect);
        assert_eq!(order.trace_gram.det(), -49);
        assert_eq!(order.reduced_discriminant, 7);
    }

    #[test]
    fn maximal_order_gram_d2() {
        let order = maximal_order(2).unwrap();
        let expect = Mat::from_rows(vec![
            vec![2, -1, 0, 0],
            vec![-1, -1, 0, 0],
            vec![0, 0, 4, -2],
            vec![0, 0, -2, 4],
        ]);
        assert_eq!(order.trace_gram, expect);
        assert_eq!(order.trace_gram.det(), -36);
        assert_eq!(order.reduced_discriminant, 6);
    }

    #[test]
    fn j_relation_inside_order() {
        for d in [1i64, 2, 5, -1, 10] {
            let alg = QuatAlgebra::minus3(d);
            let j = embed_eisenstein(alg, EisensteinInt::new(0, 1));
            let rel = j.mul(&j).add(&j).add(&QuatElement::one(alg));
            assert!(rel.is_zero(), "d = {d}");
        }
    }

    #[test]
    fn order_mu_discriminant() {
        let mu = EisensteinInt::new(3, 1);
        let order = order_mu(10, mu).unwrap();
        assert_eq!(order.reduced_discriminant, 70);
        assert_eq!(order.trace_gram.det(), -70 * 70);
        let o1 = order_mu(10, EisensteinInt::one()).unwrap();
        let om = maximal_order(10).unwrap();
        assert_eq!(o1.trace_gram, om.trace_gram);
    }

    #[test]
    fn eichler_certificates() {
        let order = order_mu(10, EisensteinInt::new(3, 1)).unwrap();
        assert!(is_eichler_certified(&order)); // level 7
        let order = order_mu(10, EisensteinInt::from_int(3)).unwrap();
        assert!(!is_eichler_certified(&order)); // level 9
        assert!(is_eichler_certified(&maximal_order(10).unwrap()));
    }

    #[test]
    fn e3_examples() {
        assert_eq!(e3(1, 1).unwrap(), 1);
        assert_eq!(e3(10, 1).unwrap(), 4);
        assert_eq!(e3(6, 1).unwrap(), 2);
        assert_eq!(e3(6, 7).unwrap(), 4);
        // A prime 2 mod 3 in the level kills the count.
        assert_eq!(e3(10, 11).unwrap(), 0);
        assert!(matches!(e3(10, 4), Err(Km3Error::Unsupported(_))));
        assert!(matches!(e3(6, 3), Err(Km3Error::Unsupported(_))));
    }

    #[test]
    fn norm_minus_one_unit_examples() {
        assert!(has_norm_minus_one_unit(14).unwrap());
        assert!(has_norm_minus_one_unit(12).unwrap());
        assert!(!has_norm_minus_one_unit(18).unwrap());
    }

    #[test]
    fn kummer_count_examples() {
        let c = kummer_structure_count(20).unwrap();
        assert_eq!((c.d_h, c.d_big, c.mu_norm), (10, 10, 1));
        assert_eq!(c.e3, Some(4));
        assert_eq!(c.n_ks, Some(2));
        assert_eq!(closed_form_count(&c), Some(2));

        let c = kummer_structure_count(12).unwrap();
        assert_eq!((c.d_h, c.d_big, c.mu_norm), (2, 6, 1));
        assert_eq!(c.e3, Some(2));
        assert_eq!(c.n_ks, Some(1));
        assert_eq!(closed_form_count(&c), Some(1));

        let c = kummer_structure_count(2).unwrap();
        assert!(matches!(c.status, CountStatus::Unsupported(_)));
        assert_eq!(c.d_big, 1);

        // ell = 80: level 4 is neither square-free nor coprime to D_H = 10.
        let c = kummer_structure_count(80).unwrap();
        assert!(matches!(c.status, CountStatus::Unsupported(_)));
    }

    #[test]
    fn structure_count_invariant() {
        for ell in (1..=200).filter(|&e| crate::valid_ell(e)) {
            let c = kummer_structure_count(ell).unwrap();
            if c.status == CountStatus::Exact {
                assert_eq!(2 * c.mu_norm * c.d_big, ell, "ell = {ell}");
                if num::integer::gcd(c.mu_norm, 3 * c.d_big) == 1
                    && factorize(c.mu_norm).unwrap().is_squarefree()
                {
                    assert_ne!(ell % 9, 0, "square-free coprime level forces 9 not | ell");
                }
            }
        }
    }

    #[test]
    fn conjugation_iso_examples() {
        let mu = EisensteinInt::new(3, 1);
        assert!(conjugation_iso_check(10, mu, mu).unwrap());
        assert!(conjugation_iso_check(10, mu, mu.conj()).unwrap());
        let sq = mu * mu;
        assert!(conjugation_iso_check(10, EisensteinInt::from_int(7), sq).unwrap());
        assert!(matches!(
            conjugation_iso_check(10, mu, EisensteinInt::one()),
            Err(Km3Error::NormMismatch(_, _))
        ));
    }

    #[test]
    fn definite_orders_cube_roots() {
        // Exhaustive unit search. For discriminants 3 and 5 the only cube
        // roots of unity in the maximal order are j and j^2. Discriminant 2
        // is the Hurwitz algebra: its maximal order has 24 units and eight
        // cube roots of unity, so j is not unique there.
        for (d, expect) in [(-1i64, 2usize), (-2, 8), (-5, 2)] {
            let order = maximal_order(d).unwrap();
            let roots = cube_roots_of_unity(&order);
            assert_eq!(roots.len(), expect, "d = {d}");
            let alg = order.algebra;
            let j = embed_eisenstein(alg, EisensteinInt::new(0, 1));
            let j2 = j.mul(&j);
            assert!(roots.contains(&j));
            assert!(roots.contains(&j2));
            for w in &roots {
                assert!(w.mul(w).add(w).add(&QuatElement::one(alg)).is_zero());
            }
        }
    }
}
