//! The hyperbolic lattice `U + A2`, its reflection group, and the polyhedral
//! cone that classifies moduli components for nonpositive polarization
//! squares.
//!
//! The reflection group through square-2 roots is generated by `r1..r4`; one
//! square-6 reflection `r5` extends it to the full orthogonal group. The
//! cone `Pi` cut out by the first four walls inside the negative cone is a
//! strict fundamental domain for the square-2 reflection group, carries the
//! Hilbert basis `w1..w5`, and enumerating its lattice points of a fixed
//! square (with the facet rule that removes the `F5 \ F4` repetition and the
//! congruence filters of the two polarization shapes) yields one
//! representative per moduli component.

use crate::linalg::{Mat, Rat};
use crate::nslat::{ua2_dot, IntLattice, UA2_GRAM};
use crate::{Km3Error, Result};
use num::Zero;
use std::collections::BTreeSet;

/// A vector of `U + A2` in the gamma-basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConeVector(pub [i64; 4]);

impl ConeVector {
    pub fn dot(&self, other: &ConeVector) -> i64 {
        ua2_dot(&self.0, &other.0)
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn neg(&self) -> ConeVector {
        ConeVector(self.0.map(|v| -v))
    }

    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i64, |a, &b| num::integer::gcd(a, b)) == 1
    }
}

impl std::fmt::Display for ConeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// The five walls: `c1..c4` of square 2 and `c5` of square 6.
pub const ROOTS: [ConeVector; 5] = [
    ConeVector([0, 1, -1, 1]),
    ConeVector([-1, -1, 0, 0]),
    ConeVector([1, 0, 0, -1]),
    ConeVector([1, 0, 1, 0]),
    ConeVector([0, 0, 1, 1]),
];

/// Orientation vector for the negative cone; `P . c_j = -1` for `j = 1..4`.
pub const P_VECTOR: ConeVector = ConeVector([5, -4, 3, -3]);

/// Hilbert basis of the cone `Pi`; `w1` is its unique square-0 ray and
/// `3 w3 = w4 + w5`.
pub const HILBERT_BASIS: [ConeVector; 5] = [
    ConeVector([1, -1, 1, -1]),
    ConeVector([2, -1, 1, -1]),
    ConeVector([2, -2, 1, -1]),
    ConeVector([3, -3, 2, -1]),
    ConeVector([3, -3, 1, -2]),
];

/// A letter of a word in the isometry group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    /// Reflection `r_i`, `i` in `1..=5`.
    R(u8),
    /// Generator `tau_i`, `i` in `1..=4`.
    T(u8),
}

impl std::fmt::Display for Letter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Letter::R(i) => write!(f, "r{i}"),
            Letter::T(i) => write!(f, "t{i}"),
        }
    }
}

/// An isometry of `U + A2` together with the word that produced it. Words
/// compose left to right: the matrix of `g1 g2` is `M(g1) * M(g2)` acting on
/// column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryWord {
    pub matrix: Mat<i64>,
    pub word: Vec<Letter>,
}

impl IsometryWord {
    pub fn identity() -> Self {
        IsometryWord {
            matrix: Mat::<i64>::identity(4),
            word: Vec::new(),
        }
    }

    pub fn apply(&self, x: &ConeVector) -> ConeVector {
        let v = self.matrix.mul_vec(&x.0.to_vec());
        ConeVector([v[0], v[1], v[2], v[3]])
    }

    pub fn compose(&self, other: &IsometryWord) -> IsometryWord {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        IsometryWord {
            matrix: self.matrix.mul(&other.matrix),
            word,
        }
    }

    pub fn preserves_gram(&self) -> bool {
        let g = Mat::from_rows(UA2_GRAM.iter().map(|r| r.to_vec()).collect());
        self.matrix.transpose().mul(&g).mul(&self.matrix) == g
    }
}

/// The reflection `x -> x - (2 (c.x) / c^2) c` through a root of square 2
/// or 6; errors on other squares or a non-integral image.
pub fn reflection(c: &ConeVector) -> Result<IsometryWord> {
    let sq = c.square();
    if sq != 2 && sq != 6 {
        return Err(Km3Error::BadReflectionSquare(sq));
    }
    let mut m = Mat::<i64>::zeros(4, 4);
    for col in 0..4 {
        let mut e = [0i64; 4];
        e[col] = 1;
        let pairing = ua2_dot(&c.0, &e);
        for row in 0..4 {
            let num = 2 * pairing * c.0[row];
            if num % sq != 0 {
                return Err(Km3Error::ConstraintViolation(format!(
                    "reflection through {c} does not preserve the lattice"
                )));
            }
            m[(row, col)] = i64::from(row == col) - num / sq;
        }
    }
    let word = match ROOTS.iter().position(|root| root == c) {
        Some(i) => vec![Letter::R(i as u8 + 1)],
        None => Vec::new(),
    };
    Ok(IsometryWord { matrix: m, word })
}

fn root_reflection(i: usize) -> IsometryWord {
    let mut w = reflection(&ROOTS[i - 1]).expect("roots have square 2 or 6");
    w.word = vec![Letter::R(i as u8)];
    w
}

/// The four generators of the special orthogonal group, as printed 4x4
/// matrices, each of determinant 1.
pub fn tau_generators() -> [IsometryWord; 4] {
    let mats = [
        vec![
            vec![1, 0, 0, 0],
            vec![-1, 1, 2, 1],
            vec![-1, 0, 1, 0],
            vec![0, 0, 0, 1],
        ],
        vec![
            vec![1, 0, 0, 0],
            vec![-1, 1, -1, -2],
            vec![0, 0, 1, 0],
            vec![1, 0, 0, 1],
        ],
        vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, -1, 0],
        ],
        vec![
            vec![0, -1, 0, 0],
            vec![-1, 0, 0, 0],
            vec![0, 0, -1, -1],
            vec![0, 0, 0, 1],
        ],
    ];
    std::array::from_fn(|i| IsometryWord {
        matrix: Mat::from_rows(mats[i].clone()),
        word: vec![Letter::T(i as u8 + 1)],
    })
}

/// Compose a word given as letters into an isometry.
pub fn compose_word(letters: &[Letter]) -> IsometryWord {
    let taus = tau_generators();
    letters.iter().fold(IsometryWord::identity(), |acc, &l| {
        let g = match l {
            Letter::R(i) => root_reflection(i as usize),
            Letter::T(i) => taus[i as usize - 1].clone(),
        };
        acc.compose(&g)
    })
}

/// Membership in the fundamental cone `Pi`: nonpositive square, the correct
/// side of the orientation vector, and `c_j . x <= 0` for `j = 1..4`.
pub fn in_fundamental_cone(x: &ConeVector) -> bool {
    x.square() <= 0
        && P_VECTOR.dot(x) <= 0
        && ROOTS[..4].iter().all(|c| c.dot(x) <= 0)
}

/// Result of reducing a vector into the closed chamber `c_j . x <= 0`,
/// `j = 1..5`.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Isometry with `word` over the reflections such that
    /// `g(x') = reduced`, where `x'` is the (possibly negated) input.
    pub isometry: IsometryWord,
    /// Whether the input was negated first to land on the `P . x <= 0` side.
    pub negated: bool,
    pub reduced: ConeVector,
}

const REDUCTION_CAP: usize = 100_000;

/// Drive `x` into the chamber `{c_j . x <= 0, j = 1..5}` by repeatedly
/// reflecting through the lowest-index violated wall.
pub fn reduce_to_domain(x: &ConeVector) -> Result<Reduction> {
    if x.square() > 0 {
        return Err(Km3Error::NotNegativeSquare(x.square()));
    }
    if x.0 == [0; 4] {
        return Err(Km3Error::NotPrimitive(x.0));
    }
    let negated = P_VECTOR.dot(x) > 0;
    let mut current = if negated { x.neg() } else { *x };
    let mut isometry = IsometryWord::identity();
    for _ in 0..REDUCTION_CAP {
        let violated = (0..5).find(|&j| ROOTS[j].dot(&current) > 0);
        let Some(j) = violated else {
            return Ok(Reduction {
                isometry,
                negated,
                reduced: current,
            });
        };
        let refl = root_reflection(j + 1);
        current = refl.apply(&current);
        isometry = refl.compose(&isometry);
    }
    Err(Km3Error::ReductionStuck(REDUCTION_CAP))
}

/// Exact test for membership of `x` in the cone spanned by three rays:
/// solve for nonnegative rational coefficients.
fn in_ray_cone(x: &ConeVector, rays: [&ConeVector; 3]) -> bool {
    // Augmented 4x4 system [rays | x], Gauss over rationals.
    let mut m = Mat::<Rat>::zeros(4, 4);
    for (j, r) in rays.iter().enumerate() {
        for i in 0..4 {
            m[(i, j)] = Rat::from_integer(r.0[i]);
        }
    }
    for i in 0..4 {
        m[(i, 3)] = Rat::from_integer(x.0[i]);
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(p) = (row..4).find(|&i| !m[(i, col)].is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let pv = m[(row, col)];
        for j in 0..4 {
            m[(row, j)] /= pv;
        }
        for i in 0..4 {
            if i != row && !m[(i, col)].is_zero() {
                let f = m[(i, col)];
                for j in 0..4 {
                    let t = f * m[(row, j)];
                    m[(i, j)] -= t;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    // Consistency in the remaining rows.
    for i in row..4 {
        if !m[(i, 3)].is_zero() {
            return false;
        }
    }
    pivots.iter().all(|&(r, _)| m[(r, 3)] >= Rat::zero())
}

/// The facet of `Pi` spanned by `w1, w2, w4` contains `x`?
fn in_f5(x: &ConeVector) -> bool {
    in_ray_cone(x, [&HILBERT_BASIS[0], &HILBERT_BASIS[1], &HILBERT_BASIS[3]])
}

/// The facet of `Pi` spanned by `w1, w2, w5` contains `x`?
fn in_f4(x: &ConeVector) -> bool {
    in_ray_cone(x, [&HILBERT_BASIS[0], &HILBERT_BASIS[1], &HILBERT_BASIS[4]])
}

fn case_filter(x: &[i64; 4], ell: i64) -> bool {
    let [x1, x2, x3, x4] = *x;
    if ell.rem_euclid(6) == 0 {
        if [x1, x2, x3, x4].iter().fold(0i64, |a, &b| num::integer::gcd(a, b)) != 1 {
            return false;
        }
        // gcd(n1, n2, n3, 3) = 1 with n3 = x3 - x4.
        !(x1.rem_euclid(3) == 0 && x2.rem_euclid(3) == 0 && (x3 - x4).rem_euclid(3) == 0)
    } else {
        if x1.rem_euclid(3) != 0 || x2.rem_euclid(3) != 0 || (x3 - x4).rem_euclid(3) != 0 {
            return false;
        }
        if x4.rem_euclid(3) == 0 {
            return false;
        }
        let n = [x1 / 3, x2 / 3, (x3 - x4) / 3, x4];
        n.iter().fold(0i64, |a, &b| num::integer::gcd(a, b)) == 1
    }
}

/// One representative per irreducible moduli component for `ell <= 0`:
/// lattice points of `Pi` of the case-appropriate square, filtered by the
/// primitivity/congruence conditions of the polarization shape, with the
/// `F5 \ F4` facet repetition removed. Sorted by coordinates.
pub fn enumerate_components(ell: i64) -> Result<Vec<ConeVector>> {
    if ell > 0 {
        return Err(Km3Error::NotNonpositive(ell));
    }
    if ell != 0 && !crate::valid_ell(ell) {
        return Err(Km3Error::BadCongruence(ell));
    }
    let target = if ell.rem_euclid(6) == 0 { ell / 3 } else { 3 * ell };
    let mut candidates: BTreeSet<ConeVector> = BTreeSet::new();
    if ell == 0 {
        candidates.insert(HILBERT_BASIS[0]);
    } else {
        let cap = -target;
        let b2 = crate::linalg::isqrt(cap / 2);
        let b3 = crate::linalg::isqrt(cap / 6);
        let b45 = crate::linalg::isqrt(cap / 12);
        let [w1, w2, w3, w4, w5] = HILBERT_BASIS;
        for a2 in 0..=b2 {
            for a3 in 0..=b3 {
                for a4 in 0..=b45 {
                    'a5: for a5 in 0..=b45 {
                        if a2 == 0 && a3 == 0 && a4 == 0 && a5 == 0 {
                            continue;
                        }
                        let mut x0 = [0i64; 4];
                        for i in 0..4 {
                            x0[i] = a2 * w2.0[i] + a3 * w3.0[i] + a4 * w4.0[i] + a5 * w5.0[i];
                        }
                        let x0 = ConeVector(x0);
                        let q0 = x0.square();
                        if -q0 > cap {
                            continue 'a5;
                        }
                        // Solve target = q0 + 2 a1 (w1 . x0); the pairing is
                        // strictly negative for a nonzero tail.
                        let pairing = w1.dot(&x0);
                        let num = target - q0;
                        if num % (2 * pairing) != 0 {
                            continue;
                        }
                        let a1 = num / (2 * pairing);
                        if a1 < 0 {
                            continue;
                        }
                        let mut x = x0.0;
                        for i in 0..4 {
                            x[i] += a1 * w1.0[i];
                        }
                        debug_assert_eq!(ConeVector(x).square(), target);
                        candidates.insert(ConeVector(x));
                    }
                }
            }
        }
    }
    let mut out: Vec<ConeVector> = candidates
        .into_iter()
        .filter(|x| case_filter(&x.0, ell))
        .filter(|x| !(in_f5(x) && !in_f4(x)))
        .collect();
    out.sort();
    Ok(out)
}

/// Gram matrix of `{y : y . x = 0}` in `U + A2` on a saturated integral
/// basis; positive definite for `x` of negative square.
pub fn orthogonal_complement(x: &ConeVector) -> Result<IntLattice> {
    if !x.is_primitive() {
        return Err(Km3Error::NotPrimitive(x.0));
    }
    if x.square() >= 0 {
        return Err(Km3Error::NotNegativeSquare(x.square()));
    }
    // Kernel of the functional y -> (G x) . y, saturated via Smith form.
    let g = Mat::from_rows(UA2_GRAM.iter().map(|r| r.to_vec()).collect());
    let w = g.mul_vec(&x.0.to_vec());
    let row = Mat::from_rows(vec![w.clone()]);
    let snf = crate::arith::smith_normal_form(&row);
    let mut basis: Vec<[i64; 4]> = Vec::new();
    for j in 0..4 {
        if snf.d[(0, j)] == 0 {
            let mut v = [0i64; 4];
            for i in 0..4 {
                v[i] = snf.v[(i, j)];
            }
            basis.push(v);
        }
    }
    debug_assert_eq!(basis.len(), 3);
    let mut gram = Mat::<i64>::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            gram[(i, j)] = ua2_dot(&basis[i], &basis[j]);
        }
    }
    Ok(IntLattice::new(gram))
}
