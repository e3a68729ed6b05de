//! The Néron–Severi side: the rank-3 lattices `NS_ell`, their discriminant
//! forms, two independent principal-polarization tests, polarization classes
//! in the gamma-basis of `U + A2`, and the explicit endomorphism matrices.
//!
//! Divisor classes on the torus are realized concretely as alternating 4x4
//! integer matrices in the dual basis of `a1, b1, a2, b2` of the first
//! homology; endomorphisms arise as products `delta^-1 * L` of such
//! matrices.

use crate::arith::{self, rank4_represents_zero, smith_normal_form, Place};
use crate::linalg::{inertia, rat, Mat, Rat};
use crate::{Km3Error, Result};
use num::Zero;

/// Gram matrix of `U + A2` in the gamma-basis.
pub const UA2_GRAM: [[i64; 4]; 4] = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 2, 1], [0, 0, 1, 2]];

/// Pairing of two gamma-coordinate vectors in `U + A2`.
pub fn ua2_dot(x: &[i64; 4], y: &[i64; 4]) -> i64 {
    let mut acc = 0;
    for i in 0..4 {
        for j in 0..4 {
            acc += UA2_GRAM[i][j] * x[i] * y[j];
        }
    }
    acc
}

/// An integer symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    pub gram: Mat<i64>,
}

impl IntLattice {
    pub fn new(gram: Mat<i64>) -> Self {
        assert!(gram.is_symmetric(), "Gram matrix must be symmetric");
        IntLattice { gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows
    }

    pub fn det(&self) -> i64 {
        self.gram.det()
    }

    /// `(positive, negative, zero)` inertia counts, computed exactly.
    pub fn signature(&self) -> (usize, usize, usize) {
        inertia(&self.gram.to_rat())
    }

    pub fn is_even(&self) -> bool {
        (0..self.gram.rows).all(|i| self.gram[(i, i)] % 2 == 0)
    }

    /// Same group with the form negated.
    pub fn negated(&self) -> Self {
        IntLattice::new(self.gram.neg())
    }
}

/// A finite abelian group with a quadratic form valued in `Q/2Z` (diagonal)
/// and bilinear pairing in `Q/Z` (off-diagonal): the discriminant form of an
/// even lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadForm {
    /// Invariant factors `d_1 | d_2 | ...`, each `> 1`.
    pub invariant_factors: Vec<i64>,
    /// `gram_q[i][i] = q(g_i)` in `[0, 2)`; `gram_q[i][j] = b(g_i, g_j)` in
    /// `[0, 1)` off the diagonal.
    pub gram_q: Mat<Rat>,
}

impl FiniteQuadForm {
    pub fn group_order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }
}

pub(crate) fn normalize_mod(x: Rat, modulus: i64) -> Rat {
    let m = Rat::from_integer(modulus);
    let mut r = x - (x / m).floor() * m;
    if r < Rat::zero() {
        r += m;
    }
    if r >= m {
        r -= m;
    }
    r
}

/// The rank-3 lattice attached to `ell`: `[[2k,1,0],[1,-2,1],[0,1,-2]]` with
/// `ell = 6k + 2`, or `[[2k',0,0],[0,-2,1],[0,1,-2]]` with `ell = 6k'`.
/// Its determinant is `ell` up to sign.
pub fn ns_lattice(ell: i64) -> Result<IntLattice> {
    if !crate::valid_ell(ell) {
        return Err(Km3Error::BadCongruence(ell));
    }
    let gram = if ell.rem_euclid(6) == 2 {
        let k = (ell - 2) / 6;
        Mat::from_rows(vec![vec![2 * k, 1, 0], vec![1, -2, 1], vec![0, 1, -2]])
    } else {
        let k = ell / 6;
        Mat::from_rows(vec![vec![2 * k, 0, 0], vec![0, -2, 1], vec![0, 1, -2]])
    };
    Ok(IntLattice::new(gram))
}

/// Discriminant group and form of an even nondegenerate lattice, from the
/// Smith normal form of its Gram matrix.
pub fn discriminant_form(lattice: &IntLattice) -> Result<FiniteQuadForm> {
    if !lattice.is_even() {
        return Err(Km3Error::OddLattice);
    }
    if lattice.det() == 0 {
        return Err(Km3Error::DegenerateLattice);
    }
    let g = &lattice.gram;
    let snf = smith_normal_form(g);
    let n = g.rows;
    let gq = g.to_rat();
    // Generators of the quotient: columns of V scaled by 1/d_i.
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    let mut factors = Vec::new();
    for i in 0..n {
        let d = snf.d[(i, i)];
        if d > 1 {
            factors.push(d);
            gens.push(
                (0..n)
                    .map(|r| rat(snf.v[(r, i)], d))
                    .collect(),
            );
        }
    }
    let m = gens.len();
    let mut gram_q = Mat::<Rat>::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let mut acc = Rat::zero();
            for r in 0..n {
                for c in 0..n {
                    acc += gens[i][r] * gq[(r, c)] * gens[j][c];
                }
            }
            gram_q[(i, j)] = if i == j {
                normalize_mod(acc, 2)
            } else {
                normalize_mod(acc, 1)
            };
        }
    }
    Ok(FiniteQuadForm {
        invariant_factors: factors,
        gram_q,
    })
}

/// Closed-form principal polarization test: `ell = 2 mod 6` or `3 || ell`.
pub fn has_principal_polarization(ell: i64) -> Result<bool> {
    if !crate::valid_ell(ell) || ell < 0 {
        return Err(Km3Error::BadCongruence(ell));
    }
    Ok(ell.rem_euclid(6) == 2 || (ell % 3 == 0 && ell % 9 != 0))
}

/// Independent local test that the `NS_ell` form represents 2, following the
/// completed-squares diagonalizations: solvable at every place of
/// `{-1} | primes(6 ell)` implies a global solution by Hasse–Minkowski (the
/// lattice is alone in its genus); `9 | ell` is obstructed mod 3.
pub fn pp_local_oracle(ell: i64) -> Result<bool> {
    if !crate::valid_ell(ell) || ell < 0 {
        return Err(Km3Error::BadCongruence(ell));
    }
    if ell % 9 == 0 {
        // x^2 - xy + y^2 only takes values 0, 1 mod 3.
        return Ok(false);
    }
    let diag: [Rat; 4] = if ell.rem_euclid(6) == 2 {
        let k = (ell - 2) / 6;
        [rat(1, 1), rat(1, 1), rat(3, 4), -(rat(k, 1) + rat(1, 3))]
    } else {
        let k = ell / 6;
        [rat(1, 1), rat(1, 1), rat(3, 4), rat(-k, 1)]
    };
    let mut places = vec![Place::REAL, Place::finite(2)?, Place::finite(3)?];
    for p in arith::factorize(ell)?.primes() {
        let place = Place::finite(p)?;
        if !places.contains(&place) {
            places.push(place);
        }
    }
    Ok(places.into_iter().all(|p| rank4_represents_zero(&diag, p)))
}

/// Brute-force search for a vector of square 2 in `NS_ell`, coefficients
/// bounded by `bound` in absolute value.
pub fn pp_vector_search(ell: i64, bound: i64) -> Result<bool> {
    let lat = ns_lattice(ell)?;
    let g = &lat.gram;
    for x in -bound..=bound {
        for y in -bound..=bound {
            for z in -bound..=bound {
                let v = [x, y, z];
                let mut s = 0i64;
                for i in 0..3 {
                    for j in 0..3 {
                        s += g[(i, j)] * v[i] * v[j];
                    }
                }
                if s == 2 {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Which of the two congruence classes of `ell` a polarization lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolCase {
    /// `ell = 2 mod 6`: the invariant class is `3n1 g1 + 3n2 g2 + 3n3 g3 +
    /// n4 (g3 + g4)` with `3` not dividing `n4`.
    I,
    /// `ell = 0 mod 6`: the invariant class is `n1 g1 + n2 g2 + n3 g3 +
    /// n4 (g3 + g4)` with `gcd(n1, n2, n3, 3) = 1`.
    II,
}

/// A polarization class in the gamma-basis, with both squares attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizationClass {
    pub case_tag: PolCase,
    pub n: [i64; 4],
    pub gamma_coords: [i64; 4],
    pub lx_sq: i64,
    pub la_sq: i64,
}

fn gcd_all(vals: &[i64]) -> i64 {
    vals.iter().fold(0i64, |a, &b| num::integer::gcd(a, b))
}

/// Build and validate a polarization class from the case tag and `n1..n4`.
pub fn polarization_class(case_tag: PolCase, n: [i64; 4]) -> Result<PolarizationClass> {
    let [n1, n2, n3, n4] = n;
    if gcd_all(&n) != 1 {
        return Err(Km3Error::ConstraintViolation(format!(
            "n = {n:?} must have gcd 1"
        )));
    }
    let (gamma_coords, lx_sq, la_sq) = match case_tag {
        PolCase::I => {
            if n4.rem_euclid(3) == 0 {
                return Err(Km3Error::ConstraintViolation(format!(
                    "case-i class needs n4 = {n4} not divisible by 3"
                )));
            }
            let lx = 6 * (n1 * n2 + n3 * n3 + n3 * n4) + 2 * n4 * n4;
            ([3 * n1, 3 * n2, 3 * n3 + n4, n4], lx, 3 * lx)
        }
        PolCase::II => {
            if gcd_all(&[n1, n2, n3, 3]) != 1 {
                return Err(Km3Error::ConstraintViolation(format!(
                    "case-ii class needs gcd(n1, n2, n3, 3) = 1, got n = {n:?}"
                )));
            }
            let lx = 6 * (n1 * n2 + n3 * n3 + 3 * n3 * n4 + 3 * n4 * n4);
            ([n1, n2, n3 + n4, n4], lx, lx / 3)
        }
    };
    // The closed formula must agree with the Gram pairing of the class.
    let from_gram = ua2_dot(&gamma_coords, &gamma_coords);
    if from_gram != la_sq {
        return Err(Km3Error::ConstraintViolation(format!(
            "square mismatch: formula {la_sq} vs Gram {from_gram}"
        )));
    }
    Ok(PolarizationClass {
        case_tag,
        n,
        gamma_coords,
        lx_sq,
        la_sq,
    })
}

/// Divisor classes as alternating matrices in the dual basis of
/// `a1, b1, a2, b2`.
pub mod wedge {
    use super::*;

    /// Order of the rank-6 wedge basis:
    /// `a1^a2, a1^b1, a1^b2, a2^b1, a2^b2, b1^b2`.
    pub const BASIS_LABELS: [&str; 6] = [
        "a1^a2", "a1^b1", "a1^b2", "a2^b1", "a2^b2", "b1^b2",
    ];

    /// `(row, col, sign)` of each basis wedge in the alternating matrix.
    const POSITIONS: [(usize, usize); 6] = [(0, 2), (0, 1), (0, 3), (2, 1), (2, 3), (1, 3)];

    /// The invariant-basis classes `g1..g4` in wedge coordinates.
    pub const GAMMA: [[i64; 6]; 4] = [
        [0, -1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 1, 1, 0, 0],
        [1, 0, 1, 0, 0, 1],
    ];

    /// The anti-invariant classes `d1, d2` in wedge coordinates.
    pub const DELTA1: [i64; 6] = [1, 0, 0, 0, 0, -1];
    pub const DELTA2: [i64; 6] = [0, 0, 1, -1, 0, 1];

    /// Alternating 4x4 matrix of a wedge vector.
    pub fn to_alternating(coords: &[i64; 6]) -> Mat<i64> {
        let mut m = Mat::<i64>::zeros(4, 4);
        for (k, &(r, c)) in POSITIONS.iter().enumerate() {
            m[(r, c)] += coords[k];
            m[(c, r)] -= coords[k];
        }
        m
    }

    /// Intersection pairing of two wedge vectors (cup product against the
    /// fundamental class, oriented so that `g1 . g2 = 1`).
    pub fn pairing(a: &[i64; 6], b: &[i64; 6]) -> i64 {
        let ma = to_alternating(a);
        let mb = to_alternating(b);
        let w = |m: &Mat<i64>, i: usize, j: usize| m[(i, j)];
        let c = w(&ma, 0, 1) * w(&mb, 2, 3) - w(&ma, 0, 2) * w(&mb, 1, 3)
            + w(&ma, 0, 3) * w(&mb, 1, 2)
            + w(&ma, 2, 3) * w(&mb, 0, 1)
            - w(&ma, 1, 3) * w(&mb, 0, 2)
            + w(&ma, 1, 2) * w(&mb, 0, 3);
        -c
    }

    /// Wedge coordinates of the invariant class of a polarization.
    pub fn class_of(pc: &PolarizationClass) -> [i64; 6] {
        let mut out = [0i64; 6];
        for (i, &coeff) in pc.gamma_coords.iter().enumerate() {
            for k in 0..6 {
                out[k] += coeff * GAMMA[i][k];
            }
        }
        out
    }
}

/// The endomorphism matrices attached to a polarization class, acting on the
/// dual basis of `a1, b1, a2, b2` (so `j` here is the transpose of the
/// block-diagonal action on homology).
#[derive(Debug, Clone)]
pub struct EndoData {
    pub j: Mat<Rat>,
    pub r: Mat<Rat>,
    pub phi: Mat<Rat>,
    pub psi: Option<Mat<Rat>>,
    /// Case i with `n4 = 2 mod 3` swaps the roles of `d1` and `d2`.
    pub delta_swapped: bool,
    pub relations_verified: bool,
}

/// Build `j, r, phi` (and `psi` in case i) from the alternating-matrix
/// realization: `j = d1^-1 d2`, `r = 1 + 2j`, `phi = r^-1 d1^-1 L` (case i)
/// or `d1^-1 L` (case ii), `psi = (r/3)(phi - 1)`.
pub fn endo_matrices(pc: &PolarizationClass) -> Result<EndoData> {
    let delta_swapped = pc.case_tag == PolCase::I && pc.n[3].rem_euclid(3) == 2;
    let (d1c, d2c) = if delta_swapped {
        (wedge::DELTA2, wedge::DELTA1)
    } else {
        (wedge::DELTA1, wedge::DELTA2)
    };
    let d1 = wedge::to_alternating(&d1c).to_rat();
    let d2 = wedge::to_alternating(&d2c).to_rat();
    let l = wedge::to_alternating(&wedge::class_of(pc)).to_rat();
    let d1inv = d1.inverse().expect("delta1 is unimodular");
    let j = d1inv.mul(&d2);
    let ident = Mat::<Rat>::identity(4);
    let r = ident.add(&j.add(&j));
    let rinv = r.inverse().expect("r^2 = -3 is invertible");
    let phi = match pc.case_tag {
        PolCase::I => rinv.mul(&d1inv).mul(&l),
        PolCase::II => d1inv.mul(&l),
    };
    let psi = match pc.case_tag {
        PolCase::I => {
            // (1/3) d1^-1 (L - d1 - 2 d2)
            let num = l.sub(&d1).sub(&d2.add(&d2));
            Some(d1inv.mul(&num).map(|x| x / rat(3, 1)))
        }
        PolCase::II => None,
    };

    let scalar = |c: Rat| ident.map(|x| x * c);
    let mut ok = true;
    ok &= j.mul(&j).add(&j).add(&ident) == Mat::<Rat>::zeros(4, 4);
    ok &= r.mul(&r) == scalar(rat(-3, 1));
    ok &= r.mul(&phi) == phi.mul(&r).neg();
    ok &= phi.is_integral() && j.is_integral();
    let phi_sq_target = match pc.case_tag {
        PolCase::I => rat(pc.lx_sq, 2),
        PolCase::II => rat(pc.lx_sq, 6),
    };
    ok &= phi.mul(&phi) == scalar(phi_sq_target);
    ok &= (0..4).map(|i| phi[(i, i)]).sum::<Rat>() == Rat::zero();
    if let Some(psi) = &psi {
        ok &= psi.is_integral();
        let from_phi = r.mul(&phi.sub(&ident)).map(|x| x / rat(3, 1));
        ok &= *psi == from_phi;
        ok &= psi.mul(psi) == scalar(rat(pc.lx_sq - 2, 6));
        ok &= (0..4).map(|i| psi[(i, i)]).sum::<Rat>() == Rat::zero();
    }
    Ok(EndoData {
        j,
        r,
        phi,
        psi,
        delta_swapped,
        relations_verified: ok,
    })
}

/// Trace Gram of the order generated by `1, J, psi, J psi` (case i) or
/// `1, J, phi, J phi` (case ii) in the matrix realization; its determinant
/// is `-(ell/2)^2`. Reduced traces are half the matrix traces.
pub fn endo_trace_gram(data: &EndoData) -> Result<Mat<i64>> {
    let ident = Mat::<Rat>::identity(4);
    let gen = data.psi.as_ref().unwrap_or(&data.phi);
    let basis = [
        ident.clone(),
        data.j.clone(),
        gen.clone(),
        data.j.mul(gen),
    ];
    let mut gram = Mat::<Rat>::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let prod = basis[i].mul(&basis[j]);
            gram[(i, j)] = (0..4).map(|k| prod[(k, k)]).sum::<Rat>() / rat(2, 1);
        }
    }
    gram.to_int()
        .ok_or_else(|| Km3Error::NotAnOrder("endomorphism trace Gram is not integral".into()))
}
