//! Exact arithmetic for generalized Kummer surfaces.
//!
//! Everything a rank-3 Néron–Severi lattice with an order-3 symplectic action
//! determines is computed here from the single integer `ell` (the square of
//! the natural polarization on the K3 side): the lattice itself and its
//! discriminant form, principal-polarization tests, the quaternion order
//! acting as endomorphism ring, elliptic-point and structure counts on the
//! associated Shimura curve, and — for `ell <= 0` — the number of irreducible
//! components of the moduli space via reflection-group enumeration in
//! `U ⊕ A₂`, together with genus sizes of ternary lattices.
//!
//! All arithmetic is exact: `i64` integers and `i64`-backed rationals. No
//! floating point is used anywhere.

pub mod arith;
pub mod cli;
pub mod eisenstein;
pub mod error;
pub mod genus;
pub mod linalg;
pub mod nslat;
pub mod quat;
pub mod report;
pub mod selftest;
pub mod vinberg;

pub use error::Km3Error;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Km3Error>;

/// True iff `ell` is a valid polarization square: nonzero and `0` or `2 mod 6`.
pub fn valid_ell(ell: i64) -> bool {
    ell != 0 && matches!(ell.rem_euclid(6), 0 | 2)
}
