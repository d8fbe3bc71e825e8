//! Lattice tilings of `Z^n` by Lee spheres.
//!
//! The crate checks candidate tilings two ways: geometrically, by projecting
//! a Lee sphere into `Z^n / L` and looking for coset collisions, and
//! algebraically, through the integer group ring of the quotient group. On
//! top of that it computes the multiplicity profiles of `T^(2)T` and
//! `T^(4)T`, runs an exhaustive search for radius-2 arm sets over every
//! abelian group of order `2n^2 + 2n + 1`, and emits per-dimension
//! nonexistence certificates.
//!
//! Modules, bottom up:
//!
//! * [`lee`] - Lee metric, sphere enumeration and sphere sizes.
//! * [`group`] - finite abelian groups, factorization, Smith normal form,
//!   lattice quotients.
//! * [`ring`] - exact integer group rings `Z[G]`.
//! * [`tiling`] - the geometric and algebraic verifiers and the bridge
//!   between them.
//! * [`profile`] - multiplicity profiles and their counting identities.
//! * [`search`] - pruned backtracking search for arm sets.
//! * [`certify`] - nonexistence certificates for every `n >= 3`.

pub mod certify;
pub mod error;
pub mod group;
pub mod lee;
pub mod profile;
pub mod ring;
pub mod search;
pub mod tiling;

pub use error::{Error, Result};
pub use group::{AbelianGroup, GroupElement, LatticeBasis};
pub use lee::{LeeSphereSpec, LeeVector};
pub use ring::GroupRingElement;
pub use tiling::{TilingCandidate, VerificationReport};

/// `|S(n,2)| = 2n^2 + 2n + 1`, the order every radius-2 tiling group must have.
///
/// Returns `None` on overflow.
pub fn radius_two_order(n: u64) -> Option<u64> {
    n.checked_mul(n)?
        .checked_mul(2)?
        .checked_add(n.checked_mul(2)?)?
        .checked_add(1)
}
