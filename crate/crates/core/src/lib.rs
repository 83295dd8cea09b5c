//! Exact enumeration of rational curves on Grassmannians.
//!
//! Everything here revolves around the numbers `d(m, p; q)`: how many maps
//! `P^1 -> Grass(p, m+p)` of degree `q` meet `N = q(m+p) + mp` general
//! Schubert conditions.  The crate computes these numbers (and many refinements
//! of them) by five independent routes and cross-checks the routes against
//! each other:
//!
//! 1. saturated-chain counts in a graded poset of quantum Plucker indices
//!    ([`poset`]),
//! 2. a closed product/sum formula ([`closed::closed_degree`]),
//! 3. a windowed sum of Schubert's intersection numbers
//!    ([`closed::windowed_degree`]),
//! 4. residue sums over critical points built from roots of unity
//!    ([`residue`]),
//! 5. expansion of a hyperplane-class power in the small quantum cohomology
//!    ring ([`qring`]).
//!
//! Supporting cast: symmetric-function identities in the Chern basis
//! ([`symmetric`]), quantum Littlewood-Richardson tables ([`qring`]),
//! the quadric equations and Stanley-Reisner combinatorics of the variety of
//! polynomial matrices ([`variety`]), and a static pole-placement solver for
//! `Grass(2, 4)` ([`variety::static_compensators_grass24`]).
//!
//! All combinatorial results are exact (`BigInt` / `BigRational`); floating
//! point appears only where residue sums are evaluated numerically, and those
//! values are always reconciled against an exact route.

pub mod closed;
pub mod error;
pub mod linalg;
pub mod poset;
pub mod qring;
pub mod residue;
pub mod symmetric;
pub mod upoly;
pub mod variety;
pub mod verify;

pub use error::{Error, Result};
pub use poset::{Context, QIndex, WindowSeq};
